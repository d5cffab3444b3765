# %% [markdown]
# Comparing methods on the three targets
#
# `reproduce` runs every method of a preset with seeds base + index and writes
# a table in the column order states, rejection rate, tau, mean, SE, next to the
# published values, plus copy fractions and plot data.  scale=0.05 takes a few
# seconds per preset; scale=1 is the full length (about a minute for the first
# two presets and ten for the funnel).

# %%
import sys

from shortcut_mcmc.harness import reproduce

scale = float(sys.argv[1]) if len(sys.argv) > 1 else 0.05
for preset in ("mixture1d", "mvgauss7", "funnel"):
    report = reproduce(preset, scale=scale, out_dir=f"out/{preset}")
    print(f"\n{preset} (scale {scale})")
    print(f"{'method':28s} {'states':>9s} {'rej':>6s} {'tau':>8s} {'mean':>8s} {'se':>7s}   published")
    for row in report.table():
        pub = [row.get(f"paper_{c}") for c in ("rejection_rate", "estimated_mean", "standard_error")]
        print(f"{row['method']:28s} {row['states']:9d} {row['rejection_rate']:6.3f} "
              f"{row['autocorrelation_time']:8.1f} {row['estimated_mean']:8.3f} "
              f"{row['standard_error']:7.3f}   rej {pub[0]}, mean {pub[1]}, se {pub[2]}")
    for row in report.copy_fraction_table():
        print(f"  {row['name']}: w={row['w']:g} copy fraction {row['copy_fraction']:.2f}")
