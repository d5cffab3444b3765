# %% [markdown]
# One short-cut sequence, update by update
#
# Groups of L updates; a group with too many (or too few) rejections sends the
# walk back the way it came, and those states are copied rather than recomputed.

# %%
import numpy as np

from shortcut_mcmc import (SequenceSpec, final_state_replay, make_mixture1d, new_stream,
                           reference_sequence, shortcut_sequence)

target = make_mixture1d()
spec = SequenceSpec(w=20.0, L=5, M=18, l=0, h=4)
seq = shortcut_sequence(target, [10.0], spec, new_stream(3), record_auxiliaries=True)

print(f"K={spec.K} updates, {seq.n_evals} density evaluations, {seq.n_copied} copied")
for ev in seq.reversals[:4]:
    print(f"  group {ev.group}: {ev.rejections} rejections, direction {ev.direction_before:+d} -> {ev.direction_after:+d}")

# %%
for k in range(1, 31):
    kind = "copy of row %d" % seq.source[k] if seq.source[k] >= 0 else "computed"
    print(f"{k:3d}  i={seq.index[k]:3d}  x={seq.states[k, 0]:9.4f}  rej={int(seq.rejected[k])}  {kind}")

# %% The literal procedure, recomputing every update, visits the same states
ref = reference_sequence(target, [10.0], spec, seq.reference_auxiliaries())
print("same walk:", np.array_equal(seq.index, ref.index),
      "largest state difference:", np.abs(seq.states - ref.states).max())

# %% Keeping only two states, the final state is recovered from a generator checkpoint
rep = final_state_replay(target, [10.0], spec, new_stream(3))
print("replay final state:", rep.state, "engine:", seq.final_state, "evaluations:", rep.n_evals)
