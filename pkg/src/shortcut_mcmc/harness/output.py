"""Trace CSV and JSON emission; every file is written atomically."""

from __future__ import annotations

import json
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable

import numpy as np

from ..trace import COMPUTED, Trace

TRACE_COLUMNS = ["seq", "group", "step", "provenance", "src", "rejected", "w", "evals_cum"]


class OutputError(OSError):
    pass


@contextmanager
def atomic_open(path: str | Path):
    """Open a temp file next to ``path`` for writing; rename over it on success."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror}") from exc
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            yield fh
        os.replace(tmp, path)
    except OSError as exc:
        os.unlink(tmp)
        raise OutputError(f"cannot write {path}: {exc.strerror}") from exc
    except BaseException:
        os.unlink(tmp)
        raise


def write_json(path: str | Path, obj) -> None:
    with atomic_open(path) as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def write_csv(path: str | Path, header: list[str], rows: Iterable[Iterable]) -> None:
    with atomic_open(path) as fh:
        fh.write(",".join(header) + "\n")
        for r in rows:
            fh.write(",".join(_fmt(v) for v in r) + "\n")


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    return str(v)


def emit_trace(trace: Trace, path: str | Path, mode: str = "full") -> Path:
    """Write ``trace`` as CSV.

    ``full`` writes one row per trace row.  ``deduplicated`` drops copied rows
    and adds a ``multiplicity`` column counting how many full rows each
    remaining row stands for.  Floats carry 17 significant digits.
    """
    if mode not in ("full", "deduplicated"):
        raise ValueError(f"mode must be 'full' or 'deduplicated', got {mode!r}")
    n, d = len(trace), trace.dim
    source = trace.source[:n]
    copied = source >= 0
    evals_cum = np.cumsum(source == COMPUTED)
    keep = np.arange(n) if mode == "full" else np.nonzero(~copied)[0]
    header = TRACE_COLUMNS + [f"c{j}" for j in range(d)]
    if mode == "deduplicated":
        mult = np.ones(n, dtype=np.int64)
        np.add.at(mult, source[copied], 1)
        header.append("multiplicity")

    def rows():
        for k in keep:
            src = source[k]
            row = [int(trace.sequence[k]), int(trace.group[k]), int(trace.step[k]),
                   "P" if src >= 0 else "C", int(src) if src >= 0 else "",
                   bool(trace.rejected[k]), float(trace.stepsize[k]), int(evals_cum[k])]
            row.extend(float(v) for v in trace.states[k])
            if mode == "deduplicated":
                row.append(int(mult[k]))
            yield row

    write_csv(path, header, rows())
    return Path(path)


def read_trace_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Read a trace CSV back into columns (states as an (n, d) array)."""
    path = Path(path)
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        lines = [ln.rstrip("\n").split(",") for ln in fh]
    cols = {h: [ln[j] for ln in lines] for j, h in enumerate(header)}
    out = {
        "seq": np.array(cols["seq"], dtype=np.int64),
        "group": np.array(cols["group"], dtype=np.int64),
        "step": np.array(cols["step"], dtype=np.int64),
        "provenance": np.array(cols["provenance"]),
        "src": np.array([int(s) if s else -1 for s in cols["src"]], dtype=np.int64),
        "rejected": np.array(cols["rejected"], dtype=np.int64).astype(bool),
        "w": np.array(cols["w"], dtype=np.float64),
        "evals_cum": np.array(cols["evals_cum"], dtype=np.int64),
    }
    coords = [h for h in header if h.startswith("c") and h[1:].isdigit()]
    out["states"] = np.array([cols[c] for c in coords], dtype=np.float64).T.reshape(len(lines), len(coords))
    if "multiplicity" in cols:
        out["multiplicity"] = np.array(cols["multiplicity"], dtype=np.int64)
    return out


__all__ = ["emit_trace", "read_trace_csv", "write_csv", "write_json", "atomic_open",
           "OutputError"]
