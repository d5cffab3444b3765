"""Array-backed traces shared by all samplers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

COMPUTED = -1
INITIAL = -2


@dataclass(frozen=True)
class TraceRecord:
    """One row of a trace.

    ``source`` is ``COMPUTED`` for a state found by a density evaluation,
    ``INITIAL`` for the starting state, and otherwise the row this state was
    copied from (always an earlier row).
    """

    index: int
    state: np.ndarray
    log_density: float
    rejected: bool
    source: int
    sequence: int
    group: int
    step: int
    stepsize: float

    @property
    def provenance(self) -> str:
        if self.source == COMPUTED:
            return "computed"
        if self.source == INITIAL:
            return "initial"
        return "copied"


@dataclass
class UpdateCounts:
    """Totals over every update, recorded or not."""

    updates: int = 0
    rejected: int = 0
    copied: int = 0
    evals: int = 0

    def add(self, other: "UpdateCounts") -> None:
        self.updates += other.updates
        self.rejected += other.rejected
        self.copied += other.copied
        self.evals += other.evals


@dataclass
class SequenceSummaries:
    """Per-sequence bookkeeping for schedule runs (columns are numpy arrays)."""

    stepsize: np.ndarray
    length: np.ndarray
    evals: np.ndarray
    copied: np.ndarray
    rejected: np.ndarray
    reversals: np.ndarray
    start_states: np.ndarray
    final_states: np.ndarray

    def __len__(self) -> int:
        return len(self.stepsize)

    @property
    def copy_fraction(self) -> np.ndarray:
        return self.copied / self.length


class Trace:
    """States produced by a run, plus update totals.

    When every update is kept, row 0 is the initial state and row ``k`` the
    state after update ``k``.  Thinned runs keep only some rows, so rates must
    come from :attr:`counts` rather than from the per-row flags.
    """

    def __init__(self, dim: int, capacity: int):
        self.dim = dim
        self.states = np.empty((capacity, dim))
        self.log_density = np.empty(capacity)
        self.rejected = np.zeros(capacity, dtype=bool)
        self.source = np.full(capacity, COMPUTED, dtype=np.int64)
        self.sequence = np.zeros(capacity, dtype=np.int64)
        self.group = np.zeros(capacity, dtype=np.int64)
        self.step = np.zeros(capacity, dtype=np.int64)
        self.stepsize = np.zeros(capacity)
        self.n = 0
        self.thinned = False
        self.counts = UpdateCounts()
        self.by_stepsize: dict[float, UpdateCounts] = {}
        self.sequences: SequenceSummaries | None = None
        self.notes: list[str] = []

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, k: int) -> TraceRecord:
        if k < 0:
            k += self.n
        if not 0 <= k < self.n:
            raise IndexError(k)
        return TraceRecord(
            index=k,
            state=self.states[k].copy(),
            log_density=float(self.log_density[k]),
            rejected=bool(self.rejected[k]),
            source=int(self.source[k]),
            sequence=int(self.sequence[k]),
            group=int(self.group[k]),
            step=int(self.step[k]),
            stepsize=float(self.stepsize[k]),
        )

    def counts_for(self, w: float) -> UpdateCounts:
        c = self.by_stepsize.get(w)
        if c is None:
            c = self.by_stepsize[w] = UpdateCounts()
        return c

    def finish(self) -> "Trace":
        """Trim storage to the rows written."""
        for name in ("states", "log_density", "rejected", "source",
                     "sequence", "group", "step", "stepsize"):
            setattr(self, name, getattr(self, name)[: self.n])
        return self

    @property
    def evals_cumulative(self) -> np.ndarray:
        return np.cumsum(self.source[: self.n] == COMPUTED)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[self.n - 1].copy()


def rejection_rate(counts: UpdateCounts) -> float:
    return counts.rejected / counts.updates if counts.updates else float("nan")


def copy_fraction(counts: UpdateCounts) -> float:
    return counts.copied / counts.updates if counts.updates else float("nan")
