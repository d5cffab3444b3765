"""Short-cut Metropolis: sequences of updates that skip badly scaled work.

A sequence of K = M*L Metropolis updates is split into M groups of L.  When
the number of rejections in a group falls outside [l, h], the group-start
state is restored and the direction in which the auxiliary variables are
visited is flipped.  Because each update map is its own inverse, walking back
over earlier updates reproduces states that were already computed, so they
are copied instead of recomputed.  After two such reversals every further
state is a copy.

Three executors are provided:

* :func:`shortcut_sequence` - the optimised engine, drawing auxiliaries
  lazily and copying revisited states.
* :func:`reference_sequence` - the unoptimised procedure on pre-drawn
  auxiliaries, recomputing every update; used as an oracle.
* :func:`final_state_replay` - keeps only the initial and current states
  and recreates a copied final state from a generator checkpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .metropolis import AuxiliaryPair, _initial, _t_met
from .rng import RandomStream
from .targets import Target
from .trace import COMPUTED, INITIAL, SequenceSummaries, Trace, UpdateCounts


@dataclass(frozen=True)
class SequenceSpec:
    """Tuning of one short-cut sequence.

    A group is "bad", and triggers a reversal, when its rejection count is
    below ``l`` or above ``h``.  ``h`` defaults to ``L - 1`` (reverse on a
    group of all rejections); ``l=0, h=L`` never reverses.
    """

    w: float
    L: int
    M: int
    l: int = 0
    h: int | None = None

    def __post_init__(self):
        if self.h is None:
            object.__setattr__(self, "h", self.L - 1)
        if not (self.w > 0 and np.isfinite(self.w)):
            raise ValueError(f"stepsize must be positive, got {self.w}")
        if self.L < 1 or self.M < 1:
            raise ValueError(f"L and M must be positive, got L={self.L}, M={self.M}")
        if not 0 <= self.l <= self.h <= self.L:
            raise ValueError(f"need 0 <= l <= h <= L, got l={self.l}, h={self.h}, L={self.L}")

    @property
    def K(self) -> int:
        return self.M * self.L

    @property
    def never_reverses(self) -> bool:
        return self.l == 0 and self.h == self.L

    def is_bad(self, n_rejected: int) -> bool:
        return n_rejected < self.l or n_rejected > self.h


@dataclass(frozen=True)
class ReversalEvent:
    group: int
    rejections: int
    direction_before: int
    direction_after: int


@dataclass
class SequenceTrace:
    """The K + 1 states of one sequence (initial state first) and its bookkeeping.

    Rows hold the state after every update, including updates of a bad group
    that is undone afterwards.  The state the sequence hands on is
    ``states[final_row]``, equal to ``group_end_states[-1]``.

    ``index[k]`` is the auxiliary index used by update ``k`` and
    ``position[k]`` the place of state ``k`` on the line of distinct states
    (0 is the initial state, positive positions come from indices visited
    upwards, negative ones from indices visited downwards).
    """

    spec: SequenceSpec
    states: np.ndarray
    log_density: np.ndarray
    rejected: np.ndarray
    source: np.ndarray
    group: np.ndarray
    index: np.ndarray
    position: np.ndarray
    group_end_states: np.ndarray
    reversals: list[ReversalEvent]
    n_evals: int
    final_row: int
    auxiliaries: list[AuxiliaryPair | None] | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def final_state(self) -> np.ndarray:
        # Not always the last row: a bad last group restores its start state.
        return self.states[self.final_row]

    @property
    def final_log_density(self) -> float:
        return float(self.log_density[self.final_row])

    @property
    def n_copied(self) -> int:
        return int(np.count_nonzero(self.source[1:] >= 0))

    @property
    def n_rejected(self) -> int:
        return int(np.count_nonzero(self.rejected[1:]))

    def reference_auxiliaries(self) -> list[AuxiliaryPair]:
        """Consumed auxiliaries by index; never-used slots get a placeholder."""
        if self.auxiliaries is None:
            raise ValueError("sequence was run without record_auxiliaries=True")
        dim = self.states.shape[1]
        filler = AuxiliaryPair(np.zeros(dim), 1.0)
        return [a if a is not None else filler for a in self.auxiliaries]

    def multiplicities(self) -> dict[int, int]:
        """Row of first occurrence -> number of rows holding that state."""
        counts: dict[int, int] = {}
        for k, src in enumerate(self.source):
            key = k if src < 0 else int(src)
            counts[key] = counts.get(key, 0) + 1
        return counts


def _empty(spec: SequenceSpec, dim: int):
    K = spec.K
    return dict(
        states=np.empty((K + 1, dim)),
        log_density=np.empty(K + 1),
        rejected=np.zeros(K + 1, dtype=bool),
        source=np.full(K + 1, COMPUTED, dtype=np.int64),
        group=np.full(K + 1, -1, dtype=np.int64),
        index=np.full(K + 1, -1, dtype=np.int64),
        position=np.zeros(K + 1, dtype=np.int64),
        group_end_states=np.empty((spec.M + 1, dim)),
    )


def shortcut_sequence(target: Target, x0, spec: SequenceSpec, stream: RandomStream,
                      logpi_x0: float | None = None,
                      record_auxiliaries: bool = False) -> SequenceTrace:
    """Run one short-cut sequence from ``x0``.

    The random start index and direction of the textbook procedure are fixed
    at 0 and +1.  Auxiliaries are drawn only when an update has to be
    computed, in order of first use; revisited states consume no randomness
    and no density evaluations.
    """
    if logpi_x0 is None:
        x0, logpi_x0 = _initial(target, x0)
    else:
        x0 = np.asarray(x0, dtype=np.float64)
    logpdf, dim = target.logpdf, target.dim
    w, L, M, lo_rej, hi_rej = spec.w, spec.L, spec.M, spec.l, spec.h
    K = spec.K
    a = _empty(spec, dim)
    states, logd, rejected, source = a["states"], a["log_density"], a["rejected"], a["source"]
    group_col, index_col, pos_col = a["group"], a["index"], a["position"]
    ends = a["group_end_states"]
    states[0] = x0
    logd[0] = logpi_x0
    source[0] = INITIAL
    ends[0] = x0
    aux: list[AuxiliaryPair | None] | None = [None] * K if record_auxiliaries else None

    # position -> row where the state at that position was computed
    pos_row = {0: 0}
    # edge (p, p+1) keyed by p -> rejection flag of the update crossing it
    edge_rej: dict[int, bool] = {}
    gaussians, expo = stream.gaussians, stream.next_exponential
    reversals: list[ReversalEvent] = []
    n_evals = 0
    p, i, s = 0, 0, 1
    row = 0
    for g in range(M):
        start_p, start_i = p, i
        n_rej = 0
        for j in range(L):
            if j:
                i = (i + s) % K
            q = p + s
            edge = p if s > 0 else q
            row += 1
            src = pos_row.get(q)
            if src is None:
                cur = pos_row[p]
                delta = gaussians(dim)
                e = expo()
                if aux is not None:
                    aux[i] = AuxiliaryPair(delta, e)
                x, lp, _, r = _t_met(logpdf, states[cur], logd[cur], w, delta, e)
                n_evals += 1
                states[row] = x
                logd[row] = lp
                pos_row[q] = row
                edge_rej[edge] = r
            else:
                r = edge_rej[edge]
                states[row] = states[src]
                logd[row] = logd[src]
                source[row] = src
            rejected[row] = r
            group_col[row] = g
            index_col[row] = i
            pos_col[row] = q
            n_rej += r
            p = q
        if n_rej < lo_rej or n_rej > hi_rej:
            reversals.append(ReversalEvent(g, n_rej, s, -s))
            p, i, s = start_p, start_i, -s
        ends[g + 1] = states[pos_row[p]]
        i = (i + s) % K
    return SequenceTrace(spec=spec, reversals=reversals, n_evals=n_evals,
                         final_row=pos_row[p], auxiliaries=aux, **a)


def reference_sequence(target: Target, x0, spec: SequenceSpec,
                       auxiliaries: Sequence[AuxiliaryPair],
                       logpi_x0: float | None = None) -> SequenceTrace:
    """Execute the short-cut procedure literally on ``K`` given auxiliaries.

    Keeps the index ``i`` and direction ``s``, applies the update map at every
    one of the K steps (no copying), and on a bad group restores ``x``, ``i``
    and the auxiliaries touched by the group before negating ``s``.
    """
    K = spec.K
    if len(auxiliaries) != K:
        raise ValueError(f"need exactly K={K} auxiliary pairs, got {len(auxiliaries)}")
    if logpi_x0 is None:
        x0, logpi_x0 = _initial(target, x0)
    else:
        x0 = np.asarray(x0, dtype=np.float64)
    logpdf, dim = target.logpdf, target.dim
    w, L = spec.w, spec.L
    deltas = [np.asarray(a.delta, dtype=np.float64) for a in auxiliaries]
    es = [float(a.e) for a in auxiliaries]
    out = _empty(spec, dim)
    states, logd = out["states"], out["log_density"]
    states[0] = x0
    logd[0] = logpi_x0
    out["source"][0] = INITIAL
    out["group_end_states"][0] = x0
    reversals = []
    x, lp = x0, logpi_x0
    i, s, p = 0, 1, 0
    row = 0
    for g in range(spec.M):
        x_start, lp_start, i_start, p_start = x, lp, i, p
        touched = {}
        n_rej = 0
        for j in range(L):
            if j:
                i = (i + s) % K
            touched.setdefault(i, (deltas[i], es[i]))
            x, lp, e_new, r = _t_met(logpdf, x, lp, w, deltas[i], es[i])
            if not r:
                deltas[i] = -deltas[i]
                es[i] = e_new
            p += s
            row += 1
            states[row] = x
            logd[row] = lp
            out["rejected"][row] = r
            out["group"][row] = g
            out["index"][row] = i
            out["position"][row] = p
            n_rej += r
        if spec.is_bad(n_rej):
            reversals.append(ReversalEvent(g, n_rej, s, -s))
            for k, (d, e) in touched.items():
                deltas[k], es[k] = d, e
            x, lp, i, p, s = x_start, lp_start, i_start, p_start, -s
        out["group_end_states"][g + 1] = x
        i = (i + s) % K
    final_row = row
    # the literal executor keeps no memo; find a row holding the final state
    if p != out["position"][row]:
        final_row = int(np.nonzero(out["position"] == p)[0][0])
    return SequenceTrace(spec=spec, reversals=reversals, n_evals=K,
                         final_row=final_row, **out)


class ReplayResult(NamedTuple):
    state: np.ndarray
    n_evals: int
    log_density: float


def final_state_replay(target: Target, x0, spec: SequenceSpec, stream: RandomStream,
                       logpi_x0: float | None = None) -> ReplayResult:
    """Final state of a short-cut sequence, holding at most two states.

    Only the initial state and the most recently computed state are kept.
    Revisits just move a position counter.  If the sequence ends on a state
    that is no longer held, the generator is rewound to the checkpoint taken
    when that side of the walk started and the needed updates are redone,
    after which the generator is put back where the sequence left it.  The
    draws consumed match :func:`shortcut_sequence` exactly.
    """
    if logpi_x0 is None:
        x0, logpi_x0 = _initial(target, x0)
    else:
        x0 = np.asarray(x0, dtype=np.float64)
    logpdf, dim = target.logpdf, target.dim
    w, L, K = spec.w, spec.L, spec.K
    checkpoints = {1: stream.checkpoint(), -1: None}
    held_x, held_lp, held_p = x0, logpi_x0, 0
    lowest = highest = 0
    edge_rej: dict[int, bool] = {}
    n_evals = 0
    p, i, s = 0, 0, 1
    for g in range(spec.M):
        start_p, start_i = p, i
        n_rej = 0
        for j in range(L):
            if j:
                i = (i + s) % K
            q = p + s
            edge = p if s > 0 else q
            if lowest <= q <= highest:
                r = edge_rej[edge]
            else:
                if held_p != p:
                    # a fresh side of the walk always starts from the initial state
                    assert p == 0
                    held_x, held_lp, held_p = x0, logpi_x0, 0
                    if checkpoints[s] is None:
                        checkpoints[s] = stream.checkpoint()
                delta = stream.gaussians(dim)
                held_x, held_lp, _, r = _t_met(logpdf, held_x, held_lp, w, delta,
                                               stream.next_exponential())
                n_evals += 1
                held_p = q
                edge_rej[edge] = r
                lowest, highest = min(lowest, q), max(highest, q)
            n_rej += r
            p = q
        if spec.is_bad(n_rej):
            p, i, s = start_p, start_i, -s
        i = (i + s) % K
    if p == held_p:
        return ReplayResult(held_x, n_evals, held_lp)
    if p == 0:
        return ReplayResult(x0, n_evals, logpi_x0)
    end = stream.checkpoint()
    direction = 1 if p > 0 else -1
    stream.restore(checkpoints[direction])
    x, lp = x0, logpi_x0
    for _ in range(abs(p)):
        delta = stream.gaussians(dim)
        x, lp, _, _ = _t_met(logpdf, x, lp, w, delta, stream.next_exponential())
        n_evals += 1
    stream.restore(end)
    return ReplayResult(x, n_evals, lp)


def run_schedule(target: Target, x0, schedule: Sequence[SequenceSpec], n_cycles: int,
                 stream: RandomStream, keep: str = "all") -> Trace:
    """Cycle through ``schedule`` ``n_cycles`` times, chaining final states.

    ``keep="all"`` records every update of every sequence (row 0 is ``x0``);
    ``keep="final"`` records only ``x0`` and the final state of each sequence.
    Per-sequence summaries are attached as ``trace.sequences``.
    """
    if not schedule:
        raise ValueError("schedule must contain at least one sequence")
    if keep not in ("all", "final"):
        raise ValueError(f"keep must be 'all' or 'final', got {keep!r}")
    if n_cycles < 0:
        raise ValueError("n_cycles must be >= 0")
    x, lp = _initial(target, x0)
    n_seq = n_cycles * len(schedule)
    per_cycle = sum(sp.K for sp in schedule)
    rows = 1 + (n_cycles * per_cycle if keep == "all" else n_seq)
    tr = Trace(target.dim, rows)
    tr.thinned = keep == "final"
    tr.states[0] = x
    tr.log_density[0] = lp
    tr.source[0] = INITIAL
    tr.n = 1
    summ = SequenceSummaries(
        stepsize=np.empty(n_seq), length=np.empty(n_seq, dtype=np.int64),
        evals=np.empty(n_seq, dtype=np.int64), copied=np.empty(n_seq, dtype=np.int64),
        rejected=np.empty(n_seq, dtype=np.int64), reversals=np.empty(n_seq, dtype=np.int64),
        start_states=np.empty((n_seq, target.dim)), final_states=np.empty((n_seq, target.dim)),
    )
    held_row = 0  # global row holding the current state
    for seq in range(n_seq):
        spec = schedule[seq % len(schedule)]
        st = shortcut_sequence(target, x, spec, stream, logpi_x0=lp)
        summ.stepsize[seq] = spec.w
        summ.length[seq] = spec.K
        summ.evals[seq] = st.n_evals
        summ.copied[seq] = st.n_copied
        summ.rejected[seq] = st.n_rejected
        summ.reversals[seq] = len(st.reversals)
        summ.start_states[seq] = x
        c = tr.counts_for(spec.w)
        c.updates += spec.K
        c.rejected += st.n_rejected
        c.copied += st.n_copied
        c.evals += st.n_evals
        if keep == "all":
            base = tr.n - 1
            sl = slice(tr.n, tr.n + spec.K)
            tr.states[sl] = st.states[1:]
            tr.log_density[sl] = st.log_density[1:]
            tr.rejected[sl] = st.rejected[1:]
            src = st.source[1:]
            tr.source[sl] = np.where(src < 0, COMPUTED,
                                     np.where(src == 0, held_row, src + base))
            tr.sequence[sl] = seq
            tr.group[sl] = st.group[1:]
            tr.step[sl] = np.arange(1, spec.K + 1)
            tr.stepsize[sl] = spec.w
            tr.n += spec.K
            held_row = held_row if st.final_row == 0 else base + st.final_row
        x = st.final_state.copy()
        lp = st.final_log_density
        summ.final_states[seq] = x
        if keep == "final":
            k = tr.n
            tr.states[k] = x
            tr.log_density[k] = lp
            tr.rejected[k] = st.rejected[st.final_row]
            tr.sequence[k] = seq
            tr.step[k] = spec.K
            tr.stepsize[k] = spec.w
            tr.n += 1
    for c in tr.by_stepsize.values():
        tr.counts.add(c)
    tr.sequences = summ
    return tr.finish()
