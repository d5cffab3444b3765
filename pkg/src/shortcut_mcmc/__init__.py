"""Short-cut Metropolis sampling with baselines and diagnostics."""

from .metropolis import (AuxiliaryPair, StepOutcome, run_naive_adaptive, run_standard,
                         standard_update, t_met_apply)
from .rng import RandomStream, RngCheckpoint, new_stream
from .shortcut import (SequenceSpec, SequenceTrace, final_state_replay, reference_sequence,
                       run_schedule, shortcut_sequence)
from .targets import Target, get_target, make_diag_gaussian, make_funnel, make_mixture1d, make_mvgauss7
from .trace import Trace, TraceRecord

__all__ = [
    "AuxiliaryPair", "RandomStream", "RngCheckpoint", "SequenceSpec", "SequenceTrace",
    "StepOutcome", "Target", "Trace", "TraceRecord", "final_state_replay", "get_target",
    "make_diag_gaussian", "make_funnel", "make_mixture1d", "make_mvgauss7", "new_stream",
    "reference_sequence", "run_naive_adaptive", "run_schedule", "run_standard",
    "shortcut_sequence", "standard_update", "t_met_apply",
]
