"""Seedable random stream with bit-exact checkpoint and restore.

Raw bits come from numpy's Philox4x64 counter-based generator.  Uniforms and
Gaussians are served from read-only blocks that are replaced (never mutated)
on refill, so a checkpoint only needs the generator state, references to the
current blocks and the read positions.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

GENERATOR_ID = "philox4x64-block"
GENERATOR_VERSION = 1

_BLOCK = 4096
_TWO_M52 = 2.0 ** -52


def raw_to_unit(raw: np.ndarray) -> np.ndarray:
    """Map 64-bit words to (0, 1) as (n + 0.5) / 2**52 on their top 52 bits.

    n + 0.5 is exact in a double, so both endpoints are excluded; with 53
    bits the largest n would round up to exactly 1.
    """
    return ((raw >> np.uint64(12)).astype(np.float64) + 0.5) * _TWO_M52


class CheckpointError(ValueError):
    """Raised when a checkpoint cannot be restored into a stream."""


@dataclass(frozen=True)
class RngCheckpoint:
    generator: str
    version: int
    bit_state: dict[str, Any]
    ublock: list[float]
    upos: int
    gblock: np.ndarray
    gpos: int
    n_uniform: int
    n_gaussian: int


class RandomStream:
    """Single-owner stream of uniforms on (0, 1) and standard normal draws.

    The full draw sequence is a function of the seed and of the order of
    calls.  Uniforms and Gaussians come from separate blocks, so the number
    of raw bits consumed per Gaussian is not part of the contract; replay
    relies on whole-state checkpoints.
    """

    def __init__(self, seed: int):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self._gen = np.random.Generator(np.random.Philox(seed))
        self._ublock: list[float] = []
        self._upos = 0
        self._gblock = np.empty(0)
        self._gpos = 0
        self.n_uniform = 0
        self.n_gaussian = 0

    def _refill_uniform(self) -> None:
        self._ublock = raw_to_unit(self._gen.bit_generator.random_raw(_BLOCK)).tolist()
        self._upos = 0

    def _refill_gaussian(self) -> None:
        block = self._gen.standard_normal(_BLOCK)
        block.flags.writeable = False
        self._gblock = block
        self._gpos = 0

    def next_uniform(self) -> float:
        """Return a uniform draw strictly inside (0, 1)."""
        if self._upos >= len(self._ublock):
            self._refill_uniform()
        u = self._ublock[self._upos]
        self._upos += 1
        self.n_uniform += 1
        return u

    def next_exponential(self) -> float:
        """Return ``-log(u)``, an Exp(1) draw that is finite and positive."""
        return -math.log(self.next_uniform())

    def next_gaussian(self) -> float:
        """Return one standard normal draw."""
        if self._gpos >= len(self._gblock):
            self._refill_gaussian()
        z = self._gblock[self._gpos]
        self._gpos += 1
        self.n_gaussian += 1
        return float(z)

    def gaussians(self, n: int) -> np.ndarray:
        """Return ``n`` standard normal draws as a read-only array.

        Equivalent to ``n`` successive calls of :meth:`next_gaussian`.
        """
        end = self._gpos + n
        if end <= len(self._gblock):
            out = self._gblock[self._gpos:end]
            self._gpos = end
        else:
            parts = [self._gblock[self._gpos:]]
            need = n - len(parts[0])
            while need > 0:
                self._refill_gaussian()
                take = min(need, _BLOCK)
                parts.append(self._gblock[:take])
                self._gpos = take
                need -= take
            out = np.concatenate(parts)
            out.flags.writeable = False
        self.n_gaussian += n
        return out

    def checkpoint(self) -> RngCheckpoint:
        return RngCheckpoint(
            generator=GENERATOR_ID,
            version=GENERATOR_VERSION,
            bit_state=copy.deepcopy(self._gen.bit_generator.state),
            ublock=self._ublock,
            upos=self._upos,
            gblock=self._gblock,
            gpos=self._gpos,
            n_uniform=self.n_uniform,
            n_gaussian=self.n_gaussian,
        )

    def restore(self, cp: RngCheckpoint) -> None:
        if not isinstance(cp, RngCheckpoint):
            raise CheckpointError(f"not a checkpoint: {type(cp).__name__}")
        if cp.generator != GENERATOR_ID or cp.version != GENERATOR_VERSION:
            raise CheckpointError(
                f"checkpoint from {cp.generator} v{cp.version} is incompatible "
                f"with {GENERATOR_ID} v{GENERATOR_VERSION}"
            )
        self._gen.bit_generator.state = copy.deepcopy(cp.bit_state)
        # Blocks are never mutated in place, sharing them is safe.
        self._ublock = cp.ublock
        self._upos = cp.upos
        self._gblock = cp.gblock
        self._gpos = cp.gpos
        self.n_uniform = cp.n_uniform
        self.n_gaussian = cp.n_gaussian


def new_stream(seed: int) -> RandomStream:
    return RandomStream(seed)
