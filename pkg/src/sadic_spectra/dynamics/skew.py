"""Torus component of the skew product R(π(t), x) = (π(φ_i t), S(x)).

``skew_step`` is the literal map t_c -> frac(e_c t_c). It is exact on
``Fraction`` coordinates and lossy on floats: iterating an integer expansion
in double precision empties the mantissa after ~53 doublings.

``sample_torus_orbits`` therefore samples t together with its whole orbit.
Given the realised directive, t is drawn as a mixed-radix expansion

    t = Σ_n d_n / (e_1 e_2 ⋯ e_n),    d_n uniform in {0, ..., e_n - 1},

which is exactly uniform on [0,1), and every orbit point
t_n = Σ_{m>n} d_m / (e_{n+1} ⋯ e_m) is rebuilt backwards with
t_{n-1} = (d_n + t_n) / e_n, starting from a fresh uniform tail t_N.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
import numpy.typing as npt

from sadic_spectra.core.substitution import BlockSubstitution
from sadic_spectra.errors import DimensionMismatchError

logger = logging.getLogger(__name__)

Coordinate = float | Fraction


@dataclass(frozen=True, slots=True)
class SkewOrbitState:
    """Torus point, number of steps taken and the current directive index."""

    torus_point: tuple[Coordinate, ...]
    step: int = 0
    directive_index: int = 0

    def __post_init__(self) -> None:
        for c in self.torus_point:
            if not 0 <= c < 1:
                raise ValueError(f"torus point {self.torus_point} is outside [0,1)^d")

    @classmethod
    def at(cls, t: Sequence[Coordinate], directive_index: int = 0) -> SkewOrbitState:
        """Start an orbit at t reduced into [0,1)^d."""
        return cls(torus_point=tuple(c % 1 for c in t), directive_index=directive_index)


def skew_step(
    state: SkewOrbitState,
    sub: BlockSubstitution,
    next_index: int | None = None,
) -> SkewOrbitState:
    """Apply φ_sub to the torus point and advance the step counter.

    ``next_index`` is the directive symbol that will act next; it defaults
    to the current one.
    """
    if len(state.torus_point) != sub.dim:
        raise DimensionMismatchError(
            f"torus point has {len(state.torus_point)} coordinates, '{sub.name}' has dim {sub.dim}"
        )
    point = tuple((e * c) % 1 for e, c in zip(sub.expansion, state.torus_point, strict=True))
    return replace(
        state,
        torus_point=point,
        step=state.step + 1,
        directive_index=state.directive_index if next_index is None else next_index,
    )


# ═══════════════════════════════════════════════════════════════════════════════
# Batched orbit sampling
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True, slots=True)
class TorusSampler:
    """Seed and count of uniformly drawn initial torus points."""

    seed: int
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"t-sample count must be positive, got {self.count}")
        if self.seed < 0:
            raise ValueError(f"t-sample seed must be nonnegative, got {self.seed}")

    def generator(self, attempt: int = 0) -> np.random.Generator:
        """Independent stream per resampling attempt."""
        return np.random.default_rng([self.seed, attempt])


def expansion_schedule(
    subs: Sequence[BlockSubstitution], symbols: Sequence[int]
) -> npt.NDArray[np.int64]:
    """Row n holds the expansion of the substitution applied at step n+1."""
    table = np.array([sub.expansion for sub in subs], dtype=np.int64)
    return table[np.asarray(symbols, dtype=np.int64) - 1]


def sample_torus_orbits(
    schedule: npt.NDArray[np.int64],
    sampler: TorusSampler,
    attempt: int = 0,
) -> npt.NDArray[np.float64]:
    """Orbits t_0, ..., t_{N-1} of ``sampler.count`` uniform points.

    Args:
        schedule: Shape (N, d); row n is the diagonal of φ_{i_{n+1}}.
        sampler: Seed and number of independent points M.
        attempt: Resampling round; each round draws an independent stream.

    Returns:
        Array of shape (N, M, d); entry [n] is the torus point at which the
        (n+1)-th cocycle factor is evaluated.
    """
    steps, dim = schedule.shape
    rng = sampler.generator(attempt)
    m = sampler.count
    digits = np.floor(rng.random((steps, m, dim)) * schedule[:, None, :]).astype(np.float64)
    orbit = np.empty((steps, m, dim), dtype=np.float64)
    tail = rng.random((m, dim))
    for n in range(steps - 1, -1, -1):
        tail = (digits[n] + tail) / schedule[n]
        orbit[n] = tail
    # rounding can land exactly on 1.0 when the digit is e - 1
    np.minimum(orbit, np.nextafter(1.0, 0.0), out=orbit)
    logger.debug("Sampled %d torus orbits of length %d in dimension %d", m, steps, dim)
    return orbit


__all__ = [
    "Coordinate",
    "SkewOrbitState",
    "TorusSampler",
    "expansion_schedule",
    "sample_torus_orbits",
    "skew_step",
]
