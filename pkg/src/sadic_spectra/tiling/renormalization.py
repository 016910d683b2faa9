"""Empirical check of the renormalization identity for pair correlations.

With the fine patch obtained by substituting the coarse patch once by ρ = ρ_{i_k}:

    ν_fine_{i,j}(z) = (1/det φ) Σ_{m,n} Σ_{x ∈ T_{i,m}} Σ_{y ∈ T_{j,n}}
                          ν_coarse_{m,n}((z + x - y) / φ)

where only terms with (z + x - y) / φ ∈ Z^d contribute. The pair is produced
by forward substitution, so no patch is ever de-substituted.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from sadic_spectra.core.patch import DEFAULT_MAX_CELLS, Patch, apply_substitution, supertile
from sadic_spectra.core.substitution import BlockSubstitution
from sadic_spectra.errors import LevelOutOfRangeError
from sadic_spectra.tiling.correlations import PairCorrelationTable, pair_correlations

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class RenormalizationCheck:
    """Worst deviation between both sides and where it occurs."""

    residual: float
    level: int
    radius: int
    worst_pair: tuple[int, int]
    worst_displacement: tuple[int, ...]


def renormalization_pair(
    subs: Sequence[BlockSubstitution],
    word: Sequence[int],
    seed_letter: int,
    level: int,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> tuple[Patch, Patch]:
    """(fine, coarse): coarse = supertile(word[1 : level+1]), fine = ρ_{word[0]}(coarse).

    Raises:
        LevelOutOfRangeError: ``word`` has fewer than level + 1 symbols.
    """
    if level < 0 or len(word) < level + 1:
        raise LevelOutOfRangeError(
            f"level {level} needs a directive word of length >= {level + 1}, got {len(word)}",
            level=level,
            word_length=len(word),
        )
    coarse = supertile(subs, word[1 : level + 1], seed_letter, max_cells=max_cells)
    fine = apply_substitution(subs[word[0] - 1], coarse, word[0])
    return fine, coarse


def coarse_radius(sub: BlockSubstitution, radius: int) -> int:
    """Smallest table radius covering every (z + x - y) / φ with ‖z‖∞ ≤ radius."""
    return max(math.ceil((radius + e - 1) / e) for e in sub.expansion)


def renormalization_rhs(
    sub: BlockSubstitution,
    coarse: PairCorrelationTable,
    radius: int,
) -> npt.NDArray[np.float64]:
    """Right-hand side on ‖z‖∞ ≤ radius, laid out like ``PairCorrelationTable.counts``."""
    needed = coarse_radius(sub, radius)
    if coarse.radius < needed:
        raise ValueError(f"coarse table radius {coarse.radius} < required {needed}")

    n = sub.alphabet_size
    d = sub.dim
    side = 2 * radius + 1
    expansion = np.array(sub.expansion, dtype=np.int64)
    grid = np.array(list(itertools.product(range(-radius, radius + 1), repeat=d)), dtype=np.int64)
    freqs = coarse.frequencies
    rhs = np.zeros((n, n, side**d), dtype=np.float64)

    labelled = [
        (m, f, int(rule[f])) for m, rule in enumerate(sub.rules, start=1) for f in sub.digits()
    ]
    for (m, x, i), (p, y, j) in itertools.product(labelled, repeat=2):
        shifted = grid + np.array(x, dtype=np.int64) - np.array(y, dtype=np.int64)
        divisible = np.all(shifted % expansion == 0, axis=1)
        parent = shifted[divisible] // expansion + coarse.radius
        values = freqs[(m - 1, p - 1, *parent.T)]
        rhs[i - 1, j - 1, divisible] += values

    rhs /= sub.det_phi
    return rhs.reshape((n, n) + (side,) * d)


def check_renormalization(
    subs: Sequence[BlockSubstitution],
    word: Sequence[int],
    seed_letter: int,
    level: int,
    radius: int,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> RenormalizationCheck:
    """Compare both sides of the identity on the level/level+1 patch pair."""
    fine, coarse = renormalization_pair(subs, word, seed_letter, level, max_cells=max_cells)
    sub = subs[word[0] - 1]
    n = sub.alphabet_size
    fine_table = pair_correlations(fine, radius, n)
    coarse_table = pair_correlations(coarse, coarse_radius(sub, radius), n)

    deviation = np.abs(fine_table.frequencies - renormalization_rhs(sub, coarse_table, radius))
    worst = np.unravel_index(int(np.argmax(deviation)), deviation.shape)
    check = RenormalizationCheck(
        residual=float(deviation[worst]),
        level=level,
        radius=radius,
        worst_pair=(int(worst[0]) + 1, int(worst[1]) + 1),
        worst_displacement=tuple(int(c) - radius for c in worst[2:]),
    )
    logger.info(
        "Renormalization residual %.3e at level %d, R=%d (pair %s, z=%s)",
        check.residual,
        level,
        radius,
        check.worst_pair,
        check.worst_displacement,
    )
    return check


def renormalization_residual(
    subs: Sequence[BlockSubstitution],
    word: Sequence[int],
    seed_letter: int,
    level: int,
    radius: int,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> float:
    """max over (i, j, ‖z‖∞ ≤ R) of |ν_fine - RHS(ν_coarse)|."""
    return check_renormalization(
        subs, word, seed_letter, level, radius, max_cells=max_cells
    ).residual


__all__ = [
    "RenormalizationCheck",
    "check_renormalization",
    "coarse_radius",
    "renormalization_pair",
    "renormalization_residual",
    "renormalization_rhs",
]
