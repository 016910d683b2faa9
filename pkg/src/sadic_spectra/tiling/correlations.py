"""Empirical pair correlations ν_{i,j}(z) = freq{x : cells[x] = i, cells[x+z] = j}.

Reference points x range over the eroded window Π[R, extent_c - R), so every
displaced point x + z with ‖z‖∞ ≤ R stays inside the patch. Frequencies are
normalized by the eroded window volume.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from sadic_spectra.core.patch import Patch
from sadic_spectra.errors import RadiusTooLargeError

logger = logging.getLogger(__name__)

Displacement = tuple[int, ...]


@dataclass(frozen=True, slots=True, eq=False)
class PairCorrelationTable:
    """Counts of labeled pairs for every displacement with ‖z‖∞ ≤ radius.

    ``counts[i-1, j-1, z_1 + R, ..., z_d + R]`` is the number of reference
    points x in the eroded window with cells[x] = i and cells[x+z] = j.
    """

    radius: int
    alphabet_size: int
    window_volume: int
    counts: npt.NDArray[np.int64]

    @property
    def dim(self) -> int:
        return self.counts.ndim - 2

    @property
    def frequencies(self) -> npt.NDArray[np.float64]:
        return self.counts / self.window_volume

    def _index(self, i: int, j: int, z: Displacement) -> tuple[int, ...]:
        if len(z) != self.dim or any(abs(c) > self.radius for c in z):
            raise KeyError(f"displacement {z} outside the table of radius {self.radius}")
        return (i - 1, j - 1, *(c + self.radius for c in z))

    def count(self, i: int, j: int, z: Displacement) -> int:
        return int(self.counts[self._index(i, j, z)])

    def frequency(self, i: int, j: int, z: Displacement) -> float:
        return self.count(i, j, z) / self.window_volume

    def displacements(self) -> Iterator[Displacement]:
        """Every z in [-R, R]^d in row-major order."""
        return itertools.product(range(-self.radius, self.radius + 1), repeat=self.dim)

    def rows(self) -> Iterator[tuple[int, int, Displacement, int, float]]:
        """(i, j, z, count, freq) for every entry, i and j outermost."""
        for i in range(1, self.alphabet_size + 1):
            for j in range(1, self.alphabet_size + 1):
                for z in self.displacements():
                    c = self.count(i, j, z)
                    yield i, j, z, c, c / self.window_volume


def check_radius(patch: Patch, radius: int) -> None:
    """Require 0 <= R < min extent / 4."""
    limit = min(patch.extent) / 4
    if radius < 0 or not radius < limit:
        raise RadiusTooLargeError(
            f"correlation radius {radius} must satisfy 0 <= R < min extent / 4 = {limit}",
            radius=radius,
            extent=list(patch.extent),
        )


def pair_correlations(
    patch: Patch,
    radius: int,
    alphabet_size: int,
    *,
    threads: int = 1,
) -> PairCorrelationTable:
    """Count labeled pairs over the eroded window for all ‖z‖∞ ≤ R.

    The table is alphabet_size × alphabet_size even when a letter is absent.

    Raises:
        ValueError: a label lies outside 1..alphabet_size.
        RadiusTooLargeError: R >= min extent / 4.
    """
    check_radius(patch, radius)
    patch.check_alphabet(alphabet_size)
    n = alphabet_size
    cells = patch.cells - 1
    window = tuple(slice(radius, e - radius) for e in patch.extent)
    reference = cells[window].ravel() * n
    volume = int(reference.size)
    side = 2 * radius + 1

    def count_shift(z: Displacement) -> npt.NDArray[np.int64]:
        shifted = tuple(slice(radius + c, e - radius + c) for c, e in zip(z, patch.extent))
        codes = reference + cells[shifted].ravel()
        return np.bincount(codes, minlength=n * n)[: n * n].reshape(n, n)

    shifts = list(itertools.product(range(-radius, radius + 1), repeat=patch.dim))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            tables = list(pool.map(count_shift, shifts))
    else:
        tables = [count_shift(z) for z in shifts]

    counts = np.stack(tables, axis=-1).reshape((n, n) + (side,) * patch.dim)
    logger.debug(
        "Pair correlations: R=%d, %d displacements, window volume %d", radius, len(shifts), volume
    )
    return PairCorrelationTable(
        radius=radius,
        alphabet_size=n,
        window_volume=volume,
        counts=counts.astype(np.int64),
    )


__all__ = ["Displacement", "PairCorrelationTable", "check_radius", "pair_correlations"]
