"""Finite-window diffraction intensities of weighted patches.

    I(t) = |Σ_x w_{cells[x]} exp(-2πi⟨t, x⟩)|² / Π extent

On the DFT-aligned grid t = m / extent the amplitudes are one ``fftn``;
anywhere else the sum is evaluated directly, one axis at a time.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt

from sadic_spectra.core.patch import Patch
from sadic_spectra.errors import DimensionMismatchError, ResourceCapExceededError

logger = logging.getLogger(__name__)

DEFAULT_MAX_T_GRID = 1 << 24
_CHUNK_T = 256


class DiffractionMethod(str, Enum):
    DIRECT = "direct"
    DFT = "dft"


@dataclass(frozen=True, slots=True, eq=False)
class DiffractionGrid:
    """Intensities on a grid of wave vectors.

    ``t_grid`` has shape (K, d) and ``intensity`` shape (K,).
    """

    t_grid: npt.NDArray[np.float64]
    intensity: npt.NDArray[np.float64]
    weights: tuple[complex, ...]
    extent: tuple[int, ...]
    method: DiffractionMethod

    def rows(self) -> list[tuple[float, ...]]:
        return [(*(float(c) for c in t), float(i)) for t, i in zip(self.t_grid, self.intensity)]


def _weighted_cells(patch: Patch, weights: Sequence[complex]) -> npt.NDArray[np.complex128]:
    table = np.asarray(weights, dtype=np.complex128)
    if int(patch.cells.max()) > table.size:
        raise DimensionMismatchError(
            f"patch uses letter {int(patch.cells.max())} but only {table.size} weights were given"
        )
    return table[patch.cells - 1]


def _check_cap(requested: int, max_t_grid: int) -> None:
    if requested > max_t_grid:
        raise ResourceCapExceededError("t-grid points", requested, max_t_grid)


def diffraction_intensity(
    patch: Patch,
    weights: Sequence[complex],
    t_grid: npt.ArrayLike,
    *,
    max_t_grid: int = DEFAULT_MAX_T_GRID,
) -> DiffractionGrid:
    """Direct phase sums at arbitrary wave vectors.

    Raises:
        ResourceCapExceededError: more than ``max_t_grid`` wave vectors.
    """
    w = _weighted_cells(patch, weights)
    points = np.asarray(t_grid, dtype=np.float64).reshape(-1, patch.dim)
    _check_cap(points.shape[0], max_t_grid)

    intensity = np.empty(points.shape[0], dtype=np.float64)
    for start in range(0, points.shape[0], _CHUNK_T):
        chunk = points[start : start + _CHUNK_T]
        # contract axis by axis: Σ_x w(x) Π_c exp(-2πi t_c x_c)
        factors = [
            np.exp(-2j * np.pi * np.outer(chunk[:, c], np.arange(n)))
            for c, n in enumerate(patch.extent)
        ]
        amplitude = np.tensordot(factors[0], w, axes=([1], [0]))
        for factor in factors[1:]:
            amplitude = np.einsum("kb...,kb->k...", amplitude, factor)
        intensity[start : start + _CHUNK_T] = np.abs(amplitude) ** 2 / patch.volume

    return DiffractionGrid(
        t_grid=points,
        intensity=intensity,
        weights=tuple(complex(v) for v in weights),
        extent=patch.extent,
        method=DiffractionMethod.DIRECT,
    )


def dft_grid(extent: Sequence[int]) -> npt.NDArray[np.float64]:
    """All t = m / extent with 0 <= m_c < extent_c, row-major; shape (Π extent, d)."""
    axes = [np.arange(n, dtype=np.float64) / n for n in extent]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def dft_grid_intensity(
    patch: Patch,
    weights: Sequence[complex],
    *,
    max_t_grid: int = DEFAULT_MAX_T_GRID,
) -> DiffractionGrid:
    """Intensities on the full DFT-aligned grid via one FFT.

    The mean over the grid equals Σ_x |w(x)|² / Π extent (Parseval).
    """
    _check_cap(patch.volume, max_t_grid)
    w = _weighted_cells(patch, weights)
    amplitude = np.fft.fftn(w)
    intensity = (np.abs(amplitude) ** 2 / patch.volume).ravel()
    logger.debug("DFT grid intensity on extent %s", patch.extent)
    return DiffractionGrid(
        t_grid=dft_grid(patch.extent),
        intensity=intensity,
        weights=tuple(complex(v) for v in weights),
        extent=patch.extent,
        method=DiffractionMethod.DFT,
    )


__all__ = [
    "DEFAULT_MAX_T_GRID",
    "DiffractionGrid",
    "DiffractionMethod",
    "dft_grid",
    "dft_grid_intensity",
    "diffraction_intensity",
]
