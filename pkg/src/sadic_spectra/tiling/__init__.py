"""Tiling simulation: letter frequencies, pair correlations, renormalization, diffraction."""

from sadic_spectra.tiling.correlations import (
    Displacement,
    PairCorrelationTable,
    check_radius,
    pair_correlations,
)
from sadic_spectra.tiling.diffraction import (
    DEFAULT_MAX_T_GRID,
    DiffractionGrid,
    DiffractionMethod,
    dft_grid,
    dft_grid_intensity,
    diffraction_intensity,
)
from sadic_spectra.tiling.renormalization import (
    RenormalizationCheck,
    check_renormalization,
    coarse_radius,
    renormalization_pair,
    renormalization_residual,
    renormalization_rhs,
)
from sadic_spectra.tiling.statistics import (
    expected_letter_counts,
    letter_frequencies,
    perron_frobenius_frequencies,
)

__all__ = [
    # Frequencies
    "expected_letter_counts",
    "letter_frequencies",
    "perron_frobenius_frequencies",
    # Pair correlations
    "Displacement",
    "PairCorrelationTable",
    "check_radius",
    "pair_correlations",
    # Renormalization
    "RenormalizationCheck",
    "check_renormalization",
    "coarse_radius",
    "renormalization_pair",
    "renormalization_residual",
    "renormalization_rhs",
    # Diffraction
    "DEFAULT_MAX_T_GRID",
    "DiffractionGrid",
    "DiffractionMethod",
    "dft_grid",
    "dft_grid_intensity",
    "diffraction_intensity",
]
