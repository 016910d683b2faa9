"""Spectral layer: Laurent polynomials, Fourier matrices and Mahler measures."""

from sadic_spectra.spectral.fourier import (
    BinaryOverlapSets,
    ComplexMatrix,
    FourierKernel,
    QPolynomials,
    c_matrix_from_q,
    det_identity_residual,
    det_is_sampled_nonzero,
    digit_sum_polynomial,
    fourier_matrix,
    is_nonsingular_family,
    overlap_sets,
    q_polynomials,
    require_nonsingular,
)
from sadic_spectra.spectral.laurent import LaurentPolynomial
from sadic_spectra.spectral.mahler import (
    MahlerEstimate,
    MahlerMethod,
    mahler_bound_margin,
    mahler_jensen_1d,
    mahler_measure,
    mahler_monte_carlo,
    mahler_quadrature,
    polynomial_roots,
)

__all__ = [
    # Polynomials
    "LaurentPolynomial",
    # Fourier
    "BinaryOverlapSets",
    "ComplexMatrix",
    "FourierKernel",
    "QPolynomials",
    "c_matrix_from_q",
    "det_identity_residual",
    "det_is_sampled_nonzero",
    "digit_sum_polynomial",
    "fourier_matrix",
    "is_nonsingular_family",
    "overlap_sets",
    "q_polynomials",
    "require_nonsingular",
    # Mahler
    "MahlerEstimate",
    "MahlerMethod",
    "mahler_bound_margin",
    "mahler_jensen_1d",
    "mahler_measure",
    "mahler_monte_carlo",
    "mahler_quadrature",
    "polynomial_roots",
]
