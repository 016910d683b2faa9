"""Logarithmic Mahler measures m(p) = ∫_{T^d} log|p|.

One variable: exact Jensen formula from companion-matrix roots.
Several variables: jittered tensor grid with bounded exclusion of cells that
land on the zero set. All values are in nats.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt

from sadic_spectra.core.substitution import BlockSubstitution
from sadic_spectra.errors import (
    DimensionMismatchError,
    MahlerUndefinedError,
    SingularFourierFamilyError,
    SingularSetTooDenseError,
)
from sadic_spectra.spectral.fourier import q_polynomials
from sadic_spectra.spectral.laurent import LaurentPolynomial

logger = logging.getLogger(__name__)

UNIT_CIRCLE_SNAP = 1e-10
ZERO_SET_FLOOR = 1e-13
MAX_REJITTER = 8
MAX_EXCLUDED_SHARE = 0.01
MIN_GRID_PER_AXIS = 16
_CHUNK = 1 << 16


class MahlerMethod(str, Enum):
    JENSEN_ROOTS = "jensen_roots"
    TENSOR_QUADRATURE = "tensor_quadrature"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True, slots=True)
class MahlerEstimate:
    """A Mahler measure value with its sampling error.

    ``standard_error`` is 0 for the Jensen oracle.
    """

    value: float
    standard_error: float
    method: MahlerMethod
    samples: int
    excluded_cells: int = 0

    def to_row(self) -> dict[str, object]:
        return {
            "value": self.value,
            "stderr": self.standard_error,
            "method": self.method.value,
            "samples": self.samples,
            "excluded_cells": self.excluded_cells,
        }


# ═══════════════════════════════════════════════════════════════════════════════
# Jensen oracle (d = 1)
# ═══════════════════════════════════════════════════════════════════════════════


def polynomial_roots(coefficients: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
    """Roots of Σ a_k z^k (a_0 first, a_D ≠ 0) as companion-matrix eigenvalues.

    LAPACK's general eigensolver balances the companion matrix first.
    """
    degree = len(coefficients) - 1
    if degree < 1:
        return np.zeros(0, dtype=np.complex128)
    companion = np.zeros((degree, degree), dtype=np.float64)
    companion[1:, :-1] = np.identity(degree - 1)
    companion[:, -1] = -coefficients[:-1] / coefficients[-1]
    return np.linalg.eigvals(companion).astype(np.complex128)


def mahler_jensen_1d(p: LaurentPolynomial) -> MahlerEstimate:
    """m(p) = log|lead| + Σ log max(1, |r|) after stripping the monomial factor."""
    if p.dim != 1:
        raise DimensionMismatchError(f"Jensen oracle needs one variable, got dim={p.dim}")
    if p.is_zero():
        raise MahlerUndefinedError()

    exponents = [f[0] for f in p.coeffs]
    low = min(exponents)
    degree = max(exponents) - low
    coefficients = np.zeros(degree + 1, dtype=np.float64)
    for f, c in p.coeffs.items():
        coefficients[f[0] - low] = c

    value = math.log(abs(coefficients[-1]))
    for root in polynomial_roots(coefficients):
        modulus = abs(complex(root))
        if abs(modulus - 1.0) < UNIT_CIRCLE_SNAP:
            continue
        if modulus > 1.0:
            value += math.log(modulus)
    return MahlerEstimate(
        value=value,
        standard_error=0.0,
        method=MahlerMethod.JENSEN_ROOTS,
        samples=degree,
    )


# ═══════════════════════════════════════════════════════════════════════════════
# Jittered tensor quadrature (any d)
# ═══════════════════════════════════════════════════════════════════════════════


def _abs_values(p: LaurentPolynomial, points: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    out = np.empty(points.shape[0], dtype=np.float64)
    for start in range(0, points.shape[0], _CHUNK):
        out[start : start + _CHUNK] = np.abs(p.evaluate(points[start : start + _CHUNK]))
    return out


def mahler_quadrature(
    p: LaurentPolynomial,
    grid_per_axis: int,
    jitter_seed: int,
) -> MahlerEstimate:
    """Average log|p| over one jittered point per cell of a uniform grid.

    Cells whose point hits |p| < 1e-13 are re-jittered up to 8 times and
    then excluded. The jitter stream is drawn in canonical cell order, so
    the result depends only on ``jitter_seed``.

    Raises:
        MahlerUndefinedError: p is the zero polynomial.
        SingularSetTooDenseError: more than 1% of cells were excluded.
    """
    if p.is_zero():
        raise MahlerUndefinedError()
    if grid_per_axis < MIN_GRID_PER_AXIS:
        raise ValueError(f"grid_per_axis must be >= {MIN_GRID_PER_AXIS}, got {grid_per_axis}")

    rng = np.random.default_rng(jitter_seed)
    d = p.dim
    total = grid_per_axis**d
    corners = np.indices((grid_per_axis,) * d).reshape(d, total).T.astype(np.float64)
    points = (corners + rng.random((total, d))) / grid_per_axis
    values = _abs_values(p, points)

    bad = np.flatnonzero(values < ZERO_SET_FLOOR)
    for attempt in range(MAX_REJITTER):
        if bad.size == 0:
            break
        logger.debug("Re-jittering %d cells on the zero set (attempt %d)", bad.size, attempt + 1)
        points[bad] = (corners[bad] + rng.random((bad.size, d))) / grid_per_axis
        values[bad] = _abs_values(p, points[bad])
        bad = bad[values[bad] < ZERO_SET_FLOOR]

    excluded = int(bad.size)
    if excluded > MAX_EXCLUDED_SHARE * total:
        raise SingularSetTooDenseError(excluded, total)
    if excluded:
        logger.warning("Excluded %d of %d quadrature cells on the zero set", excluded, total)

    keep = np.ones(total, dtype=bool)
    keep[bad] = False
    logs = np.log(values[keep])
    samples = int(logs.size)
    stderr = float(np.std(logs, ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return MahlerEstimate(
        value=float(np.mean(logs)),
        standard_error=stderr,
        method=MahlerMethod.TENSOR_QUADRATURE,
        samples=samples,
        excluded_cells=excluded,
    )


def mahler_monte_carlo(p: LaurentPolynomial, samples: int, seed: int) -> MahlerEstimate:
    """Plain Monte Carlo average of log|p| at i.i.d. uniform torus points."""
    if p.is_zero():
        raise MahlerUndefinedError()
    if samples < 2:
        raise ValueError("monte carlo needs at least 2 samples")
    rng = np.random.default_rng(seed)
    values = _abs_values(p, rng.random((samples, p.dim)))
    hit = values < ZERO_SET_FLOOR
    excluded = int(hit.sum())
    if excluded > MAX_EXCLUDED_SHARE * samples:
        raise SingularSetTooDenseError(excluded, samples)
    logs = np.log(values[~hit])
    return MahlerEstimate(
        value=float(np.mean(logs)),
        standard_error=float(np.std(logs, ddof=1) / math.sqrt(logs.size)),
        method=MahlerMethod.MONTE_CARLO,
        samples=int(logs.size),
        excluded_cells=excluded,
    )


def mahler_measure(
    p: LaurentPolynomial,
    *,
    grid_per_axis: int = 256,
    jitter_seed: int = 0,
) -> MahlerEstimate:
    """Best available method: Jensen in one variable, quadrature otherwise."""
    if p.dim == 1:
        return mahler_jensen_1d(p)
    return mahler_quadrature(p, grid_per_axis, jitter_seed)


def mahler_bound_margin(
    sub: BlockSubstitution,
    *,
    grid_per_axis: int = 256,
    jitter_seed: int = 0,
) -> float:
    """log √det φ - m(q12 - q21); positive for every valid binary block substitution."""
    difference = q_polynomials(sub).difference
    if difference.is_zero():
        raise SingularFourierFamilyError(sub.name)
    estimate = mahler_measure(difference, grid_per_axis=grid_per_axis, jitter_seed=jitter_seed)
    margin = 0.5 * math.log(sub.det_phi) - estimate.value
    logger.info(
        "Mahler margin for '%s': m(q12-q21)=%.6f (%s), margin=%.6f",
        sub.name,
        estimate.value,
        estimate.method.value,
        margin,
    )
    return margin


__all__ = [
    "MahlerEstimate",
    "MahlerMethod",
    "mahler_bound_margin",
    "mahler_jensen_1d",
    "mahler_measure",
    "mahler_monte_carlo",
    "mahler_quadrature",
    "polynomial_roots",
]
