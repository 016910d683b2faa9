"""Unit tests for logarithmic Mahler measures and the Mahler margin."""

import math

import numpy as np
import pytest

from sadic_spectra.core import BlockSubstitution
from sadic_spectra.errors import (
    DimensionMismatchError,
    MahlerUndefinedError,
    SingularFourierFamilyError,
    SingularSetTooDenseError,
)
from sadic_spectra.spectral import (
    LaurentPolynomial,
    MahlerMethod,
    mahler_bound_margin,
    mahler_jensen_1d,
    mahler_measure,
    mahler_monte_carlo,
    mahler_quadrature,
)

# m(1 + z1 + z2)
SMYTH_CONSTANT = 0.3230659472194505


def random_poly(rng: np.random.Generator, degree: int) -> LaurentPolynomial:
    coeffs = rng.integers(-3, 4, size=degree + 1)
    coeffs[-1] = rng.choice([-2, -1, 1, 2])
    return LaurentPolynomial(dim=1, coeffs={(k,): int(c) for k, c in enumerate(coeffs)})


# ═══════════════════════════════════════════════════════════════════════════════
# Jensen oracle
# ═══════════════════════════════════════════════════════════════════════════════


class TestJensen:
    """Root-based exact values in one variable."""

    @pytest.mark.parametrize(
        ("text", "expected"),
        [
            ("1-z", 0.0),
            ("z", 0.0),
            ("2", math.log(2)),
            ("1+z+z^2", 0.0),
            ("z-2", math.log(2)),
            ("2*z-1", math.log(2)),
            ("3*z^5", math.log(3)),
            ("z^-2-z^3", 0.0),
        ],
    )
    def test_known_values(self, text: str, expected: float) -> None:
        estimate = mahler_jensen_1d(LaurentPolynomial.parse(text))
        assert estimate.value == pytest.approx(expected, abs=1e-12)
        assert estimate.standard_error == 0.0
        assert estimate.method is MahlerMethod.JENSEN_ROOTS

    def test_zero_is_undefined(self) -> None:
        with pytest.raises(MahlerUndefinedError):
            mahler_jensen_1d(LaurentPolynomial.zero(1))

    def test_rejects_two_variables(self) -> None:
        with pytest.raises(DimensionMismatchError):
            mahler_jensen_1d(LaurentPolynomial.parse("1+z1*z2"))

    def test_multiplicative(self) -> None:
        rng = np.random.default_rng(21)
        for _ in range(20):
            p, q = random_poly(rng, 3), random_poly(rng, 4)
            product = mahler_jensen_1d(p * q).value
            assert product == pytest.approx(
                mahler_jensen_1d(p).value + mahler_jensen_1d(q).value, abs=1e-8
            )

    def test_monomial_shift_is_invariant(self) -> None:
        p = LaurentPolynomial.parse("3-z+2*z^2")
        shifted = p * LaurentPolynomial.monomial((-7,))
        assert mahler_jensen_1d(shifted).value == mahler_jensen_1d(p).value

    def test_integer_polynomials_are_nonnegative(self) -> None:
        rng = np.random.default_rng(22)
        for _ in range(50):
            assert mahler_jensen_1d(random_poly(rng, 5)).value >= -1e-12


# ═══════════════════════════════════════════════════════════════════════════════
# Quadrature and Monte Carlo
# ═══════════════════════════════════════════════════════════════════════════════


class TestQuadrature:
    """Jittered tensor grid over the torus."""

    def test_one_minus_z(self) -> None:
        estimate = mahler_quadrature(LaurentPolynomial.parse("1-z"), 4096, jitter_seed=1)
        assert abs(estimate.value) < 1e-3
        assert estimate.method is MahlerMethod.TENSOR_QUADRATURE
        assert estimate.samples == 4096

    def test_constant_is_exact(self) -> None:
        estimate = mahler_quadrature(LaurentPolynomial.parse("2"), 64, jitter_seed=1)
        assert estimate.value == pytest.approx(math.log(2), abs=1e-14)

    def test_two_variable_zero_measure(self) -> None:
        estimate = mahler_quadrature(LaurentPolynomial.parse("1-z1*z2"), 512, jitter_seed=2)
        assert abs(estimate.value) < 5e-3

    def test_smyth_value(self) -> None:
        estimate = mahler_quadrature(LaurentPolynomial.parse("1+z1+z2"), 256, jitter_seed=3)
        assert estimate.value == pytest.approx(SMYTH_CONSTANT, abs=5e-3)

    def test_agrees_with_jensen(self) -> None:
        rng = np.random.default_rng(23)
        for _ in range(50):
            p = random_poly(rng, int(rng.integers(1, 6)))
            exact = mahler_jensen_1d(p).value
            estimate = mahler_quadrature(p, 2048, jitter_seed=4)
            assert abs(estimate.value - exact) < 3 * estimate.standard_error + 1e-3

    def test_same_seed_same_value(self) -> None:
        p = LaurentPolynomial.parse("1+z1-z2^2")
        first = mahler_quadrature(p, 64, jitter_seed=5)
        second = mahler_quadrature(p, 64, jitter_seed=5)
        assert first == second

    def test_grid_too_coarse(self) -> None:
        with pytest.raises(ValueError):
            mahler_quadrature(LaurentPolynomial.parse("1-z"), 8, jitter_seed=0)

    def test_zero_is_undefined(self) -> None:
        with pytest.raises(MahlerUndefinedError):
            mahler_quadrature(LaurentPolynomial.zero(2), 64, jitter_seed=0)

    def test_dense_zero_set(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Raising the zero-set floor makes more than 1% of cells unusable."""
        monkeypatch.setattr("sadic_spectra.spectral.mahler.ZERO_SET_FLOOR", 0.5)
        with pytest.raises(SingularSetTooDenseError) as exc_info:
            mahler_quadrature(LaurentPolynomial.parse("1-z"), 256, jitter_seed=0)
        assert exc_info.value.details["total_cells"] == 256


class TestMonteCarlo:
    """i.i.d. uniform sampling."""

    def test_smyth_value(self) -> None:
        estimate = mahler_monte_carlo(LaurentPolynomial.parse("1+z1+z2"), 200_000, seed=6)
        assert estimate.method is MahlerMethod.MONTE_CARLO
        assert abs(estimate.value - SMYTH_CONSTANT) < 4 * estimate.standard_error

    def test_needs_two_samples(self) -> None:
        with pytest.raises(ValueError):
            mahler_monte_carlo(LaurentPolynomial.parse("1-z"), 1, seed=0)


class TestMahlerMeasure:
    """Method dispatch."""

    def test_one_variable_uses_jensen(self) -> None:
        assert mahler_measure(LaurentPolynomial.parse("1-z")).method is MahlerMethod.JENSEN_ROOTS

    def test_two_variables_use_quadrature(self) -> None:
        estimate = mahler_measure(LaurentPolynomial.parse("1-z1"), grid_per_axis=32)
        assert estimate.method is MahlerMethod.TENSOR_QUADRATURE
        assert estimate.samples == 32 * 32

    def test_row(self) -> None:
        row = mahler_measure(LaurentPolynomial.parse("2")).to_row()
        assert row["method"] == "jensen_roots"
        assert row["stderr"] == 0.0


# ═══════════════════════════════════════════════════════════════════════════════
# Mahler margin
# ═══════════════════════════════════════════════════════════════════════════════


class TestMahlerBoundMargin:
    """log √det φ - m(q12 - q21)."""

    def test_thue_morse_and_period_doubling(self, tm_pd: list[BlockSubstitution]) -> None:
        for sub in tm_pd:
            assert mahler_bound_margin(sub) == pytest.approx(0.5 * math.log(2), abs=1e-12)

    def test_block_4x3_positive(self, block_4x3: BlockSubstitution) -> None:
        assert mahler_bound_margin(block_4x3, grid_per_axis=64, jitter_seed=1) > 0

    def test_constant_is_singular(self, constant_sub: BlockSubstitution) -> None:
        with pytest.raises(SingularFourierFamilyError):
            mahler_bound_margin(constant_sub)
