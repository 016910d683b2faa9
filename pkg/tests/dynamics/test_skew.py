"""Unit tests for the torus skew product and orbit sampling."""

from fractions import Fraction

import numpy as np
import pytest

from sadic_spectra.core import BlockSubstitution
from sadic_spectra.dynamics import (
    SkewOrbitState,
    TorusSampler,
    expansion_schedule,
    sample_torus_orbits,
    skew_step,
)
from sadic_spectra.errors import DimensionMismatchError


def torus_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    diff = np.abs(a - b) % 1.0
    return np.minimum(diff, 1.0 - diff)


class TestSkewStep:
    """t -> frac(φ t)."""

    def test_exact_on_fractions(self, thue_morse: BlockSubstitution) -> None:
        state = SkewOrbitState.at([Fraction(1, 3)])
        for _ in range(4):
            state = skew_step(state, thue_morse)
        assert state.torus_point == (Fraction(1, 3),)
        assert state.step == 4

    def test_two_dimensional(self, block_4x3: BlockSubstitution) -> None:
        state = skew_step(SkewOrbitState.at([0.3, 0.5]), block_4x3, next_index=2)
        assert state.torus_point == pytest.approx((0.2, 0.5))
        assert state.directive_index == 2

    def test_reduces_start_point(self) -> None:
        assert SkewOrbitState.at([1.25, -0.25]).torus_point == (0.25, 0.75)

    def test_rejects_points_off_torus(self) -> None:
        with pytest.raises(ValueError):
            SkewOrbitState(torus_point=(1.0,))

    def test_dimension_mismatch(self, block_4x3: BlockSubstitution) -> None:
        with pytest.raises(DimensionMismatchError):
            skew_step(SkewOrbitState.at([0.5]), block_4x3)


class TestSampleTorusOrbits:
    """Digit-stream sampling of whole orbits."""

    def test_schedule_rows(
        self, tm_pd: list[BlockSubstitution], block_4x3: BlockSubstitution
    ) -> None:
        assert expansion_schedule(tm_pd, [1, 2, 2]).tolist() == [[2], [2], [2]]
        assert expansion_schedule([block_4x3], [1, 1]).tolist() == [[4, 3], [4, 3]]

    def test_orbit_follows_the_skew_map(self, block_4x3: BlockSubstitution) -> None:
        schedule = expansion_schedule([block_4x3], [1] * 200)
        orbit = sample_torus_orbits(schedule, TorusSampler(seed=1, count=64))
        assert orbit.shape == (200, 64, 2)
        stepped = (orbit[:-1] * schedule[:-1, None, :]) % 1.0
        assert torus_distance(stepped, orbit[1:]).max() < 1e-9

    def test_long_orbits_stay_random(self, thue_morse: BlockSubstitution) -> None:
        """No collapse to 0 after 53 doublings."""
        schedule = expansion_schedule([thue_morse], [1] * 500)
        orbit = sample_torus_orbits(schedule, TorusSampler(seed=2, count=1000))
        assert abs(orbit[-1].mean() - 0.5) < 0.05
        assert ((orbit >= 0.0) & (orbit < 1.0)).all()

    def test_marginals_are_uniform(self, thue_morse: BlockSubstitution) -> None:
        schedule = expansion_schedule([thue_morse], [1] * 10)
        orbit = sample_torus_orbits(schedule, TorusSampler(seed=3, count=20_000))
        histogram, _ = np.histogram(orbit[0, :, 0], bins=10, range=(0.0, 1.0))
        assert np.all(np.abs(histogram / 20_000 - 0.1) < 0.01)

    def test_deterministic_per_seed_and_attempt(self, thue_morse: BlockSubstitution) -> None:
        schedule = expansion_schedule([thue_morse], [1] * 20)
        sampler = TorusSampler(seed=4, count=8)
        a = sample_torus_orbits(schedule, sampler)
        assert np.array_equal(a, sample_torus_orbits(schedule, sampler))
        assert not np.array_equal(a, sample_torus_orbits(schedule, sampler, attempt=1))

    @pytest.mark.parametrize(("seed", "count"), [(0, 0), (-1, 4)])
    def test_sampler_validation(self, seed: int, count: int) -> None:
        with pytest.raises(ValueError):
            TorusSampler(seed=seed, count=count)
