"""Unit tests for the portable PRNG."""

from sadic_spectra.dynamics import Xorshift64Star, splitmix64


class TestSplitmix64:
    def test_reference_output(self) -> None:
        """First splitmix64 output for state 0."""
        assert splitmix64(0) == 0xE220A8397B1DCDAF

    def test_stays_in_64_bits(self) -> None:
        for value in (0, 1, 2**63, 2**64 - 1):
            assert 0 <= splitmix64(value) < 2**64


class TestXorshift64Star:
    """Reproducible uniform stream."""

    def test_same_seed_same_sequence(self) -> None:
        a, b = Xorshift64Star(42), Xorshift64Star(42)
        assert [a.next_u64() for _ in range(100)] == [b.next_u64() for _ in range(100)]

    def test_different_seeds_differ(self) -> None:
        a, b = Xorshift64Star(1), Xorshift64Star(2)
        assert [a.next_u64() for _ in range(4)] != [b.next_u64() for _ in range(4)]

    def test_zero_seed_is_usable(self) -> None:
        rng = Xorshift64Star(0)
        assert len({rng.next_u64() for _ in range(1000)}) == 1000

    def test_negative_seed_is_masked(self) -> None:
        assert Xorshift64Star(-1).seed == 2**64 - 1

    def test_floats_are_uniform(self) -> None:
        rng = Xorshift64Star(7)
        values = [rng.next_float() for _ in range(100_000)]
        assert all(0.0 <= v < 1.0 for v in values)
        assert abs(sum(values) / len(values) - 0.5) < 0.01
