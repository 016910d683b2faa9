"""Unit tests for directive sources and their spec strings."""

import math

import pytest

from sadic_spectra.dynamics import (
    DirectiveKind,
    DirectiveSource,
    parse_directive,
    stationary_distribution,
)
from sadic_spectra.errors import DirectiveSpecError

GOLDEN = (math.sqrt(5) - 1) / 2


def frequencies(symbols: list[int], m: int) -> list[float]:
    return [symbols.count(i) / len(symbols) for i in range(1, m + 1)]


# ═══════════════════════════════════════════════════════════════════════════════
# Sources
# ═══════════════════════════════════════════════════════════════════════════════


class TestDeterministicSources:
    """constant / periodic_word / rotation_coding."""

    def test_constant(self) -> None:
        source = DirectiveSource.constant(2)
        assert source.take(5) == [2] * 5
        assert source.symbol_count == 2
        assert source.letter_measures() == (0.0, 1.0)

    def test_periodic_word(self) -> None:
        source = DirectiveSource.periodic_word([1, 2, 1])
        assert source.take(7) == [1, 2, 1, 1, 2, 1, 1]
        assert source.letter_measures() == pytest.approx((2 / 3, 1 / 3))
        assert source.step == 7

    def test_sturmian_rotation(self) -> None:
        """Symbol n is the partition cell of {nα} with cut 1-α."""
        source = DirectiveSource.rotation(GOLDEN, [1 - GOLDEN])
        expected = [1 if (n * GOLDEN) % 1 < 1 - GOLDEN else 2 for n in range(8)]
        assert expected == [1, 2, 1, 2, 2, 1, 2, 1]
        assert source.take(8) == expected
        assert source.letter_measures() == pytest.approx((1 - GOLDEN, GOLDEN))

    def test_rotation_long_run_frequency(self) -> None:
        symbols = DirectiveSource.rotation(GOLDEN, [1 - GOLDEN]).take(10_000)
        assert frequencies(symbols, 2)[1] == pytest.approx(GOLDEN, abs=1e-3)


class TestRandomSources:
    """bernoulli / markov."""

    def test_bernoulli_frequencies(self) -> None:
        symbols = DirectiveSource.bernoulli([0.3, 0.7], seed=1).take(100_000)
        assert frequencies(symbols, 2) == pytest.approx([0.3, 0.7], abs=0.01)

    def test_bernoulli_zero_probability_never_drawn(self) -> None:
        symbols = DirectiveSource.bernoulli([0.5, 0.0, 0.5], seed=2).take(10_000)
        assert 2 not in symbols

    def test_markov_stationary(self) -> None:
        transition = [[0.9, 0.1], [0.5, 0.5]]
        assert stationary_distribution(transition) == pytest.approx((5 / 6, 1 / 6))
        source = DirectiveSource.markov(transition, seed=3)
        assert source.letter_measures() == pytest.approx((5 / 6, 1 / 6))
        assert frequencies(source.take(100_000), 2) == pytest.approx([5 / 6, 1 / 6], abs=0.01)

    def test_markov_respects_forbidden_transition(self) -> None:
        source = DirectiveSource.markov([[0.0, 1.0], [1.0, 0.0]], seed=4, initial=[1.0, 0.0])
        assert source.take(6) == [1, 2, 1, 2, 1, 2]

    def test_reset_and_replica_repeat_the_stream(self) -> None:
        source = DirectiveSource.bernoulli([0.5, 0.5], seed=5)
        first = source.take(50)
        twin = source.replica()
        source.reset()
        assert source.take(50) == first
        assert twin.take(50) == first

    def test_seed_changes_stream(self) -> None:
        a = DirectiveSource.bernoulli([0.5, 0.5], seed=6).take(64)
        b = DirectiveSource.bernoulli([0.5, 0.5], seed=7).take(64)
        assert a != b


class TestValidation:
    """Rejected parameters."""

    @pytest.mark.parametrize(
        "probabilities", [[0.5, 0.4], [1.2, -0.2], [], [float("nan"), 1.0]]
    )
    def test_bad_bernoulli(self, probabilities: list[float]) -> None:
        with pytest.raises(DirectiveSpecError):
            DirectiveSource.bernoulli(probabilities, seed=0)

    def test_tolerance(self) -> None:
        DirectiveSource.bernoulli([0.1] * 10, seed=0)

    def test_non_square_markov(self) -> None:
        with pytest.raises(DirectiveSpecError):
            DirectiveSource.markov([[1.0], [0.5, 0.5]], seed=0)

    def test_rotation_cuts_must_increase(self) -> None:
        with pytest.raises(DirectiveSpecError):
            DirectiveSource.rotation(0.3, [0.6, 0.2])

    def test_rotation_alpha_range(self) -> None:
        with pytest.raises(DirectiveSpecError):
            DirectiveSource.rotation(1.5, [0.5])

    def test_zero_symbol(self) -> None:
        with pytest.raises(DirectiveSpecError):
            DirectiveSource.periodic_word([1, 0])


# ═══════════════════════════════════════════════════════════════════════════════
# parse_directive
# ═══════════════════════════════════════════════════════════════════════════════


class TestParseDirective:
    """CLI spec strings."""

    def test_bernoulli(self) -> None:
        source = parse_directive("bernoulli:0.5,0.5", seed=42)
        assert source.kind is DirectiveKind.BERNOULLI
        assert source.seed == 42
        assert source.parameters.probabilities == (0.5, 0.5)

    def test_word_forms(self) -> None:
        assert parse_directive("word:1211").parameters.word == (1, 2, 1, 1)
        assert parse_directive("word:1,12,3").parameters.word == (1, 12, 3)
        assert parse_directive("constant:2").take(3) == [2, 2, 2]

    def test_markov_with_initial(self) -> None:
        source = parse_directive("markov:0.9,0.1;0.5,0.5@1,0", seed=1)
        assert source.parameters.transition == ((0.9, 0.1), (0.5, 0.5))
        assert source.parameters.initial == (1.0, 0.0)
        assert source.take(1) == [1]

    def test_rotation(self) -> None:
        source = parse_directive("rotation:alpha=0.6180339887,cut=0.3819660113")
        assert source.kind is DirectiveKind.ROTATION_CODING
        assert source.take(8) == [1, 2, 1, 2, 2, 1, 2, 1]

    def test_describe_reparses_to_same_stream(self) -> None:
        for spec in ("markov:0.7,0.3;0.4,0.6", "rotation:alpha=0.3,cut=0.2/0.7,x0=0.1"):
            source = parse_directive(spec, seed=9)
            again = parse_directive(source.describe(), seed=9)
            assert again.take(200) == source.take(200)

    @pytest.mark.parametrize(
        "spec",
        [
            "bernoulli",
            "poisson:1",
            "bernoulli:a,b",
            "constant:12",
            "word:1x2",
            "rotation:alpha=0.3",
            "rotation:alpha=0.3,cut=0.5,beta=1",
        ],
    )
    def test_rejects(self, spec: str) -> None:
        with pytest.raises(DirectiveSpecError):
            parse_directive(spec)
