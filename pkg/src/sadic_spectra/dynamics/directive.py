"""Directive sources: streams of substitution indices i_1, i_2, ...

A source is a single-consumer stateful stream. Two sources built from the
same (kind, parameters, seed) emit identical sequences; ``reset`` rewinds a
source to step 0 and ``replica`` builds an independent copy.

Spec strings accepted by ``parse_directive``:

    constant:1
    word:121121                  (digits, or comma separated for indices > 9)
    bernoulli:0.5,0.5
    markov:0.9,0.1;0.2,0.8[@0.5,0.5]
    rotation:alpha=0.6180339887,cut=0.3819660113[/0.7][,x0=0.1]
"""

from __future__ import annotations

import bisect
import logging
import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from itertools import accumulate

import numpy as np

from sadic_spectra.dynamics.prng import Xorshift64Star
from sadic_spectra.errors import DirectiveSpecError

logger = logging.getLogger(__name__)

PROBABILITY_TOLERANCE = 1e-12


class DirectiveKind(str, Enum):
    CONSTANT = "constant"
    PERIODIC_WORD = "periodic_word"
    BERNOULLI = "bernoulli"
    MARKOV = "markov"
    ROTATION_CODING = "rotation_coding"


@dataclass(frozen=True, slots=True)
class DirectiveParameters:
    """Kind-specific parameters; unused fields stay empty.

    Attributes:
        word: constant / periodic_word symbols (1-based).
        probabilities: bernoulli vector (p_1, ..., p_m).
        transition: markov row-stochastic matrix.
        initial: markov initial distribution (stationary if empty).
        alpha: rotation angle.
        cuts: interior cut points 0 < c_1 < ... < 1 of the rotation partition.
        x0: rotation starting point.
    """

    word: tuple[int, ...] = ()
    probabilities: tuple[float, ...] = ()
    transition: tuple[tuple[float, ...], ...] = ()
    initial: tuple[float, ...] = ()
    alpha: float = 0.0
    cuts: tuple[float, ...] = ()
    x0: float = 0.0


def _check_distribution(name: str, values: Sequence[float]) -> None:
    if not values:
        raise DirectiveSpecError(f"{name} is empty")
    if any(v < 0 or not math.isfinite(v) for v in values):
        raise DirectiveSpecError(f"{name} has a negative or non-finite entry: {list(values)}")
    total = math.fsum(values)
    if abs(total - 1.0) > PROBABILITY_TOLERANCE:
        raise DirectiveSpecError(f"{name} sums to {total!r}, expected 1", values=list(values))


def _last_positive(values: Sequence[float]) -> int:
    return max(i for i, v in enumerate(values) if v > 0)


def stationary_distribution(transition: Sequence[Sequence[float]]) -> tuple[float, ...]:
    """Left Perron eigenvector of a row-stochastic matrix, normalized to sum 1."""
    p = np.asarray(transition, dtype=np.float64)
    n = p.shape[0]
    system = np.vstack([p.T - np.identity(n), np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    solution, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    solution = np.clip(solution, 0.0, None)
    return tuple(float(v) for v in solution / solution.sum())


# ═══════════════════════════════════════════════════════════════════════════════
# DirectiveSource
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass(slots=True, eq=False)
class DirectiveSource:
    """Stateful generator of directive symbols in 1..symbol_count."""

    kind: DirectiveKind
    parameters: DirectiveParameters
    seed: int = 0
    _step: int = field(default=0, init=False)
    _prng: Xorshift64Star = field(init=False, repr=False)
    _state: int = field(default=0, init=False, repr=False)
    _x: float = field(default=0.0, init=False, repr=False)
    _compensation: float = field(default=0.0, init=False, repr=False)

    def __post_init__(self) -> None:
        self._validate()
        self.reset()

    # ─────────────────────────────────────────────────────────────────
    # Constructors
    # ─────────────────────────────────────────────────────────────────

    @classmethod
    def constant(cls, symbol: int) -> DirectiveSource:
        return cls(DirectiveKind.CONSTANT, DirectiveParameters(word=(symbol,)))

    @classmethod
    def periodic_word(cls, word: Sequence[int]) -> DirectiveSource:
        return cls(DirectiveKind.PERIODIC_WORD, DirectiveParameters(word=tuple(word)))

    @classmethod
    def bernoulli(cls, probabilities: Sequence[float], seed: int) -> DirectiveSource:
        return cls(
            DirectiveKind.BERNOULLI,
            DirectiveParameters(probabilities=tuple(float(p) for p in probabilities)),
            seed,
        )

    @classmethod
    def markov(
        cls,
        transition: Sequence[Sequence[float]],
        seed: int,
        initial: Sequence[float] = (),
    ) -> DirectiveSource:
        return cls(
            DirectiveKind.MARKOV,
            DirectiveParameters(
                transition=tuple(tuple(float(v) for v in row) for row in transition),
                initial=tuple(float(v) for v in initial),
            ),
            seed,
        )

    @classmethod
    def rotation(cls, alpha: float, cuts: Sequence[float], x0: float = 0.0) -> DirectiveSource:
        """Coding of x -> x + alpha mod 1 by [0,c_1) -> 1, [c_1,c_2) -> 2, ...

        The rotation is ergodic only for irrational alpha; that is not checked.
        """
        return cls(
            DirectiveKind.ROTATION_CODING,
            DirectiveParameters(
                alpha=float(alpha), cuts=tuple(float(c) for c in cuts), x0=float(x0)
            ),
        )

    def replica(self) -> DirectiveSource:
        """Fresh source with identical kind, parameters and seed, at step 0."""
        return DirectiveSource(self.kind, self.parameters, self.seed)

    # ─────────────────────────────────────────────────────────────────
    # Validation
    # ─────────────────────────────────────────────────────────────────

    def _validate(self) -> None:
        p = self.parameters
        match self.kind:
            case DirectiveKind.CONSTANT | DirectiveKind.PERIODIC_WORD:
                if not p.word:
                    raise DirectiveSpecError(f"{self.kind.value} source needs a nonempty word")
                if self.kind is DirectiveKind.CONSTANT and len(p.word) != 1:
                    raise DirectiveSpecError("constant source takes exactly one symbol")
                if any(s < 1 for s in p.word):
                    raise DirectiveSpecError(f"directive symbols are 1-based, got {list(p.word)}")
            case DirectiveKind.BERNOULLI:
                _check_distribution("bernoulli probabilities", p.probabilities)
            case DirectiveKind.MARKOV:
                n = len(p.transition)
                if n == 0 or any(len(row) != n for row in p.transition):
                    raise DirectiveSpecError("markov transition matrix must be square and nonempty")
                for i, row in enumerate(p.transition, start=1):
                    _check_distribution(f"markov row {i}", row)
                if p.initial:
                    if len(p.initial) != n:
                        raise DirectiveSpecError(
                            f"markov initial distribution has {len(p.initial)} entries "
                            f"for {n} states"
                        )
                    _check_distribution("markov initial distribution", p.initial)
            case DirectiveKind.ROTATION_CODING:
                if not math.isfinite(p.alpha) or not 0.0 < p.alpha < 1.0:
                    raise DirectiveSpecError(f"rotation alpha must lie in (0,1), got {p.alpha}")
                if not 0.0 <= p.x0 < 1.0:
                    raise DirectiveSpecError(f"rotation x0 must lie in [0,1), got {p.x0}")
                bounds = (0.0, *p.cuts, 1.0)
                if any(a >= b for a, b in zip(bounds, bounds[1:])):
                    raise DirectiveSpecError(
                        "rotation cuts must be strictly increasing inside (0,1), "
                        f"got {list(p.cuts)}"
                    )

    # ─────────────────────────────────────────────────────────────────
    # Stream
    # ─────────────────────────────────────────────────────────────────

    @property
    def step(self) -> int:
        """Number of symbols emitted since the last reset."""
        return self._step

    @property
    def symbol_count(self) -> int:
        """m_a, the number of symbols the source can emit."""
        p = self.parameters
        match self.kind:
            case DirectiveKind.CONSTANT | DirectiveKind.PERIODIC_WORD:
                return max(p.word)
            case DirectiveKind.BERNOULLI:
                return len(p.probabilities)
            case DirectiveKind.MARKOV:
                return len(p.transition)
            case DirectiveKind.ROTATION_CODING:
                return len(p.cuts) + 1
        raise AssertionError(self.kind)

    def reset(self) -> None:
        self._step = 0
        self._prng = Xorshift64Star(self.seed)
        self._x = self.parameters.x0
        self._compensation = 0.0
        self._state = 0

    def _pick(self, probabilities: Sequence[float]) -> int:
        cumulative = list(accumulate(probabilities))
        index = bisect.bisect_right(cumulative, self._prng.next_float())
        return min(index, _last_positive(probabilities)) + 1

    def next_symbol(self) -> int:
        p = self.parameters
        match self.kind:
            case DirectiveKind.CONSTANT | DirectiveKind.PERIODIC_WORD:
                symbol = p.word[self._step % len(p.word)]
            case DirectiveKind.BERNOULLI:
                symbol = self._pick(p.probabilities)
            case DirectiveKind.MARKOV:
                if self._step == 0:
                    symbol = self._pick(p.initial or stationary_distribution(p.transition))
                else:
                    symbol = self._pick(p.transition[self._state - 1])
                self._state = symbol
            case DirectiveKind.ROTATION_CODING:
                symbol = bisect.bisect_right(p.cuts, self._x) + 1
                self._advance_rotation()
        self._step += 1
        return symbol

    def _advance_rotation(self) -> None:
        # Kahan-compensated x <- x + alpha, reduced into [0,1) exactly
        y = self.parameters.alpha - self._compensation
        t = self._x + y
        self._compensation = (t - self._x) - y
        self._x = t - 1.0 if t >= 1.0 else t

    def take(self, n: int) -> list[int]:
        return [self.next_symbol() for _ in range(n)]

    # ─────────────────────────────────────────────────────────────────
    # Closed forms
    # ─────────────────────────────────────────────────────────────────

    def letter_measures(self) -> tuple[float, ...]:
        """μ(E_i): the limiting frequency of symbol i, known in closed form."""
        p = self.parameters
        match self.kind:
            case DirectiveKind.CONSTANT | DirectiveKind.PERIODIC_WORD:
                counts = Counter(p.word)
                return tuple(counts[i] / len(p.word) for i in range(1, self.symbol_count + 1))
            case DirectiveKind.BERNOULLI:
                return p.probabilities
            case DirectiveKind.MARKOV:
                return stationary_distribution(p.transition)
            case DirectiveKind.ROTATION_CODING:
                bounds = (0.0, *p.cuts, 1.0)
                return tuple(b - a for a, b in zip(bounds, bounds[1:]))
        raise AssertionError(self.kind)

    def describe(self) -> str:
        """Canonical spec string accepted by ``parse_directive``."""
        p = self.parameters
        match self.kind:
            case DirectiveKind.CONSTANT:
                return f"constant:{p.word[0]}"
            case DirectiveKind.PERIODIC_WORD:
                if max(p.word) > 9:
                    return "word:" + ",".join(str(s) for s in p.word)
                return "word:" + "".join(str(s) for s in p.word)
            case DirectiveKind.BERNOULLI:
                return "bernoulli:" + ",".join(repr(v) for v in p.probabilities)
            case DirectiveKind.MARKOV:
                text = "markov:" + ";".join(",".join(repr(v) for v in row) for row in p.transition)
                if p.initial:
                    text += "@" + ",".join(repr(v) for v in p.initial)
                return text
            case DirectiveKind.ROTATION_CODING:
                cuts = "/".join(repr(c) for c in p.cuts)
                return f"rotation:alpha={p.alpha!r},cut={cuts},x0={p.x0!r}"
        raise AssertionError(self.kind)


# ═══════════════════════════════════════════════════════════════════════════════
# Spec strings
# ═══════════════════════════════════════════════════════════════════════════════


def _floats(text: str, what: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as e:
        raise DirectiveSpecError(f"cannot parse {what} '{text}'") from e


def _word(text: str) -> tuple[int, ...]:
    parts = text.split(",") if "," in text else list(text)
    if not parts or not all(p.isdigit() for p in parts):
        raise DirectiveSpecError(f"directive word must be digits, got '{text}'")
    return tuple(int(p) for p in parts)


def parse_directive(spec: str, seed: int = 0) -> DirectiveSource:
    """Build a source from a spec string such as ``bernoulli:0.5,0.5``.

    Raises:
        DirectiveSpecError: unknown kind, malformed parameters, or a
            distribution / partition that fails validation.
    """
    kind, sep, body = spec.strip().partition(":")
    if not sep or not body:
        raise DirectiveSpecError(f"directive spec '{spec}' must look like kind:parameters")

    match kind:
        case "constant":
            word = _word(body)
            if len(word) != 1:
                raise DirectiveSpecError(f"constant directive takes one symbol, got '{body}'")
            source = DirectiveSource.constant(word[0])
        case "word" | "periodic" | "periodic_word":
            source = DirectiveSource.periodic_word(_word(body))
        case "bernoulli":
            source = DirectiveSource.bernoulli(_floats(body, "bernoulli probabilities"), seed)
        case "markov":
            matrix_text, _, initial_text = body.partition("@")
            rows = [_floats(row, "markov row") for row in matrix_text.split(";")]
            initial = _floats(initial_text, "markov initial distribution") if initial_text else ()
            source = DirectiveSource.markov(rows, seed, initial)
        case "rotation" | "rotation_coding":
            source = _parse_rotation(body)
        case _:
            raise DirectiveSpecError(f"unknown directive kind '{kind}'", spec=spec)

    logger.debug(
        "Parsed directive '%s' -> %s (m_a=%d)", spec, source.kind.value, source.symbol_count
    )
    return source


def _parse_rotation(body: str) -> DirectiveSource:
    fields: dict[str, str] = {}
    for item in body.split(","):
        key, sep, value = item.partition("=")
        if not sep:
            raise DirectiveSpecError(f"rotation parameter '{item}' must be key=value")
        fields[key.strip()] = value.strip()
    unknown = set(fields) - {"alpha", "cut", "x0"}
    if unknown or "alpha" not in fields or "cut" not in fields:
        raise DirectiveSpecError(
            f"rotation needs alpha= and cut= (optional x0=), got {sorted(fields)}"
        )
    try:
        alpha = float(fields["alpha"])
        cuts = tuple(float(c) for c in fields["cut"].split("/"))
        x0 = float(fields.get("x0", "0"))
    except ValueError as e:
        raise DirectiveSpecError(f"cannot parse rotation parameters '{body}'") from e
    return DirectiveSource.rotation(alpha, cuts, x0)


__all__ = [
    "DirectiveKind",
    "DirectiveParameters",
    "DirectiveSource",
    "PROBABILITY_TOLERANCE",
    "parse_directive",
    "stationary_distribution",
]
