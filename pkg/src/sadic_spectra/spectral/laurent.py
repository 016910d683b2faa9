"""Integer Laurent polynomials on the d-torus.

Points of the torus are handled as real vectors t in [0,1)^d; a monomial z^f
evaluates to exp(2πi⟨f, t⟩).
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

Offset = tuple[int, ...]

_FACTOR_RE = re.compile(r"^z(\d*)(?:\^(-?\d+))?$")


def _split_terms(source: str) -> list[tuple[int, str]]:
    """Split on top-level + and -; a sign right after ^ belongs to the exponent."""
    terms: list[tuple[int, str]] = []
    sign = 1
    current = ""
    for position, char in enumerate(source):
        if char in "+-" and (position == 0 or source[position - 1] != "^"):
            if current:
                terms.append((sign, current))
            elif position > 0:
                raise ValueError(f"dangling sign at position {position} in '{source}'")
            sign = -1 if char == "-" else 1
            current = ""
        else:
            current += char
    if not current:
        raise ValueError(f"polynomial '{source}' ends without a term")
    terms.append((sign, current))
    return terms


@dataclass(frozen=True, slots=True)
class LaurentPolynomial:
    """Σ c_f z^f with finitely many nonzero integer coefficients.

    Attributes:
        dim: Number of variables d.
        coeffs: Exponent vector -> nonzero integer coefficient.
    """

    dim: int
    coeffs: Mapping[Offset, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {tuple(int(e) for e in f): int(c) for f, c in self.coeffs.items() if c != 0}
        for f in cleaned:
            if len(f) != self.dim:
                raise ValueError(f"exponent {f} does not have {self.dim} entries")
        object.__setattr__(self, "coeffs", dict(sorted(cleaned.items())))

    # ─────────────────────────────────────────────────────────────────
    # Constructors
    # ─────────────────────────────────────────────────────────────────

    @classmethod
    def zero(cls, dim: int) -> LaurentPolynomial:
        return cls(dim=dim, coeffs={})

    @classmethod
    def constant(cls, dim: int, value: int) -> LaurentPolynomial:
        return cls(dim=dim, coeffs={(0,) * dim: value})

    @classmethod
    def monomial(cls, exponent: Offset, coefficient: int = 1) -> LaurentPolynomial:
        return cls(dim=len(exponent), coeffs={tuple(exponent): coefficient})

    @classmethod
    def from_offsets(cls, dim: int, offsets: Iterable[Offset]) -> LaurentPolynomial:
        """Σ_{f ∈ offsets} z^f (each offset counted once per occurrence)."""
        coeffs: dict[Offset, int] = {}
        for f in offsets:
            coeffs[tuple(f)] = coeffs.get(tuple(f), 0) + 1
        return cls(dim=dim, coeffs=coeffs)

    @classmethod
    def parse(cls, text: str, dim: int | None = None) -> LaurentPolynomial:
        """Parse ``"1-z"``, ``"2+3*z1^2*z2^-1"``, ``"z^3-z"``.

        ``z`` is an alias of ``z1``. The dimension defaults to the largest
        variable index that appears (at least 1).
        """
        source = text.replace(" ", "")
        if not source:
            raise ValueError("empty polynomial")
        terms: list[tuple[int, dict[int, int]]] = []
        max_var = 1
        for sign, body in _split_terms(source):
            coefficient = 1
            powers: dict[int, int] = {}
            for factor in body.split("*"):
                if factor.isdigit():
                    coefficient *= int(factor)
                    continue
                var = _FACTOR_RE.match(factor)
                if var is None:
                    raise ValueError(f"bad factor '{factor}' in '{text}'")
                index = int(var.group(1)) if var.group(1) else 1
                if index < 1:
                    raise ValueError(f"variables are z1, z2, ...; got '{factor}'")
                powers[index] = powers.get(index, 0) + (int(var.group(2)) if var.group(2) else 1)
                max_var = max(max_var, index)
            terms.append((sign * coefficient, powers))

        d = dim if dim is not None else max_var
        if max_var > d:
            raise ValueError(f"'{text}' uses z{max_var} but dim is {d}")
        coeffs: dict[Offset, int] = {}
        for coefficient, powers in terms:
            f = tuple(powers.get(axis, 0) for axis in range(1, d + 1))
            coeffs[f] = coeffs.get(f, 0) + coefficient
        return cls(dim=d, coeffs=coeffs)

    # ─────────────────────────────────────────────────────────────────
    # Algebra
    # ─────────────────────────────────────────────────────────────────

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def _check_dim(self, other: LaurentPolynomial) -> None:
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: LaurentPolynomial) -> LaurentPolynomial:
        self._check_dim(other)
        coeffs = dict(self.coeffs)
        for f, c in other.coeffs.items():
            coeffs[f] = coeffs.get(f, 0) + c
        return LaurentPolynomial(self.dim, coeffs)

    def __neg__(self) -> LaurentPolynomial:
        return LaurentPolynomial(self.dim, {f: -c for f, c in self.coeffs.items()})

    def __sub__(self, other: LaurentPolynomial) -> LaurentPolynomial:
        return self + (-other)

    def __mul__(self, other: LaurentPolynomial) -> LaurentPolynomial:
        self._check_dim(other)
        coeffs: dict[Offset, int] = {}
        for f, a in self.coeffs.items():
            for g, b in other.coeffs.items():
                h = tuple(x + y for x, y in zip(f, g, strict=True))
                coeffs[h] = coeffs.get(h, 0) + a * b
        return LaurentPolynomial(self.dim, coeffs)

    # ─────────────────────────────────────────────────────────────────
    # Evaluation
    # ─────────────────────────────────────────────────────────────────

    def exponent_array(self) -> npt.NDArray[np.float64]:
        return np.array(list(self.coeffs), dtype=np.float64).reshape(len(self.coeffs), self.dim)

    def coefficient_array(self) -> npt.NDArray[np.float64]:
        return np.array(list(self.coeffs.values()), dtype=np.float64)

    def evaluate(self, t: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """p(π(t)) for t of shape (d,) or (N, d); returns shape () or (N,)."""
        points = np.asarray(t, dtype=np.float64)
        single = points.ndim == 1
        points = points.reshape(-1, self.dim)
        if self.is_zero():
            values = np.zeros(points.shape[0], dtype=np.complex128)
        else:
            phases = np.exp(2j * np.pi * (points @ self.exponent_array().T))
            values = phases @ self.coefficient_array()
        return values[0] if single else values

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts: list[str] = []
        for f, c in self.coeffs.items():
            factors = [
                ("z" if self.dim == 1 else f"z{axis + 1}") + (f"^{e}" if e != 1 else "")
                for axis, e in enumerate(f)
                if e != 0
            ]
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c)), *factors])
            parts.append(("-" if c < 0 else "+") + body)
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text


__all__ = ["LaurentPolynomial"]
