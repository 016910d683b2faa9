"""Block substitutions on the integer lattice.

A block substitution sends every letter to a box of letters of shape
``expansion[0] x ... x expansion[d-1]``. Only this class is representable:
unit-cube prototiles with a diagonal integer expansion, so every digit lies
in Z^d and finite local complexity holds automatically.

Letters are dense 1-based integers; alphabet names are metadata only.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import reduce
from typing import Any

import numpy as np
import numpy.typing as npt

from sadic_spectra.errors import DimensionMismatchError, SubstitutionInvalidError

logger = logging.getLogger(__name__)

Offset = tuple[int, ...]
LabelArray = npt.NDArray[np.int64]


# ═══════════════════════════════════════════════════════════════════════════════
# BlockSubstitution
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True, slots=True, eq=False)
class BlockSubstitution:
    """A d-dimensional block substitution.

    Attributes:
        name: Identifier string.
        dim: Lattice dimension d.
        alphabet_size: Number of letters n_a (letters are 1..n_a).
        expansion: Diagonal entries of the expansion map, one per axis.
        rules: ``rules[j-1]`` is the block of letters placed in the image of
            letter j, indexed by lattice offset f in F.
        alphabet: Optional human-readable letter names.
    """

    name: str
    dim: int
    alphabet_size: int
    expansion: tuple[int, ...]
    rules: tuple[LabelArray, ...]
    alphabet: tuple[str, ...] = field(default=())

    @classmethod
    def from_rules(
        cls,
        name: str,
        expansion: Sequence[int],
        rules: Mapping[int, Any] | Sequence[Any],
        *,
        alphabet_size: int | None = None,
        alphabet: Sequence[str] = (),
    ) -> BlockSubstitution:
        """Build a substitution from nested letter lists.

        ``rules`` is either a sequence (rule for letter 1 first) or a mapping
        from 1-based letters to nested arrays, row-major by axis order.
        Construction does not validate; call ``validate`` for a report.
        """
        if isinstance(rules, Mapping):
            ordered = [rules[key] for key in sorted(rules)]
        else:
            ordered = list(rules)
        arrays: list[LabelArray] = []
        for letter, rule in enumerate(ordered, start=1):
            try:
                array = np.asarray(rule, dtype=np.int64)
            except ValueError as e:
                raise SubstitutionInvalidError(
                    name, [f"rule for letter {letter} is not a rectangular block"]
                ) from e
            array.setflags(write=False)
            arrays.append(array)
        return cls(
            name=name,
            dim=len(expansion),
            alphabet_size=alphabet_size if alphabet_size is not None else len(arrays),
            expansion=tuple(int(e) for e in expansion),
            rules=tuple(arrays),
            alphabet=tuple(alphabet),
        )

    @property
    def det_phi(self) -> int:
        """Volume of the expanded block, det of the expansion map."""
        return reduce(lambda a, b: a * b, self.expansion, 1)

    @property
    def block_array(self) -> LabelArray:
        """All rules stacked into one array of shape (n_a, *expansion)."""
        return np.stack(self.rules)

    def digits(self) -> Iterator[Offset]:
        """Enumerate F, the lattice points of the expanded unit cube."""
        for f in np.ndindex(*self.expansion):
            yield tuple(int(c) for c in f)

    def to_definition(self) -> dict[str, Any]:
        """Plain-data form, the same layout as a substitution definition file."""
        names = self.alphabet or tuple(str(k) for k in range(1, self.alphabet_size + 1))
        return {
            "name": self.name,
            "dim": self.dim,
            "alphabet": list(names),
            "expansion": list(self.expansion),
            "rules": {names[j]: rule.tolist() for j, rule in enumerate(self.rules)},
        }


# ═══════════════════════════════════════════════════════════════════════════════
# Validation (report style)
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True, slots=True)
class ValidationReport:
    """Outcome of ``validate``; ``violations`` is empty iff the substitution is valid."""

    substitution: str
    violations: tuple[str, ...]

    @property
    def is_valid(self) -> bool:
        return not self.violations

    @classmethod
    def success(cls, substitution: str) -> ValidationReport:
        return cls(substitution=substitution, violations=())

    @classmethod
    def failure(cls, substitution: str, violations: list[str]) -> ValidationReport:
        return cls(substitution=substitution, violations=tuple(violations))


def validate(sub: BlockSubstitution) -> ValidationReport:
    """List every violated block-substitution invariant. Never raises."""
    violations: list[str] = []

    if sub.dim < 1:
        violations.append(f"dimension must be positive, got {sub.dim}")
    if sub.alphabet_size < 1:
        violations.append(f"alphabet_size must be positive, got {sub.alphabet_size}")
    if len(sub.expansion) != sub.dim:
        violations.append(
            f"expansion has {len(sub.expansion)} entries for dimension {sub.dim}"
        )
    for axis, entry in enumerate(sub.expansion):
        if entry < 2:
            violations.append(f"expansion entry < 2: axis {axis} has {entry}")
    if len(sub.rules) != sub.alphabet_size:
        violations.append(
            f"expected {sub.alphabet_size} rules, got {len(sub.rules)}"
        )
    if sub.alphabet and len(sub.alphabet) != sub.alphabet_size:
        violations.append(
            f"alphabet names {list(sub.alphabet)} do not match alphabet_size {sub.alphabet_size}"
        )

    for j, rule in enumerate(sub.rules, start=1):
        if rule.shape != sub.expansion:
            violations.append(
                f"block shape mismatch: image of letter {j} has shape {rule.shape}, "
                f"expected {sub.expansion}"
            )
            continue
        bad = np.argwhere((rule < 1) | (rule > sub.alphabet_size))
        for cell in bad:
            offset = tuple(int(c) for c in cell)
            violations.append(
                f"letter out of range: letter {int(rule[offset])} at cell {offset} "
                f"in image of letter {j}"
            )

    if violations:
        logger.warning("Substitution '%s' failed validation: %s", sub.name, violations)
        return ValidationReport.failure(sub.name, violations)
    return ValidationReport.success(sub.name)


def require_valid(sub: BlockSubstitution) -> BlockSubstitution:
    """Return ``sub`` unchanged or raise ``SubstitutionInvalidError``."""
    report = validate(sub)
    if not report.is_valid:
        raise SubstitutionInvalidError(sub.name, list(report.violations))
    return sub


# ═══════════════════════════════════════════════════════════════════════════════
# Digit sets and substitution matrix
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True, slots=True)
class DigitSets:
    """T_{k,j}: offsets where letter k appears in the image of letter j."""

    alphabet_size: int
    entries: Mapping[tuple[int, int], frozenset[Offset]]

    def get(self, k: int, j: int) -> frozenset[Offset]:
        return self.entries[(k, j)]


@dataclass(frozen=True, slots=True, eq=False)
class SubstitutionMatrix:
    """A[k][j] = #T_{k,j}, stored 0-based as a nonnegative integer array."""

    entries: npt.NDArray[np.int64]

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.entries]

    def column_sums(self) -> list[int]:
        return [int(v) for v in self.entries.sum(axis=0)]


def digit_sets(sub: BlockSubstitution) -> DigitSets:
    """T_{k,j} = { f in F : block[j][f] = k }."""
    entries: dict[tuple[int, int], set[Offset]] = {
        (k, j): set()
        for k in range(1, sub.alphabet_size + 1)
        for j in range(1, sub.alphabet_size + 1)
    }
    for j, rule in enumerate(sub.rules, start=1):
        for f in sub.digits():
            entries[(int(rule[f]), j)].add(f)
    return DigitSets(
        alphabet_size=sub.alphabet_size,
        entries={key: frozenset(value) for key, value in entries.items()},
    )


def substitution_matrix(sub: BlockSubstitution) -> SubstitutionMatrix:
    """Count letters per image: A[k][j] = #T_{k,j}."""
    n = sub.alphabet_size
    counts = np.zeros((n, n), dtype=np.int64)
    for j, rule in enumerate(sub.rules):
        counts[:, j] = np.bincount(rule.ravel() - 1, minlength=n)[:n]
    return SubstitutionMatrix(entries=counts)


# ═══════════════════════════════════════════════════════════════════════════════
# Composition and products
# ═══════════════════════════════════════════════════════════════════════════════


def check_compatible(subs: Sequence[BlockSubstitution]) -> None:
    """All substitutions of a family must share dimension and alphabet."""
    if not subs:
        raise DimensionMismatchError("substitution family is empty")
    first = subs[0]
    for other in subs[1:]:
        if other.dim != first.dim or other.alphabet_size != first.alphabet_size:
            raise DimensionMismatchError(
                f"'{other.name}' (dim={other.dim}, n_a={other.alphabet_size}) is incompatible "
                f"with '{first.name}' (dim={first.dim}, n_a={first.alphabet_size})",
                expected={"dim": first.dim, "alphabet_size": first.alphabet_size},
                got={"dim": other.dim, "alphabet_size": other.alphabet_size},
            )


def inflate(sub: BlockSubstitution, labels: LabelArray) -> LabelArray:
    """Substitute every cell of a label array once.

    The cell at x with letter j becomes the block of j placed at φ(x) + h.

    Raises:
        ValueError: a label lies outside 1..n_a.
    """
    if labels.size and (labels.min() < 1 or labels.max() > sub.alphabet_size):
        raise ValueError(
            f"labels must lie in 1..{sub.alphabet_size} for '{sub.name}', "
            f"got range [{labels.min()}, {labels.max()}]"
        )
    d = sub.dim
    images = sub.block_array[labels - 1]  # shape (*extent, *expansion)
    order = [axis for pair in zip(range(d), range(d, 2 * d), strict=True) for axis in pair]
    new_shape = tuple(n * e for n, e in zip(labels.shape, sub.expansion, strict=True))
    return np.ascontiguousarray(images.transpose(order)).reshape(new_shape)


def compose(outer: BlockSubstitution, inner: BlockSubstitution) -> BlockSubstitution:
    """outer ∘ inner: block[j][φ_outer(g) + h] = outer[inner[j][g]][h]."""
    check_compatible([outer, inner])
    composed = [inflate(outer, rule) for rule in inner.rules]
    return BlockSubstitution.from_rules(
        f"{outer.name}∘{inner.name}",
        tuple(a * b for a, b in zip(outer.expansion, inner.expansion, strict=True)),
        composed,
        alphabet_size=outer.alphabet_size,
        alphabet=outer.alphabet,
    )


def matrix_product(
    subs: Sequence[BlockSubstitution], word: Sequence[int]
) -> npt.NDArray[np.object_]:
    """A_{word_1} ⋯ A_{word_m} in exact integer arithmetic (object dtype)."""
    check_compatible(subs)
    n = subs[0].alphabet_size
    product: npt.NDArray[np.object_] = np.identity(n, dtype=np.int64).astype(object)
    for index in word:
        product = product @ substitution_matrix(subs[index - 1]).entries.astype(object)
    return product


def is_positive_product(subs: Sequence[BlockSubstitution], word: Sequence[int]) -> bool:
    """True iff every entry of A_{word_1} ⋯ A_{word_m} is positive."""
    if not word:
        raise ValueError("word must be nonempty")
    check_compatible(subs)
    pattern = substitution_matrix(subs[word[0] - 1]).entries > 0
    for index in word[1:]:
        step = substitution_matrix(subs[index - 1]).entries > 0
        pattern = (pattern.astype(np.int64) @ step.astype(np.int64)) > 0
    return bool(pattern.all())


__all__ = [
    "BlockSubstitution",
    "DigitSets",
    "LabelArray",
    "Offset",
    "SubstitutionMatrix",
    "ValidationReport",
    "check_compatible",
    "compose",
    "digit_sets",
    "inflate",
    "is_positive_product",
    "matrix_product",
    "require_valid",
    "substitution_matrix",
    "validate",
]
