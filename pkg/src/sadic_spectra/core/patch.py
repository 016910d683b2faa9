"""Finite patches and S-adic supertiles.

A patch is a dense box of letters on Z^d. ``supertile`` builds the finite
approximant ρ_{w_1} ∘ ρ_{w_2} ∘ ⋯ ∘ ρ_{w_n}(seed): the leftmost substitution
of the word acts last.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from sadic_spectra.core.substitution import (
    BlockSubstitution,
    LabelArray,
    check_compatible,
    inflate,
)
from sadic_spectra.errors import ResourceCapExceededError

logger = logging.getLogger(__name__)

# 4096^2 cells, the default 2-D cap
DEFAULT_MAX_CELLS = 4096 * 4096

CACHE_DIR_ENV = "SADIC_CACHE_DIR"


@dataclass(frozen=True, slots=True, eq=False)
class Patch:
    """Letters on the box Π[0, extent_c).

    Attributes:
        cells: Label array; ``cells[x]`` is the letter at lattice point x.
        word: Directive word that generated the patch (empty if built by hand).
    """

    cells: LabelArray
    word: tuple[int, ...] = field(default=())

    @classmethod
    def from_labels(cls, labels: Sequence[int] | LabelArray) -> Patch:
        cells = np.asarray(labels, dtype=np.int64)
        if cells.ndim == 0:
            cells = cells.reshape((1,))
        return cls(cells=cells)

    @property
    def dim(self) -> int:
        return int(self.cells.ndim)

    @property
    def extent(self) -> tuple[int, ...]:
        return tuple(int(n) for n in self.cells.shape)

    @property
    def volume(self) -> int:
        return int(self.cells.size)

    def symbolic(self) -> str:
        """Concatenated letters of a 1-D patch, e.g. ``"1221"``."""
        if self.dim != 1:
            raise ValueError("symbolic form exists only for 1-D patches")
        return "".join(str(int(c)) for c in self.cells)

    def check_alphabet(self, alphabet_size: int) -> None:
        """Raise ValueError unless every label lies in 1..alphabet_size."""
        if self.cells.size and (self.cells.min() < 1 or self.cells.max() > alphabet_size):
            raise ValueError(
                f"patch labels span [{self.cells.min()}, {self.cells.max()}], "
                f"outside the alphabet 1..{alphabet_size}"
            )

    def letter_counts(self, alphabet_size: int) -> list[int]:
        self.check_alphabet(alphabet_size)
        counts = np.bincount(self.cells.ravel() - 1, minlength=alphabet_size)
        return [int(c) for c in counts[:alphabet_size]]


def apply_substitution(sub: BlockSubstitution, patch: Patch, index: int | None = None) -> Patch:
    """One inflation step; ``index`` (1-based) is prepended to the patch word."""
    word = ((index,) if index is not None else ()) + patch.word
    return Patch(cells=inflate(sub, patch.cells), word=word)


def supertile_cells(subs: Sequence[BlockSubstitution], word: Sequence[int]) -> int:
    """Cell count of ``supertile(subs, word, ·)`` without building it."""
    _check_word(subs, word)
    cells = 1
    for index in word:
        cells *= subs[index - 1].det_phi
    return cells


def _check_word(subs: Sequence[BlockSubstitution], word: Sequence[int]) -> None:
    bad = [index for index in word if not 1 <= index <= len(subs)]
    if bad:
        raise ValueError(f"word indices {bad} are outside 1..{len(subs)}")


def supertile(
    subs: Sequence[BlockSubstitution],
    word: Sequence[int],
    seed_letter: int,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> Patch:
    """Build ρ_{word_1} ∘ ⋯ ∘ ρ_{word_n}(seed_letter).

    Raises:
        ValueError: a word index is outside 1..len(subs) or the seed letter
            is outside the alphabet.
        ResourceCapExceededError: If the patch would exceed ``max_cells``.
    """
    check_compatible(subs)
    if not 1 <= seed_letter <= subs[0].alphabet_size:
        raise ValueError(f"seed letter {seed_letter} is outside 1..{subs[0].alphabet_size}")
    requested = supertile_cells(subs, word)
    if requested > max_cells:
        raise ResourceCapExceededError("patch cells", requested, max_cells)

    cached = _cache_load(subs, word, seed_letter)
    if cached is not None:
        return cached

    dim = subs[0].dim
    patch = Patch(cells=np.full((1,) * dim, seed_letter, dtype=np.int64))
    for index in reversed(word):
        patch = apply_substitution(subs[index - 1], patch, index)

    _cache_store(subs, word, seed_letter, patch)
    logger.debug("Built supertile word=%s seed=%d extent=%s", list(word), seed_letter, patch.extent)
    return patch


# ─────────────────────────────────────────────────────────────────
# On-disk memo (SADIC_CACHE_DIR)
# ─────────────────────────────────────────────────────────────────


def _cache_path(subs: Sequence[BlockSubstitution], word: Sequence[int], seed: int) -> Path | None:
    root = os.environ.get(CACHE_DIR_ENV)
    if not root:
        return None
    used = sorted(set(word))
    key = json.dumps(
        {
            "subs": {str(i): subs[i - 1].to_definition() for i in used},
            "word": list(word),
            "seed": seed,
        },
        sort_keys=True,
    )
    digest = hashlib.sha256(key.encode("utf-8")).hexdigest()
    return Path(root) / f"supertile-{digest}.npy"


def _cache_load(subs: Sequence[BlockSubstitution], word: Sequence[int], seed: int) -> Patch | None:
    path = _cache_path(subs, word, seed)
    if path is None or not path.exists():
        return None
    try:
        cells = np.load(path)
    except (OSError, ValueError) as e:
        logger.warning("Ignoring unreadable supertile cache %s: %s", path, e)
        return None
    logger.debug("Supertile cache hit: %s", path.name)
    return Patch(cells=cells.astype(np.int64), word=tuple(word))


def _cache_store(
    subs: Sequence[BlockSubstitution], word: Sequence[int], seed: int, patch: Patch
) -> None:
    path = _cache_path(subs, word, seed)
    if path is None:
        return
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.save(path, patch.cells)
    except OSError as e:
        # cache failures never abort a run
        logger.warning("Failed to write supertile cache %s: %s", path, e)


__all__ = [
    "CACHE_DIR_ENV",
    "DEFAULT_MAX_CELLS",
    "Patch",
    "apply_substitution",
    "supertile",
    "supertile_cells",
]
