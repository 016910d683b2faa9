"""Letter frequencies of finite patches and their Perron-Frobenius limits."""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from sadic_spectra.core.patch import Patch
from sadic_spectra.core.substitution import BlockSubstitution, matrix_product

logger = logging.getLogger(__name__)


def letter_frequencies(patch: Patch, alphabet_size: int) -> tuple[float, ...]:
    """#{x : cells[x] = i} / volume for i = 1..alphabet_size.

    Letters absent from the patch get frequency 0.
    """
    if patch.volume == 0:
        raise ValueError("letter frequencies of an empty patch")
    return tuple(c / patch.volume for c in patch.letter_counts(alphabet_size))


def expected_letter_counts(
    subs: Sequence[BlockSubstitution], word: Sequence[int], seed_letter: int
) -> list[int]:
    """Column ``seed_letter`` of A_{word_1} ⋯ A_{word_m}."""
    product = matrix_product(subs, word)
    return [int(v) for v in product[:, seed_letter - 1]]


def perron_frobenius_frequencies(matrix: npt.ArrayLike) -> tuple[float, ...]:
    """Right Perron eigenvector of a nonnegative matrix, normalized to sum 1.

    For a primitive substitution matrix these are the limiting letter
    frequencies of its supertiles.
    """
    a = np.asarray(matrix, dtype=np.float64)
    eigenvalues, vectors = np.linalg.eig(a)
    leading = int(np.argmax(eigenvalues.real))
    vector = np.abs(vectors[:, leading].real)
    logger.debug("Perron root %.6f", eigenvalues[leading].real)
    return tuple(float(v) for v in vector / vector.sum())


__all__ = ["expected_letter_counts", "letter_frequencies", "perron_frobenius_frequencies"]
