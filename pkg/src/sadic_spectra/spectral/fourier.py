"""Fourier matrices B(t), torus matrices C(z) and the binary q-polynomials.

B_{k,j}(t) = Σ_{s ∈ T_{k,j}} exp(2πi⟨s, t⟩). Digits are integral, so B is
1-periodic in every coordinate and C(π(t)) = B(t) is a function on the torus.
Torus points are real vectors t in [0,1)^d throughout.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from sadic_spectra.core.substitution import BlockSubstitution, Offset, digit_sets
from sadic_spectra.errors import NonBinaryAlphabetError, SingularFourierFamilyError
from sadic_spectra.spectral.laurent import LaurentPolynomial

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]

# resamples for the probabilistic non-singularity check
NONSINGULAR_TRIES = 8
NONSINGULAR_THRESHOLD = 1e-8


# ═══════════════════════════════════════════════════════════════════════════════
# FourierKernel - batched evaluation of B(t)
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True, slots=True, eq=False)
class FourierKernel:
    """Precomputed digits and incidence of one substitution.

    ``incidence[f, k, j]`` is 1 when the digit f carries letter k+1 in the
    image of letter j+1, so B(t) = Σ_f exp(2πi⟨f,t⟩) incidence[f].
    """

    offsets: npt.NDArray[np.float64]
    incidence: npt.NDArray[np.float64]

    @classmethod
    def of(cls, sub: BlockSubstitution) -> FourierKernel:
        n = sub.alphabet_size
        digits = list(sub.digits())
        incidence = np.zeros((len(digits), n, n), dtype=np.float64)
        for position, f in enumerate(digits):
            for j, rule in enumerate(sub.rules):
                incidence[position, int(rule[f]) - 1, j] = 1.0
        return cls(offsets=np.array(digits, dtype=np.float64), incidence=incidence)

    def matrices(self, t: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """B(t) for t of shape (M, d); returns shape (M, n, n)."""
        points = np.atleast_2d(np.asarray(t, dtype=np.float64))
        phases = np.exp(2j * np.pi * (points @ self.offsets.T))
        return np.einsum("mf,fkj->mkj", phases, self.incidence)


def fourier_matrix(sub: BlockSubstitution, t: npt.ArrayLike) -> ComplexMatrix:
    """B(t) for a single wave vector t of length d; equals A at t = 0."""
    point = np.asarray(t, dtype=np.float64).reshape(1, sub.dim)
    return FourierKernel.of(sub).matrices(point)[0]


# ═══════════════════════════════════════════════════════════════════════════════
# Binary alphabets: overlap sets and q-polynomials
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True, slots=True)
class BinaryOverlapSets:
    """S_{k,l} = T_{k,1} ∩ T_{l,2}; the four sets partition F."""

    s11: frozenset[Offset]
    s12: frozenset[Offset]
    s21: frozenset[Offset]
    s22: frozenset[Offset]

    def get(self, k: int, l: int) -> frozenset[Offset]:
        return {(1, 1): self.s11, (1, 2): self.s12, (2, 1): self.s21, (2, 2): self.s22}[(k, l)]


@dataclass(frozen=True, slots=True)
class QPolynomials:
    """q_{k,l}(z) = Σ_{f ∈ S_{k,l}} z^f for one binary substitution."""

    q11: LaurentPolynomial
    q12: LaurentPolynomial
    q21: LaurentPolynomial
    q22: LaurentPolynomial

    @property
    def dim(self) -> int:
        return self.q11.dim

    @property
    def difference(self) -> LaurentPolynomial:
        """q_{1,2} - q_{2,1}, the eigenvalue of C(z) on (1, -1)."""
        return self.q12 - self.q21


def _require_binary(sub: BlockSubstitution) -> None:
    if sub.alphabet_size != 2:
        raise NonBinaryAlphabetError(sub.name, sub.alphabet_size)


def overlap_sets(sub: BlockSubstitution) -> BinaryOverlapSets:
    """Intersect the digit sets of the images of letters 1 and 2."""
    _require_binary(sub)
    t = digit_sets(sub)
    return BinaryOverlapSets(
        s11=t.get(1, 1) & t.get(1, 2),
        s12=t.get(1, 1) & t.get(2, 2),
        s21=t.get(2, 1) & t.get(1, 2),
        s22=t.get(2, 1) & t.get(2, 2),
    )


def q_polynomials(sub: BlockSubstitution) -> QPolynomials:
    s = overlap_sets(sub)
    return QPolynomials(
        q11=LaurentPolynomial.from_offsets(sub.dim, s.s11),
        q12=LaurentPolynomial.from_offsets(sub.dim, s.s12),
        q21=LaurentPolynomial.from_offsets(sub.dim, s.s21),
        q22=LaurentPolynomial.from_offsets(sub.dim, s.s22),
    )


def c_matrix_from_q(q: QPolynomials, t: npt.ArrayLike) -> ComplexMatrix:
    """C(z) at z = π(t), assembled from the four q-polynomials."""
    point = np.asarray(t, dtype=np.float64).reshape(q.dim)
    q11, q12, q21, q22 = (complex(p.evaluate(point)) for p in (q.q11, q.q12, q.q21, q.q22))
    return np.array(
        [[q11 + q12, q11 + q21], [q21 + q22, q12 + q22]],
        dtype=np.complex128,
    )


def digit_sum_polynomial(sub: BlockSubstitution) -> LaurentPolynomial:
    """Σ_{f ∈ F} z^f."""
    return LaurentPolynomial.from_offsets(sub.dim, sub.digits())


def det_identity_residual(sub: BlockSubstitution, t: npt.ArrayLike) -> float:
    """Numerical defect of det C = (q12 - q21)·Σ_F z^f and C(1,-1)ᵀ = (q12 - q21)(1,-1)ᵀ."""
    _require_binary(sub)
    point = np.asarray(t, dtype=np.float64).reshape(sub.dim)
    c = fourier_matrix(sub, point)
    eigenvalue = complex(q_polynomials(sub).difference.evaluate(point))
    volume_sum = complex(digit_sum_polynomial(sub).evaluate(point))

    det_defect = abs(complex(np.linalg.det(c)) - eigenvalue * volume_sum)
    v = np.array([1.0, -1.0], dtype=np.complex128)
    vector_defect = float(np.linalg.norm(c @ v - eigenvalue * v))
    return max(det_defect, vector_defect)


# ═══════════════════════════════════════════════════════════════════════════════
# Non-singularity of the Fourier family
# ═══════════════════════════════════════════════════════════════════════════════


def require_nonsingular(sub: BlockSubstitution, seed: int = 0) -> None:
    """Reject substitutions whose Fourier matrices are singular for every t.

    For binary alphabets the symbolic test on q12 - q21 is authoritative;
    otherwise det B(t) is sampled up to ``NONSINGULAR_TRIES`` times.
    """
    if sub.alphabet_size == 2 and q_polynomials(sub).difference.is_zero():
        raise SingularFourierFamilyError(sub.name)
    if not det_is_sampled_nonzero(sub, seed):
        raise SingularFourierFamilyError(sub.name)


def det_is_sampled_nonzero(sub: BlockSubstitution, seed: int = 0) -> bool:
    """|det B(t)| > 1e-8 at one of up to 8 uniformly drawn t."""
    rng = np.random.default_rng(seed)
    kernel = FourierKernel.of(sub)
    for attempt in range(NONSINGULAR_TRIES):
        t = rng.random((1, sub.dim))
        if abs(complex(np.linalg.det(kernel.matrices(t)[0]))) > NONSINGULAR_THRESHOLD:
            return True
        logger.debug("det B(t) vanished at sample %d for '%s'; resampling", attempt, sub.name)
    logger.warning("det B(t) vanished at %d samples for '%s'", NONSINGULAR_TRIES, sub.name)
    return False


def is_nonsingular_family(subs: Sequence[BlockSubstitution], seed: int = 0) -> bool:
    """Every member passes `require_nonsingular`."""
    try:
        for sub in subs:
            require_nonsingular(sub, seed)
    except SingularFourierFamilyError:
        return False
    return True


__all__ = [
    "BinaryOverlapSets",
    "ComplexMatrix",
    "FourierKernel",
    "QPolynomials",
    "c_matrix_from_q",
    "det_identity_residual",
    "det_is_sampled_nonzero",
    "digit_sum_polynomial",
    "fourier_matrix",
    "is_nonsingular_family",
    "overlap_sets",
    "q_polynomials",
    "require_nonsingular",
]
