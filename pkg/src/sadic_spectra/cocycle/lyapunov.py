"""Lyapunov exponents of the Fourier-matrix cocycle and its inverse C-cocycle.

B-cocycle (right products, the factor at step k sits at the orbit point t_{k-1}):

    P_k(t) = B^{(i_1)}(t_0) B^{(i_2)}(t_1) ⋯ B^{(i_k)}(t_{k-1}),   t_n = frac(φ_{i_n} t_{n-1})

C-cocycle: C_n = C^{(i_n)}(z_{n-1})^{-1} ⋯ C^{(i_1)}(z_0)^{-1} = P_n^{-1}. Hence
χ₊(C) = lim (1/n) log‖P_n^{-1}‖ and χ₋(C) = -lim (1/n) log‖P_n‖.

Every product is norm-stripped after each step; the stripped logs are summed.
The (1,-1) direction is a common eigenvector of every binary C-matrix, so its
rate is the Birkhoff average of -log|q12 - q21| along the orbit.
All t-samples share one realised directive word, and samples are processed
in fixed-size chunks so results do not depend on the worker count.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import TypeVar

import numpy as np
import numpy.typing as npt

from sadic_spectra.core.substitution import BlockSubstitution, check_compatible
from sadic_spectra.dynamics.directive import DirectiveSource
from sadic_spectra.dynamics.skew import (
    SkewOrbitState,
    TorusSampler,
    expansion_schedule,
    sample_torus_orbits,
    skew_step,
)
from sadic_spectra.errors import (
    CocycleDegenerateError,
    DirectiveSpecError,
    NonBinaryAlphabetError,
)
from sadic_spectra.spectral.fourier import FourierKernel, fourier_matrix, q_polynomials
from sadic_spectra.spectral.mahler import mahler_measure

logger = logging.getLogger(__name__)

NORM_FLOOR = 1e-300
DET_FLOOR = 1e-10
MAX_RESAMPLES = 8
MIN_STEPS = 1000
CHUNK_SAMPLES = 16
HORIZON_RATIO = 4

_T = TypeVar("_T")


# ═══════════════════════════════════════════════════════════════════════════════
# Single-orbit state
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True, slots=True, eq=False)
class CocycleState:
    """Norm-stripped running product along one skew-product orbit.

    ``log_norm_sum + log‖normalized_matrix‖`` equals log‖P_k‖; the matrix
    has unit spectral norm after every step, so the residual is 0.
    """

    normalized_matrix: npt.NDArray[np.complex128]
    log_norm_sum: float
    steps: int
    orbit: SkewOrbitState

    @classmethod
    def identity(cls, size: int, orbit: SkewOrbitState) -> CocycleState:
        return cls(
            normalized_matrix=np.identity(size, dtype=np.complex128),
            log_norm_sum=0.0,
            steps=0,
            orbit=orbit,
        )


def spectral_norm(matrices: npt.NDArray[np.complex128]) -> npt.NDArray[np.float64]:
    """Largest singular value of each matrix in a stack (or of one matrix)."""
    return np.linalg.svd(matrices, compute_uv=False)[..., 0]


def cocycle_step_forward(
    state: CocycleState,
    subs: Sequence[BlockSubstitution],
    symbol: int,
) -> CocycleState:
    """Right-multiply by B^{(symbol)} at the current torus point, then advance it.

    Raises:
        CocycleDegenerateError: the product norm fell below 1e-300.
    """
    sub = subs[symbol - 1]
    t = [float(c) for c in state.orbit.torus_point]
    product = state.normalized_matrix @ fourier_matrix(sub, t)
    norm = float(spectral_norm(product))
    if not norm >= NORM_FLOOR:
        raise CocycleDegenerateError(
            f"cocycle degenerate: norm {norm:.3e} at step {state.steps + 1}",
            step=state.steps + 1,
            torus_point=t,
        )
    return replace(
        state,
        normalized_matrix=product / norm,
        log_norm_sum=state.log_norm_sum + math.log(norm),
        steps=state.steps + 1,
        orbit=skew_step(state.orbit, sub, symbol),
    )


def cocycle_product(
    subs: Sequence[BlockSubstitution],
    word: Sequence[int],
    t: Sequence[float],
) -> CocycleState:
    """Fold ``cocycle_step_forward`` over ``word`` starting at t."""
    state = CocycleState.identity(subs[0].alphabet_size, SkewOrbitState.at(t))
    for symbol in word:
        state = cocycle_step_forward(state, subs, symbol)
    return state


# ═══════════════════════════════════════════════════════════════════════════════
# Estimates
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True, slots=True)
class ExponentEstimate:
    """Mean exponent over t-samples (nats/step) with its standard error.

    ``log‖P_n‖ / n`` overshoots its limit by roughly c/√n because the norm
    is a maximum over zero-drift walks; the spread across t-samples does not
    see this. When a quarter-horizon rate is available, ``debiased`` is the
    extrapolation 2·r(N) - r(N/4), which cancels the c/√n term.
    """

    chi: float
    stderr: float
    t_samples: int
    steps_per_sample: int
    closed_form: float | None = None
    per_sample: tuple[float, ...] = ()
    debiased: float | None = None
    debiased_stderr: float | None = None

    @classmethod
    def from_samples(
        cls,
        rates: npt.NDArray[np.float64],
        steps: int,
        closed_form: float | None = None,
        quarter_rates: npt.NDArray[np.float64] | None = None,
    ) -> ExponentEstimate:
        count = int(rates.size)
        debiased: float | None = None
        debiased_stderr: float | None = None
        if quarter_rates is not None:
            extrapolated = 2.0 * rates - quarter_rates
            debiased = float(np.mean(extrapolated))
            debiased_stderr = _stderr(extrapolated)
        return cls(
            chi=float(np.mean(rates)),
            stderr=_stderr(rates),
            t_samples=count,
            steps_per_sample=steps,
            closed_form=closed_form,
            per_sample=tuple(float(r) for r in rates),
            debiased=debiased,
            debiased_stderr=debiased_stderr,
        )

    @property
    def horizon_bias(self) -> float:
        """chi - debiased: the estimated finite-horizon overshoot (0 if unknown)."""
        return 0.0 if self.debiased is None else self.chi - self.debiased

    def agrees_with_closed_form(self, sigmas: float = 3.0, slack: float = 0.0) -> bool:
        """|estimate - closed form| <= sigmas·stderr + slack, debiased when possible.

        Raises:
            ValueError: no closed form is known for this estimate.
        """
        if self.closed_form is None:
            raise ValueError("no closed form to compare against")
        if self.debiased is not None and self.debiased_stderr is not None:
            value, stderr = self.debiased, self.debiased_stderr
        else:
            value, stderr = self.chi, self.stderr
        return abs(value - self.closed_form) <= sigmas * stderr + slack

    def to_row(self) -> dict[str, object]:
        return {
            "chi": self.chi,
            "stderr": self.stderr,
            "t_samples": self.t_samples,
            "steps": self.steps_per_sample,
            "closed_form": self.closed_form,
            "debiased": self.debiased,
            "debiased_stderr": self.debiased_stderr,
        }


def _stderr(values: npt.NDArray[np.float64]) -> float:
    count = int(values.size)
    return float(np.std(values, ddof=1) / math.sqrt(count)) if count > 1 else 0.0


@dataclass(frozen=True, slots=True)
class CExponents:
    """Exponents of the inverse C-cocycle along one realised directive.

    Attributes:
        chi_plus: (1/n) log‖C_n‖, closed form 0.
        chi_minus: -(1/n) log‖C_n^{-1}‖, closed form -Σ μ(E_i) m(q12 - q21).
        vector_rate: (1/n) log‖C_n (1,-1)ᵀ‖, same closed form as chi_minus.
        log_det_rate: Birkhoff average of log|det C|, equal to chi_plus + chi_minus.
        resampled: t-samples redrawn after hitting det C ≈ 0.
        dropped: t-samples given up after the resampling budget.
    """

    chi_plus: ExponentEstimate
    chi_minus: ExponentEstimate
    vector_rate: ExponentEstimate
    log_det_rate: ExponentEstimate
    resampled: int = 0
    dropped: int = 0


# ═══════════════════════════════════════════════════════════════════════════════
# Shared plumbing
# ═══════════════════════════════════════════════════════════════════════════════


def realise_directive(
    subs: Sequence[BlockSubstitution], src: DirectiveSource, steps: int
) -> npt.NDArray[np.int64]:
    """The first ``steps`` symbols of a fresh replica of ``src``."""
    check_compatible(subs)
    if src.symbol_count > len(subs):
        raise DirectiveSpecError(
            f"directive emits up to {src.symbol_count} symbols but only {len(subs)} "
            "substitutions were given"
        )
    return np.array(src.replica().take(steps), dtype=np.int64)


def closed_form_growth(
    subs: Sequence[BlockSubstitution],
    measures: Sequence[float],
    *,
    grid_per_axis: int = 256,
    jitter_seed: int = 0,
) -> float:
    """Σ μ(E_i) m(q12^{(i)} - q21^{(i)}) over the substitutions with μ(E_i) > 0."""
    total = 0.0
    for sub, weight in zip(subs, measures):
        if weight <= 0:
            continue
        difference = q_polynomials(sub).difference
        total += weight * mahler_measure(
            difference, grid_per_axis=grid_per_axis, jitter_seed=jitter_seed
        ).value
    return total


def binary_closed_form(
    subs: Sequence[BlockSubstitution], src: DirectiveSource, grid_per_axis: int, seed: int
) -> float | None:
    if subs[0].alphabet_size != 2:
        return None
    return closed_form_growth(
        subs, src.letter_measures(), grid_per_axis=grid_per_axis, jitter_seed=seed
    )


def require_min_steps(steps: int) -> None:
    if steps < MIN_STEPS:
        raise ValueError(f"steps must be >= {MIN_STEPS}, got {steps}")


def _map_chunks(
    worker: Callable[[npt.NDArray[np.float64]], _T],
    orbit: npt.NDArray[np.float64],
    threads: int,
) -> list[_T]:
    """Apply ``worker`` to fixed-size sample chunks in canonical order."""
    chunks = [
        orbit[:, start : start + CHUNK_SAMPLES]
        for start in range(0, orbit.shape[1], CHUNK_SAMPLES)
    ]
    if threads <= 1 or len(chunks) == 1:
        return [worker(chunk) for chunk in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, chunks))


# ═══════════════════════════════════════════════════════════════════════════════
# B-cocycle engine
# ═══════════════════════════════════════════════════════════════════════════════


def b_cocycle_log_norms(
    subs: Sequence[BlockSubstitution],
    symbols: npt.NDArray[np.int64],
    orbit: npt.NDArray[np.float64],
    threads: int = 1,
) -> npt.NDArray[np.float64]:
    """log‖P_k(t)‖ for k = 1..N and every sample; shape (N, M).

    Raises:
        CocycleDegenerateError: some product norm fell below 1e-300.
    """
    kernels = [FourierKernel.of(sub) for sub in subs]
    n = subs[0].alphabet_size

    def worker(chunk: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        m = chunk.shape[1]
        product = np.broadcast_to(np.identity(n, dtype=np.complex128), (m, n, n)).copy()
        acc = np.zeros(m)
        out = np.empty((len(symbols), m))
        for k, symbol in enumerate(symbols):
            product = product @ kernels[symbol - 1].matrices(chunk[k])
            norms = spectral_norm(product)
            if not np.all(norms >= NORM_FLOOR):
                raise CocycleDegenerateError(
                    f"cocycle degenerate: norm below {NORM_FLOOR} at step {k + 1}",
                    step=k + 1,
                )
            product /= norms[:, None, None]
            acc += np.log(norms)
            out[k] = acc
        return out

    return np.concatenate(_map_chunks(worker, orbit, threads), axis=1)


def estimate_chi_plus_B(
    subs: Sequence[BlockSubstitution],
    src: DirectiveSource,
    t_sampler: TorusSampler,
    steps: int,
    *,
    threads: int = 1,
    grid_per_axis: int = 256,
) -> ExponentEstimate:
    """Top exponent of the B-cocycle: mean of log‖P_N(t)‖ / N over t-samples.

    ``closed_form`` is Σ μ(E_i) m(q12 - q21) for binary alphabets; ``debiased``
    extrapolates the rates at N and N/4 steps to remove the c/√N overshoot.
    """
    require_min_steps(steps)
    symbols = realise_directive(subs, src, steps)
    orbit = sample_torus_orbits(expansion_schedule(subs, symbols), t_sampler)
    log_norms = b_cocycle_log_norms(subs, symbols, orbit, threads)
    closed = binary_closed_form(subs, src, grid_per_axis, t_sampler.seed)
    quarter = steps // HORIZON_RATIO
    estimate = ExponentEstimate.from_samples(
        log_norms[-1] / steps, steps, closed, quarter_rates=log_norms[quarter - 1] / quarter
    )
    logger.info(
        "chi+(B) over %s: %.6f ± %.6f, debiased %.6f (closed form %s, %d samples x %d steps)",
        src.describe(),
        estimate.chi,
        estimate.stderr,
        estimate.debiased,
        closed,
        estimate.t_samples,
        steps,
    )
    return estimate


# ═══════════════════════════════════════════════════════════════════════════════
# C-cocycle engine
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True, slots=True)
class _CChunk:
    log_inverse: npt.NDArray[np.float64]
    log_forward: npt.NDArray[np.float64]
    log_vector: npt.NDArray[np.float64]
    log_det: npt.NDArray[np.float64]
    hit: npt.NDArray[np.bool_]


def _c_cocycle_sums(
    subs: Sequence[BlockSubstitution],
    symbols: npt.NDArray[np.int64],
    orbit: npt.NDArray[np.float64],
    threads: int,
) -> _CChunk:
    kernels = [FourierKernel.of(sub) for sub in subs]
    identity = np.identity(2, dtype=np.complex128)

    def worker(chunk: npt.NDArray[np.float64]) -> _CChunk:
        m = chunk.shape[1]
        forward = np.broadcast_to(identity, (m, 2, 2)).copy()
        inverse = forward.copy()
        sums = np.zeros((4, m))
        hit = np.zeros(m, dtype=bool)
        for k, symbol in enumerate(symbols):
            c = kernels[symbol - 1].matrices(chunk[k])
            det = np.linalg.det(c)
            small = np.abs(det) < DET_FLOOR
            if small.any():
                hit |= small
                c[small] = identity
                det[small] = 1.0
            c_inv = np.linalg.inv(c)

            forward = forward @ c
            inverse = c_inv @ inverse

            norms_f = spectral_norm(forward)
            norms_i = spectral_norm(inverse)
            forward /= norms_f[:, None, None]
            inverse /= norms_i[:, None, None]
            sums[0] += np.log(norms_i)
            sums[1] += np.log(norms_f)
            # C(1,-1)ᵀ = (c00 - c01)(1,-1)ᵀ
            sums[2] -= np.log(np.abs(c[:, 0, 0] - c[:, 0, 1]))
            sums[3] -= np.log(np.abs(det))
        return _CChunk(sums[0], sums[1], sums[2], sums[3], hit)

    parts = _map_chunks(worker, orbit, threads)
    return _CChunk(
        log_inverse=np.concatenate([p.log_inverse for p in parts]),
        log_forward=np.concatenate([p.log_forward for p in parts]),
        log_vector=np.concatenate([p.log_vector for p in parts]),
        log_det=np.concatenate([p.log_det for p in parts]),
        hit=np.concatenate([p.hit for p in parts]),
    )


def estimate_chi_pair_C(
    subs: Sequence[BlockSubstitution],
    src: DirectiveSource,
    t_sampler: TorusSampler,
    steps: int,
    *,
    threads: int = 1,
    grid_per_axis: int = 256,
) -> CExponents:
    """χ₊, χ₋, the (1,-1) vector rate and the log-det rate of the C-cocycle.

    A t-sample whose orbit meets |det C| < 1e-10 is redrawn up to 8 times,
    then dropped; both counts are recorded on the result.

    Raises:
        NonBinaryAlphabetError: the alphabet is not binary.
    """
    require_min_steps(steps)
    if subs[0].alphabet_size != 2:
        raise NonBinaryAlphabetError(subs[0].name, subs[0].alphabet_size)
    symbols = realise_directive(subs, src, steps)
    schedule = expansion_schedule(subs, symbols)
    orbit = sample_torus_orbits(schedule, t_sampler)
    result = _c_cocycle_sums(subs, symbols, orbit, threads)

    keep = ~result.hit
    resampled = 0
    for attempt in range(1, MAX_RESAMPLES + 1):
        bad = np.flatnonzero(result.hit)
        if bad.size == 0:
            break
        logger.warning(
            "det C vanished on %d t-samples; resampling (attempt %d)", bad.size, attempt
        )
        resampled += int(bad.size)
        fresh = sample_torus_orbits(schedule, t_sampler, attempt=attempt)[:, bad]
        redo = _c_cocycle_sums(subs, symbols, fresh, threads)
        for name in ("log_inverse", "log_forward", "log_vector", "log_det"):
            getattr(result, name)[bad] = getattr(redo, name)
        result.hit[bad] = redo.hit
        keep = ~result.hit

    dropped = int((~keep).sum())
    if dropped:
        logger.warning("Dropped %d t-samples after %d resampling attempts", dropped, MAX_RESAMPLES)
    if not keep.any():
        raise CocycleDegenerateError("every t-sample met a zero of det C", dropped=dropped)

    closed = binary_closed_form(subs, src, grid_per_axis, t_sampler.seed)
    negated = None if closed is None else -closed
    pair = CExponents(
        chi_plus=ExponentEstimate.from_samples(result.log_inverse[keep] / steps, steps, 0.0),
        chi_minus=ExponentEstimate.from_samples(-result.log_forward[keep] / steps, steps, negated),
        vector_rate=ExponentEstimate.from_samples(result.log_vector[keep] / steps, steps, negated),
        log_det_rate=ExponentEstimate.from_samples(result.log_det[keep] / steps, steps, negated),
        resampled=resampled,
        dropped=dropped,
    )
    logger.info(
        "C-cocycle over %s: chi+=%.6f chi-=%.6f vector=%.6f logdet=%.6f",
        src.describe(),
        pair.chi_plus.chi,
        pair.chi_minus.chi,
        pair.vector_rate.chi,
        pair.log_det_rate.chi,
    )
    return pair


__all__ = [
    "CExponents",
    "CHUNK_SAMPLES",
    "CocycleState",
    "DET_FLOOR",
    "ExponentEstimate",
    "HORIZON_RATIO",
    "MAX_RESAMPLES",
    "MIN_STEPS",
    "NORM_FLOOR",
    "b_cocycle_log_norms",
    "binary_closed_form",
    "closed_form_growth",
    "cocycle_product",
    "cocycle_step_forward",
    "estimate_chi_pair_C",
    "estimate_chi_plus_B",
    "realise_directive",
    "require_min_steps",
    "spectral_norm",
]
