"""Sufficient-condition margin for zero absolutely continuous diffraction.

    margin_k(t) = (1/2k) log λ^{(k)} - (1/k) log‖P_k(t)‖,   λ^{(k)} = Π_{n≤k} det φ_{i_n}

A positive liminf of margin_k(t) for a.e. t rules out an absolutely continuous
diffraction component. The liminf is approximated per t-sample by the minimum
over the last 10% of steps.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from sadic_spectra.cocycle.lyapunov import (
    ExponentEstimate,
    b_cocycle_log_norms,
    binary_closed_form,
    realise_directive,
    require_min_steps,
)
from sadic_spectra.core.substitution import BlockSubstitution
from sadic_spectra.dynamics.directive import DirectiveSource
from sadic_spectra.dynamics.skew import TorusSampler, expansion_schedule, sample_torus_orbits
from sadic_spectra.errors import SingularFourierFamilyError
from sadic_spectra.spectral.fourier import require_nonsingular

logger = logging.getLogger(__name__)

TAIL_FRACTION = 0.1
VERDICT_QUORUM = 0.95
STDERR_FACTOR = 2.0


class Verdict(str, Enum):
    POSITIVE_MARGIN = "positive_margin"
    NONPOSITIVE_MARGIN = "nonpositive_margin"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, slots=True)
class CriterionReport:
    """Margin of the criterion along one realised directive.

    Attributes:
        volume_rate: (1/2N) Σ log det φ_{i_n} along the realised directive.
        volume_rate_closed_form: (1/2) Σ μ(E_i) log det φ_i.
        growth_rate: mean (1/N) log‖P_N(t)‖ over t-samples.
        growth_stderr: standard error of ``growth_rate``.
        margin: volume_rate - growth_rate.
        closed_form_margin: (1/2) Σ μ log det φ - Σ μ m(q12 - q21), binary only.
        per_t_margins: tail minimum of margin_k(t) per t-sample.
        verdict: positive iff margin - 2·stderr > 0 on ≥ 95% of t-samples.
        error: error record when the run could not be evaluated.
    """

    volume_rate: float
    volume_rate_closed_form: float
    growth_rate: float
    growth_stderr: float
    margin: float
    per_t_margins: tuple[float, ...]
    verdict: Verdict
    t_samples: int
    steps: int
    closed_form_margin: float | None = None
    directive: str = ""
    error: dict[str, Any] | None = field(default=None)

    @classmethod
    def inconclusive(cls, directive: str, steps: int, error: dict[str, Any]) -> CriterionReport:
        nan = math.nan
        return cls(
            volume_rate=nan,
            volume_rate_closed_form=nan,
            growth_rate=nan,
            growth_stderr=nan,
            margin=nan,
            per_t_margins=(),
            verdict=Verdict.INCONCLUSIVE,
            t_samples=0,
            steps=steps,
            directive=directive,
            error=error,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "directive": self.directive,
            "steps": self.steps,
            "t_samples": self.t_samples,
            "volume_rate": self.volume_rate,
            "volume_rate_closed_form": self.volume_rate_closed_form,
            "growth_rate": self.growth_rate,
            "growth_stderr": self.growth_stderr,
            "margin": self.margin,
            "closed_form_margin": self.closed_form_margin,
            "per_t_margins": list(self.per_t_margins),
            "verdict": self.verdict.value,
            "error": self.error,
        }


def criterion_margin(
    subs: Sequence[BlockSubstitution],
    src: DirectiveSource,
    t_sampler: TorusSampler,
    steps: int,
    *,
    threads: int = 1,
    grid_per_axis: int = 256,
) -> CriterionReport:
    """Evaluate the margin and its verdict.

    A substitution with identically singular Fourier matrices yields an
    ``inconclusive`` report carrying the error record instead of numbers.
    """
    require_min_steps(steps)
    symbols = realise_directive(subs, src, steps)
    used = sorted({int(s) for s in symbols})
    try:
        for index in used:
            require_nonsingular(subs[index - 1], seed=t_sampler.seed)
    except SingularFourierFamilyError as e:
        logger.warning("Criterion inconclusive: %s", e.message)
        return CriterionReport.inconclusive(src.describe(), steps, e.to_dict())

    orbit = sample_torus_orbits(expansion_schedule(subs, symbols), t_sampler)
    log_norms = b_cocycle_log_norms(subs, symbols, orbit, threads)

    k = np.arange(1, steps + 1, dtype=np.float64)
    log_det = np.log(np.array([sub.det_phi for sub in subs], dtype=np.float64))
    volume_series = np.cumsum(log_det[symbols - 1]) / (2.0 * k)
    margins = volume_series[:, None] - log_norms / k[:, None]

    tail_start = max(0, math.ceil((1.0 - TAIL_FRACTION) * steps) - 1)
    per_t = margins[tail_start:].min(axis=0)

    growth = ExponentEstimate.from_samples(log_norms[-1] / steps, steps)
    volume_rate = float(volume_series[-1])
    measures = src.letter_measures()
    volume_closed = 0.5 * float(sum(mu * lg for mu, lg in zip(measures, log_det)))

    closed_growth = binary_closed_form(subs, src, grid_per_axis, t_sampler.seed)
    closed_margin = None if closed_growth is None else volume_closed - closed_growth

    # t = 0 is a measure-zero bad point and never enters the verdict
    eligible = ~np.all(orbit[0] == 0.0, axis=1)
    passing = (per_t - STDERR_FACTOR * growth.stderr > 0.0)[eligible]
    share = float(passing.mean()) if passing.size else 0.0
    verdict = Verdict.POSITIVE_MARGIN if share >= VERDICT_QUORUM else Verdict.NONPOSITIVE_MARGIN

    report = CriterionReport(
        volume_rate=volume_rate,
        volume_rate_closed_form=volume_closed,
        growth_rate=growth.chi,
        growth_stderr=growth.stderr,
        margin=volume_rate - growth.chi,
        per_t_margins=tuple(float(m) for m in per_t),
        verdict=verdict,
        t_samples=growth.t_samples,
        steps=steps,
        closed_form_margin=closed_margin,
        directive=src.describe(),
    )
    logger.info(
        "Criterion over %s: margin=%.6f (volume %.6f, growth %.6f ± %.6f), %.1f%% passing -> %s",
        report.directive,
        report.margin,
        volume_rate,
        growth.chi,
        growth.stderr,
        100.0 * share,
        verdict.value,
    )
    return report


__all__ = ["CriterionReport", "Verdict", "criterion_margin"]
