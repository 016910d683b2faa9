"""Cocycle layer: Lyapunov exponents and the zero-a.c. criterion margin."""

from sadic_spectra.cocycle.criterion import CriterionReport, Verdict, criterion_margin
from sadic_spectra.cocycle.lyapunov import (
    CExponents,
    CocycleState,
    HORIZON_RATIO,
    ExponentEstimate,
    b_cocycle_log_norms,
    closed_form_growth,
    cocycle_product,
    cocycle_step_forward,
    estimate_chi_pair_C,
    estimate_chi_plus_B,
    realise_directive,
    spectral_norm,
)

__all__ = [
    # Lyapunov
    "CExponents",
    "CocycleState",
    "ExponentEstimate",
    "HORIZON_RATIO",
    "b_cocycle_log_norms",
    "closed_form_growth",
    "cocycle_product",
    "cocycle_step_forward",
    "estimate_chi_pair_C",
    "estimate_chi_plus_B",
    "realise_directive",
    "spectral_norm",
    # Criterion
    "CriterionReport",
    "Verdict",
    "criterion_margin",
]
