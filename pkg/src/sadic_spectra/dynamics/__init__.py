"""Dynamics layer: portable PRNG, directive sources and the torus skew product."""

from sadic_spectra.dynamics.directive import (
    PROBABILITY_TOLERANCE,
    DirectiveKind,
    DirectiveParameters,
    DirectiveSource,
    parse_directive,
    stationary_distribution,
)
from sadic_spectra.dynamics.prng import Xorshift64Star, splitmix64
from sadic_spectra.dynamics.skew import (
    Coordinate,
    SkewOrbitState,
    TorusSampler,
    expansion_schedule,
    sample_torus_orbits,
    skew_step,
)

__all__ = [
    # PRNG
    "Xorshift64Star",
    "splitmix64",
    # Directive sources
    "DirectiveKind",
    "DirectiveParameters",
    "DirectiveSource",
    "PROBABILITY_TOLERANCE",
    "parse_directive",
    "stationary_distribution",
    # Skew product
    "Coordinate",
    "SkewOrbitState",
    "TorusSampler",
    "expansion_schedule",
    "sample_torus_orbits",
    "skew_step",
]
