"""Error taxonomy for sadic-spectra.

Every failure raised by the library is a ``SadicError`` carrying an
``ErrorCode``. The CLI turns these into machine-readable error JSON and an
exit status (1 for validation / numerical failures, 2 for resource caps).
"""

from __future__ import annotations

from enum import Enum
from typing import Any

# ═══════════════════════════════════════════════════════════════════════════════
# ErrorCode - failure taxonomy
# ═══════════════════════════════════════════════════════════════════════════════


class ErrorCode(str, Enum):
    """Stable machine-readable failure codes."""

    # A. Input / definition failures
    E_SUBSTITUTION_INVALID = "E_SUBSTITUTION_INVALID"
    E_DIMENSION_MISMATCH = "E_DIMENSION_MISMATCH"
    E_NON_BINARY_ALPHABET = "E_NON_BINARY_ALPHABET"
    E_DIRECTIVE_SPEC = "E_DIRECTIVE_SPEC"
    E_CONFIG = "E_CONFIG"
    E_LEVEL_OUT_OF_RANGE = "E_LEVEL_OUT_OF_RANGE"
    E_RADIUS_TOO_LARGE = "E_RADIUS_TOO_LARGE"

    # B. Numerical failures
    E_COCYCLE_DEGENERATE = "E_COCYCLE_DEGENERATE"
    E_MAHLER_UNDEFINED = "E_MAHLER_UNDEFINED"
    E_SINGULAR_SET_TOO_DENSE = "E_SINGULAR_SET_TOO_DENSE"
    E_SINGULAR_FOURIER_FAMILY = "E_SINGULAR_FOURIER_FAMILY"

    # C. Resource guards
    E_RESOURCE_CAP = "E_RESOURCE_CAP"


# ═══════════════════════════════════════════════════════════════════════════════
# Exception hierarchy
# ═══════════════════════════════════════════════════════════════════════════════


class SadicError(Exception):
    """Base error with a code, structured details and a CLI exit status."""

    code: ErrorCode = ErrorCode.E_CONFIG
    exit_status: int = 1

    def __init__(self, message: str, **details: Any) -> None:
        self.message = message
        self.details = details
        super().__init__(message)

    def to_dict(self) -> dict[str, Any]:
        """JSON-serializable error record."""
        return {
            "error": self.code.value,
            "message": self.message,
            "exit_status": self.exit_status,
            "details": self.details,
        }


class ConfigError(SadicError):
    """Run configuration or profile file is unusable."""

    code = ErrorCode.E_CONFIG


class SubstitutionInvalidError(SadicError):
    """A substitution definition violates the block-substitution invariants."""

    code = ErrorCode.E_SUBSTITUTION_INVALID

    def __init__(self, name: str, violations: list[str]) -> None:
        self.violations = violations
        super().__init__(
            f"Substitution '{name}' is invalid: {violations}",
            substitution=name,
            violations=violations,
        )


class DimensionMismatchError(SadicError):
    """Two objects that must share dimension or alphabet do not."""

    code = ErrorCode.E_DIMENSION_MISMATCH


class NonBinaryAlphabetError(SadicError):
    """An operation defined only for two-letter alphabets got something else."""

    code = ErrorCode.E_NON_BINARY_ALPHABET

    def __init__(self, name: str, alphabet_size: int) -> None:
        super().__init__(
            f"Substitution '{name}' has {alphabet_size} letters; a binary alphabet is required",
            substitution=name,
            alphabet_size=alphabet_size,
        )


class DirectiveSpecError(SadicError):
    """A directive source description cannot be parsed or is inconsistent."""

    code = ErrorCode.E_DIRECTIVE_SPEC


class LevelOutOfRangeError(SadicError):
    """A directive word is too short for the requested substitution level."""

    code = ErrorCode.E_LEVEL_OUT_OF_RANGE


class RadiusTooLargeError(SadicError):
    """A correlation window is too large for the patch it is measured on."""

    code = ErrorCode.E_RADIUS_TOO_LARGE


class CocycleDegenerateError(SadicError):
    """A cocycle product collapsed below the representable range."""

    code = ErrorCode.E_COCYCLE_DEGENERATE


class MahlerUndefinedError(SadicError):
    """The logarithmic Mahler measure of the zero polynomial was requested."""

    code = ErrorCode.E_MAHLER_UNDEFINED

    def __init__(self) -> None:
        super().__init__("mahler undefined for 0")


class SingularSetTooDenseError(SadicError):
    """Quadrature had to exclude more than the allowed share of grid cells."""

    code = ErrorCode.E_SINGULAR_SET_TOO_DENSE

    def __init__(self, excluded: int, total: int) -> None:
        super().__init__(
            "singular set too dense",
            excluded_cells=excluded,
            total_cells=total,
        )


class SingularFourierFamilyError(SadicError):
    """q_{1,2} - q_{2,1} vanishes identically, so every Fourier matrix is singular."""

    code = ErrorCode.E_SINGULAR_FOURIER_FAMILY

    def __init__(self, name: str) -> None:
        super().__init__(
            f"singular Fourier matrix family: q12 - q21 is the zero polynomial for '{name}'",
            substitution=name,
        )


class ResourceCapExceededError(SadicError):
    """A configured resource cap (cells, grid points) would be exceeded."""

    code = ErrorCode.E_RESOURCE_CAP
    exit_status = 2

    def __init__(self, resource: str, requested: int, cap: int) -> None:
        super().__init__(
            f"{resource} cap exceeded: requested {requested}, cap {cap}",
            resource=resource,
            requested=requested,
            cap=cap,
        )


__all__ = [
    "CocycleDegenerateError",
    "ConfigError",
    "DimensionMismatchError",
    "DirectiveSpecError",
    "ErrorCode",
    "LevelOutOfRangeError",
    "MahlerUndefinedError",
    "NonBinaryAlphabetError",
    "RadiusTooLargeError",
    "ResourceCapExceededError",
    "SadicError",
    "SingularFourierFamilyError",
    "SingularSetTooDenseError",
    "SubstitutionInvalidError",
]
