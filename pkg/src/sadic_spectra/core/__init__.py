"""Substitution core: block substitutions, digit sets, matrices and supertiles."""

from sadic_spectra.core.patch import (
    CACHE_DIR_ENV,
    DEFAULT_MAX_CELLS,
    Patch,
    apply_substitution,
    supertile,
    supertile_cells,
)
from sadic_spectra.core.substitution import (
    BlockSubstitution,
    DigitSets,
    SubstitutionMatrix,
    ValidationReport,
    check_compatible,
    compose,
    digit_sets,
    inflate,
    is_positive_product,
    matrix_product,
    require_valid,
    substitution_matrix,
    validate,
)

__all__ = [
    # Substitutions
    "BlockSubstitution",
    "DigitSets",
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
    # Patches
    "CACHE_DIR_ENV",
    "DEFAULT_MAX_CELLS",
    "Patch",
    "apply_substitution",
    "supertile",
    "supertile_cells",
]
