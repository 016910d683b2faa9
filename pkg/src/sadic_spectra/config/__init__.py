"""Configuration: substitution files, run profiles and run configs."""

from sadic_spectra.config.loader import (
    DEFAULT_PROFILE_NAME,
    DEFAULT_PROFILES_PATH,
    SHIPPED_SUBSTITUTIONS_DIR,
    InvalidProfileSchemaError,
    ProfileNotFoundError,
    RunProfileLoader,
    SubstitutionLoader,
)
from sadic_spectra.config.models import DEFAULT_SEED, RunConfig, RunProfile, SubstitutionFile

__all__ = [
    # Models
    "DEFAULT_SEED",
    "RunConfig",
    "RunProfile",
    "SubstitutionFile",
    # Loaders
    "DEFAULT_PROFILES_PATH",
    "DEFAULT_PROFILE_NAME",
    "InvalidProfileSchemaError",
    "ProfileNotFoundError",
    "RunProfileLoader",
    "SHIPPED_SUBSTITUTIONS_DIR",
    "SubstitutionLoader",
]
