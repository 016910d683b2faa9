"""Loaders for substitution definition files and run profiles.

Shipped data lives next to this module under ``spec/``.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from sadic_spectra.config.models import RunProfile, SubstitutionFile
from sadic_spectra.core.substitution import BlockSubstitution, require_valid
from sadic_spectra.errors import ConfigError, SubstitutionInvalidError

logger = logging.getLogger(__name__)

SPEC_DIR = Path(__file__).parent / "spec"
SHIPPED_SUBSTITUTIONS_DIR = SPEC_DIR / "substitutions"
DEFAULT_PROFILES_PATH = SPEC_DIR / "profiles.json"

DEFAULT_PROFILE_NAME = "default"


# ═══════════════════════════════════════════════════════════════════════════════
# Errors
# ═══════════════════════════════════════════════════════════════════════════════


class ProfileNotFoundError(ConfigError):
    """The requested profile name does not exist."""

    def __init__(self, profile_name: str) -> None:
        self.profile_name = profile_name
        super().__init__(f"Profile not found: {profile_name}", profile=profile_name)


class InvalidProfileSchemaError(ConfigError):
    """The profile JSON does not match the ``RunProfile`` schema."""

    def __init__(self, message: str, profile_name: str | None = None) -> None:
        self.profile_name = profile_name
        super().__init__(f"Invalid profile schema: {message}", profile=profile_name)


def _describe(error: ValidationError) -> list[str]:
    return [
        f"[{' -> '.join(map(str, item['loc']))}]: {item['msg']}" for item in error.errors()
    ]


# ═══════════════════════════════════════════════════════════════════════════════
# SubstitutionLoader
# ═══════════════════════════════════════════════════════════════════════════════


class SubstitutionLoader:
    """Load substitutions from a file path or a shipped name.

    Example:
        >>> loader = SubstitutionLoader()
        >>> tm = loader.load("thue_morse")
        >>> tm.expansion
        (2,)
    """

    def __init__(self, shipped_dir: Path | str = SHIPPED_SUBSTITUTIONS_DIR) -> None:
        self.shipped_dir = Path(shipped_dir)

    def list_shipped(self) -> list[str]:
        return sorted(p.stem for p in self.shipped_dir.glob("*.json"))

    def resolve(self, reference: str | Path) -> Path:
        """An existing path wins; otherwise a bare name is looked up among shipped files."""
        path = Path(reference)
        if path.exists():
            return path
        shipped = self.shipped_dir / f"{reference}.json"
        if shipped.exists():
            return shipped
        raise ConfigError(
            f"Substitution file not found: {reference} (shipped: {self.list_shipped()})",
            reference=str(reference),
        )

    def read(self, reference: str | Path) -> BlockSubstitution:
        """Schema-checked but not domain-validated substitution.

        Raises:
            ConfigError: the file is missing or not JSON.
            SubstitutionInvalidError: the document fails the schema.
        """
        path = self.resolve(reference)
        try:
            with path.open("r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            logger.error("Invalid JSON format in %s: %s", path.name, e)
            raise ConfigError(f"Invalid JSON in {path}: {e}", path=str(path)) from e

        name = str(data.get("name", path.stem)) if isinstance(data, dict) else path.stem
        try:
            document = SubstitutionFile.model_validate(data)
            return document.to_substitution()
        except ValidationError as e:
            violations = _describe(e)
            logger.error("Schema validation failed for %s:", path.name)
            for line in violations:
                logger.error("  %s", line)
            raise SubstitutionInvalidError(name, violations) from e
        except ValueError as e:
            raise SubstitutionInvalidError(name, [str(e)]) from e

    def load(self, reference: str | Path) -> BlockSubstitution:
        """Read and require a valid block substitution."""
        sub = require_valid(self.read(reference))
        logger.info(
            "Loaded substitution '%s' (d=%d, n_a=%d, expansion=%s)",
            sub.name,
            sub.dim,
            sub.alphabet_size,
            list(sub.expansion),
        )
        return sub

    def load_many(self, references: Sequence[str | Path]) -> list[BlockSubstitution]:
        return [self.load(r) for r in references]


# ═══════════════════════════════════════════════════════════════════════════════
# RunProfileLoader
# ═══════════════════════════════════════════════════════════════════════════════


class RunProfileLoader:
    """Named run profiles; every non-default profile inherits from ``default``.

    Example:
        >>> loader = RunProfileLoader()
        >>> loader.load_from_json(DEFAULT_PROFILES_PATH)
        >>> loader.get_profile("quick").steps
        1000
    """

    def __init__(self) -> None:
        self._profiles: dict[str, RunProfile] = {}
        self._loaded_path: Path | None = None

    @property
    def is_loaded(self) -> bool:
        return len(self._profiles) > 0

    def load_from_json(self, path: Path | str = DEFAULT_PROFILES_PATH) -> dict[str, RunProfile]:
        """Load every profile of a JSON file.

        Raises:
            ConfigError: the file does not exist.
            InvalidProfileSchemaError: malformed JSON or profile data.
        """
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Profile file not found: {path}", path=str(path))

        try:
            with path.open("r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise InvalidProfileSchemaError(f"Invalid JSON: {e}") from e

        if not isinstance(data, dict):
            raise InvalidProfileSchemaError("Root must be an object")

        profiles = self.load_from_dict(data)
        self._loaded_path = path
        logger.info("Loaded %d profiles from %s: %s", len(profiles), path, list(profiles))
        return profiles

    def load_from_dict(self, data: dict[str, dict[str, Any]]) -> dict[str, RunProfile]:
        if DEFAULT_PROFILE_NAME not in data:
            raise InvalidProfileSchemaError(f"'{DEFAULT_PROFILE_NAME}' profile is required")

        base = data[DEFAULT_PROFILE_NAME]
        self._profiles = {}
        for name, profile_data in data.items():
            if not isinstance(profile_data, dict):
                raise InvalidProfileSchemaError("Profile data must be an object", profile_name=name)
            merged = profile_data if name == DEFAULT_PROFILE_NAME else {**base, **profile_data}
            self._profiles[name] = self._parse_profile(name, merged)
        return dict(self._profiles)

    def _parse_profile(self, name: str, data: dict[str, Any]) -> RunProfile:
        try:
            return RunProfile.model_validate({**data, "name": name})
        except ValidationError as e:
            raise InvalidProfileSchemaError("; ".join(_describe(e)), profile_name=name) from e

    def get_profile(self, name: str) -> RunProfile:
        if name not in self._profiles:
            raise ProfileNotFoundError(name)
        return self._profiles[name]

    def get_default_profile(self) -> RunProfile:
        return self.get_profile(DEFAULT_PROFILE_NAME)

    def list_profiles(self) -> list[str]:
        return list(self._profiles)

    def has_profile(self, name: str) -> bool:
        return name in self._profiles


__all__ = [
    "DEFAULT_PROFILES_PATH",
    "DEFAULT_PROFILE_NAME",
    "InvalidProfileSchemaError",
    "ProfileNotFoundError",
    "RunProfileLoader",
    "SHIPPED_SUBSTITUTIONS_DIR",
    "SubstitutionLoader",
]
