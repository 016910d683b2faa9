"""Pydantic models for substitution files, run profiles and run configs."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from sadic_spectra.core.patch import DEFAULT_MAX_CELLS
from sadic_spectra.core.substitution import BlockSubstitution
from sadic_spectra.tiling.diffraction import DEFAULT_MAX_T_GRID

DEFAULT_SEED = 20240607


# ═══════════════════════════════════════════════════════════════════════════════
# Substitution definition file
# ═══════════════════════════════════════════════════════════════════════════════


class SubstitutionFile(BaseModel):
    """Schema of a substitution definition JSON document.

    Rule cells are letter names from ``alphabet`` or 1-based integers.
    Shape and range checks belong to ``validate`` on the built substitution.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(..., min_length=1)
    dim: int = Field(..., ge=1)
    alphabet: list[str] = Field(..., min_length=1)
    expansion: list[int] = Field(..., min_length=1)
    rules: dict[str, Any]

    @field_validator("alphabet")
    @classmethod
    def validate_alphabet(cls, v: list[str]) -> list[str]:
        if len(set(v)) != len(v):
            raise ValueError(f"alphabet names must be unique: {v}")
        return v

    @model_validator(mode="after")
    def validate_rule_keys(self) -> SubstitutionFile:
        if len(self.expansion) != self.dim:
            raise ValueError(f"expansion {self.expansion} does not have dim={self.dim} entries")
        if set(self.rules) != set(self.alphabet):
            raise ValueError(
                f"rule keys {sorted(self.rules)} must match alphabet {sorted(self.alphabet)}"
            )
        return self

    def _letter(self, cell: Any, owner: str, at: tuple[int, ...] = ()) -> Any:
        if isinstance(cell, list):
            return [self._letter(c, owner, (*at, i)) for i, c in enumerate(cell)]
        if isinstance(cell, int) and not isinstance(cell, bool):
            return cell
        if isinstance(cell, str) and cell in self.alphabet:
            return self.alphabet.index(cell) + 1
        raise ValueError(
            f"unknown letter {cell!r} at cell {at} in image of '{owner}' "
            f"(alphabet {self.alphabet})"
        )

    def to_substitution(self) -> BlockSubstitution:
        """Translate letter names to indices; the result is not yet validated."""
        return BlockSubstitution.from_rules(
            self.name,
            self.expansion,
            [self._letter(self.rules[letter], letter) for letter in self.alphabet],
            alphabet_size=len(self.alphabet),
            alphabet=self.alphabet,
        )


# ═══════════════════════════════════════════════════════════════════════════════
# Run profiles and configs
# ═══════════════════════════════════════════════════════════════════════════════


class RunProfile(BaseModel):
    """Named bundle of numerical defaults (see ``profiles.json``)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = "default"
    seed: int = Field(DEFAULT_SEED, ge=0)
    steps: int = Field(10_000, ge=1000)
    t_samples: int = Field(100, ge=1)
    grid_per_axis: int = Field(256, ge=16)
    max_cells: int = Field(DEFAULT_MAX_CELLS, ge=1)
    max_t_grid: int = Field(DEFAULT_MAX_T_GRID, ge=1)
    threads: int = Field(1, ge=1)


class RunConfig(BaseModel):
    """Everything that determines a run's outputs.

    Its JSON dump is written as the header of every artifact, so two runs
    with equal configs produce byte-identical files.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    subcommand: str
    artifact_version: str
    profile: str = "default"
    substitutions: list[str] = Field(default_factory=list)
    directive: str | None = None
    seed: int = Field(DEFAULT_SEED, ge=0)
    steps: int = Field(10_000, ge=1000)
    t_samples: int = Field(100, ge=1)
    grid_per_axis: int = Field(256, ge=16)
    max_cells: int = Field(DEFAULT_MAX_CELLS, ge=1)
    max_t_grid: int = Field(DEFAULT_MAX_T_GRID, ge=1)
    threads: int = Field(1, ge=1)
    out: str | None = None
    options: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_profile(
        cls,
        profile: RunProfile,
        subcommand: str,
        artifact_version: str,
        **overrides: Any,
    ) -> RunConfig:
        """Profile values overlaid by every override that is not None."""
        values: dict[str, Any] = profile.model_dump(exclude={"name"})
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(
            subcommand=subcommand,
            artifact_version=artifact_version,
            profile=profile.name,
            **values,
        )

    def header(self) -> dict[str, Any]:
        return self.model_dump(mode="json")


__all__ = ["DEFAULT_SEED", "RunConfig", "RunProfile", "SubstitutionFile"]
