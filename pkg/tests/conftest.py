"""Pytest configuration and shared fixtures."""

import pytest

from sadic_spectra.config import SubstitutionLoader
from sadic_spectra.core import BlockSubstitution


@pytest.fixture(scope="session")
def substitution_loader() -> SubstitutionLoader:
    """Loader over the shipped substitution files."""
    return SubstitutionLoader()


@pytest.fixture(scope="session")
def thue_morse(substitution_loader: SubstitutionLoader) -> BlockSubstitution:
    """a -> ab, b -> ba."""
    return substitution_loader.load("thue_morse")


@pytest.fixture(scope="session")
def period_doubling(substitution_loader: SubstitutionLoader) -> BlockSubstitution:
    """a -> ab, b -> aa."""
    return substitution_loader.load("period_doubling")


@pytest.fixture(scope="session")
def block_4x3(substitution_loader: SubstitutionLoader) -> BlockSubstitution:
    """Two-dimensional binary block substitution with expansion (4, 3)."""
    return substitution_loader.load("block_4x3")


@pytest.fixture(scope="session")
def constant_sub(substitution_loader: SubstitutionLoader) -> BlockSubstitution:
    """a -> aa, b -> aa; every Fourier matrix is singular."""
    return substitution_loader.load("constant")


@pytest.fixture(scope="session")
def tm_pd(
    thue_morse: BlockSubstitution, period_doubling: BlockSubstitution
) -> list[BlockSubstitution]:
    """Family (Thue-Morse, period-doubling); directive symbol 1 is TM."""
    return [thue_morse, period_doubling]
