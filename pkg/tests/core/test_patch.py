"""Unit tests for patches and supertiles."""

from pathlib import Path

import numpy as np
import pytest

from sadic_spectra.core import (
    CACHE_DIR_ENV,
    BlockSubstitution,
    Patch,
    apply_substitution,
    matrix_product,
    supertile,
    supertile_cells,
)
from sadic_spectra.errors import ResourceCapExceededError


class TestPatch:
    """Patch accessors."""

    def test_from_labels(self) -> None:
        patch = Patch.from_labels([1, 2, 2, 1])
        assert patch.dim == 1
        assert patch.extent == (4,)
        assert patch.volume == 4
        assert patch.symbolic() == "1221"
        assert patch.letter_counts(2) == [2, 2]

    def test_scalar_label_becomes_single_cell(self) -> None:
        assert Patch.from_labels(np.int64(2)).extent == (1,)

    def test_symbolic_only_in_one_dimension(self) -> None:
        with pytest.raises(ValueError):
            Patch.from_labels([[1, 2], [2, 1]]).symbolic()

    def test_apply_substitution_prepends_index(self, thue_morse: BlockSubstitution) -> None:
        patch = apply_substitution(thue_morse, Patch.from_labels([1]), 1)
        assert patch.symbolic() == "12"
        assert patch.word == (1,)

    def test_apply_substitution_rejects_foreign_labels(self, thue_morse: BlockSubstitution) -> None:
        with pytest.raises(ValueError):
            apply_substitution(thue_morse, Patch.from_labels([1, 0]))
        with pytest.raises(ValueError):
            apply_substitution(thue_morse, Patch.from_labels([3]))


# ═══════════════════════════════════════════════════════════════════════════════
# supertile
# ═══════════════════════════════════════════════════════════════════════════════


class TestSupertile:
    """ρ_{w_1} ∘ ⋯ ∘ ρ_{w_n}(seed)."""

    def test_thue_morse_two_levels(self, thue_morse: BlockSubstitution) -> None:
        assert supertile([thue_morse], [1, 1], 1).symbolic() == "1221"

    def test_period_doubling_from_second_letter(self, period_doubling: BlockSubstitution) -> None:
        assert supertile([period_doubling], [1], 2).symbolic() == "11"

    def test_empty_word_is_seed(self, thue_morse: BlockSubstitution) -> None:
        patch = supertile([thue_morse], [], 2)
        assert patch.extent == (1,)
        assert patch.symbolic() == "2"

    def test_leftmost_substitution_acts_last(self, tm_pd: list[BlockSubstitution]) -> None:
        """word (TM, PD): PD first gives 12, then TM gives 1221."""
        assert supertile(tm_pd, [1, 2], 1).symbolic() == "1221"
        # word (PD, TM): TM first gives 12, then PD gives 1211
        assert supertile(tm_pd, [2, 1], 1).symbolic() == "1211"

    def test_letter_counts_match_matrix_column(self, tm_pd: list[BlockSubstitution]) -> None:
        rng = np.random.default_rng(5)
        for _ in range(10):
            word = [int(s) for s in rng.integers(1, 3, size=9)]
            for seed_letter in (1, 2):
                patch = supertile(tm_pd, word, seed_letter)
                column = matrix_product(tm_pd, word)[:, seed_letter - 1]
                assert patch.letter_counts(2) == [int(v) for v in column]

    def test_two_dimensional_extent(self, block_4x3: BlockSubstitution) -> None:
        patch = supertile([block_4x3], [1, 1, 1], 1)
        assert patch.extent == (64, 27)
        assert supertile_cells([block_4x3], [1, 1, 1]) == 64 * 27

    def test_cell_cap(self, thue_morse: BlockSubstitution) -> None:
        with pytest.raises(ResourceCapExceededError) as exc_info:
            supertile([thue_morse], [1] * 11, 1, max_cells=1024)
        assert exc_info.value.exit_status == 2
        assert exc_info.value.details["requested"] == 2048

    @pytest.mark.parametrize("seed_letter", [0, -1, 3])
    def test_seed_letter_outside_alphabet(
        self, thue_morse: BlockSubstitution, seed_letter: int
    ) -> None:
        with pytest.raises(ValueError, match="seed letter"):
            supertile([thue_morse], [1], seed_letter)

    @pytest.mark.parametrize("word", [[0], [1, 3], [-1, 1]])
    def test_word_index_outside_family(
        self, tm_pd: list[BlockSubstitution], word: list[int]
    ) -> None:
        with pytest.raises(ValueError, match="word indices"):
            supertile(tm_pd, word, 1)
        with pytest.raises(ValueError):
            supertile_cells(tm_pd, word)


class TestSupertileCache:
    """On-disk memo under SADIC_CACHE_DIR."""

    def test_writes_and_reuses_cache(
        self,
        thue_morse: BlockSubstitution,
        tmp_path: Path,
        monkeypatch: pytest.MonkeyPatch,
    ) -> None:
        monkeypatch.setenv(CACHE_DIR_ENV, str(tmp_path))
        first = supertile([thue_morse], [1] * 6, 1)
        files = list(tmp_path.glob("supertile-*.npy"))
        assert len(files) == 1

        second = supertile([thue_morse], [1] * 6, 1)
        assert np.array_equal(first.cells, second.cells)
        assert second.word == (1,) * 6

    def test_no_cache_without_env(
        self,
        thue_morse: BlockSubstitution,
        tmp_path: Path,
        monkeypatch: pytest.MonkeyPatch,
    ) -> None:
        monkeypatch.delenv(CACHE_DIR_ENV, raising=False)
        monkeypatch.chdir(tmp_path)
        supertile([thue_morse], [1] * 4, 1)
        assert not list(tmp_path.rglob("*.npy"))
