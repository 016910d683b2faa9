"""End-to-end tests for the ``sadic`` command line."""

import csv
import json
import math
from pathlib import Path
from typing import Any

import pytest

from sadic_spectra.cli import build_parser, config_from_args, main
from sadic_spectra.errors import ErrorCode

TM_PD = "thue_morse,period_doubling"
HALF_LOG_TWO = 0.5 * math.log(2)


def csv_rows(text: str) -> list[dict[str, str]]:
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(body))


def error_record(stderr: str) -> dict[str, Any]:
    lines = [line for line in stderr.splitlines() if line.startswith("{")]
    return json.loads(lines[-1])


@pytest.fixture
def bad_letter_file(tmp_path: Path) -> Path:
    path = tmp_path / "bad_letter.json"
    document = {
        "name": "bad_letter",
        "dim": 1,
        "alphabet": ["a", "b"],
        "expansion": [2],
        "rules": {"a": ["a", "b"], "b": ["b", "c"]},
    }
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


# ═══════════════════════════════════════════════════════════════════════════════
# Configuration
# ═══════════════════════════════════════════════════════════════════════════════


class TestConfigFromArgs:
    """Profiles overlaid by flags."""

    def test_profile_defaults(self) -> None:
        args = build_parser().parse_args(["lyapunov", "--subs", TM_PD, "--profile", "quick"])
        config = config_from_args(args)
        assert config.steps == 1000
        assert config.substitutions == ["thue_morse", "period_doubling"]
        assert config.profile == "quick"

    def test_flags_override_profile(self) -> None:
        args = build_parser().parse_args(
            ["criterion", "--subs", "thue_morse", "--subs", "period_doubling", "--steps", "2000"]
        )
        config = config_from_args(args)
        assert config.steps == 2000
        assert config.substitutions == ["thue_morse", "period_doubling"]

    def test_subcommand_options(self) -> None:
        args = build_parser().parse_args(
            ["simulate", "--subs", "thue_morse", "--level", "5", "--t", "0.5", "--t", "0.25"]
        )
        config = config_from_args(args)
        assert config.options["level"] == 5
        assert config.options["t"] == [[0.5], [0.25]]

    def test_steps_below_floor(self, capsys: pytest.CaptureFixture[str]) -> None:
        status = main(["lyapunov", "--subs", TM_PD, "--directive", "constant:1", "--steps", "10"])
        assert status == 1
        assert error_record(capsys.readouterr().err)["error"] == ErrorCode.E_CONFIG.value

    def test_unknown_profile(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["validate", "--subs", "thue_morse", "--profile", "turbo"]) == 1
        assert "turbo" in error_record(capsys.readouterr().err)["message"]


# ═══════════════════════════════════════════════════════════════════════════════
# validate / fourier-eval / mahler
# ═══════════════════════════════════════════════════════════════════════════════


class TestValidateCommand:
    def test_shipped_substitutions(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["validate", "--subs", TM_PD]) == 0
        report = json.loads(capsys.readouterr().out)
        tm, pd = report["substitutions"]
        assert tm["valid"] and pd["valid"]
        assert tm["q_difference"] == "1-z"
        assert pd["matrix"] == [[1, 2], [1, 0]]
        assert tm["mahler_margin"] == pytest.approx(HALF_LOG_TWO)
        assert report["header"]["subcommand"] == "validate"

    def test_bad_letter_lists_the_cell(
        self, bad_letter_file: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        assert main(["validate", "--subs", f"thue_morse,{bad_letter_file}"]) == 1
        captured = capsys.readouterr()
        entries = json.loads(captured.out)["substitutions"]
        assert entries[0]["valid"]
        assert not entries[1]["valid"]
        assert "cell (1,)" in entries[1]["violations"][0]
        error = error_record(captured.err)
        assert error["error"] == ErrorCode.E_SUBSTITUTION_INVALID.value
        assert error["details"]["substitution"] == "bad_letter"

    def test_singular_family_has_no_margin(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["validate", "--subs", "constant"]) == 0
        entry = json.loads(capsys.readouterr().out)["substitutions"][0]
        assert entry["nonsingular"] is False
        assert entry["mahler_margin"] is None


class TestFourierEvalCommand:
    def test_given_point(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["fourier-eval", "--subs", "thue_morse", "--t", "0.25"]) == 0
        (row,) = csv_rows(capsys.readouterr().out)
        assert float(row["re_11"]) == pytest.approx(1.0)
        assert float(row["re_12"]) == pytest.approx(0.0, abs=1e-12)
        assert float(row["im_12"]) == pytest.approx(1.0)

    def test_random_points_per_substitution(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["fourier-eval", "--subs", TM_PD, "--t-samples", "5"]) == 0
        rows = csv_rows(capsys.readouterr().out)
        assert len(rows) == 10
        assert [r["t1"] for r in rows[:5]] == [r["t1"] for r in rows[5:]]

    def test_point_dimension_mismatch(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["fourier-eval", "--subs", "block_4x3", "--t", "0.25"]) == 1
        error = error_record(capsys.readouterr().err)
        assert error["error"] == ErrorCode.E_DIMENSION_MISMATCH.value


class TestMahlerCommand:
    def test_thue_morse_difference(self, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["mahler", "--poly", "substitution:thue_morse", "--method", "jensen"]
        assert main(argv) == 0
        (row,) = csv_rows(capsys.readouterr().out)
        assert row["polynomial"] == "1-z"
        assert float(row["value"]) == pytest.approx(0.0, abs=1e-12)
        assert row["method"] == "jensen_roots"

    def test_constant_polynomial(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["mahler", "--poly", "poly:2"]) == 0
        (row,) = csv_rows(capsys.readouterr().out)
        assert float(row["value"]) == pytest.approx(math.log(2))

    def test_two_variable_quadrature(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["mahler", "--poly", "poly:1+z1+z2", "--grid", "128"]) == 0
        (row,) = csv_rows(capsys.readouterr().out)
        assert float(row["value"]) == pytest.approx(0.3230659472, abs=0.01)
        assert row["method"] == "tensor_quadrature"

    def test_zero_polynomial(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["mahler", "--poly", "poly:z-z"]) == 1
        assert error_record(capsys.readouterr().err)["message"] == "mahler undefined for 0"

    def test_bad_spec(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["mahler", "--poly", "1-z"]) == 1
        assert error_record(capsys.readouterr().err)["error"] == ErrorCode.E_CONFIG.value


# ═══════════════════════════════════════════════════════════════════════════════
# lyapunov / criterion
# ═══════════════════════════════════════════════════════════════════════════════


class TestCocycleCommands:
    """Quick-profile runs of the cocycle estimators."""

    def test_lyapunov_rows(self, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["lyapunov", "--subs", TM_PD, "--directive", "bernoulli:0.5,0.5"]
        assert main([*argv, "--profile", "quick"]) == 0
        rows = csv_rows(capsys.readouterr().out)
        per_sample = [r for r in rows if r["row"] != "summary"]
        assert len(per_sample) == 16
        summary = {r["quantity"]: r for r in rows if r["row"] == "summary"}
        assert set(summary) >= {
            "chi_plus_B",
            "chi_plus_B_debiased",
            "chi_plus_C",
            "chi_minus_C",
            "dropped_C",
        }
        assert float(summary["chi_plus_B"]["closed_form"]) == pytest.approx(0.0, abs=1e-12)

    def test_criterion_report(self, tmp_path: Path) -> None:
        out = tmp_path / "criterion.json"
        argv = ["criterion", "--subs", TM_PD, "--directive", "bernoulli:0.5,0.5"]
        assert main([*argv, "--profile", "quick", "--out", str(out)]) == 0
        report = json.loads(out.read_text(encoding="utf-8"))["report"]
        assert report["margin"] == pytest.approx(HALF_LOG_TWO, abs=0.05)
        assert report["verdict"] in ("positive_margin", "nonpositive_margin")
        assert report["error"] is None

    def test_singular_substitution(self, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["criterion", "--subs", "constant", "--directive", "constant:1"]
        assert main([*argv, "--profile", "quick"]) == 1
        captured = capsys.readouterr()
        report = json.loads(captured.out)["report"]
        assert report["verdict"] == "inconclusive"
        assert report["margin"] is None
        assert error_record(captured.err)["error"] == ErrorCode.E_SINGULAR_FOURIER_FAMILY.value

    def test_missing_directive(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["criterion", "--subs", TM_PD, "--profile", "quick"]) == 1
        assert "--directive" in error_record(capsys.readouterr().err)["message"]

    def test_bad_directive(self, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["criterion", "--subs", TM_PD, "--directive", "bernoulli:0.5,0.4"]
        assert main([*argv, "--profile", "quick"]) == 1
        assert error_record(capsys.readouterr().err)["error"] == ErrorCode.E_DIRECTIVE_SPEC.value

    def test_audit_log(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        audit = tmp_path / "audit.jsonl"
        argv = ["criterion", "--subs", TM_PD, "--directive", "constant:1", "--profile", "quick"]
        assert main([*argv, "--audit-log", str(audit)]) == 0
        stages = [json.loads(line)["stage"] for line in audit.read_text().splitlines()]
        assert stages[0] == "started"
        assert stages[-1] == "finished"
        assert "criterion" in stages


# ═══════════════════════════════════════════════════════════════════════════════
# simulate
# ═══════════════════════════════════════════════════════════════════════════════


class TestSimulateCommand:
    """Artifacts of one supertile."""

    def simulate(self, prefix: Path, *extra: str) -> int:
        return main(
            [
                "simulate",
                "--subs",
                "thue_morse",
                "--directive",
                "constant:1",
                "--level",
                "10",
                "--out",
                str(prefix),
                *extra,
            ]
        )

    def test_artifacts(self, tmp_path: Path) -> None:
        prefix = tmp_path / "runs" / "tm"
        assert self.simulate(prefix) == 0
        for suffix in (".patch.rle", ".correlations.csv", ".diffraction.csv", ".plot.gp"):
            assert Path(f"{prefix}{suffix}").exists()

        summary = json.loads(Path(f"{prefix}.summary.json").read_text(encoding="utf-8"))
        assert summary["extent"] == [1024]
        assert summary["letter_counts"] == summary["expected_letter_counts"] == [512, 512]
        assert summary["frequencies"] == [0.5, 0.5]
        assert summary["diffraction"]["method"] == "dft"
        assert summary["diffraction"]["parseval_residual"] < 1e-9
        assert summary["renormalization"]["residual"] < 0.05

        patch = Path(f"{prefix}.patch.rle").read_text(encoding="utf-8").splitlines()
        assert "# extent: 1024" in patch
        assert patch[-1].startswith("1:1 2:2 1:1")

        script = Path(f"{prefix}.plot.gp").read_text(encoding="utf-8")
        assert "plot 'tm.diffraction.csv'" in script

    def test_rerun_is_byte_identical(self, tmp_path: Path) -> None:
        prefix = tmp_path / "tm"
        suffixes = (".patch.rle", ".correlations.csv", ".diffraction.csv", ".summary.json")
        assert self.simulate(prefix) == 0
        first = {s: Path(f"{prefix}{s}").read_bytes() for s in suffixes}
        assert self.simulate(prefix) == 0
        for suffix in suffixes:
            assert Path(f"{prefix}{suffix}").read_bytes() == first[suffix]

    def test_direct_wave_vectors(self, tmp_path: Path) -> None:
        prefix = tmp_path / "tm"
        assert self.simulate(prefix, "--t", "0.5", "--t", "0.25", "--weights", "1,0") == 0
        rows = csv_rows(Path(f"{prefix}.diffraction.csv").read_text(encoding="utf-8"))
        assert [float(r["t1"]) for r in rows] == [0.5, 0.25]
        assert all(float(r["intensity"]) >= 0 for r in rows)

    def test_two_dimensional_plot(self, tmp_path: Path) -> None:
        prefix = tmp_path / "block"
        argv = ["simulate", "--subs", "block_4x3", "--directive", "constant:1", "--level", "2"]
        assert main([*argv, "--out", str(prefix)]) == 0
        assert "splot" in Path(f"{prefix}.plot.gp").read_text(encoding="utf-8")
        header = Path(f"{prefix}.correlations.csv").read_text(encoding="utf-8").splitlines()[2]
        assert header == "i,j,z1,z2,count,freq"

    def test_needs_out(self, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["simulate", "--subs", "thue_morse", "--directive", "constant:1"]
        assert main(argv) == 1
        assert "--out" in error_record(capsys.readouterr().err)["message"]

    def test_cell_cap_exits_2(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        status = main(
            [
                "simulate",
                "--subs",
                "thue_morse",
                "--directive",
                "constant:1",
                "--level",
                "11",
                "--max-cells",
                "1024",
                "--out",
                str(tmp_path / "tm"),
            ]
        )
        assert status == 2
        error = error_record(capsys.readouterr().err)
        assert error["error"] == ErrorCode.E_RESOURCE_CAP.value
        assert error["details"]["requested"] == 2048

    def test_radius_too_large(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert self.simulate(tmp_path / "tm", "--radius", "300") == 1
        assert error_record(capsys.readouterr().err)["error"] == ErrorCode.E_RADIUS_TOO_LARGE.value
