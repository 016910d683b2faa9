"""Subcommand implementations.

Each command takes a ``RunContext`` and returns the process exit status.
Library errors propagate as ``SadicError``; ``main`` turns them into the
error JSON and exit status.
"""

from __future__ import annotations

import json
import logging
import math
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Any

import numpy as np
import numpy.typing as npt

from sadic_spectra.cli.writers import (
    emit,
    render_csv,
    render_json,
    render_plot_script,
    render_rle_patch,
)
from sadic_spectra.cocycle import (
    criterion_margin,
    estimate_chi_pair_C,
    estimate_chi_plus_B,
    realise_directive,
)
from sadic_spectra.config import RunConfig, SubstitutionLoader
from sadic_spectra.core import (
    BlockSubstitution,
    Patch,
    check_compatible,
    matrix_product,
    substitution_matrix,
    supertile,
    validate,
)
from sadic_spectra.dynamics import DirectiveSource, TorusSampler, parse_directive
from sadic_spectra.errors import (
    ConfigError,
    DimensionMismatchError,
    RadiusTooLargeError,
    SadicError,
    SingularFourierFamilyError,
    SubstitutionInvalidError,
)
from sadic_spectra.observability import RunLogger
from sadic_spectra.spectral import (
    FourierKernel,
    LaurentPolynomial,
    is_nonsingular_family,
    mahler_bound_margin,
    mahler_jensen_1d,
    mahler_measure,
    mahler_monte_carlo,
    mahler_quadrature,
    q_polynomials,
)
from sadic_spectra.tiling import (
    check_renormalization,
    dft_grid_intensity,
    diffraction_intensity,
    expected_letter_counts,
    letter_frequencies,
    pair_correlations,
    perron_frobenius_frequencies,
)

logger = logging.getLogger(__name__)

DEFAULT_CORRELATION_RADIUS = 8
MAHLER_METHODS = ("auto", "jensen", "quad", "mc")


@dataclass
class RunContext:
    """What a command needs besides its config."""

    config: RunConfig
    loader: SubstitutionLoader = field(default_factory=SubstitutionLoader)
    stdout: IO[str] = field(default_factory=lambda: sys.stdout)
    audit: RunLogger | None = None

    def record(self, stage: str, **metrics: Any) -> None:
        if self.audit is not None:
            self.audit.log(stage, **metrics)

    def option(self, key: str, default: Any = None) -> Any:
        value = self.config.options.get(key)
        return default if value is None else value

    def output(self, suffix: str = "") -> Path | None:
        """``--out`` plus ``suffix``; None means standard output."""
        if self.config.out is None:
            return None
        return Path(self.config.out + suffix)

    def substitutions(self) -> list[BlockSubstitution]:
        if not self.config.substitutions:
            raise ConfigError("no substitution files given (--subs)")
        subs = self.loader.load_many(self.config.substitutions)
        check_compatible(subs)
        self.record("substitutions_loaded", names=[s.name for s in subs])
        return subs

    def directive(self) -> DirectiveSource:
        if self.config.directive is None:
            raise ConfigError("no directive given (--directive)")
        return parse_directive(self.config.directive, seed=self.config.seed)

    def t_sampler(self) -> TorusSampler:
        return TorusSampler(seed=self.config.seed, count=self.config.t_samples)


def _finite(value: Any) -> Any:
    """NaN and infinities become null so reports stay strict JSON."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_finite(v) for v in value]
    return value


# ═══════════════════════════════════════════════════════════════════════════════
# validate
# ═══════════════════════════════════════════════════════════════════════════════


def _describe_substitution(ctx: RunContext, sub: BlockSubstitution) -> dict[str, Any]:
    entry: dict[str, Any] = {
        "name": sub.name,
        "dim": sub.dim,
        "alphabet_size": sub.alphabet_size,
        "expansion": list(sub.expansion),
        "det_phi": sub.det_phi,
        "matrix": substitution_matrix(sub).tolist(),
    }
    if sub.alphabet_size != 2:
        return entry

    q = q_polynomials(sub)
    entry["q12"] = str(q.q12)
    entry["q21"] = str(q.q21)
    entry["q_difference"] = str(q.difference)
    entry["nonsingular"] = is_nonsingular_family([sub], seed=ctx.config.seed)
    try:
        entry["mahler_margin"] = mahler_bound_margin(
            sub, grid_per_axis=ctx.config.grid_per_axis, jitter_seed=ctx.config.seed
        )
    except SingularFourierFamilyError:
        entry["mahler_margin"] = None
    return entry


def run_validate(ctx: RunContext) -> int:
    """Report every substitution; fail on the first invalid one after writing the report."""
    if not ctx.config.substitutions:
        raise ConfigError("no substitution files given (--subs)")

    entries: list[dict[str, Any]] = []
    first_failure: SadicError | None = None
    for reference in ctx.config.substitutions:
        try:
            sub = ctx.loader.read(reference)
        except SubstitutionInvalidError as e:
            entries.append({"reference": reference, "valid": False, "violations": e.violations})
            first_failure = first_failure or e
            continue

        report = validate(sub)
        entry: dict[str, Any] = {
            "reference": reference,
            "valid": report.is_valid,
            "violations": list(report.violations),
        }
        if report.is_valid:
            entry.update(_describe_substitution(ctx, sub))
        else:
            first_failure = first_failure or SubstitutionInvalidError(
                sub.name, list(report.violations)
            )
        entries.append(entry)

    ctx.record("validated", valid=sum(1 for e in entries if e["valid"]), total=len(entries))
    emit(render_json(ctx.config, {"substitutions": _finite(entries)}), ctx.output(), ctx.stdout)
    if first_failure is not None:
        raise first_failure
    return 0


# ═══════════════════════════════════════════════════════════════════════════════
# fourier-eval
# ═══════════════════════════════════════════════════════════════════════════════


def _t_points(ctx: RunContext, dim: int) -> npt.NDArray[np.float64]:
    given = ctx.option("t")
    if given is not None:
        points = np.asarray(given, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] != dim:
            raise DimensionMismatchError(
                f"--t points must have {dim} coordinates", points=[list(p) for p in given]
            )
        return points
    return ctx.t_sampler().generator().random((ctx.config.t_samples, dim))


def run_fourier_eval(ctx: RunContext) -> int:
    """CSV rows (substitution, t..., Re/Im of each matrix entry)."""
    subs = ctx.substitutions()
    dim = subs[0].dim
    n = subs[0].alphabet_size
    points = _t_points(ctx, dim)

    columns = ["substitution", *(f"t{c + 1}" for c in range(dim))]
    for k in range(1, n + 1):
        for j in range(1, n + 1):
            columns += [f"re_{k}{j}", f"im_{k}{j}"]

    rows: list[list[Any]] = []
    for sub in subs:
        matrices = FourierKernel.of(sub).matrices(points)
        for t, matrix in zip(points, matrices):
            entries = [part for z in matrix.ravel() for part in (float(z.real), float(z.imag))]
            rows.append([sub.name, *(float(c) for c in t), *entries])

    ctx.record("fourier_evaluated", points=int(points.shape[0]), substitutions=len(subs))
    emit(render_csv(ctx.config, columns, rows), ctx.output(), ctx.stdout)
    return 0


# ═══════════════════════════════════════════════════════════════════════════════
# mahler
# ═══════════════════════════════════════════════════════════════════════════════


def resolve_polynomial(ctx: RunContext, spec: str) -> LaurentPolynomial:
    """``poly:<expression>`` or ``substitution:<name or path>`` (its q12 - q21)."""
    kind, sep, body = spec.partition(":")
    if not sep or not body:
        raise ConfigError(f"polynomial spec '{spec}' must be poly:... or substitution:...")
    match kind:
        case "poly":
            try:
                return LaurentPolynomial.parse(body)
            except ValueError as e:
                raise ConfigError(f"cannot parse polynomial '{body}': {e}") from e
        case "substitution":
            return q_polynomials(ctx.loader.load(body)).difference
    raise ConfigError(f"unknown polynomial spec kind '{kind}'", spec=spec)


def run_mahler(ctx: RunContext) -> int:
    spec = ctx.option("poly")
    if spec is None:
        raise ConfigError("no polynomial given (--poly)")
    method = ctx.option("method", "auto")
    p = resolve_polynomial(ctx, spec)
    grid = ctx.config.grid_per_axis
    seed = ctx.config.seed

    match method:
        case "jensen":
            estimate = mahler_jensen_1d(p)
        case "quad":
            estimate = mahler_quadrature(p, grid, seed)
        case "mc":
            estimate = mahler_monte_carlo(p, grid**p.dim, seed)
        case "auto":
            estimate = mahler_measure(p, grid_per_axis=grid, jitter_seed=seed)
        case _:
            raise ConfigError(f"unknown mahler method '{method}'", choices=list(MAHLER_METHODS))

    row = estimate.to_row()
    ctx.record("mahler_estimated", **row)
    columns = ["polynomial", *row]
    emit(render_csv(ctx.config, columns, [[str(p), *row.values()]]), ctx.output(), ctx.stdout)
    return 0


# ═══════════════════════════════════════════════════════════════════════════════
# lyapunov
# ═══════════════════════════════════════════════════════════════════════════════


def run_lyapunov(ctx: RunContext) -> int:
    """Per-sample B-cocycle rates, then summary rows (and C-cocycle rows when binary)."""
    subs = ctx.substitutions()
    src = ctx.directive()
    sampler = ctx.t_sampler()
    cfg = ctx.config
    kwargs = {"threads": cfg.threads, "grid_per_axis": cfg.grid_per_axis}

    b = estimate_chi_plus_B(subs, src, sampler, cfg.steps, **kwargs)
    rows: list[list[Any]] = [
        [index, "chi_plus_B", rate, None, None] for index, rate in enumerate(b.per_sample)
    ]
    rows.append(["summary", "chi_plus_B", b.chi, b.stderr, b.closed_form])
    rows.append(["summary", "chi_plus_B_debiased", b.debiased, b.debiased_stderr, b.closed_form])
    ctx.record(
        "b_cocycle",
        chi=b.chi,
        stderr=b.stderr,
        debiased=b.debiased,
        closed_form=b.closed_form,
    )

    if subs[0].alphabet_size == 2:
        c = estimate_chi_pair_C(subs, src, sampler, cfg.steps, **kwargs)
        for quantity, estimate in (
            ("chi_plus_C", c.chi_plus),
            ("chi_minus_C", c.chi_minus),
            ("vector_rate_C", c.vector_rate),
            ("log_det_rate_C", c.log_det_rate),
        ):
            rows.append(
                ["summary", quantity, estimate.chi, estimate.stderr, estimate.closed_form]
            )
        rows.append(["summary", "resampled_C", c.resampled, None, None])
        rows.append(["summary", "dropped_C", c.dropped, None, None])
        ctx.record(
            "c_cocycle",
            chi_plus=c.chi_plus.chi,
            chi_minus=c.chi_minus.chi,
            log_det_rate=c.log_det_rate.chi,
            resampled=c.resampled,
            dropped=c.dropped,
        )

    columns = ["row", "quantity", "value", "stderr", "closed_form"]
    emit(render_csv(cfg, columns, rows), ctx.output(), ctx.stdout)
    return 0


# ═══════════════════════════════════════════════════════════════════════════════
# criterion
# ═══════════════════════════════════════════════════════════════════════════════


def run_criterion(ctx: RunContext) -> int:
    subs = ctx.substitutions()
    cfg = ctx.config
    report = criterion_margin(
        subs,
        ctx.directive(),
        ctx.t_sampler(),
        cfg.steps,
        threads=cfg.threads,
        grid_per_axis=cfg.grid_per_axis,
    )
    payload = report.to_dict()
    ctx.record("criterion", margin=report.margin, verdict=report.verdict.value)
    emit(render_json(cfg, {"report": _finite(payload)}), ctx.output(), ctx.stdout)

    if report.error is not None:
        ctx.stdout.flush()
        sys.stderr.write(json.dumps(report.error, sort_keys=True) + "\n")
        return 1
    return 0


# ═══════════════════════════════════════════════════════════════════════════════
# simulate
# ═══════════════════════════════════════════════════════════════════════════════


def parse_weights(text: str | Sequence[complex]) -> tuple[complex, ...]:
    """``"1,-1"`` or ``"1,0.5+0.5j"``."""
    if not isinstance(text, str):
        return tuple(complex(w) for w in text)
    try:
        return tuple(complex(part.strip()) for part in text.split(","))
    except ValueError as e:
        raise ConfigError(f"cannot parse weights '{text}'") from e


def _default_radius(extent: Sequence[int]) -> int:
    return max(0, min(DEFAULT_CORRELATION_RADIUS, (min(extent) - 1) // 4))


def run_simulate(ctx: RunContext) -> int:
    """Patch, correlations, diffraction, plot script and a summary for one supertile."""
    cfg = ctx.config
    if cfg.out is None:
        raise ConfigError("simulate writes several artifacts and needs --out PREFIX")
    subs = ctx.substitutions()
    n = subs[0].alphabet_size
    level = int(ctx.option("level", 8))
    if level < 1:
        raise ConfigError(f"--level must be >= 1, got {level}")
    seed_letter = int(ctx.option("seed_letter", 1))
    if not 1 <= seed_letter <= n:
        raise ConfigError(f"--seed-letter must be in 1..{n}, got {seed_letter}")
    weights = parse_weights(ctx.option("weights", "1,-1" if n == 2 else ",".join(["1"] * n)))
    if len(weights) != n:
        raise DimensionMismatchError(
            f"{len(weights)} weights given for an alphabet of {n} letters", weights=len(weights)
        )

    word = [int(s) for s in realise_directive(subs, ctx.directive(), level)]
    patch = supertile(subs, word, seed_letter, max_cells=cfg.max_cells)
    ctx.record("patch_built", extent=list(patch.extent), word=word)
    emit(render_rle_patch(cfg, patch), ctx.output(".patch.rle"), ctx.stdout)

    radius = int(ctx.option("radius", _default_radius(patch.extent)))
    table = pair_correlations(patch, radius, n, threads=cfg.threads)
    rows = ([i, j, *z, count, freq] for i, j, z, count, freq in table.rows())
    columns = ["i", "j", *(f"z{c + 1}" for c in range(patch.dim)), "count", "freq"]
    emit(render_csv(cfg, columns, rows), ctx.output(".correlations.csv"), ctx.stdout)

    t_points = ctx.option("t")
    if t_points is None:
        grid = dft_grid_intensity(patch, weights, max_t_grid=cfg.max_t_grid)
    else:
        grid = diffraction_intensity(patch, weights, t_points, max_t_grid=cfg.max_t_grid)
    diffraction_path = ctx.output(".diffraction.csv")
    columns = [*(f"t{c + 1}" for c in range(patch.dim)), "intensity"]
    emit(render_csv(cfg, columns, grid.rows()), diffraction_path, ctx.stdout)
    ctx.record("diffraction", method=grid.method.value, points=int(grid.intensity.size))

    script = render_plot_script(cfg, f"{Path(cfg.out).name}.diffraction.csv", patch.dim)
    if script is not None:
        emit(script, ctx.output(".plot.gp"), ctx.stdout)
    else:
        logger.info("No plot script for %d-dimensional patches", patch.dim)

    summary = _simulation_summary(ctx, subs, word, seed_letter, patch, weights, radius)
    summary["diffraction"]["method"] = grid.method.value
    if t_points is None:
        expected = sum(abs(w) ** 2 * f for w, f in zip(weights, summary["frequencies"]))
        summary["diffraction"]["parseval_residual"] = abs(float(grid.intensity.mean()) - expected)
    emit(render_json(cfg, _finite(summary)), ctx.output(".summary.json"), ctx.stdout)
    return 0


def _simulation_summary(
    ctx: RunContext,
    subs: Sequence[BlockSubstitution],
    word: Sequence[int],
    seed_letter: int,
    patch: Patch,
    weights: Sequence[complex],
    radius: int,
) -> dict[str, Any]:
    n = subs[0].alphabet_size
    product = matrix_product(subs, word)
    summary: dict[str, Any] = {
        "word": list(word),
        "extent": list(patch.extent),
        "letter_counts": patch.letter_counts(n),
        "expected_letter_counts": expected_letter_counts(subs, word, seed_letter),
        "frequencies": list(letter_frequencies(patch, n)),
        "perron_frobenius_frequencies": list(
            perron_frobenius_frequencies(np.asarray(product, dtype=np.float64))
        ),
        "correlation_radius": radius,
        "weights": [[w.real, w.imag] for w in weights],
        "diffraction": {},
        "renormalization": None,
    }
    if len(word) >= 2:
        try:
            check = check_renormalization(
                subs, word, seed_letter, len(word) - 1, radius, max_cells=ctx.config.max_cells
            )
            summary["renormalization"] = {
                "residual": check.residual,
                "level": check.level,
                "radius": check.radius,
                "worst_pair": list(check.worst_pair),
                "worst_displacement": list(check.worst_displacement),
            }
            ctx.record("renormalization", residual=check.residual)
        except RadiusTooLargeError as e:
            logger.warning("Renormalization check skipped: %s", e.message)
    return summary


# ═══════════════════════════════════════════════════════════════════════════════
# Dispatch
# ═══════════════════════════════════════════════════════════════════════════════

Command = Callable[[RunContext], int]

COMMANDS: dict[str, Command] = {
    "validate": run_validate,
    "fourier-eval": run_fourier_eval,
    "mahler": run_mahler,
    "lyapunov": run_lyapunov,
    "criterion": run_criterion,
    "simulate": run_simulate,
}


def run(
    config: RunConfig,
    *,
    stdout: IO[str] | None = None,
    loader: SubstitutionLoader | None = None,
    audit: RunLogger | None = None,
) -> int:
    """Execute ``config.subcommand``; returns the exit status.

    Raises:
        SadicError: any validation, numerical or resource failure.
    """
    command = COMMANDS.get(config.subcommand)
    if command is None:
        raise ConfigError(f"unknown subcommand '{config.subcommand}'", choices=list(COMMANDS))
    ctx = RunContext(
        config=config,
        loader=loader or SubstitutionLoader(),
        stdout=stdout or sys.stdout,
        audit=audit,
    )
    ctx.record("started", profile=config.profile)
    status = command(ctx)
    ctx.record("finished", status=status)
    return status


__all__ = [
    "COMMANDS",
    "Command",
    "RunContext",
    "parse_weights",
    "resolve_polynomial",
    "run",
]
