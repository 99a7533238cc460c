"""Ratio-sweep Monte Carlo protocol.

For each ratio ``x`` on a grid, generate many seeded random models with
``epsilon = 1/x``, run a pivot-search variant on each, and record how the
found element compares to the matrix maximum, how the cross residual
compares to the noise level, and whether the start and final columns are
good.  Per-ratio aggregates come with the matching closed-form bound curves.

Output contract: ``trials.csv`` (one row per generation) and ``summary.csv``
(one row per ratio), LF line endings, floats at 17 significant digits.  Runs
are byte-deterministic for a fixed config: every trial derives its RNG stream
from ``(master_seed, ratio_index, trial_index)``, so output is independent of
execution order and worker count.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from statistics import fmean

import numpy as np

from . import bounds
from .bounds import cross_error_bound, quality_thresholds, worst_case_error_bound
from .maxvol import PivotTrace, cross_residual, maxvol_fixed_steps, maxvol_max_among_viewed, maxvol_rank1, scan_start_column
from .model import RankOneModel, SingularSpectrumSpec, build_ratio_model, cnorm

__all__ = [
    "DEFAULT_RATIOS",
    "START_POLICIES",
    "VARIANTS",
    "BoundCurveRow",
    "ExperimentConfig",
    "ExperimentResult",
    "SummaryRow",
    "TrialRecord",
    "bound_curves",
    "load_config_file",
    "run_experiment",
    "run_trial",
    "write_summary_csv",
    "write_trials_csv",
]

VARIANTS = ("converge", "fixed4", "max-among-viewed")
START_POLICIES = ("random-column", "verified-good", "scan-k")
DEFAULT_RATIOS = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0)

TRIALS_HEADER = "ratio,trial,found_over_max,err_over_delta,start_good,final_good,steps,epsilon,lower_bound,err_bound"
SUMMARY_HEADER = "ratio,mean_found,min_found,mean_err,max_err,lower_bound_curve,err_bound_curve,p_bad_random,p_bad_algo"

_THRESHOLD_LIMIT = bounds.EPS_MAX * (1.0 + 1e-12)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a sweep depends on; hashable and fully explicit.

    ``k`` is the column count for the ``scan-k`` start policy and the
    alternation floor for the ``max-among-viewed`` variant.  ``out_dir`` is
    where ``run_experiment`` writes its CSV files.
    """

    master_seed: int
    ratios: tuple[float, ...] = DEFAULT_RATIOS
    m: int = 100
    n: int = 100
    trials: int = 1000
    variant: str = "converge"
    start_policy: str = "random-column"
    k: int = 4
    field: str = "real"
    out_dir: str = "."
    workers: int = 1

    def __post_init__(self) -> None:
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        ratios = tuple(float(r) for r in self.ratios)
        if not ratios or any(not (math.isfinite(r) and r > 0) for r in ratios):
            raise ValueError("ratios must be a nonempty sequence of positive numbers")
        object.__setattr__(self, "ratios", ratios)
        if self.m < 2 or self.n < 2:
            raise ValueError(f"dimensions must be >= 2, got {self.m}x{self.n}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.start_policy not in START_POLICIES:
            raise ValueError(f"start_policy must be one of {START_POLICIES}, got {self.start_policy!r}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.start_policy == "scan-k" and self.k > self.n:
            raise ValueError(f"scan-k start policy needs k <= n, got k={self.k}, n={self.n}")
        if self.field not in ("real", "complex"):
            raise ValueError(f"field must be 'real' or 'complex', got {self.field!r}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.start_policy == "verified-good" and min(ratios) < 8.0:
            warnings.warn(
                "verified-good start policy cannot verify columns at ratios below 8 "
                "(quality thresholds undefined there); those trials use a plain random start",
                RuntimeWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one model generation.

    The first ten fields are the ``trials.csv`` columns.  Goodness flags are
    None (printed as nan) when the quality thresholds are undefined, i.e.
    ``epsilon > 1/8``; ``lower_bound_value`` is NaN there for the same
    reason, while ``bound_err_over_delta`` switches to the worst-case form.
    The remaining fields are in-memory diagnostics: the unnormalized found
    element, lower bound, matrix maximum, residual norm and noise level, the
    goodness of the first uniformly drawn candidate column (the
    random-start baseline regardless of policy) and the number of rejected
    candidates under ``verified-good``.
    """

    ratio: float
    trial_index: int
    found_over_max: float
    err_over_delta: float
    start_col_good: bool | None
    final_col_good: bool | None
    steps: int
    epsilon: float
    lower_bound_value: float
    bound_err_over_delta: float
    degenerate: bool
    baseline_col_good: bool | None
    resamples: int
    found_abs: float
    lower_bound_abs: float
    max_abs: float
    residual_cnorm: float
    delta: float


@dataclass(frozen=True)
class SummaryRow:
    """Per-ratio aggregate over the non-degenerate trials."""

    ratio: float
    mean_found_over_max: float
    min_found_over_max: float
    mean_err_over_delta: float
    max_err_over_delta: float
    lower_bound_curve: float
    error_bound_curve: float
    p_bad_random_start: float
    p_bad_after_algorithm: float


@dataclass(frozen=True)
class BoundCurveRow:
    """A priori curves for one ratio: the error bound in units of the noise
    level (worst-case form when ``epsilon > 1/8``) and, when defined, the
    guaranteed floor for found-element-over-maximum."""

    ratio: float
    epsilon: float
    err_bound: float
    found_lower_bound: float


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    records: tuple[TrialRecord, ...]
    summary: tuple[SummaryRow, ...]
    degenerate_count: int
    trials_path: Path
    summary_path: Path


def _trial_rng(master_seed: int, ratio_index: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, ratio_index, trial_index]))


def _run_variant(config: ExperimentConfig, A, start_col: int) -> PivotTrace:
    if config.variant == "converge":
        return maxvol_rank1(A, start_col, start_policy=config.start_policy)
    if config.variant == "fixed4":
        return maxvol_fixed_steps(A, start_col, 4, start_policy=config.start_policy)
    return maxvol_max_among_viewed(A, start_col, config.k, start_policy=config.start_policy)


def _good_threshold(config: ExperimentConfig, model: RankOneModel) -> float | None:
    """Verification threshold on |v_j| for the verified-good policy, or None
    when no column can be verified (thresholds undefined, as in the protocol
    that only verifies at ratios >= 8)."""
    eps = model.epsilon
    if config.variant == "fixed4":
        # the four-alternation guarantee needs the stronger start condition
        return 4.0 * eps * model.v_inf if 4.0 * eps < 1.0 else None
    if eps <= _THRESHOLD_LIMIT:
        mu_lo, _ = quality_thresholds(eps)
        return mu_lo * model.v_inf
    return None


def _pick_start(config: ExperimentConfig, model: RankOneModel, rng: np.random.Generator):
    """Choose the start column; returns (start_col, baseline_col, resamples).

    The baseline column is always one uniform draw: under ``random-column``
    it is the start itself, under ``verified-good`` it is the first
    candidate, and under ``scan-k`` it only feeds the random-start baseline
    statistic.
    """
    n = model.shape[1]
    baseline = int(rng.integers(n))
    if config.start_policy == "random-column":
        return baseline, baseline, 0
    if config.start_policy == "verified-good":
        threshold = _good_threshold(config, model)
        if threshold is None:
            return baseline, baseline, 0
        v_abs = np.abs(model.v)
        start = baseline
        resamples = 0
        while not v_abs[start] > threshold:
            start = int(rng.integers(n))
            resamples += 1
        return start, baseline, resamples
    permutation = rng.permutation(n)
    scanned = scan_start_column(np.asarray(model.A)[:, permutation], config.k)
    return int(permutation[scanned]), baseline, 0


def run_trial(config: ExperimentConfig, ratio: float, trial_index: int) -> TrialRecord:
    """Run one generation; deterministic in (config, ratio, trial_index)."""
    return _run_trial(config, float(ratio), config.ratios.index(float(ratio)), trial_index)


def _run_trial(config: ExperimentConfig, ratio: float, ratio_index: int, trial_index: int) -> TrialRecord:
    rng = _trial_rng(config.master_seed, ratio_index, trial_index)
    spec = SingularSpectrumSpec(ratio=ratio, m=config.m, n=config.n, field=config.field)
    model = build_ratio_model(spec, rng)
    eps = model.epsilon
    thresholds_defined = eps <= _THRESHOLD_LIMIT

    start, baseline, resamples = _pick_start(config, model, rng)
    trace = _run_variant(config, model.A, start)
    final = trace.final
    max_abs = cnorm(model.A)

    v_abs = np.abs(model.v)
    v_inf = model.v_inf
    if thresholds_defined:
        mu_lo, mu_hi = quality_thresholds(eps)
        start_good = bool(v_abs[start] > mu_lo * v_inf)
        final_good = bool(v_abs[final.col] > mu_lo * v_inf)
        baseline_good = bool(v_abs[baseline] > mu_lo * v_inf)
        lower_abs = model.sigma * mu_hi * mu_hi * model.u_inf * v_inf + model.delta
        bound_eod = cross_error_bound(1.0, eps)
    else:
        start_good = final_good = baseline_good = None
        lower_abs = math.nan
        bound_eod = worst_case_error_bound(eps)

    if trace.degenerate:
        residual = math.nan
        err_over_delta = math.nan
    else:
        _, residual = cross_residual(model.A, final)
        err_over_delta = residual / model.delta

    return TrialRecord(
        ratio=ratio,
        trial_index=trial_index,
        found_over_max=final.abs_value / max_abs,
        err_over_delta=err_over_delta,
        start_col_good=start_good,
        final_col_good=final_good,
        steps=trace.steps,
        epsilon=eps,
        lower_bound_value=lower_abs / max_abs,
        bound_err_over_delta=bound_eod,
        degenerate=trace.degenerate,
        baseline_col_good=baseline_good,
        resamples=resamples,
        found_abs=final.abs_value,
        lower_bound_abs=lower_abs,
        max_abs=max_abs,
        residual_cnorm=residual,
        delta=model.delta,
    )


def bound_curves(config: ExperimentConfig) -> tuple[BoundCurveRow, ...]:
    """The a priori per-ratio curves (no trials involved).

    With ``epsilon = 1/ratio <= 1/8``: the error bound in noise units and the
    found-element floor ``(mu_hi^2 + eps) / (1 + eps)``, both guaranteed per
    trial from a good start.  Otherwise the worst-case error expression with
    the noise level in units of the rank-1 part's largest entry, and no
    floor.
    """
    rows = []
    for ratio in config.ratios:
        eps = 1.0 / ratio
        if eps <= _THRESHOLD_LIMIT:
            err = cross_error_bound(1.0, eps)
            _, mu_hi = quality_thresholds(eps)
            floor = (mu_hi * mu_hi + eps) / (1.0 + eps)
        else:
            err = worst_case_error_bound(eps)
            floor = math.nan
        rows.append(BoundCurveRow(ratio=ratio, epsilon=eps, err_bound=err, found_lower_bound=floor))
    return tuple(rows)


def _fraction_bad(flags) -> float:
    known = [f for f in flags if f is not None]
    if not known:
        return math.nan
    return sum(1 for f in known if not f) / len(known)


def _summarize(ratio: float, records: list[TrialRecord], err_bound_curve: float) -> SummaryRow:
    ok = [r for r in records if not r.degenerate]
    if not ok:
        nan = math.nan
        return SummaryRow(ratio, nan, nan, nan, nan, nan, err_bound_curve, nan, nan)
    return SummaryRow(
        ratio=ratio,
        mean_found_over_max=fmean(r.found_over_max for r in ok),
        min_found_over_max=min(r.found_over_max for r in ok),
        mean_err_over_delta=fmean(r.err_over_delta for r in ok),
        max_err_over_delta=max(r.err_over_delta for r in ok),
        lower_bound_curve=fmean(r.lower_bound_value for r in ok),
        error_bound_curve=err_bound_curve,
        p_bad_random_start=_fraction_bad(r.baseline_col_good for r in ok),
        p_bad_after_algorithm=_fraction_bad(r.final_col_good for r in ok),
    )


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def _flag(value: bool | None) -> str:
    if value is None:
        return "nan"
    return "1" if value else "0"


def write_trials_csv(path, records) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(TRIALS_HEADER + "\n")
        for r in records:
            f.write(
                ",".join(
                    (
                        _g17(r.ratio),
                        str(r.trial_index),
                        _g17(r.found_over_max),
                        _g17(r.err_over_delta),
                        _flag(r.start_col_good),
                        _flag(r.final_col_good),
                        str(r.steps),
                        _g17(r.epsilon),
                        _g17(r.lower_bound_value),
                        _g17(r.bound_err_over_delta),
                    )
                )
                + "\n"
            )


def write_summary_csv(path, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(SUMMARY_HEADER + "\n")
        for s in rows:
            f.write(
                ",".join(
                    (
                        _g17(s.ratio),
                        _g17(s.mean_found_over_max),
                        _g17(s.min_found_over_max),
                        _g17(s.mean_err_over_delta),
                        _g17(s.max_err_over_delta),
                        _g17(s.lower_bound_curve),
                        _g17(s.error_bound_curve),
                        _g17(s.p_bad_random_start),
                        _g17(s.p_bad_after_algorithm),
                    )
                )
                + "\n"
            )


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the full sweep, write ``trials.csv`` and ``summary.csv`` under
    ``config.out_dir``, and return all records and aggregates.

    The output directory is created and probed for writability before any
    computation starts, so misconfigured paths fail immediately.  Trials may
    execute on ``config.workers`` threads; output order and content do not
    depend on the worker count.
    """
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trials_path = out_dir / "trials.csv"
    summary_path = out_dir / "summary.csv"
    for path in (trials_path, summary_path):
        with open(path, "w", encoding="utf-8"):
            pass

    jobs = [
        (ratio, ratio_index, trial_index)
        for ratio_index, ratio in enumerate(config.ratios)
        for trial_index in range(config.trials)
    ]
    if config.workers == 1:
        records = [_run_trial(config, *job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(lambda job: _run_trial(config, *job), jobs))

    curves = bound_curves(config)
    summary = []
    for ratio_index, ratio in enumerate(config.ratios):
        chunk = records[ratio_index * config.trials : (ratio_index + 1) * config.trials]
        summary.append(_summarize(ratio, chunk, curves[ratio_index].err_bound))

    write_trials_csv(trials_path, records)
    write_summary_csv(summary_path, summary)
    return ExperimentResult(
        config=config,
        records=tuple(records),
        summary=tuple(summary),
        degenerate_count=sum(1 for r in records if r.degenerate),
        trials_path=trials_path,
        summary_path=summary_path,
    )


_CONFIG_PARSERS = {
    "master_seed": int,
    "ratios": lambda s: tuple(float(part) for part in s.replace(",", " ").split()),
    "m": int,
    "n": int,
    "trials": int,
    "variant": str,
    "start_policy": str,
    "k": int,
    "field": str,
    "out_dir": str,
    "workers": int,
}


def load_config_file(path) -> dict:
    """Parse a flat ``key = value`` config file into typed config fields.

    Blank lines and ``#`` comments are ignored; unknown keys are errors.
    """
    values: dict = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _CONFIG_PARSERS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                values[key] = _CONFIG_PARSERS[key](value)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    return values
