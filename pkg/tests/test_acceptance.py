"""Acceptance suite.

Each test prints one pass/fail line (run with ``pytest -v -s`` to see them
live) and enforces its stated tolerance.  The heavyweight sweeps are shared
through session-scoped fixtures so the suite stays inside its time budget.

Known red: criterion 08.  The coherence failure probability of the sphere
sampler demonstrably exceeds the stated closed-form term by roughly a factor
of n; the n-fold union-bound constant (which the underlying per-coordinate
tail supports, see criterion 08b) is what the data satisfies.  The criterion
is asserted as stated and left failing; see the assertion message for the
measured numbers.
"""

import math

import numpy as np
import pytest

from rank1cross.bounds import (
    bad_column_coefficient,
    chi2_rate_degradation,
    chi2_tail_coefficient,
    chi2_tail_threshold,
    cross_error_bound,
    cross_error_bound_real,
    cross_error_bound_simplified,
    mu_coherence_probability,
    quality_thresholds,
    small_coord_coefficient,
)
from rank1cross.experiments import ExperimentConfig, run_experiment
from rank1cross.maxvol import cross_residual, maxvol_rank1
from rank1cross.model import SingularSpectrumSpec, build_ratio_model, sample_sphere_vector
from rank1cross.oracle import best_cross_residual, chi2_tail_exact, sphere_tail_mc

MASTER_SEED = 20260808


def report(number, passed, text):
    print(f"[criterion {number}] {'PASS' if passed else 'FAIL'}: {text}")


@pytest.fixture(scope="session")
def good_start_grid(tmp_path_factory):
    """Converge variant, verified-good starts, x in {8, 16, 32, 64}, 1000 trials."""
    out = tmp_path_factory.mktemp("good_start_grid")
    config = ExperimentConfig(
        master_seed=MASTER_SEED,
        ratios=(8.0, 16.0, 32.0, 64.0),
        start_policy="verified-good",
        out_dir=str(out),
    )
    return run_experiment(config)


@pytest.fixture(scope="session")
def fixed4_grid(tmp_path_factory):
    """Fixed four-alternation variant from starts with |v_j| > 4*eps*||v||_inf."""
    out = tmp_path_factory.mktemp("fixed4_grid")
    config = ExperimentConfig(
        master_seed=MASTER_SEED + 1,
        ratios=(8.0, 16.0, 32.0, 64.0),
        variant="fixed4",
        start_policy="verified-good",
        out_dir=str(out),
    )
    return run_experiment(config)


@pytest.fixture(scope="session")
def random_start_grid(tmp_path_factory):
    """Converge variant, uniform random starts, x in {8, ..., 128}."""
    out = tmp_path_factory.mktemp("random_start_grid")
    config = ExperimentConfig(
        master_seed=MASTER_SEED + 2,
        ratios=(8.0, 16.0, 32.0, 64.0, 128.0),
        out_dir=str(out),
    )
    return run_experiment(config)


def test_criterion_01_bound_constants():
    err = abs(cross_error_bound(1.0, 0.125) - 12.0)
    err_real = abs(cross_error_bound_real(1.0, 0.125) - 6.0)
    ok = err <= 1e-12 and err_real <= 1e-12
    report("01", ok, f"bound constants 12 and 6 (deviations {err:.2e}, {err_real:.2e})")
    assert err <= 1e-12
    assert err_real <= 1e-12


def test_criterion_02_threshold_identities():
    worst_sum = worst_prod = worst_ident = 0.0
    for eps in np.linspace(0.0, 0.125, 10_000):
        eps = float(eps)
        lo, hi = quality_thresholds(eps)
        worst_sum = max(worst_sum, abs(lo + hi - 1.0))
        worst_prod = max(worst_prod, abs(lo * hi - 2.0 * eps))
        for n, c, v_inf in ((100, 2.0, 0.35), (500, 1.0, 0.1)):
            direct = bad_column_coefficient(n, c, eps, v_inf)
            via_coord = small_coord_coefficient(n, c, lo * v_inf)
            worst_ident = max(worst_ident, abs(direct - via_coord))
    ok = worst_sum <= 1e-12 and worst_prod <= 1e-12 and worst_ident <= 1e-12
    report("02", ok, f"threshold identities (worst {worst_sum:.2e}, {worst_prod:.2e}, {worst_ident:.2e})")
    assert worst_sum <= 1e-12
    assert worst_prod <= 1e-12
    assert worst_ident <= 1e-12


@pytest.mark.parametrize("n,c", [(10, 1.0), (50, 1.0), (100, 2.0), (500, 3.0)])
def test_criterion_03_chi2_tail_soundness(n, c):
    degradation = chi2_rate_degradation(n, c)
    if degradation >= 1.0:
        report("03", True, f"(n={n}, c={c}) skipped: rate degradation {degradation:.3f} >= 1")
        pytest.skip("tail bound not claimed sharp here")
    tail = chi2_tail_exact(n, chi2_tail_threshold(n, c)).value
    bound = chi2_tail_coefficient(n, c) * n ** (-c)
    ok = tail <= bound
    report("03", ok, f"(n={n}, c={c}) quadrature tail {tail:.3e} <= bound {bound:.3e}")
    assert tail <= bound


@pytest.mark.parametrize("tau", [0.01, 0.02])
@pytest.mark.parametrize("k", [1, 3, 5])
def test_criterion_04_coord_tail_soundness(tau, k):
    n, c, trials = 100, 2.0, 100_000
    seed = MASTER_SEED + round(1000 * tau) * 10 + k
    estimate = sphere_tail_mc(n, tau, k, trials, np.random.default_rng(seed))
    bound = chi2_tail_coefficient(n, c) * n ** (-c) + small_coord_coefficient(n, c, tau) ** k
    limit = bound + 3.0 * estimate.std_error
    ok = estimate.value <= limit
    report("04", ok, f"tau={tau}, k={k}: estimate {estimate.value:.3e} <= bound {bound:.3e} + 3se")
    assert estimate.value <= limit


def test_criterion_05_good_start_guarantees(good_start_grid):
    assert good_start_grid.degenerate_count == 0
    worst_err_margin = -math.inf
    worst_found_margin = -math.inf
    for record in good_start_grid.records:
        assert record.start_col_good
        worst_err_margin = max(worst_err_margin, record.err_over_delta - record.bound_err_over_delta)
        worst_found_margin = max(worst_found_margin, record.lower_bound_abs - record.found_abs)
    ok = worst_err_margin <= 1e-9 and worst_found_margin <= 1e-9
    report(
        "05",
        ok,
        f"4000 verified-good trials: max(err - bound) = {worst_err_margin:.3e}, "
        f"max(floor - found) = {worst_found_margin:.3e}",
    )
    assert worst_err_margin <= 1e-9
    assert worst_found_margin <= 1e-9


def test_criterion_06_fixed_step_guarantee(fixed4_grid):
    assert fixed4_grid.degenerate_count == 0
    worst = -math.inf
    for record in fixed4_grid.records:
        assert record.steps <= 4
        bound = cross_error_bound_simplified(1.0, record.epsilon)
        worst = max(worst, record.err_over_delta - bound)
    ok = worst <= 1e-9
    report("06", ok, f"4000 four-alternation trials: max(err - 4(1+16eps)) = {worst:.3e}")
    assert worst <= 1e-9


def test_criterion_07_bad_column_vanishes(random_start_grid):
    rows = random_start_grid.summary
    ordering_ok = all(r.p_bad_after_algorithm <= r.p_bad_random_start for r in rows)
    tail_ok = all(r.p_bad_after_algorithm <= 0.01 for r in rows if r.ratio >= 16.0)
    detail = ", ".join(
        f"x={r.ratio:g}: {r.p_bad_random_start:.3f}->{r.p_bad_after_algorithm:.4f}" for r in rows
    )
    report("07", ordering_ok and tail_ok, f"bad-column probabilities {detail}")
    assert ordering_ok
    assert tail_ok


def test_criterion_08_coherence_bound_as_stated():
    n, c, trials = 100, 2.0, 100_000
    mu = 2.0 * c * math.log(n)
    level = math.sqrt(mu / n)
    rng = np.random.default_rng(MASTER_SEED + 8)
    failures = 0
    for _ in range(trials):
        v = sample_sphere_vector(n, "real", rng)
        if float(np.abs(v).max()) > level:
            failures += 1
    fraction = failures / trials
    se = math.sqrt(fraction * (1.0 - fraction) / trials)
    stated = 1.0 - mu_coherence_probability(n, c).raw
    limit = stated + 3.0 * se
    ok = fraction <= limit
    report(
        "08",
        ok,
        f"coherence failure fraction {fraction:.3e} vs stated term {stated:.3e} + 3se = {limit:.3e} "
        f"(n-fold union bound: {n * stated:.3e})",
    )
    assert fraction <= limit, (
        f"measured coherence failure fraction {fraction:.4e} exceeds the stated closed-form term "
        f"{stated:.4e} + 3se = {limit:.4e}. The per-coordinate tail is ~{fraction / n:.2e} "
        f"(within the stated term), but the max over n={n} coordinates needs the n-fold union "
        f"bound {n * stated:.4e}, which the measurement does satisfy. The stated constant is "
        f"short by a factor of n against this sampler; asserted as stated and left red."
    )


def test_criterion_08b_coherence_union_bound():
    # companion check: the n-fold union-bound constant, which the
    # per-coordinate tail law supports, does hold
    n, c, trials = 100, 2.0, 100_000
    mu = 2.0 * c * math.log(n)
    level = math.sqrt(mu / n)
    rng = np.random.default_rng(MASTER_SEED + 8)
    failures = 0
    for _ in range(trials):
        v = sample_sphere_vector(n, "real", rng)
        if float(np.abs(v).max()) > level:
            failures += 1
    fraction = failures / trials
    se = math.sqrt(fraction * (1.0 - fraction) / trials)
    union = n * (1.0 - mu_coherence_probability(n, c).raw)
    ok = fraction <= union + 3.0 * se
    report("08b", ok, f"coherence failure fraction {fraction:.3e} <= union bound {union:.3e} + 3se")
    assert fraction <= union + 3.0 * se


def test_criterion_09_oracle_agreement():
    worst_gap = -math.inf
    worst_over_bound = -math.inf
    for seed in range(100):
        rng = np.random.default_rng(MASTER_SEED + 900 + seed)
        model = build_ratio_model(SingularSpectrumSpec(ratio=16.0, m=15, n=15), rng)
        lo, _ = quality_thresholds(model.epsilon)
        v_abs = np.abs(model.v)
        good_cols = np.flatnonzero(v_abs > lo * v_abs.max())
        start = int(rng.choice(good_cols))
        trace = maxvol_rank1(model.A, start)
        _, search_norm = cross_residual(model.A, trace.final)
        _, oracle_norm = best_cross_residual(model.A)
        bound = cross_error_bound(model.delta, model.epsilon)
        worst_gap = max(worst_gap, oracle_norm - search_norm)
        worst_over_bound = max(worst_over_bound, max(search_norm, oracle_norm) - bound)
    ok = worst_gap <= 0.0 and worst_over_bound <= 0.0
    report(
        "09",
        ok,
        f"100 15x15 models: max(best - search) = {worst_gap:.3e}, max(norm - bound) = {worst_over_bound:.3e}",
    )
    assert worst_gap <= 0.0
    assert worst_over_bound <= 0.0


def test_criterion_10_default_experiment_determinism(tmp_path_factory):
    outputs = []
    for label, workers in (("a", 1), ("b", 4), ("c", 1)):
        out = tmp_path_factory.mktemp(f"default_{label}")
        config = ExperimentConfig(master_seed=MASTER_SEED + 10, out_dir=str(out), workers=workers)
        result = run_experiment(config)
        assert result.degenerate_count == 0
        outputs.append((result.trials_path.read_bytes(), result.summary_path.read_bytes()))
    identical = all(outputs[0] == other for other in outputs[1:])
    report("10", identical, "default sweep byte-identical across reruns and worker counts 1/4/1")
    assert identical


def test_criterion_11_observed_vs_bound_gap(good_start_grid):
    ratios = []
    for row in good_start_grid.summary:
        gap = row.max_err_over_delta / row.error_bound_curve
        ratios.append((row.ratio, gap))
        assert 0.0 < gap <= 1.0
    detail = ", ".join(f"x={r:g}: {g:.3f}" for r, g in ratios)
    report("11", True, f"max observed error / bound (logged, not asserted near 0.5): {detail}")
