"""Oracle-vs-bound validation suite.

Each check pits a closed-form constant against an independent route to the
same quantity: adaptive quadrature, an exact closed form, a Monte Carlo
estimate, or a hand-traced example.  All randomness is internally seeded, so
the suite is deterministic.  ``fast=True`` shrinks the Monte Carlo sample
counts for quick smoke runs.
"""

from __future__ import annotations

import math
import sys

import numpy as np

from . import bounds, oracle
from .maxvol import cross_residual, maxvol_rank1, pivot_at
from .model import SingularSpectrumSpec, build_ratio_model, cnorm

__all__ = ["run_selftest"]


def _check_chi2_closed_forms() -> str:
    for threshold in (0.5, 1.0, 5.0, 20.0):
        exact2 = math.exp(-threshold / 2.0)
        got2 = oracle.chi2_tail_exact(2, threshold).value
        if abs(got2 - exact2) > 1e-10:
            raise AssertionError(f"n=2 tail at {threshold}: {got2} vs closed form {exact2}")
        exact4 = math.exp(-threshold / 2.0) * (1.0 + threshold / 2.0)
        got4 = oracle.chi2_tail_exact(4, threshold).value
        if abs(got4 - exact4) > 1e-10:
            raise AssertionError(f"n=4 tail at {threshold}: {got4} vs closed form {exact4}")
    return "quadrature matches chi-square closed forms at n=2, 4"


def _check_chi2_tail_bound() -> str:
    lines = []
    for n, c in ((10, 1.0), (50, 1.0), (100, 2.0), (500, 3.0)):
        if bounds.chi2_rate_degradation(n, c) >= 1.0:
            continue
        threshold = bounds.chi2_tail_threshold(n, c)
        tail = oracle.chi2_tail_exact(n, threshold).value
        bound = bounds.chi2_tail_coefficient(n, c) * n ** (-c)
        if tail > bound:
            raise AssertionError(f"(n={n}, c={c}): tail {tail:.3e} exceeds bound {bound:.3e}")
        lines.append(f"(n={n},c={c}) {tail:.2e}<={bound:.2e}")
    return "chi-square tail bound sound: " + ", ".join(lines)


def _check_threshold_identities() -> str:
    for eps in np.linspace(0.0, bounds.EPS_MAX, 2001):
        lo, hi = bounds.quality_thresholds(float(eps))
        if abs(lo + hi - 1.0) > 1e-12 or abs(lo * hi - 2.0 * eps) > 1e-12:
            raise AssertionError(f"threshold identities fail at eps={eps}")
    return "quality thresholds satisfy sum/product identities on [0, 1/8]"


def _check_bad_column_identity() -> str:
    for n in (10, 100, 1000):
        for c in (1.0, 2.0):
            for eps in (0.0, 0.01, 0.06, 0.125):
                for v_inf in (0.1, 0.35, 1.0):
                    lo, _ = bounds.quality_thresholds(eps)
                    direct = bounds.bad_column_coefficient(n, c, eps, v_inf)
                    via_coord = bounds.small_coord_coefficient(n, c, lo * v_inf)
                    if abs(direct - via_coord) > 1e-12:
                        raise AssertionError(f"coefficient mismatch at n={n}, c={c}, eps={eps}, v_inf={v_inf}")
    return "bad-column coefficient equals coordinate coefficient at tau = mu_lo * v_inf"


def _check_error_bound_constants() -> str:
    checks = (
        (bounds.cross_error_bound(1.0, 0.0), 4.0),
        (bounds.cross_error_bound(1.0, 0.125), 12.0),
        (bounds.cross_error_bound_simplified(1.0, 0.125), 12.0),
        (bounds.cross_error_bound_real(1.0, 0.125), 6.0),
        (bounds.worst_case_error_bound(0.0), 1.0),
        (bounds.worst_case_error_bound(1.0), 4.0),
    )
    for got, want in checks:
        if abs(got - want) > 1e-12:
            raise AssertionError(f"constant check failed: {got} != {want}")
    return "error-bound constants hit 4, 12, 6 and worst-case 1, 4"


def _check_sphere_coord_mc(fast: bool) -> str:
    trials = 20_000 if fast else 100_000
    rng = np.random.default_rng(1_234_321)
    n, c, tau, k = 100, 2.0, 0.02, 3
    est = oracle.sphere_tail_mc(n, tau, k, trials, rng)
    bound = bounds.chi2_tail_coefficient(n, c) * n ** (-c) + bounds.small_coord_coefficient(n, c, tau) ** k
    limit = bound + 3.0 * (est.std_error or 0.0)
    if est.value > limit:
        raise AssertionError(f"coordinate MC {est.value:.3e} exceeds bound {bound:.3e} + 3se")
    return f"sphere coordinate MC {est.value:.2e} within bound {bound:.2e}"


def _check_coherence_mc(fast: bool) -> str:
    # The printed coherence constant is too small by a factor of n against
    # this construction (see mu_coherence_probability); the union bound over
    # coordinates supports the n-times-larger constant checked here.
    trials = 20_000 if fast else 100_000
    rng = np.random.default_rng(777_000)
    n, c = 100, 2.0
    mu = 2.0 * c * math.log(n)
    limit_coord = math.sqrt(mu / n)
    fails = 0
    batch = 10_000
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        g = rng.standard_normal((b, n))
        coords = np.abs(g) / np.sqrt((g * g).sum(axis=1, keepdims=True))
        fails += int((coords.max(axis=1) > limit_coord).sum())
        done += b
    p = fails / trials
    se = math.sqrt(max(p * (1.0 - p), 1e-12) / trials)
    stated_failure = 1.0 - bounds.mu_coherence_probability(n, c).raw
    union_bound = n * stated_failure
    if p > union_bound + 3.0 * se:
        raise AssertionError(f"coherence MC {p:.3e} exceeds union bound {union_bound:.3e} + 3se")
    return f"coherence failure MC {p:.2e} within union bound {union_bound:.2e} (printed constant: {stated_failure:.2e})"


def _check_hand_trace() -> str:
    A = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 10.0]])
    trace = maxvol_rank1(A, 0)
    path = [(p.row, p.col, p.value) for p in trace.visited]
    if path != [(2, 0, 7.0), (2, 2, 10.0)] or trace.steps != 2 or not trace.converged:
        raise AssertionError(f"hand trace mismatch: {path}, steps={trace.steps}")
    return "alternating search reproduces the hand-traced 3x3 example"


def _check_cross_interpolation() -> str:
    rng = np.random.default_rng(5150)
    A = rng.standard_normal((12, 9))
    R, _ = cross_residual(A, pivot_at(A, 4, 3))
    if np.any(R[4, :] != 0.0) or np.any(R[:, 3] != 0.0):
        raise AssertionError("cross residual row/column not exactly zero")
    u = rng.standard_normal(10)
    v = rng.standard_normal(7)
    B = np.outer(u, v)
    _, norm = cross_residual(B, pivot_at(B, 2, 2))
    if norm > 1e-12 * cnorm(B):
        raise AssertionError(f"rank-1 cross residual too large: {norm}")
    return "cross residual interpolates exactly and annihilates rank-1 input"


def _check_strict_ascent() -> str:
    rng = np.random.default_rng(90125)
    for _ in range(50):
        A = rng.standard_normal((15, 11))
        trace = maxvol_rank1(A, int(rng.integers(11)))
        mags = [p.abs_value for p in trace.visited]
        if any(b <= a for a, b in zip(mags, mags[1:])):
            raise AssertionError(f"pivot magnitudes not strictly increasing: {mags}")
        if not trace.converged:
            raise AssertionError("search failed to converge on a random matrix")
    return "pivot magnitudes strictly increase and searches converge"


def _check_ratio_model() -> str:
    rng = np.random.default_rng(112233)
    for x in (2.0, 8.0, 64.0):
        model = build_ratio_model(SingularSpectrumSpec(ratio=x, m=40, n=40), rng)
        if abs(model.epsilon - 1.0 / x) > 1e-10 / x:
            raise AssertionError(f"ratio {x}: epsilon {model.epsilon} != {1.0 / x}")
        if model.delta != cnorm(model.E):
            raise AssertionError("stored delta differs from recomputed noise maximum")
    return "ratio models hit epsilon = 1/ratio and recomputed delta"


def run_selftest(fast: bool = False, out=None) -> bool:
    """Run every check, print one ok/FAIL line per check, and return whether
    all of them passed."""
    out = out or sys.stdout
    checks = (
        ("chi2-closed-forms", _check_chi2_closed_forms),
        ("chi2-tail-bound", _check_chi2_tail_bound),
        ("threshold-identities", _check_threshold_identities),
        ("bad-column-identity", _check_bad_column_identity),
        ("error-bound-constants", _check_error_bound_constants),
        ("sphere-coord-mc", lambda: _check_sphere_coord_mc(fast)),
        ("coherence-mc", lambda: _check_coherence_mc(fast)),
        ("hand-trace", _check_hand_trace),
        ("cross-interpolation", _check_cross_interpolation),
        ("strict-ascent", _check_strict_ascent),
        ("ratio-model", _check_ratio_model),
    )
    all_ok = True
    for name, fn in checks:
        try:
            detail = fn()
        except Exception as exc:
            all_ok = False
            print(f"FAIL {name}: {exc}", file=out)
        else:
            print(f"ok   {name}: {detail}", file=out)
    print(("all checks passed" if all_ok else "SELFTEST FAILED"), file=out)
    return all_ok
