"""Closed-form constants and accuracy bounds for rank-1 cross approximation
of models ``A = sigma * u v^* + E``.

Everything here is a pure scalar function.  Probability-valued results come
back as :class:`Probability`, which keeps the raw expression value and
records whether clamping into [0, 1] occurred -- a clamped bound is vacuous,
not an error.  Genuine domain violations raise :class:`BoundDomainError`;
no function returns NaN silently.

The key quantities, in the notation used throughout this package:

* ``eps``: noise-to-signal ratio ``delta / (sigma ||u||_inf ||v||_inf)``;
  the guarantees require ``eps <= 1/8``.
* ``mu_lo, mu_hi``: roots of ``mu^2 - mu + 2*eps = 0``.  A column ``j`` is
  called *good* when ``|v_j| > mu_lo * ||v||_inf`` (rows likewise with
  ``u``); the alternating pivot search started in a good column converges to
  a pivot whose relative coordinates both reach ``mu_hi``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EPS_MAX",
    "BoundDomainError",
    "BoundInputs",
    "BoundReport",
    "Probability",
    "WalkConstants",
    "any_large_coord_probability",
    "bad_column_coefficient",
    "bad_column_coefficient_upper",
    "bad_coordinate_fraction",
    "chi2_rate_degradation",
    "chi2_tail_coefficient",
    "chi2_tail_threshold",
    "columns_needed",
    "cross_error_bound",
    "cross_error_bound_real",
    "cross_error_bound_simplified",
    "evaluate_bounds",
    "fixed_step_quality_sequence",
    "good_start_probability",
    "is_mu_coherent",
    "mu_coherence_probability",
    "noise_bound_from_spectrum",
    "noise_bound_unitary",
    "quality_thresholds",
    "small_coord_coefficient",
    "walk_constants",
    "worst_case_error_bound",
]

EPS_MAX = 0.125

# Models pinned to sit exactly at eps = 1/8 land a few ulp above it once the
# ratio is recomputed from rounded parts; accept that much and clamp the
# discriminant at zero.
_EPS_SLACK = 1e-12


class BoundDomainError(ValueError):
    """An input lies outside the domain on which a bound is defined."""


@dataclass(frozen=True)
class Probability:
    """A probability with its raw, possibly out-of-range expression value.

    ``value`` is clamped into [0, 1]; ``vacuous`` is set exactly when the raw
    value fell outside [0, 1], i.e. when the bound says nothing.
    """

    value: float
    raw: float
    vacuous: bool


def _probability(raw: float) -> Probability:
    return Probability(min(1.0, max(0.0, raw)), raw, not 0.0 <= raw <= 1.0)


def _check_tail_domain(n, c) -> None:
    if n <= 2:
        raise BoundDomainError(f"n must be > 2, got {n}")
    if not (math.isfinite(c) and c > 0):
        raise BoundDomainError(f"c must be positive, got {c}")


def _check_eps(eps) -> None:
    if not (0.0 <= eps <= EPS_MAX * (1.0 + _EPS_SLACK)):
        raise BoundDomainError(f"eps must lie in [0, 1/8], got {eps}")


def _check_inf_norm(name, value) -> None:
    if not (0.0 < value <= 1.0):
        raise BoundDomainError(f"{name} must lie in (0, 1], got {value}")


def chi2_tail_threshold(n, c) -> float:
    """Upper-tail threshold ``n - 2 + 2*sqrt(c*(n-2)*ln n)`` for a chi-square
    variable with ``n`` degrees of freedom."""
    _check_tail_domain(n, c)
    return n - 2 + 2.0 * math.sqrt(c * (n - 2) * math.log(n))


def chi2_tail_coefficient(n, c) -> float:
    """Coefficient ``alpha`` such that ``P(chi2_n > chi2_tail_threshold(n, c))
    <= alpha * n**-c``."""
    _check_tail_domain(n, c)
    lead = 1.0 / math.sqrt(math.pi * (n - 2)) + 1.0 / (2.0 * math.sqrt(c * math.pi * math.log(n)))
    return lead * math.exp((4.0 / 3.0) * math.sqrt(c**3 * math.log(n) ** 3 / (n - 2)))


def chi2_rate_degradation(n, c) -> float:
    """``(4/3) * sqrt(c * ln(n) / (n - 2))``.

    The chi-square tail bound decays like ``n**-c`` only when this is well
    below 1; at 1 or above the effective exponent stops being negative and
    the bound should be treated as uninformative.
    """
    _check_tail_domain(n, c)
    return (4.0 / 3.0) * math.sqrt(c * math.log(n) / (n - 2))


def small_coord_coefficient(n, c, tau) -> float:
    """Coefficient ``beta = sqrt(2 * tau^2 * chi2_tail_threshold(n, c) / pi)``.

    Bounds the probability that one fixed coordinate of a sphere-uniform unit
    vector has magnitude below ``tau``; with ``k`` preselected coordinates, at
    least one reaches ``tau`` with probability ``1 - alpha*n**-c - beta**k``.
    """
    if tau < 0:
        raise BoundDomainError(f"tau must be nonnegative, got {tau}")
    return math.sqrt(2.0 * tau * tau * chi2_tail_threshold(n, c) / math.pi)


def any_large_coord_probability(n, c, tau, k) -> Probability:
    """``1 - alpha*n**-c - beta**k``: chance that at least one of ``k``
    preselected coordinates of a sphere-uniform vector has magnitude >= tau."""
    if k < 1:
        raise BoundDomainError(f"k must be >= 1, got {k}")
    raw = 1.0 - chi2_tail_coefficient(n, c) * n ** (-c) - small_coord_coefficient(n, c, tau) ** k
    return _probability(raw)


def quality_thresholds(eps) -> tuple[float, float]:
    """Roots ``(mu_lo, mu_hi)`` of ``mu^2 - mu + 2*eps = 0``, ``mu_lo <= mu_hi``.

    They satisfy ``mu_lo + mu_hi = 1`` and ``mu_lo * mu_hi = 2*eps``, and are
    real exactly when ``eps <= 1/8``.
    """
    _check_eps(eps)
    disc = math.sqrt(max(0.0, 1.0 - 8.0 * eps))
    return (1.0 - disc) / 2.0, (1.0 + disc) / 2.0


def bad_column_coefficient(n, c, eps, v_inf) -> float:
    """``(1 - sqrt(1 - 8*eps)) * v_inf * sqrt(chi2_tail_threshold(n, c)) / sqrt(2*pi)``.

    Bounds the probability that one uniformly placed column is bad.  Equals
    ``small_coord_coefficient(n, c, mu_lo * v_inf)``.
    """
    _check_eps(eps)
    _check_inf_norm("v_inf", v_inf)
    disc = math.sqrt(max(0.0, 1.0 - 8.0 * eps))
    return (1.0 - disc) * v_inf * math.sqrt(chi2_tail_threshold(n, c)) / math.sqrt(2.0 * math.pi)


def bad_column_coefficient_upper(n, c, eps, v_inf) -> float:
    """``8*eps * v_inf * sqrt(chi2_tail_threshold(n, c)) / sqrt(2*pi)``: the
    looser, linear-in-eps form of :func:`bad_column_coefficient`."""
    _check_eps(eps)
    _check_inf_norm("v_inf", v_inf)
    return 8.0 * eps * v_inf * math.sqrt(chi2_tail_threshold(n, c)) / math.sqrt(2.0 * math.pi)


def good_start_probability(n, c, eps, v_inf, k) -> Probability:
    """``1 - alpha*n**-c - beta_v**k``: chance that scanning ``k`` columns for
    the start pivot yields the full error guarantee."""
    if k < 1:
        raise BoundDomainError(f"k must be >= 1, got {k}")
    raw = 1.0 - chi2_tail_coefficient(n, c) * n ** (-c) - bad_column_coefficient(n, c, eps, v_inf) ** k
    return _probability(raw)


def _check_delta(delta) -> None:
    if not (math.isfinite(delta) and delta >= 0):
        raise BoundDomainError(f"delta must be nonnegative, got {delta}")


def cross_error_bound(delta, eps) -> float:
    """``8*delta*(1 + eps) / (1 + sqrt(1 - 8*eps) - 2*eps)``.

    Guaranteed Chebyshev-norm error of the rank-1 cross built at a converged
    pivot reached from a good column.  Equals ``4*delta`` at ``eps = 0`` and
    ``12*delta`` at ``eps = 1/8``.
    """
    _check_delta(delta)
    _check_eps(eps)
    disc = math.sqrt(max(0.0, 1.0 - 8.0 * eps))
    return 8.0 * delta * (1.0 + eps) / (1.0 + disc - 2.0 * eps)


def cross_error_bound_simplified(delta, eps) -> float:
    """``4*delta*(1 + 16*eps)``: a looser closed form that dominates
    :func:`cross_error_bound` on all of [0, 1/8], reaching ``12*delta`` at
    ``eps = 1/8``.  Also the guarantee for the four-alternation variant
    started where ``|v_j| > 4*eps*||v||_inf``."""
    _check_delta(delta)
    _check_eps(eps)
    return 4.0 * delta * (1.0 + 16.0 * eps)


def cross_error_bound_real(delta, eps) -> float:
    """``4*delta*(1 + 4*eps)``: the sharper variant valid for real matrices,
    reaching ``6*delta`` at ``eps = 1/8``."""
    _check_delta(delta)
    _check_eps(eps)
    return 4.0 * delta * (1.0 + 4.0 * eps)


def columns_needed(n, c, bad_coef) -> float:
    """``c * ln(n) / ln(1 / bad_coef)``: how many random columns to scan so a
    good one is among them with the target ``1 - (alpha + 1)*n**-c`` confidence.

    Returns a real number; callers should take the ceiling.  A coefficient
    at or above 1 makes the requirement unattainable and raises; a
    nonpositive coefficient means any single column works, so 1.0 is
    returned (with a warning, since the coefficient is outside its
    meaningful range).
    """
    _check_tail_domain(n, c)
    if bad_coef >= 1.0:
        raise BoundDomainError(f"bad-column coefficient must be < 1, got {bad_coef} (bound vacuous)")
    if bad_coef <= 0.0:
        warnings.warn(
            f"bad-column coefficient {bad_coef} is nonpositive; a single column suffices",
            RuntimeWarning,
            stacklevel=2,
        )
        return 1.0
    return c * math.log(n) / math.log(1.0 / bad_coef)


def fixed_step_quality_sequence(eps) -> tuple[float, float | None, float | None]:
    """Lower bounds on the relative pivot coordinates after successive
    alternations, starting from a column with ``|v_j| > 4*eps*||v||_inf``.

    ``nu_1 = 4*eps`` and ``nu_{k+1} = 1 - 2*eps/nu_k``, which gives
    ``nu_2 = 1/2`` exactly and ``nu_3 = 1 - 4*eps``.  At ``eps = 0`` the
    recurrence is undefined (and unnecessary); the tail entries are None.
    """
    _check_eps(eps)
    nu1 = 4.0 * eps
    if nu1 == 0.0:
        return 0.0, None, None
    nu2 = 1.0 - 2.0 * eps / nu1
    nu3 = 1.0 - 2.0 * eps / nu2
    return nu1, nu2, nu3


@dataclass(frozen=True)
class WalkConstants:
    """Constants controlling the max-among-viewed walk on the fully
    independent noise model.

    ``gamma`` is the per-step exponent in the looser, directly evaluable
    form; ``gamma_strict`` (when defined) is the sharper variant built from
    the per-step threshold ``tau_strict`` with the lower chi-square deviation
    ``n - 2 - 2*sqrt(c*(n-2)*ln n)`` inside, which requires that quantity to
    be positive.  ``success`` is
    ``1 - 2*alpha*n**-c - alpha0*n**(-gamma*k) - (c0*ln(n)/n)**k``.
    """

    gamma: float
    alpha0: float
    eps0: float
    mu0: float | None
    beta: float
    success: Probability
    gamma_strict: float | None
    tau_strict: float | None
    vacuous: bool


def walk_constants(n, c, c0, eps, u_inf, v_inf, k) -> WalkConstants:
    """Evaluate every constant of the k-step max-among-viewed guarantee."""
    _check_tail_domain(n, c)
    _check_eps(eps)
    _check_inf_norm("u_inf", u_inf)
    _check_inf_norm("v_inf", v_inf)
    if not (math.isfinite(c0) and c0 > 0):
        raise BoundDomainError(f"c0 must be positive, got {c0}")
    if k < 1:
        raise BoundDomainError(f"k must be >= 1, got {k}")
    t_plus = chi2_tail_threshold(n, c)
    mu_lo, _ = quality_thresholds(eps)
    beta = small_coord_coefficient(n, c, mu_lo * u_inf)
    gamma = 1.0 - beta - (2.0 * eps * u_inf * v_inf / c0) * (2.0 * t_plus / math.pi)
    eps0 = 2.0 * math.log(n) / n
    t_minus = n - 2 - 2.0 * math.sqrt(c * (n - 2) * math.log(n))
    if t_minus > 0:
        mu0 = c0 * math.log(n) / (n * math.sqrt(2.0 * t_minus / math.pi))
        tau_strict = mu_lo * u_inf + eps0 * eps * u_inf * v_inf / mu0
        gamma_strict = 1.0 - math.sqrt(2.0 * tau_strict**2 * t_minus / math.pi)
    else:
        mu0 = tau_strict = gamma_strict = None
    alpha0 = math.exp(gamma * k * k * math.log(n) ** 2 / (2.0 * n))
    alpha = chi2_tail_coefficient(n, c)
    raw = 1.0 - 2.0 * alpha * n ** (-c) - alpha0 * n ** (-gamma * k) - (c0 * math.log(n) / n) ** k
    success = _probability(raw)
    return WalkConstants(
        gamma=gamma,
        alpha0=alpha0,
        eps0=eps0,
        mu0=mu0,
        beta=beta,
        success=success,
        gamma_strict=gamma_strict,
        tau_strict=tau_strict,
        vacuous=gamma <= 0.0 or success.vacuous,
    )


def is_mu_coherent(v, mu) -> bool:
    """Whether ``max |v_i| <= sqrt(mu / n)``: small ``mu`` means the vector's
    mass is spread evenly over its coordinates."""
    v = np.asarray(v)
    if v.size == 0:
        raise BoundDomainError("vector must be nonempty")
    if not (math.isfinite(mu) and mu > 0):
        raise BoundDomainError(f"mu must be positive, got {mu}")
    return bool(np.abs(v).max() <= math.sqrt(mu / v.size))


def mu_coherence_probability(n, c) -> Probability:
    """``1 - n**(-c*(1 - 1/n)) / sqrt(c * ln n)``: stated chance that a
    sphere-uniform vector is coherent with parameter ``mu = 2*c*ln(n)``.

    Note: Monte Carlo shows the complementary failure rate exceeds the stated
    ``n**(-c*(1-1/n)) / sqrt(c ln n)`` term by roughly a factor of ``n``
    (e.g. at n=100, c=2); the union bound over coordinates supports only the
    n-times-larger constant.  The stated form is evaluated as is.
    """
    if n <= 1:
        raise BoundDomainError(f"n must be > 1, got {n}")
    if not (math.isfinite(c) and c > 0):
        raise BoundDomainError(f"c must be positive, got {c}")
    raw = 1.0 - n ** (-c * (1.0 - 1.0 / n)) / math.sqrt(c * math.log(n))
    return _probability(raw)


def noise_bound_from_spectrum(sigmas, mu, m, n) -> float:
    """``(mu / sqrt(m*n)) * sum of trailing singular values``: bound on the
    largest noise entry when all singular factors are mu-coherent.

    With fewer than two singular values there is no noise part; 0 is
    returned with a warning.
    """
    sig = np.asarray(sigmas, dtype=float)
    if m < 1 or n < 1:
        raise BoundDomainError(f"dimensions must be >= 1, got {m}x{n}")
    if not (math.isfinite(mu) and mu > 0):
        raise BoundDomainError(f"mu must be positive, got {mu}")
    if sig.size and (np.any(sig < 0) or np.any(np.diff(sig) > 0)):
        raise BoundDomainError("singular values must be nonnegative and nonincreasing")
    if sig.size < 2:
        warnings.warn("fewer than 2 singular values: no noise part", RuntimeWarning, stacklevel=2)
        return 0.0
    return float(mu / math.sqrt(m * n) * sig[1:].sum())


def noise_bound_unitary(sigma2, c, m, n) -> tuple[float, Probability]:
    """``sqrt(2*c*ln(m)/m) * sigma2`` and the probability it holds when the
    left singular factor is a rotation-invariant unitary matrix."""
    if m <= 1:
        raise BoundDomainError(f"m must be > 1, got {m}")
    if n < 1:
        raise BoundDomainError(f"n must be >= 1, got {n}")
    if not (math.isfinite(c) and c > 0):
        raise BoundDomainError(f"c must be positive, got {c}")
    if not (math.isfinite(sigma2) and sigma2 >= 0):
        raise BoundDomainError(f"sigma2 must be nonnegative, got {sigma2}")
    bound = math.sqrt(2.0 * c * math.log(m) / m) * sigma2
    raw = 1.0 - n * m ** (-c * (1.0 - 1.0 / m)) / math.sqrt(c * math.log(m))
    return bound, _probability(raw)


def worst_case_error_bound(delta_normalized) -> float:
    """``(1 + d + sqrt((1 + d)(1 + 17 d))) / 2`` with ``d`` the noise level in
    units where ``sigma * ||u||_inf * ||v||_inf = 1``.

    Worst-case error of the cross built at any bidirectionally maximal pivot,
    valid with no restriction on ``eps``; used on the ``eps > 1/8`` side of
    bound curves.
    """
    d = delta_normalized
    if not (math.isfinite(d) and d >= 0):
        raise BoundDomainError(f"normalized delta must be nonnegative, got {d}")
    return (1.0 + d + math.sqrt((1.0 + d) * (1.0 + 17.0 * d))) / 2.0


def bad_coordinate_fraction(v, eps) -> float:
    """Fraction of coordinates with ``|v_i| <= mu_lo * ||v||_inf``: the exact
    probability that a uniformly chosen start column is bad for this ``v``."""
    v = np.asarray(v)
    if v.size == 0:
        raise BoundDomainError("vector must be nonempty")
    mu_lo, _ = quality_thresholds(eps)
    v_inf = float(np.abs(v).max())
    if v_inf == 0.0:
        raise BoundDomainError("bad fraction is undefined for the zero vector")
    return float(np.mean(np.abs(v) <= mu_lo * v_inf))


@dataclass(frozen=True)
class BoundInputs:
    """Validated scalar inputs for a full bound report.

    ``m`` defaults to ``n``; ``u_inf`` and ``v_inf`` default to 1 (the most
    pessimistic admissible vector maxima); ``tau`` is the coordinate
    threshold used for the raw coordinate coefficient and its tail
    probability.
    """

    n: int
    c: float
    eps: float
    delta: float
    m: int | None = None
    c0: float = 1.0
    u_inf: float = 1.0
    v_inf: float = 1.0
    k: int = 1
    tau: float = 0.0

    def __post_init__(self) -> None:
        if self.m is None:
            object.__setattr__(self, "m", self.n)
        if self.n <= 2 or self.m <= 2:
            raise BoundDomainError(f"n and m must be > 2, got n={self.n}, m={self.m}")
        if not (math.isfinite(self.c) and self.c > 0):
            raise BoundDomainError(f"c must be positive, got {self.c}")
        if not (math.isfinite(self.c0) and self.c0 > 0):
            raise BoundDomainError(f"c0 must be positive, got {self.c0}")
        _check_eps(self.eps)
        _check_delta(self.delta)
        _check_inf_norm("u_inf", self.u_inf)
        _check_inf_norm("v_inf", self.v_inf)
        if self.k < 1:
            raise BoundDomainError(f"k must be >= 1, got {self.k}")
        if self.tau < 0:
            raise BoundDomainError(f"tau must be nonnegative, got {self.tau}")


@dataclass(frozen=True)
class BoundReport:
    """Every named constant and bound evaluated from one :class:`BoundInputs`."""

    alpha: float
    beta: float
    beta_v: float
    beta_u: float
    mu_lo: float
    mu_hi: float
    error_bound: float
    error_bound_simplified: float
    error_bound_real: float
    nu: tuple[float, float | None, float | None]
    gamma: float
    alpha0: float
    coord_success: Probability
    good_start_success: Probability
    walk_success: Probability

    def __post_init__(self) -> None:
        if abs(self.mu_lo + self.mu_hi - 1.0) > 1e-12:
            raise ValueError("threshold sum identity violated")


def evaluate_bounds(inputs: BoundInputs) -> BoundReport:
    """Evaluate the complete report: tail constants, quality thresholds, all
    three error-bound forms, the fixed-step sequence, and the success
    probability of each start strategy."""
    n, c = inputs.n, inputs.c
    mu_lo, mu_hi = quality_thresholds(inputs.eps)
    walk = walk_constants(n, c, inputs.c0, inputs.eps, inputs.u_inf, inputs.v_inf, inputs.k)
    return BoundReport(
        alpha=chi2_tail_coefficient(n, c),
        beta=small_coord_coefficient(n, c, inputs.tau),
        beta_v=bad_column_coefficient(n, c, inputs.eps, inputs.v_inf),
        beta_u=bad_column_coefficient(n, c, inputs.eps, inputs.u_inf),
        mu_lo=mu_lo,
        mu_hi=mu_hi,
        error_bound=cross_error_bound(inputs.delta, inputs.eps),
        error_bound_simplified=cross_error_bound_simplified(inputs.delta, inputs.eps),
        error_bound_real=cross_error_bound_real(inputs.delta, inputs.eps),
        nu=fixed_step_quality_sequence(inputs.eps),
        gamma=walk.gamma,
        alpha0=walk.alpha0,
        coord_success=any_large_coord_probability(n, c, inputs.tau, inputs.k),
        good_start_success=good_start_probability(n, c, inputs.eps, inputs.v_inf, inputs.k),
        walk_success=walk.success,
    )
