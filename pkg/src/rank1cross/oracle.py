"""Independent oracles used to validate the closed-form bounds and the pivot
search: adaptive quadrature for chi-square tails, Monte Carlo estimators for
sphere-coordinate and variance-ratio tails, and exhaustive scans over pivots.

The Monte Carlo estimators report a binomial standard error; consumers
compare bounds against ``estimate + 3 * std_error`` to keep checks
deterministic at fixed seeds and honest about sampling noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .maxvol import Pivot, cross_residual, pivot_at

__all__ = [
    "QuadratureError",
    "TailEstimate",
    "best_cross_residual",
    "chi2_tail_exact",
    "fisher_tail_mc",
    "global_argmax",
    "sphere_tail_mc",
]

_MIN_MC_TRIALS = 10_000
_MAX_EXHAUSTIVE_SIZE = 1_000_000


class QuadratureError(RuntimeError):
    """Numerical integration failed to reach the requested accuracy."""


@dataclass(frozen=True)
class TailEstimate:
    """A tail probability with provenance.

    ``samples_or_nodes`` is the Monte Carlo trial count or the number of
    integrand evaluations; ``std_error`` is present exactly for Monte Carlo
    estimates.
    """

    value: float
    method: str
    samples_or_nodes: int
    std_error: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"tail probability must lie in [0, 1], got {self.value}")
        if (self.std_error is not None) != (self.method == "monte-carlo"):
            raise ValueError("std_error must be present exactly for monte-carlo estimates")


def chi2_tail_exact(n: int, threshold: float) -> TailEstimate:
    """Upper-tail probability of a chi-square variable with ``n`` degrees of
    freedom, by adaptive quadrature of the density, to absolute error 1e-10.

    The density is evaluated through its logarithm so large ``n`` neither
    overflows nor loses the normalizing constant.
    """
    if n < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {n}")
    if not (math.isfinite(threshold) and threshold > 0):
        raise ValueError(f"threshold must be positive, got {threshold}")
    log_norm = -(n / 2.0) * math.log(2.0) - math.lgamma(n / 2.0)
    half_n_minus_1 = n / 2.0 - 1.0

    def density(x: float) -> float:
        return math.exp(half_n_minus_1 * math.log(x) - x / 2.0 + log_norm)

    out = integrate.quad(density, threshold, np.inf, epsabs=1e-13, epsrel=1e-13, limit=300, full_output=1)
    if len(out) > 3:
        raise QuadratureError(f"chi-square tail quadrature did not converge: {out[3]}")
    value, abserr, info = out
    if abserr > 1e-10:
        raise QuadratureError(f"chi-square tail quadrature error estimate {abserr:.2e} exceeds 1e-10")
    return TailEstimate(min(max(value, 0.0), 1.0), "quadrature", int(info["neval"]))


def sphere_tail_mc(n: int, tau: float, k: int, trials: int, rng: np.random.Generator) -> TailEstimate:
    """Empirical probability that ``k`` fixed coordinates of a sphere-uniform
    unit vector all have magnitude below ``tau``.

    Coordinate magnitudes are the same for the real and the phase-randomized
    complex sphere constructions, so the real one is sampled.
    """
    if trials < _MIN_MC_TRIALS:
        raise ValueError(f"trials must be >= {_MIN_MC_TRIALS}, got {trials}")
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    hits = 0
    batch = max(1, min(trials, 2_000_000 // n))
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        g = rng.standard_normal((b, n))
        norms = np.sqrt((g * g).sum(axis=1))
        coords = np.abs(g[:, :k]) / norms[:, None]
        hits += int((coords < tau).all(axis=1).sum())
        done += b
    p = hits / trials
    return TailEstimate(p, "monte-carlo", trials, math.sqrt(p * (1.0 - p) / trials))


def fisher_tail_mc(n: int, t: float, trials: int, rng: np.random.Generator) -> TailEstimate:
    """Empirical ``P(x_1^2 / sum_{j >= 2} x_j^2 < t / (1 - t))`` for an
    ``n``-component standard Gaussian vector.

    This is the variance-ratio law behind per-coordinate sphere tails:
    the event equals ``|v_1|^2 < t`` for a sphere-uniform ``v``.
    """
    if trials < _MIN_MC_TRIALS:
        raise ValueError(f"trials must be >= {_MIN_MC_TRIALS}, got {trials}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 0.0 < t < 1.0:
        raise ValueError(f"t must lie in (0, 1), got {t}")
    thresh = t / (1.0 - t)
    hits = 0
    batch = max(1, min(trials, 2_000_000 // n))
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        x = rng.standard_normal((b, n))
        ratio = x[:, 0] ** 2 / (x[:, 1:] ** 2).sum(axis=1)
        hits += int((ratio < thresh).sum())
        done += b
    p = hits / trials
    return TailEstimate(p, "monte-carlo", trials, math.sqrt(p * (1.0 - p) / trials))


def global_argmax(A) -> Pivot:
    """The max-modulus element of ``A`` by exhaustive scan, lexicographically
    smallest position on ties."""
    A = np.asarray(A)
    flat_index = int(np.abs(A).argmax())
    i, j = divmod(flat_index, A.shape[1])
    return pivot_at(A, i, j)


def best_cross_residual(A):
    """The pivot minimizing the cross residual's Chebyshev norm, found by
    evaluating every nonzero pivot; returns ``(pivot, norm)``.

    Full evaluation costs O((m*n)^2), so matrices above one million entries
    are rejected.
    """
    A = np.asarray(A)
    m, n = A.shape
    if m * n > _MAX_EXHAUSTIVE_SIZE:
        raise ValueError(f"matrix too large for exhaustive pivot search: {m}x{n}")
    best_pivot = None
    best_norm = math.inf
    for i in range(m):
        for j in range(n):
            if A[i, j] == 0:
                continue
            _, norm = cross_residual(A, pivot_at(A, i, j))
            if norm < best_norm:
                best_pivot = pivot_at(A, i, j)
                best_norm = norm
    if best_pivot is None:
        raise ValueError("matrix has no nonzero entry: no cross exists")
    return best_pivot, best_norm
