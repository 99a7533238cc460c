"""Random rank-1-plus-noise matrix models.

The central object is a dense matrix ``A = sigma * u v^* + E`` kept together
with its generating parts: unit vectors ``u`` and ``v``, the noise matrix
``E``, its largest entry magnitude ``delta``, and the noise-to-signal ratio
``epsilon = delta / (sigma * ||u||_inf * ||v||_inf)``.

All samplers take an explicit :class:`numpy.random.Generator` and are
deterministic functions of (parameters, generator state); there is no hidden
global randomness.  Models are immutable after construction (their arrays are
marked read-only) and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FIELDS",
    "RankOneModel",
    "SingularSpectrumSpec",
    "build_independent_noise_model",
    "build_ratio_model",
    "cnorm",
    "sample_haar_orthonormal",
    "sample_sphere_vector",
]

FIELDS = ("real", "complex")


def _check_field(field: str) -> None:
    if field not in FIELDS:
        raise ValueError(f"field must be one of {FIELDS}, got {field!r}")


def cnorm(M) -> float:
    """Chebyshev norm of a matrix: the largest entry magnitude max |M_ij|."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.abs(M).max())


def sample_sphere_vector(n: int, field: str, rng: np.random.Generator) -> np.ndarray:
    """Draw a unit vector of dimension ``n`` uniformly oriented on the sphere.

    Real case: a standard Gaussian vector, normalized.  Complex case: the same
    Gaussian magnitudes with an independent uniform phase applied per
    component, then normalized.  In both cases every ``|v_i|^2`` follows the
    chi-square(1)-over-chi-square(n) law, which is what the closed-form
    coordinate bounds in :mod:`rank1cross.bounds` are calibrated to.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    _check_field(field)
    g = rng.standard_normal(n)
    while (norm := float(np.linalg.norm(g))) == 0.0:  # pragma: no cover
        g = rng.standard_normal(n)
    v = g / norm
    if field == "complex":
        v = v * np.exp(2j * np.pi * rng.random(n))
    return v


def sample_haar_orthonormal(n: int, field: str, rng: np.random.Generator) -> np.ndarray:
    """Draw an ``n x n`` orthogonal (unitary) matrix from the rotation-invariant
    distribution.

    Standard construction: QR-factor a Gaussian matrix and fold the phases of
    the triangular factor's diagonal into Q, which removes the sign/phase bias
    of plain QR.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    _check_field(field)
    if field == "complex":
        z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    else:
        z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r).copy()
    d[d == 0] = 1.0
    return q * (d / np.abs(d))


@dataclass(frozen=True)
class SingularSpectrumSpec:
    """Recipe for a ratio-controlled random model.

    The leading singular value is solved from
    ``ratio = sigma * ||u||_inf * ||v||_inf / delta`` after the noise part is
    drawn, and all trailing singular values are 1, so the built model has
    ``epsilon = 1 / ratio`` exactly.
    """

    ratio: float
    m: int = 100
    n: int = 100
    field: str = "real"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.ratio) and self.ratio > 0):
            raise ValueError(f"ratio must be a positive finite number, got {self.ratio}")
        if self.m < 1 or self.n < 1:
            raise ValueError(f"dimensions must be >= 1, got {self.m}x{self.n}")
        _check_field(self.field)


@dataclass(frozen=True)
class RankOneModel:
    """A dense matrix ``A = sigma * u v^* + E`` with its parts kept alongside.

    ``delta`` is always the recomputed Chebyshev norm of ``E`` (never an
    independent input) and ``epsilon = delta / (sigma ||u||_inf ||v||_inf)``
    is the noise-to-signal ratio all accuracy guarantees are stated in.
    """

    sigma: float
    u: np.ndarray
    v: np.ndarray
    E: np.ndarray
    A: np.ndarray
    delta: float
    epsilon: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ValueError(f"sigma must be a nonnegative finite number, got {self.sigma}")
        m, n = self.E.shape
        if self.u.shape != (m,) or self.v.shape != (n,) or self.A.shape != (m, n):
            raise ValueError("inconsistent shapes between u, v, E and A")
        kinds = {np.iscomplexobj(a) for a in (self.u, self.v, self.E, self.A)}
        if len(kinds) != 1:
            raise ValueError("mixed real/complex parts are not allowed")
        for name, vec in (("u", self.u), ("v", self.v)):
            norm = float(np.linalg.norm(vec))
            if abs(norm - 1.0) > 1e-12:
                raise ValueError(f"{name} must be a unit vector, got norm {norm!r}")
        if self.delta != cnorm(self.E):
            raise ValueError("delta must equal the recomputed Chebyshev norm of E")
        denom = self.sigma * self.u_inf * self.v_inf
        if denom > 0 and abs(self.epsilon - self.delta / denom) > 1e-12 * max(self.epsilon, 1.0):
            raise ValueError("epsilon is inconsistent with sigma, delta and the vector maxima")
        for arr in (self.u, self.v, self.E, self.A):
            arr.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.E.shape

    @property
    def field(self) -> str:
        return "complex" if np.iscomplexobj(self.A) else "real"

    @property
    def u_inf(self) -> float:
        return float(np.abs(self.u).max())

    @property
    def v_inf(self) -> float:
        return float(np.abs(self.v).max())


def build_ratio_model(spec: SingularSpectrumSpec, rng: np.random.Generator) -> RankOneModel:
    """Build a random model whose noise-to-signal ratio is pinned by ``spec.ratio``.

    Draws rotation-invariant factors ``U`` (m x m) and ``V`` (n x n), takes
    ``u`` as the first column of ``U`` and ``v*`` as the first row of ``V``,
    forms the noise part from all trailing factor pairs with unit weights,
    and solves ``sigma`` so that ``sigma * ||u||_inf * ||v||_inf / delta``
    equals the requested ratio for this realization.
    """
    if min(spec.m, spec.n) < 2:
        raise ValueError("need min(m, n) >= 2 to form a nonzero noise part")
    U = sample_haar_orthonormal(spec.m, spec.field, rng)
    V = sample_haar_orthonormal(spec.n, spec.field, rng)
    u = U[:, 0].copy()
    vrow = V[0, :].copy()
    v = np.conj(vrow)
    r = min(spec.m, spec.n)
    E = U[:, 1:r] @ V[1:r, :]
    delta = cnorm(E)
    u_inf = float(np.abs(u).max())
    v_inf = float(np.abs(v).max())
    sigma = spec.ratio * delta / (u_inf * v_inf)
    A = sigma * np.outer(u, vrow) + E
    epsilon = delta / (sigma * u_inf * v_inf)
    return RankOneModel(sigma=sigma, u=u, v=v, E=E, A=A, delta=delta, epsilon=epsilon)


def build_independent_noise_model(
    m: int,
    n: int,
    sigma: float,
    delta: float,
    rng: np.random.Generator,
) -> RankOneModel:
    """Build a real model whose noise entries are fully independent.

    ``u`` and ``v`` are sphere-uniform and independent of ``E``; each noise
    entry has magnitude uniform on ``[0, delta]`` and an independent random
    sign.  The stored ``delta`` is the realized maximum entry magnitude,
    which is at most the requested ``delta``.
    """
    if m < 2 or n < 2:
        raise ValueError(f"dimensions must be >= 2, got {m}x{n}")
    if not (math.isfinite(delta) and delta > 0):
        raise ValueError(f"delta must be positive, got {delta}")
    if not (math.isfinite(sigma) and sigma > 0):
        raise ValueError(f"sigma must be positive, got {sigma}")
    u = sample_sphere_vector(m, "real", rng)
    v = sample_sphere_vector(n, "real", rng)
    magnitudes = rng.uniform(0.0, delta, size=(m, n))
    signs = np.where(rng.random((m, n)) < 0.5, -1.0, 1.0)
    E = signs * magnitudes
    realized = cnorm(E)
    A = sigma * np.outer(u, v) + E
    epsilon = realized / (sigma * float(np.abs(u).max()) * float(np.abs(v).max()))
    return RankOneModel(sigma=float(sigma), u=u, v=v, E=E, A=A, delta=realized, epsilon=epsilon)
