"""Tensor-product quadrature over R^3 in spherical coordinates."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from qflow.errors import DomainError, NumericError

DEFAULT_R_MAX = 60.0
ENV_POINTS = "QFLOW_QUAD_POINTS"


@dataclass(frozen=True)
class QuadratureSpec:
    """Radial rule x Gauss-Legendre in cos(theta) x trapezoid in phi.

    ``radial_rule`` is ``"legendre"`` (Gauss-Legendre on [r_min, r_max] under the
    map r = r_min + (r_max - r_min) u^2, which clusters nodes at the origin) or
    ``"laguerre"`` (Gauss-Laguerre for weight exp(-laguerre_scale * r)).
    ``r_max=None`` lets the integrand's owner pick the cutoff.
    """

    radial_rule: str = "legendre"
    n_radial: int = 160
    n_theta: int = 32
    n_phi: int = 16
    r_min: float = 0.0
    r_max: float | None = None
    laguerre_scale: float = 2.0

    def __post_init__(self):
        if self.radial_rule not in ("legendre", "laguerre"):
            raise DomainError(f"unknown radial rule {self.radial_rule!r}")
        if self.n_radial < 8:
            raise DomainError("n_radial must be >= 8")
        if self.n_theta < 1 or self.n_phi < 1:
            raise DomainError("angular point counts must be >= 1")
        if self.r_min < 0:
            raise DomainError("r_min must be >= 0")
        if self.r_max is not None and self.r_max <= self.r_min:
            raise DomainError("r_max must exceed r_min")

    def refined(self, factor: int = 2) -> "QuadratureSpec":
        return replace(self, n_radial=self.n_radial * factor)


def default_spec(**overrides) -> QuadratureSpec:
    """Default rule; ``QFLOW_QUAD_POINTS`` overrides the radial point count."""
    env = os.environ.get(ENV_POINTS)
    if env and "n_radial" not in overrides:
        try:
            overrides["n_radial"] = int(env)
        except ValueError:
            raise DomainError(f"{ENV_POINTS} must be an integer, got {env!r}") from None
    return QuadratureSpec(**overrides)


@lru_cache(maxsize=64)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


@lru_cache(maxsize=16)
def _gauss_laguerre(n: int):
    return np.polynomial.laguerre.laggauss(n)


def radial_rule(spec: QuadratureSpec, r_max: float | None = None):
    """Nodes and weights for the radial integral of a function against dr."""
    if spec.radial_rule == "laguerre":
        x, w = _gauss_laguerre(spec.n_radial)
        k = spec.laguerre_scale
        # int f dr = int e^-x [e^x f(x/k) / k] dx
        return spec.r_min + x / k, w * np.exp(x) / k
    hi = spec.r_max if spec.r_max is not None else (r_max if r_max is not None else DEFAULT_R_MAX)
    if hi <= spec.r_min:
        raise DomainError("r_max must exceed r_min")
    u, w = _gauss_legendre(spec.n_radial)
    u = 0.5 * (u + 1.0)
    w = 0.5 * w
    span = hi - spec.r_min
    return spec.r_min + span * u * u, w * 2.0 * span * u


def angular_rule(spec: QuadratureSpec):
    """(theta, w_theta, phi, w_phi) with the sin(theta) Jacobian folded into w_theta."""
    x, wx = _gauss_legendre(spec.n_theta)
    theta = np.arccos(x[::-1])
    phi = np.arange(spec.n_phi) * (2.0 * math.pi / spec.n_phi)
    return theta, wx[::-1], phi, np.full(spec.n_phi, 2.0 * math.pi / spec.n_phi)


def grid(spec: QuadratureSpec, r_max: float | None = None):
    """Broadcastable (r, theta, phi) grid and the matching volume weights."""
    r, wr = radial_rule(spec, r_max)
    theta, wt, phi, wp = angular_rule(spec)
    R = r[:, None, None]
    T = theta[None, :, None]
    P = phi[None, None, :]
    W = (wr * r * r)[:, None, None] * wt[None, :, None] * wp[None, None, :]
    return R, T, P, W


def integrate(fn, spec: QuadratureSpec, r_max: float | None = None):
    """Integrate ``fn(r, theta, phi)`` over R^3.

    ``fn`` may return an array broadcast against the grid or a tuple of such
    arrays (vector integrand); the result is a float or a 1-d array.
    """
    R, T, P, W = grid(spec, r_max)
    vals = fn(R, T, P)
    vector = isinstance(vals, tuple)
    comps = vals if vector else (vals,)
    out = []
    for comp in comps:
        comp = np.broadcast_to(np.asarray(comp, dtype=float), W.shape)
        bad = ~np.isfinite(comp)
        if bad.any():
            i, j, k = np.argwhere(bad)[0]
            raise NumericError(
                f"non-finite integrand at r={R[i, 0, 0]!r}, theta={T[0, j, 0]!r}, phi={P[0, 0, k]!r}"
            )
        out.append(float(np.sum(comp * W)))
    return np.array(out) if vector else out[0]
