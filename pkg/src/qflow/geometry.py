"""Points and vectors in spherical coordinates.

Local basis vectors are right-handed, u_r x u_theta = u_phi.  Helpers work on
scalars or broadcastable numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qflow.errors import DomainError
from qflow.specialfns import exact_sin

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SphericalPoint:
    r: float
    theta: float
    phi: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.r, self.theta, self.phi)):
            raise DomainError(f"non-finite coordinates {self}")
        if self.r < 0:
            raise DomainError(f"r must be >= 0, got {self.r}")
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError(f"theta must lie in [0, pi], got {self.theta}")
        # phi is stored reduced to [0, 2 pi)
        if not 0.0 <= self.phi < TWO_PI:
            object.__setattr__(self, "phi", self.phi % TWO_PI)

    @property
    def on_axis(self) -> bool:
        return self.theta == 0.0 or self.theta == math.pi

    def to_cartesian(self) -> np.ndarray:
        return np.array(spherical_to_cartesian(self.r, self.theta, self.phi))

    @classmethod
    def from_cartesian(cls, xyz) -> "SphericalPoint":
        r, theta, phi = cartesian_to_spherical(*xyz)
        return cls(float(r), float(theta), float(phi))


@dataclass(frozen=True)
class SphericalVector:
    """Components of a vector in the local basis (u_r, u_theta, u_phi) at ``point``."""

    v_r: float
    v_theta: float
    v_phi: float
    point: SphericalPoint | None = None

    def __iter__(self):
        return iter((self.v_r, self.v_theta, self.v_phi))

    def as_array(self) -> np.ndarray:
        return np.array([self.v_r, self.v_theta, self.v_phi])

    @property
    def norm(self) -> float:
        return math.sqrt(self.v_r ** 2 + self.v_theta ** 2 + self.v_phi ** 2)

    def is_zero(self) -> bool:
        return self.v_r == 0.0 and self.v_theta == 0.0 and self.v_phi == 0.0

    def to_cartesian(self) -> np.ndarray:
        if self.point is None:
            raise DomainError("vector has no attached point")
        p = self.point
        return np.array(local_to_cartesian((self.v_r, self.v_theta, self.v_phi), p.theta, p.phi))

    def scaled(self, k: float) -> "SphericalVector":
        return SphericalVector(k * self.v_r, k * self.v_theta, k * self.v_phi, self.point)

    def __add__(self, other: "SphericalVector") -> "SphericalVector":
        return SphericalVector(
            self.v_r + other.v_r, self.v_theta + other.v_theta, self.v_phi + other.v_phi, self.point
        )


def spherical_to_cartesian(r, theta, phi):
    s = exact_sin(theta)
    return r * s * np.cos(phi), r * s * np.sin(phi), r * np.cos(theta)


def cartesian_to_spherical(x, y, z):
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    rho = np.hypot(x, y)
    r = np.hypot(rho, z)
    theta = np.arctan2(rho, z)
    phi = np.mod(np.arctan2(y, x), TWO_PI)
    return r, theta, phi


def local_basis(theta, phi):
    """Cartesian components of (u_r, u_theta, u_phi); each a tuple of 3 arrays."""
    st, ct = exact_sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    u_r = (st * cp, st * sp, ct)
    u_t = (ct * cp, ct * sp, -st)
    u_p = (-sp, cp, np.zeros_like(st * sp))
    return u_r, u_t, u_p


def cartesian_to_local(vec, theta, phi):
    """Project a Cartesian vector (vx, vy, vz) onto the local spherical basis."""
    vx, vy, vz = vec
    return tuple(b[0] * vx + b[1] * vy + b[2] * vz for b in local_basis(theta, phi))


def local_to_cartesian(comps, theta, phi):
    a_r, a_t, a_p = comps
    u_r, u_t, u_p = local_basis(theta, phi)
    return tuple(a_r * u_r[i] + a_t * u_t[i] + a_p * u_p[i] for i in range(3))


def cross(a, b):
    """Cross product of two component triples in one right-handed orthonormal basis."""
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
