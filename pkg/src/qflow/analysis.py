"""Numerical checks on the currents: normalization, continuity, mean Gordon
angular momentum, streamlines and Dirac versus Schrodinger comparisons."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from qflow import quadrature
from qflow.currents import (
    SpinVector,
    dirac_velocity,
    resolve_spin,
    schrodinger_current_j1,
    velocity,
)
from qflow.eigenstates import HydrogenState, SchrodingerState, dirac_1s_state
from qflow.errors import DomainError, NumericError, QflowError
from qflow.geometry import (
    SphericalPoint,
    SphericalVector,
    cartesian_to_spherical,
    local_to_cartesian,
    spherical_to_cartesian,
)
from qflow.quadrature import QuadratureSpec, default_spec

VectorField = Callable[[SphericalPoint], SphericalVector]


def integrate_density(state, spec: QuadratureSpec | None = None) -> float:
    """Integral of the density over R^3.

    ``state`` is anything with a ``density(r, theta, phi)`` method (its
    ``extent`` sets the radial cutoff) or a bare callable of the same signature.
    """
    spec = spec or default_spec()
    fn = getattr(state, "density", state)
    return quadrature.integrate(fn, spec, getattr(state, "extent", None))


def divergence(field: VectorField, p: SphericalPoint, h: float = 1e-4) -> float:
    """Central-difference divergence in spherical coordinates.

    Steps: dr = h, d(theta) = d(phi) = h / r.  The azimuthal step is not
    stretched by 1 / sin(theta), which would coarsen the stencil near the axis.
    """
    r, th, ph = p.r, p.theta, p.phi
    if not h > 0:
        raise DomainError("step must be positive")
    if r <= h:
        raise DomainError(f"divergence needs r > h, got r={r}, h={h}")
    dth = h / r
    st = math.sin(th)
    if th - dth <= 0.0 or th + dth >= math.pi:
        raise DomainError(f"point {p} too close to the polar axis for h={h}")
    dph = dth

    def at(rr, tt, pp):
        return field(SphericalPoint(rr, tt, pp % (2.0 * math.pi)))

    radial = ((r + h) ** 2 * at(r + h, th, ph).v_r - (r - h) ** 2 * at(r - h, th, ph).v_r) / (2.0 * h * r * r)
    polar = (
        math.sin(th + dth) * at(r, th + dth, ph).v_theta - math.sin(th - dth) * at(r, th - dth, ph).v_theta
    ) / (2.0 * dth * r * st)
    azimuthal = (at(r, th, ph + dph).v_phi - at(r, th, ph - dph).v_phi) / (2.0 * dph * r * st)
    return radial + polar + azimuthal


def mean_gordon_angular_momentum(state: SchrodingerState, spin, spec: QuadratureSpec | None = None) -> np.ndarray:
    """Cartesian integral of r x (grad rho x s) over R^3 (mass = 1)."""
    spec = spec or default_spec()
    spin = resolve_spin(spin, state)
    s = np.asarray(spin.s)

    def integrand(r, theta, phi):
        rho = state.density(r, theta, phi)
        g = local_to_cartesian(state.density_gradient(r, theta, phi), theta, phi)
        x = spherical_to_cartesian(r, theta, phi)
        r_dot_s = x[0] * s[0] + x[1] * s[1] + x[2] * s[2]
        r_dot_g = x[0] * g[0] + x[1] * g[1] + x[2] * g[2]
        L = tuple(g[i] * r_dot_s - s[i] * r_dot_g for i in range(3))
        return (rho,) + L

    out = quadrature.integrate(integrand, spec, state.extent)
    if abs(out[0] - 1.0) > 1e-6:
        raise NumericError(f"quadrature norm {out[0]!r} for {state.label}; refine the rule")
    return out[1:] / state.mass


# ---------------------------------------------------------------------------
# streamlines


@dataclass
class Trajectory:
    times: np.ndarray
    xyz: np.ndarray  # (n, 3)
    dt: float
    label: str = ""

    def __len__(self) -> int:
        return len(self.times)

    @property
    def points(self) -> list[SphericalPoint]:
        return [SphericalPoint.from_cartesian(row) for row in self.xyz]

    def spherical(self):
        return cartesian_to_spherical(self.xyz[:, 0], self.xyz[:, 1], self.xyz[:, 2])

    def rows(self):
        """(t, x, y, z, r, theta, phi) tuples in sample order."""
        r, th, ph = self.spherical()
        for i in range(len(self.times)):
            yield (self.times[i], *self.xyz[i], r[i], th[i], ph[i])

    def azimuthal_period(self) -> float:
        """Time for the unwrapped azimuth to advance by 2 pi (linear interpolation)."""
        phase = np.unwrap(np.arctan2(self.xyz[:, 1], self.xyz[:, 0]))
        swept = np.abs(phase - phase[0])
        idx = np.nonzero(swept >= 2.0 * math.pi)[0]
        if idx.size == 0:
            raise NumericError("trajectory does not complete a revolution")
        k = idx[0]
        frac = (2.0 * math.pi - swept[k - 1]) / (swept[k] - swept[k - 1])
        return float(self.times[k - 1] + frac * (self.times[k] - self.times[k - 1]))


class StreamlineError(QflowError):
    """Velocity evaluation failed mid-path; ``trajectory`` holds the prefix."""

    def __init__(self, message: str, trajectory: Trajectory, cause: Exception):
        super().__init__(message)
        self.trajectory = trajectory
        self.cause = cause


def _cartesian_velocity(vel: VectorField, x: np.ndarray) -> np.ndarray:
    p = SphericalPoint.from_cartesian(x)
    v = vel(p)
    return np.array(local_to_cartesian(tuple(v), p.theta, p.phi), dtype=float)


def streamline(vel: VectorField, start: SphericalPoint, dt: float, n_steps: int, label: str = "") -> Trajectory:
    """Fixed-step RK4 integration of dx/dt = vel(x) in Cartesian coordinates."""
    if not dt > 0:
        raise DomainError("dt must be positive")
    if n_steps < 0:
        raise DomainError("n_steps must be >= 0")
    xyz = np.empty((n_steps + 1, 3))
    xyz[0] = start.to_cartesian()
    times = dt * np.arange(n_steps + 1)
    x = xyz[0].copy()
    for i in range(n_steps):
        try:
            k1 = _cartesian_velocity(vel, x)
            k2 = _cartesian_velocity(vel, x + 0.5 * dt * k1)
            k3 = _cartesian_velocity(vel, x + 0.5 * dt * k2)
            k4 = _cartesian_velocity(vel, x + dt * k3)
        except QflowError as exc:
            prefix = Trajectory(times[: i + 1].copy(), xyz[: i + 1].copy(), dt, label)
            raise StreamlineError(f"streamline stopped after {i} steps: {exc}", prefix, exc) from exc
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(x)):
            prefix = Trajectory(times[: i + 1].copy(), xyz[: i + 1].copy(), dt, label)
            err = NumericError("non-finite position")
            raise StreamlineError(f"streamline diverged after {i} steps", prefix, err)
        xyz[i + 1] = x
    return Trajectory(times, xyz, dt, label)


def state_velocity(state: SchrodingerState, spin="auto") -> VectorField:
    spin = resolve_spin(spin, state)
    return lambda p: velocity(state, spin, p)


# ---------------------------------------------------------------------------
# Dirac versus Schrodinger


@dataclass
class ComparisonRecord:
    point: SphericalPoint
    v_dirac: float = math.nan
    v_schrodinger_gordon: float = math.nan
    v_classical: float = math.nan
    abs_deviation: float = math.nan
    rel_deviation: float = math.nan
    error: str | None = None


@dataclass
class ComparisonReport:
    records: list[ComparisonRecord] = field(default_factory=list)
    spin_sign: int = 1

    @property
    def max_abs_deviation(self) -> float:
        vals = [r.abs_deviation for r in self.records if r.error is None]
        return max(vals, default=0.0)

    @property
    def max_rel_deviation(self) -> float:
        vals = [r.rel_deviation for r in self.records if r.error is None]
        return max(vals, default=0.0)

    @property
    def n_errors(self) -> int:
        return sum(r.error is not None for r in self.records)


def compare_dirac_schrodinger(points: Sequence[SphericalPoint], m: float = 0.5) -> ComparisonReport:
    """Azimuthal 1s velocities from the Dirac current, from J1 + J2 and from J1 alone."""
    dirac = dirac_1s_state(m)
    schrod = HydrogenState((1, 0, 0))
    spin = SpinVector.up() if m > 0 else SpinVector.down()
    report = ComparisonReport(spin_sign=1 if m > 0 else -1)
    for p in points:
        rec = ComparisonRecord(point=p)
        try:
            rec.v_dirac = dirac_velocity(dirac, p).v_phi
            rec.v_schrodinger_gordon = velocity(schrod, spin, p).v_phi
            rec.v_classical = schrodinger_current_j1(schrod, p).v_phi / schrod.rho(p)
            rec.abs_deviation = abs(rec.v_dirac - rec.v_schrodinger_gordon)
            scale = abs(rec.v_dirac)
            rec.rel_deviation = rec.abs_deviation / scale if scale > 0 else rec.abs_deviation
        except QflowError as exc:
            rec.error = f"{type(exc).__name__}: {exc}"
        report.records.append(rec)
    return report
