"""Probability currents and flow velocities.

J1 = (rho / m) grad S is the classical Schrodinger current, J2 = (1/m) grad rho x s
the spin (Gordon) current of a constant spin vector s, and J = J1 + J2.  The
Dirac current of a hydrogen bispinor is purely azimuthal,
J_phi = 2 c f g (a d - b c).  Everything is in atomic units.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from qflow.eigenstates import DiracHydrogenState, QuantumNumbers, SchrodingerState, _SeparableState
from qflow.errors import DomainError, NodeError, PoleError
from qflow.geometry import SphericalPoint, SphericalVector, cartesian_to_local, cross
from qflow.specialfns import exact_sin
from qflow.units import ATOMIC

#: Densities below this are treated as nodes by the velocity evaluators.
NODE_TOLERANCE = 1e-30

_SPIN_MAGNITUDE = 0.5 * ATOMIC.hbar


@dataclass(frozen=True)
class SpinVector:
    """Constant spin vector in Cartesian components, |s| in {0, hbar/2}."""

    s: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        s = tuple(float(v) for v in self.s)
        if len(s) != 3 or not all(math.isfinite(v) for v in s):
            raise DomainError(f"spin must be a finite 3-vector, got {self.s!r}")
        mag = math.sqrt(sum(v * v for v in s))
        if mag != 0.0 and abs(mag - _SPIN_MAGNITUDE) > 1e-12:
            raise DomainError(f"spin magnitude must be 0 or hbar/2, got {mag}")
        object.__setattr__(self, "s", s)

    @classmethod
    def up(cls) -> "SpinVector":
        return cls((0.0, 0.0, _SPIN_MAGNITUDE))

    @classmethod
    def down(cls) -> "SpinVector":
        return cls((0.0, 0.0, -_SPIN_MAGNITUDE))

    @classmethod
    def none(cls) -> "SpinVector":
        return cls()

    @classmethod
    def along(cls, direction) -> "SpinVector":
        """Spin of magnitude hbar/2 along ``direction``; the zero vector gives no spin."""
        d = np.asarray(direction, dtype=float)
        n = float(np.linalg.norm(d))
        if n == 0.0:
            return cls()
        return cls(tuple(_SPIN_MAGNITUDE * d / n))

    @classmethod
    def for_state(cls, state) -> "SpinVector":
        """Sign rule: spin up for m >= 0, spin down for m < 0."""
        m = getattr(state, "magnetic_number", 0)
        return cls.down() if m < 0 else cls.up()

    @property
    def magnitude(self) -> float:
        return math.sqrt(sum(v * v for v in self.s))

    def __neg__(self) -> "SpinVector":
        return SpinVector(tuple(-v for v in self.s))


def resolve_spin(spin, state=None) -> SpinVector:
    if isinstance(spin, SpinVector):
        return spin
    if spin is None or spin == "none":
        return SpinVector.none()
    if spin == "up":
        return SpinVector.up()
    if spin == "down":
        return SpinVector.down()
    if spin == "auto":
        return SpinVector.for_state(state)
    return SpinVector.along(spin)


# array-level evaluators


def j1_field(state: SchrodingerState, r, theta, phi):
    """(rho/m) grad S; NaN marks axis points where the limit is not zero."""
    return state.classical_current(r, theta, phi)


def j2_field(state: SchrodingerState, spin: SpinVector, r, theta, phi):
    grad = state.density_gradient(r, theta, phi)
    s_local = cartesian_to_local(spin.s, theta, phi)
    return tuple(c / state.mass for c in cross(grad, s_local))


def current_field(state: SchrodingerState, spin: SpinVector, r, theta, phi):
    if isinstance(state, _SeparableState):
        return _separable_current(state, spin, r, theta, phi)
    j1 = j1_field(state, r, theta, phi)
    j2 = j2_field(state, spin, r, theta, phi)
    return tuple(a + b for a, b in zip(j1, j2))


def _separable_current(state, spin: SpinVector, r, theta, phi):
    # Same sum as j1_field + j2_field, but the phi component takes the s_z part
    # of s_r together with J1 so the cot(theta) singularities cancel exactly.
    g_r, g_t, _ = state.density_gradient(r, theta, phi)
    _, s_t, s_p = cartesian_to_local(spin.s, theta, phi)
    s_perp_r = exact_sin(theta) * (np.cos(phi) * spin.s[0] + np.sin(phi) * spin.s[1])
    j_r = g_t * s_p / state.mass
    j_t = -g_r * s_p / state.mass
    j_p = state.azimuthal_current(r, theta, phi, spin.s[2]) + (g_r * s_t - g_t * s_perp_r) / state.mass
    shape = np.broadcast(j_r, j_t, j_p).shape
    return tuple(np.broadcast_to(c, shape) for c in (j_r, j_t, j_p))


def velocity_field(state: SchrodingerState, spin: SpinVector, r, theta, phi, node_tol: float = NODE_TOLERANCE):
    """Arrays (rho, J, v); v is NaN at nodes (rho < node_tol)."""
    rho = state.density(r, theta, phi)
    J = current_field(state, spin, r, theta, phi)
    node = rho < node_tol
    safe = np.where(node, 1.0, rho)
    v = tuple(np.where(node, np.nan, c / safe) for c in J)
    return rho, J, v


# point-level operations


def _singular_point(p: SphericalPoint) -> bool:
    return p.on_axis or p.r == 0.0


def _finish(comps, p: SphericalPoint, what: str) -> SphericalVector:
    vals = tuple(float(c) for c in comps)
    if _singular_point(p):
        # Only a vanishing azimuthal/polar part is meaningful where u_theta, u_phi degenerate.
        if not all(math.isfinite(v) for v in vals) or vals[1] != 0.0 or vals[2] != 0.0:
            raise PoleError(f"{what} has no well-defined limit at {p}")
        if p.r == 0.0 and vals[0] != 0.0:
            raise PoleError(f"{what} has no well-defined limit at the origin")
    elif not all(math.isfinite(v) for v in vals):
        raise DomainError(f"{what} is not finite at {p}")
    return SphericalVector(*vals, point=p)


def schrodinger_current_j1(state: SchrodingerState, p: SphericalPoint) -> SphericalVector:
    return _finish(j1_field(state, p.r, p.theta, p.phi), p, "J1")


def gordon_current_j2(state: SchrodingerState, spin, p: SphericalPoint) -> SphericalVector:
    spin = resolve_spin(spin, state)
    return _finish(j2_field(state, spin, p.r, p.theta, p.phi), p, "J2")


def total_current(state: SchrodingerState, spin, p: SphericalPoint) -> SphericalVector:
    spin = resolve_spin(spin, state)
    return _finish(current_field(state, spin, p.r, p.theta, p.phi), p, "J")


def velocity(state: SchrodingerState, spin, p: SphericalPoint, node_tol: float = NODE_TOLERANCE) -> SphericalVector:
    """Flow velocity J / rho of the spin-corrected current.

    Raises NodeError where rho < node_tol, PoleError on the axis when the
    azimuthal component does not vanish there.
    """
    rho = state.rho(p)
    if not rho >= node_tol:
        raise NodeError(f"density {rho:.3e} below node tolerance at {p} for {state.label}")
    return total_current(state, spin, p).scaled(1.0 / rho)


def dirac_velocity(state: DiracHydrogenState, p: SphericalPoint, node_tol: float = NODE_TOLERANCE) -> SphericalVector:
    """v = 2 c f g (ad - bc) / (f^2 (a^2 + b^2) + g^2 (c^2 + d^2)) u_phi."""
    if p.r == 0.0:
        raise DomainError("Dirac velocity needs r > 0")
    rho = state.rho(p)
    if not rho >= node_tol:
        raise NodeError(f"Dirac density {rho:.3e} below node tolerance at {p}")
    j_phi = float(state.current_phi(p.r, p.theta, p.phi))
    return _finish((0.0, 0.0, j_phi / rho), p, "Dirac velocity")


def dirac_current(state: DiracHydrogenState, p: SphericalPoint) -> np.ndarray:
    """Cartesian Dirac current (J^1, J^2, J^3) = 2cfg(ad - bc) (-sin phi, cos phi, 0)."""
    j_phi = float(state.current_phi(p.r, p.theta, p.phi))
    return np.array([-j_phi * math.sin(p.phi), j_phi * math.cos(p.phi), 0.0])


class ReferenceLabel(enum.Enum):
    H1S_UP = "H1s+"
    H1S_DOWN = "H1s-"
    H2S_UP = "H2s+"
    H2S_DOWN = "H2s-"
    H2P0_UP = "H2p0+"
    H2P0_DOWN = "H2p0-"
    H2P1 = "H2p1"
    H2PM1 = "H2p-1"
    OSC_GROUND_UP = "OscGround+"
    OSC_GROUND_DOWN = "OscGround-"

    @property
    def spin_sign(self) -> int:
        return -1 if self.value.endswith("-") or self is ReferenceLabel.H2PM1 else 1


#: Hydrogen state and spin that each hydrogen reference label describes.
REFERENCE_STATES = {
    ReferenceLabel.H1S_UP: ((1, 0, 0), "up"),
    ReferenceLabel.H1S_DOWN: ((1, 0, 0), "down"),
    ReferenceLabel.H2S_UP: ((2, 0, 0), "up"),
    ReferenceLabel.H2S_DOWN: ((2, 0, 0), "down"),
    ReferenceLabel.H2P0_UP: ((2, 1, 0), "up"),
    ReferenceLabel.H2P0_DOWN: ((2, 1, 0), "down"),
    ReferenceLabel.H2P1: ((2, 1, 1), "up"),
    ReferenceLabel.H2PM1: ((2, 1, -1), "down"),
}


def reference_velocity(label, p: SphericalPoint, omega: float = 1.0) -> SphericalVector:
    """Closed-form azimuthal velocities (alpha c = r0 = 1 in atomic units).

    H1s: alpha c sin(theta); H2s: (alpha c / 2)(1 + 1/(1 - r/2r0)) sin(theta);
    H2p0, H2p1: (alpha c / 2) sin(theta); H2p-1: -(alpha c / 2) sin(theta);
    OscGround: -omega r sin(theta), the literature form.  velocity() applied
    to the oscillator ground state with spin up gives +omega r sin(theta).
    The trailing +/- flips the sign for spin down.
    """
    label = ReferenceLabel(label)
    st = float(exact_sin(p.theta))
    sign = label.spin_sign
    if label in (ReferenceLabel.H1S_UP, ReferenceLabel.H1S_DOWN):
        v = sign * st
    elif label in (ReferenceLabel.H2S_UP, ReferenceLabel.H2S_DOWN):
        denom = 1.0 - p.r / 2.0
        if denom == 0.0:
            raise NodeError("2s reference velocity is singular at r = 2 r0")
        v = sign * 0.5 * (1.0 + 1.0 / denom) * st
    elif label in (ReferenceLabel.OSC_GROUND_UP, ReferenceLabel.OSC_GROUND_DOWN):
        v = -sign * omega * p.r * st
    else:
        v = sign * 0.5 * st
    return SphericalVector(0.0, 0.0, v, point=p)


def reference_state(label):
    """(QuantumNumbers, spin) for a hydrogen reference label."""
    qn, spin = REFERENCE_STATES[ReferenceLabel(label)]
    return QuantumNumbers(*qn), resolve_spin(spin)
