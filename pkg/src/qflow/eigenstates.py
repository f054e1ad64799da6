"""Closed-form eigenstates: Schrodinger hydrogen, isotropic oscillator, Dirac hydrogen.

All evaluators work in atomic units on the t = 0 slice and broadcast over numpy
arrays of (r, theta, phi).  The point-level accessors (``rho``, ``grad_rho``, ...)
take a :class:`SphericalPoint` and return floats or :class:`SphericalVector`.
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from qflow import quadrature
from qflow.errors import DomainError, NumericError, PoleError
from qflow.geometry import SphericalPoint, SphericalVector, cartesian_to_local, spherical_to_cartesian
from qflow.specialfns import (
    exact_sin,
    generalized_laguerre,
    generalized_laguerre_derivative,
    hermite,
    spherical_harmonic,
    theta_harmonic,
    theta_harmonic_derivative,
)
from qflow.units import ALPHA, C_LIGHT


@dataclass(frozen=True)
class QuantumNumbers:
    """(n, l, m) labels.  For hydrogen n is the principal number; for the
    spherical oscillator n is the radial number n_r >= 0."""

    n: int
    l: int
    m: int

    @classmethod
    def coerce(cls, qn) -> "QuantumNumbers":
        if isinstance(qn, cls):
            return qn
        n, l, m = qn
        if any(int(v) != v for v in (n, l, m)):
            raise DomainError(f"quantum numbers must be integers, got {qn}")
        return cls(int(n), int(l), int(m))

    def validate_hydrogen(self) -> None:
        if self.n < 1 or not 0 <= self.l <= self.n - 1 or abs(self.m) > self.l:
            raise DomainError(f"invalid hydrogen quantum numbers {self}")

    def validate_oscillator(self) -> None:
        if self.n < 0 or self.l < 0 or abs(self.m) > self.l:
            raise DomainError(f"invalid oscillator quantum numbers {self}")


class SchrodingerState(ABC):
    """Stationary state psi = sqrt(rho) exp(i S / hbar) with mass = hbar = 1."""

    mass = 1.0
    hbar = 1.0
    label: str = ""
    #: Radius beyond which the density is negligible (< 1e-14 integrated mass).
    extent: float = quadrature.DEFAULT_R_MAX

    @property
    @abstractmethod
    def energy(self) -> float: ...

    @property
    def magnetic_number(self) -> int:
        return 0

    @abstractmethod
    def density(self, r, theta, phi): ...

    @abstractmethod
    def density_gradient(self, r, theta, phi):
        """(d_r rho, (1/r) d_theta rho, (1/(r sin theta)) d_phi rho)."""

    def phase(self, r, theta, phi):
        return np.zeros(np.broadcast(r, theta, phi).shape)

    def phase_gradient(self, r, theta, phi):
        """Components of grad S; the phi component is infinite on the axis when m != 0."""
        z = np.zeros(np.broadcast(r, theta, phi).shape)
        return z, z.copy(), z.copy()

    def classical_current(self, r, theta, phi):
        """rho grad S / mass, zero on the axis where rho vanishes there."""
        z = np.zeros(np.broadcast(r, theta, phi).shape)
        return z, z.copy(), z.copy()

    # point-level accessors

    def rho(self, p: SphericalPoint) -> float:
        return float(self.density(p.r, p.theta, p.phi))

    def S(self, p: SphericalPoint) -> float:
        return float(self.phase(p.r, p.theta, p.phi))

    def grad_rho(self, p: SphericalPoint) -> SphericalVector:
        g = self.density_gradient(p.r, p.theta, p.phi)
        return SphericalVector(*(float(c) for c in g), point=p)

    def grad_S(self, p: SphericalPoint) -> SphericalVector:
        g = tuple(float(c) for c in self.phase_gradient(p.r, p.theta, p.phi))
        if not all(math.isfinite(c) for c in g):
            raise PoleError(f"grad S is singular on the polar axis for {self.label}")
        return SphericalVector(*g, point=p)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.label}>"


class _SeparableState(SchrodingerState):
    """psi = R(r) Theta_lm(theta) exp(i m phi)."""

    l: int
    m: int

    @abstractmethod
    def radial(self, r): ...

    @abstractmethod
    def radial_derivative(self, r): ...

    @property
    def magnetic_number(self) -> int:
        return self.m

    def angular(self, theta):
        return theta_harmonic(self.l, self.m, theta)

    def density(self, r, theta, phi):
        rr = self.radial(r)
        th = self.angular(theta)
        out = rr * rr * th * th * np.ones_like(np.asarray(phi, dtype=float))
        return out

    def density_gradient(self, r, theta, phi):
        r = np.asarray(r, dtype=float)
        R, dR = self.radial(r), self.radial_derivative(r)
        th = self.angular(theta)
        dth = theta_harmonic_derivative(self.l, self.m, theta)
        ones = np.ones_like(np.asarray(phi, dtype=float))
        g_r = 2.0 * R * dR * th * th * ones
        with np.errstate(divide="ignore", invalid="ignore"):
            g_t = np.where(r == 0.0, 0.0, 2.0 * R * R * th * dth / np.where(r == 0.0, 1.0, r)) * ones
        return g_r, g_t, np.zeros_like(g_r)

    def ladder_remainder(self, theta):
        """Theta' - |m| cot(theta) Theta = sqrt((l-|m|)(l+|m|+1)) Theta_{l,|m|+1}.

        Regular on the axis; lets the azimuthal current avoid cancelling the
        cot(theta) terms of J1 and J2 near the poles.
        """
        mm = abs(self.m)
        if mm == self.l:
            return np.zeros_like(np.asarray(theta, dtype=float))
        k = math.sqrt((self.l - mm) * (self.l + mm + 1))
        val = k * theta_harmonic(self.l, mm + 1, theta)
        return -val if self.m < 0 and mm % 2 else val

    def azimuthal_current(self, r, theta, phi, s_z: float):
        """J1_phi - (grad rho)_theta s_z cos(theta) for a spin with z-component s_z.

        Evaluated as (R^2 Theta / r)[(m - 2 s_z |m|) Theta / sin + 2 s_z |m| sin Theta
        - 2 s_z cos D] with D the ladder remainder (hbar = mass = 1).
        """
        r = np.asarray(r, dtype=float)
        R = self.radial(r)
        th = self.angular(theta)
        st, ct = exact_sin(theta), np.cos(theta)
        mm = abs(self.m)
        D = self.ladder_remainder(theta)
        bracket = 2.0 * s_z * mm * st * th - 2.0 * s_z * ct * D
        lead = self.m - 2.0 * s_z * mm
        if lead != 0.0:
            with np.errstate(divide="ignore", invalid="ignore"):
                # Theta carries sin^|m|, so Theta / sin -> 0 on the axis for m != 0.
                bracket = bracket + lead * np.where(st == 0.0, 0.0, th / np.where(st == 0.0, 1.0, st))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(r == 0.0, 0.0, R * R * th * bracket / np.where(r == 0.0, 1.0, r))
        return out * np.ones_like(np.asarray(phi, dtype=float)) / self.mass

    def phase(self, r, theta, phi):
        return self.m * self.hbar * np.broadcast_to(np.asarray(phi, dtype=float), np.broadcast(r, theta, phi).shape)

    def phase_gradient(self, r, theta, phi):
        shape = np.broadcast(r, theta, phi).shape
        z = np.zeros(shape)
        if self.m == 0:
            return z, z.copy(), z.copy()
        rs = np.broadcast_to(np.asarray(r, dtype=float) * exact_sin(theta), shape)
        with np.errstate(divide="ignore"):
            g_p = np.where(rs == 0.0, np.inf, self.m * self.hbar / np.where(rs == 0.0, 1.0, rs))
        return z, z.copy(), g_p

    def classical_current(self, r, theta, phi):
        rho = self.density(r, theta, phi)
        z = np.zeros(rho.shape)
        if self.m == 0:
            return z, z.copy(), z.copy()
        rs = np.broadcast_to(np.asarray(r, dtype=float) * exact_sin(theta), rho.shape)
        safe = np.where(rs == 0.0, 1.0, rs)
        # rho carries sin^{2|m|} theta, so the axis limit is zero whenever rho is.
        j_p = np.where(rs == 0.0, np.where(rho == 0.0, 0.0, np.nan), rho * self.m * self.hbar / (self.mass * safe))
        return z, z.copy(), j_p


class HydrogenState(_SeparableState):
    """Nonrelativistic hydrogen eigenstate psi_nlm = R_nl(r) Y_lm(theta, phi)."""

    def __init__(self, qn):
        qn = QuantumNumbers.coerce(qn)
        qn.validate_hydrogen()
        self.qn = qn
        self.n, self.l, self.m = qn.n, qn.l, qn.m
        self.label = f"hydrogen({qn.n},{qn.l},{qn.m})"
        self.extent = 30.0 * qn.n + 10.0

    @property
    def energy(self) -> float:
        return -0.5 / self.n ** 2

    def radial(self, r):
        return hydrogen_radial(self.n, self.l, r)

    def radial_derivative(self, r):
        return hydrogen_radial_derivative(self.n, self.l, r)


def _hydrogen_norm(n: int, l: int) -> float:
    return math.sqrt((2.0 / n) ** 3 * math.factorial(n - l - 1) / (2.0 * n * math.factorial(n + l)))


def hydrogen_radial(n: int, l: int, r):
    """Normalized radial function R_nl(r) in atomic units (int R^2 r^2 dr = 1)."""
    if n < 1 or not 0 <= l <= n - 1:
        raise DomainError(f"invalid hydrogen indices n={n}, l={l}")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("r must be >= 0")
    x = 2.0 * r / n
    out = _hydrogen_norm(n, l) * np.exp(-0.5 * x) * x ** l * generalized_laguerre(n - l - 1, 2 * l + 1, x)
    return out if np.ndim(out) else float(out)


def hydrogen_radial_derivative(n: int, l: int, r):
    r = np.asarray(r, dtype=float)
    x = 2.0 * r / n
    k, a = n - l - 1, 2 * l + 1
    L = generalized_laguerre(k, a, x)
    dL = generalized_laguerre_derivative(k, a, x)
    xl = x ** l
    inner = xl * (dL - 0.5 * L)
    if l > 0:
        inner = inner + l * x ** (l - 1) * L
    out = _hydrogen_norm(n, l) * (2.0 / n) * np.exp(-0.5 * x) * inner
    return out if np.ndim(out) else float(out)


def hydrogen_state(qn) -> HydrogenState:
    return HydrogenState(qn)


class OscillatorState(_SeparableState):
    """Isotropic oscillator eigenstate in the spherical basis, labelled (n_r, l, m).

    R(r) = N r^l L_{n_r}^{l+1/2}(omega r^2) exp(-omega r^2 / 2), energy
    omega (2 n_r + l + 3/2).
    """

    def __init__(self, qn, omega: float = 1.0):
        qn = QuantumNumbers.coerce(qn)
        qn.validate_oscillator()
        if not omega > 0:
            raise DomainError("omega must be positive")
        self.qn = qn
        self.n_r, self.l, self.m = qn.n, qn.l, qn.m
        self.omega = float(omega)
        self.label = f"oscillator({qn.n},{qn.l},{qn.m};omega={self.omega:g})"
        self.extent = math.sqrt((80.0 + 4.0 * (2 * self.n_r + self.l)) / self.omega)
        beta = self.omega * self.mass / self.hbar
        self._beta = beta
        self._norm = math.sqrt(
            2.0 * beta ** (self.l + 1.5) * math.factorial(self.n_r) / math.gamma(self.n_r + self.l + 1.5)
        )

    @property
    def energy(self) -> float:
        return self.hbar * self.omega * (2 * self.n_r + self.l + 1.5)

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        x = self._beta * r * r
        return self._norm * r ** self.l * np.exp(-0.5 * x) * generalized_laguerre(self.n_r, self.l + 0.5, x)

    def radial_derivative(self, r):
        r = np.asarray(r, dtype=float)
        b, l = self._beta, self.l
        x = b * r * r
        L = generalized_laguerre(self.n_r, l + 0.5, x)
        dL = generalized_laguerre_derivative(self.n_r, l + 0.5, x)
        inner = r ** (l + 1) * (2.0 * b * dL - b * L)
        if l > 0:
            inner = inner + l * r ** (l - 1) * L
        return self._norm * np.exp(-0.5 * x) * inner


def oscillator_state(qn, omega: float = 1.0) -> OscillatorState:
    return OscillatorState(qn, omega)


class CartesianOscillatorState(SchrodingerState):
    """Real oscillator eigenstate phi_nx(x) phi_ny(y) phi_nz(z).

    Its density is not axially symmetric unless nx = ny = 0, so the spin current
    it carries is not circular.
    """

    def __init__(self, indices, omega: float = 1.0):
        nx, ny, nz = (int(v) for v in indices)
        if min(nx, ny, nz) < 0:
            raise DomainError(f"oscillator indices must be >= 0, got {indices}")
        if not omega > 0:
            raise DomainError("omega must be positive")
        self.indices = (nx, ny, nz)
        self.omega = float(omega)
        self._beta = self.omega * self.mass / self.hbar
        self.label = f"oscillator-cartesian({nx},{ny},{nz};omega={self.omega:g})"
        self.extent = math.sqrt((80.0 + 4.0 * (nx + ny + nz)) / self.omega)

    @property
    def energy(self) -> float:
        return self.hbar * self.omega * (sum(self.indices) + 1.5)

    def _factor(self, n: int, x):
        sb = math.sqrt(self._beta)
        xi = sb * x
        norm = (self._beta / math.pi) ** 0.25 / math.sqrt(2.0 ** n * math.factorial(n))
        gauss = np.exp(-0.5 * xi * xi)
        H = hermite(n, xi)
        dH = 2.0 * n * hermite(n - 1, xi) if n > 0 else 0.0
        return norm * H * gauss, norm * sb * (dH - xi * H) * gauss

    def wavefunction(self, r, theta, phi):
        xyz = spherical_to_cartesian(np.asarray(r, dtype=float), theta, phi)
        vals = [self._factor(n, c)[0] for n, c in zip(self.indices, xyz)]
        return vals[0] * vals[1] * vals[2]

    def density(self, r, theta, phi):
        psi = self.wavefunction(r, theta, phi)
        return psi * psi

    def density_gradient(self, r, theta, phi):
        xyz = spherical_to_cartesian(np.asarray(r, dtype=float), theta, phi)
        (fx, dfx), (fy, dfy), (fz, dfz) = (self._factor(n, c) for n, c in zip(self.indices, xyz))
        psi = fx * fy * fz
        grad = (2.0 * psi * dfx * fy * fz, 2.0 * psi * fx * dfy * fz, 2.0 * psi * fx * fy * dfz)
        shape = np.broadcast(r, theta, phi).shape
        return tuple(np.broadcast_to(c, shape) for c in cartesian_to_local(grad, theta, phi))


def oscillator_cartesian_state(indices, omega: float = 1.0) -> CartesianOscillatorState:
    return CartesianOscillatorState(indices, omega)


# ---------------------------------------------------------------------------
# Dirac hydrogen


def _half(m) -> float:
    if m in (0.5, "+1/2", "+"):
        return 0.5
    if m in (-0.5, "-1/2", "-"):
        return -0.5
    raise DomainError(f"Dirac magnetic number must be +1/2 or -1/2, got {m!r}")


def _ylm_real(l: int, m: int, theta):
    """Y_lm(theta, 0): the theta dependence once the exp(i m phi) factor is cancelled."""
    if l < 0 or abs(m) > l:
        return np.zeros_like(np.asarray(theta, dtype=float))
    return theta_harmonic(l, m, theta)


def dirac_angular_components(l: int, m, theta):
    """Real angular amplitudes (a, b, c, d) of the Dirac hydrogen bispinor.

    For m = +1/2 the bispinor is (f a, f b e^{i phi}, i g c, i g d e^{i phi});
    for m = -1/2 it is (-f b e^{-i phi}, f a, -i g d e^{-i phi}, i g c).  The
    lower-spinor sign for m = -1/2 is the one whose Pauli current equals
    2 c f g (a d - b c) u_phi for both signs of m.
    """
    if l < 0:
        raise DomainError("l must be >= 0")
    m = _half(m)
    theta = np.asarray(theta, dtype=float)
    y00 = 1.0 / math.sqrt(4.0 * math.pi)
    zero = np.zeros_like(theta)
    if l == 0:
        if m > 0:
            return y00 + zero, zero, -y00 * np.cos(theta), -y00 * exact_sin(theta)
        return zero, y00 + zero, -y00 * exact_sin(theta), y00 * np.cos(theta)
    if m > 0:
        a = math.sqrt((l + 1) / (2 * l + 1)) * _ylm_real(l, 0, theta)
        b = math.sqrt(l / (2 * l + 1)) * _ylm_real(l, 1, theta)
        c = math.sqrt((l + 1) / (2 * l + 3)) * _ylm_real(l + 1, 0, theta)
        d = math.sqrt((l + 2) / (2 * l + 3)) * _ylm_real(l + 1, 1, theta)
    else:
        a = -math.sqrt((l + 1) / (2 * l + 1)) * _ylm_real(l, -1, theta)
        b = math.sqrt(l / (2 * l + 1)) * _ylm_real(l, 0, theta)
        c = -math.sqrt((l - 1) / (2 * l - 1)) * _ylm_real(l - 1, -1, theta)
        d = math.sqrt(l / (2 * l - 1)) * _ylm_real(l - 1, 0, theta)
    return a, b, c, d


RadialPair = Callable[[np.ndarray], "tuple[np.ndarray, np.ndarray]"]


@dataclass(frozen=True)
class DiracHydrogenState:
    """Dirac hydrogen eigenstate with caller-supplied real radial pair (f, g)."""

    n: int
    l: int
    m: float
    radial: RadialPair = field(repr=False)
    a0: float = 1.0
    energy: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "m", _half(self.m))
        if self.n < 1 or not 0 <= self.l <= self.n - 1:
            raise DomainError(f"invalid Dirac hydrogen indices n={self.n}, l={self.l}")

    @property
    def j(self) -> float:
        return 0.5 if self.l == 0 else self.l + self.m

    @property
    def label(self) -> str:
        return f"dirac({self.n},{self.l},j={self.j:g},m={self.m:+g})"

    def angular(self, theta):
        return dirac_angular_components(self.l, self.m, theta)

    def _radial(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise DomainError("Dirac radial functions are evaluated for r > 0 only")
        return self.radial(r)

    def density(self, r, theta, phi=0.0):
        f, g = self._radial(r)
        a, b, c, d = self.angular(theta)
        out = f * f * (a * a + b * b) + g * g * (c * c + d * d)
        return out * np.ones_like(np.asarray(phi, dtype=float))

    def current_phi(self, r, theta, phi=0.0):
        """Azimuthal current 2 c f g (ad - bc); the other components vanish."""
        f, g = self._radial(r)
        a, b, c, d = self.angular(theta)
        out = 2.0 * C_LIGHT * f * g * (a * d - b * c)
        return out * np.ones_like(np.asarray(phi, dtype=float))

    def bispinor(self, r, theta, phi):
        """The four complex components (chi_1, chi_2) at the given points."""
        f, g = self._radial(r)
        a, b, c, d = self.angular(theta)
        e = np.exp(1j * np.asarray(phi, dtype=float))
        if self.m > 0:
            return f * a + 0j * e, f * b * e, 1j * g * c + 0j * e, 1j * g * d * e
        ec = np.conj(e)
        return -f * b * ec, f * a + 0j * e, -1j * g * d * ec, 1j * g * c + 0j * e

    def rho(self, p: SphericalPoint) -> float:
        return float(self.density(p.r, p.theta, p.phi))


def dirac_1s_exponent() -> float:
    """sqrt(1 - alpha^2) - 1, computed without cancellation."""
    return -ALPHA ** 2 / (1.0 + math.sqrt(1.0 - ALPHA ** 2))


def dirac_1s_ratio() -> float:
    """g/f = -(1 - sqrt(1 - alpha^2)) / alpha."""
    return -ALPHA / (1.0 + math.sqrt(1.0 - ALPHA ** 2))


DIRAC_R_MIN = 1e-12


def _dirac_1s_raw(r, a0):
    r = np.asarray(r, dtype=float)
    f = a0 * r ** dirac_1s_exponent() * np.exp(-r)
    return f, dirac_1s_ratio() * f


def dirac_1s_truncated_mass(r_min: float = DIRAC_R_MIN, a0: float = 1.0) -> float:
    """Upper bound on the mass inside r < r_min: a0^2 (1 + t^2) r_min^(2 gamma + 1) / (2 gamma + 1)."""
    p = 2.0 * (1.0 + dirac_1s_exponent()) + 1.0
    return a0 * a0 * (1.0 + dirac_1s_ratio() ** 2) * r_min ** p / p


@lru_cache(maxsize=1)
def dirac_1s_normalization() -> float:
    """a0 fixing int rho d^3r = 1, from quadrature of the a0 = 1 density."""
    spec = quadrature.QuadratureSpec(n_radial=400, n_theta=8, n_phi=2, r_min=DIRAC_R_MIN, r_max=60.0)
    raw = DiracHydrogenState(1, 0, 0.5, radial=lambda r: _dirac_1s_raw(r, 1.0))
    norm = quadrature.integrate(raw.density, spec)
    if not norm > 0 or not math.isfinite(norm):
        raise NumericError(f"Dirac 1s raw norm is {norm}")
    a0 = 1.0 / math.sqrt(norm)
    if dirac_1s_truncated_mass(DIRAC_R_MIN, a0) >= 1e-12:
        raise NumericError("Dirac 1s mass below r_min is not negligible")
    return a0


def dirac_1s_radial(r, a0: float | None = None):
    """Radial pair (f, g) of the Dirac 1s_1/2 state; r > 0 required."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("Dirac 1s radial functions diverge at r = 0")
    f, g = _dirac_1s_raw(r, dirac_1s_normalization() if a0 is None else a0)
    if np.ndim(f) == 0:
        return float(f), float(g)
    return f, g


def dirac_1s_state(m=0.5) -> DiracHydrogenState:
    a0 = dirac_1s_normalization()
    return DiracHydrogenState(
        1,
        0,
        m,
        radial=lambda r: _dirac_1s_raw(r, a0),
        a0=a0,
        energy=C_LIGHT ** 2 * math.sqrt(1.0 - ALPHA ** 2),
    )


def dirac_state(n: int, l: int, m, radial: RadialPair, energy: float | None = None) -> DiracHydrogenState:
    return DiracHydrogenState(n, l, m, radial=radial, energy=energy)


def builtin_states() -> dict[str, SchrodingerState]:
    """Every built-in Schrodinger state, keyed by its short name."""
    return {
        "1s": HydrogenState((1, 0, 0)),
        "2s": HydrogenState((2, 0, 0)),
        "2p0": HydrogenState((2, 1, 0)),
        "2p1": HydrogenState((2, 1, 1)),
        "2p-1": HydrogenState((2, 1, -1)),
        "osc-ground": OscillatorState((0, 0, 0), 1.0),
        "osc-1p0": OscillatorState((0, 1, 0), 1.0),
        "osc-1p1": OscillatorState((0, 1, 1), 1.0),
        "osc-2s": OscillatorState((1, 0, 0), 1.0),
        "osc-xyz-100": CartesianOscillatorState((1, 0, 0), 1.0),
        "osc-xyz-110": CartesianOscillatorState((1, 1, 0), 1.0),
    }
