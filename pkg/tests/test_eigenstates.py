import math

import numpy as np
import pytest
from scipy import integrate

from conftest import sample_points
from qflow import analysis
from qflow.eigenstates import (
    DIRAC_R_MIN,
    CartesianOscillatorState,
    HydrogenState,
    OscillatorState,
    QuantumNumbers,
    builtin_states,
    dirac_1s_exponent,
    dirac_1s_normalization,
    dirac_1s_radial,
    dirac_1s_ratio,
    dirac_1s_state,
    dirac_angular_components,
    dirac_state,
    hydrogen_radial,
    hydrogen_state,
    oscillator_state,
)
from qflow.errors import DomainError, PoleError
from qflow.geometry import SphericalPoint
from qflow.quadrature import QuadratureSpec
from qflow.specialfns import spherical_harmonic
from qflow.units import ALPHA

Y00 = 1 / math.sqrt(4 * math.pi)


def radial_norm(fn):
    val, _ = integrate.quad(lambda r: fn(r) ** 2 * r * r, 0, 200, limit=400, epsabs=1e-13)
    return val


class TestHydrogenRadial:
    def test_examples(self):
        # R10 = 2 e^{-r}; check the normalization independently first
        assert radial_norm(lambda r: 2 * math.exp(-r)) == pytest.approx(1.0, abs=1e-12)
        assert hydrogen_radial(1, 0, 1.0) == pytest.approx(2 * math.exp(-1), rel=1e-15)
        assert hydrogen_radial(1, 0, 1.0) == pytest.approx(0.73576, abs=1e-5)
        assert hydrogen_radial(2, 0, 2.0) == 0.0
        assert hydrogen_radial(1, 0, 0.0) == 2.0

    @pytest.mark.parametrize("n,l", [(n, l) for n in range(1, 5) for l in range(n)])
    def test_normalized(self, n, l):
        assert radial_norm(lambda r: hydrogen_radial(n, l, r)) == pytest.approx(1.0, abs=1e-10)

    def test_closed_forms(self):
        r = np.linspace(0, 10, 21)
        np.testing.assert_allclose(hydrogen_radial(2, 0, r), (2 - r) * np.exp(-r / 2) / (2 * math.sqrt(2)), atol=1e-15)
        np.testing.assert_allclose(hydrogen_radial(2, 1, r), r * np.exp(-r / 2) / (2 * math.sqrt(6)), atol=1e-15)

    @pytest.mark.parametrize("n,l", [(0, 0), (2, 2), (3, -1)])
    def test_domain(self, n, l):
        with pytest.raises(DomainError):
            hydrogen_radial(n, l, 1.0)


class TestHydrogenState:
    def test_1s_density(self):
        s = hydrogen_state((1, 0, 0))
        p = SphericalPoint(1.0, math.pi / 2, 0.0)
        assert s.rho(p) == pytest.approx(math.exp(-2) / math.pi, rel=1e-14)
        assert s.rho(p) == pytest.approx(0.0430786, abs=1e-7)

    def test_2p1_phase_gradient(self, points):
        s = hydrogen_state((2, 1, 1))
        for p in points(20, seed=1):
            g = s.grad_S(p)
            assert (g.v_r, g.v_theta) == (0.0, 0.0)
            assert g.v_phi == pytest.approx(1.0 / (p.r * math.sin(p.theta)), rel=1e-14)
            assert s.S(p) == pytest.approx(p.phi)

    def test_2p0_real(self, points):
        s = hydrogen_state((2, 1, 0))
        for p in points(10, seed=2):
            assert s.S(p) == 0.0
            assert s.grad_S(p).is_zero()

    def test_grad_s_pole(self):
        s = hydrogen_state((2, 1, 1))
        with pytest.raises(PoleError):
            s.grad_S(SphericalPoint(1.0, 0.0, 0.0))

    def test_density_is_psi_squared(self, points):
        s = hydrogen_state((3, 2, -1))
        for p in points(10, seed=3):
            psi = hydrogen_radial(3, 2, p.r) * spherical_harmonic(2, -1, p.theta, p.phi)
            assert s.rho(p) == pytest.approx(abs(psi) ** 2, rel=1e-12)

    @pytest.mark.parametrize("qn", [(0, 0, 0), (1, 1, 0), (2, 1, 2), (2.5, 1, 0)])
    def test_invalid(self, qn):
        with pytest.raises(DomainError):
            HydrogenState(qn)

    def test_energy(self):
        assert HydrogenState((2, 1, 0)).energy == -0.125


def _fd_gradient(state, p, h=1e-5):
    d = state.density
    return np.array(
        [
            (d(p.r + h, p.theta, p.phi) - d(p.r - h, p.theta, p.phi)) / (2 * h),
            (d(p.r, p.theta + h, p.phi) - d(p.r, p.theta - h, p.phi)) / (2 * h * p.r),
            (d(p.r, p.theta, p.phi + h) - d(p.r, p.theta, p.phi - h)) / (2 * h * p.r * math.sin(p.theta)),
        ]
    )


@pytest.mark.parametrize("name", list(builtin_states()))
def test_gradients_match_finite_differences(name):
    st = builtin_states()[name]
    for p in sample_points(50, seed=7, r_range=(0.3, 5.0), margin=0.05):
        g = st.grad_rho(p).as_array()
        fd = _fd_gradient(st, p)
        if np.linalg.norm(g) < 1e-6 * st.rho(p):
            continue  # near a stationary point of rho; relative error undefined
        assert np.linalg.norm(g - fd) <= 1e-6 * np.linalg.norm(g)


@pytest.mark.parametrize("name", list(builtin_states()))
def test_normalization(name):
    st = builtin_states()[name]
    assert abs(analysis.integrate_density(st) - 1.0) < 1e-8


@pytest.mark.parametrize("name", list(builtin_states()))
def test_density_nonnegative(name):
    st = builtin_states()[name]
    for p in sample_points(100, seed=9):
        assert st.rho(p) >= 0.0


class TestOscillator:
    def test_ground_state_origin(self):
        s = oscillator_state((0, 0, 0), 1.0)
        assert s.rho(SphericalPoint(0.0, 0.0, 0.0)) == pytest.approx(math.pi ** -1.5, rel=1e-14)
        assert s.rho(SphericalPoint(0.0, 0.0, 0.0)) == pytest.approx(0.179587, abs=1e-6)

    def test_ground_state_closed_form(self, points):
        for omega in (0.5, 2.0):
            s = oscillator_state((0, 0, 0), omega)
            for p in points(10, seed=11, r_range=(0, 3)):
                psi = (omega / math.pi) ** 0.75 * math.exp(-0.5 * omega * p.r ** 2)
                assert s.rho(p) == pytest.approx(psi * psi, rel=1e-13)
                assert s.S(p) == 0.0
                assert s.grad_S(p).is_zero()

    def test_first_excited_normalized(self):
        # radial normalization from quadrature, independent of the closed-form N
        s = oscillator_state((0, 1, 0), 1.0)
        assert radial_norm(s.radial) == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("nr,l", [(0, 0), (1, 0), (0, 2), (2, 1), (1, 3)])
    def test_radial_norms(self, nr, l):
        s = OscillatorState((nr, l, 0), 1.7)
        assert radial_norm(s.radial) == pytest.approx(1.0, abs=1e-10)

    def test_energies(self):
        assert OscillatorState((1, 2, 0), 2.0).energy == pytest.approx(2.0 * (2 + 2 + 1.5))
        assert CartesianOscillatorState((1, 0, 2), 0.5).energy == pytest.approx(0.5 * 4.5)

    def test_cartesian_ground_equals_spherical(self, points):
        a, b = OscillatorState((0, 0, 0), 1.3), CartesianOscillatorState((0, 0, 0), 1.3)
        for p in points(10, seed=12, r_range=(0, 3)):
            assert a.rho(p) == pytest.approx(b.rho(p), rel=1e-13)

    def test_cartesian_z_matches_spherical_p0(self, points):
        # phi_0 phi_0 phi_1(z) is the n_r = 0, l = 1, m = 0 state up to sign
        a, b = OscillatorState((0, 1, 0), 1.0), CartesianOscillatorState((0, 0, 1), 1.0)
        for p in points(10, seed=13, r_range=(0.1, 3)):
            assert a.rho(p) == pytest.approx(b.rho(p), rel=1e-12)

    @pytest.mark.parametrize("qn", [(-1, 0, 0), (0, 1, 2)])
    def test_invalid(self, qn):
        with pytest.raises(DomainError):
            OscillatorState(qn)
        with pytest.raises(DomainError):
            OscillatorState((0, 0, 0), omega=0.0)


class TestDirac:
    def test_angular_examples(self):
        a, b, c, d = dirac_angular_components(0, 0.5, math.pi / 2)
        assert a == pytest.approx(Y00) and b == 0.0
        assert c == pytest.approx(0.0, abs=1e-16) and d == pytest.approx(-Y00)
        a, b, c, d = dirac_angular_components(0, -0.5, 0.0)
        assert (a, c) == (0.0, 0.0)
        assert b == pytest.approx(Y00) and d == pytest.approx(Y00)

    def test_angular_l1(self):
        th = np.linspace(0.1, 3.0, 9)
        a, b, c, d = dirac_angular_components(1, 0.5, th)
        np.testing.assert_allclose(a, math.sqrt(2 / 3) * spherical_harmonic(1, 0, th, 0.0).real, rtol=1e-14)
        # exp(-i phi) cancels against Y_11's own phase
        phi = 0.77
        np.testing.assert_allclose(
            b, (math.sqrt(1 / 3) * spherical_harmonic(1, 1, th, phi) * np.exp(-1j * phi)).real, atol=1e-15
        )
        np.testing.assert_allclose(
            d, (math.sqrt(3 / 5) * spherical_harmonic(2, 1, th, phi) * np.exp(-1j * phi)).real, atol=1e-15
        )

    def test_angular_m_minus_l1(self):
        th = np.linspace(0.1, 3.0, 5)
        a, b, c, d = dirac_angular_components(1, -0.5, th)
        phi = 0.3
        ref_a = (-math.sqrt(2 / 3) * spherical_harmonic(1, -1, th, phi) * np.exp(1j * phi)).real
        np.testing.assert_allclose(a, ref_a, atol=1e-15)
        np.testing.assert_allclose(b, math.sqrt(1 / 3) * spherical_harmonic(1, 0, th, 0).real, atol=1e-15)
        np.testing.assert_allclose(c, 0.0)
        np.testing.assert_allclose(d, Y00)

    @pytest.mark.parametrize("m", [0.5, -0.5])
    def test_l0_sums(self, m):
        th = np.linspace(0, math.pi, 13)
        a, b, c, d = dirac_angular_components(0, m, th)
        np.testing.assert_allclose(a * a + b * b, Y00 ** 2, rtol=1e-14)
        np.testing.assert_allclose(c * c + d * d, Y00 ** 2, rtol=1e-14)

    def test_radial_ratio_and_exponent(self):
        ratio_ref = -(1 - math.sqrt(1 - ALPHA ** 2)) / ALPHA
        assert dirac_1s_ratio() == pytest.approx(ratio_ref, rel=1e-9)
        assert dirac_1s_ratio() == pytest.approx(-3.648725e-3, rel=1e-6)
        assert dirac_1s_exponent() == pytest.approx(math.sqrt(1 - ALPHA ** 2) - 1, rel=1e-9)
        assert dirac_1s_exponent() == pytest.approx(-2.6627e-5, rel=1e-4)
        for r in (1e-6, 0.3, 1.0, 7.0):
            f, g = dirac_1s_radial(r)
            assert g / f == pytest.approx(dirac_1s_ratio(), rel=1e-15)

    def test_normalization_constant(self):
        gam = math.sqrt(1 - ALPHA ** 2)
        t = dirac_1s_ratio()
        closed = 1 / math.sqrt((1 + t * t) * math.gamma(2 * gam + 1) / 2 ** (2 * gam + 1))
        assert dirac_1s_normalization() == pytest.approx(closed, rel=1e-12)

    def test_radial_origin(self):
        with pytest.raises(DomainError):
            dirac_1s_radial(0.0)

    def test_norm_and_symmetry(self):
        for m in (0.5, -0.5):
            d = dirac_1s_state(m)
            spec = QuadratureSpec(n_radial=400, r_min=DIRAC_R_MIN, r_max=60.0)
            assert abs(analysis.integrate_density(d.density, spec) - 1.0) < 1e-8
            rng = np.random.default_rng(1)
            for r in (0.05, 1.0, 4.0):
                vals = d.density(r, rng.uniform(0, math.pi, 40), rng.uniform(0, 2 * math.pi, 40))
                assert np.ptp(vals) <= 1e-14

    def test_density_formula(self):
        # closed-form density 2 a^2 (1 - gamma)/alpha^2 r^{2(gamma-1)} e^{-2r} with a^2 = a0^2 / (4 pi)
        d = dirac_1s_state()
        gam = math.sqrt(1 - ALPHA ** 2)
        a0 = dirac_1s_normalization()
        for r in (0.2, 1.0, 3.0):
            ref = 2 * a0 ** 2 / (4 * math.pi) * (1 - gam) / ALPHA ** 2 * r ** (2 * (gam - 1)) * math.exp(-2 * r)
            assert d.rho(SphericalPoint(r, 1.0, 2.0)) == pytest.approx(ref, rel=1e-9)

    def test_quantum_numbers(self):
        assert dirac_1s_state().j == 0.5
        s = dirac_state(2, 1, -0.5, radial=lambda r: (np.exp(-r), 0.1 * np.exp(-r)))
        assert s.j == 0.5
        assert dirac_state(2, 1, 0.5, radial=lambda r: (r, r)).j == 1.5
        with pytest.raises(DomainError):
            dirac_state(1, 0, 0.3, radial=lambda r: (r, r))
        with pytest.raises(DomainError):
            dirac_state(1, 1, 0.5, radial=lambda r: (r, r))

    def test_bispinor_density(self, points):
        for m in (0.5, -0.5):
            d = dirac_1s_state(m)
            for p in points(10, seed=21):
                comps = d.bispinor(p.r, p.theta, p.phi)
                rho = sum(abs(c) ** 2 for c in comps)
                assert d.rho(p) == pytest.approx(float(rho), rel=1e-13)


def test_quantum_numbers_coerce():
    assert QuantumNumbers.coerce((2, 1, -1)) == QuantumNumbers(2, 1, -1)
    with pytest.raises(DomainError):
        QuantumNumbers.coerce((1.5, 0, 0))
