import math

import numpy as np
import pytest

from conftest import sample_points
from qflow.analysis import (
    ComparisonReport,
    StreamlineError,
    Trajectory,
    compare_dirac_schrodinger,
    divergence,
    integrate_density,
    mean_gordon_angular_momentum,
    state_velocity,
    streamline,
)
from qflow.currents import SpinVector, total_current
from qflow.eigenstates import (
    DIRAC_R_MIN,
    DiracHydrogenState,
    HydrogenState,
    OscillatorState,
    builtin_states,
    dirac_1s_normalization,
    dirac_1s_state,
)
from qflow.eigenstates import _dirac_1s_raw
from qflow.errors import DomainError, NodeError, NumericError
from qflow.geometry import SphericalPoint, SphericalVector
from qflow.quadrature import QuadratureSpec, default_spec

EQUATOR = SphericalPoint(1.0, math.pi / 2, 0.0)


class TestIntegrateDensity:
    def test_1s(self):
        assert integrate_density(HydrogenState((1, 0, 0))) == pytest.approx(1.0, abs=1e-10)

    def test_oscillator_omega_2(self):
        assert integrate_density(OscillatorState((0, 0, 0), 2.0)) == pytest.approx(1.0, abs=1e-10)

    def test_laguerre_rule(self):
        spec = QuadratureSpec(radial_rule="laguerre", n_radial=60, laguerre_scale=2.0)
        assert integrate_density(HydrogenState((1, 0, 0)), spec) == pytest.approx(1.0, abs=1e-10)

    def test_bare_callable(self):
        val = integrate_density(lambda r, t, p: np.exp(-r) / (8 * np.pi) + 0 * t, QuadratureSpec(r_max=80))
        assert val == pytest.approx(1.0, abs=1e-12)

    def test_dirac_raw_norm_fixes_a0(self):
        spec = QuadratureSpec(n_radial=400, n_theta=8, n_phi=2, r_min=DIRAC_R_MIN, r_max=60.0)
        raw = DiracHydrogenState(1, 0, 0.5, radial=lambda r: _dirac_1s_raw(r, 1.0))
        norm = integrate_density(raw, spec)
        assert dirac_1s_normalization() == pytest.approx(1 / math.sqrt(norm), rel=1e-15)

    def test_non_finite(self):
        with pytest.raises(NumericError):
            integrate_density(lambda r, t, p: np.where(r > 1, np.nan, r) + 0 * t)

    @pytest.mark.parametrize("name", sorted(builtin_states()))
    def test_doubling_converged(self, name):
        s = builtin_states()[name]
        spec = default_spec()
        assert abs(integrate_density(s, spec) - integrate_density(s, spec.refined())) < 1e-9


class TestDivergence:
    def test_radial_field(self):
        f = lambda p: SphericalVector(p.r, 0.0, 0.0)  # noqa: E731
        assert divergence(f, SphericalPoint(2.0, 1.0, 0.5)) == pytest.approx(3.0, abs=1e-7)

    def test_azimuthal_field(self):
        f = lambda p: SphericalVector(0.0, 0.0, p.r * math.sin(p.theta) ** 2)  # noqa: E731
        assert abs(divergence(f, SphericalPoint(2.0, 1.0, 0.5))) < 1e-9

    def test_polar_field(self):
        # div(sin(theta) u_theta) = 2 cos(theta) / r
        f = lambda p: SphericalVector(0.0, math.sin(p.theta), 0.0)  # noqa: E731
        p = SphericalPoint(1.5, 0.8, 0.0)
        assert divergence(f, p) == pytest.approx(2 * math.cos(0.8) / 1.5, rel=1e-7)

    def test_2p1_current(self):
        s = HydrogenState((2, 1, 1))
        field = lambda p: total_current(s, "up", p)  # noqa: E731
        for p in sample_points(20, seed=21, margin=0.05):
            assert abs(divergence(field, p, 1e-4)) < 1e-6

    def test_second_order(self):
        # phi-dependent test field with known divergence
        def f(p):
            return SphericalVector(p.r ** 2 * math.cos(p.phi), math.sin(p.theta) * p.r, math.sin(p.phi) * p.r)

        p = SphericalPoint(1.3, 1.1, 0.7)
        exact = 4 * p.r * math.cos(p.phi) + 2 * math.cos(p.theta) + math.cos(p.phi) / math.sin(p.theta)
        e1 = abs(divergence(f, p, 1e-2) - exact)
        e2 = abs(divergence(f, p, 5e-3) - exact)
        assert 3.5 <= e1 / e2 <= 4.5

    def test_domain(self):
        f = lambda p: SphericalVector(0.0, 0.0, 0.0)  # noqa: E731
        with pytest.raises(DomainError):
            divergence(f, SphericalPoint(1.0, 0.0, 0.0))
        with pytest.raises(DomainError):
            divergence(f, SphericalPoint(1e-5, 1.0, 0.0))
        with pytest.raises(DomainError):
            divergence(f, EQUATOR, h=0.0)


class TestGordonAngularMomentum:
    def test_1s(self):
        L = mean_gordon_angular_momentum(HydrogenState((1, 0, 0)), SpinVector.up())
        np.testing.assert_allclose(L, [0, 0, 1.0], atol=1e-8)

    def test_zero_spin(self):
        L = mean_gordon_angular_momentum(HydrogenState((2, 1, 1)), SpinVector.none())
        assert np.all(L == 0.0)

    def test_2p0_down(self):
        L = mean_gordon_angular_momentum(HydrogenState((2, 1, 0)), SpinVector.down())
        np.testing.assert_allclose(L, [0, 0, -1.0], atol=1e-8)

    def test_linearity_transverse(self):
        s = SpinVector.along((1, -1, 0.5))
        for state in (HydrogenState((2, 1, 1)), OscillatorState((0, 1, 0), 1.0)):
            L = mean_gordon_angular_momentum(state, s)
            np.testing.assert_allclose(L, 2 * np.asarray(s.s), atol=1e-8)

    def test_unconverged(self):
        with pytest.raises(NumericError):
            mean_gordon_angular_momentum(HydrogenState((3, 2, 1)), "up", QuadratureSpec(n_radial=8, n_theta=4, n_phi=4))


class TestStreamline:
    def test_1s_circle(self):
        n = 628
        dt = 2 * math.pi / n
        tr = streamline(state_velocity(HydrogenState((1, 0, 0)), "up"), EQUATOR, dt, n, "1s")
        assert len(tr) == n + 1 and tr.label == "1s"
        assert np.linalg.norm(tr.xyz[-1] - tr.xyz[0]) < 1e-6
        # exact circle oracle at every sample
        exact = np.column_stack([np.cos(tr.times), np.sin(tr.times), np.zeros(n + 1)])
        assert np.abs(tr.xyz - exact).max() < 1e-6
        r, th, _ = tr.spherical()
        assert np.abs(r - 1).max() < 1e-6 and np.abs(th - math.pi / 2).max() < 1e-6

    def test_oscillator_period(self):
        tr = streamline(state_velocity(OscillatorState((0, 0, 0), 1.0), "up"), EQUATOR, 0.01, 700)
        assert tr.azimuthal_period() == pytest.approx(2 * math.pi, abs=1e-4)

    def test_axis_start_is_stationary(self):
        tr = streamline(state_velocity(HydrogenState((1, 0, 0)), "up"), SphericalPoint(1.0, 0.0, 0.0), 0.1, 20)
        assert np.all(tr.xyz == tr.xyz[0])

    def test_node_error_at_start(self):
        with pytest.raises(StreamlineError) as info:
            streamline(state_velocity(HydrogenState((2, 1, 0)), "up"), EQUATOR, 0.1, 10)
        assert isinstance(info.value.cause, NodeError)
        assert len(info.value.trajectory) == 1

    def test_node_error_carries_prefix(self):
        s = HydrogenState((2, 0, 0))

        def vel(p):
            # outward drift into the 2s nodal shell
            if p.r < 1.9:
                return SphericalVector(1.0, 0.0, 0.0)
            return state_velocity(s, "up")(SphericalPoint(2.0, p.theta, p.phi))

        with pytest.raises(StreamlineError) as info:
            streamline(vel, EQUATOR, 0.1, 20)
        tr = info.value.trajectory
        assert isinstance(info.value.cause, NodeError)
        assert 1 < len(tr) < 20 and np.all(np.diff(tr.times) > 0)
        assert np.all(np.isfinite(tr.xyz))

    def test_rows(self):
        tr = streamline(lambda p: SphericalVector(0.0, 0.0, 0.0), EQUATOR, 0.5, 2)
        rows = list(tr.rows())
        assert rows[2][0] == 1.0 and rows[0][4:] == (1.0, math.pi / 2, 0.0)

    def test_no_revolution(self):
        tr = streamline(lambda p: SphericalVector(0.0, 0.0, 0.0), EQUATOR, 0.5, 2)
        with pytest.raises(NumericError):
            tr.azimuthal_period()

    def test_bad_step(self):
        with pytest.raises(DomainError):
            streamline(lambda p: SphericalVector(0, 0, 0), EQUATOR, 0.0, 2)


class TestCompare:
    def test_equator(self):
        rep = compare_dirac_schrodinger([EQUATOR])
        rec = rep.records[0]
        assert rec.v_dirac == pytest.approx(1.0, rel=1e-14)
        assert rec.v_schrodinger_gordon == pytest.approx(1.0, rel=1e-14)
        assert rec.v_classical == 0.0

    def test_quarter(self):
        rep = compare_dirac_schrodinger([SphericalPoint(2.5, math.pi / 4, 1.0)])
        assert rep.records[0].v_dirac == pytest.approx(math.sqrt(2) / 2, rel=1e-14)
        assert rep.max_abs_deviation < 1e-12

    def test_spin_down(self):
        rep = compare_dirac_schrodinger(sample_points(20, seed=22), m=-0.5)
        assert rep.spin_sign == -1
        assert all(r.v_dirac < 0 for r in rep.records)
        assert rep.max_rel_deviation < 1e-12

    def test_empty(self):
        rep = compare_dirac_schrodinger([])
        assert isinstance(rep, ComparisonReport)
        assert rep.records == [] and rep.max_abs_deviation == 0.0 and rep.max_rel_deviation == 0.0

    def test_errors_marked(self):
        rep = compare_dirac_schrodinger([SphericalPoint(0.0, 0.0, 0.0), EQUATOR])
        assert rep.n_errors == 1 and "Error" in rep.records[0].error
        assert rep.records[1].error is None
        assert all(r.abs_deviation >= 0 for r in rep.records if r.error is None)


def test_dirac_state_norm():
    s = dirac_1s_state()
    spec = QuadratureSpec(n_radial=400, r_min=DIRAC_R_MIN, r_max=60.0)
    assert integrate_density(s, spec) == pytest.approx(1.0, abs=1e-12)
