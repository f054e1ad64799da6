"""Registry of identity checks run by ``qflow verify``.

Each check returns ``(passed, detail)``.  Checks use fixed seeds so a run is
reproducible.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from qflow import analysis, currents, eigenstates, specialfns, units
from qflow.currents import ReferenceLabel, SpinVector
from qflow.errors import NodeError, QflowError
from qflow.geometry import SphericalPoint
from qflow.quadrature import QuadratureSpec, default_spec

SEED = 20240601


@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    fn: Callable[[], "tuple[bool, str]"]


@dataclass
class CheckResult:
    name: str
    suite: str
    passed: bool
    detail: str
    seconds: float


REGISTRY: list[Check] = []


def check(suite: str, name: str):
    def deco(fn):
        REGISTRY.append(Check(name, suite, fn))
        return fn

    return deco


def suites() -> list[str]:
    return sorted({c.suite for c in REGISTRY})


def random_points(n: int, rng: np.random.Generator, r_range=(0.1, 10.0), margin=1e-3, avoid=None):
    """Off-axis points; ``avoid(p)`` rejects unwanted samples (nodes)."""
    pts = []
    while len(pts) < n:
        p = SphericalPoint(
            float(rng.uniform(*r_range)),
            float(rng.uniform(margin, math.pi - margin)),
            float(rng.uniform(0.0, 2.0 * math.pi)),
        )
        if avoid is None or not avoid(p):
            pts.append(p)
    return pts


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# units


@check("units", "alpha*c*m_e*r0 = hbar")
def _units_consistency():
    worst = max(
        _rel(k.alpha * k.c * k.m_e * k.r0, k.hbar) for k in (units.constants("atomic"), units.constants("si"))
    )
    return worst < 1e-12, f"max rel err {worst:.2e}"


@check("units", "atomic alpha*c = 1")
def _units_velocity():
    k = units.constants("atomic")
    return k.alpha * k.c == 1.0, f"alpha*c = {k.alpha * k.c!r}"


@check("units", "velocity round trip")
def _units_roundtrip():
    rng = np.random.default_rng(SEED)
    xs = rng.uniform(-1e3, 1e3, 100)
    back = units.convert_velocity(units.convert_velocity(xs, "atomic", "si"), "si", "atomic")
    worst = float(np.max(np.abs(back - xs) / np.abs(xs)))
    return worst < 1e-14, f"max rel err {worst:.2e}"


# special functions


@check("specialfns", "Y_lm orthonormality l <= 5")
def _sf_orthonormal():
    spec = QuadratureSpec(n_theta=24, n_phi=24, n_radial=8)
    from qflow.quadrature import angular_rule

    theta, wt, phi, wp = angular_rule(spec)
    T, P = theta[:, None], phi[None, :]
    W = wt[:, None] * wp[None, :]
    idx = [(l, m) for l in range(6) for m in range(-l, l + 1)]
    Y = {lm: specialfns.spherical_harmonic(*lm, T, P) for lm in idx}
    worst = 0.0
    for a in idx:
        for b in idx:
            val = np.sum(Y[a] * np.conj(Y[b]) * W)
            worst = max(worst, abs(val - (1.0 if a == b else 0.0)))
    return worst < 1e-10, f"max abs err {worst:.2e}"


@check("specialfns", "Y_{l,-m} = (-1)^m conj(Y_lm)")
def _sf_conjugation():
    rng = np.random.default_rng(SEED)
    th, ph = rng.uniform(0, math.pi, 100), rng.uniform(0, 2 * math.pi, 100)
    worst = 0.0
    for l in range(6):
        for m in range(1, l + 1):
            lhs = specialfns.spherical_harmonic(l, -m, th, ph)
            rhs = (-1) ** m * np.conj(specialfns.spherical_harmonic(l, m, th, ph))
            worst = max(worst, float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1e-300))))
    return worst < 1e-12, f"max rel err {worst:.2e}"


# eigenstates


@check("eigenstates", "normalization of built-in states")
def _es_norm():
    worst, name = 0.0, ""
    for key, st in eigenstates.builtin_states().items():
        err = abs(analysis.integrate_density(st, default_spec()) - 1.0)
        if err > worst:
            worst, name = err, key
    d = eigenstates.dirac_1s_state()
    spec = QuadratureSpec(n_radial=400, r_min=eigenstates.DIRAC_R_MIN, r_max=60.0)
    err = abs(analysis.integrate_density(d.density, spec) - 1.0)
    if err > worst:
        worst, name = err, "dirac-1s"
    return worst < 1e-8, f"max |norm-1| {worst:.2e} ({name})"


@check("eigenstates", "grad rho vs finite differences")
def _es_gradients():
    rng = np.random.default_rng(SEED)
    h = 1e-5
    worst = 0.0
    for st in eigenstates.builtin_states().values():
        for p in random_points(10, rng, r_range=(0.3, 4.0), margin=0.05):
            g = st.grad_rho(p).as_array()
            fd = np.array(
                [
                    (st.density(p.r + h, p.theta, p.phi) - st.density(p.r - h, p.theta, p.phi)) / (2 * h),
                    (st.density(p.r, p.theta + h, p.phi) - st.density(p.r, p.theta - h, p.phi)) / (2 * h * p.r),
                    (st.density(p.r, p.theta, p.phi + h) - st.density(p.r, p.theta, p.phi - h))
                    / (2 * h * p.r * math.sin(p.theta)),
                ]
            )
            scale = max(np.linalg.norm(g), 1e-3 * st.rho(p), 1e-12)
            worst = max(worst, float(np.linalg.norm(g - fd) / scale))
    return worst < 1e-6, f"max rel err {worst:.2e}"


@check("eigenstates", "Dirac 1s density is spherically symmetric")
def _es_dirac_sym():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for m in (0.5, -0.5):
        d = eigenstates.dirac_1s_state(m)
        for r in (0.1, 1.0, 3.0):
            th, ph = rng.uniform(0, math.pi, 50), rng.uniform(0, 2 * math.pi, 50)
            vals = d.density(r, th, ph)
            worst = max(worst, float(np.ptp(vals)))
    return worst < 1e-14, f"max spread {worst:.2e}"


# currents


@check("currents", "J1 = 0 for m = 0 states")
def _cur_j1_zero():
    rng = np.random.default_rng(SEED)
    states = [eigenstates.HydrogenState(q) for q in ((1, 0, 0), (2, 0, 0), (2, 1, 0))]
    states.append(eigenstates.OscillatorState((0, 0, 0)))
    ok = all(currents.schrodinger_current_j1(s, p).is_zero() for s in states for p in random_points(50, rng))
    return ok, "exact zero" if ok else "nonzero J1 found"


@check("currents", "velocity = closed forms (H1s, H2s, H2p)")
def _cur_closed_forms():
    rng = np.random.default_rng(SEED)
    worst, bad = 0.0, ""
    for label, (qn, spin) in currents.REFERENCE_STATES.items():
        st = eigenstates.HydrogenState(qn)
        avoid = None
        if qn == (2, 0, 0):
            avoid = lambda p: abs(p.r - 2.0) < 1e-3  # noqa: E731
        elif qn == (2, 1, 0):
            avoid = lambda p: abs(p.theta - math.pi / 2) < 1e-3  # noqa: E731
        for p in random_points(200, rng, avoid=avoid):
            v = currents.velocity(st, spin, p)
            ref = currents.reference_velocity(label, p)
            if v.v_r != 0.0 or v.v_theta != 0.0:
                return False, f"non-circular velocity for {label.value}"
            err = _rel(v.v_phi, ref.v_phi)
            if err > worst:
                worst, bad = err, label.value
    return worst < 1e-10, f"max rel err {worst:.2e} ({bad})"


@check("currents", "Dirac 1s velocity = Schrodinger+Gordon velocity")
def _cur_dirac_exact():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    h = eigenstates.HydrogenState((1, 0, 0))
    for m, spin in ((0.5, SpinVector.up()), (-0.5, SpinVector.down())):
        d = eigenstates.dirac_1s_state(m)
        for p in random_points(200, rng):
            worst = max(worst, _rel(currents.dirac_velocity(d, p).v_phi, currents.velocity(h, spin, p).v_phi))
    return worst < 1e-12, f"max rel err {worst:.2e}"


@check("currents", "spin-flip antisymmetry (2p1/2p-1, Dirac m = +-1/2)")
def _cur_spin_flip():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    a, b = eigenstates.HydrogenState((2, 1, 1)), eigenstates.HydrogenState((2, 1, -1))
    du, dd = eigenstates.dirac_1s_state(0.5), eigenstates.dirac_1s_state(-0.5)
    for p in random_points(100, rng):
        va = currents.velocity(a, SpinVector.up(), p).v_phi
        vb = currents.velocity(b, SpinVector.down(), p).v_phi
        worst = max(worst, _rel(-vb, va))
        worst = max(worst, _rel(-currents.dirac_velocity(dd, p).v_phi, currents.dirac_velocity(du, p).v_phi))
    return worst < 1e-12, f"max rel err {worst:.2e}"


@check("currents", "oscillator ground velocity magnitude omega r sin(theta), circular")
def _cur_osc_ground():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for omega in (0.5, 1.0, 2.0):
        st = eigenstates.OscillatorState((0, 0, 0), omega)
        for p in random_points(50, rng, r_range=(0.1, 4.0)):
            v = currents.velocity(st, SpinVector.up(), p)
            if v.v_r != 0.0 or v.v_theta != 0.0:
                return False, "non-circular"
            worst = max(worst, _rel(abs(v.v_phi), omega * p.r * math.sin(p.theta)))
    return worst < 1e-10, f"max rel err {worst:.2e}"


@check("currents", "2s velocity raises a node error at r = 2 r0")
def _cur_2s_node():
    st = eigenstates.HydrogenState((2, 0, 0))
    for r in (2.0 - 4e-16, 2.0, 2.0 + 4e-16, 2.0 + 1e-14):
        try:
            currents.velocity(st, SpinVector.up(), SphericalPoint(r, 1.0, 0.0))
        except NodeError:
            continue
        return False, f"no node error at r={r!r}"
    return True, "node error near r = 2"


@check("currents", "excited oscillator current is non-circular")
def _cur_osc_noncircular():
    rng = np.random.default_rng(SEED)
    st = eigenstates.CartesianOscillatorState((1, 0, 0))
    for p in random_points(20, rng, r_range=(0.3, 2.0), avoid=lambda q: abs(math.cos(q.phi)) < 0.05):
        v = currents.velocity(st, SpinVector.up(), p)
        if abs(v.v_r) > 1e-8 or abs(v.v_theta) > 1e-8:
            return True, f"v_r={v.v_r:.3e}, v_theta={v.v_theta:.3e} at {p}"
    return False, "all sampled velocities circular"


# analysis


@check("analysis", "continuity div J = 0")
def _an_continuity():
    rng = np.random.default_rng(SEED)
    worst, name = 0.0, ""
    for key, st in eigenstates.builtin_states().items():
        for spin in (SpinVector.up(), SpinVector.down()):
            field = lambda p, st=st, spin=spin: currents.total_current(st, spin, p)  # noqa: E731
            for p in random_points(10, rng, r_range=(0.2, 5.0), margin=0.05):
                err = abs(analysis.divergence(field, p, 1e-4))
                if err > worst:
                    worst, name = err, key
    return worst < 1e-6, f"max |div J| {worst:.2e} ({name})"


@check("analysis", "<L2> = 2 s and gyromagnetic ratio 2")
def _an_gordon():
    worst, ratio_err = 0.0, 0.0
    spins = (SpinVector.up(), SpinVector.along((1.0, 1.0, 0.0)))
    for st in eigenstates.builtin_states().values():
        for spin in spins:
            L = analysis.mean_gordon_angular_momentum(st, spin)
            s = np.asarray(spin.s)
            worst = max(worst, float(np.linalg.norm(L - 2 * s)))
            ratio_err = max(ratio_err, abs(np.linalg.norm(L) / np.linalg.norm(s) - 2.0))
    return worst < 1e-8 and ratio_err < 1e-7, f"max |<L2>-2s| {worst:.2e}, ratio err {ratio_err:.2e}"


@check("analysis", "quadrature converges under refinement")
def _an_quad_conv():
    worst = 0.0
    for st in eigenstates.builtin_states().values():
        spec = default_spec()
        a = analysis.integrate_density(st, spec)
        b = analysis.integrate_density(st, spec.refined())
        worst = max(worst, abs(a - b))
    return worst < 1e-9, f"max change {worst:.2e}"


@check("analysis", "divergence operator is second order")
def _an_div_order():
    field = lambda p: analysis.SphericalVector(p.r, 0.0, 0.0, p)  # noqa: E731
    p = SphericalPoint(0.7, 1.1, 0.3)
    e1 = abs(analysis.divergence(field, p, 1e-2) - 3.0)
    e2 = abs(analysis.divergence(field, p, 5e-3) - 3.0)
    ratio = e1 / e2
    return 3.5 <= ratio <= 4.5, f"error ratio {ratio:.3f}"


@check("analysis", "1s streamline closes after 2 pi r0 / (alpha c)")
def _an_streamline():
    st = eigenstates.HydrogenState((1, 0, 0))
    n = 1000
    start = SphericalPoint(1.0, math.pi / 2, 0.0)
    tr = analysis.streamline(analysis.state_velocity(st, "up"), start, 2 * math.pi / n, n)
    gap = float(np.linalg.norm(tr.xyz[-1] - tr.xyz[0]))
    r, th, _ = tr.spherical()
    drift = max(float(np.max(np.abs(r - 1.0))), float(np.max(np.abs(th - math.pi / 2)) / (math.pi / 2)))
    return gap < 1e-6 and drift < 1e-6, f"return gap {gap:.2e}, drift {drift:.2e}"


@check("analysis", "Dirac vs Schrodinger comparison report")
def _an_compare():
    rng = np.random.default_rng(SEED)
    rep = analysis.compare_dirac_schrodinger(random_points(50, rng))
    ok = rep.n_errors == 0 and rep.max_rel_deviation < 1e-12 and all(r.v_classical == 0.0 for r in rep.records)
    return ok, f"max rel dev {rep.max_rel_deviation:.2e}"


def run_checks(suite: str = "all") -> list[CheckResult]:
    selected = [c for c in REGISTRY if suite == "all" or c.suite == suite]
    if not selected:
        raise ValueError(f"unknown suite {suite!r}; choose from all, {', '.join(suites())}")
    results = []
    for c in selected:
        t0 = time.perf_counter()
        try:
            passed, detail = c.fn()
        except QflowError as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(c.name, c.suite, bool(passed), detail, time.perf_counter() - t0))
    return results


def format_table(results: list[CheckResult]) -> str:
    width = max((len(r.name) for r in results), default=10)
    lines = [f"{'suite':<12} {'check':<{width}}  result  detail"]
    for r in results:
        lines.append(f"{r.suite:<12} {r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.detail}")
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} checks passed")
    return "\n".join(lines)
