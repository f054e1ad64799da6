"""Associated Legendre functions, spherical harmonics and Laguerre polynomials.

Everything here is evaluated by recurrence and broadcasts over numpy arrays.
The Condon-Shortley phase (-1)^m is included in P_l^m and therefore in Y_lm.
"""
from __future__ import annotations

import math

import numpy as np

from qflow.errors import DomainError


def _check_lm(l: int, m: int) -> None:
    if l < 0 or abs(m) > l:
        raise DomainError(f"invalid harmonic indices l={l}, m={m}")


def exact_sin(theta):
    """sin(theta) with the poles theta = 0, pi mapped to an exact zero."""
    theta = np.asarray(theta, dtype=float)
    s = np.sin(theta)
    return np.where((theta == 0.0) | (theta == np.pi), 0.0, s)


def _legendre_cs(l: int, m: int, x, s):
    """P_l^m from x = cos(theta) and s = sin(theta) >= 0, for 0 <= m <= l."""
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    # P_m^m = (-1)^m (2m-1)!! s^m
    pmm = np.ones(np.broadcast(x, s).shape)
    fact = 1.0
    for _ in range(m):
        pmm = -pmm * fact * s
        fact += 2.0
    if l == m:
        return pmm
    pm1 = x * (2 * m + 1) * pmm
    if l == m + 1:
        return pm1
    p_prev, p_cur = pmm, pm1
    for ll in range(m + 2, l + 1):
        p_next = ((2 * ll - 1) * x * p_cur - (ll + m - 1) * p_prev) / (ll - m)
        p_prev, p_cur = p_cur, p_next
    return p_cur


def assoc_legendre(l: int, m: int, x):
    """Associated Legendre function P_l^m(x), Condon-Shortley phase included.

    Requires ``0 <= m <= l`` and ``|x| <= 1``.
    """
    if m < 0:
        raise DomainError("assoc_legendre takes m >= 0; use spherical_harmonic for negative m")
    _check_lm(l, m)
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("assoc_legendre requires |x| <= 1")
    s = np.sqrt((1.0 - x) * (1.0 + x))
    out = _legendre_cs(l, m, x, s)
    return out if out.ndim else float(out)


def legendre_theta(l: int, m: int, theta):
    """P_l^m(cos theta) for 0 <= m <= l, accurate near the poles."""
    _check_lm(l, m)
    if m < 0:
        raise DomainError("legendre_theta takes m >= 0")
    theta = np.asarray(theta, dtype=float)
    return _legendre_cs(l, m, np.cos(theta), exact_sin(theta))


def legendre_theta_derivative(l: int, m: int, theta):
    """d/dtheta P_l^m(cos theta) for 0 <= m <= l.

    Uses dP_l^m/dtheta = (P_l^{m+1} - (l+m)(l-m+1) P_l^{m-1}) / 2, with the
    m = 0 case reducing to P_l^1.
    """
    _check_lm(l, m)
    theta = np.asarray(theta, dtype=float)
    x, s = np.cos(theta), exact_sin(theta)
    upper = _legendre_cs(l, m + 1, x, s) if m + 1 <= l else np.zeros(np.broadcast(x, s).shape)
    if m == 0:
        return upper
    lower = _legendre_cs(l, m - 1, x, s)
    return 0.5 * (upper - (l + m) * (l - m + 1) * lower)


def harmonic_norm(l: int, m: int) -> float:
    """Normalization sqrt((2l+1)/(4 pi) (l-|m|)!/(l+|m|)!)."""
    _check_lm(l, m)
    m = abs(m)
    ratio = math.factorial(l - m) / math.factorial(l + m)
    return math.sqrt((2 * l + 1) / (4.0 * math.pi) * ratio)


def theta_harmonic(l: int, m: int, theta):
    """Real polar factor Theta_lm(theta) with Y_lm = Theta_lm(theta) exp(i m phi)."""
    _check_lm(l, m)
    mm = abs(m)
    val = harmonic_norm(l, mm) * legendre_theta(l, mm, theta)
    if m < 0 and mm % 2:
        val = -val
    return val


def theta_harmonic_derivative(l: int, m: int, theta):
    _check_lm(l, m)
    mm = abs(m)
    val = harmonic_norm(l, mm) * legendre_theta_derivative(l, mm, theta)
    if m < 0 and mm % 2:
        val = -val
    return val


def spherical_harmonic(l: int, m: int, theta, phi):
    """Orthonormal complex spherical harmonic Y_lm(theta, phi).

    Negative m follows from Y_{l,-m} = (-1)^m conj(Y_lm).
    """
    _check_lm(l, m)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    out = theta_harmonic(l, m, theta) * np.exp(1j * m * phi)
    return out if np.ndim(out) else complex(out)


def generalized_laguerre(n: int, a: float, x):
    """Generalized Laguerre polynomial L_n^a(x) by the three-term recurrence."""
    if n < 0:
        raise DomainError("Laguerre degree must be nonnegative")
    if a <= -1.0:
        raise DomainError("Laguerre parameter must exceed -1")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + a - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + a - x) * cur - (k + a) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def generalized_laguerre_derivative(n: int, a: float, x):
    """d/dx L_n^a(x) = -L_{n-1}^{a+1}(x)."""
    if n == 0:
        x = np.asarray(x, dtype=float)
        z = np.zeros_like(x)
        return z if z.ndim else 0.0
    return -generalized_laguerre(n - 1, a + 1.0, x)


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x)."""
    if n < 0:
        raise DomainError("Hermite degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 2.0 * x
    for k in range(1, n):
        prev, cur = cur, 2.0 * x * cur - 2.0 * k * prev
    return cur
