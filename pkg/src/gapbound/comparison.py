"""Comparison functions of constant-curvature model spaces.

``sfun``/``cfun`` are the normalised solutions of ``f'' + k f = 0`` with
``(f, f')(0) = (0, 1)`` and ``(1, 0)``; ``jfun`` is the Jacobi profile equal
to one at both ends of ``[0, r]``; ``big_g`` is the radial drift
``-2 sqrt(k) tan(sqrt(k) r / 2)`` (``tanh`` for ``k < 0``).

All functions accept a scalar curvature and scalar or array radii.  Near
``k = 0`` a two-term Taylor branch replaces the closed forms, so every
function is continuous in ``k`` across zero.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .errors import DomainError, EndpointSingular

# |k| * x**2 below this uses the series branch; next term is O((k x^2)^2 / 120)
SERIES_THRESHOLD = 1e-8
# relative guard band on the pole r < pi / sqrt(k)
POLE_GUARD = 1e-12


def _check_k(k: float) -> float:
    k = float(k)
    if not math.isfinite(k):
        raise DomainError(f"curvature must be finite, got {k!r}")
    return k


def _out(x, like):
    return float(x) if np.ndim(like) == 0 else x


def pole_radius(k: float) -> float:
    """First zero of ``sfun(k, .)`` (``inf`` when ``k <= 0``)."""
    k = _check_k(k)
    return math.pi / math.sqrt(k) if k > 0 else math.inf


def sfun(k: float, t):
    """sin(sqrt(k) t)/sqrt(k), t, or sinh(sqrt(-k) t)/sqrt(-k)."""
    k = _check_k(k)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("sfun requires t >= 0")
    a = math.sqrt(abs(k))
    series = t_arr - k * t_arr**3 / 6.0
    if k > 0:
        exact = np.sin(a * t_arr) / a
    elif k < 0:
        exact = np.sinh(a * t_arr) / a
    else:
        exact = t_arr
    out = np.where(abs(k) * t_arr**2 < SERIES_THRESHOLD, series, exact)
    return _out(out, t)


def cfun(k: float, t):
    """cos(sqrt(k) t), 1, or cosh(sqrt(-k) t)."""
    k = _check_k(k)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("cfun requires t >= 0")
    return _out(1.0 - one_minus_cfun(k, t_arr), t)


def one_minus_cfun(k: float, t):
    """``1 - cfun(k, t)`` without cancellation (half-angle form)."""
    k = _check_k(k)
    t_arr = np.asarray(t, dtype=float)
    a = math.sqrt(abs(k))
    series = k * t_arr**2 / 2.0 - k * k * t_arr**4 / 24.0
    if k > 0:
        exact = 2.0 * np.sin(a * t_arr / 2.0) ** 2
    elif k < 0:
        exact = -2.0 * np.sinh(a * t_arr / 2.0) ** 2
    else:
        exact = np.zeros_like(t_arr)
    out = np.where(abs(k) * t_arr**2 < SERIES_THRESHOLD, series, exact)
    return _out(out, t)


def _check_endpoint(k: float, r: float) -> None:
    if not r > 0:
        raise EndpointSingular(f"sfun({k}, r) vanishes at r = {r}")
    if k > 0 and r >= pole_radius(k) * (1.0 - POLE_GUARD):
        raise EndpointSingular(
            f"sfun({k}, r) vanishes at r = {r} (first zero pi/sqrt(k) = {pole_radius(k)})"
        )


def _jfun_slope(k: float, r: float) -> float:
    # (1 - c(r)) / s(r), the initial slope of the Jacobi profile
    return one_minus_cfun(k, r) / sfun(k, r)


def jfun(k: float, r: float, t):
    """Jacobi profile ``c(t) + (1 - c(r)) / s(r) * s(t)`` on ``0 <= t <= r``.

    Raises ``EndpointSingular`` when ``s(k, r) = 0``.
    """
    k = _check_k(k)
    r = float(r)
    _check_endpoint(k, r)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(t_arr > r * (1.0 + 1e-12)):
        raise DomainError("jfun requires 0 <= t <= r")
    t_arr = np.minimum(t_arr, r)
    slope = _jfun_slope(k, r)
    out = cfun(k, t_arr) + slope * sfun(k, t_arr)
    return _out(out, t)


def jfun_dt(k: float, r: float, t):
    """Derivative of :func:`jfun` in ``t``."""
    k = _check_k(k)
    r = float(r)
    _check_endpoint(k, r)
    t_arr = np.minimum(np.asarray(t, dtype=float), r)
    slope = _jfun_slope(k, r)
    out = -k * sfun(k, t_arr) + slope * cfun(k, t_arr)
    return _out(out, t)


def big_g(k: float, r):
    """Radial comparison drift ``G(k, r)``.

    Negative for ``k > 0``, zero for ``k = 0``, positive for ``k < 0``.
    Raises ``DomainError`` for ``r <= 0`` and, when ``k > 0``, for
    ``r >= pi / sqrt(k)`` (the tangent pole, with a relative guard band).
    """
    k = _check_k(k)
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(r_arr > 0)):
        raise DomainError("big_g requires r > 0")
    if k > 0 and np.any(r_arr >= pole_radius(k) * (1.0 - POLE_GUARD)):
        raise DomainError(
            f"big_g({k}, r) requires r < pi/sqrt(k) = {pole_radius(k)!r}"
        )
    a = math.sqrt(abs(k))
    series = -k * r_arr - k * k * r_arr**3 / 12.0
    if k > 0:
        exact = -2.0 * a * np.tan(a * r_arr / 2.0)
    elif k < 0:
        exact = 2.0 * a * np.tanh(a * r_arr / 2.0)
    else:
        exact = np.zeros_like(r_arr)
    out = np.where(abs(k) * r_arr**2 < SERIES_THRESHOLD, series, exact)
    return _out(out, r)


def log_cos_antiderivative(k: float, r):
    """Antiderivative ``4 log cos(sqrt(k) r / 2)`` of ``big_g`` (``log cosh`` for k < 0).

    Vanishes at ``r = 0``; no domain checks beyond finiteness of the result.
    """
    k = _check_k(k)
    r_arr = np.asarray(r, dtype=float)
    a = math.sqrt(abs(k))
    x = a * r_arr / 2.0
    if k > 0:
        out = 4.0 * np.log(np.cos(x))
    elif k < 0:
        # log cosh x = |x| + log1p(exp(-2|x|)) - log 2, overflow-free
        ax = np.abs(x)
        out = 4.0 * (ax + np.log1p(np.exp(-2.0 * ax)) - math.log(2.0))
    else:
        out = np.zeros_like(r_arr)
    return _out(out, r)


def index_energy(k: float, r: float, epsabs: float = 1e-12) -> float:
    """Index energy ``int_0^r (j'(t)^2 - k j(t)^2) dt`` of the Jacobi profile.

    Computed by adaptive Gauss-Kronrod quadrature; by the Jacobi-field
    energy identity it equals ``big_g(k, r)``.
    """
    k = _check_k(k)
    r = float(r)
    _check_endpoint(k, r)

    def integrand(t):
        j = jfun(k, r, t)
        jp = jfun_dt(k, r, t)
        return jp * jp - k * j * j

    value, _err = integrate.quad(integrand, 0.0, r, epsabs=epsabs, epsrel=1e-12, limit=200)
    return float(value)
