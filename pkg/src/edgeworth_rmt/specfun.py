"""Airy functions, weighted Hermite/Laguerre functions and their edge expansions.

Everything here is vectorised over numpy arrays.  Polynomials are never
evaluated unweighted: the Gaussian / exponential weight is carried through
the three-term recurrences together with a running log-scale, so values at
edge arguments stay finite for large degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AiryValue",
    "WeightedPolyValue",
    "airy",
    "airy_contour",
    "laguerre_weighted",
    "hermite_phi",
    "laguerre_phi",
    "pr_laguerre_expansion",
    "laguerre_edge_expansion",
    "AIRY_AI0",
    "AIRY_AIP0",
]

AIRY_AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
AIRY_AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)

_SQRT_PI = math.sqrt(math.pi)


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


@dataclass(frozen=True)
class AiryValue:
    ai: np.ndarray | float
    aip: np.ndarray | float


@dataclass(frozen=True)
class WeightedPolyValue:
    """``value * exp(log_scale)`` is the represented quantity."""

    value: np.ndarray | float
    log_scale: np.ndarray | float

    @property
    def actual(self):
        with np.errstate(under="ignore"):
            return self.value * np.exp(self.log_scale)

    def __float__(self) -> float:
        return float(self.actual)


# ---------------------------------------------------------------------------
# Airy
# ---------------------------------------------------------------------------

_ANCHOR_STEP = 0.5
_ANCHOR_LO = -12.0
_ANCHOR_HI = 9.0
_TAYLOR_TERMS = 36
_ASYMPTOTIC_TERMS = 40


def _asymptotic_coeffs(count: int) -> tuple[np.ndarray, np.ndarray]:
    u = np.empty(count)
    u[0] = 1.0
    for k in range(1, count):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
    k = np.arange(count)
    v = -(6 * k + 1) / (6 * k - 1) * u
    return u, v


_U, _V = _asymptotic_coeffs(_ASYMPTOTIC_TERMS)


def _truncated_series(coeffs: np.ndarray, inv_zeta: np.ndarray, signs: np.ndarray) -> np.ndarray:
    # sum_k signs[k] * coeffs[k] * inv_zeta**k, stopping each point at its smallest term
    total = np.zeros_like(inv_zeta)
    term_prev = np.full_like(inv_zeta, np.inf)
    active = np.ones(inv_zeta.shape, dtype=bool)
    power = np.ones_like(inv_zeta)
    for k in range(len(coeffs)):
        term = coeffs[k] * power
        active &= np.abs(term) <= np.abs(term_prev)
        total = np.where(active, total + signs[k] * term, total)
        term_prev = term
        power = power * inv_zeta
    return total


def _airy_asymptotic_pos(x: np.ndarray, scaled: bool = False) -> tuple[np.ndarray, np.ndarray]:
    zeta = 2.0 / 3.0 * x ** 1.5
    inv = 1.0 / zeta
    signs = (-1.0) ** np.arange(_ASYMPTOTIC_TERMS)
    su = _truncated_series(_U, inv, signs)
    sv = _truncated_series(_V, inv, signs)
    with np.errstate(under="ignore"):
        damp = np.ones_like(x) if scaled else np.exp(-zeta)
    quarter = x ** 0.25
    ai = damp / (2.0 * _SQRT_PI * quarter) * su
    aip = -quarter * damp / (2.0 * _SQRT_PI) * sv
    return ai, aip


def _airy_asymptotic_neg(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    z = -x
    zeta = 2.0 / 3.0 * z ** 1.5
    inv = 1.0 / zeta
    half = _ASYMPTOTIC_TERMS // 2
    even_signs = (-1.0) ** np.arange(half)
    inv2 = inv * inv
    u_even = _truncated_series(_U[0::2][:half], inv2, even_signs)
    u_odd = inv * _truncated_series(_U[1::2][:half], inv2, even_signs)
    v_even = _truncated_series(_V[0::2][:half], inv2, even_signs)
    v_odd = inv * _truncated_series(_V[1::2][:half], inv2, even_signs)
    phase = zeta - math.pi / 4.0
    c, s = np.cos(phase), np.sin(phase)
    quarter = z ** 0.25
    ai = (c * u_even + s * u_odd) / (_SQRT_PI * quarter)
    aip = quarter / _SQRT_PI * (s * v_even - c * v_odd)
    return ai, aip


def _taylor_coeffs(x0: float, ai: float, aip: float, terms: int) -> np.ndarray:
    # y'' = (x0 + h) y  =>  (k+2)(k+1) a_{k+2} = x0 a_k + a_{k-1}
    a = np.zeros(terms)
    a[0], a[1] = ai, aip
    for k in range(terms - 2):
        prev = a[k - 1] if k >= 1 else 0.0
        a[k + 2] = (x0 * a[k] + prev) / ((k + 2) * (k + 1))
    return a


def _taylor_eval(a: np.ndarray, h) -> tuple:
    val = np.zeros_like(h)
    der = np.zeros_like(h)
    for k in range(a.shape[-1] - 1, 0, -1):
        val = val * h + a[..., k]
        der = der * h + k * a[..., k]
    val = val * h + a[..., 0]
    return val, der


def _build_anchor_table() -> tuple[np.ndarray, np.ndarray]:
    anchors = np.arange(_ANCHOR_LO, _ANCHOR_HI + 0.5 * _ANCHOR_STEP, _ANCHOR_STEP)
    table = np.zeros((anchors.size, _TAYLOR_TERMS))
    i0 = int(round(-_ANCHOR_LO / _ANCHOR_STEP))
    # Ai is dominant when stepping left, so the right half is marched in from
    # the asymptotic regime; the oscillatory left half is marched out from 0.
    ai, aip = _airy_asymptotic_pos(np.array([_ANCHOR_HI]))
    ai, aip = float(ai[0]), float(aip[0])
    for i in range(anchors.size - 1, i0, -1):
        table[i] = _taylor_coeffs(anchors[i], ai, aip, _TAYLOR_TERMS)
        ai, aip = _taylor_eval(table[i], np.array(-_ANCHOR_STEP))
        ai, aip = float(ai), float(aip)
    ai, aip = AIRY_AI0, AIRY_AIP0
    for i in range(i0, -1, -1):
        table[i] = _taylor_coeffs(anchors[i], ai, aip, _TAYLOR_TERMS)
        ai, aip = _taylor_eval(table[i], np.array(-_ANCHOR_STEP))
        ai, aip = float(ai), float(aip)
    return anchors, table


_ANCHORS, _ANCHOR_TABLE = _build_anchor_table()


def airy(x, scaled: bool = False) -> AiryValue:
    """Ai and Ai' at real ``x`` (scalar or array).

    Taylor series about tabulated anchors on [-12, 9] (spacing 1/2), the
    standard asymptotic expansions outside.  With ``scaled=True`` values for
    x > 0 are multiplied by exp(2/3 x^{3/2}); use this when Ai underflows.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("airy: argument must be finite")
    flat = np.atleast_1d(arr).ravel()
    ai = np.empty_like(flat)
    aip = np.empty_like(flat)

    mid = (flat >= _ANCHOR_LO) & (flat <= _ANCHOR_HI)
    if np.any(mid):
        xm = flat[mid]
        idx = np.rint((xm - _ANCHOR_LO) / _ANCHOR_STEP).astype(int)
        h = xm - _ANCHORS[idx]
        ai[mid], aip[mid] = _taylor_eval(_ANCHOR_TABLE[idx], h)
        if scaled:
            pos = xm > 0
            factor = np.exp(2.0 / 3.0 * np.where(pos, xm, 0.0) ** 1.5)
            ai[mid] *= factor
            aip[mid] *= factor
    right = flat > _ANCHOR_HI
    if np.any(right):
        ai[right], aip[right] = _airy_asymptotic_pos(flat[right], scaled=scaled)
    left = flat < _ANCHOR_LO
    if np.any(left):
        ai[left], aip[left] = _airy_asymptotic_neg(flat[left])

    if arr.ndim == 0:
        return AiryValue(float(ai[0]), float(aip[0]))
    return AiryValue(ai.reshape(arr.shape), aip.reshape(arr.shape))


def airy_contour(t: float, radius_param: float = 8.0, nodes: int = 64, tol: float = 1e-12,
                 max_doublings: int = 6) -> float:
    """Ai(t) from the contour integral along the rays arg = +-2pi/3.

    Collapsing the two rays gives
    ``Ai(t) = (1/pi) int_0^R exp(-r^3/3) Im(w exp(r w t)) dr`` with
    ``w = exp(2 pi i / 3)``; the integral is done with Gauss-Legendre and the
    node count doubled until successive values agree to ``tol``.  Kept
    deliberately independent of :func:`airy` so it can serve as an oracle.
    """
    if not math.isfinite(t):
        raise ValueError("airy_contour: t must be finite")
    if radius_param <= 0 or nodes <= 0:
        raise ValueError("airy_contour: radius_param and nodes must be positive")
    w = complex(-0.5, math.sqrt(3.0) / 2.0)

    def integrate(m: int) -> float:
        z, wt = np.polynomial.legendre.leggauss(m)
        r = 0.5 * radius_param * (z + 1.0)
        f = np.exp(-(r ** 3) / 3.0) * np.imag(w * np.exp(r * w * t))
        return float(0.5 * radius_param * np.dot(wt, f) / math.pi)

    prev = integrate(nodes)
    m = nodes
    for _ in range(max_doublings):
        m *= 2
        cur = integrate(m)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise ConvergenceError(
        f"airy_contour: no convergence at t={t} after {max_doublings} doublings "
        f"(last change {abs(cur - prev):.3e})"
    )


# ---------------------------------------------------------------------------
# Weighted recurrences
# ---------------------------------------------------------------------------

_RESCALE_AT = 1e150


def _run_recurrence(n: int, x: np.ndarray, log0: np.ndarray, step):
    """Iterate p_{k+1} = a_k p_k - b_k p_{k-1} from p_0 = exp(log0), p_{-1} = 0.

    Returns (p_n, p_{n-1}, log_scale) with the true values equal to
    ``p * exp(log_scale)``.  ``step(k)`` returns ``(a_k, b_k)``.
    """
    finite0 = np.isfinite(log0)
    scale = np.where(finite0, log0, 0.0)
    cur = np.where(finite0, 1.0, np.where(log0 > 0, np.inf, 0.0)) * np.ones_like(x)
    prev = np.zeros_like(cur)
    for k in range(n):
        a, b = step(k)
        prev, cur = cur, a * cur - b * prev
        big = np.maximum(np.abs(cur), np.abs(prev))
        hit = big > _RESCALE_AT
        if np.any(hit):
            factor = np.where(hit, big, 1.0)
            cur = cur / factor
            prev = prev / factor
            scale = scale + np.log(factor)
    return cur, prev, scale


def _check_finite(x: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name}: argument must be finite")


def laguerre_weighted(n: int, alpha: float, x) -> WeightedPolyValue:
    """exp(-x/2) L_n^alpha(x) via the recurrence run on the weighted sequence."""
    if n < 0:
        raise ValueError("laguerre_weighted: n must be non-negative")
    if not alpha > -1:
        raise ValueError("laguerre_weighted: alpha must exceed -1")
    arr = np.asarray(x, dtype=float)
    _check_finite(arr, "laguerre_weighted")
    if np.any(arr < 0):
        raise ValueError("laguerre_weighted: x must be non-negative")
    xs = np.atleast_1d(arr)

    def step(k):
        return (2 * k + 1 + alpha - xs) / (k + 1), (k + alpha) / (k + 1)

    cur, _, scale = _run_recurrence(n, xs, -0.5 * xs, step)
    return _shape_like(arr, cur, scale)


def hermite_phi(k: int, x) -> WeightedPolyValue:
    """Orthonormal Hermite function H_k(x) exp(-x^2/2) / (2^k k! sqrt(pi))^{1/2}."""
    if k < 0:
        raise ValueError("hermite_phi: k must be non-negative")
    arr = np.asarray(x, dtype=float)
    _check_finite(arr, "hermite_phi")
    cur, _, scale = _hermite_pair(k, np.atleast_1d(arr))
    return _shape_like(arr, cur, scale)


def laguerre_phi(k: int, alpha: float, x) -> WeightedPolyValue:
    """Orthonormal Laguerre function sqrt(k!/Gamma(k+alpha+1)) x^{alpha/2} e^{-x/2} L_k^alpha(x)."""
    if k < 0:
        raise ValueError("laguerre_phi: k must be non-negative")
    if not alpha > -1:
        raise ValueError("laguerre_phi: alpha must exceed -1")
    arr = np.asarray(x, dtype=float)
    _check_finite(arr, "laguerre_phi")
    if np.any(arr < 0):
        raise ValueError("laguerre_phi: x must be non-negative")
    cur, _, scale = _laguerre_pair(k, alpha, np.atleast_1d(arr))
    return _shape_like(arr, cur, scale)


def _shape_like(arr: np.ndarray, value: np.ndarray, scale: np.ndarray) -> WeightedPolyValue:
    if arr.ndim == 0:
        return WeightedPolyValue(float(value[0]), float(scale[0]))
    return WeightedPolyValue(value.reshape(arr.shape), scale.reshape(arr.shape))


def _hermite_pair(n: int, x: np.ndarray):
    """(phi_n, phi_{n-1}, log_scale) for the orthonormal Hermite functions."""
    log0 = -0.5 * x * x - 0.25 * math.log(math.pi)

    def step(k):
        return math.sqrt(2.0 / (k + 1)) * x, math.sqrt(k / (k + 1.0))

    return _run_recurrence(n, x, log0, step)


def _laguerre_pair(n: int, alpha: float, x: np.ndarray):
    """(psi_n, psi_{n-1}, log_scale) for the orthonormal Laguerre functions."""
    with np.errstate(divide="ignore"):
        logx = np.log(x)
    if alpha == 0:
        log0 = -0.5 * x - 0.5 * math.lgamma(alpha + 1.0)
    else:
        log0 = np.where(x > 0, 0.5 * alpha * logx, -np.inf if alpha > 0 else np.inf)
        log0 = log0 - 0.5 * x - 0.5 * math.lgamma(alpha + 1.0)

    def step(k):
        d = math.sqrt((k + 1.0) * (k + 1.0 + alpha))
        return (2 * k + 1 + alpha - x) / d, math.sqrt(k * (k + alpha)) / d

    return _run_recurrence(n, x, log0, step)


def hermite_functions(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Plain-float (phi_n(x), phi_{n-1}(x)); may underflow far from the bulk."""
    cur, prev, scale = _hermite_pair(n, np.asarray(x, dtype=float))
    with np.errstate(under="ignore"):
        f = np.exp(scale)
    return cur * f, prev * f


def laguerre_functions(n: int, alpha: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Plain-float (psi_n(x), psi_{n-1}(x)) for the orthonormal Laguerre functions."""
    cur, prev, scale = _laguerre_pair(n, alpha, np.asarray(x, dtype=float))
    with np.errstate(under="ignore"):
        f = np.exp(scale)
    return cur * f, prev * f


# ---------------------------------------------------------------------------
# Plancherel-Rotach type expansions at the soft edge
# ---------------------------------------------------------------------------

_C13 = 2.0 ** (1.0 / 3.0)
_C23 = 2.0 ** (2.0 / 3.0)


def _check_order(order: int, top: int) -> None:
    if order not in range(top + 1):
        raise ValueError(f"order must be in 0..{top}, got {order!r}")


def pr_laguerre_expansion(n: int, alpha: float, c: float, t, order: int = 3):
    """Edge approximation of exp(-xi^2/2) L_n^alpha(xi^2).

    ``xi = (4n + 2 alpha + 2c)^{1/2} + t / (2^{2/3} n^{1/6})``.  The partial
    sum through the n^{-order/3} correction is returned including the
    prefactor (-1)^n 2^{-alpha-1/3} n^{-1/3}.
    """
    _check_order(order, 3)
    if not alpha > -1:
        raise ValueError("alpha must exceed -1")
    t = np.asarray(t, dtype=float)
    av = airy(t)
    ai, aip = av.ai, av.aip
    a = alpha
    terms = [
        ai,
        (c - 1.0) / _C13 * aip,
        (2 - 10 * c + 5 * c * c - 5 * a) / (10 * _C23) * t * ai + t * t / (20 * _C23) * aip,
        ((5 * a - 15 * c * a + 2 * c ** 3 - 15 * c * c - 56 * c - 6) / 60.0 + (c - 1.0) / 40.0 * t ** 3) * ai
        + (c - 1.0) * (5 * (c - 2) * c - 3 * (2 + 5 * a)) / 60.0 * t * aip,
    ]
    braces = sum(terms[k] * float(n) ** (-k / 3.0) for k in range(order + 1))
    prefactor = (-1.0) ** n * 2.0 ** (-a - 1.0 / 3.0) * float(n) ** (-1.0 / 3.0)
    return prefactor * braces


def laguerre_edge_expansion(n: int, alpha: float, c: float, X, which: str = "n", order: int = 3):
    """Edge approximation of exp(-x/2) L_m^alpha(x) at x = 4n + 2 alpha + 2c + 2(2n)^{1/3} X.

    ``which="n"`` gives degree m = n, ``which="n+1"`` degree m = n + 1 at the
    same x.  Coefficients belong to the x-parametrisation and differ from
    those of :func:`pr_laguerre_expansion`.
    """
    _check_order(order, 3)
    if not alpha > -1:
        raise ValueError("alpha must exceed -1")
    X = np.asarray(X, dtype=float)
    av = airy(X)
    ai, aip = av.ai, av.aip
    a = alpha
    if which == "n":
        prefactor = (-1.0) ** n * 2.0 ** (-a - 1.0 / 3.0) * float(n) ** (-1.0 / 3.0)
        terms = [
            ai,
            (c - 1.0) / _C13 * aip,
            (2 - 10 * c + 5 * c * c - 5 * a) / (10 * _C23) * X * ai - 2 * X * X / (10 * _C23) * aip,
            (-(6 + 56 * c + 15 * c * c - 2 * c ** 3 + 5 * a * (3 * c - 1) - 6 * X ** 3 + 6 * c * X ** 3) * ai
             + (6 + a * (5 - 15 * c) - 6 * c - 15 * c * c + 5 * c ** 3) * X * aip) / 60.0,
        ]
    elif which == "n+1":
        prefactor = (-1.0) ** (n + 1) * 2.0 ** (-a - 1.0 / 3.0) * float(n + 1) ** (-1.0 / 3.0)
        terms = [
            ai,
            (c - 3.0) / _C13 * aip,
            (42 - 30 * c + 5 * c * c - 5 * a) / (10 * _C23) * X * ai - 2 * X * X / (10 * _C23) * aip,
            ((30 + 28 * c - 27 * c * c + 2 * c ** 3 - 5 * a * (3 * c - 7) + 18 * X ** 3 - 6 * c * X ** 3) * ai
             + (-102 - 5 * a * (3 * c - 7) + 114 * c - 45 * c * c + 5 * c ** 3) * X * aip) / 60.0,
        ]
    else:
        raise ValueError(f"which must be 'n' or 'n+1', got {which!r}")
    braces = sum(terms[k] * float(n) ** (-k / 3.0) for k in range(order + 1))
    return prefactor * braces
