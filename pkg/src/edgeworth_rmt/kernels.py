"""Christoffel-Darboux kernels of GUE_n / LUE_n, the Airy kernel, and their edge expansions.

Conventions: ``n`` is always the matrix size.  GUE uses the weight
exp(-x^2) (orthonormal Hermite functions), LUE the weight x^alpha exp(-x).
Edge coordinates are

    GUE:  x = (2(n + c_G))^{1/2} + 2^{-1/2} n^{-1/6} X
    LUE:  x = 4(n + c_L) + 2 alpha + 2 (2n)^{1/3} X

and "scaled" kernels include the Jacobian dx/dX.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import airy, hermite_functions, laguerre_functions, laguerre_phi

__all__ = [
    "EnsembleSpec",
    "EdgeTransform",
    "airy_kernel",
    "hermite_kernel_exact",
    "laguerre_kernel_exact",
    "exact_kernel",
    "scaled_kernel_exact",
    "scaled_rho1_exact",
    "hermite_kernel_expansion",
    "laguerre_kernel_expansion",
    "kernel_expansion",
    "rho1_expansion",
]

_C13 = 2.0 ** (1.0 / 3.0)
_C23 = 2.0 ** (2.0 / 3.0)

# |X - Y| below this (times 1 + |X|, in edge units) switches to the confluent form
AIRY_CONFLUENT = 1e-4
EXACT_CONFLUENT = 1e-6
# below this the Laguerre diagonal is summed term by term (the closed form divides by x)
HARD_EDGE = 1e-3


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    n: int
    alpha: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        kind = self.kind.upper()
        if kind not in ("GUE", "LUE"):
            raise ValueError(f"kind must be GUE or LUE, got {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if int(self.n) != self.n or self.n < 2:
            raise ValueError("matrix size n must be an integer >= 2")
        if kind == "LUE" and not self.alpha > -1:
            raise ValueError("LUE needs alpha > -1")
        if abs(self.c) > 5:
            raise ValueError("tuning constant |c| must be <= 5")

    def with_n(self, n: int) -> "EnsembleSpec":
        return EnsembleSpec(self.kind, n, self.alpha, self.c)


@dataclass(frozen=True)
class EdgeTransform:
    spec: EnsembleSpec

    @property
    def center(self) -> float:
        n, c = self.spec.n, self.spec.c
        if self.spec.kind == "GUE":
            return math.sqrt(2.0 * (n + c))
        return 4.0 * (n + c) + 2.0 * self.spec.alpha

    @property
    def scale(self) -> float:
        """dx/dX, the Jacobian of the edge map."""
        n = self.spec.n
        if self.spec.kind == "GUE":
            return 2.0 ** -0.5 * n ** (-1.0 / 6.0)
        return 2.0 * (2.0 * n) ** (1.0 / 3.0)

    def to_x(self, s):
        return self.center + self.scale * np.asarray(s, dtype=float)

    def to_s(self, x):
        return (np.asarray(x, dtype=float) - self.center) / self.scale


# ---------------------------------------------------------------------------
# Airy kernel
# ---------------------------------------------------------------------------

def airy_kernel(x, y):
    """K_Ai(x, y), broadcasting over x and y."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    ax, ay = airy(x), airy(y)
    d = x - y
    near = np.abs(d) < AIRY_CONFLUENT * (1.0 + np.abs(x))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (ax.ai * ay.aip - ay.ai * ax.aip) / d
    if np.any(near):
        m = 0.5 * (x + y)[near]
        h = 0.5 * d[near]
        am = airy(m)
        a, ap = am.ai, am.aip
        diag = ap * ap - m * a * a
        # second-order term of the symmetric expansion about the midpoint
        curv = 2 * a * ap + 4 * m * ap * ap - 4 * m * m * a * a
        out = np.array(out, dtype=float)
        out[near] = diag + h * h * curv / 6.0
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Finite-n kernels
# ---------------------------------------------------------------------------

def _cd_kernel(x, y, pair, diagonal, a_n: float, tol_abs):
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    fx, gx = pair(x)
    fy, gy = pair(y)
    d = x - y
    near = np.abs(d) < tol_abs
    with np.errstate(divide="ignore", invalid="ignore"):
        out = a_n * (fx * gy - gx * fy) / d
    if np.any(near):
        m = 0.5 * (x + y)[near]
        fm, gm = pair(m)
        out = np.array(out, dtype=float)
        out[near] = diagonal(m, fm, gm)
    return out[()] if out.ndim == 0 else out


def hermite_kernel_exact(spec: EnsembleSpec, x, y):
    """K_n(x, y) = sum_{k<n} phi_k(x) phi_k(y) via Christoffel-Darboux."""
    if spec.kind != "GUE":
        raise ValueError("hermite_kernel_exact needs a GUE spec")
    n = spec.n
    scale = EdgeTransform(spec).scale

    def pair(z):
        return hermite_functions(n, z)

    def diagonal(z, fn, fn1):
        return n * (fn * fn + fn1 * fn1) - math.sqrt(2.0 * n) * z * fn * fn1

    tol = EXACT_CONFLUENT * scale * (1.0 + np.abs(EdgeTransform(spec).to_s(np.asarray(x, dtype=float))))
    return _cd_kernel(x, y, pair, diagonal, math.sqrt(n / 2.0), tol)


def laguerre_kernel_exact(spec: EnsembleSpec, x, y):
    """K_n^alpha(x, y) = sum_{k<n} psi_k(x) psi_k(y), psi_k orthonormal for x^alpha e^{-x}."""
    if spec.kind != "LUE":
        raise ValueError("laguerre_kernel_exact needs an LUE spec")
    xa, ya = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if np.any(xa < 0) or np.any(ya < 0):
        raise ValueError("laguerre_kernel_exact: x, y must be non-negative")
    n, alpha = spec.n, spec.alpha
    if alpha < 0 and (np.any(xa == 0) or np.any(ya == 0)):
        raise ValueError("laguerre_kernel_exact: kernel is unbounded at 0 for alpha < 0")
    r = math.sqrt(n * (n + alpha))

    def pair(z):
        return laguerre_functions(n, alpha, z)

    def diagonal(z, fn, fn1):
        z = np.asarray(z, dtype=float)
        out = np.empty_like(z)
        small = z < HARD_EDGE
        big = ~small
        zb = z[big]
        out[big] = r / zb * (r * (fn[big] ** 2 + fn1[big] ** 2) - (2 * n + alpha - zb) * fn[big] * fn1[big])
        if np.any(small):
            out[small] = sum(laguerre_phi(k, alpha, z[small]).actual ** 2 for k in range(n))
        return out

    tr = EdgeTransform(spec)
    tol = EXACT_CONFLUENT * tr.scale * (1.0 + np.abs(tr.to_s(xa)))
    return _cd_kernel(xa, ya, pair, diagonal, -r, tol)


def exact_kernel(spec: EnsembleSpec, x, y):
    if spec.kind == "GUE":
        return hermite_kernel_exact(spec, x, y)
    return laguerre_kernel_exact(spec, x, y)


def scaled_kernel_exact(spec: EnsembleSpec, X, Y):
    """(dx/dX) K_n(x(X), x(Y)) -- directly comparable with the Airy kernel."""
    tr = EdgeTransform(spec)
    return tr.scale * exact_kernel(spec, tr.to_x(X), tr.to_x(Y))


def scaled_rho1_exact(spec: EnsembleSpec, X):
    """Scaled one-point density (dx/dX) K_n(x, x) at x = x(X)."""
    tr = EdgeTransform(spec)
    x = tr.to_x(X)
    return tr.scale * exact_kernel(spec, x, x)


# ---------------------------------------------------------------------------
# Edge expansions
# ---------------------------------------------------------------------------

def _check_order(order: int) -> None:
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order!r}")


def _airy_pairs(X, Y):
    X, Y = np.broadcast_arrays(np.asarray(X, dtype=float), np.asarray(Y, dtype=float))
    ax, ay = airy(X), airy(Y)
    return X, Y, ax.ai, ax.aip, ay.ai, ay.aip


def hermite_kernel_expansion(spec: EnsembleSpec, X, Y, order: int = 2):
    """Edge expansion of the scaled GUE kernel through n^{-order/3}."""
    _check_order(order)
    X, Y, a, ap, b, bp = _airy_pairs(X, Y)
    n, c = spec.n, spec.c
    out = airy_kernel(X, Y)
    if order >= 1:
        out = out - c * a * b * n ** (-1.0 / 3.0)
    if order >= 2:
        bracket = ((X + Y) * ap * bp - (X * X + X * Y + Y * Y) * a * b
                   + (3.0 - 20.0 * c * c) / 2.0 * (ap * b + a * bp))
        out = out + bracket / 20.0 * n ** (-2.0 / 3.0)
    return out


def laguerre_kernel_expansion(spec: EnsembleSpec, X, Y, order: int = 2):
    """Edge expansion of the scaled LUE kernel through n^{-order/3}; alpha does not enter."""
    _check_order(order)
    X, Y, a, ap, b, bp = _airy_pairs(X, Y)
    n, c = spec.n, spec.c
    out = airy_kernel(X, Y)
    if order >= 1:
        out = out - _C23 * c * a * b * n ** (-1.0 / 3.0)
    if order >= 2:
        bracket = ((X * X + X * Y + Y * Y) * a * b - (X + Y) * ap * bp
                   - (10.0 * c * c - 1.0) * (a * bp + ap * b))
        out = out + _C13 / 10.0 * bracket * n ** (-2.0 / 3.0)
    return out


def kernel_expansion(spec: EnsembleSpec, X, Y, order: int = 2):
    if spec.kind == "GUE":
        return hermite_kernel_expansion(spec, X, Y, order)
    return laguerre_kernel_expansion(spec, X, Y, order)


def rho1_expansion(spec: EnsembleSpec, X, order: int = 2):
    """Edge expansion of the scaled one-point density."""
    _check_order(order)
    X = np.asarray(X, dtype=float)
    av = airy(X)
    a, ap = av.ai, av.aip
    n, c = spec.n, spec.c
    out = ap * ap - X * a * a
    if spec.kind == "GUE":
        if order >= 1:
            out = out - c * a * a * n ** (-1.0 / 3.0)
        if order >= 2:
            out = out + (2 * X * ap * ap - 3 * X * X * a * a + (3 - 20 * c * c) * ap * a) / 20.0 * n ** (-2.0 / 3.0)
    else:
        if order >= 1:
            out = out - _C23 * c * a * a * n ** (-1.0 / 3.0)
        if order >= 2:
            out = out + _C13 / 10.0 * (3 * X * X * a * a - 2 * X * ap * ap
                                       + 2 * (1 - 10 * c * c) * a * ap) * n ** (-2.0 / 3.0)
    return out
