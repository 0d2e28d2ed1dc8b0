"""Hastings-McLeod solution of Painleve II and the Tracy-Widom auxiliary functions.

The boundary-value problem ``q'' = s q + 2 q^3`` with ``q ~ Ai`` on the right
and ``q ~ sqrt(-s/2)`` on the left is solved by Chebyshev collocation with a
damped Newton iteration.  Every downstream quantity is then an indefinite
integral taken from the right end, done spectrally on the same Chebyshev
grid and sampled onto a uniform table.

Two families of "moment" functions are kept:

* ``u0..w1`` -- the resolvent inner products of Tracy and Widom,
  ``u_i = (Q, x^i Ai)``, ``v_i = (Q, x^i Ai')``, ``w_i = (P, x^i Ai')`` on
  ``L^2(s, inf)`` with ``Q = (I - K_Ai)^{-1} Ai`` and ``P = (I - K_Ai)^{-1} Ai'``.
  These are what the second-order correction functions are built from.
* ``u0_direct..w1_direct`` -- the plain integrals ``int_s^inf q x^i Ai dx``
  (and analogues, with ``w_i`` carrying the extra ``u0 v_i``).  They agree
  with the resolvent versions only to leading order as ``s -> inf``.

CSV layout (one header comment, then a standard CSV header row)::

    # edgeworth-rmt v1
    s,q,qp,u0,u1,u2,v0,v1,w0,w1,i_int,j_int,f2,u0_direct,...,w1_direct
"""

from __future__ import annotations

import csv
import functools
import logging
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.interpolate import CubicHermiteSpline

from .specfun import ConvergenceError, airy

log = logging.getLogger(__name__)

__all__ = [
    "PainleveTable",
    "GridTooCoarseError",
    "solve_hastings_mcleod",
    "auxiliary_integrals",
    "build_table",
    "default_table",
    "tw2_cdf",
    "e_function",
    "kappa",
    "write_table_csv",
    "read_table_csv",
    "CSV_VERSION_LINE",
]

CSV_VERSION_LINE = "# edgeworth-rmt v1"

MOMENTS = ("u0", "u1", "u2", "v0", "v1", "w0", "w1")
DIRECT = tuple(f"{m}_direct" for m in MOMENTS)
COLUMNS = ("s", "q", "qp") + MOMENTS + ("i_int", "j_int", "f2") + DIRECT

DEFAULT_S_MIN = -10.0
DEFAULT_S_MAX = 8.0
DEFAULT_STEP = 0.005
DEFAULT_CHEB = 256


class GridTooCoarseError(RuntimeError):
    """The spectral discretisation does not resolve the integrands."""


@dataclass(frozen=True)
class PainleveTable:
    s_grid: np.ndarray
    q: np.ndarray
    qp: np.ndarray
    u0: np.ndarray | None = None
    u1: np.ndarray | None = None
    u2: np.ndarray | None = None
    v0: np.ndarray | None = None
    v1: np.ndarray | None = None
    w0: np.ndarray | None = None
    w1: np.ndarray | None = None
    i_int: np.ndarray | None = None
    j_int: np.ndarray | None = None
    f2: np.ndarray | None = None
    u0_direct: np.ndarray | None = None
    u1_direct: np.ndarray | None = None
    u2_direct: np.ndarray | None = None
    v0_direct: np.ndarray | None = None
    v1_direct: np.ndarray | None = None
    w0_direct: np.ndarray | None = None
    w1_direct: np.ndarray | None = None
    newton_iterations: int = 0
    residual: float = 0.0
    _splines: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def s_min(self) -> float:
        return float(self.s_grid[0])

    @property
    def s_max(self) -> float:
        return float(self.s_grid[-1])

    @property
    def filled(self) -> bool:
        return self.f2 is not None

    def column(self, name: str) -> np.ndarray:
        value = getattr(self, name)
        if value is None:
            raise ValueError(f"table column {name!r} not populated; run auxiliary_integrals")
        return value

    def derivative(self, name: str) -> np.ndarray:
        """Exact s-derivative of a column, from the defining differential relations."""
        s, q, qp = self.s_grid, self.q, self.qp
        if name == "s":
            return np.ones_like(s)
        if name == "q":
            return qp
        if name == "qp":
            return s * q + 2 * q ** 3
        if name == "i_int":
            return -q * q
        if name == "j_int":
            return -self.column("i_int")
        if name == "f2":
            return self.column("i_int") * self.column("f2")
        if name in MOMENTS:
            return _resolvent_rhs(s, q, qp, {m: self.column(m) for m in MOMENTS})[name]
        if name in DIRECT:
            av = airy(s)
            vals = {m: self.column(m) for m in DIRECT}
            return _direct_rhs(s, q, qp, av.ai, av.aip, vals)[name]
        raise KeyError(name)

    def interp(self, name: str, s):
        """Cubic Hermite interpolation of a column (uses exact derivatives)."""
        s_arr = np.asarray(s, dtype=float)
        lo, hi = self.s_min, self.s_max
        tol = 1e-12 * max(1.0, abs(lo), abs(hi))
        if np.any(s_arr < lo - tol) or np.any(s_arr > hi + tol) or not np.all(np.isfinite(s_arr)):
            raise ValueError(f"s outside table range [{lo}, {hi}]")
        spline = self._splines.get(name)
        if spline is None:
            y = self.column(name)
            dy = self.derivative(name)
            if name == "f2":
                dy = _monotone_safeguard(self.s_grid, y, dy)
            spline = CubicHermiteSpline(self.s_grid, y, dy)
            self._splines[name] = spline
        out = spline(np.clip(s_arr, lo, hi))
        return float(out) if s_arr.ndim == 0 else out


def _monotone_safeguard(x: np.ndarray, y: np.ndarray, dy: np.ndarray) -> np.ndarray:
    # Fritsch-Carlson: keep the Hermite cubic monotone on every interval.
    dy = np.maximum(dy, 0.0)
    delta = np.diff(y) / np.diff(x)
    a = np.zeros_like(delta)
    b = np.zeros_like(delta)
    nz = delta > 0
    a[nz] = dy[:-1][nz] / delta[nz]
    b[nz] = dy[1:][nz] / delta[nz]
    r = np.hypot(a, b)
    bad = r > 3.0
    if np.any(bad):
        tau = np.where(bad, 3.0 / np.where(bad, r, 1.0), 1.0)
        dy = dy.copy()
        idx = np.nonzero(bad)[0]
        dy[idx] = np.minimum(dy[idx], tau[idx] * a[idx] * delta[idx])
        dy[idx + 1] = np.minimum(dy[idx + 1], tau[idx] * b[idx] * delta[idx])
    flat = ~nz
    if np.any(flat):
        dy = dy.copy()
        idx = np.nonzero(flat)[0]
        dy[idx] = 0.0
        dy[idx + 1] = 0.0
    return dy


# ---------------------------------------------------------------------------
# Chebyshev machinery
# ---------------------------------------------------------------------------

def _cheb_points(n: int, a: float, b: float) -> np.ndarray:
    z = np.cos(np.pi * np.arange(n + 1) / n)
    return a + 0.5 * (b - a) * (z + 1.0)


def _cheb_diff_matrix(n: int, a: float, b: float) -> np.ndarray:
    z = np.cos(np.pi * np.arange(n + 1) / n)
    c = np.ones(n + 1)
    c[0] = c[-1] = 2.0
    c = c * (-1.0) ** np.arange(n + 1)
    dz = z[:, None] - z[None, :]
    D = np.outer(c, 1.0 / c) / (dz + np.eye(n + 1))
    D -= np.diag(D.sum(axis=1))
    return D * (2.0 / (b - a))


def _cheb_coeffs(values: np.ndarray) -> np.ndarray:
    # values at z_j = cos(pi j / n), j = 0..n
    n = len(values) - 1
    ext = np.concatenate([values, values[n - 1:0:-1]])
    coef = np.real(np.fft.fft(ext))[: n + 1] / n
    coef[0] *= 0.5
    coef[n] *= 0.5
    return coef


class _ChebGrid:
    def __init__(self, n: int, a: float, b: float):
        self.n, self.a, self.b = n, a, b
        self.s = _cheb_points(n, a, b)
        self.half = 0.5 * (b - a)

    def to_z(self, s):
        return (np.asarray(s, dtype=float) - self.a) / self.half - 1.0

    def tail(self, values: np.ndarray) -> np.ndarray:
        """Node values of int_s^b f, given node values of f."""
        coef = _cheb_coeffs(values)
        anti = -C.chebint(coef, lbnd=1.0, scl=self.half)
        out = C.chebval(self.to_z(self.s), anti)
        out[0] = 0.0
        return out

    def evaluate(self, values: np.ndarray, s) -> np.ndarray:
        return C.chebval(self.to_z(s), _cheb_coeffs(values))

    def tail_coefficient_ratio(self, values: np.ndarray) -> float:
        coef = np.abs(_cheb_coeffs(values))
        scale = max(coef.max(), 1e-300)
        return float(coef[-8:].max() / scale)


# ---------------------------------------------------------------------------
# Boundary-value solve
# ---------------------------------------------------------------------------

def left_asymptote(s):
    """q(s) ~ sqrt(-s/2) (1 + 1/(8 s^3) - 73/(128 s^6) + 10657/(1024 s^9)), s -> -inf."""
    s = np.asarray(s, dtype=float)
    return np.sqrt(-s / 2.0) * (1 + 1 / (8 * s ** 3) - 73 / (128 * s ** 6) + 10657 / (1024 * s ** 9))


def _initial_guess(s: np.ndarray) -> np.ndarray:
    w = 0.5 * (1.0 + np.tanh(2.0 * s))
    return w * airy(np.maximum(s, 0.0)).ai + (1.0 - w) * np.sqrt(np.maximum(-s, 0.0) / 2.0 + 0.02)


def _newton_hm(grid: _ChebGrid, tol: float, max_iter: int = 60):
    s = grid.s
    D = _cheb_diff_matrix(grid.n, grid.a, grid.b)
    D2 = D @ D
    right = airy(grid.b).ai
    left = float(left_asymptote(grid.a))
    q = _initial_guess(s)
    q[0], q[-1] = right, left

    def residual(q):
        F = D2 @ q - s * q - 2 * q ** 3
        F[0] = q[0] - right
        F[-1] = q[-1] - left
        return F

    F = residual(q)
    norm = np.max(np.abs(F))
    for it in range(1, max_iter + 1):
        J = D2 - np.diag(s + 6 * q * q)
        J[0, :] = 0.0
        J[-1, :] = 0.0
        J[0, 0] = J[-1, -1] = 1.0
        dq = np.linalg.solve(J, -F)
        if np.max(np.abs(dq)) <= tol:
            q = q + dq
            return q, D, it, float(np.max(np.abs(residual(q)[1:-1])))
        lam = 1.0
        while True:
            trial = q + lam * dq
            Ft = residual(trial)
            nt = np.max(np.abs(Ft))
            if nt < norm or lam < 1e-4:
                break
            lam *= 0.5
        q, F, norm = trial, Ft, nt
        log.debug("newton it=%d lambda=%.3g residual=%.3e", it, lam, norm)
    raise ConvergenceError(
        f"Hastings-McLeod Newton solve did not converge: residual {norm:.3e} after {max_iter} iterations"
    )


def solve_hastings_mcleod(s_min: float = DEFAULT_S_MIN, s_max: float = DEFAULT_S_MAX,
                          tol: float = 1e-11, step: float = DEFAULT_STEP,
                          cheb_degree: int = DEFAULT_CHEB) -> PainleveTable:
    """Solve q'' = s q + 2 q^3 on [s_min, s_max] and tabulate q, q' on a uniform grid.

    Right boundary q(s_max) = Ai(s_max); left boundary q(s_min) from the
    large-|s| asymptotic series.  ``tol`` bounds the final Newton update.
    """
    if not s_min < -2 or not s_max > 5:
        raise ValueError("solve_hastings_mcleod needs s_min < -2 and s_max > 5")
    grid = _ChebGrid(cheb_degree, s_min, s_max)
    q_nodes, D, iterations, res = _newton_hm(grid, tol)
    ratio = grid.tail_coefficient_ratio(q_nodes)
    if ratio > 1e-13:
        raise GridTooCoarseError(
            f"Chebyshev degree {cheb_degree} does not resolve q (tail ratio {ratio:.2e})"
        )
    count = int(round((s_max - s_min) / step)) + 1
    s_grid = np.linspace(s_min, s_max, count)
    qp_nodes = D @ q_nodes
    q = grid.evaluate(q_nodes, s_grid)
    qp = grid.evaluate(qp_nodes, s_grid)
    return PainleveTable(s_grid=s_grid, q=q, qp=qp, newton_iterations=iterations, residual=float(res))


# ---------------------------------------------------------------------------
# Auxiliary functions
# ---------------------------------------------------------------------------

def _resolvent_sources(s, q, qp, m):
    """Values at s of the resolvent applied to x^i Ai and x^i Ai'.

    Uses p = q' + q u0 and the commutator identity
    (I-K)^{-1} x f = x (I-K)^{-1} f - Q (P, f) + P (Q, f).
    """
    p = qp + q * m["u0"]
    q1 = s * q - m["v0"] * q + m["u0"] * p
    vt1 = m["v1"] - m["v0"] ** 2 + m["u0"] * m["w0"]   # (P, x Ai)
    q2 = s * q1 - q * vt1 + p * m["u1"]
    p1 = s * p - q * m["w0"] + p * m["v0"]
    return p, q1, q2, p1


def _resolvent_rhs(s, q, qp, m):
    p, q1, q2, p1 = _resolvent_sources(s, q, qp, m)
    return {
        "u0": -q * q, "u1": -q * q1, "u2": -q * q2,
        "v0": -q * p, "v1": -q * p1,
        "w0": -p * p, "w1": -p * p1,
    }


def _direct_rhs(s, q, qp, ai, aip, m):
    d = {
        "u0_direct": -q * ai, "u1_direct": -q * s * ai, "u2_direct": -q * s * s * ai,
        "v0_direct": -q * aip, "v1_direct": -q * s * aip,
    }
    u0 = m["u0_direct"]
    for i in (0, 1):
        v = m[f"v{i}_direct"]
        d[f"w{i}_direct"] = -qp * s ** i * aip + d["u0_direct"] * v + u0 * d[f"v{i}_direct"]
    return d


def _resolvent_chain(grid: _ChebGrid, q, qp):
    # The ODE system is triangular: each quantity needs only ones already built.
    s = grid.s
    m = {}
    m["u0"] = grid.tail(q * q)
    p = qp + q * m["u0"]
    m["v0"] = grid.tail(q * p)
    m["w0"] = grid.tail(p * p)
    q1 = s * q - m["v0"] * q + m["u0"] * p
    p1 = s * p - q * m["w0"] + p * m["v0"]
    m["u1"] = grid.tail(q * q1)
    m["v1"] = grid.tail(q * p1)
    m["w1"] = grid.tail(p * p1)
    vt1 = m["v1"] - m["v0"] ** 2 + m["u0"] * m["w0"]
    q2 = s * q1 - q * vt1 + p * m["u1"]
    m["u2"] = grid.tail(q * q2)
    return m


def _direct_chain(grid: _ChebGrid, q, qp, ai, aip):
    s = grid.s
    m = {
        "u0_direct": grid.tail(q * ai),
        "u1_direct": grid.tail(q * s * ai),
        "u2_direct": grid.tail(q * s * s * ai),
        "v0_direct": grid.tail(q * aip),
        "v1_direct": grid.tail(q * s * aip),
    }
    for i in (0, 1):
        m[f"w{i}_direct"] = grid.tail(qp * s ** i * aip) + m["u0_direct"] * m[f"v{i}_direct"]
    return m


def auxiliary_integrals(table: PainleveTable, cheb_degree: int = DEFAULT_CHEB) -> PainleveTable:
    """Return a copy of ``table`` with all moment columns, I, J and F2 filled in.

    q, q' are resampled from the table onto a Chebyshev grid (cubic Hermite,
    exact derivative), then every integral from the right end is taken
    spectrally.  Raises :class:`GridTooCoarseError` if an integrand is not
    resolved by the Chebyshev degree.
    """
    s_grid = table.s_grid
    grid = _ChebGrid(cheb_degree, table.s_min, table.s_max)
    spline = CubicHermiteSpline(s_grid, table.q, table.qp)
    dspline = CubicHermiteSpline(s_grid, table.qp, s_grid * table.q + 2 * table.q ** 3)
    q = spline(grid.s)
    qp = dspline(grid.s)
    av = airy(grid.s)

    for label, integrand in (("q^2", q * q), ("q Ai", q * av.ai), ("q' Ai'", qp * av.aip)):
        ratio = grid.tail_coefficient_ratio(integrand)
        if ratio > 1e-10:
            raise GridTooCoarseError(f"integrand {label} unresolved at degree {cheb_degree} (ratio {ratio:.2e})")

    nodes = _resolvent_chain(grid, q, qp)
    nodes.update(_direct_chain(grid, q, qp, av.ai, av.aip))
    i_nodes = nodes["u0"]
    j_nodes = grid.tail(i_nodes)

    cols = {name: grid.evaluate(vals, s_grid) for name, vals in nodes.items()}
    cols["i_int"] = grid.evaluate(i_nodes, s_grid)
    cols["j_int"] = grid.evaluate(j_nodes, s_grid)
    for name in list(cols):
        cols[name][-1] = 0.0
    # J is non-increasing; remove roundoff wiggles so F2 is monotone on the grid
    cols["j_int"] = np.maximum.accumulate(np.maximum(cols["j_int"], 0.0)[::-1])[::-1]
    cols["f2"] = np.exp(-cols["j_int"])
    return replace(table, _splines={}, **cols)


def build_table(s_min: float = DEFAULT_S_MIN, s_max: float = DEFAULT_S_MAX,
                step: float = DEFAULT_STEP, cheb_degree: int = DEFAULT_CHEB) -> PainleveTable:
    return auxiliary_integrals(
        solve_hastings_mcleod(s_min, s_max, step=step, cheb_degree=cheb_degree),
        cheb_degree=cheb_degree,
    )


@functools.lru_cache(maxsize=1)
def _cached_default(cache_path: str | None) -> PainleveTable:
    if cache_path:
        path = Path(cache_path)
        if path.exists():
            log.info("loading Painleve table from %s", path)
            return read_table_csv(path)
        table = build_table()
        write_table_csv(table, path)
        return table
    return build_table()


def default_table() -> PainleveTable:
    """The default table, honouring ``EDGEWORTH_TABLE_CACHE`` if set."""
    return _cached_default(os.environ.get("EDGEWORTH_TABLE_CACHE") or None)


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------

def tw2_cdf(table: PainleveTable, s):
    """GUE Tracy-Widom F2(s) = exp(-int_s^inf (x-s) q^2 dx), interpolated."""
    return table.interp("f2", s)


def kappa(kind: str, c: float) -> float:
    """Coefficient of v0 in the second-order correction function."""
    if kind == "G":
        return -20.0 * c * c + 3.0
    if kind == "L":
        return 20.0 * c * c - 2.0
    raise ValueError(f"kind must be 'G' or 'L', got {kind!r}")


def universal_partner(c_g: float, sign: float = 1.0) -> float:
    """c_L on the circle c_G^2 + c_L^2 = 1/4."""
    if abs(c_g) > 0.5 + 1e-15:
        raise ValueError("universal mode needs |c_G| <= 1/2")
    return math.copysign(math.sqrt(max(0.25 - c_g * c_g, 0.0)), sign)


def e_function(table: PainleveTable, s, kind: str, c: float, moments: str = "resolvent"):
    """2w1 - 3u2 + kappa v0 + u1 v0 - u0 v1 + u0 v0^2 - u0^2 w0 at s.

    ``kind`` is "G" (kappa = 3 - 20c^2), "L" (kappa = 20c^2 - 2) or
    "universal", where ``c`` is read as c_G and kappa is the common value
    shared by both ensembles on c_G^2 + c_L^2 = 1/4.  ``moments="direct"``
    evaluates the same polynomial with the plain integrals instead of the
    resolvent inner products.
    """
    if kind == "universal":
        c_l = universal_partner(c)
        k_g, k_l = kappa("G", c), kappa("L", c_l)
        if abs(k_g - k_l) > 1e-12:
            raise AssertionError("universal constants disagree")
        k = k_g
    else:
        k = kappa(kind, c)
    if moments == "resolvent":
        names = MOMENTS
    elif moments == "direct":
        names = DIRECT
    else:
        raise ValueError(f"moments must be 'resolvent' or 'direct', got {moments!r}")
    u0, u1, u2, v0, v1, w0, w1 = (table.interp(n, s) for n in names)
    return 2 * w1 - 3 * u2 + k * v0 + u1 * v0 - u0 * v1 + u0 * v0 ** 2 - u0 ** 2 * w0


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def write_table_csv(table: PainleveTable, path) -> None:
    cols = [table.column(c) if c != "s" else table.s_grid for c in COLUMNS]
    with open(path, "w", newline="") as fh:
        fh.write(CSV_VERSION_LINE + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in zip(*cols):
            writer.writerow([repr(float(v)) for v in row])


def read_table_csv(path) -> PainleveTable:
    with open(path, newline="") as fh:
        first = fh.readline().rstrip("\n")
        if first != CSV_VERSION_LINE:
            raise ValueError(f"{path}: expected header {CSV_VERSION_LINE!r}, got {first!r}")
        reader = csv.reader(fh)
        header = next(reader)
        rows = np.array([[float(v) for v in row] for row in reader if row])
    missing = [c for c in COLUMNS if c not in header]
    if missing:
        raise ValueError(f"{path}: missing columns {missing}")
    data = {name: rows[:, header.index(name)] for name in COLUMNS}
    s = data.pop("s")
    return PainleveTable(s_grid=s, **data)
