"""Edgeworth expansion of the largest-eigenvalue distribution of GUE_n / LUE_n.

    F_{n,2}(t(s)) = F_2(s) {1 + a u0(s) n^{-1/3} + b E(s) n^{-2/3}} + O(n^{-1})

with the fine-tuned edge maps of :class:`~edgeworth_rmt.kernels.EdgeTransform`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fredholm import exact_cdf
from .kernels import EdgeTransform, EnsembleSpec
from .painleve import PainleveTable, default_table, e_function, tw2_cdf, universal_partner

__all__ = [
    "TunedConstants",
    "ExpansionResult",
    "ConvergenceReport",
    "transform",
    "inverse_transform",
    "edgeworth_cdf",
    "convergence_report",
    "loglog_slope",
]

MODES = ("per-ensemble", "universal")


@dataclass(frozen=True)
class TunedConstants:
    c_g: float = 0.0
    c_l: float = 0.0

    @property
    def a_g(self) -> float:
        return self.c_g

    @property
    def a_l(self) -> float:
        return 2.0 ** (2.0 / 3.0) * self.c_l

    b_g = -1.0 / 20.0
    b_l = 2.0 ** (1.0 / 3.0) / 10.0

    @classmethod
    def universal(cls, c_g: float, sign: float = 1.0) -> "TunedConstants":
        """Constants on the circle c_G^2 + c_L^2 = 1/4."""
        return cls(c_g, universal_partner(c_g, sign))

    def on_circle(self, tol: float = 1e-12) -> bool:
        return abs(self.c_g ** 2 + self.c_l ** 2 - 0.25) <= tol

    def ab(self, kind: str) -> tuple[float, float]:
        if kind == "GUE":
            return self.a_g, self.b_g
        return self.a_l, self.b_l


@dataclass(frozen=True)
class ExpansionResult:
    s: np.ndarray | float
    leading: np.ndarray | float
    corr1: np.ndarray | float
    corr2: np.ndarray | float
    total: np.ndarray | float

    @property
    def overshoot(self) -> bool:
        """True when the truncated expansion leaves [0, 1] (reported, never clamped)."""
        tot = np.asarray(self.total)
        return bool(np.any(tot < 0.0) or np.any(tot > 1.0))


def transform(spec: EnsembleSpec, s):
    """Edge variable s -> eigenvalue location t."""
    return EdgeTransform(spec).to_x(s)


def inverse_transform(spec: EnsembleSpec, t):
    return EdgeTransform(spec).to_s(t)


def _constants(spec: EnsembleSpec, mode: str) -> tuple[TunedConstants, str, float]:
    """Constants plus the (kind, c) pair to hand to e_function."""
    if mode == "per-ensemble":
        if spec.kind == "GUE":
            return TunedConstants(c_g=spec.c), "G", spec.c
        return TunedConstants(c_l=spec.c), "L", spec.c
    if mode != "universal":
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if abs(spec.c) > 0.5:
        raise ValueError("universal mode needs |c| <= 1/2")
    if spec.kind == "GUE":
        const = TunedConstants(spec.c, universal_partner(spec.c))
    else:
        const = TunedConstants(universal_partner(spec.c), spec.c)
    return const, "universal", const.c_g


def edgeworth_cdf(spec: EnsembleSpec, s, table: PainleveTable | None = None,
                  mode: str = "per-ensemble", order: int = 2,
                  moments: str = "resolvent") -> ExpansionResult:
    """Edge expansion of P(lambda_max <= t(s)), truncated after n^{-order/3}."""
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order!r}")
    table = default_table() if table is None else table
    const, e_kind, e_c = _constants(spec, mode)
    a, b = const.ab(spec.kind)
    n = spec.n
    s_arr = np.asarray(s, dtype=float)
    f2 = np.asarray(tw2_cdf(table, s_arr), dtype=float)
    zero = np.zeros_like(f2)
    corr1 = zero
    corr2 = zero
    if order >= 1 and a != 0.0:
        u0 = table.interp("u0" if moments == "resolvent" else "u0_direct", s_arr)
        corr1 = a * u0 * f2 * n ** (-1.0 / 3.0)
    if order >= 2:
        e = e_function(table, s_arr, e_kind, e_c, moments=moments)
        corr2 = b * e * f2 * n ** (-2.0 / 3.0)
    total = f2 + corr1 + corr2
    if s_arr.ndim == 0:
        return ExpansionResult(float(s_arr), float(f2), float(corr1), float(corr2), float(total))
    return ExpansionResult(s_arr, f2, np.asarray(corr1), np.asarray(corr2), total)


def loglog_slope(ns: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(n)."""
    ns = np.asarray(ns, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if ns.size < 2 or np.any(errors <= 0):
        return math.nan
    return float(np.polyfit(np.log(ns), np.log(errors), 1)[0])


@dataclass(frozen=True)
class ConvergenceReport:
    kind: str
    alpha: float
    c: float
    order: int
    mode: str
    ns: tuple[int, ...]
    sup_errors: tuple[float, ...]
    slope: float


def convergence_report(spec: EnsembleSpec, ns: Sequence[int], s_grid,
                       table: PainleveTable | None = None, order: int = 2,
                       mode: str = "per-ensemble", m: int = 120) -> ConvergenceReport:
    """sup_s |exact_cdf - expansion| for each n in ``ns`` and the fitted log-log slope.

    ``spec`` fixes kind, alpha and c; its n is replaced by each entry of ``ns``.
    """
    ns = tuple(int(n) for n in ns)
    if len(ns) < 3:
        raise ValueError("need at least three values of n")
    table = default_table() if table is None else table
    s_grid = np.asarray(s_grid, dtype=float)
    sups = []
    for n in ns:
        sp = spec.with_n(n)
        ts = transform(sp, s_grid)
        exact = np.array([exact_cdf(sp, float(t), m=m) for t in ts])
        approx = edgeworth_cdf(sp, s_grid, table, mode=mode, order=order).total
        sups.append(float(np.max(np.abs(exact - approx))))
    return ConvergenceReport(spec.kind, spec.alpha, spec.c, order, mode, ns,
                             tuple(sups), loglog_slope(ns, sups))
