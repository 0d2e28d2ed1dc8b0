"""Command-line front end: ``edgeworth-rmt <command> ...``.

Every command writes a CSV whose first line is the schema marker
``# edgeworth-rmt v1`` followed by a header row.  ``figure`` additionally
writes a gnuplot script next to the CSV.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .edgeworth import convergence_report, edgeworth_cdf, transform
from .fredholm import exact_cdf
from .kernels import EnsembleSpec, rho1_expansion, scaled_rho1_exact
from .painleve import CSV_VERSION_LINE, default_table, e_function, tw2_cdf
from .specfun import laguerre_weighted, pr_laguerre_expansion

COMMANDS = ("tw2-table", "figure", "exact", "edgeworth", "converge")

# captioned configurations and plotted windows
FIGURES = {
    1: dict(kind="GUE", n=40, alpha=0.0, c=0.0, window=(-5.0, 3.0), var="X"),
    2: dict(kind="LUE", n=40, alpha=0.5, c=0.0, window=(-5.0, 3.0), var="X"),
    3: dict(kind="LUE", n=40, alpha=1.0, c=-1.0, window=(-4.0, 4.0), var="t"),
}
FIGURE_POINTS = 401

FIGURE_TITLES = {
    1: ("GUE one-point density, n=40, c_G=0", "2^{-1/2}n^{-1/6}K_n(x,x)"),
    2: ("LUE one-point density, n=40, c_L=0, alpha=1/2", "2(2n)^{1/3}K_n(x,x)"),
    3: ("Laguerre edge asymptotics, n=40, alpha=-c=1", "exp(-xi^2/2)L_n^alpha(xi^2)"),
}


@dataclass
class RunConfig:
    command: str
    ensemble: str = "gue"
    n: int = 40
    alpha: float = 0.0
    c: float = 0.0
    s_range: tuple[float, float, int] = (-8.0, 6.0, 141)
    s_values: tuple[float, ...] | None = None
    output_path: str = "-"
    format: str = "csv"
    which: int = 1
    mode: str = "per-ensemble"
    order: int = 2
    n_list: tuple[int, ...] = field(default_factory=lambda: (10, 20, 40, 80))

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        lo, hi, count = self.s_range
        if int(count) < 2:
            raise ValueError("s-range count must be at least 2")
        if not lo < hi:
            raise ValueError("s-range needs lo < hi")
        if self.ensemble not in ("gue", "lue"):
            raise ValueError("ensemble must be gue or lue")
        if self.format not in ("csv", "plot-script"):
            raise ValueError("format must be csv or plot-script")
        if self.format == "plot-script" and self.command != "figure":
            raise ValueError("only the figure command emits plot scripts")

    def spec(self, n: int | None = None) -> EnsembleSpec:
        return EnsembleSpec(self.ensemble.upper(), self.n if n is None else n, self.alpha, self.c)

    def s_grid(self) -> np.ndarray:
        if self.s_values is not None:
            return np.asarray(self.s_values, dtype=float)
        lo, hi, count = self.s_range
        return np.linspace(lo, hi, int(count))


# ---------------------------------------------------------------------------
# CSV helpers
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def render_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    buf.write(CSV_VERSION_LINE + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# Figure data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FigureData:
    which: int
    grid: np.ndarray
    exact: np.ndarray
    first_order: np.ndarray
    corrected: np.ndarray

    @property
    def sup_first(self) -> float:
        return float(np.max(np.abs(self.exact - self.first_order)))

    @property
    def sup_corrected(self) -> float:
        return float(np.max(np.abs(self.exact - self.corrected)))


def figure_data(which: int, points: int = FIGURE_POINTS) -> FigureData:
    if which not in FIGURES:
        raise ValueError("which must be 1, 2 or 3")
    cfg = FIGURES[which]
    grid = np.linspace(*cfg["window"], points)
    if which in (1, 2):
        spec = EnsembleSpec(cfg["kind"], cfg["n"], cfg["alpha"], cfg["c"])
        exact = scaled_rho1_exact(spec, grid)
        first = rho1_expansion(spec, grid, order=0)
        corrected = rho1_expansion(spec, grid, order=2)
    else:
        n, alpha, c = cfg["n"], cfg["alpha"], cfg["c"]
        xi = math.sqrt(4 * n + 2 * alpha + 2 * c) + grid / (2 ** (2 / 3) * n ** (1 / 6))
        exact = laguerre_weighted(n, alpha, xi * xi).actual
        first = pr_laguerre_expansion(n, alpha, c, grid, order=0)
        corrected = pr_laguerre_expansion(n, alpha, c, grid, order=3)
    return FigureData(which, grid, np.asarray(exact), np.asarray(first), np.asarray(corrected))


def plot_script(which: int, csv_name: str) -> str:
    title, ylabel = FIGURE_TITLES[which]
    var = FIGURES[which]["var"]
    png = os.path.splitext(csv_name)[0] + ".png"
    return "\n".join([
        "# gnuplot script generated by edgeworth-rmt",
        "set terminal pngcairo size 900,600",
        f"set output '{png}'",
        "set datafile separator ','",
        f"set title '{title}'",
        f"set xlabel '{var}'",
        f"set ylabel '{ylabel}'",
        "set key top right",
        f"plot '{csv_name}' every ::1 using 1:2 with lines dt 1 lw 2 title 'exact', \\",
        f"     '{csv_name}' every ::1 using 1:3 with lines dt 2 lw 2 title 'Airy (first order)', \\",
        f"     '{csv_name}' every ::1 using 1:4 with lines dt 3 lw 2 title 'corrected'",
        "",
    ])


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_tw2_table(cfg: RunConfig) -> str:
    table = default_table()
    s = cfg.s_grid()
    if s.min() < table.s_min or s.max() > table.s_max:
        raise ValueError(f"s-range must lie in [{table.s_min}, {table.s_max}]")
    cols = [s, table.interp("q", s), table.interp("u0", s), table.interp("v0", s),
            table.interp("w1", s), e_function(table, s, "G", cfg.c),
            e_function(table, s, "L", cfg.c), tw2_cdf(table, s)]
    text = render_csv(("s", "q", "u0", "v0", "w1", "E_G", "E_L", "F2"), zip(*cols))
    _emit(text, cfg.output_path)
    return text


def cmd_figure(cfg: RunConfig) -> FigureData:
    data = figure_data(cfg.which)
    var = FIGURES[cfg.which]["var"]
    out = cfg.output_path if cfg.output_path != "-" else f"figure{cfg.which}.csv"
    text = render_csv((var, "exact", "first_order", "corrected"),
                      zip(data.grid, data.exact, data.first_order, data.corrected))
    _emit(text, out)
    if cfg.format == "plot-script":
        script_path = os.path.splitext(out)[0] + ".gp"
        _emit(plot_script(cfg.which, os.path.basename(out)), script_path)
    sys.stderr.write(f"figure {cfg.which}: sup error first-order {data.sup_first:.3e}, "
                     f"corrected {data.sup_corrected:.3e}\n")
    if not data.sup_corrected < data.sup_first:
        raise RuntimeError(f"figure {cfg.which}: correction does not improve the Airy approximation")
    return data


def cmd_exact(cfg: RunConfig) -> str:
    spec = cfg.spec()
    s = cfg.s_grid()
    t = transform(spec, s)
    vals = [exact_cdf(spec, float(v)) for v in t]
    text = render_csv(("s", "t", "exact_cdf"), zip(s, t, vals))
    _emit(text, cfg.output_path)
    return text


def cmd_edgeworth(cfg: RunConfig) -> str:
    spec = cfg.spec()
    s = cfg.s_grid()
    res = edgeworth_cdf(spec, s, default_table(), mode=cfg.mode, order=cfg.order)
    t = transform(spec, s)
    flags = (res.total < 0) | (res.total > 1)
    text = render_csv(("s", "t", "leading", "corr1", "corr2", "total", "overshoot"),
                      zip(s, t, res.leading, res.corr1, res.corr2, res.total, flags))
    _emit(text, cfg.output_path)
    return text


def cmd_converge(cfg: RunConfig) -> str:
    rep = convergence_report(cfg.spec(cfg.n_list[0]), cfg.n_list, cfg.s_grid(),
                             default_table(), order=cfg.order, mode=cfg.mode)
    rows = [(n, err, rep.slope) for n, err in zip(rep.ns, rep.sup_errors)]
    text = render_csv(("n", "sup_error", "slope"), rows)
    _emit(text, cfg.output_path)
    return text


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.replace(" ", "").split(",") if v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
    common.add_argument("--format", choices=("csv", "plot-script"), default=None)

    ens = argparse.ArgumentParser(add_help=False)
    ens.add_argument("--ensemble", choices=("gue", "lue"), default="gue")
    ens.add_argument("--alpha", type=float, default=0.0)
    ens.add_argument("--c", type=float, default=0.0, help="tuning constant c_G or c_L")

    srange = argparse.ArgumentParser(add_help=False)
    srange.add_argument("--s-range", nargs=3, type=float, metavar=("LO", "HI", "COUNT"))
    srange.add_argument("--s", nargs="+", type=float, help="explicit s values")

    p = argparse.ArgumentParser(prog="edgeworth-rmt",
                                description="Edge corrections for GUE/LUE largest eigenvalues.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tw2-table", parents=[common, srange], help="Tracy-Widom / Painleve table")
    t.add_argument("--c", type=float, default=0.0, help="tuning constant used in E_G and E_L")

    f = sub.add_parser("figure", parents=[common], help="data and gnuplot script for a figure")
    f.add_argument("--which", type=int, choices=(1, 2, 3), required=True)

    e = sub.add_parser("exact", parents=[common, ens, srange], help="exact finite-n CDF")
    e.add_argument("--n", type=int, required=True)

    g = sub.add_parser("edgeworth", parents=[common, ens, srange], help="Edgeworth approximation")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--mode", choices=("per-ensemble", "universal"), default="per-ensemble")
    g.add_argument("--order", type=int, choices=(0, 1, 2), default=2)

    v = sub.add_parser("converge", parents=[common, ens, srange], help="convergence-rate sweep")
    v.add_argument("--n-list", type=_int_list, default=(10, 20, 40, 80))
    v.add_argument("--order", type=int, choices=(0, 1, 2), default=2)
    v.add_argument("--mode", choices=("per-ensemble", "universal"), default="per-ensemble")
    return p


_DEFAULT_RANGES = {
    "tw2-table": (-8.0, 6.0, 141),
    "exact": (-5.0, 2.0, 25),
    "edgeworth": (-5.0, 2.0, 25),
    "converge": (-5.0, 2.0, 25),
}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    kw = dict(command=args.command, output_path=args.out)
    kw["format"] = args.format or ("plot-script" if args.command == "figure" else "csv")
    if args.command in _DEFAULT_RANGES:
        rng = args.s_range or _DEFAULT_RANGES[args.command]
        kw["s_range"] = (float(rng[0]), float(rng[1]), int(rng[2]))
        if args.s:
            kw["s_values"] = tuple(args.s)
    for name in ("ensemble", "alpha", "c", "n", "which", "mode", "order", "n_list"):
        if hasattr(args, name):
            kw[name] = getattr(args, name)
    return RunConfig(**kw)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        handler = {
            "tw2-table": cmd_tw2_table,
            "figure": cmd_figure,
            "exact": cmd_exact,
            "edgeworth": cmd_edgeworth,
            "converge": cmd_converge,
        }[cfg.command]
        handler(cfg)
    except (ValueError, RuntimeError, OSError) as exc:
        sys.stderr.write(f"edgeworth-rmt: error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
