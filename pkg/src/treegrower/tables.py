"""Tabular outputs: closed-form prediction tables and scaling sweeps."""

from __future__ import annotations

import csv
import decimal
import io
import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction

import numpy as np

from . import closed_form
from .growth import GrowthModel, Operator, iter_growth, vertex_budget
from .metrics import diameter_double_bfs, wiener_linear
from .tree import SeedSpec, Tree, resolve_seed
from .walks import WalkEstimate, estimate_mean_hitting

PREDICT_COLUMNS = ["t", "n", "diameter", "wiener", "mean_hitting", "mean_hitting_decimal"]

SCALING_COLUMNS = [
    "t",
    "n",
    "diameter",
    "wiener",
    "mean_hitting",
    "empirical_diameter",
    "empirical_wiener",
    "empirical_mean_hitting",
    "mc_mean_hitting",
    "mc_std_error",
    "mc_samples",
    "dlog_hitting_dlog_n",
    "dlog_diameter_dlog_n",
    "hitting_over_n_diameter",
]


def format_decimal(value, digits: int = 15) -> str:
    """Render an int or Fraction to ``digits`` significant digits."""
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    frac = Fraction(value)
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(frac.numerator) / Decimal(frac.denominator)
    return f"{d:.{digits}g}"


def format_rational(value) -> str:
    if value is None:
        return ""
    frac = Fraction(value)
    return str(frac.numerator) if frac.denominator == 1 else f"{frac.numerator}/{frac.denominator}"


def seed_parameters(seed: Tree) -> tuple[int, int, int]:
    """``(n0, D0, W0)`` measured on the seed tree."""
    d0, _ = diameter_double_bfs(seed)
    return seed.n, d0, wiener_linear(seed)


def predict_rows(operator: Operator, seed: SeedSpec | Tree, steps: int) -> list[dict]:
    seed_tree = seed if isinstance(seed, Tree) else resolve_seed(seed)
    n0, d0, w0 = seed_parameters(seed_tree)
    series = closed_form.exact_series(n0, d0, w0, steps, operator.value)
    rows = series.rows()
    for row in rows:
        row["mean_hitting_decimal"] = format_decimal(row["mean_hitting"]) if row["mean_hitting"] is not None else ""
    return rows


def ols_slope(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        return math.nan
    return float(np.polyfit(x, y, 1)[0])


@dataclass
class ScalingResult:
    operator: Operator
    rows: list[dict]
    slope_window: tuple[int, int]
    slope_hitting: float
    slope_diameter: float
    mismatches: list[str] = field(default_factory=list)
    truncated: int = 0

    def footer(self) -> list[list[str]]:
        exps = closed_form.predicted_exponents()
        chi = exps.chi if self.operator is Operator.PHI else exps.chi_star
        return [
            ["# slope_log_mean_hitting_vs_log_n", format_decimal(self.slope_hitting), f"t={self.slope_window[0]}..{self.slope_window[1]}"],
            ["# slope_log_diameter_vs_log_n", format_decimal(self.slope_diameter), f"t={self.slope_window[0]}..{self.slope_window[1]}"],
            ["# predicted_hitting_exponent", format_decimal(float(chi)), "" if self.operator is Operator.PHI else "up to a log factor"],
            ["# predicted_diameter_exponent", format_decimal(float(exps.diameter_exponent)) if self.operator is Operator.PHI else "0", "" if self.operator is Operator.PHI else "diameter grows like log n"],
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(SCALING_COLUMNS)
        for row in self.rows:
            writer.writerow([_cell(col, row.get(col)) for col in SCALING_COLUMNS])
        for line in self.footer():
            writer.writerow(line)
        return buf.getvalue()


def _cell(col: str, value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return format_decimal(value)
    if isinstance(value, float):
        return "" if math.isnan(value) else format_decimal(value)
    return str(value)


def default_empirical_tmax(n0: int, limit: int = 1_000_000) -> int:
    limit = min(limit, vertex_budget())
    t = 0
    while closed_form.vertex_count(n0, t + 1) <= limit:
        t += 1
    return t


def scaling_sweep(
    operator: Operator,
    seed: SeedSpec,
    t_min: int,
    t_max: int,
    empirical_tmax: int | None = None,
    mc_tmax: int | None = None,
    pairs: int = 100_000,
    walks: int = 1,
    rng_seed: int = 0,
    workers: int = 1,
    slope_window: tuple[int, int] | None = None,
) -> ScalingResult:
    """Closed-form rows for ``t_min..t_max`` plus measured columns where buildable.

    Graph metrics are measured for ``t <= empirical_tmax``; Monte Carlo mean
    hitting times only for ``t <= mc_tmax`` (``None`` disables them).
    """
    if t_min < 0 or t_max < t_min:
        raise ValueError(f"bad t range {t_min}..{t_max}")
    seed_tree = resolve_seed(seed)
    n0, d0, w0 = seed_parameters(seed_tree)
    if empirical_tmax is None:
        empirical_tmax = default_empirical_tmax(n0)
    series = closed_form.exact_series(n0, d0, w0, t_max, operator.value)
    rows = {t: series.row(t) for t in range(t_min, t_max + 1)}
    result = ScalingResult(operator, [], slope_window or (t_min, t_max), math.nan, math.nan)

    build_to = min(t_max, empirical_tmax)
    if build_to >= t_min:
        model = GrowthModel(operator, build_to, seed)
        for t, tree in iter_growth(model, seed_tree=seed_tree):
            if t < t_min:
                continue
            row = rows[t]
            diameter, _ = diameter_double_bfs(tree)
            wiener = wiener_linear(tree)
            row["empirical_diameter"] = diameter
            row["empirical_wiener"] = wiener
            row["empirical_mean_hitting"] = Fraction(2 * wiener, tree.n)
            if diameter != row["diameter"]:
                result.mismatches.append(f"t={t}: diameter {diameter} != {row['diameter']}")
            if row["wiener"] is not None and wiener != row["wiener"]:
                result.mismatches.append(f"t={t}: wiener {wiener} != {row['wiener']}")
            if mc_tmax is not None and t <= mc_tmax:
                est: WalkEstimate = estimate_mean_hitting(tree, pairs, walks, rng_seed, workers)
                row["mc_mean_hitting"] = est.mean
                row["mc_std_error"] = est.std_error
                row["mc_samples"] = est.samples
                result.truncated += est.truncated_count

    ordered = [rows[t] for t in range(t_min, t_max + 1)]
    for row in ordered:
        row["best_mean_hitting"] = row["mean_hitting"] if row["mean_hitting"] is not None else row.get("empirical_mean_hitting")
        if row["best_mean_hitting"] is not None and row["diameter"]:
            row["hitting_over_n_diameter"] = float(row["best_mean_hitting"] / (row["n"] * row["diameter"]))
    for prev, row in zip(ordered, ordered[1:]):
        dlogn = math.log(row["n"]) - math.log(prev["n"])
        if prev["best_mean_hitting"] and row["best_mean_hitting"]:
            row["dlog_hitting_dlog_n"] = (math.log(row["best_mean_hitting"]) - math.log(prev["best_mean_hitting"])) / dlogn
        row["dlog_diameter_dlog_n"] = (math.log(row["diameter"]) - math.log(prev["diameter"])) / dlogn

    lo, hi = result.slope_window
    window = [r for r in ordered if lo <= r["t"] <= hi]
    with_h = [r for r in window if r["best_mean_hitting"]]
    result.slope_hitting = ols_slope(
        [math.log(r["n"]) for r in with_h], [math.log(r["best_mean_hitting"]) for r in with_h]
    )
    result.slope_diameter = ols_slope([math.log(r["n"]) for r in window], [math.log(r["diameter"]) for r in window])
    result.rows = ordered
    return result
