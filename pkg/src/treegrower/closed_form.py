"""Exact closed-form predictions for trees grown by ``phi`` and ``phi_star``.

Integers are Python ints and rationals are :class:`fractions.Fraction`, so
nothing overflows or rounds: the Wiener index grows like ``75**t``.
"""

from __future__ import annotations

import decimal
from collections import Counter
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from .tree import Tree

__all__ = [
    "ExactSeries",
    "ExponentSet",
    "vertex_count",
    "diameter_phi",
    "diameter_phi_star",
    "wiener_recurrence",
    "mean_hitting_closed",
    "degree_census_phi",
    "degree_census_phi_star",
    "predicted_exponents",
    "exact_series",
]


def _check(n0: int, t: int) -> None:
    if n0 < 2:
        raise ValueError(f"seed must have at least 2 vertices, got {n0}")
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")


def vertex_count(n0: int, t: int) -> int:
    """Vertices after ``t`` steps of either operator from an ``n0``-vertex seed."""
    _check(n0, t)
    return 5**t * (n0 - 1) + 1


def diameter_phi(d0: int, t: int) -> int:
    if d0 < 1 or t < 0:
        raise ValueError("need d0 >= 1 and t >= 0")
    return 3**t * (d0 + 1) - 1


def diameter_phi_star(d0: int, t: int) -> int:
    if d0 < 1 or t < 0:
        raise ValueError("need d0 >= 1 and t >= 0")
    return d0 + 2 * t


def wiener_recurrence(w0: int, n0: int, t: int) -> int:
    """Iterate ``W <- 75 W - 20 n^2 + 20 n`` (``n`` the previous size) ``t`` times."""
    _check(n0, t)
    if w0 < 0:
        raise ValueError("Wiener index must be nonnegative")
    w, n = w0, n0
    for _ in range(t):
        w = 75 * w - 20 * n * n + 20 * n
        n = 5 * n - 4
    return w


def mean_hitting_closed(w0: int, n0: int, t: int) -> Fraction:
    """Mean hitting time of the ``phi`` tree at step ``t`` in closed form.

    Evaluated from the explicit solution rather than by iterating, then held to
    ``2 W_t / n_t`` from :func:`wiener_recurrence`.
    """
    _check(n0, t)
    m = n0 - 1
    correction = 4 * 5**t * (Fraction(15**t - 5**t, 10) * m * m + Fraction(15**t - 1, 14) * m)
    value = Fraction(2, 5**t * m + 1) * (75**t * w0 - correction)
    expected = Fraction(2 * wiener_recurrence(w0, n0, t), vertex_count(n0, t))
    if value != expected:
        raise ArithmeticError(f"closed form {value} disagrees with 2W/n = {expected}")
    return value


def _seed_degrees(seed: Tree) -> Counter:
    return Counter(seed.degrees.tolist())


def _sizes(n0: int, t: int) -> list[int]:
    return [vertex_count(n0, j) for j in range(t + 1)]


def degree_census_phi(seed: Tree, t: int) -> dict[int, int]:
    """Predicted degree -> count map for ``phi`` grown ``t`` steps from ``seed``.

    A seed vertex of degree ``k`` ends with ``k 2**t``; the A-cohort born at
    step ``j`` has ``2 (n_{j-1} - 1)`` vertices of degree ``2**(t-j+1)`` and the
    B-cohort as many of degree ``2**(t-j)``.
    """
    sizes = _sizes(seed.n, t)
    census: Counter = Counter()
    for k, count in _seed_degrees(seed).items():
        census[k * 2**t] += count
    for j in range(1, t + 1):
        cohort = 2 * (sizes[j - 1] - 1)
        census[2 ** (t - j + 1)] += cohort
        census[2 ** (t - j)] += cohort
    return dict(sorted(census.items()))


def degree_census_phi_star(seed: Tree, t: int) -> dict[int, int]:
    """As :func:`degree_census_phi` for ``phi_star``: cohort ``j`` is ``4 (n_{j-1} - 1)``
    vertices of degree ``3**(t-j)``, seed degrees scale by ``3**t``."""
    sizes = _sizes(seed.n, t)
    census: Counter = Counter()
    for k, count in _seed_degrees(seed).items():
        census[k * 3**t] += count
    for j in range(1, t + 1):
        census[3 ** (t - j)] += 4 * (sizes[j - 1] - 1)
    return dict(sorted(census.items()))


@dataclass(frozen=True)
class ExponentSet:
    gamma: Decimal
    gamma_star: Decimal
    chi: Decimal
    diameter_exponent: Decimal
    # phi_star mean hitting time grows like n ln n: exponent 1 up to a log factor
    chi_star: int = 1
    chi_star_log_factor: bool = True

    def as_floats(self) -> dict[str, float]:
        return {
            "gamma": float(self.gamma),
            "gamma_star": float(self.gamma_star),
            "chi": float(self.chi),
            "diameter_exponent": float(self.diameter_exponent),
            "chi_star": float(self.chi_star),
        }


def predicted_exponents(precision: int = 40) -> ExponentSet:
    """Cumulative-degree, hitting-time and diameter exponents to ``precision`` digits."""
    with decimal.localcontext() as ctx:
        ctx.prec = precision
        ln2, ln3, ln5 = Decimal(2).ln(), Decimal(3).ln(), Decimal(5).ln()
        diameter_exponent = ln3 / ln5
        return ExponentSet(
            gamma=ln5 / ln2,
            gamma_star=ln5 / ln3,
            chi=1 + diameter_exponent,
            diameter_exponent=diameter_exponent,
        )


@dataclass(frozen=True)
class ExactSeries:
    """Closed-form values for ``t = 0..len-1``.

    ``wiener`` and ``mean_hitting`` are ``None`` for ``phi_star``, which has no
    exact formula for them.
    """

    operator: str
    n0: int
    d0: int
    w0: int
    n: list[int]
    diameter: list[int]
    wiener: list[int] | None
    mean_hitting: list[Fraction] | None

    def row(self, t: int) -> dict:
        return {
            "t": t,
            "n": self.n[t],
            "diameter": self.diameter[t],
            "wiener": None if self.wiener is None else self.wiener[t],
            "mean_hitting": None if self.mean_hitting is None else self.mean_hitting[t],
        }

    def rows(self) -> list[dict]:
        return [self.row(t) for t in range(len(self.n))]


def exact_series(n0: int, d0: int, w0: int, steps: int, operator: str = "phi") -> ExactSeries:
    operator = str(getattr(operator, "value", operator))
    ts = range(steps + 1)
    n = [vertex_count(n0, t) for t in ts]
    if operator == "phi":
        diameter = [diameter_phi(d0, t) for t in ts]
        wiener = [wiener_recurrence(w0, n0, t) for t in ts]
        hitting = [mean_hitting_closed(w0, n0, t) for t in ts]
    elif operator == "phi-star":
        diameter = [diameter_phi_star(d0, t) for t in ts]
        wiener = hitting = None
    else:
        raise ValueError(f"unknown operator {operator!r}")
    return ExactSeries(operator, n0, d0, w0, n, diameter, wiener, hitting)
