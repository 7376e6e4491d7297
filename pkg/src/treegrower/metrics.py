"""Structural measurements taken directly on a :class:`~treegrower.tree.Tree`.

These are the empirical counterparts of :mod:`treegrower.closed_form`.  The
fast paths are linear in ``n`` and use iterative traversals only, so path-like
trees with millions of vertices are fine.  The ``*_brute`` functions are
quadratic oracles guarded by size limits.
"""

from __future__ import annotations

import json
import weakref
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse.csgraph import breadth_first_order

from . import closed_form
from .exceptions import InsufficientPoints, NonPositiveValue, TooLarge
from .growth import GrowthModel, Operator
from .tree import Tree, resolve_seed

__all__ = [
    "bfs_distances",
    "diameter_double_bfs",
    "subtree_sizes",
    "wiener_linear",
    "wiener_brute",
    "degree_histogram",
    "cumulative_degree",
    "default_fit_window",
    "fit_powerlaw_exponent",
    "exact_hitting_time",
    "hitting_times_to",
    "hitting_time_matrix",
    "mean_hitting_exact",
    "mean_hitting_brute",
    "MetricsReport",
    "analyze",
]

BRUTE_LIMIT = 20_000
HITTING_CHECK_LIMIT = 500


def _check_vertex(tree: Tree, v: int) -> None:
    if not 0 <= v < tree.n:
        raise IndexError(f"vertex {v} out of range for tree with {tree.n} vertices")


def _bfs(tree: Tree, source: int) -> tuple[list[int], list[int]]:
    """BFS order and parent list (parent of the source is -1)."""
    order, pred = breadth_first_order(tree.adjacency_matrix, source, directed=False)
    parent = pred.tolist()
    parent[source] = -1
    return order.tolist(), parent


def bfs_distances(tree: Tree, source: int) -> np.ndarray:
    _check_vertex(tree, source)
    order, parent = _bfs(tree, source)
    dist = [0] * tree.n
    for x in order[1:]:
        dist[x] = dist[parent[x]] + 1
    return np.asarray(dist, dtype=np.int64)


def diameter_double_bfs(tree: Tree) -> tuple[int, tuple[int, int]]:
    """Exact tree diameter by two BFS sweeps, with a pair of endpoints realising it."""
    x = int(np.argmax(bfs_distances(tree, 0)))
    dist = bfs_distances(tree, x)
    y = int(np.argmax(dist))
    return int(dist[y]), (min(x, y), max(x, y))


def subtree_sizes(tree: Tree, root: int = 0) -> tuple[list[int], list[int]]:
    """Sizes of the subtrees hanging below each vertex when rooted at ``root``.

    Returns ``(size, parent)``.
    """
    order, parent = _bfs(tree, root)
    size = [1] * tree.n
    for x in reversed(order[1:]):
        size[parent[x]] += size[x]
    return size, parent


def wiener_linear(tree: Tree) -> int:
    """Wiener index in O(n): each edge is crossed by ``s (n - s)`` shortest paths."""
    n = tree.n
    size, _ = subtree_sizes(tree, 0)
    s = np.asarray(size[1:], dtype=np.int64)
    crossings = s * (n - s)
    # keep int64 partial sums below 2**62, then add exactly
    per_term = max(1, n * n // 4)
    chunk = max(1, (1 << 62) // per_term)
    return sum(int(crossings[i : i + chunk].sum()) for i in range(0, crossings.shape[0], chunk))


def wiener_brute(tree: Tree, limit: int = BRUTE_LIMIT) -> int:
    """Sum of all pairwise distances by a plain BFS from every vertex."""
    n = tree.n
    if n > limit:
        raise TooLarge(f"all-pairs Wiener oracle limited to n <= {limit}, got {n}")
    adj = tree.adjacency()
    total = 0
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        total += sum(dist)
    return total // 2


def degree_histogram(tree: Tree) -> dict[int, int]:
    values, counts = np.unique(tree.degrees, return_counts=True)
    return dict(zip(values.tolist(), counts.tolist()))


def cumulative_degree(tree_or_hist: Tree | dict[int, int]) -> list[tuple[int, Fraction]]:
    """``(k, P_cum(k))`` at every observed degree, ``P_cum(k)`` = share of vertices with degree >= k."""
    hist = degree_histogram(tree_or_hist) if isinstance(tree_or_hist, Tree) else tree_or_hist
    total = sum(hist.values())
    points = []
    tail = total
    for k in sorted(hist):
        points.append((k, Fraction(tail, total)))
        tail -= hist[k]
    return points


def default_fit_window(points: list[tuple[int, Fraction]]) -> tuple[int, int]:
    """Drop the degree-1 class and the single largest degree class."""
    ks = [k for k, _ in points if k > 1]
    if len(ks) < 2:
        raise InsufficientPoints("too few degree classes for a default fit window")
    return ks[0], ks[-2]


def fit_powerlaw_exponent(points, k_min: int | None = None, k_max: int | None = None) -> float:
    """Least-squares slope magnitude of ``log P_cum`` against ``log k`` over ``[k_min, k_max]``."""
    points = [(k, p) for k, p in points]
    if k_min is None or k_max is None:
        lo, hi = default_fit_window(points)
        k_min = lo if k_min is None else k_min
        k_max = hi if k_max is None else k_max
    window = [(k, p) for k, p in points if k_min <= k <= k_max]
    if len(window) < 3:
        raise InsufficientPoints(f"need >= 3 points in [{k_min}, {k_max}], got {len(window)}")
    if any(k <= 0 or p <= 0 for k, p in window):
        raise NonPositiveValue("log-log fit needs positive degrees and probabilities")
    x = np.log([float(k) for k, _ in window])
    y = np.log([float(p) for _, p in window])
    slope = np.polyfit(x, y, 1)[0]
    return float(-slope)


# ---------------------------------------------------------------------------
# Hitting times
#
# On a tree the walk from x to a neighbour y must first exhaust the component
# of x behind the edge; with m_x edges there, the expected crossing time is
# 2 m_x + 1.  Hitting times add up along the unique path.


@dataclass
class _RootedIndex:
    parent: list[int]
    depth: list[int]
    size: list[int]


_INDEX: "weakref.WeakKeyDictionary[Tree, _RootedIndex]" = weakref.WeakKeyDictionary()


def _rooted_index(tree: Tree) -> _RootedIndex:
    idx = _INDEX.get(tree)
    if idx is None:
        order, parent = _bfs(tree, 0)
        depth = [0] * tree.n
        for x in order[1:]:
            depth[x] = depth[parent[x]] + 1
        size = [1] * tree.n
        for x in reversed(order[1:]):
            size[parent[x]] += size[x]
        idx = _INDEX[tree] = _RootedIndex(parent, depth, size)
    return idx


def exact_hitting_time(tree: Tree, u: int, v: int) -> int:
    """Expected steps for a simple random walk from ``u`` to first reach ``v``.

    O(length of the u-v path) after a one-off O(n) indexing pass per tree.
    """
    _check_vertex(tree, u)
    _check_vertex(tree, v)
    idx = _rooted_index(tree)
    parent, depth, size = idx.parent, idx.depth, idx.size
    n = tree.n
    total = 0
    # climbing from u towards the root leaves the subtree of x behind
    while depth[u] > depth[v]:
        total += 2 * size[u] - 1
        u = parent[u]
    # descending into y leaves everything outside the subtree of y behind
    while depth[v] > depth[u]:
        total += 2 * (n - size[v]) - 1
        v = parent[v]
    while u != v:
        total += 2 * size[u] - 1 + 2 * (n - size[v]) - 1
        u, v = parent[u], parent[v]
    return total


def hitting_times_to(tree: Tree, target: int) -> np.ndarray:
    """Exact hitting times from every vertex to ``target`` in O(n)."""
    _check_vertex(tree, target)
    order, parent = _bfs(tree, target)
    size = [1] * tree.n
    for x in reversed(order[1:]):
        size[parent[x]] += size[x]
    h = [0] * tree.n
    for x in order[1:]:
        h[x] = h[parent[x]] + 2 * size[x] - 1
    return np.asarray(h, dtype=np.int64)


def hitting_time_matrix(tree: Tree, limit: int = BRUTE_LIMIT) -> np.ndarray:
    """``H[u, v]`` = exact hitting time from ``u`` to ``v`` for all ordered pairs."""
    n = tree.n
    if n > limit:
        raise TooLarge(f"all-pairs hitting times limited to n <= {limit}, got {n}")
    return np.stack([hitting_times_to(tree, v) for v in range(n)], axis=1)


def mean_hitting_brute(tree: Tree, limit: int = HITTING_CHECK_LIMIT) -> Fraction:
    """Average of exact hitting times over all ordered pairs ``u != v``."""
    n = tree.n
    if n > limit:
        raise TooLarge(f"all-pairs hitting-time average limited to n <= {limit}, got {n}")
    total = sum(int(hitting_times_to(tree, v).sum()) for v in range(n))
    return Fraction(total, n * (n - 1))


def mean_hitting_exact(tree: Tree, verify: bool = False) -> Fraction:
    """``2 W / n``; with ``verify`` and ``n <= 500`` also checked against all pairs."""
    value = Fraction(2 * wiener_linear(tree), tree.n)
    if verify and tree.n <= HITTING_CHECK_LIMIT:
        brute = mean_hitting_brute(tree)
        if brute != value:
            raise ArithmeticError(f"2W/n = {value} but all-pairs average is {brute}")
    return value


# ---------------------------------------------------------------------------
# Report


def _jsonable(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return {"num": str(value.numerator), "den": str(value.denominator)}
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class MetricsReport:
    n: int
    edge_count: int
    diameter: int
    diameter_endpoints: tuple[int, int]
    wiener: int
    degree_histogram: dict[int, int]
    cumulative_points: list[tuple[int, Fraction]]
    mean_hitting: Fraction
    fitted_exponent: float | None = None
    fit_window: tuple[int, int] | None = None
    model: dict | None = None
    predicted: dict = field(default_factory=dict)
    closed_form_deltas: dict = field(default_factory=dict)

    @property
    def self_check_ok(self) -> bool:
        return all(d == 0 for d in self.closed_form_deltas.values())

    def to_dict(self) -> dict:
        return {
            "n": _jsonable(self.n),
            "edge_count": _jsonable(self.edge_count),
            "diameter": _jsonable(self.diameter),
            "diameter_endpoints": list(self.diameter_endpoints),
            "wiener": _jsonable(self.wiener),
            "degree_histogram": _jsonable(self.degree_histogram),
            "cumulative_points": [[k, _jsonable(p)] for k, p in self.cumulative_points],
            "mean_hitting": _jsonable(self.mean_hitting),
            "mean_hitting_decimal": float(self.mean_hitting),
            "fitted_exponent": self.fitted_exponent,
            "fit_window": list(self.fit_window) if self.fit_window else None,
            "model": self.model,
            "predicted": _jsonable(self.predicted),
            "closed_form_deltas": _jsonable(self.closed_form_deltas),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _census_distance(measured: dict[int, int], predicted: dict[int, int]) -> int:
    keys = set(measured) | set(predicted)
    return sum(abs(measured.get(k, 0) - predicted.get(k, 0)) for k in keys)


def analyze(
    tree: Tree,
    model: GrowthModel | None = None,
    fit: bool = True,
    k_min: int | None = None,
    k_max: int | None = None,
) -> MetricsReport:
    """Measure ``tree``; when ``model`` generated it, pair each metric with its prediction.

    Deltas are ``measured - predicted`` and must all be zero for a tree built
    by :func:`treegrower.growth.grow`; ``degree_census`` is the L1 distance
    between histograms.
    """
    diameter, ends = diameter_double_bfs(tree)
    wiener = wiener_linear(tree)
    hist = degree_histogram(tree)
    points = cumulative_degree(hist)
    report = MetricsReport(
        n=tree.n,
        edge_count=tree.edge_count,
        diameter=diameter,
        diameter_endpoints=ends,
        wiener=wiener,
        degree_histogram=hist,
        cumulative_points=points,
        mean_hitting=Fraction(2 * wiener, tree.n),
    )
    if fit:
        try:
            lo, hi = default_fit_window(points)
            lo = lo if k_min is None else k_min
            hi = hi if k_max is None else k_max
            report.fitted_exponent = fit_powerlaw_exponent(points, lo, hi)
            report.fit_window = (lo, hi)
        except (InsufficientPoints, NonPositiveValue):
            pass
    if model is not None:
        seed = resolve_seed(model.seed)
        n0, t = seed.n, model.steps
        d0, _ = diameter_double_bfs(seed)
        w0 = wiener_linear(seed)
        predicted = {"n": closed_form.vertex_count(n0, t)}
        if model.operator is Operator.PHI:
            predicted["diameter"] = closed_form.diameter_phi(d0, t)
            predicted["wiener"] = closed_form.wiener_recurrence(w0, n0, t)
            predicted["mean_hitting"] = closed_form.mean_hitting_closed(w0, n0, t)
            census = closed_form.degree_census_phi(seed, t)
        else:
            predicted["diameter"] = closed_form.diameter_phi_star(d0, t)
            census = closed_form.degree_census_phi_star(seed, t)
        measured = {"n": tree.n, "diameter": diameter, "wiener": wiener, "mean_hitting": report.mean_hitting}
        deltas = {k: measured[k] - v for k, v in predicted.items()}
        deltas["degree_census"] = _census_distance(hist, census)
        predicted["degree_census"] = census
        exps = closed_form.predicted_exponents()
        predicted["exponent"] = float(exps.gamma if model.operator is Operator.PHI else exps.gamma_star)
        report.model = {"operator": model.operator.value, "steps": t, "seed": str(model.seed)}
        report.predicted = predicted
        report.closed_form_deltas = deltas
    return report
