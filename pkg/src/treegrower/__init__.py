"""Deterministic scale-free growth trees with exact structural analytics.

Two growth operators are provided: ``phi`` subdivides every edge with two new
vertices and hangs ``deg(v)`` leaves on every vertex; ``phi_star`` hangs all
``2 deg(v)`` new vertices on ``v`` as leaves.  The package evaluates vertex
counts, diameters, Wiener indices, degree censuses and mean hitting times in
closed form, measures the same quantities on generated trees, and estimates
hitting times by Monte Carlo random walks.
"""

__version__ = "0.1.0"

from .closed_form import (
    ExactSeries,
    ExponentSet,
    degree_census_phi,
    degree_census_phi_star,
    diameter_phi,
    diameter_phi_star,
    exact_series,
    mean_hitting_closed,
    predicted_exponents,
    vertex_count,
    wiener_recurrence,
)
from .growth import GrowthModel, Operator, grow, grow_step_phi, grow_step_phi_star
from .metrics import (
    MetricsReport,
    analyze,
    bfs_distances,
    cumulative_degree,
    degree_histogram,
    diameter_double_bfs,
    exact_hitting_time,
    fit_powerlaw_exponent,
    mean_hitting_exact,
    wiener_brute,
    wiener_linear,
)
from .tree import SeedSpec, Tree, VertexClass, load_tree, parse, resolve_seed, serialize, validate_tree
from .walks import WalkEstimate, estimate_hitting, estimate_mean_hitting, sample_hitting
