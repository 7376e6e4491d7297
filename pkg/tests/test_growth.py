import numpy as np
import pytest

import oracles
from treegrower import (
    GrowthModel,
    Operator,
    SeedSpec,
    VertexClass,
    grow,
    grow_step_phi,
    grow_step_phi_star,
    resolve_seed,
    serialize,
    validate_tree,
)
from treegrower.exceptions import CapacityExceeded
from treegrower.metrics import diameter_double_bfs

SEEDS = ["edge", "path:3", "star:5", "path:5"]
STEPS = {Operator.PHI: grow_step_phi, Operator.PHI_STAR: grow_step_phi_star}


def test_edge_phi_first_generation(edge):
    # leafB - u - a - b - v - leafB
    tree = grow_step_phi(edge, 1)
    assert tree.edge_list() == [(0, 2), (0, 4), (1, 3), (1, 5), (2, 3)]
    assert sorted(tree.degrees.tolist()) == [1, 1, 2, 2, 2, 2]
    assert diameter_double_bfs(tree)[0] == 5
    assert [c for _, c in tree.provenance()] == [VertexClass.SEED] * 2 + [VertexClass.A] * 2 + [VertexClass.B] * 2


def test_edge_phi_star_first_generation(edge):
    tree = grow_step_phi_star(edge, 1)
    assert tree.n == 6
    assert tree.degrees.tolist() == [3, 3, 1, 1, 1, 1]
    assert diameter_double_bfs(tree)[0] == 3


def test_subdivision_orientation(path3):
    # edge {0,1}: A-vertex of 0 touches 0, A-vertex of 1 touches 1
    tree = grow_step_phi(path3, 1)
    n = 3
    a_of = {}
    for i, (p, q) in enumerate([(0, 1), (1, 0), (1, 2), (2, 1)]):
        a_of[(p, q)] = n + i
    for (p, q), a in a_of.items():
        assert p in tree.neighbors(a).tolist()
        assert a_of[(q, p)] in tree.neighbors(a).tolist()


def test_path3_one_step(path3):
    assert grow_step_phi(path3, 1).n == 11


@pytest.mark.parametrize("op, factor", [(Operator.PHI, 2), (Operator.PHI_STAR, 3)])
def test_star5_hub_degree(star5, op, factor):
    tree = STEPS[op](star5, 1)
    assert tree.degree(0) == 4 * factor


@pytest.mark.parametrize("op", list(Operator))
@pytest.mark.parametrize("seed", SEEDS)
def test_step_invariants(op, seed):
    tree = resolve_seed(seed)
    for t in range(1, 5):
        nxt = STEPS[op](tree, t)
        # tree-ness: re-validate from scratch
        validate_tree(nxt.edges, nxt.birth, nxt.vclass)
        assert nxt.n == 5 * tree.n - 4
        factor = 2 if op is Operator.PHI else 3
        assert np.array_equal(nxt.degrees[: tree.n], factor * tree.degrees)
        born = nxt.birth == t
        assert np.array_equal(nxt.birth[: tree.n], tree.birth)
        assert int((born & (nxt.vclass == VertexClass.A)).sum()) == 2 * (tree.n - 1)
        assert int((born & (nxt.vclass == VertexClass.B)).sum()) == 2 * (tree.n - 1)
        assert born.sum() == nxt.n - tree.n
        tree = nxt


@pytest.mark.parametrize("op", list(Operator))
@pytest.mark.parametrize("seed", SEEDS)
def test_matches_naive_construction(op, seed):
    base = resolve_seed(seed)
    tree = grow(GrowthModel(op, 3, SeedSpec.parse(seed)))
    naive = oracles.grow_naive(base.edge_list(), 3, star=op is Operator.PHI_STAR)
    assert tree.n == len(naive)
    assert oracles.degree_hist(naive) == oracles.degree_hist(oracles.adjacency(tree.edge_list()))
    assert oracles.wiener(naive) == oracles.wiener(oracles.adjacency(tree.edge_list()))


def test_grow_zero_steps_returns_seed(edge):
    tree = grow(GrowthModel(Operator.PHI, 0))
    assert np.array_equal(tree.edges, edge.edges)


@pytest.mark.parametrize(
    "op, t, n, diameter",
    [(Operator.PHI, 2, 26, 17), (Operator.PHI_STAR, 3, 126, 7), (Operator.PHI_STAR, 2, 26, 5)],
)
def test_grow_sizes(op, t, n, diameter):
    tree = grow(GrowthModel(op, t))
    assert tree.n == n
    assert diameter_double_bfs(tree)[0] == diameter


@pytest.mark.parametrize("op", list(Operator))
def test_deterministic(op):
    a = grow(GrowthModel(op, 4, SeedSpec("star", m=4)))
    b = grow(GrowthModel(op, 4, SeedSpec("star", m=4)))
    assert serialize(a, "json") == serialize(b, "json")


def test_capacity_guard(monkeypatch, edge):
    with pytest.raises(CapacityExceeded):
        grow(GrowthModel(Operator.PHI, 3), budget=100)
    with pytest.raises(CapacityExceeded):
        grow_step_phi(edge, 1, budget=5)
    monkeypatch.setenv("TREEGROWER_VERTEX_BUDGET", "25")
    with pytest.raises(CapacityExceeded):
        grow(GrowthModel(Operator.PHI_STAR, 2))
    monkeypatch.setenv("TREEGROWER_VERTEX_BUDGET", "26")
    assert grow(GrowthModel(Operator.PHI_STAR, 2)).n == 26


def test_model_validation():
    with pytest.raises(ValueError):
        GrowthModel(Operator.PHI, -1)
    assert GrowthModel("phi-star", 1).operator is Operator.PHI_STAR
    with pytest.raises(ValueError):
        grow_step_phi(validate_tree([(0, 1)]), 0)
