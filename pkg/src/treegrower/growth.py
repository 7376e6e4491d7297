"""Growth operators and their iteration from a seed.

Both operators create ``2 k_v`` new vertices around every vertex ``v`` of the
input tree, so ``n -> 5n - 4``.  New vertices are numbered deterministically:
each arc ``(p, q)`` of the input (taken in CSR order, i.e. by ``p`` then ``q``)
owns one A-vertex ``n + i`` and one B-leaf ``n + 2m + i`` where ``i`` is the
arc's index and ``m = n - 1``.  Hence A-vertices come first, both cohorts are
ordered by the parent vertex they derive from.

``phi``       subdivides edge ``{p, q}`` into ``p - a_pq - a_qp - q`` and hangs
              the B-leaves on their parents.  Degrees double.
``phi_star``  keeps every edge and hangs both A- and B-vertices on their
              parents as leaves.  Degrees triple.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field

import numpy as np

from .exceptions import CapacityExceeded
from .tree import SeedSpec, Tree, VertexClass, _from_trusted, resolve_seed

__all__ = [
    "Operator",
    "GrowthModel",
    "DEFAULT_VERTEX_BUDGET",
    "vertex_budget",
    "grow_step_phi",
    "grow_step_phi_star",
    "grow",
    "iter_growth",
]

DEFAULT_VERTEX_BUDGET = 50_000_000
BUDGET_ENV = "TREEGROWER_VERTEX_BUDGET"


class Operator(str, enum.Enum):
    PHI = "phi"
    PHI_STAR = "phi-star"

    @classmethod
    def parse(cls, text: str) -> Operator:
        key = text.strip().lower().replace("_", "-")
        for op in cls:
            if op.value == key:
                return op
        raise ValueError(f"unknown model {text!r}; expected 'phi' or 'phi-star'")


def vertex_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_VERTEX_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{BUDGET_ENV} must be positive")
    return value


@dataclass(frozen=True)
class GrowthModel:
    operator: Operator = Operator.PHI
    steps: int = 0
    seed: SeedSpec = field(default_factory=SeedSpec)

    def __post_init__(self):
        if not isinstance(self.operator, Operator):
            object.__setattr__(self, "operator", Operator.parse(str(self.operator)))
        if self.steps < 0:
            raise ValueError(f"steps must be nonnegative, got {self.steps}")


def _check_capacity(n_out: int, budget: int | None) -> None:
    limit = vertex_budget() if budget is None else budget
    if n_out > limit:
        raise CapacityExceeded(f"growth would create {n_out} vertices, budget is {limit}")


def _step(tree: Tree, step: int, subdivide: bool, budget: int | None) -> Tree:
    if step < 1:
        raise ValueError(f"step must be positive, got {step}")
    n = tree.n
    m = n - 1
    n_out = 5 * n - 4
    _check_capacity(n_out, budget)

    src = tree.sources
    dst = tree.indices
    arcs = src.shape[0]  # 2m
    a_ids = n + np.arange(arcs, dtype=np.int64)
    b_ids = a_ids + arcs

    if subdivide:
        # index of the reverse arc (q, p) for every arc (p, q)
        keys = src * n + dst
        rev = np.searchsorted(keys, dst * n + src)
        forward = src < dst
        us = [src, a_ids[forward], src]
        vs = [a_ids, a_ids[rev[forward]], b_ids]
    else:
        us = [tree.edges[:, 0], src, src]
        vs = [tree.edges[:, 1], a_ids, b_ids]

    birth = np.empty(n_out, dtype=np.int32)
    birth[:n] = tree.birth
    birth[n:] = step
    vclass = np.empty(n_out, dtype=np.int8)
    vclass[:n] = tree.vclass
    vclass[n : n + 2 * m] = VertexClass.A
    vclass[n + 2 * m :] = VertexClass.B
    return _from_trusted(np.concatenate(us), np.concatenate(vs), birth, vclass)


def grow_step_phi(tree: Tree, step: int, budget: int | None = None) -> Tree:
    """Subdivide every edge twice and give each vertex ``deg`` new leaves."""
    return _step(tree, step, subdivide=True, budget=budget)


def grow_step_phi_star(tree: Tree, step: int, budget: int | None = None) -> Tree:
    """Give each vertex ``2 deg`` new leaves; no edge is subdivided."""
    return _step(tree, step, subdivide=False, budget=budget)


_STEP = {Operator.PHI: grow_step_phi, Operator.PHI_STAR: grow_step_phi_star}


def iter_growth(model: GrowthModel, budget: int | None = None, seed_tree: Tree | None = None):
    """Yield ``(t, tree)`` for ``t = 0..model.steps``."""
    tree = resolve_seed(model.seed) if seed_tree is None else seed_tree
    # fail before doing any work if the final size is out of budget
    _check_capacity(5**model.steps * (tree.n - 1) + 1, budget)
    step_fn = _STEP[model.operator]
    yield 0, tree
    for t in range(1, model.steps + 1):
        tree = step_fn(tree, t, budget=budget)
        yield t, tree


def grow(model: GrowthModel, budget: int | None = None) -> Tree:
    tree = None
    for _, tree in iter_growth(model, budget):
        pass
    return tree
