"""Immutable tree type, validation, seed resolution and (de)serialization.

A :class:`Tree` stores its edges canonically (``u < v``, sorted) together with
per-vertex provenance: the step at which each vertex was born and the class it
was born into (``SEED``, ``A`` for subdivision vertices, ``B`` for leaves).
Adjacency is derived lazily in CSR form with neighbor lists sorted ascending.
"""

from __future__ import annotations

import enum
import json
import os
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .exceptions import (
    CycleDetected,
    DisconnectedInput,
    DuplicateEdge,
    EmptyInput,
    InvalidVertexId,
    ParseError,
    SelfLoop,
)

__all__ = [
    "VertexClass",
    "Tree",
    "SeedSpec",
    "validate_tree",
    "resolve_seed",
    "serialize",
    "parse",
    "load_tree",
    "FORMATS",
]

FORMATS = ("edgelist", "dot", "json")


class VertexClass(enum.IntEnum):
    SEED = 0
    A = 1
    B = 2


@dataclass(frozen=True, eq=False)
class Tree:
    """A tree on vertices ``0..n-1``.

    ``edges`` is an ``(n - 1, 2)`` int64 array with ``u < v`` on every row and
    rows in lexicographic order.  ``birth`` and ``vclass`` hold provenance.
    All arrays are read-only.  Use :func:`validate_tree` to build one from
    untrusted input.
    """

    edges: np.ndarray
    birth: np.ndarray
    vclass: np.ndarray

    def __post_init__(self):
        for arr in (self.edges, self.birth, self.vclass):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return int(self.birth.shape[0])

    vertex_count = n

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    @cached_property
    def _csr(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.n
        u, v = self.edges[:, 0], self.edges[:, 1]
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        order = np.lexsort((dst, src))
        indices = dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        indices.setflags(write=False)
        indptr.setflags(write=False)
        return indptr, indices

    @property
    def indptr(self) -> np.ndarray:
        return self._csr[0]

    @property
    def indices(self) -> np.ndarray:
        return self._csr[1]

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.diff(self.indptr)
        deg.setflags(write=False)
        return deg

    @cached_property
    def sources(self) -> np.ndarray:
        """Source vertex of every arc, aligned with :attr:`indices`."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        src.setflags(write=False)
        return src

    @cached_property
    def adjacency_matrix(self) -> csr_matrix:
        data = np.ones(self.indices.shape[0], dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def neighbors(self, v: int) -> np.ndarray:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for tree with {self.n} vertices")
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def adjacency(self) -> list[list[int]]:
        """Neighbor lists as plain Python lists (fine for small trees)."""
        ptr = self.indptr.tolist()
        idx = self.indices.tolist()
        return [idx[ptr[v] : ptr[v + 1]] for v in range(self.n)]

    def edge_list(self) -> list[tuple[int, int]]:
        return [tuple(e) for e in self.edges.tolist()]

    def provenance(self) -> list[tuple[int, VertexClass]]:
        return [(b, VertexClass(c)) for b, c in zip(self.birth.tolist(), self.vclass.tolist())]

    def __repr__(self) -> str:
        return f"Tree(n={self.n}, edges={self.edge_count})"


def _canonical_edges(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    order = np.lexsort((hi, lo))
    return np.ascontiguousarray(np.stack([lo[order], hi[order]], axis=1), dtype=np.int64)


def _from_trusted(u, v, birth, vclass) -> Tree:
    """Assemble a Tree from arrays already known to form a tree."""
    return Tree(
        _canonical_edges(np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64)),
        np.asarray(birth, dtype=np.int32),
        np.asarray(vclass, dtype=np.int8),
    )


def validate_tree(
    edges: Iterable[Sequence[int]] | np.ndarray,
    birth: Sequence[int] | None = None,
    vclass: Sequence[int] | None = None,
) -> Tree:
    """Check that ``edges`` form a tree and return it as a :class:`Tree`.

    Vertex ids may be any nonnegative integers; they are compacted to
    ``0..n-1`` preserving their order.  Without explicit provenance every
    vertex is a ``SEED`` vertex born at step 0.
    """
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges)
    if arr.size == 0:
        raise EmptyInput("no edges given")
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ParseError("edges must be pairs of vertex ids")
    if not np.issubdtype(arr.dtype, np.integer):
        raise InvalidVertexId("vertex ids must be integers")
    arr = arr.astype(np.int64)
    if (arr < 0).any():
        raise InvalidVertexId("vertex ids must be nonnegative")

    loops = arr[:, 0] == arr[:, 1]
    if loops.any():
        raise SelfLoop(f"self-loop at vertex {int(arr[loops][0, 0])}")

    ids, flat = np.unique(arr, return_inverse=True)
    flat = flat.reshape(arr.shape)
    n = ids.shape[0]
    canon = _canonical_edges(flat[:, 0], flat[:, 1])
    m = canon.shape[0]
    if m > 1:
        dup = (np.diff(canon, axis=0) == 0).all(axis=1)
        if dup.any():
            a, b = canon[1:][dup][0]
            raise DuplicateEdge(f"edge ({int(ids[a])}, {int(ids[b])}) listed more than once")

    graph = csr_matrix((np.ones(m, dtype=np.int8), (canon[:, 0], canon[:, 1])), shape=(n, n))
    components, _ = connected_components(graph, directed=False)
    if m > n - components:
        raise CycleDetected(f"{m} edges on {n} vertices in {components} component(s) contain a cycle")
    if components > 1:
        raise DisconnectedInput(f"input has {components} connected components")

    if birth is None:
        birth_arr = np.zeros(n, dtype=np.int32)
    else:
        birth_arr = np.asarray(birth, dtype=np.int32)
    if vclass is None:
        vclass_arr = np.zeros(n, dtype=np.int8)
    else:
        vclass_arr = np.asarray(vclass, dtype=np.int8)
    if birth_arr.shape != (n,) or vclass_arr.shape != (n,):
        raise ParseError(f"provenance must have one entry per vertex ({n})")
    if not np.isin(vclass_arr, [c.value for c in VertexClass]).all():
        raise ParseError("unknown vertex class")
    seed = vclass_arr == VertexClass.SEED
    if (birth_arr[seed] != 0).any() or (birth_arr[~seed] < 1).any():
        raise ParseError("SEED vertices must have birth 0 and grown vertices birth >= 1")
    return Tree(canon, birth_arr, vclass_arr)


# ---------------------------------------------------------------------------
# Seeds


@dataclass(frozen=True)
class SeedSpec:
    """A seed tree: ``edge``, ``path`` / ``star`` with ``m`` vertices, or a file."""

    kind: str = "edge"
    m: int | None = None
    path: str | None = None

    def __post_init__(self):
        if self.kind not in ("edge", "path", "star", "file"):
            raise ParseError(f"unknown seed kind {self.kind!r}")
        if self.kind in ("path", "star") and (self.m is None or self.m < 2):
            raise ParseError(f"{self.kind} seed needs m >= 2, got {self.m}")
        if self.kind == "file" and not self.path:
            raise ParseError("file seed needs a path")

    @classmethod
    def parse(cls, text: str) -> SeedSpec:
        """Parse ``edge``, ``path:M``, ``star:M`` or ``file:PATH``."""
        kind, _, arg = text.strip().partition(":")
        kind = kind.lower()
        if kind == "edge" and not arg:
            return cls("edge")
        if kind in ("path", "star"):
            try:
                return cls(kind, m=int(arg))
            except ValueError:
                raise ParseError(f"bad seed size in {text!r}") from None
        if kind == "file" and arg:
            return cls("file", path=arg)
        raise ParseError(f"cannot parse seed {text!r}")

    def __str__(self) -> str:
        if self.kind == "edge":
            return "edge"
        if self.kind == "file":
            return f"file:{self.path}"
        return f"{self.kind}:{self.m}"


def resolve_seed(spec: SeedSpec | str) -> Tree:
    if isinstance(spec, str):
        spec = SeedSpec.parse(spec)
    if spec.kind == "edge":
        return validate_tree([(0, 1)])
    if spec.kind == "path":
        return validate_tree([(i, i + 1) for i in range(spec.m - 1)])
    if spec.kind == "star":
        return validate_tree([(0, i) for i in range(1, spec.m)])
    tree = load_tree(spec.path)
    # a seed restarts the clock: provenance from the file is dropped
    return Tree(tree.edges.copy(), np.zeros(tree.n, dtype=np.int32), np.zeros(tree.n, dtype=np.int8))


# ---------------------------------------------------------------------------
# Serialization

_CLASS_NAMES = {c.value: c.name for c in VertexClass}


def serialize(tree: Tree, fmt: str = "edgelist") -> bytes:
    fmt = fmt.lower()
    if fmt == "edgelist":
        return "".join(f"{u} {v}\n" for u, v in tree.edges.tolist()).encode()
    if fmt == "json":
        doc = {
            "n": tree.n,
            "edges": tree.edges.tolist(),
            "provenance": [
                {"birth": b, "class": _CLASS_NAMES[c]}
                for b, c in zip(tree.birth.tolist(), tree.vclass.tolist())
            ],
        }
        return (json.dumps(doc, separators=(",", ":")) + "\n").encode()
    if fmt == "dot":
        lines = ["graph T {"]
        for v, (b, c) in enumerate(zip(tree.birth.tolist(), tree.vclass.tolist())):
            lines.append(f'  {v} [birth={b}, class="{_CLASS_NAMES[c]}"];')
        lines.extend(f"  {u} -- {v};" for u, v in tree.edges.tolist())
        lines.append("}")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


_DOT_NODE = re.compile(r'^\s*(\d+)\s*\[\s*birth\s*=\s*(\d+)\s*,\s*class\s*=\s*"(\w+)"\s*\]\s*;?\s*$')
_DOT_EDGE = re.compile(r"^\s*(\d+)\s*--\s*(\d+)\s*;?\s*$")


def _class_code(name: str) -> int:
    try:
        return VertexClass[name].value
    except KeyError:
        raise ParseError(f"unknown vertex class {name!r}") from None


def _parse_edgelist(text: str) -> Tree:
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer vertex id in {line!r}") from None
    return validate_tree(edges)


def _parse_json(text: str) -> Tree:
    try:
        doc = json.loads(text)
        edges = [(int(u), int(v)) for u, v in doc["edges"]]
        prov = doc.get("provenance")
        n = int(doc["n"])
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"malformed tree JSON: {exc}") from None
    if prov is None:
        tree = validate_tree(edges)
    else:
        tree = validate_tree(
            edges,
            birth=[int(p["birth"]) for p in prov],
            vclass=[_class_code(p["class"]) for p in prov],
        )
    if tree.n != n:
        raise ParseError(f"JSON declares n={n} but edges span {tree.n} vertices")
    return tree


def _parse_dot(text: str) -> Tree:
    body = text.strip()
    if not body.startswith("graph") or not body.endswith("}"):
        raise ParseError("expected an undirected 'graph { ... }' block")
    inner = body[body.index("{") + 1 : -1]
    edges, birth, vclass = [], {}, {}
    for line in inner.splitlines():
        if not line.strip():
            continue
        if m := _DOT_EDGE.match(line):
            edges.append((int(m[1]), int(m[2])))
        elif m := _DOT_NODE.match(line):
            birth[int(m[1])] = int(m[2])
            vclass[int(m[1])] = _class_code(m[3])
        else:
            raise ParseError(f"unrecognised DOT line {line.strip()!r}")
    if not birth:
        return validate_tree(edges)
    ids = sorted(birth)
    return validate_tree(edges, birth=[birth[i] for i in ids], vclass=[vclass[i] for i in ids])


def parse(data: bytes | str, fmt: str = "edgelist") -> Tree:
    text = data.decode() if isinstance(data, bytes) else data
    fmt = fmt.lower()
    if fmt == "edgelist":
        return _parse_edgelist(text)
    if fmt == "json":
        return _parse_json(text)
    if fmt == "dot":
        return _parse_dot(text)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def format_for_path(path: str | os.PathLike) -> str:
    suffix = os.path.splitext(os.fspath(path))[1].lower()
    return {".json": "json", ".dot": "dot", ".gv": "dot"}.get(suffix, "edgelist")


def load_tree(path: str | os.PathLike, fmt: str | None = None) -> Tree:
    """Read a tree file; the format defaults to one guessed from the suffix."""
    with open(path, "rb") as fh:
        data = fh.read()
    return parse(data, fmt or format_for_path(path))
