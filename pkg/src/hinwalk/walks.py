"""Meta-path constrained random walks and path-instance counting.

The walk probability f(s, t | P) is computed by a forward pass: unit mass at
the source, split uniformly at each step over the neighbors reachable via the
step's relation that carry the next node type. Mass hitting a dead end is
dropped, never renormalized, so the result is a true walk probability and the
per-source masses sum to at most 1.

Two deliberately independent routes exist for every quantity: the dynamic
programming pass here, and exhaustive depth-first enumeration of concrete
path instances (:func:`enumerate_path_instances`), which the test suite uses
as the oracle.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterator
from weakref import WeakKeyDictionary

import numpy as np
import scipy.sparse as sp

from .errors import BudgetExceededError, UnknownEntityError, UnknownTypeError
from .graph import DirectedRelation, HinGraph
from .metapath import MetaPath, relations_only

DEFAULT_NNZ_BUDGET = 50_000_000
DEFAULT_INSTANCE_CAP = 100_000


@dataclass(frozen=True)
class WalkDistribution:
    """Where a walk from ``source`` along ``metapath`` can end up, with mass."""

    source: str
    metapath: MetaPath
    mass: dict[str, float]

    def total(self) -> float:
        return sum(self.mass.values())


def _resolve(graph: HinGraph, metapath: MetaPath) -> list[tuple[int, bool]]:
    """Validate a meta-path against a graph; return interned relation steps."""
    for t in metapath.node_types:
        if t not in graph.hierarchy:
            raise UnknownTypeError(f"meta-path references unknown type {t!r}")
    return [(graph.relation_index(r.name), r.inverted) for r in metapath.relations]


def walk_distribution(graph: HinGraph, source: str, metapath: MetaPath) -> WalkDistribution:
    """Forward pass of the constrained walk; returns only positive masses."""
    steps = _resolve(graph, metapath)
    src = graph.entity_index(source)
    if metapath.node_types[0] not in graph.closed_types_idx(src):
        raise ValueError(
            f"source {source!r} does not carry start type {metapath.node_types[0]!r}"
        )

    root = graph.hierarchy.root
    current: dict[int, float] = {src: 1.0}
    for (ridx, inv), next_type in zip(steps, metapath.node_types[1:]):
        unconstrained = next_type == root
        following: dict[int, float] = {}
        for e, m in current.items():
            neigh = graph.neighbors_idx(e, ridx, inv)
            if not unconstrained:
                neigh = [w for w in neigh if next_type in graph.closed_types_idx(w)]
            if not neigh:
                continue
            share = m / len(neigh)
            for w in neigh:
                following[w] = following.get(w, 0.0) + share
        current = following
        if not current:
            break

    mass = {graph.entity_name(e): m for e, m in sorted(current.items())}
    return WalkDistribution(source, metapath, mass)


def walk_probability(graph: HinGraph, source: str, target: str, metapath: MetaPath) -> float:
    """f(source, target | metapath): 0.0 when the target is unreachable."""
    graph.entity_index(target)
    return walk_distribution(graph, source, metapath).mass.get(target, 0.0)


def enumerate_path_instances(
    graph: HinGraph,
    source: str,
    metapath: MetaPath,
    max_instances: int = DEFAULT_INSTANCE_CAP,
) -> list[list[str]]:
    """Every concrete entity path from ``source`` conforming to the meta-path.

    Exhaustive depth-first search honoring the per-node type constraints;
    serves as the brute-force oracle for the walk and the commuting matrix.
    Raises when more than ``max_instances`` instances exist.
    """
    steps = _resolve(graph, metapath)
    src = graph.entity_index(source)
    if metapath.node_types[0] not in graph.closed_types_idx(src):
        raise ValueError(
            f"source {source!r} does not carry start type {metapath.node_types[0]!r}"
        )

    root = graph.hierarchy.root
    out: list[list[str]] = []
    path = [src]

    def descend(depth: int) -> None:
        if depth == len(steps):
            if len(out) >= max_instances:
                raise BudgetExceededError(
                    f"more than {max_instances} path instances from {source!r}"
                )
            out.append([graph.entity_name(e) for e in path])
            return
        ridx, inv = steps[depth]
        next_type = metapath.node_types[depth + 1]
        for w in graph.neighbors_idx(path[-1], ridx, inv):
            if next_type != root and next_type not in graph.closed_types_idx(w):
                continue
            path.append(w)
            descend(depth + 1)
            path.pop()

    descend(0)
    return out


def instance_probability(graph: HinGraph, instance: list[str], metapath: MetaPath) -> float:
    """Probability of one concrete instance: product of uniform step choices.

    Independent of the forward pass; each factor is 1 / (number of qualifying
    neighbors at that step), recomputed from the adjacency.
    """
    steps = _resolve(graph, metapath)
    root = graph.hierarchy.root
    prob = 1.0
    for depth, (ridx, inv) in enumerate(steps):
        e = graph.entity_index(instance[depth])
        next_type = metapath.node_types[depth + 1]
        neigh = graph.neighbors_idx(e, ridx, inv)
        if next_type != root:
            neigh = [w for w in neigh if next_type in graph.closed_types_idx(w)]
        prob /= len(neigh)
    return prob


@dataclass
class CommutingMatrix:
    """Path-instance counts between start-type and end-type entities."""

    metapath: MetaPath
    row_entities: tuple[str, ...]
    col_entities: tuple[str, ...]
    matrix: sp.csr_array  # int64 counts, aligned to row/col entity order

    def count(self, row: str, col: str) -> int:
        try:
            i = self.row_entities.index(row)
            j = self.col_entities.index(col)
        except ValueError:
            raise UnknownEntityError(f"({row!r}, {col!r}) outside matrix entities") from None
        return int(self.matrix[i, j])

    def entries(self) -> Iterator[tuple[str, str, int]]:
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        for k in order:
            yield self.row_entities[coo.row[k]], self.col_entities[coo.col[k]], int(coo.data[k])


def _type_mask(graph: HinGraph, type_id: str) -> np.ndarray:
    mask = np.zeros(graph.n_entities, dtype=bool)
    mask[list(graph.type_members(type_id))] = True
    return mask


# graphs are immutable, so per-graph step matrices are safe to memoize
_STEP_CACHE: WeakKeyDictionary = WeakKeyDictionary()


def _step_matrix(graph: HinGraph, ridx: int, inv: bool, row_type: str, col_type: str) -> sp.csr_array:
    per_graph = _STEP_CACHE.setdefault(graph, {})
    key = (ridx, inv, row_type, col_type)
    cached = per_graph.get(key)
    if cached is not None:
        return cached

    root = graph.hierarchy.root
    n = graph.n_entities
    rows: list[int] = []
    cols: list[int] = []
    row_members = range(n) if row_type == root else graph.type_members(row_type)
    for u in row_members:
        for w in graph.neighbors_idx(u, ridx, inv):
            if col_type != root and col_type not in graph.closed_types_idx(w):
                continue
            rows.append(u)
            cols.append(w)
    data = np.ones(len(rows), dtype=np.int64)
    matrix = sp.csr_array((data, (rows, cols)), shape=(n, n))
    per_graph[key] = matrix
    return matrix


def commuting_matrix_full(
    graph: HinGraph, metapath: MetaPath, nnz_budget: int = DEFAULT_NNZ_BUDGET
) -> sp.csr_array:
    """Chained product of per-step type-filtered adjacency, in full index space."""
    steps = _resolve(graph, metapath)
    n = graph.n_entities
    if not steps:
        idx = np.fromiter(graph.type_members(metapath.node_types[0]), dtype=np.int64)
        data = np.ones(len(idx), dtype=np.int64)
        return sp.csr_array((data, (idx, idx)), shape=(n, n))

    product: sp.csr_array | None = None
    for depth, (ridx, inv) in enumerate(steps):
        step = _step_matrix(graph, ridx, inv, metapath.node_types[depth], metapath.node_types[depth + 1])
        product = step if product is None else product @ step
        if product.nnz > nnz_budget:
            raise BudgetExceededError(
                f"commuting matrix for {metapath} exceeds nnz budget {nnz_budget}"
            )
    return product


def commuting_matrix(
    graph: HinGraph, metapath: MetaPath, nnz_budget: int = DEFAULT_NNZ_BUDGET
) -> CommutingMatrix:
    """Matrix of path-instance counts; rows/cols are start/end type members."""
    full = commuting_matrix_full(graph, metapath, nnz_budget)
    row_idx = list(graph.type_members(metapath.node_types[0]))
    col_idx = list(graph.type_members(metapath.node_types[-1]))
    n = graph.n_entities
    if len(row_idx) == n and len(col_idx) == n:
        sub = full
    elif row_idx and col_idx:
        sub = full[row_idx][:, col_idx]
    else:
        sub = sp.csr_array((len(row_idx), len(col_idx)), dtype=np.int64)
    return CommutingMatrix(
        metapath=metapath,
        row_entities=tuple(graph.entity_name(i) for i in row_idx),
        col_entities=tuple(graph.entity_name(i) for i in col_idx),
        matrix=sub,
    )


def enumerate_metapaths(
    graph: HinGraph,
    source_type: str,
    target_type: str,
    max_len: int,
    deadline: float | None = None,
) -> list[MetaPath]:
    """All relation sequences of length 1..max_len realized by some instance.

    Breadth-first sweep over relation-sequence prefixes, each carrying the set
    of entities reachable from any source-type entity along it. A sequence
    qualifies when its reachable set meets the target-type entities. Node
    types are left at the wildcard root type.
    """
    if source_type not in graph.hierarchy:
        raise UnknownTypeError(f"unknown type {source_type!r}")
    if target_type not in graph.hierarchy:
        raise UnknownTypeError(f"unknown type {target_type!r}")
    if max_len <= 0:
        return []

    n = graph.n_entities
    start = _type_mask(graph, source_type)
    targets = _type_mask(graph, target_type)
    if not start.any() or not targets.any():
        return []

    root = graph.hierarchy.root
    rel_dirs = sorted(
        {(r, inv) for e in range(n) for (r, inv) in graph.entity_rels_idx(e)}
    )
    step_ops = {
        d: _step_matrix(graph, d[0], d[1], root, root).astype(np.float64) for d in rel_dirs
    }

    found: list[tuple[tuple[int, bool], ...]] = []
    level: dict[tuple[tuple[int, bool], ...], np.ndarray] = {(): start}
    for _ in range(max_len):
        following: dict[tuple[tuple[int, bool], ...], np.ndarray] = {}
        for seq, reach in sorted(level.items()):
            if deadline is not None and time.monotonic() > deadline:
                raise BudgetExceededError("meta-path enumeration deadline exceeded")
            vec = reach.astype(np.float64)
            for d in rel_dirs:
                nxt = (vec @ step_ops[d]) > 0.0
                if nxt.any():
                    following[seq + (d,)] = nxt
        level = following
        for seq, reach in sorted(level.items()):
            if (reach & targets).any():
                found.append(seq)
        if not level:
            break

    return [
        relations_only(
            tuple(DirectedRelation(graph.relations[r], inv) for r, inv in seq),
            wildcard=graph.hierarchy.root,
        )
        for seq in found
    ]
