"""Best-first generation of discriminative meta-paths from example pairs.

The search tree's edges are directed relation types; a node at depth L stands
for one relation sequence of length L and stores walk tuples
``(source, current) -> f(source, current | sequence)`` aggregated over every
concrete walk from the example sources along that sequence. A node's priority

    S = base * beta**depth  (+ 1 when the node holds an example pair)

ranks the frontier, where ``base`` is the weighted mean over sources of their
remaining walk mass, normalized by each source's example-pair count. The +1
bonus guarantees nodes that actually reach example targets are emitted before
any further expansion, since ``base`` is a weighted mean of values at most 1.

Search steps are constrained by relations only; node types are attached to an
emitted sequence afterwards, as the lowest common ancestor of the entity
types observed at each depth (:func:`fill_types`).

The tree persists across emissions: an emitted node stays expandable, so
later rounds can grow longer sequences through it instead of starting over.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graph import DirectedRelation, HinGraph
from .metapath import MetaPath
from .models import ScoreMatrix


class ExamplePairSet:
    """User-supplied example pairs with positive weights (default 1.0)."""

    def __init__(
        self,
        pairs: Iterable[tuple[str, str]],
        weights: Mapping[tuple[str, str], float] | None = None,
    ):
        seen: dict[tuple[str, str], float] = {}
        order: list[tuple[str, str]] = []
        weights = dict(weights or {})
        for pair in pairs:
            pair = (pair[0], pair[1])
            if pair in seen:
                continue
            w = float(weights.get(pair, 1.0))
            if w <= 0:
                raise ValueError(f"example pair {pair} has non-positive weight {w}")
            seen[pair] = w
            order.append(pair)
        if not order:
            raise ValueError("example set must be non-empty")

        self.pairs: tuple[tuple[str, str], ...] = tuple(order)
        self.weights: dict[tuple[str, str], float] = seen
        self.pair_set: frozenset[tuple[str, str]] = frozenset(order)

        self.max_weight: dict[str, float] = {}
        self.pair_count: dict[str, int] = {}
        for (s, _), w in seen.items():
            self.max_weight[s] = max(self.max_weight.get(s, 0.0), w)
            self.pair_count[s] = self.pair_count.get(s, 0) + 1

    @property
    def sources(self) -> tuple[str, ...]:
        return tuple(sorted(self.max_weight))

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class SearchConfig:
    beta: float = 0.6
    max_depth: int = 6
    max_paths: int = 20
    node_budget: int = 1_000_000

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"beta must be in (0, 1], got {self.beta}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.max_paths < 1:
            raise ValueError(f"max_paths must be >= 1, got {self.max_paths}")
        if self.node_budget < 1:
            raise ValueError(f"node_budget must be >= 1, got {self.node_budget}")


@dataclass(frozen=True)
class GeneratedPath:
    """An emitted meta-path with its per-example-pair walk scores."""

    metapath: MetaPath
    relations: tuple[DirectedRelation, ...]
    scores: dict[tuple[str, str], float]


@dataclass
class PathGenerationResult:
    paths: tuple[GeneratedPath, ...]
    matrix: ScoreMatrix
    status: str  # "ok" | "exhausted" | "budget"
    tree: "SearchTree"


class TreeNode:
    __slots__ = (
        "relation",
        "depth",
        "relseq",
        "tuples",
        "priority",
        "has_pair",
        "children",
        "expanded",
        "emitted",
        "parent",
    )

    def __init__(self, relation, depth, relseq, tuples, parent):
        self.relation = relation  # (relation index, inverted) or None at root
        self.depth = depth
        self.relseq = relseq
        self.tuples = tuples  # (source idx, current idx) -> walk probability
        self.priority = 0.0
        self.has_pair = False
        self.children: dict[tuple[int, bool], TreeNode] = {}
        self.expanded = False
        self.emitted = False
        self.parent = parent


def _priority_core(tuples, depth, beta, max_r, count, pair_set):
    """Shared scoring: returns (S, node holds an example pair)."""
    if not tuples:
        raise ValueError("cannot score an empty tree node")
    per_source: dict = {}
    has_pair = False
    get = per_source.get
    for key, f in tuples.items():
        u = key[0]
        per_source[u] = get(u, 0.0) + f
        if not has_pair and key in pair_set:
            has_pair = True
    num = 0.0
    den = 0.0
    for u, total in per_source.items():
        w = max_r[u]
        num += w * total / count[u]
        den += w
    return (num / den) * beta**depth + (1.0 if has_pair else 0.0), has_pair


def priority_score(
    tuples: Mapping[tuple[str, str], float],
    depth: int,
    examples: ExamplePairSet,
    beta: float,
) -> float:
    """Priority of a node given its walk tuples keyed by entity names."""
    score, _ = _priority_core(
        tuples, depth, beta, examples.max_weight, examples.pair_count, examples.pair_set
    )
    return score


def fill_types(
    relations: Sequence[DirectedRelation],
    depth_entities: Sequence[Iterable[str]],
    graph: HinGraph,
) -> MetaPath:
    """Assign each position the LCA of the types observed there.

    ``depth_entities[i]`` is the set of entities appearing in the emitted
    node's root path at depth i; the position's type is the lowest common
    ancestor of the union of their directly assigned types.
    """
    if len(depth_entities) != len(relations) + 1:
        raise ValueError(
            f"expected {len(relations) + 1} entity sets for {len(relations)} relations, "
            f"got {len(depth_entities)}"
        )
    node_types = []
    for entities in depth_entities:
        union: set[str] = set()
        for e in entities:
            union.update(graph.assigned_types(e))
        if not union:
            raise ValueError("empty entity set at a meta-path position")
        node_types.append(graph.hierarchy.lca_of_set(union))
    return MetaPath(tuple(node_types), tuple(relations))


class SearchTree:
    """Persistent best-first search state, reusable across emissions.

    The frontier orders nodes by priority, breaking ties toward shallower
    depth and then the lexicographically smallest relation sequence, so runs
    are fully deterministic. ``next_path`` pops the best node and either
    emits it (first time it holds an example pair) or expands it; expanded
    nodes leave the frontier for good, emitted ones stay expandable.
    """

    def __init__(
        self,
        graph: HinGraph,
        examples: ExamplePairSet,
        config: SearchConfig | None = None,
        record_trace: bool = False,
    ):
        self.graph = graph
        self.examples = examples
        self.config = config or SearchConfig()
        self.status = "active"
        self.trace: list[tuple] | None = [] if record_trace else None

        self._pair_set = frozenset(
            (graph.entity_index(s), graph.entity_index(t)) for s, t in examples.pairs
        )
        self._max_r = {graph.entity_index(s): w for s, w in examples.max_weight.items()}
        self._count = {graph.entity_index(s): c for s, c in examples.pair_count.items()}

        root_tuples = {(s, s): 1.0 for s in sorted(self._max_r)}
        self.root = TreeNode(None, 0, (), root_tuples, None)
        self.root.priority, self.root.has_pair = self._score(self.root)
        self.nodes_created = 1
        self._frontier: list[tuple[tuple, TreeNode]] = [(self._key(self.root), self.root)]

    def _score(self, node: TreeNode) -> tuple[float, bool]:
        return _priority_core(
            node.tuples, node.depth, self.config.beta, self._max_r, self._count, self._pair_set
        )

    def _key(self, node: TreeNode) -> tuple:
        return (-node.priority, node.depth, node.relseq)

    def _record(self, event: str, node: TreeNode, popped_key: tuple) -> None:
        if self.trace is not None:
            next_key = self._frontier[0][0] if self._frontier else None
            self.trace.append((event, popped_key, next_key, node.depth, node.relseq))

    def expand_node(self, node: TreeNode) -> list[TreeNode]:
        """Create the node's children, one per outgoing directed relation."""
        if node.expanded:
            raise ValueError("node already expanded")
        if node.depth >= self.config.max_depth:
            raise ValueError(f"node at max depth {self.config.max_depth} cannot be expanded")
        graph = self.graph
        buckets: dict[tuple[int, bool], dict[tuple[int, int], float]] = {}
        for (u, v), f in node.tuples.items():
            for d in graph.entity_rels_idx(v):
                neigh = graph.neighbors_idx(v, d[0], d[1])
                bucket = buckets.get(d)
                if bucket is None:
                    bucket = buckets[d] = {}
                share = f / len(neigh)
                bget = bucket.get
                for w in neigh:
                    bucket[(u, w)] = bget((u, w), 0.0) + share
        node.expanded = True
        created = []
        for d in sorted(buckets):
            child = TreeNode(d, node.depth + 1, node.relseq + (d,), buckets[d], node)
            child.priority, child.has_pair = self._score(child)
            node.children[d] = child
            self.nodes_created += 1
            heapq.heappush(self._frontier, (self._key(child), child))
            created.append(child)
        return created

    def node_tuples(self, node: TreeNode) -> dict[tuple[str, str], float]:
        """Node walk tuples keyed by entity names, for inspection and tests."""
        name = self.graph.entity_name
        return {(name(u), name(v)): f for (u, v), f in node.tuples.items()}

    def node_relations(self, node: TreeNode) -> tuple[DirectedRelation, ...]:
        return tuple(DirectedRelation(self.graph.relations[r], inv) for r, inv in node.relseq)

    def node_trace(self, node: TreeNode) -> list[set[str]]:
        """Entity sets observed at each depth along the node's root path."""
        chain = []
        cur = node
        while cur is not None:
            chain.append(cur)
            cur = cur.parent
        chain.reverse()
        name = self.graph.entity_name
        return [{name(v) for (_, v) in n.tuples} for n in chain]

    def _emit(self, node: TreeNode) -> GeneratedPath:
        name = self.graph.entity_name
        scores = {
            (name(u), name(v)): f
            for (u, v), f in node.tuples.items()
            if (u, v) in self._pair_set
        }
        relations = self.node_relations(node)
        typed = fill_types(relations, self.node_trace(node), self.graph)
        return GeneratedPath(metapath=typed, relations=relations, scores=scores)

    def next_path(self) -> GeneratedPath | None:
        """Run the search until one more meta-path is emitted.

        Returns None on exhaustion: empty frontier, node budget exceeded, or
        nothing left below the depth limit; ``status`` says which.
        """
        while True:
            if self.nodes_created > self.config.node_budget:
                self.status = "budget"
                return None
            if not self._frontier:
                self.status = "exhausted"
                return None
            key, node = heapq.heappop(self._frontier)
            if node.has_pair and not node.emitted:
                node.emitted = True
                self._record("emit", node, key)
                heapq.heappush(self._frontier, (key, node))
                return self._emit(node)
            if node.depth >= self.config.max_depth:
                self._record("drop", node, key)
                continue
            self._record("expand", node, key)
            self.expand_node(node)


def generate_paths(
    graph: HinGraph,
    examples: ExamplePairSet,
    config: SearchConfig | None = None,
    record_trace: bool = False,
) -> PathGenerationResult:
    """Emit up to ``config.max_paths`` meta-paths from one persistent tree.

    The score matrix has one row per example pair (input order) and one
    column per emitted path; entries are 0 where a pair does not appear in
    the path's node. Zero paths found is a normal, distinguishable outcome.
    """
    config = config or SearchConfig()
    tree = SearchTree(graph, examples, config, record_trace=record_trace)
    paths: list[GeneratedPath] = []
    signatures: set[tuple] = set()
    while len(paths) < config.max_paths:
        emitted = tree.next_path()
        if emitted is None:
            break
        sig = tuple((r.name, r.inverted) for r in emitted.relations)
        if sig in signatures:
            continue
        signatures.add(sig)
        paths.append(emitted)

    values = np.zeros((len(examples.pairs), len(paths)))
    for j, p in enumerate(paths):
        for i, pair in enumerate(examples.pairs):
            values[i, j] = p.scores.get(pair, 0.0)
    matrix = ScoreMatrix(
        pairs=examples.pairs,
        metapaths=tuple(p.metapath for p in paths),
        values=values,
    )
    status = "ok" if len(paths) == config.max_paths else tree.status
    return PathGenerationResult(tuple(paths), matrix, status, tree)
