"""Immutable typed multigraph with bidirectional per-relation adjacency.

Entities, relations and types are plain strings at the API surface; they are
interned to dense integer indices at build time (index order equals sorted
string order) so that the walk and search code can work on small int tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    HierarchyError,
    UnknownEntityError,
    UnknownRelationError,
    UnknownTypeError,
)

ROOT_TYPE = "Object"


@dataclass(frozen=True, order=True)
class DirectedRelation:
    """A relation type traversed forward or against edge direction."""

    name: str
    inverted: bool = False

    def inverse(self) -> "DirectedRelation":
        return DirectedRelation(self.name, not self.inverted)

    def __str__(self) -> str:
        return self.name + ("~" if self.inverted else "")


def _check_identifier(kind: str, name: str) -> None:
    if not name:
        raise ValueError(f"empty {kind} id")
    if any(c.isspace() for c in name):
        raise ValueError(f"{kind} id {name!r} must not contain whitespace")
    if "->" in name:
        raise ValueError(f"{kind} id {name!r} must not contain '->'")
    if kind == "relation" and name.endswith("~"):
        raise ValueError(f"relation id {name!r} must not end with '~'")


class TypeHierarchy:
    """DAG of entity types rooted at ``Object``.

    Depth of a type is the longest parent chain down from the root, so the
    lowest common ancestor is the deepest type that is an ancestor of both
    arguments; ties break on the lexicographically smallest type id.
    """

    def __init__(self, edges: Iterable[tuple[str, str]], root: str = ROOT_TYPE):
        parents: dict[str, set[str]] = {}
        types: set[str] = {root}
        for child, parent in edges:
            _check_identifier("type", child)
            _check_identifier("type", parent)
            if child == root:
                raise HierarchyError(f"root type {root!r} cannot have a parent ({parent!r})")
            types.add(child)
            types.add(parent)
            parents.setdefault(child, set()).add(parent)

        self.root = root
        self._parents: dict[str, tuple[str, ...]] = {
            t: tuple(sorted(parents.get(t, ()))) for t in sorted(types)
        }
        self._check_acyclic()

        for t in sorted(types):
            if t != root and not self._parents[t]:
                raise HierarchyError(f"type {t!r} cannot reach root {root!r}: it has no parent")

        self._ancestors: dict[str, frozenset[str]] = {}
        self._depth: dict[str, int] = {}
        for t in sorted(types):
            self._ancestor_set(t)
            self._depth_of(t)

    def _check_acyclic(self) -> None:
        WHITE, GRAY, BLACK = 0, 1, 2
        color = {t: WHITE for t in self._parents}
        for start in sorted(self._parents):
            if color[start] != WHITE:
                continue
            stack: list[tuple[str, int]] = [(start, 0)]
            color[start] = GRAY
            while stack:
                node, i = stack[-1]
                ps = self._parents[node]
                if i < len(ps):
                    stack[-1] = (node, i + 1)
                    p = ps[i]
                    if color[p] == GRAY:
                        raise HierarchyError(f"cycle in hierarchy at edge {node!r} -> {p!r}")
                    if color[p] == WHITE:
                        color[p] = GRAY
                        stack.append((p, 0))
                else:
                    color[node] = BLACK
                    stack.pop()

    def _ancestor_set(self, t: str) -> frozenset[str]:
        cached = self._ancestors.get(t)
        if cached is not None:
            return cached
        acc = {t}
        for p in self._parents[t]:
            acc.update(self._ancestor_set(p))
        result = frozenset(acc)
        self._ancestors[t] = result
        return result

    def _depth_of(self, t: str) -> int:
        cached = self._depth.get(t)
        if cached is not None:
            return cached
        ps = self._parents[t]
        d = 0 if not ps else 1 + max(self._depth_of(p) for p in ps)
        self._depth[t] = d
        return d

    @property
    def types(self) -> tuple[str, ...]:
        return tuple(self._parents)

    def __contains__(self, type_id: str) -> bool:
        return type_id in self._parents

    def _require(self, type_id: str) -> None:
        if type_id not in self._parents:
            raise UnknownTypeError(f"unknown type {type_id!r}")

    def parents(self, type_id: str) -> tuple[str, ...]:
        self._require(type_id)
        return self._parents[type_id]

    def ancestors(self, type_id: str) -> frozenset[str]:
        """All ancestors of a type, including the type itself and the root."""
        self._require(type_id)
        return self._ancestors[type_id]

    def depth(self, type_id: str) -> int:
        self._require(type_id)
        return self._depth[type_id]

    def lca(self, a: str, b: str) -> str:
        """Deepest common ancestor of two types; ties break on smallest id."""
        common = self.ancestors(a) & self.ancestors(b)
        return min(common, key=lambda t: (-self._depth[t], t))

    def lca_of_set(self, types: Iterable[str]) -> str:
        """Left fold of pairwise lca over the given types in sorted order."""
        ordered = sorted(set(types))
        if not ordered:
            raise ValueError("lca_of_set requires a non-empty set of types")
        acc = ordered[0]
        self._require(acc)
        for t in ordered[1:]:
            acc = self.lca(acc, t)
        return acc


class HinGraph:
    """Typed multigraph where every edge is queryable in both directions.

    Instances are immutable after construction; all query methods are pure and
    safe for unrestricted concurrent use. Build graphs with
    :func:`build_graph`, not by calling this constructor directly.
    """

    def __init__(
        self,
        entities: Sequence[str],
        relations: Sequence[str],
        adjacency: Mapping[tuple[int, int, bool], tuple[int, ...]],
        assigned_types: Sequence[frozenset[str]],
        hierarchy: TypeHierarchy,
    ):
        self.entities: tuple[str, ...] = tuple(entities)
        self.relations: tuple[str, ...] = tuple(relations)
        self.hierarchy = hierarchy
        self._eindex = {name: i for i, name in enumerate(self.entities)}
        self._rindex = {name: i for i, name in enumerate(self.relations)}
        self._adj = dict(adjacency)
        self._assigned = tuple(assigned_types)

        closure_cache: dict[frozenset[str], frozenset[str]] = {}
        closed = []
        for types in self._assigned:
            full = closure_cache.get(types)
            if full is None:
                acc: set[str] = set()
                for t in types:
                    acc.update(hierarchy.ancestors(t))
                full = frozenset(acc)
                closure_cache[types] = full
            closed.append(full)
        self._closed: tuple[frozenset[str], ...] = tuple(closed)

        members: dict[str, list[int]] = {}
        for i, full in enumerate(self._closed):
            for t in full:
                members.setdefault(t, []).append(i)
        self._type_members = {t: tuple(idx) for t, idx in sorted(members.items())}

        rels_by_entity: list[list[tuple[int, bool]]] = [[] for _ in self.entities]
        for (e, r, inv) in self._adj:
            rels_by_entity[e].append((r, inv))
        self._entity_rels = tuple(tuple(sorted(rs)) for rs in rels_by_entity)

    # -- index-level access (used by the walk and search internals) --

    def entity_index(self, entity: str) -> int:
        idx = self._eindex.get(entity)
        if idx is None:
            raise UnknownEntityError(f"unknown entity {entity!r}")
        return idx

    def entity_name(self, idx: int) -> str:
        return self.entities[idx]

    def relation_index(self, relation: str) -> int:
        idx = self._rindex.get(relation)
        if idx is None:
            raise UnknownRelationError(f"unknown relation {relation!r}")
        return idx

    def neighbors_idx(self, entity: int, relation: int, inverted: bool) -> tuple[int, ...]:
        return self._adj.get((entity, relation, inverted), ())

    def entity_rels_idx(self, entity: int) -> tuple[tuple[int, bool], ...]:
        """Directed relations with at least one edge at this entity."""
        return self._entity_rels[entity]

    def closed_types_idx(self, entity: int) -> frozenset[str]:
        return self._closed[entity]

    def assigned_types_idx(self, entity: int) -> frozenset[str]:
        return self._assigned[entity]

    # -- name-level API --

    @property
    def n_entities(self) -> int:
        return len(self.entities)

    def has_entity(self, entity: str) -> bool:
        return entity in self._eindex

    def out_neighbors(self, entity: str, rel: DirectedRelation) -> list[str]:
        """Entities one step away via ``rel``; empty when there is none.

        An unknown entity raises, so callers can tell "no such entity" apart
        from "entity has no neighbors under this relation".
        """
        e = self.entity_index(entity)
        r = self._rindex.get(rel.name)
        if r is None:
            return []
        return [self.entities[w] for w in self.neighbors_idx(e, r, rel.inverted)]

    def out_degree(self, entity: str, rel: DirectedRelation) -> int:
        e = self.entity_index(entity)
        r = self._rindex.get(rel.name)
        if r is None:
            return 0
        return len(self.neighbors_idx(e, r, rel.inverted))

    def assigned_types(self, entity: str) -> frozenset[str]:
        """Types directly assigned to the entity (no ancestor expansion)."""
        return self._assigned[self.entity_index(entity)]

    def entity_types(self, entity: str) -> frozenset[str]:
        """Assigned types closed under ancestor expansion up to the root."""
        return self._closed[self.entity_index(entity)]

    def type_members(self, type_id: str) -> tuple[int, ...]:
        """Indices of entities whose closed type set contains ``type_id``."""
        if type_id not in self.hierarchy:
            raise UnknownTypeError(f"unknown type {type_id!r}")
        return self._type_members.get(type_id, ())

    def edge_count(self, relation: str) -> int:
        r = self.relation_index(relation)
        return sum(len(v) for (e, rr, inv), v in self._adj.items() if rr == r and not inv)


def build_graph(
    triples: Iterable[tuple[str, str, str]],
    type_assignments: Iterable[tuple[str, str]] = (),
    hierarchy_edges: Iterable[tuple[str, str]] = (),
) -> tuple[HinGraph, TypeHierarchy]:
    """Build an immutable graph plus hierarchy from edge and type listings.

    Duplicate triples collapse to a single edge. Every edge is materialized in
    both directions. Entities without a type assignment get ``{Object}``.
    Rejects hierarchies with cycles and type assignments that reference types
    absent from the hierarchy.
    """
    hierarchy = TypeHierarchy(hierarchy_edges)

    edge_set: set[tuple[str, str, str]] = set()
    entity_names: set[str] = set()
    relation_names: set[str] = set()
    for s, r, t in triples:
        _check_identifier("entity", s)
        _check_identifier("relation", r)
        _check_identifier("entity", t)
        edge_set.add((s, r, t))
        entity_names.add(s)
        entity_names.add(t)
        relation_names.add(r)

    assigned: dict[str, set[str]] = {}
    for entity, type_id in type_assignments:
        _check_identifier("entity", entity)
        if type_id not in hierarchy:
            raise UnknownTypeError(
                f"type assignment ({entity!r}, {type_id!r}) references a type absent from the hierarchy"
            )
        entity_names.add(entity)
        assigned.setdefault(entity, set()).add(type_id)

    entities = tuple(sorted(entity_names))
    relations = tuple(sorted(relation_names))
    eindex = {name: i for i, name in enumerate(entities)}
    rindex = {name: i for i, name in enumerate(relations)}

    adj: dict[tuple[int, int, bool], set[int]] = {}
    for s, r, t in edge_set:
        si, ri, ti = eindex[s], rindex[r], eindex[t]
        adj.setdefault((si, ri, False), set()).add(ti)
        adj.setdefault((ti, ri, True), set()).add(si)
    adjacency = {key: tuple(sorted(vals)) for key, vals in adj.items()}

    default_types = frozenset({hierarchy.root})
    assigned_types = tuple(
        frozenset(assigned[name]) if name in assigned else default_types for name in entities
    )

    graph = HinGraph(entities, relations, adjacency, assigned_types, hierarchy)
    return graph, hierarchy
