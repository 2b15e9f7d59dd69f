"""Top-k entity similarity from weighted commuting matrices."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import UnknownEntityError
from .graph import HinGraph
from .metapath import MetaPath
from .walks import DEFAULT_NNZ_BUDGET, commuting_matrix_full


@dataclass
class SimilarityIndex:
    """Weighted sum of per-meta-path instance counts, query-ready."""

    metapaths: tuple[MetaPath, ...]
    theta: np.ndarray
    row_entities: tuple[str, ...]
    col_entities: tuple[str, ...]
    matrix: sp.csr_array  # float64, aligned to row/col entity order

    def score(self, row: str, col: str) -> float:
        try:
            i = self.row_entities.index(row)
            j = self.col_entities.index(col)
        except ValueError:
            raise UnknownEntityError(f"({row!r}, {col!r}) outside index entities") from None
        return float(self.matrix[i, j])


def _compatible(graph: HinGraph, a: str, b: str) -> bool:
    # endpoint types line up when one is an ancestor of the other
    return a in graph.hierarchy.ancestors(b) or b in graph.hierarchy.ancestors(a)


def build_index(
    graph: HinGraph,
    metapaths: Sequence[MetaPath],
    theta: Sequence[float] | None = None,
    nnz_budget: int = DEFAULT_NNZ_BUDGET,
    threads: int = 1,
) -> SimilarityIndex:
    """Combine commuting matrices with weights theta (uniform 1/M by default).

    All meta-paths must agree on endpoint types up to ancestor widening; the
    index rows/cols are the union of the per-path start/end type members.
    """
    metapaths = tuple(metapaths)
    if not metapaths:
        raise ValueError("similarity index needs at least one meta-path")
    if theta is None:
        weights = np.full(len(metapaths), 1.0 / len(metapaths))
    else:
        weights = np.asarray(theta, dtype=float)
        if weights.shape != (len(metapaths),):
            raise ValueError(f"{len(metapaths)} meta-paths but theta of shape {weights.shape}")

    first = metapaths[0]
    for mp in metapaths[1:]:
        if not _compatible(graph, first.source_type, mp.source_type):
            raise ValueError(
                f"source types {first.source_type!r} and {mp.source_type!r} are incompatible"
            )
        if not _compatible(graph, first.target_type, mp.target_type):
            raise ValueError(
                f"target types {first.target_type!r} and {mp.target_type!r} are incompatible"
            )

    if threads > 1 and len(metapaths) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            mats = list(pool.map(lambda mp: commuting_matrix_full(graph, mp, nnz_budget), metapaths))
    else:
        mats = [commuting_matrix_full(graph, mp, nnz_budget) for mp in metapaths]

    combined = sp.csr_array((graph.n_entities, graph.n_entities), dtype=np.float64)
    for w, m in zip(weights, mats):
        combined = combined + w * m.astype(np.float64)
    combined.eliminate_zeros()

    row_union = sorted({i for mp in metapaths for i in graph.type_members(mp.source_type)})
    col_union = sorted({i for mp in metapaths for i in graph.type_members(mp.target_type)})
    sub = combined[row_union][:, col_union]
    return SimilarityIndex(
        metapaths=metapaths,
        theta=weights,
        row_entities=tuple(graph.entity_name(i) for i in row_union),
        col_entities=tuple(graph.entity_name(i) for i in col_union),
        matrix=sub,
    )


def top_k(index: SimilarityIndex, query: str, k: int) -> list[tuple[str, float]]:
    """Ranked neighbors of the query row: stored nonzero scores, query excluded.

    Descending score, ties by entity id ascending, truncated to k. Entities
    with zero similarity are never returned.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    try:
        row = index.row_entities.index(query)
    except ValueError:
        raise UnknownEntityError(f"query {query!r} is not a row entity of the index") from None
    start, end = index.matrix.indptr[row], index.matrix.indptr[row + 1]
    cols = index.matrix.indices[start:end]
    data = index.matrix.data[start:end]
    ranked = [
        (index.col_entities[c], float(v))
        for c, v in zip(cols, data)
        if v != 0.0 and index.col_entities[c] != query
    ]
    ranked.sort(key=lambda item: (-item[1], item[0]))
    return ranked[:k]
