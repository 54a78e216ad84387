"""Weighted PageRank by power iteration.

Deliberately implemented over sorted plain-Python structures rather than a
linear-algebra package: rank values feed replicated state digests, so the
floating-point accumulation order has to be identical on every replica for
a given graph, independent of dict insertion history.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .graph import VerifierGraph


class EmptyGraphError(ValueError):
    pass


@dataclass(frozen=True)
class RankVector:
    ranks: Dict[str, float]
    damping: float
    iterations_used: int
    converged: bool


def pagerank(graph: VerifierGraph, damping: float = 0.85, tol: float = 1e-9, max_iter: int = 200) -> RankVector:
    """Power iteration with out-weight-normalized edges.

    Dangling nodes (no outgoing edges) redistribute their rank uniformly over
    all nodes each step, which keeps the total rank mass at exactly 1.
    Convergence is declared when the L1 change between iterations drops
    below ``tol``.
    """
    if not graph.nodes:
        raise EmptyGraphError("pagerank needs at least one node")
    if not (0.0 < damping < 1.0):
        raise ValueError(f"damping must be in (0,1), got {damping}")
    if tol <= 0 or max_iter < 1:
        raise ValueError("tol must be > 0 and max_iter >= 1")

    nodes: List[str] = sorted(graph.nodes)
    n = len(nodes)
    out_weight: Dict[str, float] = {v: 0.0 for v in nodes}
    for (u, _), w in sorted(graph.edges.items()):
        out_weight[u] += float(w)
    incoming: Dict[str, List[Tuple[str, float]]] = {v: [] for v in nodes}
    for (u, v), w in sorted(graph.edges.items()):
        incoming[v].append((u, float(w) / out_weight[u]))
    dangling = [v for v in nodes if out_weight[v] == 0.0]

    rank = {v: 1.0 / n for v in nodes}
    base = (1.0 - damping) / n
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        dangling_mass = sum(rank[v] for v in dangling)
        nxt = {}
        for v in nodes:
            inflow = dangling_mass / n
            for u, share in incoming[v]:
                inflow += rank[u] * share
            nxt[v] = base + damping * inflow
        delta = sum(abs(nxt[v] - rank[v]) for v in nodes)
        rank = nxt
        if delta < tol:
            converged = True
            break
    return RankVector(ranks=rank, damping=damping, iterations_used=iterations, converged=converged)
