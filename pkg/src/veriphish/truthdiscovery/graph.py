"""Verifier follower graph.

For each URL, a verifier that votes earlier "follows" every verifier that
votes later on the same URL, giving a directed edge early -> late. Edge
weights count how many URLs exhibit that ordered pair, accumulated over the
whole vote log, so a URL with k voters contributes k*(k-1)/2 pair increments.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Tuple

from .votes import VoteMatrix


@dataclass(frozen=True)
class VerifierGraph:
    nodes: FrozenSet[str]
    edges: Dict[Tuple[str, str], int]  # (from, to) -> weight >= 1

    def with_nodes(self, extra: Iterable[str]) -> "VerifierGraph":
        return VerifierGraph(nodes=self.nodes | frozenset(extra), edges=self.edges)

    def out_weight(self, node: str) -> int:
        return sum(w for (u, _), w in self.edges.items() if u == node)


def build_verifier_graph(votes: VoteMatrix) -> VerifierGraph:
    nodes = set()
    edges: Dict[Tuple[str, str], int] = {}
    for url_votes in votes.by_url().values():
        order = [e.verifier_id for e in url_votes]
        nodes.update(order)
        for i in range(len(order)):
            for j in range(i + 1, len(order)):
                key = (order[i], order[j])
                edges[key] = edges.get(key, 0) + 1
    return VerifierGraph(nodes=frozenset(nodes), edges=edges)
