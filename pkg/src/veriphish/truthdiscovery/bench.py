"""Benchmark harness: run label-aggregation algorithms over seeded synthetic
datasets and tabulate accuracy / precision / recall per algorithm.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Sequence

import numpy as np

from .dawid_skene import dawid_skene
from .evaluate import EvaluationReport, evaluate
from .glad import glad
from .graph import build_verifier_graph
from .pagerank import pagerank
from .scoring import phish_score
from .synthetic import InvalidParamsError, SyntheticParams, generate_synthetic
from .votes import PHISHING, NOT_PHISHING, VoteMatrix

ALGORITHMS = ("pagerank", "em", "glad", "majority")


def majority_labels(votes: VoteMatrix) -> Dict[str, str]:
    """Plain majority vote; ties go to NotPhishing (no positive evidence)."""
    labels = {}
    for uid, url_votes in votes.by_url().items():
        phish = sum(1 for e in url_votes if e.verdict == PHISHING)
        labels[uid] = PHISHING if phish * 2 > len(url_votes) else NOT_PHISHING
    return labels


def pagerank_labels(votes: VoteMatrix, damping: float = 0.85, tol: float = 1e-9, max_iter: int = 200) -> Dict[str, str]:
    """Rank-weighted labeling: follower graph -> PageRank -> signed score.
    URLs below the vote threshold fall back to majority vote.
    """
    ranks = pagerank(build_verifier_graph(votes), damping, tol, max_iter).ranks
    fallback = majority_labels(votes)
    labels = {}
    for uid, url_votes in votes.by_url().items():
        score = phish_score(ranks, [(e.verifier_id, e.verdict) for e in url_votes])
        if score is None:
            labels[uid] = fallback[uid]
        else:
            labels[uid] = PHISHING if score > 0 else NOT_PHISHING
    return labels


def em_labels(votes: VoteMatrix) -> Dict[str, str]:
    posteriors, _, _ = dawid_skene(votes, prior=0.5, tol=1e-6, max_iter=100)
    return {u: (PHISHING if p > 0.5 else NOT_PHISHING) for u, p in posteriors.items()}


def glad_labels(votes: VoteMatrix, seed: int = 0) -> Dict[str, str]:
    posteriors, _, _, _ = glad(votes, learning_rate=0.5, iters=30, seed=seed)
    return {u: (PHISHING if p > 0.5 else NOT_PHISHING) for u, p in posteriors.items()}


@dataclass(frozen=True)
class BenchSpec:
    params: SyntheticParams
    algorithms: Sequence[str] = ALGORITHMS
    seeds: Sequence[int] = tuple(range(1, 11))

    def validate(self) -> None:
        if not self.algorithms:
            raise InvalidParamsError("need at least one algorithm")
        if not self.seeds:
            raise InvalidParamsError("need at least one seed")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise InvalidParamsError(f"unknown algorithms: {unknown}")


def default_bench_spec() -> BenchSpec:
    return BenchSpec(
        params=SyntheticParams(n_urls=2000, n_verifiers=50, reliability_mean=0.8, seed=0),
        algorithms=ALGORITHMS,
        seeds=tuple(range(1, 11)),
    )


@dataclass(frozen=True)
class BenchResult:
    spec: BenchSpec
    per_seed: Dict[str, List[EvaluationReport]]  # algorithm -> one report per seed

    def mean(self, algorithm: str, metric: str) -> float:
        vals = [getattr(r, metric) for r in self.per_seed[algorithm]]
        return float(np.mean(vals))

    def std(self, algorithm: str, metric: str) -> float:
        vals = [getattr(r, metric) for r in self.per_seed[algorithm]]
        return float(np.std(vals))

    def to_doc(self) -> dict:
        return {
            "seeds": list(self.spec.seeds),
            "rows": [
                {
                    "algorithm": a,
                    **{
                        m: {"mean": self.mean(a, m), "std": self.std(a, m)}
                        for m in ("accuracy", "precision", "recall")
                    },
                }
                for a in self.spec.algorithms
            ],
        }

    def render_table(self) -> str:
        header = f"{'Algorithm':<12} | {'Acc.':<17} | {'Prec.':<17} | {'Rec.':<17}"
        lines = [header, "-" * len(header)]
        for a in self.spec.algorithms:
            cells = [
                f"{100 * self.mean(a, m):6.2f}% ± {100 * self.std(a, m):5.2f}%"
                for m in ("accuracy", "precision", "recall")
            ]
            lines.append(f"{a:<12} | {cells[0]:<17} | {cells[1]:<17} | {cells[2]:<17}")
        return "\n".join(lines)


def run_bench(spec: BenchSpec) -> BenchResult:
    spec.validate()
    runners: Dict[str, Callable[[VoteMatrix, int], Dict[str, str]]] = {
        "majority": lambda v, s: majority_labels(v),
        "pagerank": lambda v, s: pagerank_labels(v),
        "em": lambda v, s: em_labels(v),
        "glad": lambda v, s: glad_labels(v, seed=s),
    }
    per_seed: Dict[str, List[EvaluationReport]] = {a: [] for a in spec.algorithms}
    for seed in spec.seeds:
        ds = generate_synthetic(replace(spec.params, seed=seed))
        for a in spec.algorithms:
            labels = runners[a](ds.votes, seed)
            per_seed[a].append(evaluate(labels, ds.truth, algorithm=a))
    return BenchResult(spec=spec, per_seed=per_seed)
