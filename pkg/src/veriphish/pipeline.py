"""Post-commit derived-state pipeline.

Blocks replicate only facts (registrations, submissions, votes). Whenever a
committed block contains at least one vote, every replica deterministically
recomputes the derived layer from the full vote log: follower graph ->
PageRank -> per-URL phish score and status -> per-verifier skill points.
Because the recompute is a pure function of the replicated facts, the block
proposer can bake the post-recompute state digest into the block and every
honest replica reproduces it bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Sequence

from .ledger import (
    ChainState,
    Transaction,
    TxKind,
    UrlRecord,
    UrlStatus,
    VerifierAccount,
    fold_transactions,
)
from .truthdiscovery import (
    VoteEntry,
    VoteMatrix,
    build_verifier_graph,
    count_correct_votes,
    pagerank,
    phish_score,
    skill_points,
)


@dataclass(frozen=True)
class TruthParams:
    damping: float = 0.85
    tol: float = 1e-9
    max_iter: int = 200
    vote_threshold: int = 3


DEFAULT_TRUTH_PARAMS = TruthParams()


def vote_matrix_from_state(state: ChainState) -> VoteMatrix:
    entries = []
    for uid in sorted(state.urls):
        for v in state.urls[uid].votes:
            entries.append(VoteEntry(uid, v.verifier, v.verdict.value, v.ordinal))
    return VoteMatrix(tuple(entries))


def current_ranks(state: ChainState, params: TruthParams = DEFAULT_TRUTH_PARAMS) -> Dict[str, float]:
    """Ranks over all registered verifiers for the current vote log.

    Verifiers without any follower edges still receive the teleport share,
    so every registered verifier has a positive rank (1/N each when nobody
    has voted yet).
    """
    if not state.users:
        return {}
    graph = build_verifier_graph(vote_matrix_from_state(state)).with_nodes(state.users.keys())
    return pagerank(graph, params.damping, params.tol, params.max_iter).ranks


def recompute_derived(state: ChainState, params: TruthParams = DEFAULT_TRUTH_PARAMS) -> ChainState:
    """Recompute scores, statuses, ranks and skill points for the whole state."""
    votes = vote_matrix_from_state(state)
    ranks = current_ranks(state, params)

    urls: Dict[str, UrlRecord] = {}
    final_labels: Dict[str, str] = {}
    for uid, record in state.urls.items():
        seq = [(v.verifier, v.verdict.value) for v in record.votes]
        score = phish_score(ranks, seq, params.vote_threshold) if seq else None
        if score is None:
            status = UrlStatus.UNVERIFIED
        elif score > 0:
            status = UrlStatus.PHISHING
            final_labels[uid] = UrlStatus.PHISHING.value
        else:
            status = UrlStatus.NOT_PHISHING
            final_labels[uid] = UrlStatus.NOT_PHISHING.value
        urls[uid] = UrlRecord(
            url_id=record.url_id,
            url=record.url,
            submitter=record.submitter,
            evidence_email=record.evidence_email,
            votes=record.votes,
            status=status,
            phish_score=score,
            first_block_height=record.first_block_height,
        )

    votes_cast = {uid: acct.votes_cast for uid, acct in state.users.items()}
    skills = skill_points(ranks, votes_cast, votes, final_labels)
    correct = count_correct_votes(votes, final_labels)
    users: Dict[str, VerifierAccount] = {}
    for uid, acct in state.users.items():
        users[uid] = VerifierAccount(
            verifier_id=acct.verifier_id,
            display_name=acct.display_name,
            rank=ranks.get(uid, 0.0),
            skill_points=skills.get(uid, 0),
            votes_cast=acct.votes_cast,
            votes_correct=correct.get(uid, 0),
        )
    return ChainState(users=users, urls=urls, height=state.height, sender_nonces=state.sender_nonces)


def apply_block_transactions(
    state: ChainState,
    txs: Sequence[Transaction],
    height: int,
    params: TruthParams = DEFAULT_TRUTH_PARAMS,
) -> ChainState:
    """The block-level state transition used by consensus and replay: fold
    the transactions, then run the derived recompute iff the block voted.
    Raises InvalidBlockError if any transaction fails validation.
    """
    folded = fold_transactions(state, txs, height)
    if any(tx.kind == TxKind.CAST_VOTE for tx in txs):
        return recompute_derived(folded, params)
    return folded


def block_applier(params: TruthParams = DEFAULT_TRUTH_PARAMS):
    """Bind truth-discovery parameters into the (state, txs, height) -> state
    function consumed by the consensus engine.
    """

    def apply(state: ChainState, txs: Sequence[Transaction], height: int) -> ChainState:
        return apply_block_transactions(state, txs, height, params)

    return apply
