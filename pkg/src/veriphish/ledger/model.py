"""Ledger domain types.

Everything here is an immutable value. State transitions build new values
(with structural sharing of the unchanged maps) instead of mutating, so a
state reference can be handed to concurrent readers at any time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Tuple


class TxKind(str, Enum):
    REGISTER_USER = "RegisterUser"
    SUBMIT_URL = "SubmitUrl"
    CAST_VOTE = "CastVote"


class Verdict(str, Enum):
    PHISHING = "Phishing"
    NOT_PHISHING = "NotPhishing"


class UrlStatus(str, Enum):
    UNVERIFIED = "Unverified"
    PHISHING = "Phishing"
    NOT_PHISHING = "NotPhishing"


@dataclass(frozen=True)
class Transaction:
    """One ledger operation. ``payload`` holds the kind-specific fields:

    RegisterUser: {display_name}
    SubmitUrl:    {url, evidence_email}
    CastVote:     {url_id, verdict}
    """

    kind: TxKind
    sender: str
    nonce: int
    submitted_at: int
    payload: Mapping[str, str]


def register_user(sender: str, display_name: str, nonce: int, submitted_at: int = 0) -> Transaction:
    return Transaction(TxKind.REGISTER_USER, sender, nonce, submitted_at, {"display_name": display_name})


def submit_url(sender: str, url: str, evidence_email: str, nonce: int, submitted_at: int = 0) -> Transaction:
    return Transaction(TxKind.SUBMIT_URL, sender, nonce, submitted_at, {"url": url, "evidence_email": evidence_email})


def cast_vote(sender: str, url_id: str, verdict: Verdict, nonce: int, submitted_at: int = 0) -> Transaction:
    return Transaction(TxKind.CAST_VOTE, sender, nonce, submitted_at, {"url_id": url_id, "verdict": verdict.value})


@dataclass(frozen=True)
class Vote:
    verifier: str
    verdict: Verdict
    ordinal: int  # 1-based position in the URL's vote sequence
    block_height: int


@dataclass(frozen=True)
class UrlRecord:
    url_id: str
    url: str
    submitter: str
    evidence_email: str
    votes: Tuple[Vote, ...]
    status: UrlStatus
    phish_score: Optional[float]
    first_block_height: int


@dataclass(frozen=True)
class VerifierAccount:
    verifier_id: str
    display_name: str
    rank: float = 0.0
    skill_points: int = 0
    votes_cast: int = 0
    votes_correct: int = 0


@dataclass(frozen=True)
class Block:
    height: int
    parent_hash: str
    transactions: Tuple[Transaction, ...]
    proposer: str
    round: int
    state_digest: str
    block_hash: str


@dataclass(frozen=True)
class ChainState:
    """Materialized view of the ledger after some block height.

    ``users`` and ``urls`` carry both replicated facts (registrations,
    submissions, votes, nonces) and derived facts (scores, ranks, skill
    points). Derived fields are filled in by the post-commit recompute
    pipeline, never by apply_transaction itself.
    """

    users: Mapping[str, VerifierAccount] = field(default_factory=dict)
    urls: Mapping[str, UrlRecord] = field(default_factory=dict)
    height: int = 0
    sender_nonces: Mapping[str, int] = field(default_factory=dict)
