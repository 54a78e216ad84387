"""Transaction validation and application: the deterministic replicated state machine.

validate_transaction and apply_transaction are pure functions of (state, tx).
Score and status recomputation is deliberately NOT done here; that runs as a
post-commit pipeline so that voting incentives stay a derived view of the
replicated vote log.
"""
from __future__ import annotations

from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

from .model import (
    ChainState,
    Transaction,
    TxKind,
    UrlRecord,
    UrlStatus,
    Verdict,
    VerifierAccount,
    Vote,
)
from .canonical import state_digest, seal_block, GENESIS_PARENT_HASH
from .urls import MalformedUrlError, url_id


class Rejection(str, Enum):
    UNKNOWN_USER = "UnknownUser"
    BAD_NONCE = "BadNonce"
    DUPLICATE_URL = "DuplicateUrl"
    EVIDENCE_MISMATCH = "EvidenceMismatch"
    MALFORMED_URL = "MalformedUrl"
    UNKNOWN_URL = "UnknownUrl"
    DUPLICATE_VOTE = "DuplicateVote"
    DUPLICATE_USER = "DuplicateUser"


class InvalidBlockError(ValueError):
    """A block contained a transaction that fails validation."""

    def __init__(self, tx: Transaction, reason: Rejection):
        super().__init__(f"invalid {tx.kind.value} from {tx.sender!r}: {reason.value}")
        self.tx = tx
        self.reason = reason


def empty_state() -> ChainState:
    return ChainState(users={}, urls={}, height=0, sender_nonces={})


def genesis_block():
    """The fixed first block: height 0, zero parent, empty transaction list."""
    return seal_block(
        height=0,
        parent_hash=GENESIS_PARENT_HASH,
        transactions=(),
        proposer="",
        round=0,
        state_digest=state_digest(empty_state()),
    )


def validate_transaction(state: ChainState, tx: Transaction) -> Optional[Rejection]:
    """Returns None when the transaction is applicable to ``state``, else the
    rejection naming the first failed rule. Check order: registration, nonce,
    then kind-specific payload rules.
    """
    if tx.kind == TxKind.REGISTER_USER:
        if tx.sender in state.users:
            return Rejection.DUPLICATE_USER
    else:
        if tx.sender not in state.users:
            return Rejection.UNKNOWN_USER

    if tx.nonce != state.sender_nonces.get(tx.sender, 0) + 1:
        return Rejection.BAD_NONCE

    if tx.kind == TxKind.SUBMIT_URL:
        raw = tx.payload.get("url", "")
        try:
            uid = url_id(raw)
        except MalformedUrlError:
            return Rejection.MALFORMED_URL
        if uid in state.urls:
            return Rejection.DUPLICATE_URL
        evidence = tx.payload.get("evidence_email", "")
        if not evidence or raw not in evidence:
            return Rejection.EVIDENCE_MISMATCH
    elif tx.kind == TxKind.CAST_VOTE:
        uid = tx.payload.get("url_id", "")
        record = state.urls.get(uid)
        if record is None:
            return Rejection.UNKNOWN_URL
        if any(v.verifier == tx.sender for v in record.votes):
            return Rejection.DUPLICATE_VOTE
    return None


def apply_transaction(state: ChainState, tx: Transaction) -> ChainState:
    """Apply a validated transaction, returning the successor state.

    ``state.height`` is read as the height of the block being applied, so
    callers folding a block must set it first (see fold_transactions).
    """
    users = dict(state.users)
    urls = dict(state.urls)
    nonces = dict(state.sender_nonces)
    nonces[tx.sender] = tx.nonce

    if tx.kind == TxKind.REGISTER_USER:
        users[tx.sender] = VerifierAccount(verifier_id=tx.sender, display_name=tx.payload["display_name"])
    elif tx.kind == TxKind.SUBMIT_URL:
        raw = tx.payload["url"]
        uid = url_id(raw)
        urls[uid] = UrlRecord(
            url_id=uid,
            url=raw,
            submitter=tx.sender,
            evidence_email=tx.payload["evidence_email"],
            votes=(),
            status=UrlStatus.UNVERIFIED,
            phish_score=None,
            first_block_height=state.height,
        )
    elif tx.kind == TxKind.CAST_VOTE:
        uid = tx.payload["url_id"]
        record = urls[uid]
        vote = Vote(
            verifier=tx.sender,
            verdict=Verdict(tx.payload["verdict"]),
            ordinal=len(record.votes) + 1,
            block_height=state.height,
        )
        urls[uid] = UrlRecord(
            url_id=record.url_id,
            url=record.url,
            submitter=record.submitter,
            evidence_email=record.evidence_email,
            votes=record.votes + (vote,),
            status=record.status,
            phish_score=record.phish_score,
            first_block_height=record.first_block_height,
        )
        acct = users[tx.sender]
        users[tx.sender] = VerifierAccount(
            verifier_id=acct.verifier_id,
            display_name=acct.display_name,
            rank=acct.rank,
            skill_points=acct.skill_points,
            votes_cast=acct.votes_cast + 1,
            votes_correct=acct.votes_correct,
        )
    return ChainState(users=users, urls=urls, height=state.height, sender_nonces=nonces)


def fold_transactions(state: ChainState, txs: Sequence[Transaction], height: int) -> ChainState:
    """Validate and apply a block's transactions in order at ``height``.

    Raises InvalidBlockError on the first invalid transaction; the ledger
    never partially applies a block.
    """
    cur = ChainState(users=state.users, urls=state.urls, height=height, sender_nonces=state.sender_nonces)
    for tx in txs:
        reason = validate_transaction(cur, tx)
        if reason is not None:
            raise InvalidBlockError(tx, reason)
        cur = apply_transaction(cur, tx)
    return cur


def select_valid(state: ChainState, txs: Iterable[Transaction], height: int, limit: int) -> Tuple[List[Transaction], ChainState]:
    """Greedy batch builder for proposers: keeps transactions that validate
    against the rolling state, skips the rest, stops at ``limit``.
    """
    cur = ChainState(users=state.users, urls=state.urls, height=height, sender_nonces=state.sender_nonces)
    picked: List[Transaction] = []
    for tx in txs:
        if len(picked) >= limit:
            break
        if validate_transaction(cur, tx) is None:
            cur = apply_transaction(cur, tx)
            picked.append(tx)
    return picked, cur
