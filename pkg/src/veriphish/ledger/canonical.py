"""Canonical serialization and hashing.

Every replicated value has exactly one byte representation: key-sorted JSON,
no insignificant whitespace, UTF-8, integers in base 10, floats as Python's
shortest round-trip repr. Hashes are SHA-256 over those bytes, hex encoded
lowercase. Two semantically equal values therefore always hash identically,
regardless of construction order.
"""
from __future__ import annotations

import hashlib
import json
import math
from typing import Any, Mapping

from .model import (
    Block,
    ChainState,
    Transaction,
    TxKind,
    UrlRecord,
    UrlStatus,
    Verdict,
    VerifierAccount,
    Vote,
)

GENESIS_PARENT_HASH = "0" * 64


def _check_real(x: float) -> float:
    if not math.isfinite(x):
        raise ValueError(f"non-finite real cannot be serialized: {x!r}")
    return float(x)


def dumps_canonical(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


# ---------------------------------------------------------------- to plain docs

def tx_to_doc(tx: Transaction) -> dict:
    return {
        "kind": tx.kind.value,
        "sender": tx.sender,
        "nonce": tx.nonce,
        "submitted_at": tx.submitted_at,
        "payload": dict(tx.payload),
    }


def vote_to_doc(v: Vote) -> dict:
    return {
        "verifier": v.verifier,
        "verdict": v.verdict.value,
        "ordinal": v.ordinal,
        "block_height": v.block_height,
    }


def url_record_to_doc(r: UrlRecord) -> dict:
    return {
        "url_id": r.url_id,
        "url": r.url,
        "submitter": r.submitter,
        "evidence_email": r.evidence_email,
        "votes": [vote_to_doc(v) for v in r.votes],
        "status": r.status.value,
        "phish_score": None if r.phish_score is None else _check_real(r.phish_score),
        "first_block_height": r.first_block_height,
    }


def account_to_doc(a: VerifierAccount) -> dict:
    return {
        "verifier_id": a.verifier_id,
        "display_name": a.display_name,
        "rank": _check_real(a.rank),
        "skill_points": a.skill_points,
        "votes_cast": a.votes_cast,
        "votes_correct": a.votes_correct,
    }


def state_to_doc(s: ChainState) -> dict:
    return {
        "users": {uid: account_to_doc(a) for uid, a in s.users.items()},
        "urls": {uid: url_record_to_doc(r) for uid, r in s.urls.items()},
        "height": s.height,
        "sender_nonces": dict(s.sender_nonces),
    }


def block_to_doc(b: Block, with_hash: bool = True) -> dict:
    doc = {
        "height": b.height,
        "parent_hash": b.parent_hash,
        "transactions": [tx_to_doc(t) for t in b.transactions],
        "proposer": b.proposer,
        "round": b.round,
        "state_digest": b.state_digest,
    }
    if with_hash:
        doc["block_hash"] = b.block_hash
    return doc


def canonical_serialize(value: Any) -> bytes:
    if isinstance(value, Transaction):
        doc = tx_to_doc(value)
    elif isinstance(value, Block):
        doc = block_to_doc(value)
    elif isinstance(value, ChainState):
        doc = state_to_doc(value)
    elif isinstance(value, Vote):
        doc = vote_to_doc(value)
    elif isinstance(value, UrlRecord):
        doc = url_record_to_doc(value)
    elif isinstance(value, VerifierAccount):
        doc = account_to_doc(value)
    else:
        raise TypeError(f"no canonical form for {type(value).__name__}")
    return dumps_canonical(doc).encode("utf-8")


# ---------------------------------------------------------------- from plain docs

def tx_from_doc(doc: Mapping) -> Transaction:
    return Transaction(
        kind=TxKind(doc["kind"]),
        sender=doc["sender"],
        nonce=int(doc["nonce"]),
        submitted_at=int(doc["submitted_at"]),
        payload=dict(doc["payload"]),
    )


def vote_from_doc(doc: Mapping) -> Vote:
    return Vote(
        verifier=doc["verifier"],
        verdict=Verdict(doc["verdict"]),
        ordinal=int(doc["ordinal"]),
        block_height=int(doc["block_height"]),
    )


def url_record_from_doc(doc: Mapping) -> UrlRecord:
    score = doc["phish_score"]
    return UrlRecord(
        url_id=doc["url_id"],
        url=doc["url"],
        submitter=doc["submitter"],
        evidence_email=doc["evidence_email"],
        votes=tuple(vote_from_doc(v) for v in doc["votes"]),
        status=UrlStatus(doc["status"]),
        phish_score=None if score is None else float(score),
        first_block_height=int(doc["first_block_height"]),
    )


def account_from_doc(doc: Mapping) -> VerifierAccount:
    return VerifierAccount(
        verifier_id=doc["verifier_id"],
        display_name=doc["display_name"],
        rank=float(doc["rank"]),
        skill_points=int(doc["skill_points"]),
        votes_cast=int(doc["votes_cast"]),
        votes_correct=int(doc["votes_correct"]),
    )


def state_from_doc(doc: Mapping) -> ChainState:
    return ChainState(
        users={uid: account_from_doc(a) for uid, a in doc["users"].items()},
        urls={uid: url_record_from_doc(r) for uid, r in doc["urls"].items()},
        height=int(doc["height"]),
        sender_nonces={k: int(v) for k, v in doc["sender_nonces"].items()},
    )


def block_from_doc(doc: Mapping) -> Block:
    return Block(
        height=int(doc["height"]),
        parent_hash=doc["parent_hash"],
        transactions=tuple(tx_from_doc(t) for t in doc["transactions"]),
        proposer=doc["proposer"],
        round=int(doc["round"]),
        state_digest=doc["state_digest"],
        block_hash=doc["block_hash"],
    )


# ---------------------------------------------------------------- digests

def block_hash(block: Block) -> str:
    """SHA-256 over the canonical block serialization with block_hash omitted."""
    return sha256_hex(dumps_canonical(block_to_doc(block, with_hash=False)).encode("utf-8"))


def seal_block(height: int, parent_hash: str, transactions, proposer: str, round: int, state_digest: str) -> Block:
    unsealed = Block(height, parent_hash, tuple(transactions), proposer, round, state_digest, "")
    return Block(height, parent_hash, tuple(transactions), proposer, round, state_digest, block_hash(unsealed))


def state_digest(state: ChainState) -> str:
    return sha256_hex(canonical_serialize(state))


def tx_id(tx: Transaction) -> str:
    return sha256_hex(canonical_serialize(tx))
