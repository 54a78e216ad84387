"""Consensus protocol messages and their wire form."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Tuple

from ..ledger import Block, Transaction, block_from_doc, block_to_doc, tx_from_doc, tx_to_doc

PRE_PREPARE = "PrePrepare"
PREPARE = "Prepare"
COMMIT = "Commit"
ROUND_CHANGE = "RoundChange"
MESSAGE_KINDS = (PRE_PREPARE, PREPARE, COMMIT, ROUND_CHANGE)


@dataclass(frozen=True)
class ConsensusMessage:
    kind: str
    height: int
    round: int
    sender: str
    block: Optional[Block] = None       # carried by PrePrepare only
    block_hash: Optional[str] = None    # referenced by Prepare / Commit


@dataclass(frozen=True)
class ProposeRequest:
    """Client-side transaction injection; every validator queues the payload
    into its mempool and the current leader proposes from there.
    """

    txs: Tuple[Transaction, ...]


@dataclass(frozen=True)
class Timeout:
    """Timer expiry probe; the engine ignores it unless its deadline passed."""


@dataclass(frozen=True)
class SyncBlocks:
    """Block-sync delivery: committed blocks fetched from peers, in height
    order. ``cross_validated`` marks batches already confirmed by f+1
    independent peers; otherwise the engine insists on a logged commit
    quorum before adopting each block.
    """

    blocks: Tuple[Block, ...]
    cross_validated: bool = False


def message_to_doc(msg: ConsensusMessage) -> dict:
    return {
        "kind": msg.kind,
        "height": msg.height,
        "round": msg.round,
        "sender": msg.sender,
        "block": None if msg.block is None else block_to_doc(msg.block),
        "block_hash": msg.block_hash,
    }


def message_from_doc(doc: Mapping) -> ConsensusMessage:
    if doc["kind"] not in MESSAGE_KINDS:
        raise ValueError(f"unknown consensus message kind {doc['kind']!r}")
    return ConsensusMessage(
        kind=doc["kind"],
        height=int(doc["height"]),
        round=int(doc["round"]),
        sender=doc["sender"],
        block=None if doc.get("block") is None else block_from_doc(doc["block"]),
        block_hash=doc.get("block_hash"),
    )


def propose_request_to_doc(req: ProposeRequest) -> dict:
    return {"kind": "ProposeRequest", "txs": [tx_to_doc(t) for t in req.txs]}


def propose_request_from_doc(doc: Mapping) -> ProposeRequest:
    return ProposeRequest(txs=tuple(tx_from_doc(t) for t in doc["txs"]))
