"""Node runtime: consensus engine + block log + derived read views.

Concurrency contract: all writes funnel through ``deliver`` under the node
lock, so state mutation is a single serialized sequence. Readers grab the
current immutable ChainState reference and compute views from that snapshot
without blocking writers.
"""
from __future__ import annotations

import json
import threading
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from ..consensus import Engine, ProposeRequest, Timeout, ValidatorSet
from ..ledger import (
    Block,
    ChainState,
    Rejection,
    Transaction,
    Verdict,
    apply_transaction,
    block_from_doc,
    block_to_doc,
    cast_vote,
    dumps_canonical,
    genesis_block,
    register_user,
    state_digest,
    submit_url,
    tx_id,
    url_id,
    validate_transaction,
    MalformedUrlError,
)
from ..pipeline import TruthParams, block_applier, vote_matrix_from_state
from ..truthdiscovery import build_verifier_graph, score_timeline
from .config import NodeConfig


class ChainGapError(ValueError):
    pass


def _default_clock() -> int:
    return int(time.monotonic() * 1000)


class Node:
    def __init__(self, config: NodeConfig, transport=None, clock: Callable[[], int] = _default_clock):
        self.config = config
        self.transport = transport
        self.clock = clock
        self.params = TruthParams(
            damping=config.damping,
            tol=config.tol,
            max_iter=config.max_iter,
            vote_threshold=config.vote_threshold,
        )
        self.apply_fn = block_applier(self.params)
        self.engine = Engine(
            node_id=config.node_id,
            role=config.role,
            validator_set=ValidatorSet(tuple(config.validators)),
            apply_fn=self.apply_fn,
            timeout_base_ms=config.timeout_base_ms,
            max_block_txs=config.max_block_txs,
        )
        self.lock = threading.RLock()
        self.pending: List[Transaction] = []
        self._commit_events: Dict[str, threading.Event] = {}
        self.chain_path = Path(config.data_dir) / "chain.jsonl"
        self._open_chain_log()

    # ------------------------------------------------------------ persistence

    def _open_chain_log(self) -> None:
        self.chain_path.parent.mkdir(parents=True, exist_ok=True)
        if self.chain_path.exists() and self.chain_path.stat().st_size > 0:
            blocks = [
                block_from_doc(json.loads(line))
                for line in self.chain_path.read_text(encoding="utf-8").splitlines()
                if line.strip()
            ]
            self._restore(blocks)
        else:
            with self.chain_path.open("w", encoding="utf-8") as fh:
                fh.write(dumps_canonical(block_to_doc(genesis_block())) + "\n")

    def _restore(self, blocks: List[Block]) -> None:
        """Replay a persisted block log from genesis, verifying linkage and
        every recorded state digest along the way.
        """
        expected_genesis = genesis_block()
        if not blocks or blocks[0] != expected_genesis:
            raise ChainGapError(f"{self.chain_path}: log does not start at genesis")
        state = self.engine.state
        chain = [expected_genesis]
        for block in blocks[1:]:
            if block.height != chain[-1].height + 1:
                raise ChainGapError(f"height {block.height} does not extend {chain[-1].height}")
            if block.parent_hash != chain[-1].block_hash:
                raise ChainGapError(f"parent hash mismatch at height {block.height}")
            state = self.apply_fn(state, block.transactions, block.height)
            if state_digest(state) != block.state_digest:
                raise ChainGapError(f"state digest mismatch at height {block.height}")
            chain.append(block)
        self.engine.chain = chain
        self.engine.state = state
        self.engine.height = chain[-1].height + 1

    def _append_block(self, block: Block) -> None:
        with self.chain_path.open("a", encoding="utf-8") as fh:
            fh.write(dumps_canonical(block_to_doc(block)) + "\n")

    # ------------------------------------------------------------- consensus

    def deliver(self, event) -> List[Block]:
        """Feed one consensus input to the engine; returns blocks committed
        by this input. Outgoing messages go to the transport, which must not
        call back into deliver synchronously.
        """
        with self.lock:
            out, committed = self.engine.step(event, self.clock())
            for block in committed:
                self.on_block_committed(block)
        if out and self.transport is not None:
            self.transport.broadcast(self, out)
        return committed

    def on_block_committed(self, block: Block) -> None:
        """Post-commit bookkeeping. The engine has already advanced its chain
        and run the derived-score pipeline inside the state transition.
        """
        if block.height != self.engine.chain[-1].height:
            raise ChainGapError(f"committed block {block.height} does not match chain head")
        self._append_block(block)
        committed_ids = {tx_id(t) for t in block.transactions}
        self.pending = [t for t in self.pending if tx_id(t) not in committed_ids]
        for tid in committed_ids:
            ev = self._commit_events.pop(tid, None)
            if ev is not None:
                ev.set()

    def tick(self) -> None:
        """Timer probe for the real transport loop."""
        deadline = self.engine.timer_deadline
        if deadline is not None and self.clock() >= deadline:
            self.deliver(Timeout())

    # ---------------------------------------------------------------- writes

    def _speculative_state(self) -> ChainState:
        state = self.engine.state
        alive: List[Transaction] = []
        for tx in self.pending:
            if validate_transaction(state, tx) is None:
                state = apply_transaction(state, tx)
                alive.append(tx)
        self.pending = alive
        return state

    def _submit(self, build: Callable[[ChainState], Tuple[Transaction, Optional[Rejection]]],
                wait_ms: int) -> Tuple[Optional[str], Optional[str], bool]:
        """Validate against the speculative state, then hand the transaction
        to consensus. Returns (tx_id, rejection, committed)."""
        with self.lock:
            spec = self._speculative_state()
            tx, reason = build(spec)
            if reason is not None:
                return None, reason.value, False
            self.pending.append(tx)
            tid = tx_id(tx)
            event = self._commit_events.setdefault(tid, threading.Event())
        req = ProposeRequest((tx,))
        if self.transport is not None:
            self.transport.broadcast_request(self, req)
        else:
            self.deliver(req)
        committed = event.wait(wait_ms / 1000.0) if wait_ms > 0 else event.is_set()
        return tid, None, committed

    def submit_register(self, verifier_id: str, display_name: str, wait_ms: int = 5000):
        def build(spec: ChainState):
            nonce = spec.sender_nonces.get(verifier_id, 0) + 1
            tx = register_user(verifier_id, display_name, nonce, self.clock())
            return tx, validate_transaction(spec, tx)

        return self._submit(build, wait_ms)

    def submit_url(self, sender: str, url: str, evidence_email: str, wait_ms: int = 5000):
        def build(spec: ChainState):
            nonce = spec.sender_nonces.get(sender, 0) + 1
            tx = submit_url(sender, url, evidence_email, nonce, self.clock())
            return tx, validate_transaction(spec, tx)

        return self._submit(build, wait_ms)

    def submit_vote(self, sender: str, url_ref: str, verdict, wait_ms: int = 5000):
        verdict = Verdict(verdict)

        def build(spec: ChainState):
            tx = cast_vote(sender, self.resolve_url_id(url_ref), verdict,
                           spec.sender_nonces.get(sender, 0) + 1, self.clock())
            return tx, validate_transaction(spec, tx)

        return self._submit(build, wait_ms)

    # ----------------------------------------------------------------- reads

    @staticmethod
    def resolve_url_id(url_ref: str) -> str:
        """Accept either a 64-hex url_id or a raw URL."""
        if len(url_ref) == 64 and all(c in "0123456789abcdef" for c in url_ref):
            return url_ref
        try:
            return url_id(url_ref)
        except MalformedUrlError:
            return url_ref  # treated as an unknown id downstream

    def snapshot(self) -> ChainState:
        return self.engine.state

    def url_view(self, url_ref: str) -> Optional[dict]:
        state = self.snapshot()
        record = state.urls.get(self.resolve_url_id(url_ref))
        if record is None:
            return None
        ranks = {uid: acct.rank for uid, acct in state.users.items()}
        votes = [
            {
                "verifier_id": v.verifier,
                "verdict": v.verdict.value,
                "ordinal": v.ordinal,
                "block_height": v.block_height,
                "rank": state.users[v.verifier].rank,
                "skill_points": state.users[v.verifier].skill_points,
            }
            for v in record.votes
        ]
        timeline = [
            {"ordinal": k, "score": score}
            for k, score in score_timeline(
                ranks, [(v.verifier, v.verdict.value) for v in record.votes], self.params.vote_threshold
            )
        ]
        return {
            "url_id": record.url_id,
            "url": record.url,
            "submitter": record.submitter,
            "evidence_email": record.evidence_email,
            "status": record.status.value,
            "phish_score": record.phish_score,
            "first_block_height": record.first_block_height,
            "votes": votes,
            "timeline": timeline,
        }

    def timeline_view(self, url_ref: str) -> Optional[dict]:
        view = self.url_view(url_ref)
        if view is None:
            return None
        return {"url_id": view["url_id"], "timeline": view["timeline"]}

    def graph_view(self) -> dict:
        state = self.snapshot()
        votes = vote_matrix_from_state(state)
        graph = build_verifier_graph(votes).with_nodes(state.users.keys())
        if len(votes) > 0:
            ranks = {uid: state.users[uid].rank for uid in state.users}
        else:
            # teleport-only PageRank over an edgeless graph: uniform mass
            n = len(state.users)
            ranks = {uid: 1.0 / n for uid in state.users} if n else {}
        nodes = [
            {"id": uid, "rank": ranks.get(uid, 0.0), "skill_points": state.users[uid].skill_points}
            for uid in sorted(state.users)
        ]
        edges = [
            {"from": u, "to": v, "weight": w}
            for (u, v), w in sorted(graph.edges.items())
        ]
        return {"nodes": nodes, "edges": edges}

    def blacklist_view(self) -> List[dict]:
        state = self.snapshot()
        flagged = [
            rec for rec in state.urls.values()
            if rec.phish_score is not None and rec.phish_score > 0
        ]
        flagged.sort(key=lambda r: (-r.phish_score, r.url_id))
        return [{"url": r.url, "phish_score": r.phish_score} for r in flagged]

    def verifier_view(self, verifier_id: str) -> Optional[dict]:
        acct = self.snapshot().users.get(verifier_id)
        if acct is None:
            return None
        return {
            "verifier_id": acct.verifier_id,
            "display_name": acct.display_name,
            "rank": acct.rank,
            "skill_points": acct.skill_points,
            "votes_cast": acct.votes_cast,
            "votes_correct": acct.votes_correct,
        }

    def blocks_view(self, from_height: int = 0, to_height: Optional[int] = None) -> List[dict]:
        chain = self.engine.chain
        head = chain[-1].height
        to_height = head if to_height is None else min(to_height, head)
        return [block_to_doc(b) for b in chain if from_height <= b.height <= to_height]

    def status_view(self) -> dict:
        return {
            "node_id": self.config.node_id,
            "role": self.config.role,
            "height": self.engine.chain[-1].height,
            "validators": list(self.config.validators),
            "state_digest": state_digest(self.snapshot()),
        }
