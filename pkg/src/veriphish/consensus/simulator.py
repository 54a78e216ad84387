"""Deterministic discrete-event network simulator for fault-scenario testing.

One logical clock, one seeded RNG for message delays, a binary heap of
events with a monotone sequence number as tie-breaker: identical scenarios
produce byte-identical reports. Faults supported per node:

  crash(at_time)  the node stops processing and emitting at ``at_time``
  mute            the node processes inputs but its outgoing messages vanish
  equivocate      when leading, the node proposes two different valid blocks
                  to the two halves of its peers and double-signs its
                  Prepare/Commit votes accordingly

The report records per-node committed chains, state digests and message
counts, whether honest nodes ever disagreed at a height, and whether any
live honest validator finished with injected transactions uncommitted.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from pathlib import Path
from random import Random
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from ..ledger import Block, Transaction, seal_block, state_digest, tx_from_doc, tx_id
from ..pipeline import block_applier
from .engine import Engine, NORMAL, VALIDATOR, ApplyFn
from .messages import (
    PRE_PREPARE,
    PREPARE,
    COMMIT,
    ConsensusMessage,
    ProposeRequest,
    SyncBlocks,
    Timeout,
)
from .validators import ValidatorSet, max_faults

SYNC_INTERVAL_MS = 1000   # block-sync pull cadence for lagging nodes
SYNC_BATCH = 16


class ScenarioInvalidError(ValueError):
    pass


CRASH = "crash"
EQUIVOCATE = "equivocate"
MUTE = "mute"


class FaultSpec(BaseModel):
    node: str
    behavior: str
    at_time: int = 0

    @model_validator(mode="after")
    def _check(self):
        if self.behavior not in (CRASH, EQUIVOCATE, MUTE):
            raise ValueError(f"unknown fault behavior {self.behavior!r}")
        return self


class DelayModel(BaseModel):
    min_ms: int = 10
    max_ms: int = 100

    @model_validator(mode="after")
    def _check(self):
        if not (0 <= self.min_ms <= self.max_ms):
            raise ValueError("need 0 <= min_ms <= max_ms")
        return self


class PartitionSpec(BaseModel):
    from_time: int
    to_time: int
    group_a: List[str]
    group_b: List[str]


class WorkloadItem(BaseModel):
    time: int
    tx: dict


class Scenario(BaseModel):
    seed: int
    n_validators: int
    n_normal: int = 0
    faults: List[FaultSpec] = Field(default_factory=list)
    delay_model: DelayModel = Field(default_factory=DelayModel)
    partitions: List[PartitionSpec] = Field(default_factory=list)
    workload: List[WorkloadItem] = Field(default_factory=list)
    max_time: int = 30000
    fault_budget: Optional[int] = None
    expect_stalled: bool = False

    @model_validator(mode="after")
    def _check(self):
        if self.n_validators < 1:
            raise ValueError("need at least one validator")
        budget = self.fault_budget if self.fault_budget is not None else max_faults(self.n_validators)
        if len(self.faults) > budget:
            raise ValueError(f"{len(self.faults)} faults exceed the declared budget of {budget}")
        ids = set(validator_ids(self.n_validators)) | set(normal_ids(self.n_normal))
        for f in self.faults:
            if f.node not in ids:
                raise ValueError(f"fault names unknown node {f.node!r}")
        return self


def validator_ids(n: int) -> List[str]:
    return [f"v{i}" for i in range(n)]


def normal_ids(n: int) -> List[str]:
    return [f"n{i}" for i in range(n)]


def scenario_from_doc(doc: dict) -> Scenario:
    try:
        return Scenario.model_validate(doc)
    except ValidationError as exc:
        raise ScenarioInvalidError(str(exc)) from exc


def load_scenario(path: Union[str, Path]) -> Scenario:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioInvalidError(f"cannot read scenario {path}: {exc}") from exc
    return scenario_from_doc(doc)


# ---------------------------------------------------------------------- sim

@dataclass
class _SimNode:
    engine: Engine
    behavior: Optional[str] = None
    crash_at: Optional[int] = None
    committed: List[Block] = field(default_factory=list)
    scheduled_deadline: Optional[int] = None
    # equivocation bookkeeping: (height, round) -> (hash_a, hash_b)
    forged: Dict[Tuple[int, int], Tuple[str, str]] = field(default_factory=dict)
    forged_blocks: Dict[str, Block] = field(default_factory=dict)

    def crashed(self, now: int) -> bool:
        return self.crash_at is not None and now >= self.crash_at

    @property
    def honest(self) -> bool:
        return self.behavior not in (EQUIVOCATE, MUTE)


@dataclass(frozen=True)
class NodeSummary:
    node_id: str
    role: str
    honest: bool
    crashed: bool
    chain: List[str]
    height: int
    state_digest: str
    committed_tx_count: int
    missing_tx_count: int


@dataclass(frozen=True)
class SimulationReport:
    per_node: Dict[str, NodeSummary]
    blocks_by_node: Dict[str, List[Block]]
    message_counts: Dict[str, int]
    injected_tx_count: int
    agreement_ok: bool
    stalled: bool

    def to_doc(self) -> dict:
        return {
            "stalled": self.stalled,
            "agreement_ok": self.agreement_ok,
            "injected_tx_count": self.injected_tx_count,
            "message_counts": dict(self.message_counts),
            "per_node": {
                nid: {
                    "role": s.role,
                    "honest": s.honest,
                    "crashed": s.crashed,
                    "height": s.height,
                    "chain": list(s.chain),
                    "state_digest": s.state_digest,
                    "committed_tx_count": s.committed_tx_count,
                    "missing_tx_count": s.missing_tx_count,
                }
                for nid, s in sorted(self.per_node.items())
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), sort_keys=True, indent=2)


class _Network:
    def __init__(self, scenario: Scenario, apply_fn: ApplyFn, timeout_base_ms: int):
        self.scenario = scenario
        self.rng = Random(scenario.seed)
        self.heap: List[Tuple[int, int, str, str, object]] = []
        self.seq = 0
        self.counts = {"sent": 0, "delivered": 0, "dropped": 0}
        vset = ValidatorSet(tuple(validator_ids(scenario.n_validators)))
        self.vset = vset
        self.nodes: Dict[str, _SimNode] = {}
        faults = {f.node: f for f in scenario.faults}
        for vid in validator_ids(scenario.n_validators):
            self.nodes[vid] = self._make_node(vid, VALIDATOR, vset, apply_fn, timeout_base_ms, faults.get(vid))
        for nid in normal_ids(scenario.n_normal):
            self.nodes[nid] = self._make_node(nid, NORMAL, vset, apply_fn, timeout_base_ms, faults.get(nid))

    @staticmethod
    def _make_node(nid, role, vset, apply_fn, timeout_base_ms, fault: Optional[FaultSpec]) -> _SimNode:
        node = _SimNode(engine=Engine(nid, role, vset, apply_fn, timeout_base_ms=timeout_base_ms))
        if fault is not None:
            if fault.behavior == CRASH:
                node.crash_at = fault.at_time
            else:
                node.behavior = fault.behavior
        return node

    def push(self, time: int, kind: str, target: str, payload: object) -> None:
        self.seq += 1
        heapq.heappush(self.heap, (time, self.seq, kind, target, payload))

    def partitioned(self, a: str, b: str, now: int) -> bool:
        for p in self.scenario.partitions:
            if p.from_time <= now < p.to_time:
                if (a in p.group_a and b in p.group_b) or (a in p.group_b and b in p.group_a):
                    return True
        return False

    def send(self, sender: str, msgs: Sequence[ConsensusMessage], now: int) -> None:
        node = self.nodes[sender]
        if node.behavior == MUTE:
            self.counts["dropped"] += len(msgs) * (len(self.nodes) - 1)
            return
        peers = [nid for nid in self.nodes if nid != sender]
        for msg in msgs:
            variants = self._equivocate(node, msg, peers) if node.behavior == EQUIVOCATE else None
            for i, peer in enumerate(peers):
                out = msg if variants is None else variants[i]
                self.counts["sent"] += 1
                if self.partitioned(sender, peer, now):
                    self.counts["dropped"] += 1
                    continue
                delay = self.rng.randint(self.scenario.delay_model.min_ms, self.scenario.delay_model.max_ms)
                self.push(now + delay, "deliver", peer, out)

    def _equivocate(self, node: _SimNode, msg: ConsensusMessage, peers: List[str]) -> List[ConsensusMessage]:
        """Split the peer set: the first half sees the original message, the
        second half a conflicting-but-valid twin.
        """
        half = (len(peers) + 1) // 2
        key = (msg.height, msg.round)
        if msg.kind == PRE_PREPARE and msg.block is not None:
            twin = seal_block(
                height=msg.block.height,
                parent_hash=msg.block.parent_hash,
                transactions=msg.block.transactions,
                proposer=msg.block.proposer,
                round=msg.block.round + 1000,  # metadata tweak: same txs, different hash
                state_digest=msg.block.state_digest,
            )
            node.forged[key] = (msg.block.block_hash, twin.block_hash)
            node.forged_blocks[twin.block_hash] = twin
            alt = ConsensusMessage(PRE_PREPARE, msg.height, msg.round, msg.sender, block=twin)
            return [msg] * half + [alt] * (len(peers) - half)
        if msg.kind in (PREPARE, COMMIT) and msg.block_hash is not None:
            pair = node.forged.get(key)
            if pair and msg.block_hash in pair:
                other = pair[1] if msg.block_hash == pair[0] else pair[0]
                alt = ConsensusMessage(msg.kind, msg.height, msg.round, msg.sender, block_hash=other)
                return [msg] * half + [alt] * (len(peers) - half)
        return [msg] * len(peers)

    def step_node(self, nid: str, event, now: int) -> None:
        node = self.nodes[nid]
        if node.crashed(now):
            self.counts["dropped"] += 1
            return
        out, committed = node.engine.step(event, now)
        node.committed.extend(committed)
        if out:
            self.send(nid, out, now)
        deadline = node.engine.timer_deadline
        if deadline is not None and deadline != node.scheduled_deadline:
            node.scheduled_deadline = deadline
            self.push(deadline, "timeout", nid, None)

    def run(self) -> SimulationReport:
        injected: List[Transaction] = []
        for item in self.scenario.workload:
            tx = tx_from_doc(item.tx)
            injected.append(tx)
            for vid in validator_ids(self.scenario.n_validators):
                delay = self.rng.randint(self.scenario.delay_model.min_ms, self.scenario.delay_model.max_ms)
                self.push(item.time + delay, "deliver", vid, ProposeRequest((tx,)))
        for nid in self.nodes:
            self.push(SYNC_INTERVAL_MS, "syncreq", nid, None)

        while self.heap:
            time, _seq, kind, target, payload = heapq.heappop(self.heap)
            if time > self.scenario.max_time:
                break
            if kind == "deliver":
                if isinstance(payload, ConsensusMessage):
                    self.counts["delivered"] += 1
                self.step_node(target, payload if payload is not None else Timeout(), time)
            elif kind == "timeout":
                self.step_node(target, Timeout(), time)
            elif kind == "syncreq":
                self._sync_request(target, time)

        return self._report(injected)

    def _sync_request(self, nid: str, now: int) -> None:
        """Periodic catch-up pull: ask one validator (rotating) for blocks
        past our height. The response rides the normal delayed delivery path
        and the engine refuses blocks lacking a logged commit quorum.
        """
        if now + SYNC_INTERVAL_MS <= self.scenario.max_time:
            self.push(now + SYNC_INTERVAL_MS, "syncreq", nid, None)
        node = self.nodes[nid]
        if node.crashed(now):
            return
        candidates = [v for v in validator_ids(self.scenario.n_validators) if v != nid]
        if not candidates:
            return
        peer_id = candidates[(now // SYNC_INTERVAL_MS + sum(map(ord, nid))) % len(candidates)]
        peer = self.nodes[peer_id]
        if peer.crashed(now) or peer.behavior == MUTE:
            return
        if self.partitioned(nid, peer_id, now):
            return
        have = node.engine.chain[-1].height
        blocks = tuple(b for b in peer.engine.chain if b.height > have)[:SYNC_BATCH]
        if not blocks:
            return
        delay = self.rng.randint(self.scenario.delay_model.min_ms, self.scenario.delay_model.max_ms)
        self.push(now + delay, "deliver", nid, SyncBlocks(blocks))

    def _report(self, injected: List[Transaction]) -> SimulationReport:
        injected_ids = {tx_id(t) for t in injected}
        per_node: Dict[str, NodeSummary] = {}
        blocks_by_node: Dict[str, List[Block]] = {}
        for nid, node in self.nodes.items():
            chain = node.engine.chain
            committed_ids = node.engine.committed_tx_ids()
            per_node[nid] = NodeSummary(
                node_id=nid,
                role=node.engine.role,
                honest=node.honest,
                crashed=node.crash_at is not None,
                chain=[b.block_hash for b in chain],
                height=chain[-1].height,
                state_digest=state_digest(node.engine.state),
                committed_tx_count=len(committed_ids & injected_ids),
                missing_tx_count=len(injected_ids - committed_ids),
            )
            blocks_by_node[nid] = list(chain)

        agreement_ok = True
        honest_ids = [nid for nid, n in self.nodes.items() if n.honest]
        max_h = max((per_node[nid].height for nid in honest_ids), default=0)
        for h in range(1, max_h + 1):
            hashes = {
                blocks_by_node[nid][h].block_hash
                for nid in honest_ids
                if len(blocks_by_node[nid]) > h
            }
            if len(hashes) > 1:
                agreement_ok = False

        stalled = any(
            per_node[nid].missing_tx_count > 0
            for nid, node in self.nodes.items()
            if node.honest and not node.crashed(self.scenario.max_time) and node.engine.role == VALIDATOR
        )
        return SimulationReport(
            per_node=per_node,
            blocks_by_node=blocks_by_node,
            message_counts=self.counts,
            injected_tx_count=len(injected_ids),
            agreement_ok=agreement_ok,
            stalled=stalled,
        )


def run_simulation(scenario: Scenario, apply_fn: Optional[ApplyFn] = None, timeout_base_ms: int = 1000) -> SimulationReport:
    """Execute a scenario to its max_time and summarize the outcome.

    Pure function of its arguments: repeated runs return identical reports.
    """
    if not isinstance(scenario, Scenario):
        raise ScenarioInvalidError(f"expected Scenario, got {type(scenario).__name__}")
    net = _Network(scenario, apply_fn or block_applier(), timeout_base_ms)
    return net.run()
