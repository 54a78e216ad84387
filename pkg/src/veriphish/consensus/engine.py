"""Three-phase BFT replication engine (PrePrepare / Prepare / Commit with
round changes), one instance per node.

The engine is a deterministic event-driven state machine: ``step`` takes one
input (a consensus message, a timer probe, or a transaction injection) plus
the current logical time, mutates the engine, and returns the messages to
send and any block committed by that input. Callers must serialize step
invocations per engine; distinct engines are independent.

Safety model, in brief: a validator Prepares only a proposal it fully
validated against its own chain (leader identity, parent hash, transaction
validity, post-state digest); it Commits only after a quorum of matching
Prepares, at which point it locks on the block and will never Prepare a
conflicting one at that height; it outputs the block only after a quorum of
matching Commits. Quorums of 2f+1 out of n >= 3f+1 intersect in at least one
honest locked validator, which is what rules out two honest nodes committing
different blocks at a height. Round changes carry no prepared certificates;
a new leader re-proposes its own locked block if it has one. That keeps the
protocol minimal and safe; liveness is guaranteed for crash faults, which is
the fault model the operational scenarios target.

A Normal (read-only) node runs the same evaluation to follow the chain but
never emits a message and never counts toward any quorum.
"""
from __future__ import annotations

from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from ..ledger import (
    Block,
    ChainState,
    InvalidBlockError,
    Transaction,
    block_hash as compute_block_hash,
    empty_state,
    genesis_block,
    seal_block,
    select_valid,
    state_digest,
    tx_id,
)
from .messages import (
    COMMIT,
    PREPARE,
    PRE_PREPARE,
    ROUND_CHANGE,
    ConsensusMessage,
    ProposeRequest,
    SyncBlocks,
    Timeout,
)
from .validators import ValidatorSet, leader_for

VALIDATOR = "Validator"
NORMAL = "Normal"

IDLE = "Idle"
PREPREPARED = "PrePrepared"
PREPARED = "Prepared"
COMMITTED = "Committed"

HEIGHT_BUFFER = 32          # how far ahead of our height we keep messages
MAX_BACKOFF_DOUBLINGS = 16

ApplyFn = Callable[[ChainState, Sequence[Transaction], int], ChainState]


class Engine:
    def __init__(
        self,
        node_id: str,
        role: str,
        validator_set: ValidatorSet,
        apply_fn: ApplyFn,
        timeout_base_ms: int = 1000,
        max_block_txs: int = 100,
    ):
        if role not in (VALIDATOR, NORMAL):
            raise ValueError(f"unknown role {role!r}")
        if role == VALIDATOR and node_id not in validator_set:
            raise ValueError(f"{node_id!r} is a Validator but not in the validator set")
        self.node_id = node_id
        self.role = role
        self.validator_set = validator_set
        self.apply_fn = apply_fn
        self.timeout_base_ms = timeout_base_ms
        self.max_block_txs = max_block_txs

        self.chain: List[Block] = [genesis_block()]
        self.state: ChainState = empty_state()
        self.height = 1              # height currently being decided
        self.round = 0
        self.phase = IDLE
        self.locked_block: Optional[Block] = None
        self.timer_deadline: Optional[int] = None

        self.message_log: Dict[Tuple[int, int, str, str], ConsensusMessage] = {}
        self.candidates: Dict[str, Tuple[Block, ChainState]] = {}
        self.rejected_preprepares: Set[Tuple[int, int]] = set()
        self.prepare_sent: Set[Tuple[int, int]] = set()
        self.commit_sent: Set[Tuple[int, int]] = set()
        self.proposed: Set[Tuple[int, int]] = set()
        self.rc_target = 0

        self.mempool: Dict[str, Transaction] = {}
        self.dropped_inputs = 0

    # ------------------------------------------------------------------ api

    def step(self, event, now: int) -> Tuple[List[ConsensusMessage], List[Block]]:
        out: List[ConsensusMessage] = []
        committed: List[Block] = []
        if isinstance(event, ConsensusMessage):
            self._on_message(event, now, out, committed)
        elif isinstance(event, ProposeRequest):
            self._on_propose_request(event, now, out, committed)
        elif isinstance(event, Timeout):
            self._on_timeout(now, out, committed)
        elif isinstance(event, SyncBlocks):
            self._on_sync_blocks(event, now, out, committed)
        else:
            self.dropped_inputs += 1
        return out, committed

    def is_leader(self, height: int, round: int) -> bool:
        return leader_for(height, round, self.validator_set) == self.node_id

    def committed_tx_ids(self) -> Set[str]:
        return {tx_id(t) for b in self.chain for t in b.transactions}

    # -------------------------------------------------------------- inputs

    def _on_message(self, msg: ConsensusMessage, now: int, out, committed) -> None:
        if msg.sender not in self.validator_set:
            self.dropped_inputs += 1
            return
        if msg.height < self.height or msg.height > self.height + HEIGHT_BUFFER:
            self.dropped_inputs += 1
            return
        key = (msg.height, msg.round, msg.kind, msg.sender)
        if key in self.message_log:  # duplicates and equivocated rewrites: first wins
            return
        self.message_log[key] = msg
        self._evaluate(now, out, committed)

    def _on_propose_request(self, req: ProposeRequest, now: int, out, committed) -> None:
        for tx in req.txs:
            self.mempool.setdefault(tx_id(tx), tx)
        if self.role == VALIDATOR:
            if self.mempool and self.timer_deadline is None:
                self.timer_deadline = now + self._timeout_for(self.round)
            self._evaluate(now, out, committed)

    def _on_timeout(self, now: int, out, committed) -> None:
        if self.role != VALIDATOR or self.timer_deadline is None or now < self.timer_deadline:
            return
        target = max(self.round, self.rc_target) + 1
        self.rc_target = target
        self.timer_deadline = now + self._timeout_for(target)
        self._emit(ConsensusMessage(ROUND_CHANGE, self.height, target, self.node_id), out)
        self._evaluate(now, out, committed)

    def _timeout_for(self, round: int) -> int:
        return self.timeout_base_ms * (2 ** min(round, MAX_BACKOFF_DOUBLINGS))

    # ---------------------------------------------------------- evaluation

    def _emit(self, msg: ConsensusMessage, out) -> None:
        """Send to peers and record in our own log, as if self-delivered."""
        out.append(msg)
        self.message_log.setdefault((msg.height, msg.round, msg.kind, msg.sender), msg)

    def _evaluate(self, now: int, out, committed) -> None:
        """Drive every phase transition the current log supports, to fixpoint."""
        progress = True
        while progress:
            progress = False
            progress |= self._try_accept_preprepare(out)
            progress |= self._try_prepare_quorum(out)
            if self._try_commit_quorum(now, out, committed):
                progress = True
                continue
            if self.role == VALIDATOR:
                progress |= self._try_round_change(now, out)
                progress |= self._try_propose(out)

    def _rounds_with(self, kind: str) -> Set[int]:
        return {r for (h, r, k, _s) in self.message_log if h == self.height and k == kind}

    def _try_accept_preprepare(self, out) -> bool:
        if self.role == VALIDATOR:
            rounds = [self.round]
        else:
            rounds = sorted(self._rounds_with(PRE_PREPARE))
        progress = False
        for r in rounds:
            mark = (self.height, r)
            if mark in self.rejected_preprepares or mark in self.prepare_sent:
                continue
            leader = leader_for(self.height, r, self.validator_set)
            msg = self.message_log.get((self.height, r, PRE_PREPARE, leader))
            if msg is None or msg.block is None:
                continue
            block = msg.block
            if not self._validate_proposal(block):
                self.rejected_preprepares.add(mark)
                continue
            if block.block_hash not in self.candidates:
                self.candidates[block.block_hash] = (block, self._post_state(block))
            self.prepare_sent.add(mark)
            if self.phase == IDLE:
                self.phase = PREPREPARED
            if self.role == VALIDATOR:
                self._emit(ConsensusMessage(PREPARE, self.height, r, self.node_id, block_hash=block.block_hash), out)
            progress = True
        return progress

    def _validate_proposal(self, block: Block) -> bool:
        if block.height != self.height:
            return False
        if block.parent_hash != self.chain[-1].block_hash:
            return False
        if not block.transactions or len(block.transactions) > self.max_block_txs:
            return False
        if compute_block_hash(block) != block.block_hash:
            return False
        if self.locked_block is not None and block.block_hash != self.locked_block.block_hash:
            return False
        try:
            post = self._post_state(block)
        except (InvalidBlockError, ValueError):
            return False
        return state_digest(post) == block.state_digest

    def _post_state(self, block: Block) -> ChainState:
        cached = self.candidates.get(block.block_hash)
        if cached is not None:
            return cached[1]
        return self.apply_fn(self.state, block.transactions, block.height)

    def _count(self, kind: str, round: int, block_hash: str) -> int:
        return sum(
            1
            for (h, r, k, _s), m in self.message_log.items()
            if h == self.height and r == round and k == kind and m.block_hash == block_hash
        )

    def _try_prepare_quorum(self, out) -> bool:
        if self.role != VALIDATOR:
            return False
        mark = (self.height, self.round)
        if mark not in self.prepare_sent or mark in self.commit_sent:
            return False
        leader = leader_for(self.height, self.round, self.validator_set)
        msg = self.message_log.get((self.height, self.round, PRE_PREPARE, leader))
        if msg is None or msg.block is None:
            return False
        h = msg.block.block_hash
        if self._count(PREPARE, self.round, h) < self.validator_set.quorum:
            return False
        self.locked_block = msg.block
        self.phase = PREPARED
        self.commit_sent.add(mark)
        self._emit(ConsensusMessage(COMMIT, self.height, self.round, self.node_id, block_hash=h), out)
        return True

    def _try_commit_quorum(self, now: int, out, committed) -> bool:
        by_round_hash: Dict[Tuple[int, str], int] = {}
        for (h, r, k, _s), m in self.message_log.items():
            if h == self.height and k == COMMIT and m.block_hash is not None:
                by_round_hash[(r, m.block_hash)] = by_round_hash.get((r, m.block_hash), 0) + 1
        for (r, bh), count in sorted(by_round_hash.items()):
            if count >= self.validator_set.quorum and bh in self.candidates:
                self._commit(self.candidates[bh][0], now, committed)
                return True
        return False

    def commit_certificate(self, block_hash: str, height: int) -> bool:
        """True when the log holds a quorum of Commit votes for the hash at
        the height (any single round): proof the network decided that block.
        """
        by_round: Dict[int, int] = {}
        for (h, r, k, _s), m in self.message_log.items():
            if h == height and k == COMMIT and m.block_hash == block_hash:
                by_round[r] = by_round.get(r, 0) + 1
        return any(count >= self.validator_set.quorum for count in by_round.values())

    def _on_sync_blocks(self, event, now: int, out, committed) -> None:
        """Block-sync path: adopt externally fetched blocks, outside the vote
        flow. Used by laggards that saw a commit quorum for a block body they
        never received (an equivocating leader can arrange that) and by
        read-only nodes pulling the chain.

        Each block must extend the chain and reproduce its state digest.
        Unless the caller cross-validated the blocks against f+1 independent
        peers, adoption additionally demands a logged Commit quorum for the
        hash, so a single peer cannot feed us a valid-but-never-decided
        block. Adoption overrides any lock: the certificate proves the
        network decided against whatever we were locked on.
        """
        progressed = False
        for block in event.blocks:
            if block.height != self.height:
                continue
            if block.parent_hash != self.chain[-1].block_hash:
                break
            if compute_block_hash(block) != block.block_hash:
                break
            if not event.cross_validated and not self.commit_certificate(block.block_hash, block.height):
                break
            if block.block_hash not in self.candidates:
                try:
                    post = self.apply_fn(self.state, block.transactions, block.height)
                except (InvalidBlockError, ValueError):
                    break
                if state_digest(post) != block.state_digest:
                    break
                self.candidates[block.block_hash] = (block, post)
            self._commit(block, now, committed)
            progressed = True
        if progressed:
            self._evaluate(now, out, committed)

    def _commit(self, block: Block, now: int, committed) -> None:
        post = self.candidates[block.block_hash][1]
        self.chain.append(block)
        self.state = post
        committed.append(block)
        for tx in block.transactions:
            self.mempool.pop(tx_id(tx), None)
        self.height += 1
        self.round = 0
        self.rc_target = 0
        self.phase = IDLE
        self.locked_block = None
        self.candidates = {}
        self.message_log = {k: v for k, v in self.message_log.items() if k[0] >= self.height}
        self.rejected_preprepares = {m for m in self.rejected_preprepares if m[0] >= self.height}
        self.prepare_sent = {m for m in self.prepare_sent if m[0] >= self.height}
        self.commit_sent = {m for m in self.commit_sent if m[0] >= self.height}
        self.proposed = {m for m in self.proposed if m[0] >= self.height}
        if self.role == VALIDATOR and self.mempool:
            self.timer_deadline = now + self._timeout_for(0)
        else:
            self.timer_deadline = None

    def _try_round_change(self, now: int, out) -> bool:
        votes: Dict[int, Set[str]] = {}
        for (h, r, k, s), _m in self.message_log.items():
            if h == self.height and k == ROUND_CHANGE and r > self.round:
                votes.setdefault(r, set()).add(s)
        if not votes:
            return False
        # enough peers are ahead: join the lowest such round so the set converges
        ahead = {r: senders for r, senders in votes.items() if r > self.rc_target}
        ahead_senders = set().union(*ahead.values()) if ahead else set()
        if len(ahead_senders) >= self.validator_set.f + 1:
            target = min(ahead)
            self.rc_target = target
            self.timer_deadline = now + self._timeout_for(target)
            self._emit(ConsensusMessage(ROUND_CHANGE, self.height, target, self.node_id), out)
            return True
        for r in sorted(votes):
            if len(votes[r]) >= self.validator_set.quorum:
                self._enter_round(r, now, out)
                return True
        return False

    def _enter_round(self, round: int, now: int, out) -> None:
        self.round = round
        self.rc_target = max(self.rc_target, round)
        self.phase = IDLE if self.locked_block is None else PREPARED
        self.timer_deadline = now + self._timeout_for(round)

    def _try_propose(self, out) -> bool:
        mark = (self.height, self.round)
        if mark in self.proposed or mark in self.prepare_sent:
            return False
        if not self.is_leader(self.height, self.round):
            return False
        if self.locked_block is not None:
            block = self.locked_block
        else:
            txs, _ = select_valid(self.state, list(self.mempool.values()), self.height, self.max_block_txs)
            if not txs:
                return False
            post = self.apply_fn(self.state, txs, self.height)
            block = seal_block(
                height=self.height,
                parent_hash=self.chain[-1].block_hash,
                transactions=txs,
                proposer=self.node_id,
                round=self.round,
                state_digest=state_digest(post),
            )
            self.candidates[block.block_hash] = (block, post)
        self.proposed.add(mark)
        self._emit(ConsensusMessage(PRE_PREPARE, self.height, self.round, self.node_id, block=block), out)
        return True
