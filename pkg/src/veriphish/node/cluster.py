"""In-process cluster: N nodes on a shared message bus.

The bus is a FIFO queue drained by ``pump``; nothing is delivered while a
node is stepping, so there is no re-entrancy and no unbounded stack growth
however long the commit cascade. Used by the local-cluster CLI mode and by
the multi-replica tests.
"""
from __future__ import annotations

import tempfile
import threading
from collections import deque
from pathlib import Path
from typing import Dict, List, Optional

from ..consensus import ProposeRequest
from .config import NodeConfig
from .runtime import Node

MAX_PUMP_STEPS = 1_000_000


class BusTransport:
    def __init__(self):
        self.nodes: Dict[str, Node] = {}
        self.queue = deque()
        self._mutex = threading.Lock()
        self._pump_lock = threading.Lock()
        self._time = 0

    def register(self, node: Node) -> None:
        self.nodes[node.config.node_id] = node
        node.transport = self
        node.clock = self.clock

    def clock(self) -> int:
        return self._time

    def broadcast(self, sender: Node, messages) -> None:
        with self._mutex:
            for msg in messages:
                for nid in self.nodes:
                    if nid != sender.config.node_id:
                        self.queue.append((nid, msg))

    def broadcast_request(self, sender: Node, request: ProposeRequest) -> None:
        with self._mutex:
            for nid in self.nodes:
                self.queue.append((nid, request))
        # writes drive the bus to quiescence so the commit happens in-request;
        # callers never hold a node lock here (see Node._submit)
        self.pump()

    def pump(self) -> None:
        """Deliver queued events until quiescent."""
        with self._pump_lock:
            for _ in range(MAX_PUMP_STEPS):
                with self._mutex:
                    if not self.queue:
                        return
                    target, event = self.queue.popleft()
                    self._time += 1
                self.nodes[target].deliver(event)
            raise RuntimeError("bus did not quiesce")


class LocalCluster:
    """N validator nodes plus optional read-only nodes, one process."""

    def __init__(self, n_validators: int, n_normal: int = 0, data_dir: Optional[str] = None, **config_overrides):
        if data_dir is None:
            self._tmp = tempfile.TemporaryDirectory(prefix="veriphish-cluster-")
            data_dir = self._tmp.name
        self.data_root = Path(data_dir)
        self.bus = BusTransport()
        validators = [f"v{i}" for i in range(n_validators)]
        self.nodes: List[Node] = []
        for i, vid in enumerate(validators):
            self.nodes.append(self._make_node(vid, "Validator", validators, i, config_overrides))
        for j in range(n_normal):
            self.nodes.append(self._make_node(f"n{j}", "Normal", validators, n_validators + j, config_overrides))

    def _make_node(self, node_id: str, role: str, validators: List[str], index: int, overrides) -> Node:
        config = NodeConfig(
            node_id=node_id,
            role=role,
            listen_address=f"127.0.0.1:{9000 + index}",
            data_dir=str(self.data_root / node_id),
            validators=validators,
            **overrides,
        )
        node = Node(config)
        self.bus.register(node)
        return node

    def __getitem__(self, i: int) -> Node:
        return self.nodes[i]

    def __iter__(self):
        return iter(self.nodes)

    def pump(self) -> None:
        self.bus.pump()

    def register(self, via: int, verifier_id: str, display_name: str):
        tid, err, _ = self.nodes[via].submit_register(verifier_id, display_name, wait_ms=0)
        self.pump()
        return tid, err

    def submit_url(self, via: int, sender: str, url: str, evidence: str):
        tid, err, _ = self.nodes[via].submit_url(sender, url, evidence, wait_ms=0)
        self.pump()
        return tid, err

    def vote(self, via: int, sender: str, url_ref: str, verdict):
        tid, err, _ = self.nodes[via].submit_vote(sender, url_ref, verdict, wait_ms=0)
        self.pump()
        return tid, err
