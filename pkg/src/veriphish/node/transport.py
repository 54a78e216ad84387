"""HTTP transport for multi-process deployments.

Outgoing consensus traffic is queued and flushed by a background sender
thread (never inline with engine stepping, so commits cannot recurse through
the network layer). A timer thread feeds timeout probes to the engine.
"""
from __future__ import annotations

import queue
import threading
from typing import List

import httpx

from ..consensus import ConsensusMessage, ProposeRequest, message_to_doc, propose_request_to_doc
from .runtime import Node


class HttpTransport:
    def __init__(self, node: Node, peer_urls: List[str], request_timeout: float = 2.0):
        self.node = node
        self.peer_urls = list(peer_urls)
        self.request_timeout = request_timeout
        self.outbox: "queue.Queue[tuple[str, dict]]" = queue.Queue()
        self._stop = threading.Event()
        self._threads: List[threading.Thread] = []
        node.transport = self

    # Transport interface -------------------------------------------------

    def broadcast(self, sender: Node, messages: List[ConsensusMessage]) -> None:
        for msg in messages:
            doc = message_to_doc(msg)
            for peer in self.peer_urls:
                self.outbox.put((peer, doc))

    def broadcast_request(self, sender: Node, request: ProposeRequest) -> None:
        doc = propose_request_to_doc(request)
        for peer in self.peer_urls:
            self.outbox.put((peer, doc))
        # loop back to ourselves so a single-validator node commits inline
        self.node.deliver(request)

    # Lifecycle ------------------------------------------------------------

    def start(self) -> None:
        sender = threading.Thread(target=self._send_loop, name="consensus-sender", daemon=True)
        timer = threading.Thread(target=self._timer_loop, name="consensus-timer", daemon=True)
        self._threads = [sender, timer]
        for t in self._threads:
            t.start()

    def stop(self) -> None:
        self._stop.set()

    def _send_loop(self) -> None:
        with httpx.Client(timeout=self.request_timeout) as client:
            while not self._stop.is_set():
                try:
                    peer, doc = self.outbox.get(timeout=0.1)
                except queue.Empty:
                    continue
                try:
                    client.post(f"{peer}/api/v1/consensus/message", json=doc)
                except httpx.HTTPError:
                    pass  # unreachable peers are the consensus layer's problem

    def _timer_loop(self) -> None:
        tick = max(self.node.config.tick_ms, 10) / 1000.0
        while not self._stop.wait(tick):
            self.node.tick()
