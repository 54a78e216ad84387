"""Seeded workload builders for simulation scenarios."""
from __future__ import annotations

from random import Random
from typing import List

from ..ledger import Verdict, cast_vote, register_user, submit_url, tx_to_doc, url_id
from .simulator import WorkloadItem


def standard_workload(
    n_users: int = 3,
    n_urls: int = 2,
    n_votes: int = 4,
    seed: int = 0,
    start_time: int = 100,
    spacing_ms: int = 150,
) -> List[WorkloadItem]:
    """Registrations, then submissions, then votes, at a fixed injection
    cadence. Nonces are consistent with injection order, so the whole
    workload is committable when the network is live.
    """
    rng = Random(seed)
    users = [f"user{i}" for i in range(n_users)]
    nonces = {u: 0 for u in users}
    t = start_time
    items: List[WorkloadItem] = []

    def push(tx):
        nonlocal t
        items.append(WorkloadItem(time=t, tx=tx_to_doc(tx)))
        t += spacing_ms

    for u in users:
        nonces[u] += 1
        push(register_user(u, u.title(), nonces[u], t))

    urls = [f"https://site{seed}-{i}.test/login" for i in range(n_urls)]
    for i, url in enumerate(urls):
        submitter = users[i % n_users]
        nonces[submitter] += 1
        push(submit_url(submitter, url, f"mail body with {url} inside", nonces[submitter], t))

    cast = set()
    for _ in range(n_votes):
        url = rng.choice(urls)
        candidates = [u for u in users if (u, url) not in cast]
        if not candidates:
            continue
        voter = rng.choice(candidates)
        cast.add((voter, url))
        nonces[voter] += 1
        verdict = Verdict.PHISHING if rng.random() < 0.7 else Verdict.NOT_PHISHING
        push(cast_vote(voter, url_id(url), verdict, nonces[voter], t))
    return items
