import random

import pytest

from veriphish.ledger import (
    Transaction,
    TxKind,
    Verdict,
    cast_vote,
    register_user,
    submit_url,
)


def make_evidence(url: str) -> str:
    return f"Suspicious mail body mentioning {url} - please verify."


def submit_with_evidence(sender: str, url: str, nonce: int, submitted_at: int = 0) -> Transaction:
    return submit_url(sender, url, make_evidence(url), nonce, submitted_at)


def random_tx(rng: random.Random, nonce: int = 1) -> Transaction:
    kind = rng.choice(list(TxKind))
    sender = rng.choice(["alice", "bob", "carol", "dave"])
    ts = rng.randrange(10**6)
    if kind == TxKind.REGISTER_USER:
        return register_user(sender, f"User {rng.randrange(100)}", nonce, ts)
    if kind == TxKind.SUBMIT_URL:
        url = f"https://site{rng.randrange(1000)}.test/p{rng.randrange(100)}?q={rng.randrange(10)}"
        return submit_with_evidence(sender, url, nonce, ts)
    return cast_vote(sender, f"{rng.randrange(16**8):08x}" * 8, rng.choice(list(Verdict)), nonce, ts)
