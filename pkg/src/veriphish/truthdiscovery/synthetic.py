"""Synthetic labeled vote datasets with skewed participation.

Stands in for a real crowdsourced verification log: a small core of reliable
verifiers does most of the voting (activity follows a Zipf profile over the
reliability order), most URLs attract only a handful of votes (per-URL vote
counts are power-law distributed above a floor), and each vote matches the
ground truth with the voter's reliability.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from .votes import PHISHING, NOT_PHISHING, VoteEntry, VoteMatrix

_MAX_VOTES_PER_URL = 40


class InvalidParamsError(ValueError):
    pass


@dataclass(frozen=True)
class SyntheticParams:
    n_urls: int
    n_verifiers: int
    phish_fraction: float = 0.5
    reliability_mean: float = 0.8
    reliability_spread: float = 0.1
    participation_exponent: float = 2.0
    min_votes: int = 3
    seed: int = 0

    def validate(self) -> None:
        if self.n_urls < 1 or self.n_verifiers < 1:
            raise InvalidParamsError("n_urls and n_verifiers must be >= 1")
        if not (0.0 <= self.phish_fraction <= 1.0):
            raise InvalidParamsError("phish_fraction must be in [0,1]")
        if not (0.5 < self.reliability_mean <= 1.0):
            raise InvalidParamsError("reliability_mean must be in (0.5, 1]")
        if self.reliability_spread < 0.0:
            raise InvalidParamsError("reliability_spread must be >= 0")
        if self.participation_exponent <= 1.0:
            raise InvalidParamsError("participation_exponent must be > 1")
        if not (1 <= self.min_votes <= self.n_verifiers):
            raise InvalidParamsError("min_votes must be in 1..n_verifiers")


@dataclass(frozen=True)
class LabeledDataset:
    votes: VoteMatrix
    truth: Dict[str, str]
    params: Optional[SyntheticParams] = None


def generate_synthetic(params: SyntheticParams) -> LabeledDataset:
    params.validate()
    rng = np.random.default_rng(params.seed)

    n_phish = int(round(params.n_urls * params.phish_fraction))
    flags = np.zeros(params.n_urls, dtype=bool)
    flags[:n_phish] = True
    flags = rng.permutation(flags)
    url_ids = [f"u{i:05d}" for i in range(params.n_urls)]
    truth = {u: (PHISHING if f else NOT_PHISHING) for u, f in zip(url_ids, flags)}

    reliability = np.clip(
        rng.normal(params.reliability_mean, params.reliability_spread, params.n_verifiers),
        0.5,
        1.0,
    )
    # Zipf activity over the reliability order: the most reliable verifiers
    # are also the busiest, mirroring the experienced-core participation
    # pattern of volunteer blacklists.
    order = np.argsort(-reliability, kind="stable")
    activity = np.empty(params.n_verifiers)
    activity[order] = 1.0 / (np.arange(params.n_verifiers) + 1.0)
    weights = activity / activity.sum()

    entries: List[VoteEntry] = []
    for i, uid in enumerate(url_ids):
        extra = int(rng.zipf(params.participation_exponent)) - 1
        k = min(params.min_votes + extra, params.n_verifiers, _MAX_VOTES_PER_URL)
        voters = rng.choice(params.n_verifiers, size=k, replace=False, p=weights)
        for ordinal, v in enumerate(voters, start=1):
            correct = rng.random() < reliability[v]
            if correct:
                verdict = truth[uid]
            else:
                verdict = NOT_PHISHING if truth[uid] == PHISHING else PHISHING
            entries.append(VoteEntry(uid, f"v{v:03d}", verdict, ordinal))

    return LabeledDataset(votes=VoteMatrix(tuple(entries)), truth=truth, params=params)
