"""Rank-weighted URL scores and verifier skill points.

The phish score of a URL is the rank-weighted vote difference normalized by
the total rank of its voters:

    s = (sum of ranks voting Phishing - sum of ranks voting NotPhishing)
        / (sum of ranks of all voters)

so s is always in [-1, 1], s > 0 means Phishing, and the score is invariant
under uniform positive scaling of all ranks. URLs with fewer than
``min_votes`` (default 3) votes have no score yet.
"""
from __future__ import annotations

from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .votes import PHISHING, VoteMatrix

MIN_VOTES_FOR_SCORE = 3


class MissingRankError(KeyError):
    pass


def phish_score(
    ranks: Mapping[str, float],
    url_votes: Sequence[Tuple[str, str]],
    min_votes: int = MIN_VOTES_FOR_SCORE,
) -> Optional[float]:
    """Score one URL from its ordered (verifier_id, verdict) votes.

    Returns None while the URL has fewer than ``min_votes`` votes.
    """
    if len(url_votes) < min_votes:
        return None
    pos = 0.0
    total = 0.0
    for verifier, verdict in url_votes:
        if verifier not in ranks:
            raise MissingRankError(verifier)
        r = ranks[verifier]
        total += r
        if verdict == PHISHING:
            pos += r
        else:
            pos -= r
    return pos / total


def score_timeline(
    ranks: Mapping[str, float],
    url_votes: Sequence[Tuple[str, str]],
    min_votes: int = MIN_VOTES_FOR_SCORE,
) -> List[Tuple[int, Optional[float]]]:
    """Score after each successive vote, with ranks held fixed at their
    current values: entry k is the score over the first k votes (None while
    below the vote threshold).
    """
    return [
        (k, phish_score(ranks, url_votes[:k], min_votes))
        for k in range(1, len(url_votes) + 1)
    ]


def count_correct_votes(votes: VoteMatrix, final_labels: Mapping[str, str]) -> Dict[str, int]:
    """Per-verifier count of votes agreeing with the URL's current final
    label. Votes on URLs without a final label yet do not count either way.
    """
    correct: Dict[str, int] = {}
    for e in votes.entries:
        label = final_labels.get(e.url_id)
        if label is not None and e.verdict == label:
            correct[e.verifier_id] = correct.get(e.verifier_id, 0) + 1
    return correct


def skill_points(
    ranks: Mapping[str, float],
    votes_cast: Mapping[str, int],
    votes: VoteMatrix,
    final_labels: Mapping[str, str],
) -> Dict[str, int]:
    """Skill = round(100 * (normalized rank + labeling accuracy)), in 0..200.

    Rank is normalized by the maximum rank so the top verifier contributes a
    full 100 from reputation; accuracy is votes_correct / votes_cast (0 for
    verifiers who never voted). Monotone in both ingredients.
    """
    if not ranks:
        return {}
    max_rank = max(ranks.values())
    correct = count_correct_votes(votes, final_labels)
    skills: Dict[str, int] = {}
    for verifier, rank in ranks.items():
        cast = votes_cast.get(verifier, 0)
        acc = (correct.get(verifier, 0) / cast) if cast > 0 else 0.0
        rel_rank = rank / max_rank if max_rank > 0 else 0.0
        skills[verifier] = int(round(100.0 * (rel_rank + acc)))
    return skills
