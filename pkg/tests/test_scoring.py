import random

import pytest

from veriphish.truthdiscovery import (
    MissingRankError,
    VoteMatrix,
    count_correct_votes,
    phish_score,
    score_timeline,
    skill_points,
)

P, N = "Phishing", "NotPhishing"


def test_fewer_than_three_votes_has_no_score():
    ranks = {"a": 0.5, "b": 0.5}
    assert phish_score(ranks, [("a", P), ("b", P)]) is None
    assert phish_score(ranks, []) is None


def test_unanimous_phishing_scores_one():
    ranks = {"a": 0.7, "b": 0.2, "c": 0.1}
    assert phish_score(ranks, [("a", P), ("b", P), ("c", P)]) == pytest.approx(1.0)


def test_even_split_equal_ranks_scores_zero():
    ranks = {v: 0.25 for v in "abcd"}
    votes = [("a", P), ("b", P), ("c", N), ("d", N)]
    assert phish_score(ranks, votes) == pytest.approx(0.0)


def test_hand_arithmetic_example():
    ranks = {"a": 0.40, "b": 0.25, "c": 0.20, "d": 0.15}
    votes = [("a", P), ("b", P), ("c", N), ("d", N)]
    # (0.40 + 0.25 - 0.20 - 0.15) / 1.00
    assert phish_score(ranks, votes) == pytest.approx(0.30)


def test_missing_rank_raises():
    with pytest.raises(MissingRankError):
        phish_score({"a": 1.0}, [("a", P), ("b", P), ("c", P)])


def test_score_bounds_and_vote_monotonicity():
    rng = random.Random(5)
    for _ in range(100):
        k = rng.randrange(3, 10)
        ranks = {f"v{i}": rng.uniform(0.01, 1.0) for i in range(k + 2)}
        votes = [(f"v{i}", rng.choice([P, N])) for i in range(k)]
        s = phish_score(ranks, votes)
        assert -1.0 <= s <= 1.0
        up = phish_score(ranks, votes + [(f"v{k}", P)])
        down = phish_score(ranks, votes + [(f"v{k}", N)])
        assert up > s - 1e-12 and up > down
        assert down < s + 1e-12


def test_score_invariant_under_rank_scaling():
    rng = random.Random(6)
    ranks = {f"v{i}": rng.uniform(0.01, 1.0) for i in range(6)}
    votes = [(f"v{i}", P if i % 2 else N) for i in range(6)]
    base = phish_score(ranks, votes)
    for factor in (0.001, 7.5, 1e6):
        scaled = {k: v * factor for k, v in ranks.items()}
        assert phish_score(scaled, votes) == pytest.approx(base, abs=1e-12)


def test_timeline_equal_ranks():
    ranks = {v: 0.25 for v in "abcd"}
    votes = [("a", P), ("b", P), ("c", P), ("d", N)]
    tl = score_timeline(ranks, votes)
    assert tl[0] == (1, None)
    assert tl[1] == (2, None)
    assert tl[2][0] == 3 and tl[2][1] == pytest.approx(1.0)
    assert tl[3][0] == 4 and tl[3][1] == pytest.approx(0.5)


def test_timeline_final_third():
    ranks = {v: 1 / 3 for v in "abc"}
    tl = score_timeline(ranks, [("a", P), ("b", P), ("c", N)])
    assert tl[-1][1] == pytest.approx(1 / 3)


def test_timeline_all_insufficient_below_threshold():
    ranks = {"a": 0.5, "b": 0.5}
    tl = score_timeline(ranks, [("a", P), ("b", N)])
    assert tl == [(1, None), (2, None)]


# ---------------------------------------------------------------- skill points

def test_skill_maximum_200():
    votes = VoteMatrix.from_rows([("u1", "top", P, 1), ("u1", "x", P, 2), ("u1", "y", P, 3)])
    ranks = {"top": 0.6, "x": 0.25, "y": 0.15}
    cast = {"top": 1, "x": 1, "y": 1}
    skills = skill_points(ranks, cast, votes, {"u1": P})
    assert skills["top"] == 200


def test_skill_zero_votes_uses_rank_only():
    votes = VoteMatrix(())
    skills = skill_points({"a": 0.5, "b": 1.0}, {}, votes, {})
    assert skills["a"] == 50
    assert skills["b"] == 100


def test_skill_formula_arithmetic():
    votes = VoteMatrix.from_rows([("u1", "v", P, 1)])
    skills = skill_points({"v": 0.53, "best": 1.0}, {"v": 1, "best": 0}, votes, {"u1": P})
    assert skills["v"] == 153


def test_skill_monotone_in_correct_votes():
    votes_base = [("u%d" % i, "v", P, 1) for i in range(10)]
    ranks = {"v": 0.4, "best": 1.0}
    cast = {"v": 10, "best": 0}
    prev = -1
    for n_correct in range(11):
        labels = {("u%d" % i): (P if i < n_correct else N) for i in range(10)}
        skills = skill_points(ranks, cast, VoteMatrix.from_rows(votes_base), labels)
        assert skills["v"] >= prev
        prev = skills["v"]
    assert prev == 140  # 100*(0.4 + 1.0)


def test_skill_minimum_zero():
    votes = VoteMatrix(())
    skills = skill_points({"tiny": 0.004, "big": 0.996}, {}, votes, {})
    assert skills["tiny"] == 0


def test_count_correct_votes_ignores_unscored():
    votes = VoteMatrix.from_rows([("u1", "a", P, 1), ("u2", "a", N, 1), ("u3", "a", P, 1)])
    correct = count_correct_votes(votes, {"u1": P, "u2": P})
    assert correct == {"a": 1}
