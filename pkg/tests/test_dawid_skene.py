import random

import pytest

from veriphish.truthdiscovery import (
    EmptyInputError,
    SyntheticParams,
    VoteMatrix,
    dawid_skene,
    generate_synthetic,
    posterior_e_step,
)

P, N = "Phishing", "NotPhishing"
DIAG_08 = [[0.8, 0.2], [0.2, 0.8]]
IDENTITY = [[1.0, 0.0], [0.0, 1.0]]


def test_e_step_matches_hand_bayes():
    vm = VoteMatrix.from_rows([("u1", "a", P, 1), ("u1", "b", P, 2), ("u1", "c", P, 3)])
    confusions = {v: DIAG_08 for v in "abc"}
    post = posterior_e_step(vm, confusions, prior=0.5)
    # hand Bayes: 0.8^3 * 0.5 / (0.8^3 * 0.5 + 0.2^3 * 0.5)
    expect = 0.8**3 * 0.5 / (0.8**3 * 0.5 + 0.2**3 * 0.5)
    assert expect == pytest.approx(0.9846, abs=1e-4)
    assert post["u1"] == pytest.approx(expect, abs=1e-6)


def test_e_step_single_verifier_identity_confusion():
    vm = VoteMatrix.from_rows([("u1", "a", P, 1), ("u2", "a", N, 1)])
    post = posterior_e_step(vm, {"a": IDENTITY}, prior=0.5)
    assert post["u1"] == pytest.approx(1.0)
    assert post["u2"] == pytest.approx(0.0)


def test_empty_input_raises():
    with pytest.raises(EmptyInputError):
        dawid_skene(VoteMatrix(()))


def separable_dataset(seed=0):
    # every verifier votes on every URL, reliability 0.9
    rng = random.Random(seed)
    rows = []
    truth = {}
    for u in range(200):
        uid = f"u{u:03d}"
        truth[uid] = P if rng.random() < 0.5 else N
        for i in range(10):
            correct = rng.random() < 0.9
            verdict = truth[uid] if correct else (N if truth[uid] == P else P)
            rows.append((uid, f"w{i}", verdict, i + 1))
    return VoteMatrix.from_rows(rows), truth


def test_loglik_trace_non_decreasing():
    vm, _ = separable_dataset(1)
    _, _, trace = dawid_skene(vm, tol=1e-8, max_iter=60)
    assert len(trace) >= 2
    for a, b in zip(trace, trace[1:]):
        assert b >= a - 1e-9


def test_recovers_separable_truth():
    vm, truth = separable_dataset(2)
    posteriors, confusions, _ = dawid_skene(vm)
    predicted = {u: (P if p > 0.5 else N) for u, p in posteriors.items()}
    acc = sum(predicted[u] == truth[u] for u in truth) / len(truth)
    assert acc >= 0.99
    # confusion rows are stochastic
    for mat in confusions.values():
        assert mat[0][0] + mat[0][1] == pytest.approx(1.0, abs=1e-9)
        assert mat[1][0] + mat[1][1] == pytest.approx(1.0, abs=1e-9)


def test_recovers_on_skewed_synthetic():
    ds = generate_synthetic(SyntheticParams(n_urls=400, n_verifiers=25, reliability_mean=0.9, seed=7))
    posteriors, _, trace = dawid_skene(ds.votes)
    predicted = {u: (P if p > 0.5 else N) for u, p in posteriors.items()}
    acc = sum(predicted[u] == ds.truth[u] for u in ds.truth) / len(ds.truth)
    assert acc >= 0.9
    for a, b in zip(trace, trace[1:]):
        assert b >= a - 1e-9
