"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line. Run with ``pytest tests/test_acceptance.py -v -s``.
"""
import random
import time
from dataclasses import replace

import numpy as np
import pytest
from fastapi.testclient import TestClient

from veriphish.consensus import FaultSpec, Scenario, run_simulation
from veriphish.consensus.workloads import standard_workload
from veriphish.ledger import url_id
from veriphish.node import LocalCluster, Node, NodeConfig, build_app
from veriphish.truthdiscovery import (
    VerifierGraph,
    VoteMatrix,
    dawid_skene,
    default_bench_spec,
    expected_loglik,
    expected_loglik_grad,
    generate_synthetic,
    pagerank,
    posterior_e_step,
    run_bench,
    skill_points,
)

P, N = "Phishing", "NotPhishing"


def report(criterion: str, ok: bool):
    print(f"\nACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'}")
    assert ok


# ----------------------------------------------------------------- criterion 1

def test_criterion_1_consensus_safety_sweep():
    """100 seeded n=7 scenarios with up to 2 byzantine or crashed validators:
    honest nodes never commit different hashes at a height."""
    started = time.monotonic()
    ok = True
    for seed in range(100):
        kind = seed % 4
        if kind == 0:
            faults = [FaultSpec(node="v1", behavior="equivocate"),
                      FaultSpec(node="v4", behavior="equivocate")]
        elif kind == 1:
            faults = [FaultSpec(node="v0", behavior="crash", at_time=(seed * 37) % 2000),
                      FaultSpec(node="v3", behavior="crash", at_time=(seed * 91) % 3000)]
        elif kind == 2:
            faults = [FaultSpec(node="v2", behavior="equivocate"),
                      FaultSpec(node="v5", behavior="crash", at_time=(seed * 53) % 2500)]
        else:
            faults = [FaultSpec(node="v6", behavior="mute"),
                      FaultSpec(node="v1", behavior="equivocate")]
        scenario = Scenario(
            seed=seed, n_validators=7, n_normal=1, faults=faults,
            workload=standard_workload(n_users=3, n_urls=2, n_votes=4, seed=seed),
            max_time=60000,
        )
        rep = run_simulation(scenario)
        if not rep.agreement_ok:
            ok = False
    elapsed = time.monotonic() - started
    report("1 consensus-safety (100 scenarios, "
           f"{elapsed:.1f}s < 60s)", ok and elapsed < 60)


# ----------------------------------------------------------------- criterion 2

def test_criterion_2_consensus_liveness():
    started = time.monotonic()
    two_down = Scenario(
        seed=202, n_validators=7,
        faults=[FaultSpec(node="v0", behavior="crash", at_time=0),
                FaultSpec(node="v4", behavior="crash", at_time=600)],
        workload=standard_workload(n_users=3, n_urls=2, n_votes=5, seed=202),
        max_time=60000,
    )
    rep2 = run_simulation(two_down)
    live = [s for nid, s in rep2.per_node.items() if nid not in ("v0", "v4")]
    all_committed = all(s.missing_tx_count == 0 for s in live)

    three_down = Scenario(
        seed=203, n_validators=7, fault_budget=3,
        faults=[FaultSpec(node=f"v{i}", behavior="crash", at_time=0) for i in range(3)],
        workload=standard_workload(n_users=3, n_urls=2, n_votes=5, seed=203),
        max_time=20000, expect_stalled=True,
    )
    rep3 = run_simulation(three_down)
    elapsed = time.monotonic() - started
    ok = all_committed and not rep2.stalled and rep3.stalled and elapsed < 10
    report(f"2 consensus-liveness ({elapsed:.1f}s < 10s)", ok)


# ----------------------------------------------------------------- criterion 3

def test_criterion_3_replica_determinism(tmp_path):
    started = time.monotonic()
    cluster = LocalCluster(7, data_dir=str(tmp_path))
    users = [f"user{i}" for i in range(8)]
    urls = [f"https://phish{i}.example/login" for i in range(6)]
    count = 0
    for i, u in enumerate(users):
        _, err = cluster.register(i % 7, u, u.title())
        assert err is None
        count += 1
    for i, url in enumerate(urls):
        _, err = cluster.submit_url(i % 7, users[i % len(users)], url, f"mail with {url}")
        assert err is None
        count += 1
    for i, url in enumerate(urls):
        for j, voter in enumerate(users):
            if count >= 50:
                break
            verdict = "Phishing" if (i + j) % 3 else "NotPhishing"
            _, err = cluster.vote((i + j) % 7, voter, url_id(url), verdict)
            assert err is None
            count += 1
    assert count == 50

    digests = {n.status_view()["state_digest"] for n in cluster.nodes}
    clients = [TestClient(build_app(n)) for n in cluster.nodes]
    blacklists = {c.get("/api/v1/blacklist").content for c in clients}

    replayed = Node(cluster[0].config)
    replay_ok = replayed.status_view()["state_digest"] == cluster[0].status_view()["state_digest"]
    elapsed = time.monotonic() - started
    ok = len(digests) == 1 and len(blacklists) == 1 and replay_ok and elapsed < 30
    report(f"3 replica-determinism (50 txs, 7 nodes, {elapsed:.1f}s < 30s)", ok)


# ----------------------------------------------------------------- criterion 4

def test_criterion_4_pagerank_correctness():
    # analytic fixed point of the two-node single-edge graph
    d = 0.85
    mat = np.array([[1.0, -d / 2], [-d, 1.0 - d / 2]])
    vec = np.array([(1 - d) / 2, (1 - d) / 2])
    expect_a, expect_b = np.linalg.solve(mat, vec)
    rv = pagerank(VerifierGraph(frozenset({"A", "B"}), {("A", "B"): 1}))
    two_node_ok = abs(rv.ranks["A"] - expect_a) < 1e-6 and abs(rv.ranks["B"] - expect_b) < 1e-6

    rng = random.Random(404)
    sums_ok = True
    for _ in range(50):
        nodes = [f"n{i}" for i in range(rng.randrange(1, 30))]
        edges = {}
        for _ in range(rng.randrange(0, 80)):
            u, v = rng.sample(nodes, 2) if len(nodes) > 1 else (nodes[0], nodes[0])
            if u != v:
                edges[(u, v)] = edges.get((u, v), 0) + 1
        res = pagerank(VerifierGraph(frozenset(nodes), edges))
        if abs(sum(res.ranks.values()) - 1.0) > 1e-9 or not res.converged:
            sums_ok = False

    ring = ["A", "B", "C", "D", "E"]
    ring_edges = {(ring[i], ring[(i + 1) % 5]): 1 for i in range(5)}
    res = pagerank(VerifierGraph(frozenset(ring), ring_edges))
    symmetric_ok = max(res.ranks.values()) - min(res.ranks.values()) < 1e-9

    report("4 pagerank-correctness", two_node_ok and sums_ok and symmetric_ok)


# ----------------------------------------------------------------- criterion 5

def test_criterion_5_truth_discovery_benchmark():
    started = time.monotonic()
    result = run_bench(default_bench_spec())
    means = {a: result.mean(a, "accuracy") for a in ("pagerank", "em", "glad", "majority")}
    elapsed = time.monotonic() - started
    ok = (
        all(means[a] >= 0.90 for a in ("pagerank", "em", "glad"))
        and means["pagerank"] >= means["majority"]
        and elapsed < 60
    )
    print("\n" + result.render_table())
    report(f"5 truth-discovery-benchmark ({elapsed:.1f}s < 60s)", ok)


# ----------------------------------------------------------------- criterion 6

def test_criterion_6_dawid_skene():
    spec = default_bench_spec()
    monotone = True
    for seed in spec.seeds:
        ds = generate_synthetic(replace(spec.params, seed=seed))
        _, _, trace = dawid_skene(ds.votes)
        if any(b < a - 1e-9 for a, b in zip(trace, trace[1:])):
            monotone = False

    vm = VoteMatrix.from_rows([("u1", "a", P, 1), ("u1", "b", P, 2), ("u1", "c", P, 3)])
    confusions = {v: [[0.8, 0.2], [0.2, 0.8]] for v in "abc"}
    post = posterior_e_step(vm, confusions, prior=0.5)
    hand_bayes = 0.8**3 * 0.5 / (0.8**3 * 0.5 + 0.2**3 * 0.5)
    e_step_ok = abs(post["u1"] - hand_bayes) < 1e-6 and abs(hand_bayes - 0.9846) < 1e-4

    report("6 dawid-skene (monotone trace + hand Bayes)", monotone and e_step_ok)


# ----------------------------------------------------------------- criterion 7

def test_criterion_7_glad_gradient_check():
    h = 1e-5
    rng = random.Random(707)
    worst = 0.0
    for _ in range(10):
        rows = []
        for u in ("u1", "u2", "u3", "u4"):
            for i, v in enumerate(("a", "b", "c"), start=1):
                rows.append((u, v, rng.choice([P, N]), i))
        vm = VoteMatrix.from_rows(rows)
        alpha = {v: rng.uniform(-2, 2) for v in ("a", "b", "c")}
        beta = {u: rng.uniform(-1, 1) for u in ("u1", "u2", "u3", "u4")}
        q = {u: rng.uniform(0.05, 0.95) for u in ("u1", "u2", "u3", "u4")}
        g_alpha, g_beta = expected_loglik_grad(alpha, beta, vm, q)
        for name, grads in (("alpha", g_alpha), ("beta", g_beta)):
            for key, g in grads.items():
                up_a, dn_a = dict(alpha), dict(alpha)
                up_b, dn_b = dict(beta), dict(beta)
                if name == "alpha":
                    up_a[key] += h
                    dn_a[key] -= h
                else:
                    up_b[key] += h
                    dn_b[key] -= h
                fd = (expected_loglik(up_a, up_b, vm, q) - expected_loglik(dn_a, dn_b, vm, q)) / (2 * h)
                worst = max(worst, abs(fd - g) / max(abs(fd), abs(g), 1e-8))
    report(f"7 glad-gradient-check (max rel err {worst:.2e} < 1e-4)", worst < 1e-4)


# ----------------------------------------------------------------- criterion 8

def test_criterion_8_score_semantics_end_to_end(tmp_path):
    config = NodeConfig(node_id="v0", role="Validator", data_dir=str(tmp_path / "v0"), validators=["v0"])
    node = Node(config)
    client = TestClient(build_app(node))

    for name in ("alice", "bob", "carol", "dave"):
        assert client.post("/api/v1/users", json={"verifier_id": name, "display_name": name.title()}).status_code == 200

    def submit(sender, url):
        r = client.post("/api/v1/urls", json={"sender": sender, "url": url, "evidence_email": f"mail {url}"})
        assert r.status_code == 200, r.text

    def vote(sender, url, verdict):
        r = client.post(f"/api/v1/urls/{url_id(url)}/votes", json={"sender": sender, "verdict": verdict})
        assert r.status_code == 200, r.text

    # helper URL voted D,C,B,A plus target voted A,B,C,D covers every ordered
    # verifier pair once: a uniform complete digraph, hence exactly equal ranks
    helper, target = "https://benign.example/home", "https://phish.example/steal"
    submit("alice", helper)
    submit("alice", target)
    for sender in ("dave", "carol", "bob", "alice"):
        vote(sender, helper, "NotPhishing")

    vote("alice", target, "Phishing")
    vote("bob", target, "Phishing")
    view = client.get(f"/api/v1/urls/{url_id(target)}").json()
    two_votes_ok = view["status"] == "Unverified" and view["phish_score"] is None

    vote("carol", target, "Phishing")
    view = client.get(f"/api/v1/urls/{url_id(target)}").json()
    three_votes_ok = view["phish_score"] == 1.0 and view["status"] == "Phishing"

    vote("dave", target, "NotPhishing")
    view = client.get(f"/api/v1/urls/{url_id(target)}").json()
    four_votes_ok = view["phish_score"] == 0.5 and view["status"] == "Phishing"
    timeline = client.get(f"/api/v1/urls/{url_id(target)}/timeline").json()["timeline"]
    timeline_ok = [(p["ordinal"], p["score"]) for p in timeline] == [(1, None), (2, None), (3, 1.0), (4, 0.5)]

    # symmetric second pair: a 2/2 split scores exactly 0 -> NotPhishing
    split, noise = "https://maybe.example/a", "https://noise.example/b"
    submit("bob", split)
    submit("bob", noise)
    for sender in ("dave", "carol", "bob", "alice"):
        vote(sender, noise, "NotPhishing")
    for sender, verdict in (("alice", P), ("bob", P), ("carol", N), ("dave", N)):
        vote(sender, split, verdict)
    split_view = client.get(f"/api/v1/urls/{url_id(split)}").json()
    zero_ok = split_view["phish_score"] == 0.0 and split_view["status"] == "NotPhishing"

    blacklist = client.get("/api/v1/blacklist").json()
    blacklist_ok = [e["url"] for e in blacklist] == [target]

    report(
        "8 score-semantics-end-to-end",
        two_votes_ok and three_votes_ok and four_votes_ok and timeline_ok and zero_ok and blacklist_ok,
    )


# ----------------------------------------------------------------- criterion 9

def test_criterion_9_skill_point_monotonicity_and_extremes():
    ranks = {"v": 0.4, "top": 0.6}
    cast = {"v": 10, "top": 0}
    prev = -1
    monotone = True
    for n_correct in range(11):
        labels = {f"u{i}": (P if i < n_correct else N) for i in range(10)}
        votes = VoteMatrix.from_rows([(f"u{i}", "v", P, 1) for i in range(10)])
        skill = skill_points(ranks, cast, votes, labels)["v"]
        if skill < prev:
            monotone = False
        prev = skill

    votes = VoteMatrix.from_rows([("u0", "top", P, 1), ("u0", "v", P, 2), ("u0", "w", P, 3)])
    maxed = skill_points({"top": 0.6, "v": 0.25, "w": 0.15}, {"top": 1, "v": 1, "w": 1}, votes, {"u0": P})
    max_ok = maxed["top"] == 200

    floored = skill_points({"tiny": 0.004, "big": 0.996}, {}, VoteMatrix(()), {})
    min_ok = floored["tiny"] == 0

    report("9 skill-point-monotonicity-and-extremes", monotone and max_ok and min_ok)
