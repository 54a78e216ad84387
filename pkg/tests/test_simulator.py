from pathlib import Path

import pytest

from veriphish.consensus import (
    FaultSpec,
    Scenario,
    ScenarioInvalidError,
    load_scenario,
    run_simulation,
    scenario_from_doc,
)
from veriphish.consensus.workloads import standard_workload

SCENARIOS = Path(__file__).parent.parent / "scenarios"


def small_scenario(seed=1, **kw):
    defaults = dict(
        seed=seed,
        n_validators=7,
        workload=standard_workload(n_users=3, n_urls=2, n_votes=4, seed=seed),
        max_time=30000,
    )
    defaults.update(kw)
    return Scenario(**defaults)


def test_identical_scenarios_identical_reports():
    sc = small_scenario(seed=5)
    a = run_simulation(sc)
    b = run_simulation(sc)
    assert a.to_json() == b.to_json()
    c = run_simulation(small_scenario(seed=6))
    assert c.to_json() != a.to_json()


def test_no_faults_all_chains_identical():
    rep = run_simulation(small_scenario(seed=7, n_normal=2))
    assert rep.agreement_ok and not rep.stalled
    digests = {s.state_digest for s in rep.per_node.values()}
    chains = {tuple(s.chain) for s in rep.per_node.values()}
    assert len(digests) == 1
    assert len(chains) == 1
    assert all(s.missing_tx_count == 0 for s in rep.per_node.values())


def test_two_crashes_still_live():
    sc = small_scenario(
        seed=8,
        faults=[FaultSpec(node="v0", behavior="crash", at_time=0),
                FaultSpec(node="v3", behavior="crash", at_time=700)],
        max_time=60000,
    )
    rep = run_simulation(sc)
    assert rep.agreement_ok and not rep.stalled
    live = [s for nid, s in rep.per_node.items() if nid not in ("v0", "v3")]
    assert all(s.missing_tx_count == 0 for s in live)


def test_three_crashes_stall_without_pre_fault_progress():
    sc = small_scenario(
        seed=9,
        fault_budget=3,
        expect_stalled=True,
        faults=[FaultSpec(node=f"v{i}", behavior="crash", at_time=0) for i in range(3)],
    )
    rep = run_simulation(sc)
    assert rep.stalled and rep.agreement_ok
    assert all(s.height == 0 for s in rep.per_node.values())


def test_crashed_node_chain_is_prefix():
    sc = small_scenario(
        seed=10,
        faults=[FaultSpec(node="v2", behavior="crash", at_time=1500)],
        max_time=60000,
    )
    rep = run_simulation(sc)
    assert rep.agreement_ok
    full = rep.per_node["v0"].chain
    fallen = rep.per_node["v2"].chain
    assert fallen == full[: len(fallen)]


def test_normal_nodes_are_prefixes_and_silent():
    rep = run_simulation(small_scenario(seed=11, n_normal=3))
    validator_chain = rep.per_node["v0"].chain
    for nid in ("n0", "n1", "n2"):
        chain = rep.per_node[nid].chain
        assert chain == validator_chain[: len(chain)]


def test_equivocators_cannot_split_honest_nodes():
    for seed in range(12, 22):
        sc = small_scenario(
            seed=seed,
            faults=[FaultSpec(node="v1", behavior="equivocate"),
                    FaultSpec(node="v5", behavior="equivocate")],
            max_time=60000,
        )
        rep = run_simulation(sc)
        assert rep.agreement_ok, f"seed {seed} violated agreement"


def test_mute_fault_is_tolerated():
    sc = small_scenario(seed=30, faults=[FaultSpec(node="v2", behavior="mute")], max_time=60000)
    rep = run_simulation(sc)
    assert rep.agreement_ok
    honest_live = [s for nid, s in rep.per_node.items() if nid != "v2"]
    assert all(s.missing_tx_count == 0 for s in honest_live)


def test_partition_blocks_cross_traffic_then_heals():
    sc = small_scenario(
        seed=31,
        partitions=[dict(from_time=0, to_time=4000, group_a=["v0", "v1", "v2"], group_b=["v3", "v4", "v5", "v6"])],
        max_time=90000,
    )
    rep = run_simulation(sc)
    assert rep.agreement_ok and not rep.stalled
    assert rep.message_counts["dropped"] > 0


def test_round_change_convergence_bound_crash_only():
    # v1 leads height 1; crashing it forces a round change, and in crash-only
    # runs every height must commit within f+1 round changes (f=2 for n=7)
    sc = small_scenario(
        seed=33,
        faults=[FaultSpec(node="v1", behavior="crash", at_time=0)],
        max_time=90000,
    )
    rep = run_simulation(sc)
    assert rep.agreement_ok and not rep.stalled
    committed = rep.blocks_by_node["v0"][1:]
    assert committed, "nothing committed"
    assert all(b.round <= 3 for b in committed)
    assert committed[0].proposer != "v1"


def test_scenario_validation():
    with pytest.raises(ScenarioInvalidError):
        scenario_from_doc({"seed": 1})  # missing required fields
    with pytest.raises(ScenarioInvalidError):
        scenario_from_doc(
            {"seed": 1, "n_validators": 7, "max_time": 1000,
             "faults": [{"node": "v0", "behavior": "melt"}]}
        )
    # three faults exceed the default budget of floor((7-1)/3) = 2
    with pytest.raises(ScenarioInvalidError):
        scenario_from_doc(
            {"seed": 1, "n_validators": 7, "max_time": 1000,
             "faults": [{"node": f"v{i}", "behavior": "crash"} for i in range(3)]}
        )
    with pytest.raises(ScenarioInvalidError):
        scenario_from_doc(
            {"seed": 1, "n_validators": 4, "max_time": 1000,
             "faults": [{"node": "v9", "behavior": "crash"}]}
        )


def test_bundled_scenarios_run_clean():
    for path in sorted(SCENARIOS.glob("*.json")):
        sc = load_scenario(path)
        rep = run_simulation(sc)
        assert rep.agreement_ok, path.name
        assert rep.stalled == sc.expect_stalled, path.name


def test_load_scenario_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ScenarioInvalidError):
        load_scenario(bad)
