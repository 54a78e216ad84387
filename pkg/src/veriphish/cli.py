"""Command-line interface.

Exit code contract: 0 success, 1 domain rejection (API rejections, safety or
liveness expectations not met, unreachable node), 2 usage or configuration
errors.
"""
from __future__ import annotations

import json
import sys
import threading
import time
from pathlib import Path
from typing import List, Optional

import click
import httpx
import uvicorn

from .consensus import ScenarioInvalidError, load_scenario, run_simulation
from .ledger import url_id as compute_url_id, MalformedUrlError
from .node import ConfigError, HttpTransport, LocalCluster, Node, build_app, load_config
from .truthdiscovery import (
    ALGORITHMS,
    BenchSpec,
    InvalidParamsError,
    SyntheticParams,
    run_bench,
)

DEFAULT_API = "http://127.0.0.1:8545"


@click.group()
def main():
    """Decentralized phishing-URL blacklist node and tooling."""


# --------------------------------------------------------------------- node

def _serve(app, host: str, port: int) -> uvicorn.Server:
    config = uvicorn.Config(app, host=host, port=port, log_level="warning")
    return uvicorn.Server(config)


@main.command("node")
@click.option("--config", "config_path", type=click.Path(), help="node config JSON")
@click.option("--local-cluster", "cluster_n", type=int, default=None, help="run N validators in-process")
@click.option("--base-port", type=int, default=8545, show_default=True)
@click.option("--data-dir", type=click.Path(), default=None)
@click.option("--dashboard-dir", type=click.Path(), default=None, help="static dashboard bundle to serve at /dashboard")
def cmd_node(config_path: Optional[str], cluster_n: Optional[int], base_port: int,
             data_dir: Optional[str], dashboard_dir: Optional[str]):
    """Run a node (or an in-process validator cluster)."""
    if cluster_n is not None:
        if cluster_n < 1:
            click.echo("--local-cluster must be >= 1", err=True)
            sys.exit(2)
        cluster = LocalCluster(cluster_n, data_dir=data_dir, dashboard_dir=dashboard_dir)
        servers = []
        for i, node in enumerate(cluster.nodes):
            server = _serve(build_app(node), "127.0.0.1", base_port + i)
            threading.Thread(target=server.run, daemon=True).start()
            servers.append(server)
            click.echo(f"{node.config.node_id} listening on http://127.0.0.1:{base_port + i}")

        def pump_loop():
            while True:
                cluster.pump()
                time.sleep(0.005)

        threading.Thread(target=pump_loop, daemon=True).start()
        try:
            while True:
                time.sleep(1)
        except KeyboardInterrupt:
            pass
        return

    if config_path is None:
        click.echo("either --config or --local-cluster is required", err=True)
        sys.exit(2)
    try:
        config = load_config(config_path)
        node = Node(config)
    except (ConfigError, OSError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    transport = HttpTransport(node, config.peer_addresses)
    transport.start()
    click.echo(f"{config.node_id} ({config.role}) listening on http://{config.listen_address}")
    _serve(build_app(node), config.host, config.port).run()


# ---------------------------------------------------------------------- sim

@main.command("sim")
@click.option("--scenario", "scenario_path", type=click.Path(), required=True)
def cmd_sim(scenario_path: str):
    """Run a consensus fault scenario and print the JSON report."""
    try:
        scenario = load_scenario(scenario_path)
    except ScenarioInvalidError as exc:
        click.echo(f"scenario error: {exc}", err=True)
        sys.exit(2)
    report = run_simulation(scenario)
    click.echo(report.to_json())
    ok = report.agreement_ok and report.stalled == scenario.expect_stalled
    sys.exit(0 if ok else 1)


# -------------------------------------------------------------------- bench

def _parse_int_list(raw: str) -> List[int]:
    return [int(s) for s in raw.split(",") if s.strip()]


@main.command("bench")
@click.option("--spec", "spec_path", type=click.Path(), default=None, help="BenchSpec JSON file")
@click.option("--urls", type=int, default=2000, show_default=True)
@click.option("--verifiers", type=int, default=50, show_default=True)
@click.option("--phish-fraction", type=float, default=0.5, show_default=True)
@click.option("--reliability-mean", type=float, default=0.8, show_default=True)
@click.option("--reliability-spread", type=float, default=0.1, show_default=True)
@click.option("--exponent", type=float, default=2.0, show_default=True)
@click.option("--min-votes", type=int, default=3, show_default=True)
@click.option("--algorithms", default=",".join(ALGORITHMS), show_default=True)
@click.option("--seeds", default="1,2,3,4,5,6,7,8,9,10", show_default=True)
@click.option("--seed", type=int, default=None, help="shortcut for a single-seed run")
@click.option("--json", "as_json", is_flag=True)
def cmd_bench(spec_path, urls, verifiers, phish_fraction, reliability_mean,
              reliability_spread, exponent, min_votes, algorithms, seeds, seed, as_json):
    """Benchmark label-aggregation algorithms on synthetic datasets."""
    try:
        if spec_path is not None:
            doc = json.loads(Path(spec_path).read_text(encoding="utf-8"))
            spec = BenchSpec(
                params=SyntheticParams(**doc["params"]),
                algorithms=tuple(doc.get("algorithms", ALGORITHMS)),
                seeds=tuple(doc.get("seeds", range(1, 11))),
            )
        else:
            spec = BenchSpec(
                params=SyntheticParams(
                    n_urls=urls,
                    n_verifiers=verifiers,
                    phish_fraction=phish_fraction,
                    reliability_mean=reliability_mean,
                    reliability_spread=reliability_spread,
                    participation_exponent=exponent,
                    min_votes=min_votes,
                ),
                algorithms=tuple(a.strip() for a in algorithms.split(",") if a.strip()),
                seeds=(seed,) if seed is not None else tuple(_parse_int_list(seeds)),
            )
        result = run_bench(spec)
    except (InvalidParamsError, KeyError, ValueError, OSError) as exc:
        click.echo(f"bench error: {exc}", err=True)
        sys.exit(2)
    if as_json:
        click.echo(json.dumps(result.to_doc(), sort_keys=True, indent=2))
    else:
        click.echo(result.render_table())


# ------------------------------------------------------------- thin client

def _client(api: str) -> httpx.Client:
    return httpx.Client(base_url=api, timeout=30.0)


def _write_request(api: str, method: str, path: str, body: dict) -> None:
    try:
        with _client(api) as client:
            resp = client.request(method, path, json=body)
    except httpx.HTTPError as exc:
        click.echo(f"connection error: {exc}", err=True)
        sys.exit(1)
    doc = resp.json()
    if resp.status_code != 200:
        click.echo(doc.get("error", "rejected"))
        sys.exit(1)
    click.echo(f"tx {doc['tx_id']} accepted" + (" (committed)" if doc.get("committed") else ""))


def _resolve_url_ref(ref: str) -> str:
    if len(ref) == 64 and all(c in "0123456789abcdef" for c in ref):
        return ref
    try:
        return compute_url_id(ref)
    except MalformedUrlError:
        return ref


@main.command("register")
@click.option("--api", default=DEFAULT_API, show_default=True)
@click.option("--id", "verifier_id", required=True)
@click.option("--name", "display_name", required=True)
def cmd_register(api, verifier_id, display_name):
    """Register a verifier account."""
    _write_request(api, "POST", "/api/v1/users", {"verifier_id": verifier_id, "display_name": display_name})


@main.command("submit")
@click.option("--api", default=DEFAULT_API, show_default=True)
@click.option("--sender", required=True)
@click.option("--url", required=True)
@click.option("--evidence", required=True, help="email body text referring to the URL")
def cmd_submit(api, sender, url, evidence):
    """Submit a suspicious URL with its evidence email."""
    _write_request(api, "POST", "/api/v1/urls", {"sender": sender, "url": url, "evidence_email": evidence})


@main.command("vote")
@click.option("--api", default=DEFAULT_API, show_default=True)
@click.option("--sender", required=True)
@click.option("--url-id", "url_ref", required=True, help="url_id or raw URL")
@click.argument("verdict", type=click.Choice(["Phishing", "NotPhishing"]))
def cmd_vote(api, sender, url_ref, verdict):
    """Cast a verdict on a URL."""
    uid = _resolve_url_ref(url_ref)
    _write_request(api, "POST", f"/api/v1/urls/{uid}/votes", {"sender": sender, "verdict": verdict})


@main.command("lookup")
@click.option("--api", default=DEFAULT_API, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.argument("url_ref")
def cmd_lookup(api, as_json, url_ref):
    """Look up a URL's record, score and timeline."""
    uid = _resolve_url_ref(url_ref)
    try:
        with _client(api) as client:
            resp = client.get(f"/api/v1/urls/{uid}")
    except httpx.HTTPError as exc:
        click.echo(f"connection error: {exc}", err=True)
        sys.exit(1)
    if resp.status_code != 200:
        click.echo(resp.json().get("error", "NotFound"))
        sys.exit(1)
    view = resp.json()
    if as_json:
        click.echo(json.dumps(view, sort_keys=True, indent=2))
        return
    click.echo(f"url:     {view['url']}")
    click.echo(f"url_id:  {view['url_id']}")
    click.echo(f"status:  {view['status']}")
    score = view["phish_score"]
    click.echo(f"score:   {'-' if score is None else f'{score:.4f}'}")
    click.echo(f"votes ({len(view['votes'])}):")
    for v in view["votes"]:
        click.echo(f"  #{v['ordinal']} {v['verifier_id']}: {v['verdict']} (skill {v['skill_points']})")
    points = ", ".join(
        f"{p['ordinal']}:{'-' if p['score'] is None else format(p['score'], '.4f')}"
        for p in view["timeline"]
    )
    click.echo(f"timeline: {points}")


if __name__ == "__main__":
    main()
