"""HTTP surface of a node."""
from __future__ import annotations

from pathlib import Path
from typing import List, Optional

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from ..consensus import message_from_doc, propose_request_from_doc
from ..ledger import Verdict
from .runtime import Node


class RegisterRequest(BaseModel):
    verifier_id: str
    display_name: str


class SubmitUrlRequest(BaseModel):
    sender: str
    url: str
    evidence_email: str


class CastVoteRequest(BaseModel):
    sender: str
    verdict: Verdict


class WriteResponse(BaseModel):
    tx_id: str
    accepted: bool
    committed: bool


class VoteView(BaseModel):
    verifier_id: str
    verdict: str
    ordinal: int
    block_height: int
    rank: float
    skill_points: int


class TimelinePoint(BaseModel):
    ordinal: int
    score: Optional[float]


class UrlView(BaseModel):
    url_id: str
    url: str
    submitter: str
    evidence_email: str
    status: str
    phish_score: Optional[float]
    first_block_height: int
    votes: List[VoteView]
    timeline: List[TimelinePoint]


class TimelineView(BaseModel):
    url_id: str
    timeline: List[TimelinePoint]


class GraphNode(BaseModel):
    id: str
    rank: float
    skill_points: int


class GraphEdge(BaseModel):
    model_config = ConfigDict(populate_by_name=True)
    from_: str = Field(alias="from")
    to: str
    weight: int


class GraphView(BaseModel):
    nodes: List[GraphNode]
    edges: List[GraphEdge]


class BlacklistEntry(BaseModel):
    url: str
    phish_score: float


class VerifierView(BaseModel):
    verifier_id: str
    display_name: str
    rank: float
    skill_points: int
    votes_cast: int
    votes_correct: int


def _rejected(reason: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"error": reason})


def _not_found() -> JSONResponse:
    return JSONResponse(status_code=404, content={"error": "NotFound"})


def build_app(node: Node) -> FastAPI:
    app = FastAPI(title="veriphish node", version="0.1.0")

    @app.post("/api/v1/users", response_model=WriteResponse)
    def register_user(req: RegisterRequest):
        tid, err, committed = node.submit_register(req.verifier_id, req.display_name)
        if err is not None:
            return _rejected(err)
        return WriteResponse(tx_id=tid, accepted=True, committed=committed)

    @app.post("/api/v1/urls", response_model=WriteResponse)
    def submit_url(req: SubmitUrlRequest):
        tid, err, committed = node.submit_url(req.sender, req.url, req.evidence_email)
        if err is not None:
            return _rejected(err)
        return WriteResponse(tx_id=tid, accepted=True, committed=committed)

    @app.post("/api/v1/urls/{url_id}/votes", response_model=WriteResponse)
    def cast_vote(url_id: str, req: CastVoteRequest):
        tid, err, committed = node.submit_vote(req.sender, url_id, req.verdict)
        if err is not None:
            return _rejected(err)
        return WriteResponse(tx_id=tid, accepted=True, committed=committed)

    @app.get("/api/v1/urls/{url_id}", response_model=UrlView)
    def lookup_url(url_id: str):
        view = node.url_view(url_id)
        if view is None:
            return _not_found()
        return view

    @app.get("/api/v1/urls/{url_id}/timeline", response_model=TimelineView)
    def url_timeline(url_id: str):
        view = node.timeline_view(url_id)
        if view is None:
            return _not_found()
        return view

    @app.get("/api/v1/graph", response_model=GraphView)
    def verifier_graph():
        return node.graph_view()

    @app.get("/api/v1/blacklist", response_model=List[BlacklistEntry])
    def blacklist():
        return node.blacklist_view()

    @app.get("/api/v1/chain/blocks")
    def chain_blocks(from_: int = Query(default=0, alias="from"), to: Optional[int] = None):
        return node.blocks_view(from_, to)

    @app.get("/api/v1/verifiers/{verifier_id}", response_model=VerifierView)
    def verifier(verifier_id: str):
        view = node.verifier_view(verifier_id)
        if view is None:
            return _not_found()
        return view

    @app.get("/api/v1/status")
    def status():
        return node.status_view()

    @app.post("/api/v1/consensus/message")
    def consensus_message(doc: dict):
        if doc.get("kind") == "ProposeRequest":
            event = propose_request_from_doc(doc)
        else:
            try:
                event = message_from_doc(doc)
            except (KeyError, ValueError):
                return _rejected("MalformedMessage")
        node.deliver(event)
        return {"ok": True}

    dashboard = node.config.dashboard_dir
    if dashboard and Path(dashboard).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/dashboard", StaticFiles(directory=dashboard, html=True), name="dashboard")

    return app
