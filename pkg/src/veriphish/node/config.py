"""Node configuration: JSON file loaded at startup."""
from __future__ import annotations

import json
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError, model_validator


class ConfigError(ValueError):
    pass


class NodeConfig(BaseModel):
    node_id: str
    role: Literal["Validator", "Normal"]
    listen_address: str = "127.0.0.1:8545"
    peer_addresses: List[str] = Field(default_factory=list)
    data_dir: str
    validators: List[str]

    # consensus timing
    timeout_base_ms: int = 1000
    tick_ms: int = 50
    max_block_txs: int = 100

    # truth discovery
    damping: float = 0.85
    tol: float = 1e-9
    max_iter: int = 200
    vote_threshold: int = 3

    # optional static dashboard bundle served at /dashboard
    dashboard_dir: Optional[str] = None

    @model_validator(mode="after")
    def _check(self):
        in_set = self.node_id in self.validators
        if self.role == "Validator" and not in_set:
            raise ValueError(f"validator {self.node_id!r} missing from validator set")
        if self.role == "Normal" and in_set:
            raise ValueError(f"normal node {self.node_id!r} must not be in the validator set")
        if not self.validators:
            raise ValueError("validator set must not be empty")
        host, sep, port = self.listen_address.partition(":")
        if not sep or not host or not port.isdigit():
            raise ValueError(f"listen_address must be host:port, got {self.listen_address!r}")
        return self

    @property
    def host(self) -> str:
        return self.listen_address.partition(":")[0]

    @property
    def port(self) -> int:
        return int(self.listen_address.partition(":")[2])


def load_config(path: Union[str, Path]) -> NodeConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return NodeConfig.model_validate(doc)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
