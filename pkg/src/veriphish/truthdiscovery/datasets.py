"""JSON import/export for labeled vote datasets.

Format: {"votes": [[url_id, verifier_id, verdict, ordinal], ...],
         "truth": {url_id: verdict, ...}}
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .synthetic import LabeledDataset
from .votes import VoteMatrix


def dataset_to_doc(ds: LabeledDataset) -> dict:
    return {
        "votes": [[e.url_id, e.verifier_id, e.verdict, e.ordinal] for e in ds.votes.entries],
        "truth": dict(ds.truth),
    }


def dataset_from_doc(doc: dict) -> LabeledDataset:
    votes = VoteMatrix.from_rows(tuple(row) for row in doc["votes"])
    truth = {str(k): str(v) for k, v in doc.get("truth", {}).items()}
    for uid in votes.urls():
        if uid not in truth:
            raise ValueError(f"url {uid!r} has votes but no truth entry")
    return LabeledDataset(votes=votes, truth=truth)


def save_dataset(ds: LabeledDataset, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(dataset_to_doc(ds), sort_keys=True), encoding="utf-8")


def load_dataset(path: Union[str, Path]) -> LabeledDataset:
    return dataset_from_doc(json.loads(Path(path).read_text(encoding="utf-8")))
