"""Vote matrix: the flat (url, verifier, verdict, ordinal) table every
truth-discovery algorithm consumes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Tuple

PHISHING = "Phishing"
NOT_PHISHING = "NotPhishing"
VERDICTS = (PHISHING, NOT_PHISHING)


class VoteEntry(NamedTuple):
    url_id: str
    verifier_id: str
    verdict: str
    ordinal: int


@dataclass(frozen=True)
class VoteMatrix:
    entries: Tuple[VoteEntry, ...]

    def __post_init__(self):
        seen = set()
        per_url: Dict[str, List[int]] = {}
        for e in self.entries:
            if e.verdict not in VERDICTS:
                raise ValueError(f"bad verdict {e.verdict!r}")
            key = (e.url_id, e.verifier_id)
            if key in seen:
                raise ValueError(f"duplicate vote by {e.verifier_id!r} on {e.url_id!r}")
            seen.add(key)
            per_url.setdefault(e.url_id, []).append(e.ordinal)
        for uid, ordinals in per_url.items():
            if sorted(ordinals) != list(range(1, len(ordinals) + 1)):
                raise ValueError(f"ordinals for {uid!r} not contiguous from 1: {sorted(ordinals)}")

    @classmethod
    def from_rows(cls, rows: Iterable[Tuple[str, str, str, int]]) -> "VoteMatrix":
        return cls(tuple(VoteEntry(u, v, verdict, int(o)) for u, v, verdict, o in rows))

    def by_url(self) -> Dict[str, List[VoteEntry]]:
        out: Dict[str, List[VoteEntry]] = {}
        for e in self.entries:
            out.setdefault(e.url_id, []).append(e)
        for votes in out.values():
            votes.sort(key=lambda e: e.ordinal)
        return out

    def by_verifier(self) -> Dict[str, List[VoteEntry]]:
        out: Dict[str, List[VoteEntry]] = {}
        for e in self.entries:
            out.setdefault(e.verifier_id, []).append(e)
        return out

    def verifiers(self) -> List[str]:
        return sorted({e.verifier_id for e in self.entries})

    def urls(self) -> List[str]:
        return sorted({e.url_id for e in self.entries})

    def __len__(self) -> int:
        return len(self.entries)
