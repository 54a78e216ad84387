"""Validator set arithmetic: fault budget and quorum sizing, leader rotation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple


class InvalidValidatorSetError(ValueError):
    pass


def max_faults(n: int) -> int:
    if n < 1:
        raise InvalidValidatorSetError("validator set must not be empty")
    return (n - 1) // 3


def quorum_size(n: int) -> int:
    """Messages required to advance a phase: 2f + 1 with f = floor((n-1)/3)."""
    return 2 * max_faults(n) + 1


@dataclass(frozen=True)
class ValidatorSet:
    validators: Tuple[str, ...]

    def __post_init__(self):
        if not self.validators:
            raise InvalidValidatorSetError("validator set must not be empty")
        if len(set(self.validators)) != len(self.validators):
            raise InvalidValidatorSetError("duplicate validator ids")

    @property
    def n(self) -> int:
        return len(self.validators)

    @property
    def f(self) -> int:
        return max_faults(self.n)

    @property
    def quorum(self) -> int:
        return quorum_size(self.n)

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.validators


def leader_for(height: int, round: int, vs: ValidatorSet) -> str:
    """Deterministic proposer rotation: shifts by one on every height and on
    every round change within a height.
    """
    return vs.validators[(height + round) % vs.n]
