"""Accuracy / precision / recall with Phishing as the positive class."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .votes import PHISHING


class DomainMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class EvaluationReport:
    algorithm: str
    accuracy: float
    precision: float
    recall: float


def evaluate(predicted: Mapping[str, str], truth: Mapping[str, str], algorithm: str = "") -> EvaluationReport:
    if set(predicted) != set(truth):
        raise DomainMismatchError("predicted and truth cover different URL sets")
    tp = fp = fn = tn = 0
    for uid, label in predicted.items():
        actual = truth[uid]
        if label == PHISHING and actual == PHISHING:
            tp += 1
        elif label == PHISHING:
            fp += 1
        elif actual == PHISHING:
            fn += 1
        else:
            tn += 1
    total = tp + fp + fn + tn
    accuracy = (tp + tn) / total if total else 1.0
    precision = tp / (tp + fp) if (tp + fp) else 1.0
    recall = tp / (tp + fn) if (tp + fn) else 1.0
    return EvaluationReport(algorithm=algorithm, accuracy=accuracy, precision=precision, recall=recall)
