"""Two-class Dawid-Skene label aggregation by expectation-maximization.

Each verifier gets a 2x2 row-stochastic confusion matrix (rows = true class,
columns = reported class, class order [Phishing, NotPhishing]). Posteriors
start from per-URL majority vote, then EM alternates confusion/prior
re-estimation (M) with posterior updates (E) until the largest posterior
change drops below ``tol``.

Confusion rows use additive (Laplace) smoothing of 1 per cell, which makes
this MAP estimation under a flat-ish Dirichlet prior; the reported
log-likelihood trace is therefore the smoothed objective
``log P(votes | theta, pi) + sum(log theta)``, the quantity EM provably
never decreases here.
"""
from __future__ import annotations

from typing import Dict, List, Mapping, Tuple

import numpy as np

from .votes import PHISHING, VoteMatrix


class EmptyInputError(ValueError):
    pass


_LOG_FLOOR = 1e-300


def _index(votes: VoteMatrix):
    urls = votes.urls()
    verifiers = votes.verifiers()
    url_ix = {u: i for i, u in enumerate(urls)}
    ver_ix = {v: i for i, v in enumerate(verifiers)}
    u_idx = np.array([url_ix[e.url_id] for e in votes.entries], dtype=np.int64)
    v_idx = np.array([ver_ix[e.verifier_id] for e in votes.entries], dtype=np.int64)
    # label index: 0 = Phishing, 1 = NotPhishing
    l_idx = np.array([0 if e.verdict == PHISHING else 1 for e in votes.entries], dtype=np.int64)
    return urls, verifiers, u_idx, v_idx, l_idx


def _majority_init(n_urls: int, u_idx, l_idx, prior: float) -> np.ndarray:
    phish = np.bincount(u_idx, weights=(l_idx == 0).astype(float), minlength=n_urls)
    total = np.bincount(u_idx, minlength=n_urls).astype(float)
    q = np.full(n_urls, prior)
    q[phish * 2 > total] = 1.0
    q[phish * 2 < total] = 0.0
    return q


def _e_step(q_shape, u_idx, v_idx, l_idx, theta, pi, n_urls):
    log_theta = np.log(np.clip(theta, _LOG_FLOOR, 1.0))        # (V, 2, 2)
    ll = np.zeros((n_urls, 2))
    ll[:, 0] = np.log(max(pi[0], _LOG_FLOOR))
    ll[:, 1] = np.log(max(pi[1], _LOG_FLOOR))
    for t in (0, 1):
        contrib = log_theta[v_idx, t, l_idx]
        ll[:, t] += np.bincount(u_idx, weights=contrib, minlength=n_urls)
    m = ll.max(axis=1, keepdims=True)
    w = np.exp(ll - m)
    q2 = w / w.sum(axis=1, keepdims=True)
    data_loglik = float((m[:, 0] + np.log(w.sum(axis=1))).sum())
    return q2, data_loglik


def posterior_e_step(
    votes: VoteMatrix,
    confusions: Mapping[str, List[List[float]]],
    prior: float,
) -> Dict[str, float]:
    """Single E-step with the given fixed confusion matrices: per-URL
    posterior P(Phishing | votes) by Bayes with class prior ``prior``.
    """
    if len(votes) == 0:
        raise EmptyInputError("no votes")
    urls, verifiers, u_idx, v_idx, l_idx = _index(votes)
    theta = np.array([confusions[v] for v in verifiers], dtype=float)
    q2, _ = _e_step(None, u_idx, v_idx, l_idx, theta, np.array([prior, 1.0 - prior]), len(urls))
    return {u: float(q2[i, 0]) for i, u in enumerate(urls)}


def dawid_skene(
    votes: VoteMatrix,
    prior: float = 0.5,
    tol: float = 1e-6,
    max_iter: int = 100,
) -> Tuple[Dict[str, float], Dict[str, List[List[float]]], List[float]]:
    """Returns (posteriors P(Phishing) per url, confusion matrix per
    verifier, log-likelihood trace, one entry per EM iteration).
    """
    if len(votes) == 0:
        raise EmptyInputError("no votes")
    if not (0.0 < prior < 1.0):
        raise ValueError(f"prior must be in (0,1), got {prior}")
    urls, verifiers, u_idx, v_idx, l_idx = _index(votes)
    n_urls, n_ver = len(urls), len(verifiers)

    q = _majority_init(n_urls, u_idx, l_idx, prior)
    q2 = np.stack([q, 1.0 - q], axis=1)
    trace: List[float] = []

    for _ in range(max_iter):
        # M-step: smoothed confusion counts and class prior from soft labels
        counts = np.zeros((n_ver, 2, 2))
        for t in (0, 1):
            for l in (0, 1):
                sel = l_idx == l
                counts[:, t, l] = np.bincount(v_idx[sel], weights=q2[u_idx[sel], t], minlength=n_ver)
        theta = (counts + 1.0) / (counts.sum(axis=2, keepdims=True) + 2.0)
        pi = q2.mean(axis=0)

        new_q2, data_loglik = _e_step(None, u_idx, v_idx, l_idx, theta, pi, n_urls)
        penalty = float(np.log(np.clip(theta, _LOG_FLOOR, 1.0)).sum())
        trace.append(data_loglik + penalty)

        delta = float(np.abs(new_q2 - q2).max())
        q2 = new_q2
        if delta < tol:
            break

    posteriors = {u: float(q2[i, 0]) for i, u in enumerate(urls)}
    confusions = {v: theta[j].tolist() for j, v in enumerate(verifiers)}
    return posteriors, confusions, trace
