"""GLAD-style label aggregation: per-verifier ability, per-URL difficulty.

Generative model: the true label of URL u is Phishing with prior 0.5; a vote
by verifier v on URL u is correct with probability

    p = sigmoid(alpha_v * exp(beta_u))

so large alpha means a skilled verifier, large negative alpha an adversarial
one, and small exp(beta) a hard URL that pushes everyone toward coin-flip.
Inference is EM: exact posteriors in the E-step, a fixed number of gradient
ascent steps on the expected complete-data log-likelihood in the M-step.

``expected_loglik`` / ``expected_loglik_grad`` expose the M-step objective
and its exact gradient so the gradient can be checked against finite
differences.
"""
from __future__ import annotations

from typing import Dict, List, Mapping, Tuple

import numpy as np

from .votes import PHISHING, VoteMatrix
from .dawid_skene import EmptyInputError

_EPS = 1e-12
INNER_GRADIENT_STEPS = 25
_ALPHA_CLIP = 8.0
_BETA_CLIP = 4.0


class NonFiniteGradientError(ArithmeticError):
    pass


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def _index(votes: VoteMatrix):
    urls = votes.urls()
    verifiers = votes.verifiers()
    url_ix = {u: i for i, u in enumerate(urls)}
    ver_ix = {v: i for i, v in enumerate(verifiers)}
    u_idx = np.array([url_ix[e.url_id] for e in votes.entries], dtype=np.int64)
    v_idx = np.array([ver_ix[e.verifier_id] for e in votes.entries], dtype=np.int64)
    is_phish = np.array([e.verdict == PHISHING for e in votes.entries], dtype=bool)
    return urls, verifiers, u_idx, v_idx, is_phish


def _correct_prob(alpha, beta, u_idx, v_idx):
    return _sigmoid(alpha[v_idx] * np.exp(beta[u_idx]))


def _posteriors_arr(alpha, beta, u_idx, v_idx, is_phish, n_urls):
    p = np.clip(_correct_prob(alpha, beta, u_idx, v_idx), _EPS, 1.0 - _EPS)
    # log P(vote | z): the vote is "correct" under z=Phishing iff it says Phishing
    log_p_given_phish = np.where(is_phish, np.log(p), np.log(1.0 - p))
    log_p_given_not = np.where(is_phish, np.log(1.0 - p), np.log(p))
    ll = np.zeros((n_urls, 2))
    ll[:, 0] = np.log(0.5) + np.bincount(u_idx, weights=log_p_given_phish, minlength=n_urls)
    ll[:, 1] = np.log(0.5) + np.bincount(u_idx, weights=log_p_given_not, minlength=n_urls)
    m = ll.max(axis=1, keepdims=True)
    w = np.exp(ll - m)
    q = w[:, 0] / w.sum(axis=1)
    loglik = float((m[:, 0] + np.log(w.sum(axis=1))).sum())
    return q, loglik


def glad_posteriors(
    alpha: Mapping[str, float],
    beta: Mapping[str, float],
    votes: VoteMatrix,
) -> Dict[str, float]:
    """E-step only: P(Phishing | votes) under fixed abilities/difficulties."""
    if len(votes) == 0:
        raise EmptyInputError("no votes")
    urls, verifiers, u_idx, v_idx, is_phish = _index(votes)
    a = np.array([alpha[v] for v in verifiers], dtype=float)
    b = np.array([beta[u] for u in urls], dtype=float)
    q, _ = _posteriors_arr(a, b, u_idx, v_idx, is_phish, len(urls))
    return {u: float(q[i]) for i, u in enumerate(urls)}


def _q_tilde(q, u_idx, is_phish):
    """Posterior probability that each individual vote is correct."""
    qu = q[u_idx]
    return np.where(is_phish, qu, 1.0 - qu)


def _objective_arr(alpha, beta, u_idx, v_idx, qt):
    p = np.clip(_correct_prob(alpha, beta, u_idx, v_idx), _EPS, 1.0 - _EPS)
    return float((qt * np.log(p) + (1.0 - qt) * np.log(1.0 - p)).sum())


def _gradient_arr(alpha, beta, u_idx, v_idx, qt, n_urls, n_ver):
    d = np.exp(beta[u_idx])
    p = _sigmoid(alpha[v_idx] * d)
    g_x = qt - p  # d objective / d (alpha_v * exp(beta_u)) per vote
    g_alpha = np.bincount(v_idx, weights=g_x * d, minlength=n_ver)
    g_beta = np.bincount(u_idx, weights=g_x * alpha[v_idx] * d, minlength=n_urls)
    return g_alpha, g_beta


def expected_loglik(
    alpha: Mapping[str, float],
    beta: Mapping[str, float],
    votes: VoteMatrix,
    posteriors: Mapping[str, float],
) -> float:
    """Expected complete-data log-likelihood of the vote correctness terms
    under fixed posteriors (the M-step objective, label-prior terms omitted
    as constants).
    """
    urls, verifiers, u_idx, v_idx, is_phish = _index(votes)
    a = np.array([alpha[v] for v in verifiers], dtype=float)
    b = np.array([beta[u] for u in urls], dtype=float)
    q = np.array([posteriors[u] for u in urls], dtype=float)
    return _objective_arr(a, b, u_idx, v_idx, _q_tilde(q, u_idx, is_phish))


def expected_loglik_grad(
    alpha: Mapping[str, float],
    beta: Mapping[str, float],
    votes: VoteMatrix,
    posteriors: Mapping[str, float],
) -> Tuple[Dict[str, float], Dict[str, float]]:
    """Exact gradient of expected_loglik with respect to every ability and
    difficulty parameter.
    """
    urls, verifiers, u_idx, v_idx, is_phish = _index(votes)
    a = np.array([alpha[v] for v in verifiers], dtype=float)
    b = np.array([beta[u] for u in urls], dtype=float)
    q = np.array([posteriors[u] for u in urls], dtype=float)
    g_a, g_b = _gradient_arr(a, b, u_idx, v_idx, _q_tilde(q, u_idx, is_phish), len(urls), len(verifiers))
    return (
        {v: float(g_a[j]) for j, v in enumerate(verifiers)},
        {u: float(g_b[i]) for i, u in enumerate(urls)},
    )


def glad(
    votes: VoteMatrix,
    learning_rate: float = 0.5,
    iters: int = 30,
    seed: int = 0,
) -> Tuple[Dict[str, float], Dict[str, float], Dict[str, float], List[float]]:
    """Returns (posteriors P(Phishing) per url, ability per verifier,
    difficulty per url, observed-data log-likelihood trace).

    The M-step takes INNER_GRADIENT_STEPS ascent steps per outer iteration,
    scaling each parameter's step by its vote count so dense verifiers do
    not blow past the optimum.
    """
    if len(votes) == 0:
        raise EmptyInputError("no votes")
    if learning_rate <= 0 or iters < 1:
        raise ValueError("learning_rate must be > 0 and iters >= 1")
    urls, verifiers, u_idx, v_idx, is_phish = _index(votes)
    n_urls, n_ver = len(urls), len(verifiers)

    rng = np.random.default_rng(seed)
    alpha = 1.0 + rng.uniform(-0.01, 0.01, n_ver)
    beta = rng.uniform(-0.01, 0.01, n_urls)
    votes_per_ver = np.maximum(np.bincount(v_idx, minlength=n_ver), 1)
    votes_per_url = np.maximum(np.bincount(u_idx, minlength=n_urls), 1)

    trace: List[float] = []
    for _ in range(iters):
        q, loglik = _posteriors_arr(alpha, beta, u_idx, v_idx, is_phish, n_urls)
        trace.append(loglik)
        qt = _q_tilde(q, u_idx, is_phish)
        for _ in range(INNER_GRADIENT_STEPS):
            g_a, g_b = _gradient_arr(alpha, beta, u_idx, v_idx, qt, n_urls, n_ver)
            if not (np.isfinite(g_a).all() and np.isfinite(g_b).all()):
                raise NonFiniteGradientError("gradient diverged")
            alpha = np.clip(alpha + learning_rate * g_a / votes_per_ver, -_ALPHA_CLIP, _ALPHA_CLIP)
            beta = np.clip(beta + learning_rate * g_b / votes_per_url, -_BETA_CLIP, _BETA_CLIP)

    q, loglik = _posteriors_arr(alpha, beta, u_idx, v_idx, is_phish, n_urls)
    trace.append(loglik)
    posteriors = {u: float(q[i]) for i, u in enumerate(urls)}
    abilities = {v: float(alpha[j]) for j, v in enumerate(verifiers)}
    difficulties = {u: float(beta[i]) for i, u in enumerate(urls)}
    return posteriors, abilities, difficulties, trace
