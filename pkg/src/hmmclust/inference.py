"""Exact forward-backward inference for HMMs.

Scaled (normalized) recursions: the forward pass propagates the filtering law
P(X_i | y_{1:i}) and stores per-step normalizers, the backward pass folds the
smoothing law P(X_i | y_{1:n}) through the backward kernel
B_i(x' -> x) proportional to filter_i(x) Q(x, x').  No raw joint products, so
n up to 10^6 is fine.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import density_matrix


@dataclass(frozen=True)
class PosteriorTable:
    """Per-index posterior laws: probs[i, x-1] = P(X_i = x | y), with the
    conditioning set fixed by kind ('filtering' = y_{1:i}, 'smoothing' = y_{1:n})."""

    kind: str
    probs: np.ndarray
    loglik: float


def _emission_probs(params, y):
    b = density_matrix(params, np.asarray(y))
    if not np.all(np.isfinite(b)):
        raise ValueError("non-finite emission density value")
    return b


def forward_filter(params, y):
    """Filtering posteriors P(X_i | y_{1:i}) and the log-likelihood of y_{1:n}."""
    b = _emission_probs(params, y)
    n = b.shape[0]
    alpha = np.empty_like(b)
    norms = np.empty(n)
    a = params.nu * b[0]
    for i in range(n):
        if i:
            a = (alpha[i - 1] @ params.Q) * b[i]
        norms[i] = a.sum()
        if norms[i] <= 0.0:
            raise ValueError(f"impossible observation at index {i + 1}")
        alpha[i] = a / norms[i]
    return PosteriorTable(kind="filtering", probs=alpha, loglik=float(np.log(norms).sum()))


def smooth(params, y):
    """Smoothing posteriors P(X_i | y_{1:n}); loglik identical to the filter's."""
    filt = forward_filter(params, y)
    alpha = filt.probs
    n = alpha.shape[0]
    phi = np.empty_like(alpha)
    phi[n - 1] = alpha[n - 1]
    Q = params.Q
    for i in range(n - 2, -1, -1):
        w = alpha[i][:, None] * Q          # (x, x') joint of (X_i, X_{i+1}) given y_{1:i+1} pre-normalization
        col = w.sum(axis=0)
        ratio = np.where(col > 0.0, phi[i + 1] / np.where(col > 0.0, col, 1.0), 0.0)
        phi[i] = w @ ratio
    return PosteriorTable(kind="smoothing", probs=phi, loglik=filt.loglik)


def bayes_classify(params, y):
    """Labels maximizing the smoothing posterior at each index (1..J).

    Ties go to the smallest state index.
    """
    return np.argmax(smooth(params, y).probs, axis=1) + 1


def smoothing_tv_distance(params_a, params_b, y):
    """Per-index total-variation distance between the two models' smoothing laws."""
    if params_a.J != params_b.J:
        raise ValueError("models have different state counts")
    pa = smooth(params_a, y).probs
    pb = smooth(params_b, y).probs
    return 0.5 * np.abs(pa - pb).sum(axis=1)


# --- batched variants (one recursion, many observation sequences) -----------
#
# Used by the exact-risk oracles that sweep every y in A^n; identical math to
# the single-sequence functions above, checked against them in the tests.

def _batched_emission_probs(params, Y):
    B, n = Y.shape
    flat = Y.reshape(-1)
    b = np.stack([e.density(flat).reshape(B, n) for e in params.emissions], axis=2)
    return b  # (B, n, J)


def batched_forward(params, Y):
    """Filtering for a (B, n) batch of sequences: returns (alpha, logliks)."""
    b = _batched_emission_probs(params, Y)
    B, n, J = b.shape
    alpha = np.empty_like(b)
    logliks = np.zeros(B)
    a = params.nu[None, :] * b[:, 0]
    for i in range(n):
        if i:
            a = (alpha[:, i - 1] @ params.Q) * b[:, i]
        norms = a.sum(axis=1)
        if np.any(norms <= 0.0):
            raise ValueError("impossible observation in batch")
        alpha[:, i] = a / norms[:, None]
        logliks += np.log(norms)
    return alpha, logliks


def batched_smooth(params, Y):
    """Smoothing for a (B, n) batch: returns (phi, logliks)."""
    alpha, logliks = batched_forward(params, Y)
    B, n, J = alpha.shape
    phi = np.empty_like(alpha)
    phi[:, n - 1] = alpha[:, n - 1]
    Q = params.Q
    for i in range(n - 2, -1, -1):
        w = alpha[:, i, :, None] * Q[None, :, :]   # (B, x, x')
        col = w.sum(axis=1)
        ratio = np.where(col > 0.0, phi[:, i + 1] / np.where(col > 0.0, col, 1.0), 0.0)
        phi[:, i] = np.einsum("bxz,bz->bx", w, ratio)
    return phi, logliks
