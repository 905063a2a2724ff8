"""Clustering procedures compared in the simulation study.

Three ways to turn an observation sequence into a partition of {1..n}:

* the oracle rule: smoothing posteriors under the true parameters, argmax
  per index, partition by label;
* the plug-in rule: same, but under spectrally estimated parameters;
* plain k-means on the observed values, as the no-model baseline.

All three are evaluated with the misclassification-error distance to the
latent partition, which is invariant to label switching by construction.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .inference import bayes_classify
from .model import sample_trajectory
from .partitions import Partition, misclassification_loss, partition_from_labels
from .spectral import SpectralConfig, full_estimate, to_hmm_params

KMEANS_RESTARTS = 10
KMEANS_MAX_ITER = 300
KMEANS_SHIFT_TOL = 1e-9


@dataclass(frozen=True)
class ClusterRun:
    method: str
    labels: np.ndarray
    partition: Partition
    seconds: float
    detail: dict = field(default_factory=dict)


def oracle_bayes_cluster(params, y):
    """Partition induced by the smoothing-argmax rule under true parameters."""
    t0 = time.perf_counter()
    labels = bayes_classify(params, y)
    return ClusterRun(method="bayes", labels=labels,
                      partition=partition_from_labels(labels),
                      seconds=time.perf_counter() - t0)


def plugin_cluster(y, J, config=None):
    """Spectral estimate of the parameters, then the smoothing-argmax rule
    under the estimate.  With estimated = true parameters this reduces to
    oracle_bayes_cluster exactly."""
    t0 = time.perf_counter()
    est = full_estimate(y, J, config or SpectralConfig())
    labels = bayes_classify(to_hmm_params(est), y)
    return ClusterRun(method="plugin", labels=labels,
                      partition=partition_from_labels(labels),
                      seconds=time.perf_counter() - t0,
                      detail={"diagnostics": est.diagnostics})


def _kmeans_pp_init(y, J, rng):
    centers = np.empty(J)
    centers[0] = y[rng.integers(len(y))]
    d2 = (y - centers[0]) ** 2
    for j in range(1, J):
        total = d2.sum()
        if total <= 0:
            centers[j:] = y[rng.integers(len(y), size=J - j)]
            break
        centers[j] = y[rng.choice(len(y), p=d2 / total)]
        d2 = np.minimum(d2, (y - centers[j]) ** 2)
    return centers


def _lloyd(y, centers):
    for _ in range(KMEANS_MAX_ITER):
        assign = np.argmin(np.abs(y[:, None] - centers[None, :]), axis=1)
        new = centers.copy()
        for j in range(len(centers)):
            sel = y[assign == j]
            if len(sel):
                new[j] = sel.mean()
        if np.abs(new - centers).max() < KMEANS_SHIFT_TOL:
            centers = new
            break
        centers = new
    assign = np.argmin(np.abs(y[:, None] - centers[None, :]), axis=1)
    inertia = float(((y - centers[assign]) ** 2).sum())
    return assign, centers, inertia


def kmeans_cluster(y, J, restarts=KMEANS_RESTARTS, seed=None):
    """1-D k-means with k-means++ starts; best inertia over restarts."""
    y = np.asarray(y, dtype=float)
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    best = None
    for _ in range(restarts):
        assign, centers, inertia = _lloyd(y, _kmeans_pp_init(y, J, rng))
        if best is None or inertia < best[2]:
            best = (assign, centers, inertia)
    assign, centers, inertia = best
    labels = assign + 1
    return ClusterRun(method="kmeans", labels=labels,
                      partition=partition_from_labels(labels),
                      seconds=time.perf_counter() - t0,
                      detail={"centers": centers.tolist(), "inertia": inertia})


def run_method(method, params, y, seed=None, spectral_config=None):
    """Dispatch a method name to its clusterer."""
    if method == "bayes":
        return oracle_bayes_cluster(params, y)
    if method == "plugin":
        cfg = spectral_config or SpectralConfig(seed=seed)
        return plugin_cluster(y, params.J, cfg)
    if method == "kmeans":
        return kmeans_cluster(y, params.J, seed=seed)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class MethodRisk:
    method: str
    mean_error: float
    half_width: float       # 1.96 * se over replicates; 0 if replicates == 1
    errors: tuple
    mean_seconds: float


def monte_carlo_risks(params, n, methods=("bayes", "plugin", "kmeans"),
                      replicates=5, seed=None):
    """Clustering error of each method over independent trajectories.

    The error of one run is the misclassification-error distance between the
    predicted partition and the latent partition, so no label alignment is
    needed anywhere.
    """
    results = {m: ([], []) for m in methods}
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(replicates)):
        traj = sample_trajectory(params, n, child)
        truth = partition_from_labels(traj.x)
        for m in methods:
            run = run_method(m, params, traj.y, seed=np.random.default_rng(child).integers(2**32))
            results[m][0].append(misclassification_loss(run.partition, truth))
            results[m][1].append(run.seconds)
    out = []
    for m in methods:
        errs = np.array(results[m][0])
        half = 0.0
        if len(errs) > 1:
            half = 1.96 * errs.std(ddof=1) / math.sqrt(len(errs))
        out.append(MethodRisk(method=m, mean_error=float(errs.mean()),
                              half_width=float(half), errors=tuple(errs),
                              mean_seconds=float(np.mean(results[m][1]))))
    return out
