"""Clustering methods: the oracle rule, the spectral plug-in, k-means, and the
Monte Carlo harness."""

import numpy as np
import pytest

from hmmclust.clusterers import (kmeans_cluster, monte_carlo_risks,
                                 oracle_bayes_cluster, plugin_cluster,
                                 run_method)
from hmmclust.inference import bayes_classify
from hmmclust.model import (Finite, GaussianMixture, HmmParams,
                            sample_trajectory, stationary_distribution)
from hmmclust.partitions import misclassification_loss, partition_from_labels
from hmmclust.spectral import SpectralConfig

SEED = 20240601


def separated_gaussian_chain():
    g1 = GaussianMixture(components=((1.0, 0.0, 0.5),))
    g2 = GaussianMixture(components=((1.0, 4.0, 0.5),))
    Q = np.array([[0.8, 0.2], [0.3, 0.7]])
    return HmmParams(nu=stationary_distribution(Q), Q=Q, emissions=(g1, g2))


def test_oracle_bayes_cluster_wraps_classifier():
    p = separated_gaussian_chain()
    traj = sample_trajectory(p, 400, seed=SEED)
    run = oracle_bayes_cluster(p, traj.y)
    assert run.method == "bayes"
    assert np.array_equal(run.labels, bayes_classify(p, traj.y))
    assert run.partition == partition_from_labels(run.labels)
    assert run.seconds >= 0.0
    # well-separated states: near-perfect recovery
    err = misclassification_loss(run.partition, partition_from_labels(traj.x))
    assert err < 0.01


def test_plugin_cluster_close_to_oracle_when_separated():
    p = separated_gaussian_chain()
    traj = sample_trajectory(p, 20_000, seed=SEED)
    run = plugin_cluster(traj.y, 2, SpectralConfig(seed=SEED))
    assert run.method == "plugin"
    assert "diagnostics" in run.detail
    truth = partition_from_labels(traj.x)
    assert misclassification_loss(run.partition, truth) < 0.05


def test_kmeans_recovers_two_obvious_blobs():
    rng = np.random.default_rng(SEED)
    y = np.concatenate([rng.normal(0.0, 0.1, 50), rng.normal(10.0, 0.1, 50)])
    truth = partition_from_labels([1] * 50 + [2] * 50)
    run = kmeans_cluster(y, 2, seed=SEED)
    assert run.method == "kmeans"
    assert misclassification_loss(run.partition, truth) == 0.0
    centers = sorted(run.detail["centers"])
    assert centers[0] == pytest.approx(0.0, abs=0.1)
    assert centers[1] == pytest.approx(10.0, abs=0.1)


def test_kmeans_inertia_never_worse_with_more_restarts():
    rng = np.random.default_rng(SEED)
    y = np.concatenate([rng.normal(m, 0.5, 60) for m in (0.0, 3.0, 6.0)])
    one = kmeans_cluster(y, 3, restarts=1, seed=SEED)
    many = kmeans_cluster(y, 3, restarts=10, seed=SEED)
    assert many.detail["inertia"] <= one.detail["inertia"] + 1e-9


def test_kmeans_is_seed_reproducible():
    rng = np.random.default_rng(SEED)
    y = rng.normal(size=200)
    a = kmeans_cluster(y, 2, seed=123)
    b = kmeans_cluster(y, 2, seed=123)
    assert np.array_equal(a.labels, b.labels)
    assert a.detail["inertia"] == b.detail["inertia"]


def test_kmeans_handles_duplicate_points():
    y = np.array([1.0] * 30 + [1.0] * 30)  # all mass on one point
    run = kmeans_cluster(y, 2, seed=SEED)
    assert run.detail["inertia"] == pytest.approx(0.0, abs=1e-18)


def test_run_method_dispatch_and_unknown_name():
    p = separated_gaussian_chain()
    traj = sample_trajectory(p, 300, seed=SEED)
    assert run_method("bayes", p, traj.y).method == "bayes"
    assert run_method("kmeans", p, traj.y, seed=SEED).method == "kmeans"
    with pytest.raises(ValueError, match="unknown method 'emf'"):
        run_method("emf", p, traj.y)


def test_monte_carlo_risks_shapes_and_reproducibility():
    p = separated_gaussian_chain()
    out = monte_carlo_risks(p, 500, methods=("bayes", "kmeans"),
                            replicates=4, seed=SEED)
    assert [r.method for r in out] == ["bayes", "kmeans"]
    for r in out:
        assert len(r.errors) == 4
        assert r.mean_error == pytest.approx(float(np.mean(r.errors)))
        assert r.half_width >= 0.0
        assert r.mean_seconds >= 0.0
    again = monte_carlo_risks(p, 500, methods=("bayes", "kmeans"),
                              replicates=4, seed=SEED)
    assert out[0].errors == again[0].errors
    assert out[1].errors == again[1].errors


def test_monte_carlo_oracle_beats_kmeans_on_overlapping_mixture():
    # bimodal emissions overlapping in the middle: a distance-based method
    # has to split each state's two modes, the posterior rule does not
    g1 = GaussianMixture(components=((0.5, 0.0, 0.3), (0.5, 4.0, 0.3)))
    g2 = GaussianMixture(components=((0.5, 2.0, 0.3), (0.5, 6.0, 0.3)))
    Q = np.array([[0.8, 0.2], [0.3, 0.7]])
    p = HmmParams(nu=stationary_distribution(Q), Q=Q, emissions=(g1, g2))
    out = monte_carlo_risks(p, 800, methods=("bayes", "kmeans"),
                            replicates=3, seed=SEED)
    risk = {r.method: r.mean_error for r in out}
    assert risk["bayes"] < 0.05
    assert risk["kmeans"] > 0.25


def test_single_replicate_has_zero_half_width():
    p = separated_gaussian_chain()
    out = monte_carlo_risks(p, 200, methods=("bayes",), replicates=1, seed=SEED)
    assert out[0].half_width == 0.0
