"""Numeric evaluators for the risk bounds, checked against high-precision
reimplementations (mpmath) and against the exact enumeration oracles."""

import math

import mpmath as mp
import numpy as np
import pytest
from scipy.stats import norm

from hmmclust.bounds import (GapBounds, bound_report, chain_pair_floor,
                             classification_sandwich, clustering_sandwich,
                             epsilon_from_class_risk,
                             equivalence_factor_alpha_n, fastrate_diagnostic,
                             gap_bounds_iid_J2, gaussian_snr_bounds,
                             hmm_bounds, iid_bounds_J_gt_2, lambda_separation,
                             lambda_separation_checked, near_optimality_factors)
from hmmclust.model import (Finite, GaussianMixture, Histogram, HmmParams,
                            iid_params)
from hmmclust.oracle import (bayes_class_risk_exact, bayes_clust_risk_exact)

SEED = 20240601
ATOL = 1e-12
RTOL_MP = 1e-12

mp.mp.dps = 50


def random_finite_params(rng, J, A, iid=False):
    nu = rng.dirichlet(np.ones(J))
    emissions = tuple(Finite(pmf=rng.dirichlet(np.ones(A))) for _ in range(J))
    if iid:
        return iid_params(nu, emissions)
    Q = rng.dirichlet(np.ones(J), size=J)
    return HmmParams(nu=nu, Q=Q, emissions=emissions)


# --- Lambda -------------------------------------------------------------------

def test_lambda_finite_two_states_is_one_minus_tv():
    f1, f2 = (0.6, 0.4), (0.4, 0.6)
    lam = lambda_separation((Finite(f1), Finite(f2)))
    assert lam == pytest.approx(0.8, abs=ATOL)
    tv = 0.5 * sum(abs(a - b) for a, b in zip(f1, f2))
    assert lam == pytest.approx(1.0 - tv, abs=ATOL)


def test_lambda_identical_emissions_saturates_at_J_minus_1():
    f = Finite((0.2, 0.3, 0.5))
    assert lambda_separation((f, f)) == pytest.approx(1.0, abs=ATOL)
    assert lambda_separation((f, f, f)) == pytest.approx(2.0, abs=ATOL)


def test_lambda_disjoint_supports_vanishes():
    h1 = Histogram(a=0.0, b=1.0, heights=(1.0,))
    h2 = Histogram(a=2.0, b=3.0, heights=(1.0,))
    assert lambda_separation((h1, h2)) == pytest.approx(0.0, abs=1e-9)


def test_lambda_gaussian_pair_closed_form():
    # equal-variance pair a distance d apart: Lambda = 2*Phi(-d/(2*sigma))
    for d, s in [(1.0, 1.0), (2.5, 0.7), (4.0, 2.0)]:
        g0 = GaussianMixture(components=((1.0, 0.0, s),))
        g1 = GaussianMixture(components=((1.0, d, s),))
        lam, err = lambda_separation_checked((g0, g1))
        assert lam == pytest.approx(2.0 * norm.cdf(-d / (2 * s)), abs=1e-10)
        assert err < 1e-10


def test_lambda_finite_reports_zero_quadrature_error():
    lam, err = lambda_separation_checked((Finite((0.6, 0.4)), Finite((0.4, 0.6))))
    assert err == 0.0 and lam == pytest.approx(0.8)


# --- classification sandwich ----------------------------------------------------

def test_classification_sandwich_contains_exact_risk_iid():
    rng = np.random.default_rng(SEED)
    for _ in range(25):
        J = int(rng.integers(2, 4))
        p = random_finite_params(rng, J, 3, iid=True)
        lo, hi = classification_sandwich(p)
        risk = bayes_class_risk_exact(p)
        assert lo - 1e-12 <= risk <= hi + 1e-12


def stationary_chain(rng, J, A):
    from hmmclust.model import stationary_distribution
    Q = rng.dirichlet(np.ones(J), size=J)
    emissions = tuple(Finite(pmf=rng.dirichlet(np.ones(A))) for _ in range(J))
    return HmmParams(nu=stationary_distribution(Q), Q=Q, emissions=emissions)


def test_classification_sandwich_contains_exact_risk_dependent():
    # the dependent lower bound needs the stationary start (see docstring)
    rng = np.random.default_rng(SEED + 1)
    for _ in range(15):
        p = stationary_chain(rng, 2, 3)
        lo, hi = classification_sandwich(p)
        for n in (2, 4, 6):
            risk = bayes_class_risk_exact(p, n=n)
            assert lo - 1e-12 <= risk <= hi + 1e-12


def test_dependent_lower_bound_can_fail_without_stationarity():
    # concrete witness: an extreme initial law makes index 1 almost free and
    # drags the exact risk below the stationary-chain envelope
    p = HmmParams(nu=(0.97, 0.03), Q=((0.55, 0.45), (0.48, 0.52)),
                  emissions=(Finite((0.7, 0.2, 0.1)), Finite((0.2, 0.3, 0.5))))
    lo, _ = classification_sandwich(p)
    assert bayes_class_risk_exact(p, n=2) < lo


def test_classification_sandwich_collapses_at_uniform_delta():
    # delta = 1/J forces Q uniform, and both sides become Lambda/J
    for J in (2, 3, 4):
        nu = np.full(J, 1.0 / J)
        rng = np.random.default_rng(SEED + J)
        ems = tuple(Finite(pmf=rng.dirichlet(np.ones(3))) for _ in range(J))
        p = iid_params(nu, ems)
        lam = lambda_separation(ems)
        lo, hi = classification_sandwich(p)
        assert lo == pytest.approx(lam / J, abs=ATOL)
        assert hi == pytest.approx(lam / J, abs=ATOL)


def test_classification_sandwich_rejects_zero_delta():
    p = iid_params((1.0, 0.0), (Finite((1.0, 0.0)), Finite((0.0, 1.0))))
    with pytest.raises(ValueError, match="delta"):
        classification_sandwich(p)


# --- gap bounds and alpha_n (independent labels, J = 2) --------------------------

def mp_alpha_n(eps, n):
    eps, n = mp.mpf(eps), mp.mpf(n)
    second = mp.sqrt(mp.pi / (2 * n)) / (1 - 2 * eps)
    if eps == 0:
        return 2 * second
    kappa = mp.log((1 + 2 * eps) / (1 - 2 * eps))
    first = 2 * (1 + eps) * (1 - 4 * eps**2) ** ((n - 2) / 2) / (n * kappa)
    return 2 * min(first, second)


def mp_gap_upper(eps, n):
    eps, n = mp.mpf(eps), mp.mpf(n)
    root = mp.sqrt(mp.pi / (2 * n))
    if eps == 0:
        return root
    kappa = mp.log((1 + 2 * eps) / (1 - 2 * eps))
    return min((1 - 4 * eps**2) ** (n / 2) / (n / 2 * kappa), root)


@pytest.mark.parametrize("eps", [0.0, 0.01, 0.1, 0.25, 0.4, 0.49])
@pytest.mark.parametrize("n", [2, 10, 100, 10**4])
def test_alpha_n_matches_high_precision(eps, n):
    got = equivalence_factor_alpha_n(eps, n)
    assert got == pytest.approx(float(mp_alpha_n(eps, n)), rel=RTOL_MP)


@pytest.mark.parametrize("eps", [0.0, 0.05, 0.2, 0.45])
@pytest.mark.parametrize("n", [4, 100, 10**5])
def test_gap_upper_matches_high_precision(eps, n):
    gb = gap_bounds_iid_J2(eps, n)
    assert gb.upper == pytest.approx(float(mp_gap_upper(eps, n)), rel=RTOL_MP)
    assert isinstance(gb, GapBounds)
    assert gb.lower_valid == (n >= 100)
    assert gb.constant_B_unspecified


def test_gap_bounds_special_case_zero_epsilon():
    gb = gap_bounds_iid_J2(0.0, 400)
    assert gb.upper == pytest.approx(math.sqrt(math.pi / 800), rel=1e-15)
    assert gb.lower_times_B == pytest.approx(1.0 / 20.0, rel=1e-15)
    assert equivalence_factor_alpha_n(0.0, 400) == pytest.approx(
        2.0 * math.sqrt(math.pi / 800), rel=1e-15)


def test_gap_and_alpha_reject_bad_epsilon():
    for bad in (-0.01, 0.5, 0.7):
        with pytest.raises(ValueError, match="epsilon_n"):
            gap_bounds_iid_J2(bad, 100)
        with pytest.raises(ValueError, match="epsilon_n"):
            equivalence_factor_alpha_n(bad, 100)


def test_alpha_n_and_gap_upper_decrease_in_n():
    for eps in (0.0, 0.1, 0.3):
        ns = [2, 5, 10, 50, 100, 1000, 10**4]
        alphas = [equivalence_factor_alpha_n(eps, n) for n in ns]
        uppers = [gap_bounds_iid_J2(eps, n).upper for n in ns]
        assert all(a > b for a, b in zip(alphas, alphas[1:]))
        assert all(a > b for a, b in zip(uppers, uppers[1:]))


def test_gap_envelopes_contain_exact_gap():
    # exact risks on small independent-labels models: the true gap sits below
    # the upper envelope, and clustering risk respects the (1-alpha_n) floor
    rng = np.random.default_rng(SEED)
    for _ in range(10):
        p = random_finite_params(rng, 2, 2, iid=True)
        n = int(rng.integers(2, 7))
        class_risk = bayes_class_risk_exact(p)
        clust_risk = bayes_clust_risk_exact(p, n)
        eps = epsilon_from_class_risk(class_risk)
        gap = class_risk - clust_risk
        assert -1e-12 <= gap <= gap_bounds_iid_J2(eps, n).upper + 1e-9
        alpha = equivalence_factor_alpha_n(eps, n)
        assert clust_risk >= (1.0 - alpha) * class_risk - 1e-9


# --- many-state and dependent-chain factors --------------------------------------

def test_iid_bounds_formulas_match_high_precision():
    nu = (0.5, 0.3, 0.2)
    n = 1000
    ib = iid_bounds_J_gt_2(nu, n, class_risk=0.1)
    assert ib.beta == pytest.approx(0.5, abs=ATOL)   # two smallest: 0.2 + 0.3
    b, nn = mp.mpf("0.5"), mp.mpf(n)
    root = mp.sqrt(mp.log(mp.factorial(3)) / (2 * nn))
    xi = (4 * mp.e / b) * root ** (1 - 4 / (nn * b))
    assert ib.xi_n == pytest.approx(float(xi), rel=RTOL_MP)
    assert ib.tail == pytest.approx(float(9 * mp.exp(-nn * b / 8)), rel=RTOL_MP)
    assert ib.lower_simple == pytest.approx(0.1 - float(root), rel=1e-12)
    assert ib.lower_refined == pytest.approx(
        (1 - ib.xi_n) * 0.1 - ib.tail, rel=1e-12)


def test_iid_bounds_without_class_risk_leaves_lower_bounds_none():
    ib = iid_bounds_J_gt_2((0.4, 0.4, 0.2), 100)
    assert ib.lower_simple is None and ib.lower_refined is None


def test_chain_pair_floor_stationary_equals_pair_minimum():
    # stationary start: the marginal never moves, so beta = min pair sum of nu
    Q = np.array([[0.8, 0.1, 0.1], [0.2, 0.6, 0.2], [0.25, 0.25, 0.5]])
    from hmmclust.model import stationary_distribution
    nu = stationary_distribution(Q)
    p = HmmParams(nu=nu, Q=Q, emissions=tuple(Finite(np.eye(3)[j]) for j in range(3)))
    beta = chain_pair_floor(p, 50)
    assert beta == pytest.approx(float(np.sort(nu)[:2].sum()), abs=1e-10)


def test_chain_pair_floor_tracks_transient_marginals():
    # start concentrated on state 1; the floor must scan every step's marginal
    Q = np.array([[0.5, 0.25, 0.25], [0.1, 0.8, 0.1], [0.1, 0.1, 0.8]])
    p = HmmParams(nu=(1.0, 0.0, 0.0), Q=Q,
                  emissions=tuple(Finite(np.eye(3)[j]) for j in range(3)))
    mus = [np.array([1.0, 0.0, 0.0])]
    for _ in range(9):
        mus.append(mus[-1] @ Q)
    want = min(float(np.sort(m)[:2].sum()) for m in mus)
    assert chain_pair_floor(p, 10) == pytest.approx(want, abs=ATOL)


def test_hmm_bounds_two_states_high_precision():
    p = HmmParams(nu=(0.6, 0.4), Q=((0.8, 0.2), (0.3, 0.7)),
                  emissions=(Finite((0.9, 0.1)), Finite((0.2, 0.8))))
    n = 500
    hb = hmm_bounds(p, n)
    delta = mp.mpf("0.2")
    assert hb.delta == pytest.approx(0.2, abs=ATOL)
    assert hb.rho0 == pytest.approx(float((1 - 2 * delta) / (1 - delta)), rel=RTOL_MP)
    ratio = (1 - delta) / delta
    alpha = 2 * mp.e * ratio**4 * (ratio * mp.sqrt(mp.log(2) / (2 * mp.mpf(n)))) ** (1 - mp.mpf(2) / n)
    assert hb.alpha_tilde_n == pytest.approx(float(alpha), rel=RTOL_MP)
    assert hb.beta is None and hb.xi_tilde_n is None


def test_hmm_bounds_three_states_high_precision():
    Q = np.array([[0.6, 0.2, 0.2], [0.25, 0.5, 0.25], [0.2, 0.2, 0.6]])
    from hmmclust.model import stationary_distribution
    nu = stationary_distribution(Q)
    p = HmmParams(nu=nu, Q=Q, emissions=tuple(Finite(np.eye(3)[j]) for j in range(3)))
    n = 2000
    hb = hmm_bounds(p, n, class_risk=0.05)
    d = mp.mpf("0.2")
    rho0 = (1 - 3 * d) / (1 - 2 * d)
    assert hb.rho0 == pytest.approx(float(rho0), rel=RTOL_MP)
    beta = mp.mpf(hb.beta)
    root = mp.sqrt(mp.log(6) / (2 * mp.mpf(n)))
    assert hb.xi_tilde_n == pytest.approx(float(5 / (beta * (1 - rho0)) * root), rel=RTOL_MP)
    assert hb.tail == pytest.approx(
        float(10 * mp.exp(-2 * n * (1 - rho0) ** 2 * beta**2 / 25)), rel=RTOL_MP)
    assert hb.lower_simple == pytest.approx(0.05 - float(root / (1 - rho0)), rel=1e-12)
    assert hb.lower_refined == pytest.approx((1 - hb.xi_tilde_n) * 0.05 - hb.tail, rel=1e-12)


def test_hmm_bounds_rejects_zero_delta():
    p = HmmParams(nu=(0.5, 0.5), Q=((1.0, 0.0), (0.0, 1.0)),
                  emissions=(Finite((1.0, 0.0)), Finite((0.0, 1.0))))
    with pytest.raises(ValueError, match="delta"):
        hmm_bounds(p, 100)


# --- near-optimality and the clustering sandwich ----------------------------------

def test_near_optimality_factor_is_reciprocal_shrinkage():
    rng = np.random.default_rng(SEED)
    p2 = random_finite_params(rng, 2, 3, iid=True)
    no = near_optimality_factors(p2, 10**6, epsilon_n=0.2)
    a = equivalence_factor_alpha_n(0.2, 10**6)
    assert no.shrinkage == pytest.approx(a, rel=1e-15)
    assert no.factor == pytest.approx(1.0 / (1.0 - a), rel=1e-12)
    assert no.additive == 0.0
    # small n drives the shrinkage past 1: the factor degrades to infinity
    assert near_optimality_factors(p2, 2, epsilon_n=0.0).factor == math.inf
    with pytest.raises(ValueError, match="epsilon_n"):
        near_optimality_factors(p2, 100)


def test_near_optimality_regimes_pick_matching_shrinkage():
    rng = np.random.default_rng(SEED)
    p3 = random_finite_params(rng, 3, 3, iid=True)
    no = near_optimality_factors(p3, 10**5)
    assert no.shrinkage == pytest.approx(
        iid_bounds_J_gt_2(p3.nu, 10**5).xi_n, rel=1e-15)
    dep = random_finite_params(rng, 2, 3)
    no2 = near_optimality_factors(dep, 10**5)
    assert no2.shrinkage == pytest.approx(
        hmm_bounds(dep, 10**5).alpha_tilde_n, rel=1e-15)
    assert no2.additive == 0.0


def test_clustering_sandwich_iid_two_states():
    p = iid_params((0.5, 0.5), (Finite((0.8, 0.2)), Finite((0.3, 0.7))))
    n = 10**6
    class_risk = bayes_class_risk_exact(p)
    eps = epsilon_from_class_risk(class_risk)
    cs = clustering_sandwich(p, n, epsilon_n=eps)
    lam = lambda_separation(p.emissions)
    a = equivalence_factor_alpha_n(eps, n)
    assert cs.lo == pytest.approx((1 - a) * 0.5 * lam, rel=1e-12)
    assert cs.hi == pytest.approx(0.5 * lam, rel=1e-12)
    assert cs.applicable
    with pytest.raises(ValueError, match="epsilon_n"):
        clustering_sandwich(p, n)


def test_clustering_sandwich_contains_exact_clustering_risk():
    rng = np.random.default_rng(SEED + 7)
    hits = 0
    for _ in range(10):
        p = random_finite_params(rng, 2, 3, iid=True)
        n = 5
        eps = epsilon_from_class_risk(bayes_class_risk_exact(p))
        cs = clustering_sandwich(p, n, epsilon_n=eps)
        clust = bayes_clust_risk_exact(p, n)
        assert clust <= cs.hi + 1e-12
        if cs.lo > 0:
            hits += 1
            assert clust >= cs.lo - 1e-12
    assert hits > 0    # the lower side must have been active at least once


def test_clustering_sandwich_many_state_preconditions():
    p = iid_params((0.4, 0.3, 0.3), tuple(Finite(np.eye(3)[j]) for j in range(3)))
    big = clustering_sandwich(p, 10**4)
    small = clustering_sandwich(p, 3)
    lam = lambda_separation(p.emissions)
    assert big.applicable and not small.applicable
    assert big.lo == pytest.approx(p.delta() * lam / 4.0, rel=1e-12)
    assert big.hi == pytest.approx((1 - 2 * p.delta()) * lam, rel=1e-12)
    assert "J > 2" in big.note


def test_clustering_sandwich_dependent_exposes_denominator():
    Q = np.array([[0.6, 0.2, 0.2], [0.25, 0.5, 0.25], [0.2, 0.2, 0.6]])
    from hmmclust.model import stationary_distribution
    p = HmmParams(nu=stationary_distribution(Q), Q=Q,
                  emissions=tuple(Finite(np.eye(3)[j]) for j in range(3)))
    strict = clustering_sandwich(p, 3000, precondition_denominator=15.0)
    loose = clustering_sandwich(p, 3000, precondition_denominator=50.0)
    assert "15.0" in strict.note and "50.0" in loose.note
    assert strict.lo == loose.lo            # only the precondition moves


# --- Gaussian SNR brackets ---------------------------------------------------------

def test_gaussian_snr_bounds_formulas():
    snr, lo, hi = gaussian_snr_bounds(0.0, 2.0, 1.0, delta=0.3)
    assert snr == pytest.approx(4.0)
    assert lo == pytest.approx(0.15 * math.exp(-1.0), rel=1e-15)
    assert hi == pytest.approx(0.7 * math.exp(-0.5), rel=1e-15)
    _, lo_dep, _ = gaussian_snr_bounds(0.0, 2.0, 1.0, delta=0.3, dependent=True)
    assert lo_dep == pytest.approx(0.09 / 0.7 / 2 * math.exp(-1.0), rel=1e-12)
    with pytest.raises(ValueError, match="sigma2"):
        gaussian_snr_bounds(0.0, 1.0, 0.0, delta=0.3)


def test_gaussian_snr_bounds_bracket_scaled_lambda():
    # delta*Lambda and (1-delta)*Lambda must respect the same exponential
    # envelope, by the classification sandwich with Lambda = 2 Phi(-sqrt(snr)/2)
    for d in (1.0, 2.0, 3.0):
        for delta in (0.2, 0.4):
            snr, lo, hi = gaussian_snr_bounds(0.0, d, 1.0, delta=delta)
            lam = 2.0 * norm.cdf(-math.sqrt(snr) / 2.0)
            assert lo <= delta * lam + 1e-15
            assert (1 - delta) * lam <= hi + 1e-15


# --- fast-rate diagnostic ------------------------------------------------------------

def test_fastrate_diagnostic_holds_with_exact_parameters():
    p = HmmParams(nu=(0.6, 0.4), Q=((0.8, 0.2), (0.3, 0.7)),
                  emissions=(Finite((0.9, 0.1)), Finite((0.2, 0.8))))
    out = fastrate_diagnostic(p, p, n=300, gamma=0.2, replicates=20, seed=SEED)
    assert out.tv_term == 0.0               # same model: TV distance is zero
    assert out.lhs <= out.rhs + 3 * out.lhs_se
    assert out.rhs == pytest.approx(out.bayes_term, abs=ATOL)


def test_fastrate_diagnostic_with_perturbed_model():
    p = HmmParams(nu=(0.6, 0.4), Q=((0.8, 0.2), (0.3, 0.7)),
                  emissions=(Finite((0.9, 0.1)), Finite((0.2, 0.8))))
    est = HmmParams(nu=(0.6, 0.4), Q=((0.75, 0.25), (0.35, 0.65)),
                    emissions=(Finite((0.88, 0.12)), Finite((0.22, 0.78))))
    out = fastrate_diagnostic(p, est, n=200, gamma=0.1, replicates=30, seed=SEED)
    assert out.lhs <= out.rhs + 3 * out.lhs_se
    with pytest.raises(ValueError, match="gamma"):
        fastrate_diagnostic(p, est, n=50, gamma=0.5)


# --- the flat report -----------------------------------------------------------------

def test_bound_report_iid_two_state_keys_and_consistency():
    p = iid_params((0.5, 0.5), (Finite((0.8, 0.2)), Finite((0.3, 0.7))))
    rep = bound_report(p, 1000)
    for key in ("J", "n", "delta", "Lambda", "class_sandwich_lo",
                "class_sandwich_hi", "class_risk", "epsilon_n", "gap_upper",
                "gap_lower_times_B", "alpha_n", "clust_sandwich_lo",
                "clust_sandwich_hi"):
        assert key in rep, key
        assert rep[key]["formula"]
    assert rep["class_risk"]["value"] == pytest.approx(bayes_class_risk_exact(p))
    eps = rep["epsilon_n"]["value"]
    assert rep["alpha_n"]["value"] == pytest.approx(
        equivalence_factor_alpha_n(eps, 1000), rel=1e-15)


def test_bound_report_many_state_and_dependent_keys():
    rng = np.random.default_rng(SEED)
    p3 = random_finite_params(rng, 3, 3, iid=True)
    rep3 = bound_report(p3, 500)
    assert {"beta", "xi_n", "clust_lower_simple", "clust_lower_refined"} <= set(rep3)
    dep = random_finite_params(rng, 2, 3)
    repd = bound_report(dep, 500)
    assert {"rho0", "alpha_tilde_n"} <= set(repd)
    assert "gap_upper" not in repd


def test_bound_report_continuous_carries_quadrature_error():
    g0 = GaussianMixture(components=((1.0, 0.0, 1.0),))
    g1 = GaussianMixture(components=((1.0, 3.0, 1.0),))
    rep = bound_report(iid_params((0.5, 0.5), (g0, g1)), 100)
    assert rep["Lambda_quad_error"]["value"] < 1e-10
