"""Closed-form evaluators for the risk bounds and their constants.

Each function computes a stated expression — nothing here re-derives or
certifies anything.  Conventions: delta = min entry of Q, epsilon_n =
1/2 - (optimal classification risk), rho0 = (1 - J*delta)/(1 - (J-1)*delta),
beta = the smallest probability that X_i lands in a fixed pair of states.

The two-sided classification bounds and their clustering counterparts all
scale with Lambda = integral of min_{x0} sum_{x != x0} f_x, the overlap
functional of the emission densities (for J = 2 it is 1 - TV(F1, F2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np
from scipy.integrate import simpson

from .inference import bayes_classify, smooth, smoothing_tv_distance
from .model import (density_matrix, is_continuous, quadrature_grid,
                    sample_trajectory, stationary_distribution)

E = math.e


def lambda_separation(emissions, nodes=None):
    """Lambda = integral (or sum) of [sum_x f_x - max_x f_x] over the space."""
    if is_continuous(emissions[0]):
        xs = quadrature_grid(emissions) if nodes is None else quadrature_grid(emissions, nodes)
        f = np.column_stack([e.density(xs) for e in emissions])
        return float(simpson(f.sum(axis=1) - f.max(axis=1), x=xs))
    f = np.stack([e.pmf for e in emissions]).T
    return float((f.sum(axis=1) - f.max(axis=1)).sum())


def lambda_separation_checked(emissions):
    """Lambda together with a quadrature-error estimate (difference against a
    half-resolution grid; 0 for finite alphabets)."""
    lam = lambda_separation(emissions)
    if not is_continuous(emissions[0]):
        return lam, 0.0
    coarse = lambda_separation(emissions, nodes=2**13 + 1)
    return lam, abs(lam - coarse)


def epsilon_from_class_risk(class_risk):
    """epsilon_n = 1/2 - optimal classification risk."""
    return 0.5 - class_risk


def classification_sandwich(params, lam=None):
    """Two-sided bounds on the optimal classification risk.

    Independent labels: (delta*Lambda, (1-(J-1)*delta)*Lambda); dependent
    chain: the lower bound pays an extra delta/(1-(J-1)*delta) factor.  The two
    sides meet at Lambda/J when delta = 1/J.

    The dependent-chain lower bound assumes the chain starts from its
    stationary law.  A strongly informative initial distribution (nu far from
    stationary) can push the exact risk below it at small n: the first index
    is then almost free, which no function of (delta, Lambda) alone can see.
    """
    delta = params.delta()
    if delta <= 0.0:
        raise ValueError("bounds require delta = min Q > 0")
    if lam is None:
        lam = lambda_separation(params.emissions)
    J = params.J
    hi = (1.0 - (J - 1) * delta) * lam
    if params.is_iid():
        lo = delta * lam
    else:
        lo = delta**2 * lam / (1.0 - (J - 1) * delta)
    return lo, hi


def _log_odds(eps):
    return math.log((1.0 + 2.0 * eps) / (1.0 - 2.0 * eps))


@dataclass(frozen=True)
class GapBounds:
    """Upper and lower envelopes for (optimal classification risk) -
    (optimal clustering risk) with independent labels and J = 2.  The lower
    bound carries an unspecified universal constant: the reported value sets
    it to 1 and is only meaningful for n >= 100."""

    upper: float
    lower_times_B: float
    lower_valid: bool
    constant_B_unspecified: bool = True


def gap_bounds_iid_J2(epsilon_n, n):
    """Evaluate the gap envelopes at (epsilon_n, n); see GapBounds."""
    if not 0.0 <= epsilon_n < 0.5:
        raise ValueError("epsilon_n must lie in [0, 1/2)")
    root = math.sqrt(math.pi / (2.0 * n))
    if epsilon_n > 0.0:
        kappa = _log_odds(epsilon_n)
        upper = min((1.0 - 4.0 * epsilon_n**2) ** (n / 2.0) / (n / 2.0 * kappa), root)
        inflation = 1.0 + 6.8 / max(1.0, math.sqrt(n) * epsilon_n)
        lower = min((1.0 - 4.0 * epsilon_n**2) ** (n / 2.0 * inflation)
                    / (n / 2.0 * kappa), 1.0 / math.sqrt(n))
    else:
        upper = root
        lower = 1.0 / math.sqrt(n)
    return GapBounds(upper=upper, lower_times_B=lower, lower_valid=n >= 100)


def equivalence_factor_alpha_n(epsilon_n, n):
    """alpha_n such that the optimal clustering risk is >= (1 - alpha_n) times
    the optimal classification risk (independent labels, J = 2)."""
    if not 0.0 <= epsilon_n < 0.5:
        raise ValueError("epsilon_n must lie in [0, 1/2)")
    second = math.sqrt(math.pi / (2.0 * n)) / (1.0 - 2.0 * epsilon_n)
    if epsilon_n == 0.0:
        return 2.0 * second
    first = (2.0 * (1.0 + epsilon_n) * (1.0 - 4.0 * epsilon_n**2) ** ((n - 2) / 2.0)
             / (n * _log_odds(epsilon_n)))
    return 2.0 * min(first, second)


def _beta_pair_min(weights):
    """Smallest sum of two entries = sum of the two smallest entries."""
    w = np.sort(np.asarray(weights))
    return float(w[0] + w[1])


@dataclass(frozen=True)
class IidBounds:
    beta: float
    xi_n: float
    tail: float
    lower_simple: float | None
    lower_refined: float | None


def iid_bounds_J_gt_2(nu, n, class_risk=None):
    """Lower bounds on the optimal clustering risk, independent labels, J > 2:
    class_risk - sqrt(log(J!)/(2n)) and (1 - xi_n)*class_risk - J^2 e^{-n beta/8},
    with beta = min_{j != k}(nu_j + nu_k)."""
    nu = np.asarray(nu, dtype=float)
    J = len(nu)
    beta = _beta_pair_min(nu)
    root = math.sqrt(math.lgamma(J + 1) / (2.0 * n))
    xi_n = (4.0 * E / beta) * root ** (1.0 - 4.0 / (n * beta))
    tail = J**2 * math.exp(-n * beta / 8.0)
    lower_simple = None if class_risk is None else class_risk - root
    lower_refined = None if class_risk is None else (1.0 - xi_n) * class_risk - tail
    return IidBounds(beta=beta, xi_n=xi_n, tail=tail,
                     lower_simple=lower_simple, lower_refined=lower_refined)


def chain_pair_floor(params, n):
    """beta for a dependent chain: min over i <= n and state pairs {j, k} of
    P(X_i in {j, k}), by exact marginal propagation nu, nu Q, nu Q^2, ...
    Equals min_{j != k}(nu_j + nu_k) when nu is stationary."""
    mu = params.nu.copy()
    beta = _beta_pair_min(mu)
    for _ in range(1, n):
        mu = mu @ params.Q
        beta = min(beta, _beta_pair_min(mu))
    return beta


@dataclass(frozen=True)
class HmmBounds:
    delta: float
    rho0: float
    alpha_tilde_n: float | None
    beta: float | None
    xi_tilde_n: float | None
    tail: float | None
    lower_simple: float | None
    lower_refined: float | None


def hmm_bounds(params, n, class_risk=None):
    """Dependent-chain analogues: alpha_tilde_n for J = 2; for J > 2 the pair
    (xi_tilde_n, tail) built from rho0 and the pair floor beta."""
    delta = params.delta()
    if delta <= 0.0:
        raise ValueError("bounds require delta = min Q > 0")
    J = params.J
    rho0 = (1.0 - J * delta) / (1.0 - (J - 1) * delta)
    if J == 2:
        ratio = (1.0 - delta) / delta
        alpha_tilde = (2.0 * E * ratio**4
                       * (ratio * math.sqrt(math.log(2.0) / (2.0 * n))) ** (1.0 - 2.0 / n))
        return HmmBounds(delta=delta, rho0=rho0, alpha_tilde_n=alpha_tilde,
                         beta=None, xi_tilde_n=None, tail=None,
                         lower_simple=None, lower_refined=None)
    beta = chain_pair_floor(params, n)
    root = math.sqrt(math.lgamma(J + 1) / (2.0 * n))
    xi_tilde = 5.0 / (beta * (1.0 - rho0)) * root
    tail = (J**2 + 1) * math.exp(-2.0 * n * (1.0 - rho0) ** 2 * beta**2 / 25.0)
    lower_simple = None if class_risk is None else class_risk - root / (1.0 - rho0)
    lower_refined = None if class_risk is None else (1.0 - xi_tilde) * class_risk - tail
    return HmmBounds(delta=delta, rho0=rho0, alpha_tilde_n=None, beta=beta,
                     xi_tilde_n=xi_tilde, tail=tail,
                     lower_simple=lower_simple, lower_refined=lower_refined)


@dataclass(frozen=True)
class NearOptimality:
    """Multiplicative envelope for clustering with the plugged-in classifier:
    optimal clustering risk <= risk of the classifier partition <=
    factor * (optimal clustering risk + additive)."""

    factor: float
    additive: float
    shrinkage: float   # alpha_n / alpha_tilde_n / xi_n / xi_tilde_n, whichever applies


def near_optimality_factors(params, n, epsilon_n=None, class_risk=None):
    """Near-optimality envelopes per regime (independent/dependent, J = 2 / J > 2)."""
    if epsilon_n is None and class_risk is not None:
        epsilon_n = epsilon_from_class_risk(class_risk)
    J = params.J
    if params.is_iid():
        if J == 2:
            if epsilon_n is None:
                raise ValueError("J = 2 requires epsilon_n (or class_risk)")
            a = equivalence_factor_alpha_n(epsilon_n, n)
            return NearOptimality(factor=1.0 / (1.0 - a) if a < 1 else math.inf,
                                  additive=0.0, shrinkage=a)
        ib = iid_bounds_J_gt_2(params.nu, n)
        return NearOptimality(factor=1.0 / (1.0 - ib.xi_n) if ib.xi_n < 1 else math.inf,
                              additive=ib.tail, shrinkage=ib.xi_n)
    hb = hmm_bounds(params, n)
    if J == 2:
        a = hb.alpha_tilde_n
        return NearOptimality(factor=1.0 / (1.0 - a) if a < 1 else math.inf,
                              additive=0.0, shrinkage=a)
    return NearOptimality(factor=1.0 / (1.0 - hb.xi_tilde_n) if hb.xi_tilde_n < 1 else math.inf,
                          additive=hb.tail, shrinkage=hb.xi_tilde_n)


@dataclass(frozen=True)
class ClusteringSandwich:
    lo: float
    hi: float
    applicable: bool
    note: str


def clustering_sandwich(params, n, epsilon_n=None, lam=None,
                        precondition_denominator=15.0):
    """Two-sided bounds on the optimal clustering risk in terms of Lambda.

    J = 2 reuses the equivalence factors; J > 2 requires a smallness
    precondition on the tail terms (whose exponent denominator is exposed as a
    parameter) and then pays a fixed factor 4.
    """
    delta = params.delta()
    if lam is None:
        lam = lambda_separation(params.emissions)
    J = params.J
    iid = params.is_iid()
    hi = (1.0 - (J - 1) * delta) * lam if J > 2 else (1.0 - delta) * lam
    if J == 2:
        if iid:
            if epsilon_n is None:
                raise ValueError("J = 2 independent case requires epsilon_n")
            a = equivalence_factor_alpha_n(epsilon_n, n)
            return ClusteringSandwich(lo=(1.0 - a) * delta * lam, hi=hi,
                                      applicable=True,
                                      note="independent labels, J = 2")
        a = hmm_bounds(params, n).alpha_tilde_n
        return ClusteringSandwich(lo=delta**2 * (1.0 - a) * lam / (1.0 - delta), hi=hi,
                                  applicable=True, note="dependent chain, J = 2")
    if iid:
        ib = iid_bounds_J_gt_2(params.nu, n)
        ok = delta * lam >= 4.0 * ib.tail and ib.xi_n <= 0.5
        return ClusteringSandwich(lo=delta * lam / 4.0, hi=hi, applicable=ok,
                                  note="independent labels, J > 2; needs "
                                       "delta*Lambda >= 4*tail and xi_n <= 1/2")
    hb = hmm_bounds(params, n)
    tail = (J**2 + 1) * math.exp(-2.0 * n * (1.0 - hb.rho0) ** 2 * hb.beta**2
                                 / precondition_denominator)
    ok = (delta**2 * lam >= 4.0 * (1.0 - (J - 1) * delta) * tail
          and hb.xi_tilde_n <= 0.5)
    return ClusteringSandwich(lo=delta**2 * lam / (4.0 * (1.0 - delta)), hi=hi,
                              applicable=ok,
                              note="dependent chain, J > 2; precondition tail "
                                   f"exponent denominator = {precondition_denominator}")


def gaussian_snr_bounds(mu0, mu1, sigma2, delta, dependent=False):
    """Optimal clustering risk envelope for two Gaussian emissions with a
    common variance: returns (snr, lo, hi) with snr = (mu0-mu1)^2 / sigma2,
    lo = (a(delta)/2) e^{-snr/4}, hi = (1-delta) e^{-snr/8}, where a(delta) is
    delta (independent labels) or delta^2/(1-delta) (dependent chain)."""
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    snr = (mu0 - mu1) ** 2 / sigma2
    a = delta**2 / (1.0 - delta) if dependent else delta
    return snr, a / 2.0 * math.exp(-snr / 4.0), (1.0 - delta) * math.exp(-snr / 8.0)


@dataclass(frozen=True)
class FastRateDiagnostic:
    lhs: float
    rhs: float
    lhs_se: float
    bayes_term: float
    tv_term: float


def fastrate_diagnostic(params, est_params, n, gamma, replicates=50, seed=None):
    """Monte Carlo check of the plug-in excess-risk inequality: the plug-in
    classification risk (lhs) against BayesRisk/(1/2 - gamma) plus the mean
    fraction of indices whose smoothing laws under the two parameter sets
    differ by more than gamma in total variation (rhs)."""
    if not 0.0 < gamma < 0.5:
        raise ValueError("gamma must lie in (0, 1/2)")
    errs, exceeds, bayes = [], [], []
    for child in np.random.SeedSequence(seed).spawn(replicates):
        traj = sample_trajectory(params, n, child)
        labels = bayes_classify(est_params, traj.y)
        errs.append(np.mean(labels != traj.x))
        exceeds.append(np.mean(smoothing_tv_distance(params, est_params, traj.y) > gamma))
        bayes.append(np.mean(1.0 - smooth(params, traj.y).probs.max(axis=1)))
    errs = np.array(errs)
    bayes_term = float(np.mean(bayes)) / (0.5 - gamma)
    tv_term = float(np.mean(exceeds))
    return FastRateDiagnostic(lhs=float(errs.mean()), rhs=bayes_term + tv_term,
                              lhs_se=float(errs.std(ddof=1) / math.sqrt(len(errs))),
                              bayes_term=bayes_term, tv_term=tv_term)


def bound_report(params, n, class_risk=None, lam=None):
    """Every applicable constant/bound for (params, n) as a flat dict; each
    entry carries its defining formula for provenance."""
    from .oracle import bayes_class_risk_exact

    delta = params.delta()
    J = params.J
    if lam is None:
        lam = lambda_separation(params.emissions)
    report = {}

    def put(name, value, formula):
        report[name] = {"value": value if value is None else float(value),
                        "formula": formula}

    put("J", J, "number of states")
    put("n", n, "sequence length")
    put("delta", delta, "min entry of Q")
    put("Lambda", lam, "integral of sum_x f_x - max_x f_x")
    if is_continuous(params.emissions[0]):
        put("Lambda_quad_error", lambda_separation_checked(params.emissions)[1],
            "difference against a half-resolution Simpson grid")
    lo, hi = classification_sandwich(params, lam=lam)
    put("class_sandwich_lo", lo,
        "delta*Lambda (independent) or delta^2*Lambda/(1-(J-1)delta) (dependent)")
    put("class_sandwich_hi", hi, "(1-(J-1)delta)*Lambda")
    if class_risk is None and params.is_iid() and not is_continuous(params.emissions[0]):
        class_risk = bayes_class_risk_exact(params)
    eps = None if class_risk is None else epsilon_from_class_risk(class_risk)
    put("class_risk", class_risk, "optimal classification risk (exact or supplied)")
    put("epsilon_n", eps, "1/2 - class_risk")
    if params.is_iid():
        if J == 2 and eps is not None:
            gb = gap_bounds_iid_J2(eps, n)
            put("gap_upper", gb.upper,
                "min((1-4e^2)^(n/2)/((n/2)log((1+2e)/(1-2e))), sqrt(pi/2n))")
            put("gap_lower_times_B", gb.lower_times_B,
                "B*min((1-4e^2)^((n/2)(1+6.8/(1 v sqrt(n)e)))/(same denom), 1/sqrt(n)); "
                "B universal, unspecified; n >= 100")
            put("alpha_n", equivalence_factor_alpha_n(eps, n),
                "2*min(2(1+e)(1-4e^2)^((n-2)/2)/(n log((1+2e)/(1-2e))), sqrt(pi/2n)/(1-2e))")
        if J > 2:
            ib = iid_bounds_J_gt_2(params.nu, n, class_risk)
            put("beta", ib.beta, "min_{j!=k}(nu_j+nu_k)")
            put("xi_n", ib.xi_n, "(4e/beta)*sqrt(log(J!)/(2n))^(1-4/(n beta))")
            put("clust_lower_simple", ib.lower_simple, "class_risk - sqrt(log(J!)/(2n))")
            put("clust_lower_refined", ib.lower_refined,
                "(1-xi_n)*class_risk - J^2 exp(-n beta/8)")
    else:
        hb = hmm_bounds(params, n, class_risk)
        put("rho0", hb.rho0, "(1-J delta)/(1-(J-1) delta)")
        if J == 2:
            put("alpha_tilde_n", hb.alpha_tilde_n,
                "2e((1-d)/d)^4 * (((1-d)/d) sqrt(log2/2n))^(1-2/n)")
        else:
            put("beta", hb.beta, "min_i min_{j!=k} P(X_i in {j,k})")
            put("xi_tilde_n", hb.xi_tilde_n, "(5/(beta(1-rho0))) sqrt(log(J!)/(2n))")
            put("clust_lower_simple", hb.lower_simple,
                "class_risk - sqrt(log(J!)/(2n))/(1-rho0)")
            put("clust_lower_refined", hb.lower_refined,
                "(1-xi_tilde_n)*class_risk - (J^2+1)exp(-2n(1-rho0)^2 beta^2/25)")
    if J == 2 and (eps is not None or not params.is_iid()):
        cs = clustering_sandwich(params, n, epsilon_n=eps, lam=lam)
        put("clust_sandwich_lo", cs.lo, cs.note)
        put("clust_sandwich_hi", cs.hi, "(1-delta)*Lambda")
    return report
