"""
Risk bounds you can evaluate, next to risks you can enumerate
=============================================================

Every bound in the package is a plain function of the model constants
(delta, Lambda, beta, rho0, ...) and n.  At desk scale the optimal risks
themselves are exactly computable, so this demo puts bounds and truths side
by side: the classification-risk sandwich, the classification-to-clustering
gap envelope with its alpha_n equivalence factor, the J > 2 lower bounds,
and the one-stop bound_report.
"""

import numpy as np

from hmmclust.bounds import (bound_report, classification_sandwich,
                             clustering_sandwich, epsilon_from_class_risk,
                             equivalence_factor_alpha_n, gap_bounds_iid_J2,
                             gaussian_snr_bounds, iid_bounds_J_gt_2,
                             lambda_separation)
from hmmclust.model import Finite, HmmParams, iid_params
from hmmclust.oracle import bayes_class_risk_exact, bayes_clust_risk_exact

# --- the separation Lambda and the classification sandwich -----------------
#
# Lambda integrates how much the emissions overlap: 0 for disjoint supports,
# J - 1 for identical emissions.  For two states it is 1 - TV(f1, f2).
params = iid_params((0.55, 0.45),
                    (Finite((0.7, 0.2, 0.1)), Finite((0.2, 0.3, 0.5))))
lam = lambda_separation(params.emissions)
lo, hi = classification_sandwich(params)
risk = bayes_class_risk_exact(params)
print("Lambda = %.4f" % lam)
print("sandwich: %.4f <= class risk %.4f <= %.4f" % (lo, risk, hi))

# --- the gap envelope and the equivalence factor, two states ---------------
#
# Clustering never loses to classifying, and for independent labels the gap
# closes geometrically in n.  Enumerate both risks exactly at small n and
# watch the envelope track the truth.
eps = epsilon_from_class_risk(risk)
print("\nepsilon = 1/2 - class risk = %.4f" % eps)
print("   n   class - clust   gap upper     alpha_n")
for n in (2, 4, 6, 8):
    clust = bayes_clust_risk_exact(params, n)
    gap = risk - clust
    gb = gap_bounds_iid_J2(eps, n)
    alpha = equivalence_factor_alpha_n(eps, n)
    print("  %2d    %.6f      %.6f     %8.3f" % (n, gap, gb.upper, alpha))
print("(clust risk >= (1 - alpha_n) * class risk; the factor bites once"
      " alpha_n < 1)")

# --- more states: the beta-driven lower bounds ------------------------------
nu3 = (0.5, 0.3, 0.2)
print("\nJ = 3, nu =", nu3)
for n in (10**2, 10**4, 10**6):
    ib = iid_bounds_J_gt_2(nu3, n, class_risk=0.05)
    print("  n=%-8d beta=%.2f xi_n=%9.3g lower_simple=%9.3g lower_refined=%9.3g"
          % (n, ib.beta, ib.xi_n, ib.lower_simple, ib.lower_refined))

# --- Gaussian emissions: bounds in terms of the signal-to-noise ratio ------
snr, g_lo, g_hi = gaussian_snr_bounds(0.0, 2.0, 1.0, delta=0.3)
print("\nGaussians 2 apart, unit variance, delta=0.3:")
print("  snr=%.1f   %.4g <= clustering risk <= %.4g" % (snr, g_lo, g_hi))

# --- a dependent chain, end to end ------------------------------------------
#
# bound_report collects every applicable constant for (model, n), each with
# the formula it was computed from.
chain = HmmParams(nu=(0.5, 0.5), Q=((0.8, 0.2), (0.2, 0.8)),
                  emissions=(Finite((0.7, 0.3)), Finite((0.4, 0.6))))
report = bound_report(chain, n=10_000, class_risk=0.18)
for key in ("delta", "Lambda", "class_sandwich_lo", "class_sandwich_hi",
            "rho0", "alpha_tilde_n"):
    entry = report[key]
    print("%-18s %10.6g   (%s)" % (key, entry["value"], entry["formula"]))

# The dependent-chain equivalence factor is honest about its constants: at
# delta = 0.2 it stays above 1 (so the clustering floor is vacuous) until n
# reaches the hundreds of millions.  Watch it cross.
print("\ndependent-chain clustering sandwich as n grows:")
for n in (10**4, 10**8, 10**10):
    cs = clustering_sandwich(chain, n=n, epsilon_n=0.32)
    print("  n=%-12.0e [%9.4g, %.4g]" % (n, cs.lo, cs.hi))
