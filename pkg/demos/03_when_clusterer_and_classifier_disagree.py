"""
Two constructions where clustering beats classifying
====================================================

With independent labels and two states, the optimal clusterer IS the optimal
classifier's partition.  Outside that regime the two rules genuinely split.
This demo builds the two smallest counterexamples -- a sticky two-state
chain observed twice, and a three-state independent-labels Gaussian mixture
-- and verifies each disagreement by exact enumeration.
"""

import numpy as np

from hmmclust.inference import bayes_classify, smooth
from hmmclust.model import (Finite, GaussianMixture, HmmParams, iid_params,
                            stationary_distribution)
from hmmclust.oracle import (bayes_clusterer_exact, conditional_expected_loss,
                             divergence_witness_iid_J3,
                             hmm_n2_same_class_condition,
                             hmm_n2_same_cluster_condition)
from hmmclust.partitions import partition_from_labels

# --- 1. Dependence breaks the coincidence at n = 2 -------------------------
#
# A strongly alternating chain (both states flip with probability 0.9),
# started from its stationary law, with Bernoulli emissions succeeding with
# probability 0.4 and 0.6.  Observe two successes.
Q = np.array([[0.1, 0.9], [0.9, 0.1]])
params = HmmParams(nu=stationary_distribution(Q), Q=Q,
                   emissions=(Finite((0.6, 0.4)), Finite((0.4, 0.6))))
y = np.array([2, 2])

# Closed-form decision conditions at n = 2.  Same cluster iff lhs >= rhs;
# same class label iff the product is positive.
lhs, rhs = hmm_n2_same_cluster_condition(params, y)
prod = hmm_n2_same_class_condition(params, y)
print("same-cluster condition: %.4f >= %.4f ? %s" % (lhs, rhs, lhs >= rhs))
print("same-class condition  : %.6f > 0 ? %s" % (prod, prod > 0))

# The chain wants to alternate, so the clusterer splits the two indices;
# but marginally each index leans to state 2, so the classifier does not.
decision = bayes_clusterer_exact(params, y)
labels = bayes_classify(params, y)
print("clusterer  :", decision.partition.blocks)
print("classifier :", labels.tolist(), "->",
      partition_from_labels(labels).blocks)

rival = conditional_expected_loss(params, y, partition_from_labels(labels))
print("conditional risk %.4f (clusterer) vs %.4f (classifier)\n"
      % (decision.conditional_risk, rival))

# --- 2. Three states break it even without dependence ----------------------
#
# Independent labels, nu = (0.4, 0.4, 0.2), unit Gaussians at means 1, 2, 3.
# Near the middle the runner-up states TOGETHER outweigh the winner, which
# is exactly the divergence condition; the helper then searches tiny
# observation vectors for a concrete disagreement.
mix = iid_params((0.4, 0.4, 0.2),
                 (GaussianMixture(((1.0, 1.0, 1.0),)),
                  GaussianMixture(((1.0, 2.0, 1.0),)),
                  GaussianMixture(((1.0, 3.0, 1.0),))))
report = divergence_witness_iid_J3(mix)
print("divergence condition holds:", report.condition_holds)
w = report.witness
print("witness y  :", np.round(w["y"], 3).tolist())
print("clusterer  :", w["clusterer"], " risk %.4f" % w["clusterer_risk"])
print("classifier :", w["classifier"], " risk %.4f" % w["classifier_risk"])

# Re-derive the disagreement from scratch to show nothing is cached in the
# report: the posterior puts both indices individually on state 2, yet
# lumping them together is conditionally worse than splitting.
yw = np.asarray(w["y"])
print("argmax posterior:", (np.argmax(smooth(mix, yw).probs, axis=1) + 1).tolist())
again = bayes_clusterer_exact(mix, yw)
print("enumeration agrees:", again.partition.blocks == w["clusterer"])
