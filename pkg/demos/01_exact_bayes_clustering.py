"""
Classifying vs clustering the states of a hidden Markov chain
=============================================================

Build a small two-state chain with overlapping finite emissions, sample a
short trajectory, and compare three objects that are easy to conflate: the
smoothing posteriors, the Bayes classifier (argmax per index), and the exact
Bayes clusterer (the partition minimizing the conditional expected
misclassification loss).  At this scale everything is exactly enumerable.
"""

import numpy as np

from hmmclust.inference import bayes_classify, smooth
from hmmclust.model import Finite, HmmParams, iid_params, sample_trajectory
from hmmclust.oracle import (bayes_clusterer_exact, coincidence_check_iid_J2,
                             conditional_expected_loss)
from hmmclust.partitions import misclassification_loss, partition_from_labels

SEED = 7

# A sticky two-state chain.  Both emissions put mass on both letters, so no
# single observation settles its hidden state.
params = HmmParams(nu=(0.5, 0.5),
                   Q=((0.85, 0.15), (0.2, 0.8)),
                   emissions=(Finite((0.75, 0.25)), Finite((0.35, 0.65))))

traj = sample_trajectory(params, 8, seed=SEED)
print("observations :", traj.y.astype(int).tolist())
print("hidden states:", traj.x.astype(int).tolist())

# The smoothing distribution conditions each index on the WHOLE observation
# vector; the forward-backward recursions compute it in O(n J^2).
table = smooth(params, traj.y)
print("\nP(X_i = 1 | Y):", np.round(table.probs[:, 0], 3).tolist())

# The Bayes classifier thresholds those posteriors index by index.
labels = bayes_classify(params, traj.y)
print("classifier   :", labels.tolist())

# The Bayes clusterer answers a different question: which PARTITION of the
# indices has the smallest expected misclassification distance to the true
# one?  It is found here by enumerating every candidate partition against
# the exact joint posterior.
decision = bayes_clusterer_exact(params, traj.y)
print("clusterer    :", decision.partition.blocks,
      " (conditional risk %.4f)" % decision.conditional_risk)

# Score both against the partition the hidden states actually induced.
truth = partition_from_labels(traj.x)
print("\nloss(clusterer, truth)  = %.4f"
      % misclassification_loss(decision.partition, truth))
print("loss(classifier, truth) = %.4f"
      % misclassification_loss(partition_from_labels(labels), truth))

# The classifier's partition can never beat the clusterer in conditional
# expectation -- the clusterer minimizes it by construction.
rival = conditional_expected_loss(params, traj.y,
                                  partition_from_labels(labels))
print("conditional risks: clusterer %.4f <= classifier %.4f"
      % (decision.conditional_risk, rival))

# With INDEPENDENT labels and two states the two rules coincide: on every
# draw without a tied posterior, the clusterer returns exactly the
# classifier's partition.  Check it on 200 sampled vectors.
iid = iid_params((0.6, 0.4), params.emissions)
report = coincidence_check_iid_J2(iid, n=6, trials=200, seed=SEED)
print("\niid J=2 coincidence: %d checked, %d ties skipped, %d violations"
      % (report.checked, report.ties_skipped, len(report.violations)))
