"""
The misclassification distance between partitions
=================================================

Clustering quality is scored by a distance on set partitions: one minus the
largest fraction of indices that a matching between the blocks of the two
partitions can explain.  This demo walks the small-scale combinatorics --
enumeration in canonical order, Bell counts -- and shows the identity that
makes the distance computable two ways: as a maximum-weight matching between
blocks, or as the best relabeling of the underlying label vectors.
"""

import numpy as np

from hmmclust.partitions import (best_permutation_alignment,
                                 enumerate_partitions,
                                 misclassification_loss, partition_from_labels,
                                 permutation_overlap_loss)

# Every partition of {1..4}, in restricted-growth-string order.  The count,
# 15, is the fourth Bell number.
parts = list(enumerate_partitions(4))
print("partitions of {1..4}: %d" % len(parts))
for p in parts[:5]:
    print("  ", p.blocks)
print("   ...")

# The distance between two concrete partitions.  {1,2}{3,4} vs {1,3}{2,4}:
# any matching of blocks explains at most 2 of the 4 indices.
A = partition_from_labels([1, 1, 2, 2])
B = partition_from_labels([1, 2, 1, 2])
print("\nloss({12}{34}, {13}{24}) = %.2f" % misclassification_loss(A, B))

# Identity: for label vectors h and x, the partition distance between the
# partitions they induce equals the smallest mislabeling rate over all
# relabelings (permutations) of h.  Both routes are exact -- equal floats,
# not merely close.
rng = np.random.default_rng(11)
h = rng.integers(1, 4, size=9)
x = rng.integers(1, 4, size=9)
via_partitions = misclassification_loss(partition_from_labels(h),
                                        partition_from_labels(x))
via_permutation = permutation_overlap_loss(h, x, 3)
print("\nh =", h.tolist())
print("x =", x.tolist())
print("matching route    : %.6f" % via_partitions)
print("permutation route : %.6f" % via_permutation)
print("identical?        :", via_partitions == via_permutation)

# The aligning permutation itself is useful for reading confusion patterns:
# it says which predicted label plays the role of which true one.
tau, rate = best_permutation_alignment(h, x, 3)
print("\nbest alignment tau =", tau, " mislabeling rate %.4f" % rate)

# The distance is a genuine metric; spot-check the triangle inequality on a
# random triple of partitions of {1..7}.
labels = rng.integers(1, 4, size=(3, 7))
P = [partition_from_labels(l) for l in labels]
d01 = misclassification_loss(P[0], P[1])
d12 = misclassification_loss(P[1], P[2])
d02 = misclassification_loss(P[0], P[2])
print("\ntriangle: %.4f <= %.4f + %.4f -> %s"
      % (d02, d01, d12, d02 <= d01 + d12 + 1e-15))
