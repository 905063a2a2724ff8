"""Set partitions of {1..n} and the misclassification-error distance.

The distance between two partitions is 1 - (best total overlap)/n, where the
best overlap maximizes sum |block_A intersect block_B| over matchings between
blocks.  Applied to label sequences through partition_from_labels, it equals
the smallest relabeled Hamming error min_tau (1/n) #{i : h_i != tau(x_i)} —
both forms are implemented and cross-checked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

MAX_ENUM_N = 12        # partition enumeration guard
FACTORIAL_CUTOFF = 6   # exhaust all J! permutations up to here, assignment solver beyond


@dataclass(frozen=True)
class Partition:
    """Blocks as a tuple of tuples of 1-based indices, in canonical form
    (each block ascending, blocks ordered by smallest element)."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(i) for i in blk)) for blk in self.blocks)
        if any(len(blk) == 0 for blk in blocks):
            raise ValueError("empty block")
        blocks = tuple(sorted(blocks, key=lambda blk: blk[0]))
        seen = [i for blk in blocks for i in blk]
        n = len(seen)
        if sorted(seen) != list(range(1, n + 1)):
            raise ValueError("blocks must partition {1..n}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self):
        return sum(len(blk) for blk in self.blocks)

    def label_array(self):
        """0-based block id per index, as an int array of length n."""
        out = np.empty(self.n, dtype=np.int64)
        for b, blk in enumerate(self.blocks):
            out[np.asarray(blk) - 1] = b
        return out


def partition_from_labels(labels):
    """Partition induced by a label sequence: i ~ j iff labels_i == labels_j."""
    labels = np.asarray(labels)
    groups = {}
    for i, lab in enumerate(labels.tolist(), start=1):
        groups.setdefault(lab, []).append(i)
    return Partition(tuple(tuple(g) for g in groups.values()))


def _overlap_matrix(A, B):
    la, lb = A.label_array(), B.label_array()
    k = max(len(A.blocks), len(B.blocks))
    W = np.zeros((k, k))
    np.add.at(W, (la, lb), 1.0)
    return W


def misclassification_loss(A, B):
    """Misclassification-error distance between two partitions of {1..n}.

    1 - (1/n) * max-weight matching of the block-overlap bipartite graph,
    solved exactly by the assignment algorithm on a zero-padded square matrix.
    """
    if A.n != B.n:
        raise ValueError(f"partitions of different ground sets (n={A.n} vs {B.n})")
    W = _overlap_matrix(A, B)
    rows, cols = linear_sum_assignment(W, maximize=True)
    return 1.0 - W[rows, cols].sum() / A.n


def _permutations_array(J):
    return np.array(list(itertools.permutations(range(J))), dtype=np.int64)


def _confusion(h, x, J):
    C = np.zeros((J, J))
    np.add.at(C, (np.asarray(h) - 1, np.asarray(x) - 1), 1.0)
    return C


def permutation_overlap_loss(h, x, J=None):
    """min over permutations tau of (1/n) #{i : h_i != tau(x_i)}.

    Exact: all J! permutations are tried for J <= 6, the assignment algorithm
    on the J x J confusion matrix beyond.
    """
    h = np.asarray(h)
    x = np.asarray(x)
    if len(h) != len(x):
        raise ValueError("label sequences of different lengths")
    if J is None:
        J = int(max(h.max(), x.max()))
    C = _confusion(h, x, J)
    if J <= FACTORIAL_CUTOFF:
        perms = _permutations_array(J)
        best = C[perms, np.arange(J)].sum(axis=1).max()
    else:
        rows, cols = linear_sum_assignment(C, maximize=True)
        best = C[rows, cols].sum()
    return 1.0 - best / len(h)


def best_permutation_alignment(pred, truth, J=None):
    """Minimizing permutation and its error rate.

    Returns (tau, rate) where tau is a length-J tuple with tau[s-1] = the
    predicted label matched to true state s, and rate = the relabeled error.
    """
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if J is None:
        J = int(max(pred.max(), truth.max()))
    C = _confusion(pred, truth, J)
    if J <= FACTORIAL_CUTOFF:
        perms = _permutations_array(J)
        gains = C[perms, np.arange(J)].sum(axis=1)
        tau0 = perms[int(np.argmax(gains))]
        best = gains.max()
    else:
        rows, cols = linear_sum_assignment(C, maximize=True)
        tau0 = np.empty(J, dtype=np.int64)
        tau0[cols] = rows
        best = C[rows, cols].sum()
    tau = tuple(int(t) + 1 for t in tau0)
    return tau, 1.0 - best / len(pred)


def _rgs_next(a, m, kmax):
    """Advance a restricted growth string in place; returns False past the end.

    a[i] may run over 0..min(m[i-1]+1, kmax-1) where m[i-1] = max(a[:i]).
    """
    n = len(a)
    for i in range(n - 1, 0, -1):
        if a[i] <= m[i - 1] and a[i] + 1 <= kmax - 1:
            a[i] += 1
            m[i] = max(m[i - 1], a[i])
            for j in range(i + 1, n):
                a[j] = 0
                m[j] = m[j - 1]
            return True
    return False


def restricted_growth_strings(n, max_blocks):
    """All restricted growth strings of length n with values < max_blocks,
    in lexicographic order, as an (M, n) int array."""
    a = np.zeros(n, dtype=np.int64)
    m = np.zeros(n, dtype=np.int64)
    out = [a.copy()]
    while _rgs_next(a, m, max_blocks):
        out.append(a.copy())
    return np.array(out)


def enumerate_partitions(n, max_blocks=None):
    """Yield every set partition of {1..n} with at most max_blocks blocks,
    each exactly once, in restricted-growth-string order.

    >>> sum(1 for _ in enumerate_partitions(4))   # Bell(4)
    15
    """
    if n > MAX_ENUM_N:
        raise ValueError(f"n={n} above enumeration limit {MAX_ENUM_N}")
    if max_blocks is None:
        max_blocks = n
    if max_blocks < 1:
        raise ValueError("max_blocks must be >= 1")
    for rgs in restricted_growth_strings(n, max_blocks):
        yield partition_from_labels(rgs)
