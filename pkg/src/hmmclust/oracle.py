"""Exact small-n computations: joint posteriors, the optimal clusterer, exact
risks, and brute-force checkers for the classifier/clusterer (dis)agreement
phenomena.

Everything here enumerates — label sequences, observation sequences, set
partitions — so budgets are explicit and deliberately conservative.  These
routines are the ground truth the fast library code is tested against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .inference import batched_smooth, bayes_classify, smooth
from .model import (Finite, HmmParams, density_matrix, iid_params,
                    is_continuous, quadrature_grid, sample_trajectory,
                    stationary_distribution, validate)
from .partitions import (Partition, misclassification_loss,
                         partition_from_labels, restricted_growth_strings)

MAX_ORACLE_N = 10
MAX_SEQ_BUDGET = 10**6       # J^n cap for joint posteriors
MAX_LOSS_CELLS = 6 * 10**7   # (J^n x partitions) loss-table cap
MAX_PROP1_MATRICES = 2 * 10**5
RISK_TIE_TOL = 1e-12


def _all_label_seqs(k, n):
    """Every sequence in {0..k-1}^n as an (k^n, n) array, lexicographic."""
    m = k**n
    return np.array(np.unravel_index(np.arange(m), (k,) * n), dtype=np.int64).T


@lru_cache(maxsize=16)
def _perms(J):
    return np.array(list(itertools.permutations(range(J))), dtype=np.int64)


def _loss_matrix(seqs0, blocks0, J, chunk=256):
    """loss[m, g] between the partition of label sequence m and partition g.

    seqs0: (M, n) 0-based labels; blocks0: (G, n) 0-based block ids.  Works by
    counting block/state overlaps and maximizing over all J! state-to-block
    matchings (blocks never outnumber J here).
    """
    M, n = seqs0.shape
    G = blocks0.shape[0]
    perms = _perms(J)
    eye = np.eye(J)
    x_onehot = eye[seqs0]                      # (M, n, J)
    kb = int(blocks0.max()) + 1
    out = np.empty((M, G))
    for lo in range(0, G, chunk):
        gc = blocks0[lo:lo + chunk]
        g_onehot = np.zeros((gc.shape[0], n, J))
        g_onehot[np.arange(gc.shape[0])[:, None], np.arange(n)[None, :], gc] = 1.0
        C = np.einsum("mna,gnb->mgab", x_onehot, g_onehot)
        overlap = C[:, :, perms, np.arange(J)].sum(axis=-1)   # (M, gc, J!)
        out[:, lo:lo + gc.shape[0]] = overlap.max(axis=-1)
    return 1.0 - out / n


@lru_cache(maxsize=8)
def _partition_table(n, J):
    """(block-id array (G, n), list of Partition, loss table (J^n, G)), cached."""
    blocks0 = restricted_growth_strings(n, J)
    seqs0 = _all_label_seqs(J, n)
    if seqs0.shape[0] * blocks0.shape[0] > MAX_LOSS_CELLS:
        raise ValueError(f"loss table for n={n}, J={J} above budget")
    parts = [partition_from_labels(b) for b in blocks0]
    return blocks0, parts, _loss_matrix(seqs0, blocks0, J)


@dataclass(frozen=True)
class JointPosterior:
    """Full conditional law of X_{1:n} given y: sequences (1-based labels) with
    their probabilities."""

    sequences: np.ndarray   # (J^n, n), values 1..J
    probs: np.ndarray
    n: int
    J: int

    def as_dict(self):
        return {tuple(int(v) for v in row): float(p)
                for row, p in zip(self.sequences, self.probs)}

    def marginals(self):
        """(n, J) matrix of per-index posteriors — must agree with smoothing."""
        out = np.zeros((self.n, self.J))
        for i in range(self.n):
            np.add.at(out[i], self.sequences[:, i] - 1, self.probs)
        return out


def joint_posterior(params, y):
    """P(X_{1:n} = x | y) for every x, by direct enumeration of J^n sequences."""
    y = np.asarray(y)
    n = len(y)
    J = params.J
    if n > MAX_ORACLE_N or J**n > MAX_SEQ_BUDGET:
        raise ValueError(f"joint posterior budget exceeded (n={n}, J={J})")
    b = density_matrix(params, y)
    seqs0 = _all_label_seqs(J, n)
    w = params.nu[seqs0[:, 0]] * b[0, seqs0[:, 0]]
    for i in range(1, n):
        w = w * params.Q[seqs0[:, i - 1], seqs0[:, i]] * b[i, seqs0[:, i]]
    total = w.sum()
    if total <= 0.0:
        raise ValueError("all label sequences have zero likelihood")
    return JointPosterior(sequences=seqs0 + 1, probs=w / total, n=n, J=J)


@dataclass(frozen=True)
class ClustererDecision:
    """Optimal partition given y, its conditional expected loss, and the gap
    to the runner-up partition (0 means a tie)."""

    partition: Partition
    conditional_risk: float
    runner_up_gap: float


def _conditional_risks(params, y):
    jp = joint_posterior(params, y)
    blocks0, parts, L = _partition_table(jp.n, jp.J)
    return jp, parts, jp.probs @ L


def bayes_clusterer_exact(params, y):
    """The partition minimizing E[loss(Pi_n, g) | y] over all partitions with
    at most J blocks.  Ties resolved by enumeration (restricted-growth) order."""
    jp, parts, risks = _conditional_risks(params, y)
    order = np.argsort(risks, kind="stable")
    best = int(order[0])
    gap = float(risks[order[1]] - risks[best]) if len(risks) > 1 else 0.0
    return ClustererDecision(partition=parts[best],
                             conditional_risk=float(risks[best]),
                             runner_up_gap=gap)


def conditional_expected_loss(params, y, partition):
    """E[loss(Pi_n, partition) | y] for one candidate partition."""
    jp = joint_posterior(params, y)
    L = _loss_matrix(jp.sequences - 1, partition.label_array()[None, :], jp.J)
    return float(jp.probs @ L[:, 0])


def _finite_alphabet_size(params):
    if is_continuous(params.emissions[0]):
        raise ValueError("finite-alphabet emissions required")
    return params.emissions[0].alphabet_size


def bayes_class_risk_exact(params, n=None):
    """Exact optimal classification risk 1 - E[(1/n) sum_i max_x P(X_i=x|Y)].

    Independent labels: closed form (any n, the per-index risk), finite or
    continuous emissions.  Dependent chain: finite alphabet with A^n within
    budget, full enumeration of observation sequences.
    """
    if params.is_iid():
        if is_continuous(params.emissions[0]):
            from scipy.integrate import simpson
            xs = quadrature_grid(params.emissions)
            a = density_matrix(params, xs) * params.nu[None, :]
            return float(simpson(a.sum(axis=1) - a.max(axis=1), x=xs))
        a = np.stack([e.pmf for e in params.emissions]).T * params.nu[None, :]
        return float((a.sum(axis=1) - a.max(axis=1)).sum())
    if n is None:
        raise ValueError("n is required for a dependent chain")
    A = _finite_alphabet_size(params)
    if A**n > MAX_SEQ_BUDGET:
        raise ValueError(f"A^n = {A**n} above budget")
    risk = 0.0
    ys = _all_label_seqs(A, n) + 1
    for lo in range(0, ys.shape[0], 2**14):
        chunk = ys[lo:lo + 2**14]
        phi, logliks = batched_smooth(params, chunk)
        risk += float(np.exp(logliks) @ (1.0 - phi.max(axis=2).mean(axis=1)))
    return risk


def _joint_weight_matrix(params, n, A):
    """W[x, y] = P(X=x, Y=y) over all of {1..J}^n x {1..A}^n."""
    J = params.J
    seqs0 = _all_label_seqs(J, n)
    obs0 = _all_label_seqs(A, n)
    if seqs0.shape[0] * obs0.shape[0] > MAX_LOSS_CELLS:
        raise ValueError("joint weight matrix above budget")
    pm = np.stack([e.pmf for e in params.emissions])
    w = params.nu[seqs0[:, 0]].copy()
    for i in range(1, n):
        w *= params.Q[seqs0[:, i - 1], seqs0[:, i]]
    W = w[:, None] * pm[seqs0[:, 0]][:, obs0[:, 0]]
    for i in range(1, n):
        W *= pm[seqs0[:, i]][:, obs0[:, i]]
    return W


def bayes_clust_risk_exact(params, n):
    """Exact optimal clustering risk: sum over y of min_g E[loss(Pi_n, g), y]."""
    A = _finite_alphabet_size(params)
    blocks0, parts, L = _partition_table(n, params.J)
    W = _joint_weight_matrix(params, n, A)
    return float((W.T @ L).min(axis=1).sum())


def mrss_risk_min_exact(params, n):
    """Exact minimum of the relabeled-sequence risk, computed literally:
    enumerate every label vector h in {1..J}^n, take the best permutation of
    its conditional mislabeling rate, minimize over h, average over y."""
    A = _finite_alphabet_size(params)
    J = params.J
    ys = _all_label_seqs(A, n) + 1
    phi, logliks = batched_smooth(params, ys)
    py = np.exp(logliks)
    hs = _all_label_seqs(J, n)
    eye = np.eye(J)
    h_onehot = eye[hs]                                     # (Mh, n, J)
    best = np.full((ys.shape[0], hs.shape[0]), -np.inf)
    for tau in itertools.permutations(range(J)):
        inv = np.argsort(np.array(tau))
        hit = np.einsum("ynj,mnj->ym", phi[:, :, inv], h_onehot)
        np.maximum(best, hit, out=best)
    return float(py @ (1.0 - best.max(axis=1) / n))


# --- classifier/clusterer coincidence and divergence checkers ---------------

@dataclass
class CoincidenceReport:
    """Outcome of comparing the exact clusterer with the classifier partition
    over sampled observation vectors."""

    trials: int
    n: int
    checked: int = 0
    ties_skipped: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def _partitions_agree(params, y, decision, classifier_partition):
    if decision.partition == classifier_partition:
        return True
    rival = conditional_expected_loss(params, y, classifier_partition)
    return abs(rival - decision.conditional_risk) <= RISK_TIE_TOL


def coincidence_check_iid_J2(params, n, trials, seed, tie_tol=1e-12):
    """Sample observation vectors from an independent-labels two-state model
    and check that the exact clusterer equals the classifier's partition on
    every draw without a tied posterior."""
    if not params.is_iid() or params.J != 2:
        raise ValueError("requires an independent-labels model with J = 2")
    report = CoincidenceReport(trials=trials, n=n)
    for child in np.random.SeedSequence(seed).spawn(trials):
        y = sample_trajectory(params, n, child).y
        probs = smooth(params, y).probs
        if np.any(np.abs(probs[:, 0] - 0.5) <= tie_tol):
            report.ties_skipped += 1
            continue
        report.checked += 1
        decision = bayes_clusterer_exact(params, y)
        classifier = partition_from_labels(np.argmax(probs, axis=1) + 1)
        if not _partitions_agree(params, y, decision, classifier):
            report.violations.append({
                "y": y.tolist(),
                "clusterer": decision.partition.blocks,
                "classifier": classifier.blocks,
                "clusterer_risk": decision.conditional_risk,
                "classifier_risk": conditional_expected_loss(params, y, classifier),
            })
    return report


@dataclass(frozen=True)
class DivergenceReport:
    """Whether the strict-divergence condition holds, and a concrete observation
    vector where clusterer and classifier genuinely disagree (if found)."""

    condition_holds: bool
    witness: dict | None

    @property
    def ok(self):
        return self.condition_holds and self.witness is not None


def divergence_witness_iid_J3(params, grid=None, n=2, max_points=8):
    """Check the mixture-divergence condition for independent labels, J >= 3:
    a positive-probability region where the largest weighted density nu_j f_j
    strictly beats the runner-up yet is at most the sum of the others.  When it
    holds, search small observation vectors built from the strongest such
    points for an exact clusterer/classifier disagreement.
    """
    if not params.is_iid() or params.J < 3:
        raise ValueError("requires an independent-labels model with J > 2")
    if grid is None:
        if is_continuous(params.emissions[0]):
            grid = quadrature_grid(params.emissions, 2001)
        else:
            grid = np.arange(1, params.emissions[0].alphabet_size + 1)
    a = density_matrix(params, grid) * params.nu[None, :]
    srt = np.sort(a, axis=1)
    top, second = srt[:, -1], srt[:, -2]
    rest = a.sum(axis=1) - top
    cond = (second > 0.0) & (top > second) & (top <= rest)
    if not cond.any():
        return DivergenceReport(condition_holds=False, witness=None)
    margin = np.where(cond, np.minimum(top - second, rest - top), -np.inf)
    points = grid[np.argsort(-margin)[:max_points]]
    for combo in itertools.combinations_with_replacement(points, n):
        y = np.asarray(combo)
        probs = smooth(params, y).probs
        if np.any(np.abs(probs.max(axis=1) - np.sort(probs, axis=1)[:, -2]) <= 1e-12):
            continue
        decision = bayes_clusterer_exact(params, y)
        classifier = partition_from_labels(np.argmax(probs, axis=1) + 1)
        if not _partitions_agree(params, y, decision, classifier):
            witness = {
                "y": y.tolist(),
                "clusterer": decision.partition.blocks,
                "classifier": classifier.blocks,
                "clusterer_risk": decision.conditional_risk,
                "classifier_risk": conditional_expected_loss(params, y, classifier),
            }
            return DivergenceReport(condition_holds=True, witness=witness)
    return DivergenceReport(condition_holds=True, witness=None)


# --- two-state chain at n = 2: exact decision conditions ---------------------

def _pq_from_params(params):
    p = float(params.Q[0, 1])
    q = float(params.Q[1, 0])
    pi = stationary_distribution(params.Q)
    if np.abs(params.nu - pi).max() > 1e-9:
        raise ValueError("closed-form n=2 conditions assume the stationary initial law")
    return p, q


def hmm_n2_same_cluster_condition(params, y):
    """Exact clusterer keeps {1,2} together at n=2 iff lhs >= rhs, for a
    stationary two-state chain with Q = ((1-p, p), (q, 1-q)).

    Returns (lhs, rhs) = (q(1-p) f1(y1)f1(y2) + p(1-q) f2(y1)f2(y2),
    pq [f2(y1)f1(y2) + f1(y1)f2(y2)]).
    """
    p, q = _pq_from_params(params)
    b = density_matrix(params, np.asarray(y))
    lhs = q * (1 - p) * b[0, 0] * b[1, 0] + p * (1 - q) * b[0, 1] * b[1, 1]
    rhs = p * q * (b[0, 1] * b[1, 0] + b[0, 0] * b[1, 1])
    return float(lhs), float(rhs)


def hmm_n2_same_class_condition(params, y):
    """Bayes classifier gives both indices the same label at n=2 iff the
    product of the two per-index posterior differences is >= 0; returns that
    product (unnormalized)."""
    p, q = _pq_from_params(params)
    b = density_matrix(params, np.asarray(y))
    w11 = q * (1 - p) * b[0, 0] * b[1, 0]
    w12 = q * p * b[0, 0] * b[1, 1]
    w21 = p * q * b[0, 1] * b[1, 0]
    w22 = p * (1 - q) * b[0, 1] * b[1, 1]
    return float((w21 + w22 - w11 - w12) * (w12 + w22 - w11 - w21))


def hmm_divergence_witness_J2(p, q, f1_pair, f2_pair, n=5):
    """Check a concrete two-state-chain divergence witness at length n >= 3.

    Builds a three-letter model in which letters 1 and 2 carry the prescribed
    density values (f1_pair, f2_pair) and letter 3 lies outside the support of
    f2, observes y = (1, 2, 3, ..., 3), and compares the exact clusterer with
    the classifier partition by enumeration.  Returns a dict with the decisions
    and a 'diverges' flag.
    """
    a1, a2 = f1_pair
    b1, b2 = f2_pair
    scale = max(a1 + a2, b1 + b2)
    f1 = np.array([a1, a2, scale - a1 - a2]) / scale
    f2 = np.array([b1, b2, scale - b1 - b2]) / scale
    if f2[2] > 1e-12:
        raise ValueError("f2 must put all its mass on the first two letters")
    if f1[2] <= 1e-12:
        raise ValueError("f1 must put mass outside the support of f2")
    nu = np.array([q, p]) / (p + q)
    params = HmmParams(nu=nu, Q=np.array([[1 - p, p], [q, 1 - q]]),
                       emissions=(Finite(f1), Finite(f2)))
    y = np.array([1, 2] + [3] * (n - 2))
    probs = smooth(params, y).probs
    decision = bayes_clusterer_exact(params, y)
    classifier = partition_from_labels(np.argmax(probs, axis=1) + 1)
    tied = bool(np.any(np.abs(probs[:, 0] - 0.5) <= 1e-12))
    diverges = (not tied) and not _partitions_agree(params, y, decision, classifier)
    return {
        "diverges": diverges,
        "tied": tied,
        "y": y.tolist(),
        "clusterer": decision.partition.blocks,
        "classifier": classifier.blocks,
        "clusterer_risk": decision.conditional_risk,
        "classifier_risk": conditional_expected_loss(params, y, classifier),
    }


def search_hmm_divergence_witness_J2(p, q, n=5, steps=9, seed=None):
    """Grid-search density values (f1, f2 at two letters) for which the n >= 3
    two-state chain clusterer and classifier provably disagree; each candidate
    is settled by exact enumeration.  Returns the first witness or None."""
    grid = np.linspace(0.05, 0.95, steps)
    rng = np.random.default_rng(seed)
    candidates = [(a1, a2, b1) for a1 in grid for a2 in grid for b1 in grid
                  if a1 + a2 < 1.0 - 1e-9]
    rng.shuffle(candidates)
    for a1, a2, b1 in candidates:
        out = hmm_divergence_witness_J2(p, q, (a1, a2), (b1, 1 - b1), n=n)
        if out["diverges"]:
            out.update({"p": p, "q": q, "f1_pair": (a1, a2), "f2_pair": (b1, 1 - b1)})
            return out
    return None


# --- the vanishing-ratio construction ----------------------------------------

def prop1_model(eta, eps=None):
    """Three-state independent-labels model with nu = (1-2*eta, eta, eta) whose
    emissions are uniform on (0, 1/2), (3/4, 1) and (3/4-eps, 1-eps).

    The three supports carve the line into four intervals on which every
    density is constant, so the model reduces exactly to a four-letter
    alphabet: 1 = (0, 1/2), 2 = (3/4-eps, 3/4), 3 = (3/4, 1-eps),
    4 = (1-eps, 1).  Returns that finite model.
    """
    if eps is None:
        eps = eta
    if not (0 <= eta < 0.25 and 0 <= eps < 0.25):
        raise ValueError("eta and eps must lie in [0, 1/4)")
    rows = np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1 - 4 * eps, 4 * eps],
        [0.0, 4 * eps, 1 - 4 * eps, 0.0],
    ])
    nu = np.array([1 - 2 * eta, eta, eta])
    return iid_params(nu, tuple(Finite(r) for r in rows))


def _compositions(total, parts):
    """All tuples of `parts` nonnegative ints summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def _log_factorials(n):
    return np.concatenate([[0.0], np.cumsum(np.log(np.arange(1, n + 1)))])


def _multinomial_pmf(counts, probs, logfac):
    counts = np.asarray(counts)
    mask = counts > 0
    if np.any(probs[mask] <= 0.0):
        return 0.0
    logp = logfac[counts.sum()] - logfac[counts].sum() \
        + (counts[mask] * np.log(probs[mask])).sum()
    return float(np.exp(logp))


def _column_distribution(m_col, post, logfac):
    """Distribution of the true-state counts inside one block.

    m_col[l] items have posterior post[l] (a length-3 law); returns
    (count_vectors (K, 3), pmf (K,)) for the convolution over letters."""
    counts = np.zeros((1, 3), dtype=np.int64)
    pmf = np.ones(1)
    for k, p in zip(m_col, post):
        if k == 0:
            continue
        local = []
        lp = []
        for c in _compositions(int(k), 3):
            w = _multinomial_pmf(c, p, logfac)
            if w > 0.0:
                local.append(c)
                lp.append(w)
        local = np.array(local, dtype=np.int64)
        lp = np.array(lp)
        counts = (counts[:, None, :] + local[None, :, :]).reshape(-1, 3)
        pmf = (pmf[:, None] * lp[None, :]).reshape(-1)
    return counts, pmf


def _best_partition_overlap(t, post, logfac):
    """max over partitions (as letter-count splits into <= 3 blocks) of
    E[max matching overlap], for a type t = per-letter counts."""
    perms = _perms(3)
    col_cache = {}

    def column(m_col):
        key = tuple(m_col)
        if key not in col_cache:
            col_cache[key] = _column_distribution(m_col, post, logfac)
        return col_cache[key]

    per_letter = [list(_compositions(int(k), 3)) for k in t]
    n_matrices = int(np.prod([len(p) for p in per_letter]))
    if n_matrices > MAX_PROP1_MATRICES:
        raise ValueError("per-type split enumeration above budget")
    best = -np.inf
    seen = set()
    for rows in itertools.product(*per_letter):
        m = np.array(rows, dtype=np.int64)            # (letters, blocks)
        key = tuple(sorted(map(tuple, m.T)))
        if key in seen:                               # blocks are exchangeable
            continue
        seen.add(key)
        cols = [column(m[:, b]) for b in range(3)]
        counts = [c for c, _ in cols]
        weight = (cols[0][1][:, None, None]
                  * cols[1][1][None, :, None]
                  * cols[2][1][None, None, :])
        value = np.full(weight.shape, -np.inf)
        for tau in perms:
            v = (counts[0][:, tau[0]][:, None, None]
                 + counts[1][:, tau[1]][None, :, None]
                 + counts[2][:, tau[2]][None, None, :])
            np.maximum(value, v, out=value)
        best = max(best, float((weight * value).sum()))
    return best


def prop1_clust_risk_exact(eta, eps=None, n=10):
    """Exact optimal clustering risk of the four-letter model at length n,
    by summing over observation types (letter counts) and optimizing the
    block split of each letter group."""
    params = prop1_model(eta, eps)
    pm = np.stack([e.pmf for e in params.emissions])      # (3, 4)
    q = params.nu @ pm
    # letters with q = 0 never occur; park a dummy posterior there
    safe_q = np.where(q > 0.0, q, 1.0)
    post = ((params.nu[:, None] * pm) / safe_q[None, :]).T  # (letter, state)
    logfac = _log_factorials(n)
    risk = 0.0
    for t in _compositions(n, 4):
        pt = _multinomial_pmf(t, q, logfac)
        if pt <= 0.0:
            continue
        best = _best_partition_overlap(t, post, logfac)
        risk += pt * (1.0 - best / n)
    return risk


def prop1_ratio_experiment(etas, n=10, trials=None, seed=None):
    """Exact clustering and classification risks of the vanishing-ratio
    construction (eps = eta) for each eta, with their ratio.

    `trials`/`seed` switch on Monte Carlo over observation types for n beyond
    the exact-enumeration budget; the default is fully exact.
    """
    rows = []
    for eta in etas:
        params = prop1_model(eta)
        class_risk = bayes_class_risk_exact(params)
        if trials is None:
            clust_risk = prop1_clust_risk_exact(eta, n=n)
        else:
            pm = np.stack([e.pmf for e in params.emissions])
            q = params.nu @ pm
            safe_q = np.where(q > 0.0, q, 1.0)
            post = ((params.nu[:, None] * pm) / safe_q[None, :]).T
            logfac = _log_factorials(n)
            rng = np.random.default_rng(seed)
            types = rng.multinomial(n, q, size=trials)
            vals = [1.0 - _best_partition_overlap(tuple(t), post, logfac) / n
                    for t in types]
            clust_risk = float(np.mean(vals))
        rows.append({
            "eta": float(eta),
            "eps": float(eta),
            "clust_risk": float(clust_risk),
            "class_risk": float(class_risk),
            "ratio": float(clust_risk / class_risk) if class_risk > 0 else np.nan,
        })
    return rows


# --- the bias-flip maximum -----------------------------------------------------

@dataclass(frozen=True)
class BiasFlipReport:
    ok: bool
    max_value: float
    corner_value: float
    worst_assignment: tuple


def bias_flip_maximum_check(alphas, atol=1e-12):
    """Brute-force check that E|sum Z_i - n/2| over independent Bernoulli Z_i
    with p_i in {alpha_i, 1-alpha_i} is maximized by the two constant
    assignments (all alpha_i ^ (1-alpha_i), all alpha_i v (1-alpha_i))."""
    alphas = np.asarray(alphas, dtype=float)
    n = len(alphas)
    if n > 12:
        raise ValueError("n above brute-force budget")
    centers = np.abs(np.arange(n + 1) - n / 2.0)

    def expected_dev(ps):
        pmf = np.ones(1)
        for p in ps:
            pmf = np.convolve(pmf, [1.0 - p, p])
        return float(pmf @ centers)

    best_val, best_mask = -np.inf, None
    for mask in range(2**n):
        bits = (mask >> np.arange(n)) & 1
        ps = np.where(bits == 1, alphas, 1.0 - alphas)
        val = expected_dev(ps)
        if val > best_val:
            best_val, best_mask = val, tuple(int(b) for b in bits)
    lo_corner = expected_dev(np.minimum(alphas, 1.0 - alphas))
    hi_corner = expected_dev(np.maximum(alphas, 1.0 - alphas))
    corner = max(lo_corner, hi_corner)
    return BiasFlipReport(ok=best_val <= corner + atol,
                          max_value=best_val,
                          corner_value=corner,
                          worst_assignment=best_mask)
