"""
Learning the chain from one long observation sequence
=====================================================

Nothing about the chain is assumed known here: the transition matrix and
the emission densities are recovered from empirical moment tensors of one
trajectory (SVD + joint diagonalization over random rotations), then the
estimate is plugged into the forward-backward classifier.  The demo tracks
how the recovered transition matrix tightens as the sequence grows, and how
close the plug-in clustering gets to the oracle that knows the truth.
"""

import numpy as np

from hmmclust.experiments import example1_params
from hmmclust.inference import bayes_classify
from hmmclust.model import density_matrix, sample_trajectory
from hmmclust.partitions import best_permutation_alignment
from hmmclust.spectral import SpectralConfig, full_estimate, to_hmm_params

SEED = 3

# The first study model: a sticky two-state chain whose emissions are
# themselves two-component Gaussian mixtures (so naive per-point rules fail).
params = example1_params()
print("true Q:")
print(np.round(np.asarray(params.Q), 3))

# --- moment estimates tighten with n ----------------------------------------
for n in (2_000, 20_000, 100_000):
    y = sample_trajectory(params, n, seed=SEED).y
    est = full_estimate(y, 2, SpectralConfig(seed=SEED))
    # estimated states carry arbitrary labels; align before scoring
    errs = []
    for perm in ([0, 1], [1, 0]):
        errs.append(np.linalg.norm(est.Q[np.ix_(perm, perm)]
                                   - np.asarray(params.Q)))
    truth = density_matrix(params, est.grid)
    dens_rmse = np.sqrt(np.mean((np.maximum(est.densities, 0.0) - truth) ** 2))
    print("n=%-7d  ||Qhat - Q|| = %.4f   density rmse = %.4f"
          % (n, min(errs), dens_rmse))

# --- plug the estimate into the Bayes machinery ------------------------------
#
# to_hmm_params wraps the gridded density estimates (floored away from zero)
# so the estimated model can drive the same smoothing recursions as the
# truth.  The clustering error is permutation-aligned, as it must be: the
# estimate cannot know which latent state was called "1".
traj = sample_trajectory(params, 50_000, seed=SEED + 1)
est = full_estimate(traj.y, 2, SpectralConfig(seed=SEED + 1))
plugin = to_hmm_params(est)

plug_labels = bayes_classify(plugin, traj.y)
_, plug_err = best_permutation_alignment(plug_labels, traj.x, 2)
oracle_labels = bayes_classify(params, traj.y)
oracle_err = float(np.mean(oracle_labels != traj.x))
print("\nclustering error at n=50000: plug-in %.4f vs oracle %.4f"
      % (plug_err, oracle_err))
print("(the plug-in pays only for what the moments still miss)")
