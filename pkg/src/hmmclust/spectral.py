"""Spectral method-of-moments estimation for two-step-dependent chains.

The estimator never runs EM.  It builds empirical moments of triples
(Y_t, Y_{t+1}, Y_{t+2}) projected on a histogram basis, reduces them to J x J
matrices through the top singular subspace of the one-step-skip covariance,
and reads the transition matrix and emission densities off a joint
diagonalization.  Randomized rotations of the reduction make the eigenvalue
gaps non-degenerate with high probability; the candidate with the best
worst-case gap wins.

Everything downstream receives the estimated densities through GriddedDensity,
which quacks like the model module's emission objects, so the smoothing code
runs unchanged on estimated parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

IMAG_MASS_LIMIT = 0.1


@dataclass(frozen=True)
class SpectralConfig:
    """Tuning constants for the moment estimator.

    The resolution level satisfies 2^level ~ (n / log n)^(1/(2*smoothness+1));
    `rotations` defaults to ceil(log n); `clip_exponent` controls the final
    clipping of Q to [n^(-a/2), 1 - n^(-a/2)]; `truncation_exponent` caps the
    density estimates at n^b (sign kept).  `data_range` widens to the observed
    min/max when left unset.
    """

    basis_size: int = 40
    smoothness: int = 1
    level: int | None = None
    rotations: int | None = None
    clip_exponent: float = 2.0
    truncation_exponent: float = 0.5
    grid_size: int = 2048
    data_range: tuple[float, float] | None = None
    seed: int | None = None

    def resolve(self, y):
        """Fill the n-dependent fields for a concrete sample."""
        n = len(y)
        level = self.level
        if level is None:
            target = (n / math.log(n)) ** (1.0 / (2 * self.smoothness + 1))
            level = max(1, round(math.log2(target)))
        rotations = self.rotations if self.rotations is not None else math.ceil(math.log(n))
        lo, hi = self.data_range if self.data_range is not None else (y.min(), y.max())
        return level, rotations, (float(lo), float(hi))


@dataclass(frozen=True)
class MomentStats:
    """Empirical basis moments: single (D,), adjacent pair (D, D), one-skip
    pair (D, D), triple (D, D, D) and the kernel-smoothed triple with the
    middle slot evaluated on the density grid (G, D, D)."""

    single: np.ndarray
    pair: np.ndarray
    skip: np.ndarray
    triple: np.ndarray
    kernel_triple: np.ndarray
    grid: np.ndarray
    bin_width: float
    data_range: tuple[float, float]
    level: int


def _bin_codes(y, lo, hi, D):
    codes = np.floor((y - lo) / (hi - lo) * D).astype(np.int64)
    return np.clip(codes, 0, D - 1)


def compute_moments(y, config=None):
    """All empirical moments the estimator needs, in one pass over windows.

    The basis is the histogram system on `data_range` with `basis_size` cells,
    normalized so the population moments are Gram matrices of the per-state
    basis means.  The kernel-smoothed triple replaces the middle indicator
    with a triangular kernel of bandwidth range/2^level, accumulated by linear
    binning on the grid and one FFT convolution.
    """
    config = config or SpectralConfig()
    y = np.asarray(y, dtype=float)
    n = len(y)
    if n < 3:
        raise ValueError("need at least three observations")
    level, _, (lo, hi) = config.resolve(y)
    D = config.basis_size
    h = (hi - lo) / D
    codes = _bin_codes(y, lo, hi, D)
    m = n - 2
    a, b, c = codes[:-2], codes[1:-1], codes[2:]

    single = np.bincount(codes, minlength=D) / (n * math.sqrt(h))
    pair = (np.bincount(codes[:-1] * D + codes[1:], minlength=D * D)
            .reshape(D, D) / ((n - 1) * h))
    skip = np.bincount(a * D + c, minlength=D * D).reshape(D, D) / (m * h)
    triple = (np.bincount((a * D + b) * D + c, minlength=D**3)
              .reshape(D, D, D) / (m * h**1.5))

    G = config.grid_size
    grid = np.linspace(lo, hi, G)
    g = grid[1] - grid[0]
    # linear binning of the middle observation onto the grid, per (a, c) cell
    pos = np.clip((y[1:-1] - lo) / g, 0.0, G - 1 - 1e-9)
    i0 = pos.astype(np.int64)
    frac = pos - i0
    ac = a * D + c
    flat = np.bincount(i0 * D * D + ac, weights=1.0 - frac, minlength=G * D * D)
    flat += np.bincount((i0 + 1) * D * D + ac, weights=frac, minlength=G * D * D)
    mass = flat.reshape(G, D, D)
    bandwidth = (hi - lo) / 2**level
    half = int(math.ceil(bandwidth / g))
    u = np.arange(-half, half + 1) * g
    kernel = np.maximum(0.0, 1.0 - np.abs(u) / bandwidth) / bandwidth
    kernel_triple = fftconvolve(mass, kernel[:, None, None], mode="same", axes=0)
    kernel_triple /= m * h
    return MomentStats(single=single, pair=pair, skip=skip, triple=triple,
                       kernel_triple=kernel_triple, grid=grid, bin_width=h,
                       data_range=(lo, hi), level=level)


def project_simplex(v):
    """Euclidean projection of a vector onto the probability simplex."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    cumsum = np.cumsum(u) - 1.0
    rho = np.nonzero(u - cumsum / np.arange(1, len(v) + 1) > 0)[0][-1]
    return np.maximum(v - cumsum[rho] / (rho + 1), 0.0)


def project_transition_matrix(M):
    """Row-wise simplex projection onto the stochastic matrices."""
    return np.vstack([project_simplex(row) for row in np.asarray(M, dtype=float)])


def _haar_rotation(rng, J):
    z = rng.standard_normal((J, J))
    q, r = np.linalg.qr(z)
    return q * np.sign(np.diag(r))


def _imag_mass(values):
    denom = np.abs(values).sum()
    return 0.0 if denom == 0 else float(np.abs(values.imag).sum() / denom)


@dataclass(frozen=True)
class SpectralEstimate:
    nu: np.ndarray
    Q: np.ndarray
    grid: np.ndarray
    densities: np.ndarray          # (grid_size, J), possibly signed
    diagnostics: dict = field(default_factory=dict)

    @property
    def J(self):
        return len(self.nu)


def spectral_transition(moments, J, config=None, n=None):
    """Recover (nu, Q) and the reduction frames from the moments.

    Returns (nu_raw, nu, Q, V, O_hat, diagnostics): `nu_raw` is the
    pre-projection weight vector the transition formula consumes; V is the
    singular frame of the one-skip pair moment and O_hat the recovered basis
    means, both needed afterwards for the densities.
    """
    config = config or SpectralConfig()
    rng = np.random.default_rng(config.seed)
    P, M = moments.skip, moments.triple
    U, s, Vt = np.linalg.svd(P)
    V = Vt[:J].T                                      # (D, J)
    core = V.T @ P @ V                                # (J, J)
    # B[d] = core^{-1} V' M(:, d, :) V, batched over the middle index
    VtMV = np.einsum("aj,adc,ck->djk", V, M, V)       # (D, J, J)
    B = np.linalg.solve(core, VtMV)

    r = config.rotations
    if r is None:
        r = math.ceil(math.log(n)) if n is not None and n > 1 else 8
    omegas = [np.eye(J)] + [_haar_rotation(rng, J) for _ in range(r)]
    best = None
    off_diag = ~np.eye(J, dtype=bool)
    for idx, omega in enumerate(omegas):
        VO = V @ omega                                # (D, J)
        C = np.einsum("dx,djk->xjk", VO, B)           # (J, J, J)
        try:
            evals, R1 = np.linalg.eig(C[0])
        except np.linalg.LinAlgError:
            continue
        mass = _imag_mass(evals) + _imag_mass(R1.ravel())
        if mass > IMAG_MASS_LIMIT:
            continue
        R1 = R1.real
        try:
            lam = np.stack([np.diag(np.linalg.solve(R1, C[x].real) @ R1)
                            for x in range(J)])       # lam[x, x'] real
        except np.linalg.LinAlgError:
            continue
        diffs = np.abs(lam[:, :, None] - lam[:, None, :])
        sep = float(diffs[:, off_diag].min())
        if best is None or sep > best[0]:
            best = (sep, idx, omega, lam, float(mass))
    if best is None:
        raise np.linalg.LinAlgError("no rotation produced a usable eigenbasis")
    sep, idx, omega, lam, mass = best
    O_hat = V @ omega @ lam                           # (D, J)

    VtO = V.T @ O_hat
    nu_raw = np.linalg.solve(VtO, V.T @ moments.single)
    nu = project_simplex(nu_raw)
    safe = np.where(np.abs(nu_raw) < 1e-12, 1e-12, nu_raw)
    left = VtO * safe[None, :]                        # V' O_hat Diag(nu_raw)
    mid = V.T @ moments.pair @ V
    Q_raw = np.linalg.solve(left, mid) @ np.linalg.inv(O_hat.T @ V)
    Q = project_transition_matrix(Q_raw)
    if n is not None:
        eps = n ** (-config.clip_exponent / 2.0)
        Q = np.clip(Q, eps, 1.0 - eps)
        Q /= Q.sum(axis=1, keepdims=True)
    diagnostics = {"singular_values": s[: J + 1].tolist(),
                   "rotation_index": idx, "separation_score": sep,
                   "imag_mass": mass}
    return nu_raw, nu, Q, V, O_hat, diagnostics


def estimate_densities(moments, Q, V, O_hat, config=None, n=None):
    """Emission-density values on the grid from the kernel-smoothed triple.

    The d-th reduced kernel moment is similar to Diag(smoothed densities at
    grid point d) in the frame R2 = Q O_hat' V; its diagonal in that frame is
    the estimate.  Values are truncated to |.| <= n^truncation_exponent with
    the sign kept; they need not integrate to one.
    """
    config = config or SpectralConfig()
    J = Q.shape[0]
    core = V.T @ moments.skip @ V
    Bx = np.einsum("aj,gac,ck->gjk", V, moments.kernel_triple, V)  # (G, J, J)
    Bx = np.linalg.solve(core, Bx)
    R2 = Q @ O_hat.T @ V
    R2inv = np.linalg.inv(R2)
    dens = np.einsum("jk,gkl,lj->gj", R2, Bx, R2inv)
    if n is not None:
        cap = n ** config.truncation_exponent
        dens = np.sign(dens) * np.minimum(np.abs(dens), cap)
    return dens, float(np.linalg.cond(R2))


def full_estimate(y, J, config=None):
    """Run the whole pipeline on one observation sequence."""
    config = config or SpectralConfig()
    y = np.asarray(y, dtype=float)
    moments = compute_moments(y, config)
    n = len(y)
    nu_raw, nu, Q, V, O_hat, diag = spectral_transition(moments, J, config, n=n)
    dens, cond_R2 = estimate_densities(moments, Q, V, O_hat, config, n=n)
    diag.update({"cond_R2": cond_R2, "level": moments.level, "n": n,
                 "basis_size": config.basis_size,
                 "data_range": moments.data_range})
    return SpectralEstimate(nu=nu, Q=Q, grid=moments.grid, densities=dens,
                            diagnostics=diag)


@dataclass(frozen=True)
class GriddedDensity:
    """Emission density known through values on a uniform grid.

    Linear interpolation inside the grid; estimated values are floored at
    `floor` everywhere (estimates are signed and can dip below zero, and a
    smoothing recursion dies if every state has density exactly zero at an
    observed point, so plug-in use sets a tiny positive floor).
    """

    grid: tuple
    values: tuple
    floor: float = 0.0

    def density(self, y):
        vals = np.maximum(np.asarray(self.values, dtype=float), self.floor)
        return np.interp(np.asarray(y, dtype=float), np.asarray(self.grid),
                         vals, left=self.floor, right=self.floor)

    def support(self):
        return float(self.grid[0]), float(self.grid[-1])


PLUGIN_DENSITY_FLOOR = 1e-12


def to_hmm_params(estimate, floor=PLUGIN_DENSITY_FLOOR):
    """Package a SpectralEstimate as HmmParams with gridded emissions."""
    from .model import HmmParams

    grid = tuple(estimate.grid.tolist())
    emissions = tuple(GriddedDensity(grid=grid, values=tuple(col), floor=floor)
                      for col in estimate.densities.T)
    return HmmParams(nu=estimate.nu, Q=estimate.Q, emissions=emissions)
