"""Hidden Markov model parameters: emission families, validation, simulation.

A model is theta = (nu, Q, (f_x)): initial law, row-stochastic transition
matrix, and one emission distribution per hidden state, all sharing a single
observation space (a finite alphabet or the real line).  The independent-labels
(i.i.d. mixture) case is the special case where every row of Q equals nu.

States are labeled 1..J and finite-alphabet observations 1..A in all public
inputs and outputs; internal arrays are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ATOL_STOCHASTIC = 1e-12
ATOL_STATIONARY = 1e-10
GAUSS_TAIL_SIGMAS = 8.0
QUAD_NODES = 2**14 + 1  # composite Simpson rule needs an odd node count


def _vec(a):
    return np.asarray(a, dtype=float)


@dataclass(frozen=True)
class Finite:
    """Probability mass function over the finite alphabet {1..A}."""

    pmf: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pmf", _vec(self.pmf))

    @property
    def alphabet_size(self):
        return len(self.pmf)

    def density(self, y):
        """Mass at y, for y a scalar or array with values in {1..A}."""
        y = np.asarray(y, dtype=np.int64)
        return self.pmf[y - 1]


@dataclass(frozen=True)
class GaussianMixture:
    """Mixture of 1-D Gaussians; components = ((weight, mean, stddev), ...)."""

    components: tuple

    def __post_init__(self):
        comps = tuple((float(w), float(m), float(s)) for (w, m, s) in self.components)
        object.__setattr__(self, "components", comps)

    def density(self, y):
        y = _vec(y)
        out = np.zeros_like(y, dtype=float)
        for w, m, s in self.components:
            out = out + w * np.exp(-0.5 * ((y - m) / s) ** 2) / (s * np.sqrt(2.0 * np.pi))
        return out

    def support(self):
        """Effective support: smallest interval containing +-8 sigma of each component."""
        lo = min(m - GAUSS_TAIL_SIGMAS * s for _, m, s in self.components)
        hi = max(m + GAUSS_TAIL_SIGMAS * s for _, m, s in self.components)
        return lo, hi


@dataclass(frozen=True)
class Histogram:
    """Piecewise-constant density on [a, b] with equal-width bins."""

    a: float
    b: float
    heights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "heights", _vec(self.heights))

    @property
    def bin_width(self):
        return (self.b - self.a) / len(self.heights)

    def density(self, y):
        """Density at y; zero outside [a, b] (the right edge joins the last bin)."""
        y = _vec(y)
        k = len(self.heights)
        idx = np.clip(np.floor((y - self.a) / self.bin_width).astype(np.int64), 0, k - 1)
        inside = (y >= self.a) & (y <= self.b)
        return np.where(inside, self.heights[idx], 0.0)

    def support(self):
        return self.a, self.b


def is_continuous(emission):
    """Everything that is not a finite-alphabet pmf counts as continuous
    (including externally supplied density objects, which only need .density
    and .support)."""
    return not isinstance(emission, Finite)


def density(emission, y):
    """Evaluate the emission density/pmf at y (free-function form of .density)."""
    return emission.density(y)


@dataclass(frozen=True)
class HmmParams:
    """theta = (nu, Q, emissions).  Treated as immutable after construction."""

    nu: np.ndarray
    Q: np.ndarray
    emissions: tuple

    def __post_init__(self):
        object.__setattr__(self, "nu", _vec(self.nu))
        object.__setattr__(self, "Q", np.atleast_2d(_vec(self.Q)))
        object.__setattr__(self, "emissions", tuple(self.emissions))

    @property
    def J(self):
        return len(self.nu)

    def delta(self):
        """Minimum entry of Q — the mixing constant every bound depends on."""
        return float(self.Q.min())

    def is_iid(self):
        """True when all rows of Q equal nu, i.e. the labels are independent."""
        return bool(np.abs(self.Q - self.nu[None, :]).max() <= 1e-12)


def iid_params(nu, emissions):
    """Mixture model with independent labels: every transition row equals nu."""
    nu = _vec(nu)
    return HmmParams(nu=nu, Q=np.tile(nu, (len(nu), 1)), emissions=emissions)


@dataclass(frozen=True)
class Trajectory:
    """A sampled path: hidden states x (1..J) and observations y, plus the seed."""

    x: np.ndarray
    y: np.ndarray
    seed: object = None

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=np.int64))
        object.__setattr__(self, "y", np.asarray(self.y))

    @property
    def n(self):
        return len(self.x)


def _validate_emission(e, label, errors):
    if isinstance(e, Finite):
        if np.any(e.pmf < 0):
            errors.append(f"{label}: pmf has negative entries")
        if abs(e.pmf.sum() - 1.0) > ATOL_STOCHASTIC:
            errors.append(f"{label}: pmf sums to {e.pmf.sum():.15g}, not 1")
    elif isinstance(e, GaussianMixture):
        w = np.array([c[0] for c in e.components])
        s = np.array([c[2] for c in e.components])
        if np.any(w < 0):
            errors.append(f"{label}: mixture weights have negative entries")
        if abs(w.sum() - 1.0) > ATOL_STOCHASTIC:
            errors.append(f"{label}: mixture weights sum to {w.sum():.15g}, not 1")
        if np.any(s <= 0):
            errors.append(f"{label}: stddev must be positive")
    elif isinstance(e, Histogram):
        if e.b <= e.a:
            errors.append(f"{label}: empty support [a, b]")
        if np.any(e.heights < 0):
            errors.append(f"{label}: negative bin heights")
        elif abs(e.heights.sum() * e.bin_width - 1.0) > ATOL_STOCHASTIC:
            errors.append(f"{label}: heights integrate to "
                          f"{e.heights.sum() * e.bin_width:.15g}, not 1")
    else:
        errors.append(f"{label}: unknown emission type {type(e).__name__}")


def validate(params):
    """Check every model invariant; returns a list of violations (empty = ok)."""
    errors = []
    J = params.J
    nu, Q = params.nu, params.Q
    if Q.shape != (J, J):
        errors.append(f"Q has shape {Q.shape}, expected ({J}, {J})")
        return errors
    if len(params.emissions) != J:
        errors.append(f"{len(params.emissions)} emissions for {J} states")
    if np.any(nu < 0):
        errors.append("nu has negative entries")
    if abs(nu.sum() - 1.0) > ATOL_STOCHASTIC:
        errors.append(f"nu sums to {nu.sum():.15g}, not 1")
    if np.any(Q < 0):
        errors.append("Q has negative entries")
    for j, s in enumerate(Q.sum(axis=1), start=1):
        if abs(s - 1.0) > ATOL_STOCHASTIC:
            errors.append(f"row {j} not stochastic (sums to {s:.15g})")
    for j, e in enumerate(params.emissions, start=1):
        _validate_emission(e, f"emission {j}", errors)
    kinds = {is_continuous(e) for e in params.emissions}
    if len(kinds) > 1:
        errors.append("emissions must share one observation space (all finite or all continuous)")
    elif kinds == {False}:
        sizes = {e.alphabet_size for e in params.emissions}
        if len(sizes) > 1:
            errors.append(f"finite emissions use different alphabet sizes {sorted(sizes)}")
    return errors


def stationary_distribution(Q):
    """Stationary law pi of a row-stochastic matrix: pi Q = pi, sum(pi) = 1.

    Solved as a least-squares linear system; raises if Q has no unique
    stationary law (e.g. reducible Q).
    """
    Q = np.atleast_2d(_vec(Q))
    J = Q.shape[0]
    A = np.vstack([Q.T - np.eye(J), np.ones(J)])
    b = np.zeros(J + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.abs(pi @ Q - pi).max() > ATOL_STATIONARY or pi.min() < -ATOL_STATIONARY:
        raise ValueError("no unique stationary distribution found; is Q irreducible?")
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def _sample_emissions(emission, rng, count):
    if isinstance(emission, Finite):
        edges = np.cumsum(emission.pmf)
        u = rng.random(count)
        return np.minimum(np.searchsorted(edges, u, side="right"), len(edges) - 1) + 1
    if isinstance(emission, GaussianMixture):
        w = np.array([c[0] for c in emission.components])
        means = np.array([c[1] for c in emission.components])
        sds = np.array([c[2] for c in emission.components])
        comp = rng.choice(len(w), size=count, p=w / w.sum())
        return rng.normal(means[comp], sds[comp])
    if isinstance(emission, Histogram):
        mass = emission.heights * emission.bin_width
        edges = np.cumsum(mass)
        u = rng.random(count) * edges[-1]
        k = np.minimum(np.searchsorted(edges, u, side="right"), len(mass) - 1)
        left_mass = edges[k] - mass[k]
        frac = np.where(mass[k] > 0, (u - left_mass) / np.where(mass[k] > 0, mass[k], 1.0), 0.0)
        return emission.a + (k + frac) * emission.bin_width
    raise TypeError(f"cannot sample from {type(emission).__name__}")


def sample_trajectory(params, n, seed):
    """Draw (X_{1:n}, Y_{1:n}): X_1 ~ nu, X_{i+1} | X_i ~ Q(X_i, .), Y_i | X_i ~ f_{X_i}.

    Deterministic given (params, n, seed).  Draw order: n uniforms for the
    state path, then observations state by state (j = 1..J).
    """
    errors = validate(params)
    if errors:
        raise ValueError("invalid params: " + "; ".join(errors))
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    J = params.J
    cum_nu = np.cumsum(params.nu)
    cum_Q = np.cumsum(params.Q, axis=1)
    u = rng.random(n)
    x = np.empty(n, dtype=np.int64)
    x[0] = np.searchsorted(cum_nu, u[0], side="right")
    for i in range(1, n):
        x[i] = np.searchsorted(cum_Q[x[i - 1]], u[i], side="right")
    np.minimum(x, J - 1, out=x)
    continuous = is_continuous(params.emissions[0])
    y = np.empty(n, dtype=float if continuous else np.int64)
    for j in range(J):
        idx = np.flatnonzero(x == j)
        if len(idx):
            y[idx] = _sample_emissions(params.emissions[j], rng, len(idx))
    return Trajectory(x=x + 1, y=y, seed=seed)


def quadrature_grid(emissions, nodes=QUAD_NODES):
    """Shared Simpson grid covering the union of the emissions' effective supports."""
    los, his = zip(*(e.support() for e in emissions))
    return np.linspace(min(los), max(his), nodes)


def density_matrix(params, y):
    """n x J matrix b with b[i, j] = f_{j+1}(y_i)."""
    return np.column_stack([e.density(y) for e in params.emissions])
