"""
Chirikov standard map, the classical limit of one kicked rotator.

Convention: the kick force is -d/dx[K cos x] = +K sin x, so one period is
    p' = p + K sin x   (mod 2 pi)
    x' = x + p'        (mod 2 pi)
All routines are vectorized over trajectory ensembles.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from echolab.errors import ValidationError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


def standard_map_step(x, p, K):
    """One period of the standard map; works on scalars or arrays."""
    p_new = np.mod(p + K * np.sin(x), TWO_PI)
    x_new = np.mod(x + p_new, TWO_PI)
    return x_new, p_new


def tangent_map(x, K):
    """
    Jacobian d(x', p')/d(x, p) at the pre-kick position x.

    Scalar x gives a 2 x 2 matrix; an array of positions gives shape (n, 2, 2).
    """
    kc = K * np.cos(np.asarray(x, dtype=float))
    jacobian = np.empty(kc.shape + (2, 2))
    jacobian[..., 0, 0] = 1.0 + kc
    jacobian[..., 0, 1] = 1.0
    jacobian[..., 1, 0] = kc
    jacobian[..., 1, 1] = 1.0
    return jacobian


def _check_finite(**values):
    for name, value in values.items():
        if not np.all(np.isfinite(value)):
            raise ValidationError(f"{name} must be finite", field=name)


@dataclass
class ClassicalTrajectory:
    """Orbit samples, shape (t_steps + 1, n) for x and p."""
    x: np.ndarray
    p: np.ndarray
    K: float

    def __len__(self):
        return self.x.shape[0]

    @property
    def n_trajectories(self):
        return self.x.shape[1]


def random_initial_conditions(n_traj, rng):
    """Uniform (x, p) on the torus."""
    return rng.uniform(0.0, TWO_PI, size=n_traj), rng.uniform(0.0, TWO_PI, size=n_traj)


def iterate_map(x0, p0, K, t_steps):
    """Orbit of an ensemble of initial conditions for t_steps periods."""
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    p0 = np.atleast_1d(np.asarray(p0, dtype=float))
    _check_finite(x0=x0, p0=p0, K=K)
    if t_steps < 0:
        raise ValidationError(f"t_steps must be non-negative, got {t_steps}", field='t_steps')

    xs = np.empty((t_steps + 1, x0.shape[0]))
    ps = np.empty_like(xs)
    xs[0], ps[0] = np.mod(x0, TWO_PI), np.mod(p0, TWO_PI)
    for t in range(t_steps):
        xs[t + 1], ps[t + 1] = standard_map_step(xs[t], ps[t], K)
    return ClassicalTrajectory(x=xs, p=ps, K=float(K))


def random_trajectories(K, n_traj, t_steps, rng, transient=0):
    """Trajectories from uniform random starts with the first `transient` periods dropped."""
    x0, p0 = random_initial_conditions(n_traj, rng)
    for _ in range(transient):
        x0, p0 = standard_map_step(x0, p0, K)
    return iterate_map(x0, p0, K, t_steps)


@dataclass
class LyapunovEstimate:
    exponent: float
    n_trajectories: int
    t_steps: int
    transient_discard: int
    error: float


def lyapunov_exponent(K, n_traj=1000, t_steps=10_000, seed=0, transient=100):
    """
    Largest Lyapunov exponent per period from tangent-vector growth.

    The tangent vector is propagated with `tangent_map` and renormalized
    every period; log stretch factors are accumulated after the transient
    and averaged over trajectories.

    Returns:
        LyapunovEstimate: mean exponent, standard error across trajectories
    """
    if not (math.isfinite(K) and K > 0):
        raise ValidationError(f"Kick strength must be positive, got {K!r}", field='K')
    if n_traj < 1 or t_steps < 1:
        raise ValidationError("n_traj and t_steps must be positive")

    rng = np.random.default_rng(seed)
    x, p = random_initial_conditions(n_traj, rng)

    # Unit tangent vectors at random angles, one row per trajectory
    angle = rng.uniform(0.0, TWO_PI, size=n_traj)
    tangent = np.column_stack([np.cos(angle), np.sin(angle)])

    log_growth = np.zeros(n_traj)
    for step in range(transient + t_steps):
        tangent = np.einsum('nij,nj->ni', tangent_map(x, K), tangent)
        x, p = standard_map_step(x, p, K)

        norm = np.linalg.norm(tangent, axis=1)
        tangent /= norm[:, None]
        if step >= transient:
            log_growth += np.log(norm)

    per_trajectory = log_growth / t_steps
    error = float(per_trajectory.std(ddof=1) / math.sqrt(n_traj)) if n_traj > 1 else 0.0
    estimate = LyapunovEstimate(
        exponent=float(per_trajectory.mean()),
        n_trajectories=n_traj,
        t_steps=t_steps,
        transient_discard=transient,
        error=error,
    )
    logger.info(f"Lyapunov exponent K={K}: {estimate.exponent:.4f} +/- {estimate.error:.4f}")
    return estimate


def large_k_lyapunov(K):
    """ln(K/2), the large-K asymptote of the standard-map exponent."""
    return math.log(K / 2.0)
