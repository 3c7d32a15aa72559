"""Deterministic sampling and small Newton solvers used by the search routines.

Every random draw is keyed by (seed, index) so individual samples are
reproducible regardless of batch size or evaluation order.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np


def _normalize_seed(seed: int) -> int:
    return int(seed) % (2**63)


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample `index` of stream `seed`."""
    return np.random.default_rng([_normalize_seed(seed), int(index)])


def sphere_point(m: int, radius: float, seed: int, index: int) -> np.ndarray:
    """One uniform point on the sphere of the given radius."""
    rng = sample_rng(seed, index)
    while True:
        v = rng.standard_normal(m)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            return (radius / norm) * v


def sphere_points(m: int, radius: float, n: int, seed: int) -> np.ndarray:
    """n uniform sphere points, rows indexed by sample number."""
    return np.array([sphere_point(m, radius, seed, i) for i in range(n)])


def ball_point(m: int, radius: float, seed: int, index: int) -> np.ndarray:
    """One uniform point in the open ball of the given radius."""
    rng = sample_rng(seed, index)
    while True:
        v = rng.standard_normal(m)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            break
    r = radius * rng.random() ** (1.0 / m)
    return (r / norm) * v


def newton_square(
    fun: Callable[[np.ndarray], np.ndarray],
    jac: Callable[[np.ndarray], np.ndarray],
    x0: Sequence[float],
    converged: Callable[[np.ndarray, np.ndarray], bool],
    max_iter: int = 50,
) -> np.ndarray | None:
    """Newton iteration on a square system; None when it fails to converge."""
    x = np.asarray(x0, dtype=float).copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(max_iter):
            f = fun(x)
            if not np.all(np.isfinite(f)):
                return None
            if converged(x, f):
                return x
            j = jac(x)
            if not np.all(np.isfinite(j)):
                return None
            try:
                step = np.linalg.solve(j, f)
            except np.linalg.LinAlgError:
                return None
            if not np.all(np.isfinite(step)):
                return None
            x = x - step
        f = fun(x)
        if np.all(np.isfinite(f)) and converged(x, f):
            return x
    return None


def newton_minimum_norm(
    fun: Callable[[np.ndarray], np.ndarray],
    jac: Callable[[np.ndarray], np.ndarray],
    x0: Sequence[float],
    converged: Callable[[np.ndarray, np.ndarray], bool],
    max_iter: int = 50,
) -> np.ndarray | None:
    """Gauss-Newton with minimum-norm steps for underdetermined systems.

    Each update solves J dx = f in the least-squares sense, which for a full
    row rank J is the smallest correction onto the linearized solution set.
    """
    x = np.asarray(x0, dtype=float).copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(max_iter):
            f = fun(x)
            if not np.all(np.isfinite(f)):
                return None
            if converged(x, f):
                return x
            j = jac(x)
            if not np.all(np.isfinite(j)):
                return None
            step, *_ = np.linalg.lstsq(j, f, rcond=None)
            if not np.all(np.isfinite(step)):
                return None
            x = x - step
        f = fun(x)
        if np.all(np.isfinite(f)) and converged(x, f):
            return x
    return None
