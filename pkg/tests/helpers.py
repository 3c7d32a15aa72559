"""Shared test utilities: independent oracles and random germ generators.

The oracles here deliberately avoid the library's own code paths: the flow
oracle integrates the ODE with RK4, the Jacobian oracle uses central finite
differences, and the polar-angle oracle does sign-scan bisection on the
one-dimensional curve equation.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from milnorfib import MapGerm, Polynomial, WeightSystem


def poly(num_vars: int, terms: dict) -> Polynomial:
    return Polynomial(num_vars, terms)


# ---------------------------------------------------------------------------
# Random weighted-homogeneous germs (monomials drawn to satisfy <w, a> = b).
# ---------------------------------------------------------------------------


def exponents_of_weighted_degree(weights: tuple[int, ...], degree: int) -> list[tuple[int, ...]]:
    """All non-negative integer exponent vectors with <weights, a> = degree."""
    m = len(weights)
    out: list[tuple[int, ...]] = []

    def rec(i: int, remaining: int, prefix: tuple[int, ...]) -> None:
        if i == m - 1:
            if remaining % weights[i] == 0:
                out.append(prefix + (remaining // weights[i],))
            return
        for e in range(remaining // weights[i] + 1):
            rec(i + 1, remaining - e * weights[i], prefix + (e,))

    rec(0, degree, ())
    return out


def random_qh_poly(rng: np.random.Generator, weights: tuple[int, ...], degree: int,
                   max_terms: int = 5) -> Polynomial | None:
    pool = exponents_of_weighted_degree(weights, degree)
    if not pool:
        return None
    count = int(rng.integers(1, min(max_terms, len(pool)) + 1))
    chosen = rng.choice(len(pool), size=count, replace=False)
    terms = {}
    for idx in chosen:
        coeff = 0
        while coeff == 0:
            coeff = int(rng.integers(-10, 11))
        terms[pool[int(idx)]] = coeff
    return Polynomial(len(weights), terms)


def random_qh_pair(rng: np.random.Generator, m: int) -> tuple[MapGerm, WeightSystem]:
    """A random same-degree weighted-homogeneous pair with small data.

    Integer weights at most 4, degree at most 12, few monomials per component.
    """
    while True:
        weights = tuple(int(rng.integers(1, 5)) for _ in range(m))
        candidates = [
            b for b in range(max(weights), 13)
            if len(exponents_of_weighted_degree(weights, b)) >= 2
        ]
        if not candidates:
            continue
        degree = int(rng.choice(candidates))
        p = random_qh_poly(rng, weights, degree)
        q = random_qh_poly(rng, weights, degree)
        if p is None or q is None or p.is_zero() or q.is_zero():
            continue
        ws = WeightSystem(tuple(Fraction(w) for w in weights), Fraction(degree), Fraction(degree))
        return MapGerm(p, q), ws


# ---------------------------------------------------------------------------
# Numeric oracles.
# ---------------------------------------------------------------------------


def rk4_flow(x0, s_final: float, weights, steps: int = 2000) -> np.ndarray:
    """Classic fourth-order integration of x' = (w_i x_i) from 0 to s_final."""
    w = np.array([float(v) for v in weights])
    x = np.array(x0, dtype=float)
    h = s_final / steps

    def f(x):
        return w * x

    for _ in range(steps):
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return x


def fd_direction_jacobian(germ: MapGerm, x, h: float = 1e-6) -> np.ndarray:
    """Central finite differences of f/||f||, column per variable."""
    x = np.asarray(x, dtype=float)
    m = x.size
    jac = np.zeros((2, m))
    for j in range(m):
        xp = x.copy()
        xm = x.copy()
        xp[j] += h
        xm[j] -= h
        fp = germ.value_at(xp)
        fm = germ.value_at(xm)
        fp = fp / np.linalg.norm(fp)
        fm = fm / np.linalg.norm(fm)
        jac[:, j] = (fp - fm) / (2.0 * h)
    return jac


def bisect_root(fun, lo: float, hi: float, iterations: int = 100) -> float:
    flo = fun(lo)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        fmid = fun(mid)
        if flo * fmid <= 0:
            hi = mid
        else:
            lo = mid
            flo = fmid
    return 0.5 * (lo + hi)


def polar_curve_angle_roots(level: float, scan_points: int = 4096) -> list[float]:
    """Angles in [0, 2 pi) with sin(t) cos^2(t) = level, by scan plus bisection."""

    def fun(t: float) -> float:
        return math.sin(t) * math.cos(t) ** 2 - level

    roots: list[float] = []
    for i in range(scan_points):
        a = 2.0 * math.pi * i / scan_points
        b = 2.0 * math.pi * (i + 1) / scan_points
        if fun(a) == 0.0:
            roots.append(a)
        elif fun(a) * fun(b) < 0:
            roots.append(bisect_root(fun, a, b))
    return roots


def off_variety_points(germ: MapGerm, radius: float, count: int, seed: int,
                       f_floor: float = 0.05) -> list[np.ndarray]:
    """Sphere points with ||f|| comfortably above zero, for stable differencing."""
    rng = np.random.default_rng(seed)
    points: list[np.ndarray] = []
    while len(points) < count:
        v = rng.standard_normal(germ.num_vars)
        x = radius * v / np.linalg.norm(v)
        if germ.norm_at(x) >= f_floor:
            points.append(x)
    return points
