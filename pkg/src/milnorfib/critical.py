"""Critical locus of the direction map f/||f|| on spheres, and link sampling.

A point x on the epsilon-sphere (off the link) is critical for f/||f||
exactly when omega(x) = P grad Q - Q grad P is parallel to x, the zero
multiple included.  Parallelism is expressed two ways:

  * m = 2: the tangential residual <omega, (-y, x)>, a single signed
    polynomial whose zero set is the critical curve;
  * any m: the Gram residual ||omega||^2 ||x||^2 - <omega, x>^2, which is
    non-negative everywhere (Cauchy-Schwarz) and vanishes exactly on the
    parallel set.

The Gram residual vanishes to second order, so root finding does not use it
directly: the search solves the square augmented system

    omega(x) = lambda * x,   ||x||^2 = epsilon^2

in (x, lambda) by plain Newton from seeded multistarts, which keeps
quadratic convergence and lets reported points hit 1e-12-level residuals.
The Gram form is what gets reported (normalized) and cross-checked in tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import MapGerm, Polynomial, PolyVectorField
from .errors import OnVarietyError
from .fields import germ_value_scale, omega, poly_scale_at_radius
from .numeric import newton_minimum_norm, newton_square, sphere_point


@dataclass(frozen=True)
class CriticalSetResult:
    """Deduplicated critical points of f/||f|| found on one sphere."""

    epsilon: float
    points: tuple[tuple[float, ...], ...]
    residuals: tuple[float, ...]
    omega_zero_flags: tuple[bool, ...]
    multistart_count: int
    seed: int
    merge_radius: float


@dataclass(frozen=True)
class LinkSample:
    """Sphere points found on the zero set of the germ (the link)."""

    epsilon: float
    points: tuple[tuple[float, ...], ...]
    f_norms: tuple[float, ...]


def position_field(m: int) -> PolyVectorField:
    """The identity field (x_1, ..., x_m)."""
    return PolyVectorField(tuple(Polynomial.variable(i, m) for i in range(m)))


def tangential_residual(germ: MapGerm) -> Polynomial:
    """<omega, (-y, x)> for plane germs; vanishes exactly where omega || x."""
    if germ.num_vars != 2:
        raise ValueError("the tangential form exists only for two variables")
    w = omega(germ)
    x = Polynomial.variable(0, 2)
    y = Polynomial.variable(1, 2)
    return w[0] * (-y) + w[1] * x


def gram_residual(germ: MapGerm) -> Polynomial:
    """||omega||^2 ||x||^2 - <omega, x>^2; >= 0 pointwise, zero iff omega || x."""
    w = omega(germ)
    x = position_field(germ.num_vars)
    return w.dot(w) * x.dot(x) - w.dot(x) ** 2


def parallel_residual(germ: MapGerm) -> Polynomial:
    """The parallelism certificate: tangential form for m = 2, Gram form above."""
    if germ.num_vars == 2:
        return tangential_residual(germ)
    return gram_residual(germ)


def link_tolerance(germ: MapGerm, epsilon: float) -> float:
    """||f|| threshold below which a sphere point counts as on the link."""
    return 1e-10 * germ_value_scale(germ, epsilon)


def on_variety_tolerance(germ: MapGerm, radius: float) -> float:
    return 1e-10 * germ_value_scale(germ, radius)


def projection_jacobian(germ: MapGerm, x, tolerance: float | None = None) -> np.ndarray:
    """Jacobian of f/||f|| at x from its closed form.

    Both rows are multiples of omega(x):

        row 1 = (-Q / ||f||^3) omega(x),    row 2 = (P / ||f||^3) omega(x)

    so the matrix has rank at most one everywhere off the zero set.
    """
    x = np.asarray(x, dtype=float)
    p_val = germ.p.evaluate(x)
    q_val = germ.q.evaluate(x)
    nf = float(np.hypot(p_val, q_val))
    if tolerance is None:
        tolerance = on_variety_tolerance(germ, float(np.linalg.norm(x)))
    if nf <= tolerance:
        raise OnVarietyError(f"point has ||f|| = {nf:.3e}, within {tolerance:.3e} of the zero set")
    w = omega(germ).evaluate(x)
    return np.vstack([(-q_val / nf**3) * w, (p_val / nf**3) * w])


def tangent_basis(x) -> np.ndarray:
    """Orthonormal basis of the tangent space of the sphere at x, as columns."""
    x = np.asarray(x, dtype=float)
    m = x.size
    a = np.column_stack([x / np.linalg.norm(x), np.eye(m)])
    q, _ = np.linalg.qr(a)
    return q[:, 1:m]


def projection_jacobian_tangent_svals(germ: MapGerm, x) -> np.ndarray:
    """Singular values of the projection Jacobian restricted to the sphere tangent.

    Criticality of x for the restricted map means this whole matrix vanishes;
    its largest singular value is therefore the meaningful distance from
    criticality (the ambient 2 x m matrix is rank <= 1 by construction).
    """
    restricted = projection_jacobian(germ, x) @ tangent_basis(x)
    return np.linalg.svd(restricted, compute_uv=False)


def critical_points_on_sphere(
    germ: MapGerm,
    epsilon: float,
    n_starts: int = 200,
    seed: int = 0,
    max_iter: int = 50,
    merge_radius: float | None = None,
) -> CriticalSetResult:
    """Multistart search for the critical set of f/||f|| on the epsilon-sphere.

    Each start runs Newton on the augmented system (omega(x) - lambda x,
    ||x||^2 - epsilon^2) from a seeded uniform sphere sample; non-converged
    starts are discarded.  Converged points on the link (||f|| below the link
    tolerance) are excluded, the rest deduplicated by `merge_radius` keeping
    the lower-residual representative.  Deterministic for a fixed seed; an
    empty result is a valid outcome.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    m = germ.num_vars
    w_field = omega(germ)
    omega_scale = max(
        max(poly_scale_at_radius(c, epsilon) for c in w_field.components),
        np.finfo(float).tiny,
    )
    par_tol = 1e-12 * omega_scale
    sphere_tol = 1e-12 * epsilon**2
    if merge_radius is None:
        merge_radius = 1e-6 * epsilon
    f_tol = link_tolerance(germ, epsilon)

    def fun(z: np.ndarray) -> np.ndarray:
        x, lam = z[:-1], z[-1]
        wx = w_field.evaluate(x)
        return np.append(wx - lam * x, 0.5 * (x @ x - epsilon**2))

    def jac(z: np.ndarray) -> np.ndarray:
        x, lam = z[:-1], z[-1]
        top = np.hstack([w_field.jacobian_at(x) - lam * np.eye(m), -x[:, None]])
        bottom = np.append(x, 0.0)
        return np.vstack([top, bottom])

    def converged(z: np.ndarray, f: np.ndarray) -> bool:
        return bool(
            np.linalg.norm(f[:-1]) <= par_tol and abs(f[-1]) <= sphere_tol
        )

    found: list[tuple[tuple[float, ...], float, bool]] = []
    for i in range(n_starts):
        x0 = sphere_point(m, epsilon, seed, i)
        lam0 = float(w_field.evaluate(x0) @ x0) / epsilon**2
        z = newton_square(fun, jac, np.append(x0, lam0), converged, max_iter)
        if z is None:
            continue
        x = z[:-1]
        if germ.norm_at(x) <= f_tol:
            continue
        wx = w_field.evaluate(x)
        nw = float(np.linalg.norm(wx))
        nx = float(np.linalg.norm(x))
        gram = max(nw**2 * nx**2 - float(wx @ x) ** 2, 0.0)
        residual = gram / (omega_scale * epsilon) ** 2
        omega_zero = nw <= 1e-10 * omega_scale
        found.append((tuple(float(v) for v in x), residual, omega_zero))

    found.sort(key=lambda item: item[0])
    merged: list[list] = []
    for point, residual, flag in found:
        home = None
        for entry in merged:
            if np.linalg.norm(np.subtract(entry[0], point)) <= merge_radius:
                home = entry
                break
        if home is None:
            merged.append([point, residual, flag])
        elif residual < home[1]:
            home[0], home[1], home[2] = point, residual, flag
    merged.sort(key=lambda entry: entry[0])

    return CriticalSetResult(
        epsilon=float(epsilon),
        points=tuple(entry[0] for entry in merged),
        residuals=tuple(entry[1] for entry in merged),
        omega_zero_flags=tuple(entry[2] for entry in merged),
        multistart_count=n_starts,
        seed=int(seed),
        merge_radius=float(merge_radius),
    )


def link_points(
    germ: MapGerm,
    epsilon: float,
    n: int = 200,
    seed: int = 0,
    max_iter: int = 50,
) -> LinkSample:
    """Sample the link: sphere points where both P and Q vanish.

    Runs minimum-norm Gauss-Newton on (P, Q, ||x||^2 - epsilon^2) from seeded
    sphere starts, keeping converged points with ||f|| at most the link
    tolerance.  Empty when the link is empty.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    m = germ.num_vars
    f_tol = link_tolerance(germ, epsilon)
    sphere_tol = 1e-12 * epsilon**2
    grad_p = germ.p.gradient()
    grad_q = germ.q.gradient()

    def fun(x: np.ndarray) -> np.ndarray:
        return np.array(
            [germ.p.evaluate(x), germ.q.evaluate(x), 0.5 * (x @ x - epsilon**2)]
        )

    def jac(x: np.ndarray) -> np.ndarray:
        return np.vstack([grad_p.evaluate(x), grad_q.evaluate(x), x])

    def converged(x: np.ndarray, f: np.ndarray) -> bool:
        return bool(np.hypot(f[0], f[1]) <= 0.1 * f_tol and abs(f[2]) <= sphere_tol)

    points: list[tuple[float, ...]] = []
    norms: list[float] = []
    for i in range(n):
        x0 = sphere_point(m, epsilon, seed, i)
        x = newton_minimum_norm(fun, jac, x0, converged, max_iter)
        if x is None:
            continue
        points.append(tuple(float(v) for v in x))
        norms.append(germ.norm_at(x))
    order = sorted(range(len(points)), key=lambda i: points[i])
    return LinkSample(
        epsilon=float(epsilon),
        points=tuple(points[i] for i in order),
        f_norms=tuple(norms[i] for i in order),
    )
