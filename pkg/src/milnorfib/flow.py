"""Euler flow, fiber samplers, and the tube-vs-sphere equivalence check.

The Euler field (w_1 x_1, ..., w_m x_m) integrates in closed form:

    flow(x, s) = (x_1 e^{w_1 s}, ..., x_m e^{w_m s})

so no ODE stepping is needed anywhere.  For a weighted-homogeneous p of
degree b the flow transports values by p(flow(x, s)) = e^{b s} p(x); in
particular it rescales (P, Q) by a common factor when the degrees agree,
which fixes the direction f/||f|| along trajectories.  Flowing each point of
the Milnor tube {||f|| = eta} inside the ball out to the epsilon-sphere
therefore maps tube fibers onto sphere fibers; `equivalence_report` samples
that map and measures how well the diagram closes numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import MapGerm
from .critical import link_tolerance
from .errors import NotQuasiHomogeneousError, OnVarietyError
from .numeric import ball_point, newton_minimum_norm, sample_rng, sphere_point
from .weights import WeightSystem, germ_is_weighted_homogeneous


@dataclass(frozen=True)
class TubePoint:
    """A sample of the Milnor tube: ||f(x)|| = eta with x inside the ball."""

    x: tuple[float, ...]
    f_value: tuple[float, float]
    within_ball: bool


@dataclass(frozen=True)
class EquivalenceReport:
    """Measured commutativity of the tube-to-sphere diagram on sampled fibers."""

    epsilon: float
    eta: float
    num_samples: int
    max_angular_deviation: float
    max_sphere_residual: float
    max_flow_time: float
    injectivity_violations: int
    verdict: bool

    ANGLE_TOL = 1e-8
    SPHERE_TOL = 1e-10


def euler_flow(x, s: float, ws: WeightSystem) -> np.ndarray:
    """Closed-form flow of the Euler field: x_i -> x_i e^{w_i s}."""
    x = np.asarray(x, dtype=float)
    if x.size != ws.num_vars:
        raise ValueError("point dimension does not match the weight system")
    factors = np.exp(np.array([float(w) for w in ws.weights]) * float(s))
    return x * factors


def time_to_sphere(x, epsilon: float, ws: WeightSystem) -> float:
    """The unique s with ||flow(x, s)|| = epsilon.

    ||flow(x, s)||^2 = sum x_i^2 e^{2 w_i s} is strictly increasing in s for
    x != 0, so the crossing time is found by bracketing plus Newton polish to
    |  ||flow|| - epsilon | <= 1e-12 * epsilon.
    """
    x = np.asarray(x, dtype=float)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if x.size != ws.num_vars:
        raise ValueError("point dimension does not match the weight system")
    norm = float(np.linalg.norm(x))
    if norm == 0.0:
        raise ValueError("the flow fixes the origin; no sphere crossing exists")
    w = np.array([float(v) for v in ws.weights])
    x_sq = x * x

    def phi(s: float) -> float:
        return float(x_sq @ np.exp(2.0 * w * s)) - epsilon**2

    # All weights equal: the flow is radial and the time is explicit.
    if np.all(w == w[0]):
        return math.log(epsilon / norm) / w[0]

    lo = hi = math.log(epsilon / norm) / float(np.mean(w))
    step = 1.0
    while phi(lo) > 0:
        lo -= step
        step *= 2
    step = 1.0
    while phi(hi) < 0:
        hi += step
        step *= 2
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if phi(mid) > 0:
            hi = mid
        else:
            lo = mid
    s = 0.5 * (lo + hi)
    for _ in range(12):
        value = phi(s)
        if abs(math.sqrt(value + epsilon**2) - epsilon) <= 1e-13 * epsilon:
            break
        slope = float(x_sq @ (2.0 * w * np.exp(2.0 * w * s)))
        s -= value / slope
    return s


def tube_to_sphere(x, epsilon: float, ws: WeightSystem, germ: MapGerm | None = None) -> np.ndarray:
    """Flow x along the Euler field until it reaches the epsilon-sphere.

    This is the diffeomorphism from the Milnor tube onto the sphere minus the
    link; it keeps the direction f/||f|| fixed along the way.  Passing the
    germ enables the on-zero-set precondition check.
    """
    x = np.asarray(x, dtype=float)
    if float(np.linalg.norm(x)) == 0.0:
        raise ValueError("the origin is not in the tube")
    if germ is not None:
        nf = germ.norm_at(x)
        tol = link_tolerance(germ, float(np.linalg.norm(x)))
        if nf <= tol:
            raise OnVarietyError(f"||f(x)|| = {nf:.3e} puts x on the zero set")
    return euler_flow(x, time_to_sphere(x, epsilon, ws), ws)


def _require_eta(epsilon: float, eta: float, max_eta_ratio: float) -> None:
    if epsilon <= 0 or eta <= 0:
        raise ValueError("epsilon and eta must be positive")
    if eta > max_eta_ratio * epsilon:
        raise ValueError(
            f"eta = {eta} too large for epsilon = {epsilon}; "
            f"need eta <= {max_eta_ratio} * epsilon (override via max_eta_ratio)"
        )


def tube_fiber_sample(
    germ: MapGerm,
    epsilon: float,
    eta: float,
    theta: float,
    n: int = 32,
    seed: int = 0,
    max_eta_ratio: float = 0.1,
    max_iter: int = 60,
) -> list[TubePoint]:
    """Sample the tube fiber f(x) = eta (cos theta, sin theta) inside the ball.

    Multistart minimum-norm Newton onto the codimension-2 level set from
    seeded uniform ball samples.  Converged points are kept when the value
    residual is at most 1e-10 * eta and x stays in the closed ball; near
    duplicates are merged.  Deterministic for a fixed seed.
    """
    _require_eta(epsilon, eta, max_eta_ratio)
    m = germ.num_vars
    target = np.array([eta * math.cos(theta), eta * math.sin(theta)])
    tol = 1e-12 * eta
    grad_p = germ.p.gradient()
    grad_q = germ.q.gradient()

    def fun(x: np.ndarray) -> np.ndarray:
        return germ.value_at(x) - target

    def jac(x: np.ndarray) -> np.ndarray:
        return np.vstack([grad_p.evaluate(x), grad_q.evaluate(x)])

    def converged(x: np.ndarray, f: np.ndarray) -> bool:
        return bool(np.linalg.norm(f) <= tol)

    accepted: list[np.ndarray] = []
    for i in range(n):
        x0 = ball_point(m, epsilon, seed, i)
        x = newton_minimum_norm(fun, jac, x0, converged, max_iter)
        if x is None:
            continue
        if float(np.linalg.norm(x)) > epsilon * (1 + 1e-12):
            continue
        if any(np.linalg.norm(x - prev) <= 1e-8 * epsilon for prev in accepted):
            continue
        accepted.append(x)
    accepted.sort(key=lambda v: tuple(v))
    return [
        TubePoint(
            x=tuple(float(v) for v in x),
            f_value=tuple(float(v) for v in germ.value_at(x)),
            within_ball=True,
        )
        for x in accepted
    ]


def sphere_fiber_sample(
    germ: MapGerm,
    epsilon: float,
    theta: float,
    n: int = 32,
    seed: int = 0,
    max_iter: int = 60,
) -> list[np.ndarray]:
    """Sample the sphere fiber {x : ||x|| = epsilon, f/||f|| = (cos t, sin t)}.

    Solves the two equations ||x||^2 = epsilon^2 and Q cos t - P sin t = 0 by
    minimum-norm Newton, keeping converged points with the correct direction
    sign and ||f|| above the link tolerance; the angular error of returned
    points is at most 1e-10.  Empty results are valid.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    m = germ.num_vars
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    f_tol = link_tolerance(germ, epsilon)
    sphere_tol = 1e-12 * epsilon**2
    grad_p = germ.p.gradient()
    grad_q = germ.q.gradient()

    def fun(x: np.ndarray) -> np.ndarray:
        p_val = germ.p.evaluate(x)
        q_val = germ.q.evaluate(x)
        return np.array([0.5 * (x @ x - epsilon**2), q_val * cos_t - p_val * sin_t])

    def jac(x: np.ndarray) -> np.ndarray:
        row = cos_t * grad_q.evaluate(x) - sin_t * grad_p.evaluate(x)
        return np.vstack([x, row])

    def converged(x: np.ndarray, f: np.ndarray) -> bool:
        nf = germ.norm_at(x)
        return bool(
            abs(f[0]) <= sphere_tol and abs(f[1]) <= 1e-12 * max(nf, f_tol)
        )

    accepted: list[np.ndarray] = []
    for i in range(n):
        x0 = sphere_point(m, epsilon, seed, i)
        x = newton_minimum_norm(fun, jac, x0, converged, max_iter)
        if x is None:
            continue
        p_val, q_val = germ.value_at(x)
        if math.hypot(p_val, q_val) <= f_tol:
            continue
        if p_val * cos_t + q_val * sin_t <= 0:
            continue  # antipodal branch of the same line
        if any(np.linalg.norm(x - prev) <= 1e-8 * epsilon for prev in accepted):
            continue
        accepted.append(x)
    accepted.sort(key=lambda v: tuple(v))
    return accepted


def angle_between(u, v) -> float:
    """Angle in radians between two nonzero 2-vectors, robust near the axes."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    cross = u[0] * v[1] - u[1] * v[0]
    dot = u[0] * v[0] + u[1] * v[1]
    return abs(math.atan2(cross, dot))


def equivalence_report(
    germ: MapGerm,
    ws: WeightSystem,
    epsilon: float,
    eta: float,
    n: int = 100,
    seed: int = 0,
    max_eta_ratio: float = 0.1,
    starts_per_angle: int = 12,
) -> EquivalenceReport:
    """Measure commutativity of the tube-to-sphere diagram over n fiber angles.

    For each angle theta_j = 2 pi j / n one tube point is found, pushed to the
    sphere along the Euler flow, and scored: the angular deviation between
    f/||f|| before and after, the distance of the image from the sphere, and
    pairwise injectivity of the images.  The verdict requires the maxima to
    stay within the report's class tolerances.

    Raises NotQuasiHomogeneousError unless both components are weighted
    homogeneous for `ws` with equal degrees.
    """
    _require_eta(epsilon, eta, max_eta_ratio)
    if not ws.same_degree:
        raise NotQuasiHomogeneousError(
            f"the flow equivalence needs equal degrees; got {ws.degree_p} != {ws.degree_q}"
        )
    if not germ_is_weighted_homogeneous(germ, ws):
        raise NotQuasiHomogeneousError(
            "germ is not weighted homogeneous for the supplied weight system"
        )

    sources: list[np.ndarray] = []
    images: list[np.ndarray] = []
    max_angle = 0.0
    max_sphere = 0.0
    max_time = 0.0
    for j in range(n):
        theta = 2.0 * math.pi * j / n
        tube = tube_fiber_sample(
            germ,
            epsilon,
            eta,
            theta,
            n=starts_per_angle,
            seed=int(sample_rng(seed, j).integers(2**32)),
            max_eta_ratio=max_eta_ratio,
        )
        if not tube:
            continue
        x = np.array(tube[0].x)
        s = time_to_sphere(x, epsilon, ws)
        y = euler_flow(x, s, ws)
        f_x = germ.value_at(x)
        f_y = germ.value_at(y)
        max_angle = max(max_angle, angle_between(f_x, f_y))
        max_sphere = max(max_sphere, abs(float(np.linalg.norm(y)) - epsilon))
        max_time = max(max_time, abs(s))
        sources.append(x)
        images.append(y)

    violations = 0
    for a in range(len(images)):
        for b in range(a + 1, len(images)):
            image_gap = float(np.linalg.norm(images[a] - images[b]))
            source_gap = float(np.linalg.norm(sources[a] - sources[b]))
            if image_gap <= 1e-8 * epsilon and source_gap >= 1e-6 * epsilon:
                violations += 1

    verdict = (
        max_angle <= EquivalenceReport.ANGLE_TOL
        and max_sphere <= EquivalenceReport.SPHERE_TOL * epsilon
        and violations == 0
    )
    return EquivalenceReport(
        epsilon=float(epsilon),
        eta=float(eta),
        num_samples=len(images),
        max_angular_deviation=float(max_angle),
        max_sphere_residual=float(max_sphere),
        max_flow_time=float(max_time),
        injectivity_violations=violations,
        verdict=bool(verdict),
    )
