"""Named example germs used throughout the tests and documentation."""

from __future__ import annotations

import math

from .algebra import MapGerm, Polynomial


def complex_square() -> MapGerm:
    """z^2 as a real pair: (x^2 - y^2, 2xy).  Weights (1, 1), degree 2."""
    p = Polynomial(2, {(2, 0): 1, (0, 2): -1})
    q = Polynomial(2, {(1, 1): 2})
    return MapGerm(p, q, ("x", "y"))


def weighted_twist() -> MapGerm:
    """(x^2 - y^4, x y^2).  Weighted homogeneous for weights (2, 1), degree 4."""
    p = Polynomial(2, {(2, 0): 1, (0, 4): -1})
    q = Polynomial(2, {(1, 2): 1})
    return MapGerm(p, q, ("x", "y"))


def conjugate_product() -> MapGerm:
    """z1 * conj(z2) in real coordinates (x1, y1, x2, y2).

    P = x1 x2 + y1 y2, Q = y1 x2 - x1 y2.  Its zero set is the union
    {z1 = 0} u {z2 = 0}, so the link in S^3 is a pair of Hopf circles.
    """
    p = Polynomial(4, {(1, 0, 1, 0): 1, (0, 1, 0, 1): 1})
    q = Polynomial(4, {(0, 1, 1, 0): 1, (1, 0, 0, 1): -1})
    return MapGerm(p, q, ("x1", "y1", "x2", "y2"))


def milnor_nonfibering() -> MapGerm:
    """Milnor's classic germ (x, x^2 + y(x^2 + y^2)).

    The direction map f/||f|| on small circles has critical points along a
    curve through the origin, so it is not the projection of a fibration.
    The pair admits no positive weight system.
    """
    p = Polynomial(2, {(1, 0): 1})
    q = Polynomial(2, {(2, 0): 1, (2, 1): 1, (0, 3): 1})
    return MapGerm(p, q, ("x", "y"))


def milnor_nonfibering_polar_radius(theta: float) -> float:
    """Radius r(theta) = sin(theta) cos^2(theta) of the critical curve.

    In polar coordinates the tangential parallelism residual of
    `milnor_nonfibering` factors as r^3 (r - sin(theta) cos^2(theta)), so the
    critical points off the origin lie exactly on this curve (r > 0 branch).
    """
    c = math.cos(theta)
    return math.sin(theta) * c * c


BUILTIN_GERMS = {
    "complex_square": complex_square,
    "weighted_twist": weighted_twist,
    "conjugate_product": conjugate_product,
    "milnor_nonfibering": milnor_nonfibering,
}
