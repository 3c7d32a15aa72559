"""The field omega = P grad Q - Q grad P and the identity certificates.

For a weighted-homogeneous pair of the same degree b, three identities make
the Euler field a valid carrier for pushing the Milnor tube onto the sphere:

  * omega-euler orthogonality:   <omega, e> = 0
  * tube transversality:         <grad ||f||^2, e> = 2 b (P^2 + Q^2)
  * the Euler identities:        <grad P, e> = b1 P  and  <grad Q, e> = b2 Q

Each is certified symbolically: the residual polynomial is expanded exactly
over the rationals and must be identically zero.  No tolerances are involved.

`df_min_singular_sample` is the one numeric routine here: sampled evidence
(never proof) that Df keeps rank 2 away from the zero set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import MapGerm, Polynomial, PolyVectorField
from .errors import DegenerateSampleError
from .numeric import sphere_point
from .weights import WeightSystem, euler_field, euler_residual

OMEGA_EULER = "omega_euler_orthogonality"
TUBE_TRANSVERSALITY = "tube_transversality"
EULER_P = "euler_identity_p"
EULER_Q = "euler_identity_q"


@dataclass(frozen=True)
class IdentityCertificate:
    """A named residual polynomial; the identity holds iff the residual is zero."""

    name: str
    residual: Polynomial
    holds: bool


@dataclass(frozen=True)
class RankSampleReport:
    """Sampled minimum singular value of Df on a sphere, away from the zero set."""

    epsilon: float
    num_samples: int
    min_sigma: float
    worst_point: tuple[float, ...]
    off_variety_tolerance: float


def omega(germ: MapGerm) -> PolyVectorField:
    """P grad Q - Q grad P, expanded exactly."""
    return germ.q.gradient().scale(germ.p) - germ.p.gradient().scale(germ.q)


def grad_norm_sq(germ: MapGerm) -> PolyVectorField:
    """grad ||f||^2 = 2 (P grad P + Q grad Q), exactly."""
    doubled = germ.p.gradient().scale(germ.p) + germ.q.gradient().scale(germ.q)
    return doubled.scale(2)


def omega_euler_certificate(germ: MapGerm, ws: WeightSystem) -> IdentityCertificate:
    """Certify <omega, e> = 0; requires equal degrees, the identity's hypothesis."""
    if not ws.same_degree:
        raise ValueError(
            "omega-euler orthogonality needs equal degrees; "
            f"got {ws.degree_p} and {ws.degree_q}"
        )
    residual = omega(germ).dot(euler_field(ws))
    return IdentityCertificate(OMEGA_EULER, residual, residual.is_zero())


def tube_transversality_certificate(germ: MapGerm, ws: WeightSystem) -> IdentityCertificate:
    """Certify <grad ||f||^2, e> - 2b (P^2 + Q^2) = 0 for the common degree b.

    A zero residual reduces positivity of <grad ||f||^2, e> off the zero set
    to the plain fact P^2 + Q^2 > 0 there.
    """
    if not ws.same_degree:
        raise ValueError(
            "tube transversality needs equal degrees; "
            f"got {ws.degree_p} and {ws.degree_q}"
        )
    b = ws.degree_p
    expected = (germ.p * germ.p + germ.q * germ.q) * (2 * b)
    residual = grad_norm_sq(germ).dot(euler_field(ws)) - expected
    return IdentityCertificate(TUBE_TRANSVERSALITY, residual, residual.is_zero())


def euler_certificate(p: Polynomial, ws: WeightSystem, degree: Fraction, name: str) -> IdentityCertificate:
    residual = euler_residual(p, ws, degree)
    return IdentityCertificate(name, residual, residual.is_zero())


def identity_certificates(germ: MapGerm, ws: WeightSystem) -> list[IdentityCertificate]:
    """The four certificates for a same-degree weight system, in fixed order."""
    return [
        euler_certificate(germ.p, ws, ws.degree_p, EULER_P),
        euler_certificate(germ.q, ws, ws.degree_q, EULER_Q),
        omega_euler_certificate(germ, ws),
        tube_transversality_certificate(germ, ws),
    ]


def poly_scale_at_radius(p: Polynomial, radius: float) -> float:
    """sum |coeff| * radius^deg(term): a coarse bound for |p| on the sphere."""
    return sum(abs(float(c)) * radius ** sum(e) for e, c in p.terms())


def germ_value_scale(germ: MapGerm, radius: float) -> float:
    """Magnitude scale of ||f|| on the radius sphere (coefficient bound)."""
    return max(
        poly_scale_at_radius(germ.p, radius),
        poly_scale_at_radius(germ.q, radius),
        np.finfo(float).tiny,
    )


def df_min_singular_sample(
    germ: MapGerm,
    epsilon: float,
    n: int,
    seed: int,
    off_variety_tolerance: float | None = None,
) -> RankSampleReport:
    """Minimum singular value of Df over n sphere samples with ||f|| above tolerance.

    Sampled evidence for full rank of Df near (not at) the zero set; a report,
    not a proof.  Points with ||f|| at or below the tolerance are discarded
    because Df may legitimately drop rank on the zero set itself.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if n < 1:
        raise ValueError("need at least one sample")
    if off_variety_tolerance is None:
        off_variety_tolerance = 1e-8 * germ_value_scale(germ, epsilon)
    min_sigma = np.inf
    worst = None
    kept = 0
    for i in range(n):
        x = sphere_point(germ.num_vars, epsilon, seed, i)
        if germ.norm_at(x) <= off_variety_tolerance:
            continue
        kept += 1
        sigma = np.linalg.svd(germ.jacobian_at(x), compute_uv=False)[-1]
        if sigma < min_sigma:
            min_sigma = sigma
            worst = x
    if worst is None:
        raise DegenerateSampleError(
            f"all {n} samples fell within {off_variety_tolerance} of the zero set"
        )
    return RankSampleReport(
        epsilon=float(epsilon),
        num_samples=kept,
        min_sigma=float(min_sigma),
        worst_point=tuple(float(v) for v in worst),
        off_variety_tolerance=float(off_variety_tolerance),
    )
