"""Geometry of the deformed-triangle family T(t).

T is the right-angled equilateral triangle with vertices (0, 0), (pi/2, 0),
(pi/2, pi/2) in geodesic polar coordinates about the north pole; T(t) moves
the apex to (pi/2 - b t, pi/2 - a t) with a^2 + b^2 = 1, a, b >= 0. The
family is realized on the fixed coordinate rectangle by the diffeomorphism

    F_t(r, theta) = (r - l(z, psi) * 2r/pi, psi),    psi = (1 - A) theta,

where A = 2 a t / pi, z = z(a, b, t) is the apex offset angle, and
l(alpha, theta) is the spherical side-length function below. Pulling the
round metric back through F_t turns the eigenvalue problem on T(t) into a
variable-coefficient problem on the rectangle; this module supplies the
exact pullback metric, its determinant and inverse factors, and the
first-order (in t) correction operator to the Laplacian.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularPointError

_HALF_PI = math.pi / 2


@dataclass(frozen=True)
class DeformationParams:
    """Deformation direction (a, b) on the unit circle and magnitude t >= 0."""

    a: float
    b: float
    t: float = 0.0

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("direction components must be nonnegative")
        if abs(self.a**2 + self.b**2 - 1.0) > 1e-12:
            raise ValueError("direction must satisfy a^2 + b^2 = 1")
        if self.t < 0:
            raise ValueError("deformation magnitude t must be >= 0")
        if _HALF_PI - self.a * self.t <= 0 or _HALF_PI - self.b * self.t <= 0:
            raise ValueError("t too large: the moved apex leaves the quadrant")


@dataclass(frozen=True)
class CoordPoint:
    """Point of the coordinate rectangle [0, pi/2] x [0, pi/2]."""

    r: float
    theta: float

    def __post_init__(self):
        if not (0.0 <= self.r <= _HALF_PI) or not (0.0 <= self.theta <= _HALF_PI):
            raise ValueError(f"({self.r}, {self.theta}) outside the coordinate rectangle")


@dataclass(frozen=True)
class MetricTensor:
    """Symmetric 2x2 metric at a point, components in (r, theta) order."""

    g_rr: float
    g_rtheta: float
    g_thetatheta: float

    @property
    def det(self) -> float:
        return self.g_rr * self.g_thetatheta - self.g_rtheta**2

    def inv(self) -> "MetricTensor":
        d = self.det
        return MetricTensor(self.g_thetatheta / d, -self.g_rtheta / d, self.g_rr / d)

    def as_array(self) -> np.ndarray:
        return np.array([[self.g_rr, self.g_rtheta], [self.g_rtheta, self.g_thetatheta]])


def side_distance(alpha, theta):
    """Distance from the equator to the slanted side, as a function of longitude.

    For the spherical triangle with a side of length theta on the equator,
    a right angle at its far end and angle alpha at the near end,

        l(alpha, theta) = arcsin( sin(alpha) sin(theta)
                                  / sqrt(1 - sin^2(alpha) cos^2(theta)) ).

    The denominator vanishes only at alpha = pi/2, theta = 0; the limit 0
    along theta -> 0 is returned there. Accepts scalars or arrays.
    """
    sa, st, ct = np.sin(alpha), np.sin(theta), np.cos(theta)
    den_sq = 1.0 - sa**2 * ct**2
    tiny = den_sq < 1e-30
    den = np.sqrt(np.where(tiny, 1.0, den_sq))
    val = np.arcsin(np.clip(sa * st / den, -1.0, 1.0))
    out = np.where(tiny, 0.0, val)
    return float(out) if np.ndim(out) == 0 else out


def side_distance_dtheta(alpha, theta):
    """Analytic d/dtheta of side_distance: sin(a)cos(a)cos(th) / (1 - sin^2(a)cos^2(th))."""
    sa, ca = np.sin(alpha), np.cos(alpha)
    ct = np.cos(theta)
    out = sa * ca * ct / (1.0 - sa**2 * ct**2)
    return float(out) if np.ndim(out) == 0 else out


def apex_offset(params: DeformationParams) -> float:
    """Angle z(a, b, t) the slanted side makes at the vertex (pi/2, 0).

    Defined by l(z, pi/2 - a t) = b t; in closed form
    z = arcsin( sin(b t) / sqrt(cos^2(a t) + sin^2(b t) sin^2(a t)) ).
    """
    sb = math.sin(params.b * params.t)
    ca = math.cos(params.a * params.t)
    sa = math.sin(params.a * params.t)
    return math.asin(sb / math.sqrt(ca * ca + sb * sb * sa * sa))


def _deformation_fields(params: DeformationParams, theta):
    """(A, psi, l, L) at longitude theta, with L = d/dtheta [l(z, (1-A) theta)]."""
    z = apex_offset(params)
    A = 2.0 * params.a * params.t / math.pi
    psi = (1.0 - A) * np.asarray(theta, dtype=float)
    l = side_distance(z, psi)
    L = (1.0 - A) * side_distance_dtheta(z, psi)
    return A, psi, l, L


def deform_map(params: DeformationParams, p: CoordPoint) -> CoordPoint:
    """Image F_t(p); fixes (0, 0) and (pi/2, 0), sends the apex to the moved apex."""
    A, psi, l, _ = _deformation_fields(params, p.theta)
    return CoordPoint(p.r - l * 2.0 * p.r / math.pi, float(psi))


def deform_jacobian(params: DeformationParams, p: CoordPoint) -> np.ndarray:
    """Analytic Jacobian dF_t at p (rows: image coords, columns: d/dr, d/dtheta)."""
    A, psi, l, L = _deformation_fields(params, p.theta)
    return np.array([
        [1.0 - 2.0 * l / math.pi, -2.0 * p.r / math.pi * L],
        [0.0, 1.0 - A],
    ])


def pullback_metric(params: DeformationParams, p: CoordPoint) -> MetricTensor:
    """Pullback g_t = dF_t^T g_S(F_t(p)) dF_t of the round metric; needs r > 0.

    det(g_t) = (1 - 2l/pi)^2 (1 - A)^2 sin^2(r (1 - 2l/pi)) in closed form.
    """
    if p.r <= 0.0:
        raise SingularPointError("metric is degenerate at the pole r = 0")
    A, psi, l, L = _deformation_fields(params, p.theta)
    c1 = 1.0 - 2.0 * l / math.pi
    s = math.sin(p.r * c1)
    a12 = -2.0 * p.r / math.pi * L
    return MetricTensor(
        g_rr=c1 * c1,
        g_rtheta=c1 * a12,
        g_thetatheta=a12 * a12 + (1.0 - A) ** 2 * s * s,
    )


def pullback_det(params: DeformationParams, r, theta):
    """Closed-form determinant of the pullback metric; vectorized."""
    A, psi, l, _ = _deformation_fields(params, theta)
    c1 = 1.0 - 2.0 * np.asarray(l) / math.pi
    return (c1 * (1.0 - A) * np.sin(np.asarray(r) * c1)) ** 2


def metric_coefficients(params: DeformationParams, r, theta):
    """Weak-form coefficient fields (g^rr, g^rth, g^thth) * sqrt(det g) and sqrt(det g).

    Vectorized over r, theta; these are the only metric quantities the
    discrete eigensolver samples. Valid for r > 0.
    """
    r = np.asarray(r, dtype=float)
    A, psi, l, L = _deformation_fields(params, theta)
    c1 = 1.0 - 2.0 * l / math.pi
    s = np.sin(r * c1)
    one_m_a = 1.0 - A
    w11 = (4.0 * r**2 / math.pi**2) * L**2 / (c1 * one_m_a * s) + one_m_a * s / c1
    w12 = (2.0 * r / math.pi) * L / (one_m_a * s)
    w22 = c1 / (one_m_a * s)
    m = c1 * one_m_a * s
    return w11, w12, w22, m


@dataclass(frozen=True)
class FieldSample:
    """Partial derivatives of a scalar field at one point, as plain values."""

    d_r: float
    d_rr: float
    d_rtheta: float
    d_thetatheta: float


def first_order_operator_apply(
    params: DeformationParams, sample: FieldSample, p: CoordPoint
) -> float:
    """First-order correction operator of the deformed Laplacian, applied at p.

    The Laplacian of the pullback metric expands as Delta_t = Delta_round
    + t * L1 + O(t^2) with

        L1 = (4/pi) b sin(th) d_rr + (2/pi) b sin(th) cot(r) d_r
           + (4/pi) b r cos(th) csc^2(r) d_r d_th
           + (4/pi) b r sin(th) cot(r) csc^2(r) d_th^2
           + (4/pi) a csc^2(r) d_th^2.

    Only the direction (a, b) enters. Requires r > 0.
    """
    if p.r <= 0.0:
        raise SingularPointError("operator is singular at the pole r = 0")
    a, b = params.a, params.b
    r, th = p.r, p.theta
    sin_r, cos_r = math.sin(r), math.cos(r)
    cot = cos_r / sin_r
    csc2 = 1.0 / (sin_r * sin_r)
    four_over_pi = 4.0 / math.pi
    return (
        four_over_pi * b * math.sin(th) * sample.d_rr
        + 0.5 * four_over_pi * b * math.sin(th) * cot * sample.d_r
        + four_over_pi * b * r * math.cos(th) * csc2 * sample.d_rtheta
        + four_over_pi * b * r * math.sin(th) * cot * csc2 * sample.d_thetatheta
        + four_over_pi * a * csc2 * sample.d_thetatheta
    )
