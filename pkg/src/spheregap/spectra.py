"""Closed-form Dirichlet spectra of spherical lunes and half-lune triangles.

A lune of opening angle beta is the region between two meridians in geodesic
polar coordinates (r, theta), 0 <= r <= pi, 0 <= theta <= beta; the
half-lune triangle is its upper half 0 <= r <= pi/2 with the extra Dirichlet
edge r = pi/2 (angles beta, pi/2, pi/2; equilateral when beta = pi/2).
Separation of variables gives eigenfunctions

    u = P_l^(-k pi/beta)(cos r) * sin(k pi theta / beta)

with degree l = k pi/beta + j for the lune and l = k pi/beta + 2j + 1 for
the triangle, and eigenvalues l(l+1).
"""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError
from .quadrature import gauss_legendre
from .special import LegendreParams, legendre_p_dx, legendre_p_many

COALESCE_RTOL = 1e-9

# internal eigenfunction evaluations use a tighter series tolerance than the
# library default: finite-difference oracles amplify truncation jumps by 1/h^2
_EVAL_TOL = 1e-13


@dataclass(frozen=True)
class LuneSpec:
    """Spherical lune with opening angle beta in (0, 2*pi)."""

    beta: float

    def __post_init__(self):
        if not 0.0 < self.beta < 2.0 * math.pi:
            raise ValueError(f"beta must lie in (0, 2*pi), got {self.beta}")


@dataclass(frozen=True)
class TriangleSpec:
    """Half-lune triangle bounded by theta = 0, theta = beta, r = pi/2."""

    beta: float

    def __post_init__(self):
        if not 0.0 < self.beta < 2.0 * math.pi:
            raise ValueError(f"beta must lie in (0, 2*pi), got {self.beta}")


@dataclass(frozen=True)
class ModeIndex:
    """Separated-mode index: angular wavenumber k >= 1, radial index j >= 0."""

    k: int
    j: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if self.j < 0:
            raise ValueError("j must be a nonnegative integer")


@dataclass(frozen=True)
class SpectrumEntry:
    """One distinct eigenvalue with every mode index that attains it."""

    eigenvalue: float
    modes: tuple


def lune_eigenvalue(spec: LuneSpec, mode: ModeIndex) -> float:
    """(k*pi/beta + j)(k*pi/beta + j + 1)."""
    x = mode.k * math.pi / spec.beta + mode.j
    return x * (x + 1.0)


def triangle_eigenvalue(spec: TriangleSpec, mode: ModeIndex) -> float:
    """(k*pi/beta + 2j + 1)(k*pi/beta + 2j + 2)."""
    x = mode.k * math.pi / spec.beta + 2 * mode.j + 1
    return x * (x + 1.0)


def eigenvalue(spec, mode: ModeIndex) -> float:
    if isinstance(spec, LuneSpec):
        return lune_eigenvalue(spec, mode)
    if isinstance(spec, TriangleSpec):
        return triangle_eigenvalue(spec, mode)
    raise TypeError(f"unsupported domain spec {type(spec).__name__}")


def spectrum(spec, count: int) -> list:
    """The `count` smallest distinct eigenvalues, each with its full mode list.

    Both eigenvalue formulas increase strictly in k and in j, so every mode
    with eigenvalue below the cutoff lies in a bounded index rectangle and
    the returned mode lists are complete. Modes whose values differ by less
    than COALESCE_RTOL (relative) are reported as one entry.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    # cutoff from a generous candidate rectangle
    probe = sorted(
        eigenvalue(spec, ModeIndex(k, j))
        for k in range(1, count + 2)
        for j in range(0, count + 2)
    )
    distinct = [probe[0]]
    for lam in probe[1:]:
        if lam - distinct[-1] > COALESCE_RTOL * max(1.0, lam):
            distinct.append(lam)
    cutoff = distinct[min(count - 1, len(distinct) - 1)]
    # complete enumeration below the cutoff
    found = []
    k = 1
    while eigenvalue(spec, ModeIndex(k, 0)) <= cutoff * (1.0 + COALESCE_RTOL):
        j = 0
        while True:
            lam = eigenvalue(spec, ModeIndex(k, j))
            if lam > cutoff * (1.0 + COALESCE_RTOL):
                break
            found.append((lam, ModeIndex(k, j)))
            j += 1
        k += 1
    found.sort(key=lambda item: (item[0], item[1].k, item[1].j))
    entries = []
    for lam, mode in found:
        if entries and lam - entries[-1][0] <= COALESCE_RTOL * max(1.0, lam):
            entries[-1][1].append(mode)
        else:
            entries.append((lam, [mode]))
    return [
        SpectrumEntry(lam, tuple(sorted(modes, key=lambda m: (m.k, m.j))))
        for lam, modes in entries[:count]
    ]


def gap(spec) -> float:
    """Fundamental gap lambda_2 - lambda_1.

    The second eigenvalue is the smaller of the two candidate modes (1, 1)
    and (2, 0); this reproduces the piecewise closed forms with crossover at
    beta = pi (lune) and beta = pi/2 (triangle).
    """
    lam1 = eigenvalue(spec, ModeIndex(1, 0))
    lam2 = min(eigenvalue(spec, ModeIndex(1, 1)), eigenvalue(spec, ModeIndex(2, 0)))
    return lam2 - lam1


def gap_closed_form(spec) -> float:
    """Piecewise closed form of the gap (used as a cross-check on gap())."""
    x = math.pi / spec.beta
    if isinstance(spec, LuneSpec):
        return 3.0 * x * x + x if spec.beta > math.pi else 2.0 * x + 2.0
    if isinstance(spec, TriangleSpec):
        return 3.0 * x * x + 3.0 * x if spec.beta > math.pi / 2 else 4.0 * x + 10.0
    raise TypeError(f"unsupported domain spec {type(spec).__name__}")


def gap_regime(spec) -> str:
    """Which branch of the piecewise gap formula is active."""
    if isinstance(spec, LuneSpec):
        return "beta>pi" if spec.beta > math.pi else "beta<=pi"
    return "beta>pi/2" if spec.beta > math.pi / 2 else "beta<=pi/2"


def legendre_params_for(spec, mode: ModeIndex) -> LegendreParams:
    """Degree and order of the radial factor of the given mode."""
    x = mode.k * math.pi / spec.beta
    if isinstance(spec, LuneSpec):
        return LegendreParams(x + mode.j, -x)
    return LegendreParams(x + 2 * mode.j + 1, -x)


def _r_max(spec) -> float:
    return math.pi if isinstance(spec, LuneSpec) else math.pi / 2


@lru_cache(maxsize=256)
def _triangle_radial_scale(degree: float, order: float) -> float:
    # slope of P in x = cos(r) at the r = pi/2 edge; nonzero because the
    # radial factor vanishes there and solves a second-order ODE
    return legendre_p_dx(degree, order, 0.0, tol=_EVAL_TOL)


def _radial_values(spec, mode: ModeIndex, r):
    params = legendre_params_for(spec, mode)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    x = np.cos(r)
    # south pole r = pi maps to x = -1; admissible modes vanish there
    x_clip = np.where(x <= -1.0, 0.0, x)
    vals = legendre_p_many(params.degree, params.order, x_clip, tol=_EVAL_TOL)
    vals = np.where(x <= -1.0, 0.0, vals)
    if isinstance(spec, TriangleSpec):
        vals = vals / _triangle_radial_scale(params.degree, params.order)
    return vals


def eigenfunction_eval(spec, mode: ModeIndex, r: float, theta: float) -> float:
    """Unnormalized separated eigenfunction at (r, theta).

    Vanishes on every Dirichlet edge. For triangles the radial factor is
    scaled to unit slope in cos(r) at the r = pi/2 edge, so for beta = pi/2
    the three lowest modes reduce to the plain trigonometric forms
    sin^2(r)cos(r)sin(2 theta), (3cos^5 - 4cos^3 + cos)(r)sin(2 theta) and
    cos(r)sin^4(r)sin(4 theta).
    """
    if not (0.0 <= theta <= spec.beta) or not (0.0 <= r <= _r_max(spec)):
        raise DomainError(
            f"point (r={r}, theta={theta}) outside the coordinate domain"
        )
    x = mode.k * math.pi / spec.beta
    return float(_radial_values(spec, mode, r)[0] * math.sin(x * theta))


def normalization_constant(spec, mode: ModeIndex, *, nodes: int = 200) -> float:
    """Constant c making c * eigenfunction have unit L2 norm on the domain.

    The norm integral (weight sin r dr dtheta) is evaluated with separated
    Gauss-Legendre rules; `nodes` is the point count per axis.
    """

    def norm_sq(n):
        rq, rw = gauss_legendre(0.0, _r_max(spec), n)
        tq, tw = gauss_legendre(0.0, spec.beta, n)
        rad = _radial_values(spec, mode, rq)
        x = mode.k * math.pi / spec.beta
        ang = np.sin(x * tq)
        return float(np.sum(rw * rad**2 * np.sin(rq)) * np.sum(tw * ang**2))

    full = norm_sq(nodes)
    half = norm_sq(max(8, nodes // 2))
    if abs(full - half) > 1e-9 * abs(full):
        raise ConvergenceError(
            "normalization quadrature did not settle", abs(full - half) / abs(full)
        )
    return 1.0 / math.sqrt(full)
