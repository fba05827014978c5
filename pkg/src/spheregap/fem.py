"""Bilinear finite elements for the Laplace-Beltrami Dirichlet problem.

The deformed triangles are solved on the fixed coordinate rectangle with the
exact pullback metric: the weak form only needs the coefficient fields
(g^ij sqrt(det g)) and sqrt(det g) supplied by the geometry module, so no
metric derivatives enter. Q1 tensor-product elements on a uniform grid with
a 3x3 Gauss rule per cell; Dirichlet rows are eliminated on the edges
theta = 0, theta = beta and (for triangles) r = r_max, while pole edges keep
their nodes: the measure sqrt(det g) vanishes there, which makes the
discrete problem well posed without a boundary condition.

Independent of the closed-form spectra, this provides numeric eigenvalues
lambda_i(t), gaps, and finite-difference gap slopes for the deformation
family.
"""
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg import eigh

from .errors import AssemblyError, ConvergenceError
from .geometry import DeformationParams, metric_coefficients

_GAUSS3_NODES = np.array([0.5 - math.sqrt(15.0) / 10.0, 0.5, 0.5 + math.sqrt(15.0) / 10.0])
_GAUSS3_WEIGHTS = np.array([5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0])


@dataclass(frozen=True)
class SolverConfig:
    """Grid resolution and eigensolver settings."""

    grid_n: int = 64          # nodes per axis
    num_modes: int = 4        # eigenpairs to compute
    shift: float = 0.0        # spectral shift of the shift-invert iteration
    tol: float = 1e-6         # accepted relative eigen-residual

    def __post_init__(self):
        if self.grid_n < 8:
            raise ValueError("grid_n must be >= 8")
        if self.num_modes < 2:
            raise ValueError("num_modes must be >= 2")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass
class DiscreteEigenproblem:
    """Assembled stiffness/mass pair with Dirichlet rows eliminated."""

    stiffness: sp.csr_matrix
    mass: sp.csr_matrix
    keep: np.ndarray            # retained node ids in the full grid numbering
    grid_r: np.ndarray
    grid_theta: np.ndarray
    shape: tuple = field(default=(0, 0))

    @property
    def num_dof(self) -> int:
        return self.stiffness.shape[0]

    def scatter(self, vec: np.ndarray) -> np.ndarray:
        """Embed a reduced-dof vector back onto the full (n_r, n_theta) grid."""
        full = np.zeros(self.shape[0] * self.shape[1])
        full[self.keep] = vec
        return full.reshape(self.shape)


def _reference_basis():
    """Q1 basis values and reference gradients at the 3x3 Gauss points."""
    xi, eta = np.meshgrid(_GAUSS3_NODES, _GAUSS3_NODES, indexing="ij")
    xi, eta = xi.ravel(), eta.ravel()
    wq = np.outer(_GAUSS3_WEIGHTS, _GAUSS3_WEIGHTS).ravel()
    phi = np.stack([(1 - xi) * (1 - eta), xi * (1 - eta), (1 - xi) * eta, xi * eta])
    dphx = np.stack([-(1 - eta), (1 - eta), -eta, eta])
    dphy = np.stack([-(1 - xi), -xi, (1 - xi), xi])
    return wq, phi, dphx, dphy


def assemble(params: DeformationParams, config: SolverConfig, *,
             beta: float = math.pi / 2, domain: str = "triangle") -> DiscreteEigenproblem:
    """Assemble the generalized eigenproblem K v = lambda M v.

    domain "triangle" uses the rectangle [0, r_max] x [0, beta] with
    r_max = pi/2 and a Dirichlet edge at r = r_max; domain "lune" uses
    r_max = pi with pole edges at both r = 0 and r = pi. Deformations
    (t > 0) are defined only for the beta = pi/2 triangle.
    """
    from ._kernels import local_matrices

    if domain not in ("triangle", "lune"):
        raise ValueError(f"unknown domain {domain!r}")
    if params.t > 0 and (domain != "triangle" or abs(beta - math.pi / 2) > 1e-15):
        raise ValueError("deformed metrics are defined on the beta = pi/2 triangle only")
    r_max = math.pi / 2 if domain == "triangle" else math.pi
    n = config.grid_n
    hx = r_max / (n - 1)
    hy = beta / (n - 1)
    wq, phi, dphx, dphy = _reference_basis()

    nc = n - 1
    ci, cj = np.meshgrid(np.arange(nc), np.arange(nc), indexing="ij")
    ci, cj = ci.ravel(), cj.ravel()
    # quadrature points per cell, tensor order matching _reference_basis
    xi, eta = np.meshgrid(_GAUSS3_NODES, _GAUSS3_NODES, indexing="ij")
    rq = (ci[:, None] + xi.ravel()[None, :]) * hx
    tq = (cj[:, None] + eta.ravel()[None, :]) * hy
    w11, w12, w22, m = metric_coefficients(params, rq, tq)

    scale = wq[None, :] * (hx * hy)
    kloc, mloc = local_matrices(
        w11 * scale / hx**2,
        w12 * scale / (hx * hy),
        w22 * scale / hy**2,
        m * scale,
        phi, dphx, dphy,
    )

    conn = np.stack([
        ci * n + cj,
        (ci + 1) * n + cj,
        ci * n + (cj + 1),
        (ci + 1) * n + (cj + 1),
    ], axis=1)
    rows = np.repeat(conn, 4, axis=1).ravel()
    cols = np.tile(conn, (1, 4)).ravel()
    size = n * n
    stiffness = sp.coo_matrix((kloc.ravel(), (rows, cols)), shape=(size, size)).tocsr()
    mass = sp.coo_matrix((mloc.ravel(), (rows, cols)), shape=(size, size)).tocsr()

    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    drop = (jj == 0) | (jj == n - 1)
    if domain == "triangle":
        drop |= ii == n - 1
    keep = np.flatnonzero(~drop.ravel())
    stiffness = stiffness[keep][:, keep].tocsr()
    mass = mass[keep][:, keep].tocsr()
    if mass.diagonal().min() <= 0:
        raise AssemblyError("mass matrix lost positivity after Dirichlet elimination")
    return DiscreteEigenproblem(
        stiffness, mass, keep,
        grid_r=np.linspace(0.0, r_max, n),
        grid_theta=np.linspace(0.0, beta, n),
        shape=(n, n),
    )


def solve_smallest(problem: DiscreteEigenproblem, m: int, *,
                   method: str = "auto", shift: float = 0.0, tol: float = 1e-6):
    """m smallest generalized eigenpairs, ascending; returns (values, vectors).

    method "sparse" runs shift-invert Lanczos, "dense" the LAPACK reference
    path (intended as an oracle for moderate grids), "auto" picks by size.
    Residuals ||K v - lambda M v|| / ||M v|| are checked against tol.
    """
    if m > problem.num_dof:
        raise ValueError("requested more modes than retained degrees of freedom")
    if method == "auto":
        method = "dense" if problem.num_dof <= 2500 else "sparse"
    if method == "dense":
        vals, vecs = eigh(problem.stiffness.toarray(), problem.mass.toarray(),
                          subset_by_index=[0, m - 1])
    elif method == "sparse":
        # deterministic start vector: repeated invocations must agree bitwise
        v0 = np.random.default_rng(2718281).standard_normal(problem.num_dof)
        try:
            vals, vecs = spla.eigsh(problem.stiffness, k=m, M=problem.mass,
                                    sigma=shift, which="LM", v0=v0)
        except spla.ArpackNoConvergence as exc:
            raise ConvergenceError("eigensolver did not converge", math.inf) from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    else:
        raise ValueError(f"unknown method {method!r}")
    worst = 0.0
    for i in range(m):
        v = vecs[:, i]
        mv = problem.mass @ v
        res = np.linalg.norm(problem.stiffness @ v - vals[i] * mv) / np.linalg.norm(mv)
        worst = max(worst, res)
    if worst > tol:
        raise ConvergenceError("eigen-residual above tolerance", worst)
    return vals, vecs


def numeric_gap(params: DeformationParams, config: SolverConfig) -> float:
    """lambda_2 - lambda_1 of the deformed triangle, eigenvalue #2 counted
    with multiplicity."""
    problem = assemble(params, config)
    vals, _ = solve_smallest(problem, max(config.num_modes, 3),
                             method="sparse", shift=config.shift, tol=config.tol)
    return float(vals[1] - vals[0])


def _neville_to_zero(ts, ys):
    """Polynomial extrapolation of samples (t_i, y_i) to t = 0; returns the
    tableau column endpoints (one per elimination level)."""
    ts = np.asarray(ts, dtype=float)
    cur = np.asarray(ys, dtype=float).copy()
    levels = [float(cur[-1])]
    for k in range(1, len(ts)):
        nxt = np.empty(len(cur) - 1)
        for i in range(len(nxt)):
            nxt[i] = (cur[i + 1] * ts[i] - cur[i] * ts[i + k]) / (ts[i] - ts[i + k])
        cur = nxt
        levels.append(float(cur[-1]))
    return levels


@dataclass(frozen=True)
class GapSlopeResult:
    """Extrapolated gap slope at t = 0 with its finite-difference history."""

    slope: float
    error_estimate: float
    t_values: tuple
    gaps: tuple
    slopes: tuple
    gap_at_zero: float
    warning: bool


def gap_slope(direction, t_values, config: SolverConfig, *,
              branch_match: bool = True) -> GapSlopeResult:
    """Richardson-extrapolated slope of the gap (Gamma(t) - Gamma(0)) / t.

    t_values must be positive and decreasing. The second eigenvalue at t = 0
    is discretely split (multiplicity 2 in the continuum); with branch_match
    the baseline uses the Rayleigh-weighted combination of the split pair
    selected by the second eigenvector at the smallest t, which removes the
    O(split/t) bias the plain minimum baseline would leave behind.
    """
    ts = [float(t) for t in t_values]
    if not ts or min(ts) <= 0 or any(t1 <= t2 for t1, t2 in zip(ts, ts[1:])):
        raise ValueError("t_values must be positive and strictly decreasing")
    a, b = direction
    m = max(config.num_modes, 4)

    problem0 = assemble(DeformationParams(a, b, 0.0), config)
    vals0, vecs0 = solve_smallest(problem0, m, method="sparse",
                                  shift=config.shift, tol=config.tol)

    solved = []
    for t in ts:
        problem = assemble(DeformationParams(a, b, t), config)
        vals, vecs = solve_smallest(problem, m, method="sparse",
                                    shift=config.shift, tol=config.tol)
        solved.append((t, vals, vecs))

    lam2_base = vals0[1]
    if branch_match:
        _, _, vecs_min = solved[-1]
        v2 = vecs_min[:, 1]
        cluster = [i for i in range(1, m)
                   if vals0[i] - vals0[1] < 1e-3 * max(1.0, vals0[1])]
        weights = np.array([abs(v2 @ (problem0.mass @ vecs0[:, i])) ** 2
                            for i in cluster])
        if weights.sum() > 0:
            lam2_base = float(np.sum(weights * vals0[cluster]) / weights.sum())
    gap0 = float(lam2_base - vals0[0])

    gaps = [float(v[1] - v[0]) for _, v, _ in solved]
    slopes = [(g - gap0) / t for (t, _, _), g in zip(solved, gaps)]
    levels = _neville_to_zero(ts, slopes)
    slope = levels[-1]
    corrections = [abs(levels[i + 1] - levels[i]) for i in range(len(levels) - 1)]
    error_estimate = corrections[-1] if corrections else math.inf
    warning = len(corrections) >= 2 and corrections[-1] > corrections[-2]
    return GapSlopeResult(
        slope=slope,
        error_estimate=error_estimate,
        t_values=tuple(ts),
        gaps=tuple(gaps),
        slopes=tuple(slopes),
        gap_at_zero=gap0,
        warning=warning,
    )
