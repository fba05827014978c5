"""Dirichlet spectra and fundamental-gap analysis of spherical lunes and
half-lune triangles: closed-form eigenvalues and eigenfunctions, the exact
first variation of the gap at the right-angled equilateral triangle, and an
independent finite-element cross-check on the deformed domains.
"""
import os as _os

# Cap BLAS/OpenMP parallelism before numpy loads anywhere in the package.
_threads = _os.environ.get("SPHEREGAP_THREADS", "").strip()
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                 "NUMEXPR_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from . import fem, geometry, special, spectra, variation
from ._kernels import backend as kernel_backend
from .errors import (
    AssemblyError,
    ConvergenceError,
    DomainError,
    GammaPoleError,
    SingularPointError,
    SphereGapError,
)
from .fem import DiscreteEigenproblem, GapSlopeResult, SolverConfig, assemble, gap_slope, numeric_gap, solve_smallest
from .geometry import (
    CoordPoint,
    DeformationParams,
    FieldSample,
    MetricTensor,
    apex_offset,
    deform_jacobian,
    deform_map,
    first_order_operator_apply,
    pullback_metric,
    side_distance,
)
from .special import LegendreParams, gamma_fn, legendre_p, legendre_p_at_zero, legendre_p_dx
from .spectra import (
    LuneSpec,
    ModeIndex,
    SpectrumEntry,
    TriangleSpec,
    eigenfunction_eval,
    gap,
    gap_closed_form,
    lune_eigenvalue,
    normalization_constant,
    spectrum,
    triangle_eigenvalue,
)
from .variation import (
    BilinearTermTable,
    PairingSpec,
    gap_variation_I,
    lambda1_dot,
    minimize_gap_variation,
    pairing_terms,
    verify_appendix,
)

__version__ = "0.1.0"
