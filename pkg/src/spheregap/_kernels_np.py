"""Pure-numpy implementations of the hot kernels.

Same call signatures as the compiled module ``_kernels_cy``; selected by
``spheregap._kernels`` when the extension is unavailable or disabled.
"""
import numpy as np


def hyp2f1_batch(a: float, b: float, c: float, w, tol: float, max_terms: int):
    """Gauss series sum_n (a)_n (b)_n / ((c)_n n!) w^n over an array of w.

    A point counts as converged once |term| < tol * |partial sum| for three
    consecutive terms. Returns (values, converged, residuals) where
    residuals holds the last |term| / |sum| seen per point.
    """
    w = np.ascontiguousarray(w, dtype=np.float64)
    total = np.ones_like(w)
    term = np.ones_like(w)
    streak = np.zeros(w.shape, dtype=np.int64)
    active = np.ones(w.shape, dtype=bool)
    resid = np.ones_like(w)
    for n in range(max_terms):
        ratio = (a + n) * (b + n) / ((c + n) * (1.0 + n))
        term[active] = term[active] * ratio * w[active]
        total[active] += term[active]
        # a zero term means the series terminated (polynomial case)
        small = (np.abs(term) < tol * np.abs(total)) | (term == 0.0)
        streak[active & small] += 1
        streak[active & ~small] = 0
        resid[active] = np.abs(term[active]) / np.maximum(np.abs(total[active]), 1e-300)
        active &= streak < 3
        if not active.any():
            break
    return total, ~active, resid


def local_matrices(a11, a12, a22, am, phi, dphx, dphy):
    """Per-cell 4x4 stiffness and mass blocks for a bilinear tensor basis.

    a11, a12, a22, am: (ncells, nq) coefficient samples, already multiplied
    by quadrature weights and the cell Jacobian factors. phi, dphx, dphy:
    (4, nq) basis values and reference-cell gradients at the same points.
    """
    kloc = (np.einsum("cq,aq,bq->cab", a11, dphx, dphx)
            + np.einsum("cq,aq,bq->cab", a12, dphx, dphy)
            + np.einsum("cq,aq,bq->cab", a12, dphy, dphx)
            + np.einsum("cq,aq,bq->cab", a22, dphy, dphy))
    mloc = np.einsum("cq,aq,bq->cab", am, phi, phi)
    # enforce bitwise symmetry (einsum association order differs per entry)
    kloc = 0.5 * (kloc + np.swapaxes(kloc, 1, 2))
    mloc = 0.5 * (mloc + np.swapaxes(mloc, 1, 2))
    return kloc, mloc
