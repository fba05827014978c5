# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot kernels (see _kernels_np for contracts)."""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def hyp2f1_batch(double a, double b, double c, w, double tol, int max_terms):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] warr = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t npts = warr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] total = np.empty(npts, dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] conv = np.zeros(npts, dtype=np.uint8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] resid = np.empty(npts, dtype=np.float64)
    cdef Py_ssize_t i
    cdef int n, streak
    cdef double term, s, wi, at, denom
    for i in range(npts):
        wi = warr[i]
        term = 1.0
        s = 1.0
        streak = 0
        for n in range(max_terms):
            term *= (a + n) * (b + n) / ((c + n) * (1.0 + n)) * wi
            s += term
            # a zero term means the series terminated (polynomial case)
            if abs(term) < tol * abs(s) or term == 0.0:
                streak += 1
                if streak >= 3:
                    break
            else:
                streak = 0
        total[i] = s
        conv[i] = 1 if streak >= 3 else 0
        denom = abs(s)
        if denom < 1e-300:
            denom = 1e-300
        resid[i] = abs(term) / denom
    return total, conv.view(np.bool_), resid


def local_matrices(a11, a12, a22, am, phi, dphx, dphy):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] A11 = np.ascontiguousarray(a11, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] A12 = np.ascontiguousarray(a12, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] A22 = np.ascontiguousarray(a22, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] AM = np.ascontiguousarray(am, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] PHI = np.ascontiguousarray(phi, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] GX = np.ascontiguousarray(dphx, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] GY = np.ascontiguousarray(dphy, dtype=np.float64)
    cdef Py_ssize_t nc = A11.shape[0]
    cdef Py_ssize_t nq = A11.shape[1]
    cdef Py_ssize_t nb = PHI.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=3] kloc = np.empty((nc, nb, nb), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=3] mloc = np.empty((nc, nb, nb), dtype=np.float64)
    cdef Py_ssize_t c, q, ia, ib
    cdef double ks, ms
    for c in range(nc):
        for ia in range(nb):
            for ib in range(ia, nb):
                ks = 0.0
                ms = 0.0
                for q in range(nq):
                    ks += (A11[c, q] * GX[ia, q] * GX[ib, q]
                           + A12[c, q] * (GX[ia, q] * GY[ib, q] + GY[ia, q] * GX[ib, q])
                           + A22[c, q] * GY[ia, q] * GY[ib, q])
                    ms += AM[c, q] * PHI[ia, q] * PHI[ib, q]
                kloc[c, ia, ib] = ks
                kloc[c, ib, ia] = ks
                mloc[c, ia, ib] = ms
                mloc[c, ib, ia] = ms
    return kloc, mloc
