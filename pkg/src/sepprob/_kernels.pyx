# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled PSD / PPT test loops.

Positive semidefiniteness is decided by attempting a Cholesky factorisation of
``M + tol * I``; it succeeds exactly when the smallest eigenvalue of ``M``
exceeds ``-tol``. Only the lower triangle of every matrix is read.
"""
import numpy as np

from libc.math cimport sqrt

ctypedef fused scalar_t:
    double
    double complex

cdef enum:
    MAXD = 16


cdef inline double _re(scalar_t z) noexcept nogil:
    if scalar_t is double:
        return z
    else:
        return z.real


cdef inline double _abs2(scalar_t z) noexcept nogil:
    if scalar_t is double:
        return z * z
    else:
        return z.real * z.real + z.imag * z.imag


cdef inline scalar_t _conj(scalar_t z) noexcept nogil:
    if scalar_t is double:
        return z
    else:
        return z.conjugate()


cdef inline bint _cholesky_real(const double* a, Py_ssize_t n, double shift,
                                double* low) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef double d, inv, s
    for j in range(n):
        d = a[j * n + j] + shift
        for k in range(j):
            d -= low[j * n + k] * low[j * n + k]
        if not d > 0.0:
            return 0
        d = sqrt(d)
        low[j * n + j] = d
        inv = 1.0 / d
        for i in range(j + 1, n):
            s = a[i * n + j]
            for k in range(j):
                s -= low[i * n + k] * low[j * n + k]
            low[i * n + j] = s * inv
    return 1


cdef inline bint _cholesky_split(const double* are, const double* aim, Py_ssize_t n,
                                 double shift, double* lre, double* lim) noexcept nogil:
    # complex Hermitian Cholesky on separate real / imaginary parts
    cdef Py_ssize_t i, j, k
    cdef double d, inv, sr, si, xr, xi, yr, yi
    for j in range(n):
        d = are[j * n + j] + shift
        for k in range(j):
            d -= lre[j * n + k] * lre[j * n + k] + lim[j * n + k] * lim[j * n + k]
        if not d > 0.0:
            return 0
        d = sqrt(d)
        lre[j * n + j] = d
        lim[j * n + j] = 0.0
        inv = 1.0 / d
        for i in range(j + 1, n):
            sr = are[i * n + j]
            si = aim[i * n + j]
            for k in range(j):
                # s -= L[i,k] * conj(L[j,k])
                xr = lre[i * n + k]
                xi = lim[i * n + k]
                yr = lre[j * n + k]
                yi = lim[j * n + k]
                sr -= xr * yr + xi * yi
                si -= xi * yr - xr * yi
            lre[i * n + j] = sr * inv
            lim[i * n + j] = si * inv
    return 1


cdef inline bint _shifted_cholesky_ok(const scalar_t* a, Py_ssize_t n, double shift,
                                      scalar_t* low) noexcept nogil:
    cdef double are[MAXD * MAXD]
    cdef double aim[MAXD * MAXD]
    cdef double lre[MAXD * MAXD]
    cdef double lim[MAXD * MAXD]
    cdef Py_ssize_t i, j
    if scalar_t is double:
        return _cholesky_real(a, n, shift, low)
    else:
        for i in range(n):
            for j in range(i + 1):
                are[i * n + j] = a[i * n + j].real
                aim[i * n + j] = a[i * n + j].imag
        return _cholesky_split(are, aim, n, shift, lre, lim)


def psd_flags(const scalar_t[:, :, ::1] mats, const double[::1] tol):
    """Return uint8 flags, 1 where ``mats[i]`` has min eigenvalue > -tol[i]."""
    cdef Py_ssize_t n_mat = mats.shape[0], dim = mats.shape[1], i
    if dim > MAXD:
        raise ValueError("matrix dimension exceeds compiled limit")
    out = np.zeros(n_mat, dtype=np.uint8)
    cdef unsigned char[::1] res = out
    cdef scalar_t low[MAXD * MAXD]
    with nogil:
        for i in range(n_mat):
            res[i] = _shifted_cholesky_ok(&mats[i, 0, 0], dim, tol[i], low)
    return out


def ppt_flags(const scalar_t[:, :, ::1] w, const double[:, ::1] scale,
              const Py_ssize_t[::1] src, const double[::1] tol):
    """PPT verdicts for every (sample, grid point) pair.

    The tested matrix at grid point g has lower-triangle entries
    ``scale[g, ab] * w.flat[src[ab]]``; ``src`` folds the partial transpose
    into a gather and ``scale`` carries the diagonal congruence.
    """
    cdef Py_ssize_t n_mat = w.shape[0], dim = w.shape[1], n_grid = scale.shape[0]
    cdef Py_ssize_t s, g, i, j, ab, nlow
    if dim > MAXD:
        raise ValueError("matrix dimension exceeds compiled limit")
    out = np.zeros((n_mat, n_grid), dtype=np.uint8)
    cdef unsigned char[:, ::1] res = out
    cdef double mre[MAXD * MAXD]
    cdef double mim[MAXD * MAXD]
    cdef double lre[MAXD * MAXD]
    cdef double lim[MAXD * MAXD]
    cdef double gre[MAXD * MAXD]
    cdef double gim[MAXD * MAXD]
    cdef Py_ssize_t pos[MAXD * MAXD]
    cdef const scalar_t* wp
    cdef const double* sc
    nlow = 0
    for i in range(dim):
        for j in range(i + 1):
            pos[nlow] = i * dim + j
            nlow += 1
    with nogil:
        for s in range(n_mat):
            wp = &w[s, 0, 0]
            # gather the partially transposed lower triangle once per sample
            for ab in range(nlow):
                if scalar_t is double:
                    gre[ab] = wp[src[pos[ab]]]
                else:
                    gre[ab] = wp[src[pos[ab]]].real
                    gim[ab] = wp[src[pos[ab]]].imag
            for g in range(n_grid):
                sc = &scale[g, 0]
                if scalar_t is double:
                    for ab in range(nlow):
                        mre[pos[ab]] = sc[pos[ab]] * gre[ab]
                    res[s, g] = _cholesky_real(mre, dim, tol[g], lre)
                else:
                    for ab in range(nlow):
                        mre[pos[ab]] = sc[pos[ab]] * gre[ab]
                        mim[pos[ab]] = sc[pos[ab]] * gim[ab]
                    res[s, g] = _cholesky_split(mre, mim, dim, tol[g], lre, lim)
    return out


def spectral_ppt_flags(const double complex[:, :, :, ::1] q, const double[:, ::1] lam,
                       const double[::1] tol):
    """PPT verdicts of ``sum_k lam[g, k] * q[u, k]`` for every (u, g).

    ``q[u, k]`` is the partial transpose of the k-th eigenprojector of the
    u-th frame, so each test costs one linear combination plus a Cholesky.
    """
    cdef Py_ssize_t n_u = q.shape[0], n_k = q.shape[1], dim = q.shape[2]
    cdef Py_ssize_t n_grid = lam.shape[0]
    cdef Py_ssize_t u, g, k, i, j
    cdef double complex acc
    if dim > MAXD:
        raise ValueError("matrix dimension exceeds compiled limit")
    out = np.zeros((n_u, n_grid), dtype=np.uint8)
    cdef unsigned char[:, ::1] res = out
    cdef double complex m[MAXD * MAXD]
    cdef double complex low[MAXD * MAXD]
    with nogil:
        for u in range(n_u):
            for g in range(n_grid):
                for i in range(dim):
                    for j in range(i + 1):
                        acc = 0
                        for k in range(n_k):
                            acc = acc + lam[g, k] * q[u, k, i, j]
                        m[i * dim + j] = acc
                res[u, g] = _shifted_cholesky_ok(m, dim, tol[g], low)
    return out
