"""Numpy reference implementations of the compiled kernels.

Semantics match ``_kernels``: a matrix passes when its smallest eigenvalue is
at least ``-tol``. Work is chunked so the batched eigen-solves stay within a
modest memory footprint.
"""
import numpy as np

_CHUNK_ELEMENTS = 1 << 21


def psd_flags(mats, tol):
    mats = np.asarray(mats)
    tol = np.asarray(tol, dtype=float)
    if len(mats) == 0:
        return np.zeros(0, dtype=np.uint8)
    lo = np.linalg.eigvalsh(mats)[:, 0]
    return (lo >= -tol).astype(np.uint8)


def ppt_flags(w, scale, src, tol):
    w = np.asarray(w)
    n_mat, dim = w.shape[0], w.shape[1]
    n_grid = scale.shape[0]
    out = np.zeros((n_mat, n_grid), dtype=np.uint8)
    if n_mat == 0:
        return out
    flat = w.reshape(n_mat, dim * dim)
    step = max(1, _CHUNK_ELEMENTS // (n_grid * dim * dim))
    for start in range(0, n_mat, step):
        gathered = flat[start:start + step][:, src]
        m = scale[None, :, :] * gathered[:, None, :]
        m = m.reshape(-1, n_grid, dim, dim)
        lo = np.linalg.eigvalsh(m)[..., 0]
        out[start:start + step] = lo >= -tol[None, :]
    return out


def spectral_ppt_flags(q, lam, tol):
    q = np.asarray(q)
    n_u, _, dim, _ = q.shape
    n_grid = lam.shape[0]
    out = np.zeros((n_u, n_grid), dtype=np.uint8)
    step = max(1, _CHUNK_ELEMENTS // (n_grid * dim * dim))
    for start in range(0, n_u, step):
        m = np.einsum("gk,ukab->ugab", lam, q[start:start + step])
        lo = np.linalg.eigvalsh(m)[..., 0]
        out[start:start + step] = lo >= -tol[None, :]
    return out
