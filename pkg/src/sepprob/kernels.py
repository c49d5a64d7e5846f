"""Backend selection for the PSD/PPT hot loops.

The compiled extension is used when it imports; setting ``SEPPROB_PURE=1``
forces the numpy fallback. Both backends expose ``psd_flags``, ``ppt_flags``
and ``spectral_ppt_flags`` with identical signatures.
"""
import os

import numpy as np

from . import _kernels_py

_compiled = None
if not os.environ.get("SEPPROB_PURE"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "numpy"


def _impl(backend):
    if backend is None:
        backend = BACKEND
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    if backend == "numpy":
        return _kernels_py
    raise ValueError(f"unknown backend {backend!r}")


def _as_batch(mats):
    mats = np.asarray(mats)
    dtype = np.float64 if np.isrealobj(mats) else np.complex128
    return np.ascontiguousarray(mats, dtype=dtype)


def _tol_vector(tol, n):
    tol = np.asarray(tol, dtype=np.float64)
    if tol.ndim == 0:
        tol = np.full(n, float(tol))
    return np.ascontiguousarray(tol)


def psd_flags(mats, tol, backend=None):
    """Boolean array: min eigenvalue of each matrix >= -tol."""
    mats = _as_batch(mats)
    tol = _tol_vector(tol, mats.shape[0])
    return _impl(backend).psd_flags(mats, tol).astype(bool)


def ppt_flags(w, scale, src, tol, backend=None):
    """Boolean (n_samples, n_grid) PPT verdicts; see ``_kernels.ppt_flags``."""
    w = _as_batch(w)
    scale = np.ascontiguousarray(scale, dtype=np.float64)
    src = np.ascontiguousarray(src, dtype=np.intp)
    tol = _tol_vector(tol, scale.shape[0])
    return _impl(backend).ppt_flags(w, scale, src, tol).astype(bool)


def spectral_ppt_flags(q, lam, tol, backend=None):
    """Boolean (n_frames, n_grid) PPT verdicts of spectral combinations."""
    q = np.ascontiguousarray(q, dtype=np.complex128)
    lam = np.ascontiguousarray(lam, dtype=np.float64)
    tol = _tol_vector(tol, lam.shape[0])
    return _impl(backend).spectral_ppt_flags(q, lam, tol).astype(bool)
