"""Hermitian matrices over the reals, complexes and quaternions.

Quaternionic matrices are stored as real arrays of shape ``(..., n, n, 4)``
holding the coefficients of 1, i, j, k. They are always handled through the
complex embedding ``q -> [[a+bi, c+di], [-c+di, a-bi]]``, with entry (r, s)
occupying rows 2r..2r+1 and columns 2s..2s+1 of the embedded matrix.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ValidationError

DEFAULT_REL_TOL = 1e-10


@dataclass(frozen=True)
class Quaternion:
    a: float
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    def conj(self):
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm2(self):
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def __add__(self, other):
        return Quaternion(self.a + other.a, self.b + other.b,
                          self.c + other.c, self.d + other.d)

    def __mul__(self, other):
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def as_array(self):
        return np.array([self.a, self.b, self.c, self.d])

    def block(self):
        """The 2x2 complex matrix representing this quaternion."""
        return quat_embed_entries(self.as_array())


def quat_embed_entries(q):
    """Embed an array of quaternions (..., 4) as 2x2 complex blocks (..., 2, 2)."""
    q = np.asarray(q, dtype=float)
    a, b, c, d = np.moveaxis(q, -1, 0)
    top = np.stack([a + 1j * b, c + 1j * d], axis=-1)
    bottom = np.stack([-c + 1j * d, a - 1j * b], axis=-1)
    return np.stack([top, bottom], axis=-2)


def quat_conj(q):
    q = np.array(q, dtype=float)
    q[..., 1:] *= -1
    return q


def is_quat_hermitian(qmat, atol=1e-12):
    qmat = np.asarray(qmat, dtype=float)
    swapped = np.swapaxes(qmat, -2, -3)
    return bool(np.allclose(qmat, quat_conj(swapped), atol=atol, rtol=0))


def quat_embed(qmat, check=True):
    """Complex 2n x 2n embedding of an n x n quaternionic Hermitian matrix.

    ``qmat`` has shape (..., n, n, 4). The eigenvalues of the result are those
    of the quaternionic matrix, each appearing twice.
    """
    qmat = np.asarray(qmat, dtype=float)
    if qmat.ndim < 3 or qmat.shape[-1] != 4 or qmat.shape[-2] != qmat.shape[-3]:
        raise ValidationError("expected an array of shape (..., n, n, 4)")
    if check and not is_quat_hermitian(qmat):
        raise ValidationError("quaternionic matrix is not Hermitian")
    n = qmat.shape[-2]
    blocks = quat_embed_entries(qmat)  # (..., n, n, 2, 2)
    out = np.swapaxes(blocks, -3, -2)  # (..., n, 2, n, 2)
    return out.reshape(qmat.shape[:-3] + (2 * n, 2 * n))


def native_embed(mat):
    """Embed a real or complex Hermitian matrix as a quaternionic one (c = d = 0)."""
    mat = np.asarray(mat)
    q = np.zeros(mat.shape + (4,))
    q[..., 0] = mat.real
    q[..., 1] = mat.imag
    return quat_embed(q, check=False)


@lru_cache(maxsize=None)
def pt_source_index(dim, block_dim, entry_size=1):
    """Flat gather table realising the partial transpose on the second factor.

    For a matrix ``m`` of logical dimension ``dim`` (physical dimension
    ``dim * entry_size``), ``m.ravel()[table]`` is the partial transpose,
    where each ``entry_size`` x ``entry_size`` block moves as a unit.
    """
    if dim % block_dim:
        raise ValidationError(f"dimension {dim} is not divisible by {block_dim}")
    e = entry_size
    size = dim * e
    table = np.empty(size * size, dtype=np.intp)
    for i in range(dim):
        i1, i2 = divmod(i, block_dim)
        for k in range(dim):
            k1, k2 = divmod(k, block_dim)
            r = i1 * block_dim + k2
            c = k1 * block_dim + i2
            for p in range(e):
                for q in range(e):
                    table[(e * i + p) * size + e * k + q] = (e * r + p) * size + e * c + q
    table.setflags(write=False)
    return table


def partial_transpose(mat, block_dim, entry_size=1):
    """Transpose each block_dim x block_dim block of ``mat`` in place.

    Entries are moved positionally with no conjugation. With ``entry_size=2``
    the input is an embedded quaternionic matrix and 2x2 blocks move whole.
    Leading batch axes are allowed.
    """
    mat = np.asarray(mat)
    size = mat.shape[-1]
    if mat.ndim < 2 or mat.shape[-2] != size:
        raise ValidationError("expected square matrices")
    if size % entry_size:
        raise ValidationError("dimension is not a multiple of the entry size")
    dim = size // entry_size
    table = pt_source_index(dim, block_dim, entry_size)
    flat = mat.reshape(mat.shape[:-2] + (size * size,))
    return flat[..., table].reshape(mat.shape)


@dataclass(frozen=True)
class PSDResult:
    min_eig: float
    is_psd: bool


def psd_check(h, tol=None, rel_tol=DEFAULT_REL_TOL):
    """Smallest eigenvalue of a Hermitian matrix and the PSD verdict.

    The default tolerance is ``rel_tol * trace / dim``.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValidationError("expected a square matrix")
    if not np.all(np.isfinite(h)):
        raise ValidationError("matrix has non-finite entries")
    if tol is None:
        tol = rel_tol * abs(np.trace(h).real) / h.shape[0]
    min_eig = float(np.linalg.eigvalsh(h)[0])
    return PSDResult(min_eig, bool(min_eig >= -tol))


def hermitian_from_upper(upper_entries, n, field_dim):
    """Build unit-diagonal Hermitian matrices from upper-triangle components.

    ``upper_entries`` has shape (N, n(n-1)/2, field_dim) listing the real
    components of w_ij for i < j in row-major order. Returns real (field_dim
    1), complex (2) or embedded quaternionic (3, 4) matrices.
    """
    x = np.asarray(upper_entries, dtype=float)
    count = x.shape[0]
    iu = np.triu_indices(n, 1)
    if field_dim == 1:
        w = np.zeros((count, n, n))
        w[:, iu[0], iu[1]] = x[..., 0]
        w = w + np.swapaxes(w, 1, 2)
        w[:, np.arange(n), np.arange(n)] = 1.0
        return w
    if field_dim == 2:
        w = np.zeros((count, n, n), dtype=complex)
        w[:, iu[0], iu[1]] = x[..., 0] + 1j * x[..., 1]
        w = w + np.conj(np.swapaxes(w, 1, 2))
        w[:, np.arange(n), np.arange(n)] = 1.0
        return w
    q = np.zeros((count, n, n, 4))
    q[:, iu[0], iu[1], :field_dim] = x
    q = q + quat_conj(np.swapaxes(q, 1, 2))
    q[:, np.arange(n), np.arange(n), 0] = 1.0
    return quat_embed(q, check=False)
