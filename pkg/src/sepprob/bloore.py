"""Bloore parameterisation, canonical diagonals, PPT verdicts and J_beta(mu).

A density matrix is written rho = D^(1/2) W D^(1/2) with D its diagonal and
W a unit-diagonal Hermitian matrix of correlation-like entries w_ij. The PPT
test of rho depends on D only through mu (two-qubit) or (nu1, nu2)
(qubit-qutrit), so scans fix a canonical diagonal per ratio value.
"""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from . import kernels
from .algebra import hermitian_from_upper, pt_source_index, quat_embed_entries
from .errors import ValidationError
from .numerics import Box, integrate_adaptive

SYSTEMS = {"two-qubit": (4, 2), "qubit-qutrit": (6, 3)}
BETAS = (1, 2, 3, 4)
PSD_REL_TOL = 1e-10


def system_shape(system):
    """(matrix dimension n, block dimension of the second factor)."""
    try:
        return SYSTEMS[system]
    except KeyError:
        raise ValidationError(f"unknown system {system!r}") from None


def check_beta(beta):
    if beta not in BETAS:
        raise ValidationError(f"Dyson index must be one of {BETAS}, got {beta!r}")
    return int(beta)


def entry_size(beta):
    """Physical size of one matrix entry after embedding (2 for quaternions)."""
    return 2 if beta >= 3 else 1


def n_offdiag(system):
    n, _ = system_shape(system)
    return n * (n - 1) // 2


@dataclass(frozen=True)
class BlooreSample:
    system: str
    beta: int
    W: np.ndarray
    feasible: bool


# ---------------------------------------------------------------- diagonals

def canonical_diag(system, point):
    """Diagonal realising the given ratio value(s).

    Two-qubit: (mu t, t, t, mu t) with t = 1/(2(1+mu)). Qubit-qutrit:
    (nu1 t, t, t, t, t, nu2 t) with t = 1/(4+nu1+nu2).
    """
    vals = np.atleast_1d(np.asarray(point, dtype=float))
    if np.any(~np.isfinite(vals)) or np.any(vals <= 0):
        raise ValidationError("ratio variables must be positive and finite")
    return _canonical_diag(system, vals)


def _canonical_diag(system, vals):
    if system == "two-qubit":
        if vals.size != 1:
            raise ValidationError("two-qubit ratio point is a single mu")
        mu = float(vals[0])
        t = 1.0 / (2.0 * (1.0 + mu))
        return np.array([mu * t, t, t, mu * t])
    if system == "qubit-qutrit":
        if vals.size != 2:
            raise ValidationError("qubit-qutrit ratio point is (nu1, nu2)")
        nu1, nu2 = (float(v) for v in vals)
        t = 1.0 / (4.0 + nu1 + nu2)
        return np.array([nu1 * t, t, t, t, t, nu2 * t])
    system_shape(system)


def ratios(system, diag):
    """mu (two-qubit) or (nu1, nu2) (qubit-qutrit) of a diagonal."""
    d = np.asarray(diag, dtype=float)
    if system == "two-qubit":
        return math.sqrt(d[0] * d[3] / (d[1] * d[2]))
    if system == "qubit-qutrit":
        return (d[0] * d[4] / (d[1] * d[3]), d[1] * d[5] / (d[2] * d[4]))
    system_shape(system)


def random_diag_with_ratio(system, point, rng):
    """A random (non-canonical) diagonal with the prescribed ratio values."""
    if system == "two-qubit":
        mu = float(np.atleast_1d(point)[0])
        r11, r22, r33 = rng.uniform(0.2, 1.0, 3)
        r44 = mu * mu * r22 * r33 / r11
    else:
        nu1, nu2 = (float(v) for v in point)
        r11, r22, r33, r44 = rng.uniform(0.2, 1.0, 4)
        r55 = nu1 * r22 * r44 / r11
        r66 = nu2 * r33 * r55 / r22
        d = np.array([r11, r22, r33, r44, r55, r66])
        return d / d.sum()
    d = np.array([r11, r22, r33, r44])
    return d / d.sum()


# ------------------------------------------------------------ assembly, PPT

def _expand(values, beta):
    return np.repeat(values, entry_size(beta))


def assemble_state(diag, W, beta=None):
    """rho = D^(1/2) W D^(1/2) (embedded form when W is embedded)."""
    if isinstance(W, BlooreSample):
        beta = W.beta
        W = W.W
    W = np.asarray(W)
    d = np.asarray(diag, dtype=float)
    e = W.shape[-1] // d.size
    if e * d.size != W.shape[-1] or e not in (1, 2):
        raise ValidationError("diagonal and W dimensions disagree")
    if np.any(d <= 0):
        raise ValidationError("diagonal entries must be strictly positive")
    if abs(d.sum() - 1.0) > 1e-12:
        raise ValidationError("diagonal must sum to one")
    s = np.repeat(np.sqrt(d), e)
    return s[:, None] * W * s[None, :]


# Rows/columns of the tested matrix are visited in this order. Permuting is
# harmless for a PSD test, and putting the entries exchanged by the partial
# transpose first makes the Cholesky attempt fail early on entangled states.
_TEST_ORDER = {"two-qubit": (0, 3, 1, 2), "qubit-qutrit": (0, 1, 2, 3, 4, 5)}


@lru_cache(maxsize=None)
def _pt_tables(system, beta):
    n, block = system_shape(system)
    e = entry_size(beta)
    size = n * e
    order = np.concatenate([[e * i + p for p in range(e)] for i in _TEST_ORDER[system]])
    src = pt_source_index(n, block, e).reshape(size, size)[np.ix_(order, order)].ravel()
    rows, cols = np.divmod(src, size)
    return src, rows // e, cols // e


def ppt_tables(system, beta, diags):
    """Kernel inputs (scale, src, tol) for testing PPT at each diagonal.

    Row g of ``scale`` holds the congruence factors sqrt(d_r d_c) for every
    partially transposed position, so the kernel never forms rho itself.
    """
    src, ri, ci = _pt_tables(system, beta)
    diags = np.atleast_2d(np.asarray(diags, dtype=float))
    sq = np.sqrt(diags)
    scale = sq[:, ri] * sq[:, ci]
    n = diags.shape[1]
    tol = PSD_REL_TOL * diags.sum(axis=1) / n
    return np.ascontiguousarray(scale), src, tol


def grid_diags(system, grid):
    """Canonical diagonals for a mu grid or an array of (nu1, nu2) pairs.

    Zero ratios are allowed here; they give boundary diagonals.
    """
    grid = np.asarray(grid, dtype=float)
    if system == "two-qubit":
        return np.array([_canonical_diag(system, np.array([m])) for m in grid.ravel()])
    return np.array([_canonical_diag(system, np.asarray(p)) for p in grid.reshape(-1, 2)])


def ppt_verdict(W, point, system=None, beta=None, diag=None):
    """True when the state built from W at the given ratio point is PPT.

    ``diag`` overrides the canonical diagonal (it must realise ``point``).
    """
    if isinstance(W, BlooreSample):
        system, beta = W.system, W.beta
        if not W.feasible:
            raise ValidationError("W is not feasible (not positive semidefinite)")
        W = W.W
    check_beta(beta)
    W = np.asarray(W)
    n, _ = system_shape(system)
    if W.shape != (n * entry_size(beta),) * 2:
        raise ValidationError("W has the wrong shape for this system and beta")
    if not is_feasible(W):
        raise ValidationError("W is not feasible (not positive semidefinite)")
    d = canonical_diag(system, point) if diag is None else np.asarray(diag, float)
    scale, src, tol = ppt_tables(system, beta, d[None, :])
    return bool(kernels.ppt_flags(W[None], scale, src, tol)[0, 0])


def is_feasible(W):
    W = np.asarray(W)
    return bool(kernels.psd_flags(W[None], PSD_REL_TOL)[0])


def make_sample(system, beta, components):
    """BlooreSample from the real components of the upper-triangle entries."""
    check_beta(beta)
    n, _ = system_shape(system)
    comps = np.asarray(components, dtype=float).reshape(1, n_offdiag(system), beta)
    W = hermitian_from_upper(comps, n, beta)[0]
    return BlooreSample(system, beta, W, is_feasible(W))


# ------------------------------------------------------------------ sampling

def default_method(system, beta):
    """Sampler used when none is requested.

    Rejection keeps a usable acceptance rate only for the real two-qubit case
    (about 18%) and is the sole option for truncated quaternions; everything
    else uses exact onion sampling.
    """
    if beta == 3 or (system == "two-qubit" and beta == 1):
        return "rejection"
    return "onion"


def sample_dimension(system, beta, method):
    n, _ = system_shape(system)
    if method == "rejection":
        return n_offdiag(system) * beta
    if method == "onion":
        return sum(k * beta + 1 for k in range(1, n))
    raise ValidationError(f"unknown sampling method {method!r}")


def cube_to_W(system, beta, u, method="rejection"):
    """Map cube points to unit-diagonal matrices W and their feasibility.

    ``rejection`` maps each coordinate affinely to a component in [-1, 1].
    ``onion`` maps each point to a W distributed uniformly over the feasible
    set (every W feasible), which avoids the vanishing acceptance rate of
    rejection sampling for the complex and quaternionic cases.
    """
    check_beta(beta)
    n, _ = system_shape(system)
    u = np.asarray(u, dtype=float)
    if u.ndim != 2 or u.shape[1] != sample_dimension(system, beta, method):
        raise ValidationError("cube points have the wrong dimension")
    if method == "rejection":
        comps = (2.0 * u - 1.0).reshape(len(u), n_offdiag(system), beta)
        W = hermitian_from_upper(comps, n, beta)
    else:
        W = _onion(u, n, beta)
    feasible = kernels.psd_flags(W, PSD_REL_TOL)
    return W, feasible


def _field_column(y, beta):
    """(N, k, beta) components -> (N, k*e, e) field column in matrix form."""
    N, k, _ = y.shape
    if beta == 1:
        return y[..., 0][..., None]
    if beta == 2:
        return (y[..., 0] + 1j * y[..., 1])[..., None]
    q = np.zeros((N, k, 4))
    q[..., :beta] = y
    return quat_embed_entries(q).reshape(N, 2 * k, 2)


def _onion(u, n, beta):
    if beta == 3:
        raise ValidationError(
            "onion sampling is unavailable for truncated quaternions; use rejection")
    N = len(u)
    e = entry_size(beta)
    dtype = float if beta == 1 else complex
    W = np.zeros((N, n * e, n * e), dtype=dtype)
    W[:, :e, :e] = np.eye(e)
    col = 0
    for k in range(1, n):
        a = k * beta / 2.0
        b = beta * (n - k - 1) / 2.0 + 1.0
        r2 = special.betaincinv(a, b, u[:, col])
        r2 = np.clip(r2, 0.0, 1.0 - 2.0 ** -52)
        col += 1
        g = special.ndtri(np.clip(u[:, col:col + k * beta], 1e-300, 1 - 2.0 ** -53))
        col += k * beta
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        y = (g * np.sqrt(r2)[:, None]).reshape(N, k, beta)
        Y = _field_column(y, beta)
        L = np.linalg.cholesky(W[:, :k * e, :k * e])
        z = L @ Y
        W[:, :k * e, k * e:(k + 1) * e] = z
        W[:, k * e:(k + 1) * e, :k * e] = np.conj(np.swapaxes(z, 1, 2))
        W[:, k * e:(k + 1) * e, k * e:(k + 1) * e] = np.eye(e)
    return W


# ------------------------------------------------------------------ jacobian

def _jac_exponent(beta):
    return 1.5 * beta


def _jacobian_direct_integrand(mu, a):
    def f(r11, r22):
        c = 1.0 - r11 - r22
        den = mu * mu * r22 + r11
        if c <= 0.0 or den <= 0.0:
            return 0.0
        r33 = r11 * c / den
        r44 = c - r33
        weight = (r11 * r22 * r33 * r44) ** a
        return weight * 2.0 * mu * r11 * r22 * c / (den * den)
    return f


def jacobian_J(mu, beta, method="direct", rel_tol=1e-8):
    """Marginal jacobian J_beta(mu) for two-qubit Bloore coordinates.

    ``direct`` integrates (r11 r22 r33 r44)^(3 beta / 2) |d r33 / d mu| over
    the (r11, r22) triangle. ``reduced`` uses the one-dimensional form
    obtained by the substitution r11 = s(1-t), r22 = s t, and ``closed`` its
    Gauss hypergeometric evaluation.
    """
    check_beta(beta)
    mu = float(mu)
    if not mu > 0 or not math.isfinite(mu):
        raise ValidationError("mu must be positive")
    a = _jac_exponent(beta)
    if method == "direct":
        from .numerics import Simplex
        res = integrate_adaptive(_jacobian_direct_integrand(mu, a), Simplex(2),
                                 rel_tol=rel_tol)
        return res.value
    p = 2 * a + 1  # 3 beta + 1
    pref = 2.0 * mu ** p * special.beta(p + 1, p + 1)
    if method == "reduced":
        z = 1.0 - mu * mu
        res = integrate_adaptive(
            lambda t: (t * (1 - t)) ** p / (1.0 - z * t) ** (p + 1),
            Box((0.0,), (1.0,)), rel_tol=rel_tol)
        return pref * res.value
    if method == "closed":
        return pref * special.beta(p + 1, p + 1) * special.hyp2f1(p + 1, p + 1, 2 * p + 2,
                                                                  1.0 - mu * mu)
    raise ValidationError(f"unknown method {method!r}")


def jacobian_normalization(beta):
    """Gamma(3 beta/2 + 1)^4 / Gamma(6 beta + 4), the exact value of 2 int_0^1 J."""
    return math.exp(4 * math.lgamma(1.5 * beta + 1) - math.lgamma(6 * beta + 4))


def jacobian_integral(beta, weight=None, rel_tol=1e-11):
    """2 int_0^1 J_beta(mu) weight(mu) d mu via the reduced two-dimensional form."""
    check_beta(beta)
    p = 3 * beta + 1
    pref = 4.0 * special.beta(p + 1, p + 1)
    if weight is None:
        weight = lambda mu: 1.0  # noqa: E731

    def f(mu, t):
        z = 1.0 - mu * mu
        return mu ** p * weight(mu) * (t * (1 - t)) ** p / (1.0 - z * t) ** (p + 1)

    res = integrate_adaptive(f, Box((0.0, 0.0), (1.0, 1.0)), rel_tol=rel_tol)
    return pref * res.value, pref * res.abs_error_estimate
