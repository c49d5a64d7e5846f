"""Quadrature, quasi-Monte Carlo simplex integration and special functions."""
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .errors import QuadratureError, ValidationError

CATALAN = 0.91596559417721901505460351493238411
PI = math.pi


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class Box:
    """Axis-aligned box; ``breakpoints[i]`` lists known kinks in coordinate i."""
    lower: tuple
    upper: tuple
    breakpoints: tuple = field(default=None)

    @property
    def dim(self):
        return len(self.lower)


@dataclass(frozen=True)
class Simplex:
    """The standard simplex {x_i >= 0, sum x_i <= 1} in ``dim`` dimensions."""
    dim: int


def _limits(domain, level):
    """Integration limits of coordinate ``level`` given the outer coordinates."""
    if isinstance(domain, Box):
        lo, hi = domain.lower[level], domain.upper[level]
        return lambda *outer: (lo, hi)
    return lambda *outer: (0.0, max(0.0, 1.0 - sum(outer)))


def integrate_adaptive(f, domain, rel_tol=1e-8, abs_tol=0.0, limit=200):
    """Iterated adaptive Gauss-Kronrod integration in up to three dimensions.

    ``f`` takes one scalar per coordinate, outermost first. Box and simplex
    domains are supported; simplices use variable inner limits. Failure to
    converge raises ``QuadratureError`` carrying the partial estimate.
    """
    if isinstance(domain, (int, float)):
        raise ValidationError("domain must be a Box or Simplex")
    dim = domain.dim
    if not 1 <= dim <= 3:
        raise ValidationError("integrate_adaptive supports 1 to 3 dimensions")
    if rel_tol <= 0 and abs_tol <= 0:
        raise ValidationError("need a positive tolerance")
    count = [0]
    limits = [_limits(domain, k) for k in range(dim)]
    points = [None] * dim
    if isinstance(domain, Box) and domain.breakpoints is not None:
        points = [tuple(p) if p else None for p in domain.breakpoints]

    def level_integral(level, outer):
        lo, hi = limits[level](*outer)
        if hi <= lo:
            return 0.0, 0.0
        inner = level < dim - 1
        eps_rel = rel_tol * (0.1 if level > 0 else 1.0)
        eps_abs = abs_tol * (0.1 if level > 0 else 1.0)

        def g(x):
            if inner:
                return level_integral(level + 1, outer + (x,))[0]
            count[0] += 1
            return f(*outer, x)

        pts = points[level]
        if pts is not None:
            pts = [p for p in pts if lo < p < hi] or None
        return integrate.quad(g, lo, hi, epsabs=eps_abs, epsrel=eps_rel,
                              limit=limit, points=pts)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, err = level_integral(0, ())
    result = QuadratureResult(float(value), float(abs(err)), count[0])
    flagged = [w for w in caught if issubclass(w.category, integrate.IntegrationWarning)]
    target = max(rel_tol * abs(value), abs_tol)
    if not np.isfinite(value) or (flagged and err > 10 * target):
        raise QuadratureError(
            f"adaptive quadrature did not converge (estimate {value!r}, error {err!r})",
            partial=result,
        )
    return result


def simplex_volume(dim):
    return 1.0 / math.factorial(dim)


def cube_to_simplex(u):
    """Map points of [0,1)^d to the uniform distribution on the d-simplex.

    Sequential stick breaking with Beta(1, d - k) inverse CDFs keeps the map
    smooth so low-discrepancy structure carries over.
    """
    u = np.asarray(u, dtype=float)
    n, d = u.shape
    out = np.empty_like(u)
    remaining = np.ones(n)
    for k in range(d):
        frac = 1.0 - (1.0 - u[:, k]) ** (1.0 / (d - k))
        out[:, k] = remaining * frac
        remaining = remaining * (1.0 - frac)
    return out


def integrate_simplex_qmc(f, dim, n_points, seed=0, batches=16, kind="sobol"):
    """Quasi-Monte Carlo integral of vectorised ``f`` over the ``dim``-simplex.

    ``f`` maps an (N, dim) array to N values. The error estimate is the
    standard error of the mean across ``batches`` contiguous index blocks.
    """
    from .qmc import LdsStream

    if batches < 16:
        raise ValidationError("at least 16 batches are required")
    if n_points < batches:
        raise ValidationError("n_points must be at least the number of batches")
    per = n_points // batches
    stream = LdsStream(kind=kind, dim=dim, key=seed)
    means = np.empty(batches)
    for b in range(batches):
        x = cube_to_simplex(stream.next_block(per))
        means[b] = np.mean(f(x))
    vol = simplex_volume(dim)
    value = vol * means.mean()
    err = vol * means.std(ddof=1) / math.sqrt(batches)
    return QuadratureResult(float(value), float(err), per * batches)


def reg_inc_beta(x, a, b):
    """Regularised incomplete beta function I_x(a, b)."""
    x = np.asarray(x, dtype=float)
    if a <= 0 or b <= 0:
        raise ValidationError("a and b must be positive")
    if np.any((x < 0) | (x > 1)) or np.any(np.isnan(x)):
        raise ValidationError("x must lie in [0, 1]")
    out = special.betainc(a, b, x)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=None)
def _jacobi01(n, alpha):
    """Gauss-Jacobi rule on [0,1] for the weight (1-u)^alpha."""
    t, w = special.roots_jacobi(n, alpha, 0.0)
    return (t + 1.0) / 2.0, w / 2.0 ** (alpha + 1.0)


@lru_cache(maxsize=None)
def simplex_rule(dim, order):
    """Conical product rule on the unit ``dim``-simplex (2 or 3).

    Returns barycentric-free points (n, dim) and weights summing to the simplex
    volume; exact for polynomials of degree ``2 * order - 1``.
    """
    if dim not in (2, 3):
        raise ValidationError("simplex_rule supports dimensions 2 and 3")
    rules = [_jacobi01(order, float(dim - 1 - k)) for k in range(dim)]
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    wgrid = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    u = [g.ravel() for g in grids]
    w = np.prod([g.ravel() for g in wgrid], axis=0)
    pts = np.empty((u[0].size, dim))
    remaining = np.ones(u[0].size)
    for k in range(dim):
        pts[:, k] = remaining * u[k]
        remaining = remaining * (1.0 - u[k])
    return pts, w


def integrate_on_simplices(f, vertices, order=5):
    """Sum of integrals of vectorised ``f`` over many simplices.

    ``vertices`` has shape (T, dim + 1, dim). The error estimate compares the
    rule of ``order`` with the next lower order.
    """
    vertices = np.asarray(vertices, dtype=float)
    _, npts, dim = vertices.shape
    if npts != dim + 1:
        raise ValidationError("each simplex needs dim + 1 vertices")
    origin = vertices[:, 0, :]
    edges = vertices[:, 1:, :] - origin[:, None, :]  # (T, dim, dim)
    jac = np.abs(np.linalg.det(edges))
    totals = []
    evaluations = 0
    for q in (order - 1, order):
        ref, w = simplex_rule(dim, q)
        x = origin[:, None, :] + np.einsum("pk,tkj->tpj", ref, edges)
        vals = f(x.reshape(-1, dim)).reshape(x.shape[0], -1)
        totals.append(float(np.sum(jac * (vals @ w))))
        evaluations += x.shape[0] * x.shape[1]
    return QuadratureResult(totals[1], abs(totals[1] - totals[0]), evaluations)
