"""Eigenvalue-space separability functions and eigenvalue-measure integrals.

A two-qubit state is U diag(lambda) U^dagger. For a fixed frame U the PPT
verdict is a function of lambda alone, so averaging verdicts over Haar
unitaries gives a separability function on the eigenvalue simplex, which is
then integrated against an eigenvalue density (HS, Bures or uniform).

Eigenvalue simplices are handled in cumulative coordinates
y_k = lambda_1 + ... + lambda_k, where the simplex becomes the ordered region
0 <= y_1 <= ... <= y_d <= 1 and the lattice of step 1/m is triangulated by
Kuhn simplices.
"""
import csv
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate as _sint
from scipy import special

from . import kernels
from .algebra import partial_transpose
from .errors import ValidationError
from .numerics import QuadratureResult, reg_inc_beta, simplex_rule

PSD_TOL = 1e-10 / 4.0
PITTENGER = 7.0 / 30.0
METRICS = ("hs", "bures", "uniform")
RANKS = ("full", "degenerate")
MODELS = ("r-power", "vad-power", "beta-s2", "beta-vad2", "one")


def _check_rank(rank):
    if rank not in RANKS:
        raise ValidationError(f"rank must be one of {RANKS}")
    return 3 if rank == "full" else 2


# ----------------------------------------------------------------- Haar

def haar_unitary(rng, n=4, size=None):
    """Haar-distributed unitary matrices via QR with the phase correction.

    Returns one (n, n) matrix, or (size, n, n) when ``size`` is given.
    """
    shape = (1 if size is None else int(size), n, n)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    q = q * (d / np.abs(d))[:, None, :]
    return q[0] if size is None else q


def projector_transposes(U):
    """Partial transposes of the eigenprojectors u_k u_k^dagger, shape (N, 4, 4, 4)."""
    U = np.asarray(U)
    cols = np.swapaxes(U, 1, 2)  # (N, k, i)
    proj = cols[:, :, :, None] * np.conj(cols[:, :, None, :])
    return partial_transpose(proj, 2)


# ----------------------------------------------------------------- grids

def _lattice(m, d):
    """Ordered integer vectors 0 <= k_1 <= ... <= k_d <= m."""
    return np.array([c for c in itertools.combinations_with_replacement(range(m + 1), d)],
                    dtype=np.int64)


def cumulative_to_lambda(y, rank="full"):
    """Cumulative coordinates (..., d) to eigenvalue 4-vectors."""
    d = _check_rank(rank)
    y = np.asarray(y, dtype=float)
    lam = np.zeros(y.shape[:-1] + (4,))
    lam[..., 0] = y[..., 0]
    for k in range(1, d):
        lam[..., k] = y[..., k] - y[..., k - 1]
    lam[..., d] = 1.0 - y[..., d - 1]
    return lam


@dataclass
class EigenGrid:
    """Eigenvalue lattice of step 1/m with PPT counts per point."""
    m: int
    rank: str
    lattice: np.ndarray
    counts: np.ndarray = None
    n_unitaries: int = 0
    metadata: dict = field(default_factory=dict)

    @classmethod
    def build(cls, m=20, rank="full"):
        d = _check_rank(rank)
        if m < 1:
            raise ValidationError("m must be positive")
        return cls(int(m), rank, _lattice(int(m), d))

    @property
    def points(self):
        return cumulative_to_lambda(self.lattice / self.m, self.rank)

    @property
    def sep_fraction(self):
        if self.counts is None or self.n_unitaries == 0:
            raise ValidationError("grid has no counts")
        return self.counts / self.n_unitaries

    def index(self):
        return {tuple(v): i for i, v in enumerate(self.lattice)}

    def to_csv(self, path, comment=None):
        frac = self.sep_fraction
        lam = self.points
        with open(path, "w", newline="") as fh:
            if comment:
                fh.write(f"# {comment}\n")
            w = csv.writer(fh, lineterminator="\n")
            if self.rank == "full":
                w.writerow(["l1", "l2", "l3", "sep_fraction", "n_unitaries"])
                for p, f in zip(lam, frac):
                    w.writerow([f"{p[0]:.17g}", f"{p[1]:.17g}", f"{p[2]:.17g}",
                                f"{f:.17g}", self.n_unitaries])
            else:
                w.writerow(["l1", "l2", "sep_fraction", "n_unitaries"])
                for p, f in zip(lam, frac):
                    w.writerow([f"{p[0]:.17g}", f"{p[1]:.17g}", f"{f:.17g}",
                                self.n_unitaries])


def read_eigen_csv(path, m):
    """EigenGrid from ``EigenGrid.to_csv`` output written with step 1/m."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(line for line in fh if not line.startswith("#")))
    header, body = rows[0], rows[1:]
    if not body:
        raise ValidationError("empty eigen table")
    d = len(header) - 2
    rank = "full" if d == 3 else "degenerate"
    arr = np.array([[float(v) for v in r] for r in body])
    y = np.cumsum(arr[:, :d], axis=1)
    lattice = np.rint(y * m).astype(np.int64)
    n_u = int(arr[0, -1])
    counts = np.rint(arr[:, d] * n_u).astype(np.int64)
    grid = EigenGrid.build(m, rank)
    if len(grid.lattice) != len(lattice):
        raise ValidationError("table does not match the requested lattice step")
    order = grid.index()
    full = np.zeros(len(grid.lattice), dtype=np.int64)
    for v, c in zip(lattice, counts):
        full[order[tuple(v)]] = c
    return EigenGrid(m, rank, grid.lattice, full, n_u, {"m": m, "rank": rank, "source": path})


def eigen_scan(grid=20, n_unitaries=50_000, rank="full", seed=0, workers=1, block=1000,
               min_unitaries=1000):
    """Count PPT verdicts of U diag(lambda) U^dagger over Haar unitaries.

    Unitaries are drawn in fixed blocks, block b from the generator seeded by
    (seed, b), so counts do not depend on the worker count.
    """
    if not isinstance(grid, EigenGrid):
        grid = EigenGrid.build(int(grid), rank)
    if int(n_unitaries) < min_unitaries:
        raise ValidationError(f"n_unitaries must be at least {min_unitaries}")
    n_unitaries = int(n_unitaries)
    lam = np.ascontiguousarray(grid.points)
    tol = np.full(len(lam), PSD_TOL)
    starts = list(range(0, n_unitaries, block))

    def work(b):
        count = min(block, n_unitaries - starts[b])
        rng = np.random.default_rng([int(seed), b])
        q = np.ascontiguousarray(projector_transposes(haar_unitary(rng, 4, count)))
        return kernels.spectral_ppt_flags(q, lam, tol).sum(axis=0, dtype=np.int64)

    if workers <= 1:
        parts = [work(b) for b in range(len(starts))]
    else:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, range(len(starts))))
    counts = np.sum(parts, axis=0, dtype=np.int64)
    meta = {"m": grid.m, "rank": grid.rank, "seed": int(seed), "block": int(block),
            "n_unitaries": n_unitaries}
    return EigenGrid(grid.m, grid.rank, grid.lattice, counts, n_unitaries, meta)


# ------------------------------------------------------------- measures

def _vandermonde_pairs(lam, k):
    i, j = np.triu_indices(k, 1)
    return lam[..., i], lam[..., j]


def eigen_measure(lam, metric="hs", beta=2, rank="full"):
    """Unnormalized eigenvalue density at lambda (vectorised over leading axes)."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape[-1] != 4:
        raise ValidationError("lambda must have four entries")
    if np.any(lam < -1e-12) or np.any(np.abs(lam.sum(axis=-1) - 1.0) > 1e-9):
        raise ValidationError("lambda must lie in the probability simplex")
    _check_rank(rank)
    lam = np.clip(lam, 0.0, None)
    if metric == "uniform":
        out = np.ones(lam.shape[:-1])
    elif metric == "hs":
        if rank == "full":
            a, b = _vandermonde_pairs(lam, 4)
            out = np.prod(np.abs(a - b) ** beta, axis=-1)
        else:
            a, b = _vandermonde_pairs(lam, 3)
            out = (np.prod(np.abs(a - b) ** beta, axis=-1)
                   * np.prod(lam[..., :3], axis=-1) ** beta)
    elif metric == "bures":
        if beta != 2:
            raise ValidationError("the Bures density is available for beta = 2 only")
        k = 4 if rank == "full" else 3
        a, b = _vandermonde_pairs(lam, k)
        with np.errstate(divide="ignore", invalid="ignore"):
            pair = np.where(a + b > 0, (a - b) ** 2 / (a + b), 0.0)
            prod = np.prod(lam[..., :k], axis=-1)
            pref = prod ** -0.5 if rank == "full" else np.sqrt(prod)
            out = np.nan_to_num(pref * np.prod(pair, axis=-1), posinf=0.0)
    else:
        raise ValidationError(f"unknown metric {metric!r}")
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------- functionals

@dataclass(frozen=True)
class StateFunctionals:
    R: float
    S: float
    VAD: float
    in_pittenger_ball: bool
    in_separable_ball: bool


def state_functionals_batch(lam):
    lam = np.asarray(lam, dtype=float)
    R = 1.0 / np.sum(lam * lam, axis=-1)
    s = -np.sort(-lam, axis=-1)
    vad = s[..., 0] - s[..., 2] - 2.0 * np.sqrt(np.clip(s[..., 1] * s[..., 3], 0.0, None))
    return {"R": R, "S": 1.5 * (1.0 - 1.0 / R), "VAD": vad,
            "pittenger": np.all(lam > PITTENGER, axis=-1), "ball": R >= 3.0 - 1e-12}


def state_functionals(lam):
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (4,) or np.any(lam < -1e-12) or abs(lam.sum() - 1.0) > 1e-9:
        raise ValidationError("lambda must be a point of the 4-simplex")
    f = state_functionals_batch(lam)
    return StateFunctionals(float(f["R"]), float(f["S"]), float(f["VAD"]),
                            bool(f["pittenger"]), bool(f["ball"]))


# ------------------------------------------------------- simplex rules

@lru_cache(maxsize=None)
def kuhn_simplices(m, d):
    """Kuhn simplices of the ordered region at lattice step 1/m.

    Returns integer vertex arrays of shape (T, d + 1, d).
    """
    out = []
    perms = list(itertools.permutations(range(d)))
    eye = np.eye(d, dtype=np.int64)
    for base in itertools.product(range(m), repeat=d):
        base = np.array(base)
        for p in perms:
            verts = [base]
            for k in p:
                verts.append(verts[-1] + eye[k])
            verts = np.array(verts)
            if np.all(np.diff(verts, axis=1) >= 0) and np.all(verts <= m):
                out.append(verts)
    arr = np.array(out, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def _rule(m, d, order):
    """Quadrature nodes (cumulative coords), weights and barycentric weights."""
    simp = kuhn_simplices(m, d) / m
    ref, w = simplex_rule(d, order)
    bary = np.column_stack([1.0 - ref.sum(axis=1), ref])  # (P, d + 1)
    origin = simp[:, 0, :]
    edges = simp[:, 1:, :] - origin[:, None, :]
    jac = np.abs(np.linalg.det(edges))
    pts = origin[:, None, :] + np.einsum("pk,tkj->tpj", ref, edges)
    weights = jac[:, None] * w[None, :]
    return pts, weights, bary


def _nodes(rank, subdiv, order):
    d = _check_rank(rank)
    y, wq, _ = _rule(subdiv, d, order)
    return cumulative_to_lambda(y.reshape(-1, d), rank), wq.ravel()


def simplex_integral(fn, rank="full", subdiv=8, order=6):
    """int over the eigenvalue simplex of fn(lambda (N, 4)) d lambda_1..d lambda_d."""
    lam, wq = _nodes(rank, subdiv, order)
    lo_lam, lo_wq = _nodes(rank, subdiv, order - 1)
    val = float(np.dot(wq, fn(lam)))
    low = float(np.dot(lo_wq, fn(lo_lam)))
    return QuadratureResult(val, abs(val - low), 2 * len(wq))


def interpolate_table(table, lam):
    """Piecewise-linear interpolant of the separable fraction at arbitrary lambda.

    The point is located in its Kuhn simplex from the order of the fractional
    parts of m y; the barycentric weights are the successive gaps of those
    sorted fractions.
    """
    d = _check_rank(table.rank)
    m = table.m
    lam = np.atleast_2d(np.asarray(lam, dtype=float))
    y = np.maximum.accumulate(np.clip(np.cumsum(lam[:, :d], axis=1), 0.0, 1.0), axis=1) * m
    base = np.minimum(np.floor(y), m - 1).astype(np.int64)
    f = y - base
    # descending fractions; ties go to the higher coordinate first so that
    # every vertex keeps y_1 <= ... <= y_d
    ties = np.broadcast_to(-np.arange(d), f.shape)
    order = np.lexsort((ties, -f), axis=-1)
    fs = np.take_along_axis(f, order, axis=1)
    bary = np.empty((len(y), d + 1))
    bary[:, 0] = 1.0 - fs[:, 0]
    bary[:, 1:d] = fs[:, :-1] - fs[:, 1:]
    bary[:, d] = fs[:, -1]
    lookup = np.full((m + 1,) * d, -1, dtype=np.int64)
    lookup[tuple(table.lattice.T)] = np.arange(len(table.lattice))
    frac = table.sep_fraction
    vert = base.copy()
    out = bary[:, 0] * frac[lookup[tuple(vert.T)]]
    rows = np.arange(len(y))
    for k in range(d):
        vert[rows, order[:, k]] += 1
        idx = lookup[tuple(vert.T)]
        if np.any(idx < 0):
            raise ValidationError("interpolation left the eigenvalue lattice")
        out += bary[:, k + 1] * frac[idx]
    return out


def _dirichlet_points(rank, n_points, key):
    """Sobol points mapped to Dirichlet(alpha) on the eigenvalue simplex.

    alpha is 1/2 for full rank and 3/2 for rank three, so the density equals
    the singular product factor of the Bures measure, up to normalization.
    """
    from .qmc import LdsStream
    k, alpha = (4, 0.5) if rank == "full" else (3, 1.5)
    u = LdsStream("sobol", k, key).next_block(n_points)
    g = special.gammaincinv(alpha, np.clip(u, 1e-300, 1.0 - 2.0 ** -53))
    lam = np.zeros((n_points, 4))
    lam[:, :k] = g / g.sum(axis=1, keepdims=True)
    return lam


def _bures_pair_factor(lam, rank):
    k = 4 if rank == "full" else 3
    a, b = _vandermonde_pairs(lam, k)
    with np.errstate(divide="ignore", invalid="ignore"):
        pair = np.where(a + b > 0, (a - b) ** 2 / (a + b), 0.0)
    return np.prod(pair, axis=-1)


def _bures_probability(table, n_points, batches):
    """Bures probability of the interpolated table by Dirichlet-weighted QMC.

    The (prod lambda)^(-1/2) (full) or ^(1/2) (rank three) factor becomes the
    sampling density, leaving the bounded pair factor as the weight, which
    simplex product rules resolve poorly near the faces.
    """
    per = n_points // batches
    num, den = np.empty(batches), np.empty(batches)
    for b in range(batches):
        lam = _dirichlet_points(table.rank, per, 1000 + b)
        w = _bures_pair_factor(lam, table.rank)
        num[b] = np.mean(w * interpolate_table(table, lam))
        den[b] = np.mean(w)
    value = num.sum() / den.sum()
    resid = (num - value * den) / den.mean()
    return float(value), float(math.sqrt(resid.var(ddof=1) / batches))


def probability_from_table(table, metric="hs", beta=2, order=5, n_points=2 ** 18,
                           batches=16):
    """Separability probability from a piecewise-linear interpolated table.

    HS and uniform densities are polynomial and use product rules on the
    Kuhn simplices of the table (error: change from order - 1). The Bures
    density is singular on the faces and is integrated by Dirichlet-weighted
    QMC (error: batch standard error).
    """
    if table.counts is None or table.n_unitaries == 0:
        raise ValidationError("table has no counts")
    from .scans import EstimateSummary
    meta = dict(table.metadata, metric=metric, beta=beta)
    name = f"eigen/{table.rank}/{metric}/beta={beta}"
    if metric == "bures":
        if beta != 2:
            raise ValidationError("the Bures density is available for beta = 2 only")
        value, err = _bures_probability(table, n_points, batches)
        return EstimateSummary(name, value, err, metadata=dict(meta, method="dirichlet-qmc"))
    d = _check_rank(table.rank)
    simp = kuhn_simplices(table.m, d)
    idx = table.index()
    vidx = np.array([[idx[tuple(v)] for v in s] for s in simp])
    frac = table.sep_fraction
    vals = []
    for q in (order - 1, order):
        y, wq, bary = _rule(table.m, d, q)
        lam = cumulative_to_lambda(y, table.rank)  # (T, P, 4)
        w = eigen_measure(lam.reshape(-1, 4), metric, beta, table.rank).reshape(wq.shape)
        s_interp = np.einsum("pv,tv->tp", bary, frac[vidx])
        vals.append(float(np.sum(wq * w * s_interp) / np.sum(wq * w)))
    return EstimateSummary(name, vals[1], abs(vals[1] - vals[0]),
                           metadata=dict(meta, method="simplex-rule"))


# ------------------------------------------------------ model integrals

def model_values(model, lam, power=1.0, rank="full"):
    """Separability-function model on eigenvalues, clamped to 1 on certified sets.

    ``r-power`` is (R / R_max)^p outside the separable ball R >= 3 and 1
    inside it, with R_max = 4 for full rank and 3 for rank three.
    """
    f = state_functionals_batch(lam)
    if model == "one":
        return np.ones(len(lam))
    if model == "r-power":
        r_max = 4.0 if rank == "full" else 3.0
        return np.where(f["R"] >= 3.0, 1.0, f["R"] / r_max) ** power
    if model == "vad-power":
        return np.minimum(1.0, 1.0 - f["VAD"]) ** power
    if model == "beta-s2":
        x = np.minimum(1.0, f["S"]) ** 2
        return reg_inc_beta(np.clip(x, 0.0, 1.0), 58.0, 22.0)
    if model == "beta-vad2":
        x = np.minimum(1.0, 1.0 - f["VAD"]) ** 2
        return reg_inc_beta(np.clip(x, 0.0, 1.0), 24.0, 28.0)
    raise ValidationError(f"unknown model {model!r}")


@lru_cache(maxsize=32)
def _weighted_nodes(metric, beta, rank, subdiv, order):
    lam, wq = _nodes(rank, subdiv, order)
    w = wq * eigen_measure(lam, metric, beta, rank)
    return lam, w / w.sum()


def model_probability(model, metric="hs", beta=1, rank="full", power=1.0, dyson=True,
                      subdiv=16, order=6):
    """Integral of a model separability function against an eigenvalue density.

    With ``dyson`` the named model is taken as the beta = 1 function and is
    raised to the beta-th power, the measure being that of index beta.
    """
    if model not in MODELS:
        raise ValidationError(f"unknown model {model!r}")
    lam, w = _weighted_nodes(metric, beta, rank, subdiv, order)
    vals = model_values(model, lam, power, rank)
    if dyson:
        vals = vals ** beta
    return float(np.dot(w, vals))


def solve_power(target, family="vad-power", metric="hs", beta=2, rank="full",
                measure_beta=None, lo=0.0, hi=60.0, tol=1e-7):
    """Exponent p with the clamped power model integrating to ``target``.

    The model is used as is (no Dyson raising). ``measure_beta`` selects the
    eigenvalue density index when it should differ from ``beta``.
    """
    if not 0.0 < target < 1.0:
        raise ValidationError("target must lie in (0, 1)")
    if family not in ("r-power", "vad-power"):
        raise ValidationError("family must be r-power or vad-power")
    mb = beta if measure_beta is None else measure_beta

    def g(p):
        return model_probability(family, metric, mb, rank, power=p, dyson=False) - target

    if g(lo) < 0 or g(hi) > 0:
        raise ValidationError("target is outside the range attainable by the family")
    return float(_bisect(g, lo, hi, tol))


def _bisect(g, lo, hi, tol):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        v = g(mid)
        if abs(v) < tol or hi - lo < 1e-12:
            return mid
        if v > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ------------------------------------------------------ region measures

def _total_weight(metric, beta, rank="full"):
    lam, wq = _nodes(rank, 4, 14)
    return float(np.dot(wq, eigen_measure(lam, metric, beta, rank)))


def _hyperplane_basis():
    """Orthonormal basis (3, 4) of {x : sum x = 0}."""
    b = np.linalg.qr(np.eye(4) - 0.25)[0][:, :3]
    return b.T


def _gauss(n, a, b):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def _ball_integral(metric, beta, n):
    """int over {sum lambda^2 < 1/3} of the density, in d lambda_1..3 units."""
    rad = 1.0 / math.sqrt(12.0)
    r, wr = _gauss(n, 0.0, rad)
    t, wt = _gauss(n, 0.0, math.pi)
    p, wp = _gauss(2 * n, 0.0, 2.0 * math.pi)
    R, T, P = np.meshgrid(r, t, p, indexing="ij")
    W = np.einsum("i,j,k->ijk", wr, wt, wp) * R ** 2 * np.sin(T)
    dirs = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1)
    lam = 0.25 + R[..., None] * (dirs @ _hyperplane_basis())
    lam = np.clip(lam, 0.0, None)
    lam = lam / lam.sum(axis=-1, keepdims=True)
    # the hyperplane volume element is twice d lambda_1 d lambda_2 d lambda_3
    return 0.5 * float(np.sum(W * eigen_measure(lam.reshape(-1, 4), metric, beta)
                              .reshape(W.shape)))


def _vad_integral(metric, beta, n=24, rel_tol=1e-9):
    """int over the ordered chamber where VAD < 0, in d lambda_1..3 units.

    Coordinates (lambda4, lambda2, d) with s = 1 - lambda2 - lambda4,
    lambda1 = (s + d)/2, lambda3 = (s - d)/2; the map has jacobian 1/2.
    """
    xg, wg = np.polynomial.legendre.leggauss(n)

    def inner(l4, l2):
        s = 1.0 - l2 - l4
        lo = abs(s - 2.0 * l2)
        hi = min(s - 2.0 * l4, 2.0 * math.sqrt(l2 * l4))
        if hi <= lo:
            return 0.0
        d = 0.5 * (hi - lo) * xg + 0.5 * (hi + lo)
        lam = np.column_stack([(s + d) / 2.0, np.full(n, l2), (s - d) / 2.0, np.full(n, l4)])
        w = eigen_measure(np.clip(lam, 0.0, None), metric, beta)
        return 0.5 * 0.5 * (hi - lo) * float(np.dot(wg, w))

    def outer(l4):
        a, b = l4, 0.5 - l4
        if b <= a:
            return 0.0
        kinks = [x for x in ((1.0 - l4) / 3.0,) if a < x < b]
        return _sint.quad(lambda l2: inner(l4, l2), a, b, points=kinks or None,
                          epsabs=0.0, epsrel=rel_tol * 0.1, limit=200)[0]

    val = _sint.quad(outer, 0.0, 0.25, epsabs=0.0, epsrel=rel_tol, limit=200)[0]
    return 24.0 * val  # the density is symmetric; 24 ordered chambers


def _pittenger_integral(metric, beta):
    side = 1.0 - 4.0 * PITTENGER
    lam, wq = _nodes("full", 2, 14)
    shrunk = PITTENGER + side * lam
    return side ** 3 * float(np.dot(wq, eigen_measure(shrunk, metric, beta)))


def region_probability(region, metric="hs", beta=2, n=40):
    """Normalized measure of a certified-separable eigenvalue region."""
    if metric == "bures" and beta != 2:
        raise ValidationError("the Bures density is available for beta = 2 only")
    total = _total_weight(metric, beta)
    if region == "ball":
        return _ball_integral(metric, beta, n) / total
    if region == "vad":
        return _vad_integral(metric, beta) / total
    if region == "pittenger":
        return _pittenger_integral(metric, beta) / total
    raise ValidationError(f"unknown region {region!r}")
