"""Quasi-Monte Carlo separability-function scans over ratio-variable grids.

Each sample is a unit-diagonal matrix W drawn from an index-addressable
stream. For every feasible W the PPT test is run independently at every grid
point, and integer counts are accumulated per fixed index block so that the
result does not depend on how many workers process the blocks.
"""
import csv
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import bloore, kernels
from .errors import CheckpointError, ValidationError
from .qmc import (Checkpoint, LdsStream, block_ranges, checkpoint_roundtrip,
                  fingerprint, ordered_map, restore)

MIN_SAMPLES_2QUBIT = 10_000
MIN_SAMPLES_QQ = 100_000
DEFAULT_BLOCK = 4096
MIN_BATCHES = 16


@dataclass
class EstimateSummary:
    name: str
    value: float
    std_error: float
    conjecture: str = None
    conjecture_value: float = None
    metadata: dict = field(default_factory=dict)

    def as_dict(self):
        return {"name": self.name, "value": self.value, "std_error": self.std_error,
                "conjecture": self.conjecture, "conjecture_value": self.conjecture_value,
                "metadata": self.metadata}


@dataclass
class SepFuncTable:
    """Separable counts per grid point for one scan."""
    system: str
    beta: int
    grid: np.ndarray
    n_samples: int
    n_feasible: int
    separable_counts: np.ndarray
    metadata: dict = field(default_factory=dict)
    block_feasible: np.ndarray = None
    block_symmetric: np.ndarray = None

    @property
    def usable(self):
        return self.n_feasible > 0

    @property
    def symmetric_index(self):
        if self.system == "two-qubit":
            return int(np.argmin(np.abs(self.grid - 1.0)))
        return int(np.argmin(np.abs(self.grid - 1.0).sum(axis=1)))

    @property
    def raw(self):
        if not self.usable:
            raise ValidationError("table has no feasible samples")
        return self.separable_counts / self.n_feasible

    @property
    def normalized(self):
        if not self.usable:
            raise ValidationError("table has no feasible samples")
        top = self.separable_counts[self.symmetric_index]
        if top == 0:
            raise ValidationError("no separable samples at the symmetric point")
        return self.separable_counts / top

    @property
    def feasible_fraction(self):
        return self.n_feasible / self.n_samples if self.n_samples else float("nan")

    def to_csv(self, path, comment=None):
        write_table_csv(self, path, comment)


def _fmt(x):
    return f"{x:.17g}"


def write_table_csv(table, path, comment=None):
    """Write one row per grid point with 17 significant digits.

    ``comment`` (one line) is written first, prefixed with '#'.
    """
    norm = table.normalized if table.usable else np.full(len(table.separable_counts), np.nan)
    raw = table.raw if table.usable else norm
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        w = csv.writer(fh, lineterminator="\n")
        if table.system == "two-qubit":
            w.writerow(["mu", "feasible", "separable", "s_raw", "s_norm"])
            for g, mu in enumerate(table.grid):
                w.writerow([_fmt(mu), table.n_feasible, int(table.separable_counts[g]),
                            _fmt(raw[g]), _fmt(norm[g])])
        else:
            w.writerow(["nu1", "nu2", "feasible", "separable", "s_norm"])
            for g, (n1, n2) in enumerate(table.grid):
                w.writerow([_fmt(n1), _fmt(n2), table.n_feasible,
                            int(table.separable_counts[g]), _fmt(norm[g])])


def read_table_csv(path, beta=None):
    """SepFuncTable from ``write_table_csv`` output (sample count unknown)."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(line for line in fh if not line.startswith("#")))
    if len(rows) < 2:
        raise ValidationError("empty table")
    header, body = rows[0], rows[1:]
    if header[0] == "mu":
        system = "two-qubit"
        grid = np.array([float(r[0]) for r in body])
        col_f, col_s = 1, 2
    elif header[:2] == ["nu1", "nu2"]:
        system = "qubit-qutrit"
        grid = np.array([[float(r[0]), float(r[1])] for r in body])
        col_f, col_s = 2, 3
    else:
        raise ValidationError("unrecognized table header")
    feasible = int(body[0][col_f])
    counts = np.array([int(r[col_s]) for r in body], dtype=np.int64)
    return SepFuncTable(system, beta, grid, feasible, feasible, counts, {"source": path})


def mu_grid(points=201):
    if points < 2:
        raise ValidationError("a mu grid needs at least two points")
    return np.linspace(0.0, 1.0, points)


def nu_grid(points=21):
    if points < 2:
        raise ValidationError("a nu grid needs at least two points per axis")
    axis = np.linspace(0.0, 1.0, points)
    n1, n2 = np.meshgrid(axis, axis, indexing="ij")
    return np.column_stack([n1.ravel(), n2.ravel()])


# ------------------------------------------------------------------ driver

def _scan(system, beta, grid, n_samples, seed, kind, method, workers, block_size,
          checkpoint_path, checkpoint_every, resume, min_samples):
    beta = bloore.check_beta(beta)
    if int(n_samples) != n_samples or n_samples < min_samples:
        raise ValidationError(f"n_samples must be an integer >= {min_samples}")
    n_samples = int(n_samples)
    if block_size < 1 or workers < 1:
        raise ValidationError("block_size and workers must be positive")
    method = method or bloore.default_method(system, beta)
    dim = bloore.sample_dimension(system, beta, method)
    grid = np.asarray(grid, dtype=float)
    diags = bloore.grid_diags(system, grid)
    scale, src, tol = bloore.ppt_tables(system, beta, diags)
    n_grid = len(diags)

    params = {"system": system, "beta": beta, "grid": [_fmt(x) for x in grid.ravel()],
              "seed": int(seed), "kind": kind, "method": method,
              "block_size": int(block_size)}
    fp = fingerprint(params)
    stream = LdsStream(kind, dim, seed)
    acc = {"n_samples": 0, "n_feasible": 0,
           "separable": np.zeros(n_grid, dtype=np.int64),
           "block_feasible": np.zeros(0, dtype=np.int64),
           "block_symmetric": np.zeros(0, dtype=np.int64)}
    if resume is not None:
        ckpt = resume if isinstance(resume, Checkpoint) else Checkpoint.load(resume)
        stream, acc = restore(ckpt, fp)
        if stream.next_index > n_samples:
            raise CheckpointError("checkpoint is already past the requested sample count")
    table_sym = SepFuncTable(system, beta, grid, 0, 0, np.zeros(n_grid)).symmetric_index

    def work(start, count):
        u = stream.child(start).next_block(count)
        W, feasible = bloore.cube_to_W(system, beta, u, method)
        Wf = W[feasible]
        if len(Wf):
            flags = kernels.ppt_flags(Wf, scale, src, tol)
            sep = flags.sum(axis=0, dtype=np.int64)
        else:
            sep = np.zeros(n_grid, dtype=np.int64)
        return count, int(feasible.sum()), sep

    started = time.time()
    ranges = block_ranges(stream.next_index, n_samples, block_size)
    last_saved = stream.next_index
    blocks_f = list(acc["block_feasible"])
    blocks_s = list(acc["block_symmetric"])

    def snapshot():
        acc["block_feasible"] = np.array(blocks_f, dtype=np.int64)
        acc["block_symmetric"] = np.array(blocks_s, dtype=np.int64)
        return checkpoint_roundtrip(stream, acc, fp, started)

    try:
        for count, n_feas, sep in ordered_map(work, ranges, workers):
            acc["n_samples"] += count
            acc["n_feasible"] += n_feas
            acc["separable"] += sep
            blocks_f.append(n_feas)
            blocks_s.append(int(sep[table_sym]))
            stream.next_index += count
            if (checkpoint_path and checkpoint_every
                    and stream.next_index - last_saved >= checkpoint_every):
                snapshot().save(checkpoint_path)
                last_saved = stream.next_index
    except KeyboardInterrupt:
        if checkpoint_path:
            snapshot().save(checkpoint_path)
        raise
    if checkpoint_path:
        snapshot().save(checkpoint_path)

    meta = {"system": system, "beta": beta, "seed": int(seed), "kind": kind,
            "method": method, "block_size": int(block_size), "n_samples": n_samples,
            "grid_points": n_grid, "fingerprint": fp}
    return SepFuncTable(system, beta, grid, int(acc["n_samples"]), int(acc["n_feasible"]),
                        np.asarray(acc["separable"], dtype=np.int64), meta,
                        np.array(blocks_f, dtype=np.int64),
                        np.array(blocks_s, dtype=np.int64))


def scan_2qubit(beta, n_samples, mu_grid_values=None, seed=0, kind="sobol", method=None,
                workers=1, block_size=DEFAULT_BLOCK, checkpoint_path=None,
                checkpoint_every=None, resume=None):
    """Two-qubit separability-function table over a mu grid.

    ``method`` selects the sampler (see ``bloore.cube_to_W``); the default is
    rejection for beta 1 and 3 and exact onion sampling for beta 2 and 4.
    """
    grid = mu_grid() if mu_grid_values is None else np.asarray(mu_grid_values, float)
    if grid.ndim != 1 or np.any(grid < 0) or np.any(~np.isfinite(grid)):
        raise ValidationError("mu grid must be a 1-D array of nonnegative values")
    return _scan("two-qubit", beta, grid, n_samples, seed, kind, method, workers,
                 block_size, checkpoint_path, checkpoint_every, resume, MIN_SAMPLES_2QUBIT)


def scan_qubit_qutrit(beta, n_samples, nu_lattice=None, seed=0, kind="sobol", method=None,
                      workers=1, block_size=DEFAULT_BLOCK, checkpoint_path=None,
                      checkpoint_every=None, resume=None, min_samples=MIN_SAMPLES_QQ):
    """Qubit-qutrit table over a (nu1, nu2) lattice."""
    if beta not in (1, 2):
        raise ValidationError("qubit-qutrit scans support beta 1 and 2")
    grid = nu_grid() if nu_lattice is None else np.asarray(nu_lattice, float)
    if grid.ndim != 2 or grid.shape[1] != 2 or np.any(grid < 0):
        raise ValidationError("nu lattice must be an (N, 2) array of nonnegative values")
    return _scan("qubit-qutrit", beta, grid, n_samples, seed, kind, method, workers,
                 block_size, checkpoint_path, checkpoint_every, resume, min_samples)


# ------------------------------------------------------------------ R1

def batch_ratio(numer, denom, batches=MIN_BATCHES):
    """Ratio of sums with a standard error from contiguous batches of blocks."""
    numer = np.asarray(numer, dtype=float)
    denom = np.asarray(denom, dtype=float)
    if len(numer) < batches:
        raise ValidationError(f"need at least {batches} blocks for a batch error")
    edges = np.linspace(0, len(numer), batches + 1).round().astype(int)
    num_b = np.add.reduceat(numer, edges[:-1])
    den_b = np.add.reduceat(denom, edges[:-1])
    total = den_b.sum()
    if total <= 0:
        raise ValidationError("no feasible samples")
    ratio = num_b.sum() / total
    # linearised ratio-estimator variance across batches
    resid = (num_b - ratio * den_b) / (total / batches)
    se = math.sqrt(resid.var(ddof=1) / batches)
    return float(ratio), float(se)


def r1_from_table(table, batches=MIN_BATCHES):
    value, se = batch_ratio(table.block_symmetric, table.block_feasible, batches)
    return EstimateSummary(f"R1/{table.system}/beta={table.beta}", value, se,
                           metadata=dict(table.metadata, n_feasible=table.n_feasible))


def r1_estimate(beta, system="two-qubit", n_samples=1_000_000, seed=0, kind="sobol",
                method=None, workers=1, block_size=None, min_feasible=1000):
    """Separable fraction of feasible samples at the symmetric ratio point."""
    if system == "two-qubit":
        grid = np.array([1.0])
    elif system == "qubit-qutrit":
        grid = np.array([[1.0, 1.0]])
    else:
        bloore.system_shape(system)
    if block_size is None:
        block_size = max(256, min(DEFAULT_BLOCK, int(n_samples) // (4 * MIN_BATCHES)))
    run = scan_2qubit if system == "two-qubit" else scan_qubit_qutrit
    table = run(beta, n_samples, grid, seed=seed, kind=kind, method=method,
                workers=workers, block_size=block_size)
    if table.n_feasible < min_feasible:
        raise ValidationError(
            f"only {table.n_feasible} feasible samples; at least {min_feasible} needed")
    return r1_from_table(table)
