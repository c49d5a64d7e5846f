"""Index-addressable point streams in [0,1)^d with checkpoint/resume.

Two kinds are offered. ``sobol`` is a digitally scrambled Sobol sequence
(scipy's direction numbers); ``random`` is a counter-based Philox stream. In
both the point at index k depends only on (kind, d, key, k), so contiguous
index blocks can be generated independently and merged in order.
"""
import hashlib
import json
import math
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc as _sqmc

from .errors import CheckpointError, ValidationError

MAX_DIMENSION = 64
SCHEMA_VERSION = 1
KINDS = ("sobol", "random")


class LdsStream:
    """A single-owner stream of points; use ``child`` for parallel blocks."""

    def __init__(self, kind="sobol", dim=1, key=0, next_index=0):
        if kind not in KINDS:
            raise ValidationError(f"unknown stream kind {kind!r}")
        if not 1 <= int(dim) <= MAX_DIMENSION:
            raise ValidationError(f"dimension must be in 1..{MAX_DIMENSION}")
        if next_index < 0:
            raise ValidationError("next_index must be nonnegative")
        self.kind = kind
        self.dim = int(dim)
        self.key = int(key)
        self.next_index = int(next_index)
        self._engine = None

    def _sobol(self):
        if self._engine is None:
            eng = _sqmc.Sobol(self.dim, scramble=True, seed=self.key)
            if self.next_index:
                eng.fast_forward(self.next_index)
            self._engine = eng
        return self._engine

    def _philox_block(self, start, count):
        words = math.ceil(self.dim / 4)
        bitgen = np.random.Philox(key=self.key)
        bitgen.advance(start * words)
        raw = bitgen.random_raw(count * words * 4).reshape(count, words * 4)
        return (raw[:, :self.dim] >> np.uint64(11)) * (1.0 / 9007199254740992.0)

    def next_block(self, count):
        """Return ``count`` consecutive points and advance the stream."""
        count = int(count)
        if count < 0:
            raise ValidationError("count must be nonnegative")
        if self.kind == "sobol":
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UserWarning)
                pts = self._sobol().random(count) if count else np.empty((0, self.dim))
        else:
            pts = self._philox_block(self.next_index, count)
        self.next_index += count
        return pts

    def child(self, start):
        """A fresh stream with the same key positioned at index ``start``."""
        return LdsStream(self.kind, self.dim, self.key, start)

    def state(self):
        return {"kind": self.kind, "dim": self.dim, "key": self.key,
                "next_index": self.next_index}

    @classmethod
    def from_state(cls, state):
        return cls(state["kind"], state["dim"], state["key"], state["next_index"])


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def fingerprint(params):
    """SHA-256 of the canonical JSON form of the run parameters."""
    return hashlib.sha256(canonical_json(params).encode()).hexdigest()


@dataclass
class Checkpoint:
    fingerprint: str
    stream: dict
    accumulators: dict
    metadata: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_bytes(self):
        payload = {
            "schema_version": self.schema_version,
            "fingerprint": self.fingerprint,
            "stream": self.stream,
            "accumulators": self.accumulators,
            "metadata": self.metadata,
        }
        return (canonical_json(payload) + "\n").encode()

    @classmethod
    def from_bytes(cls, data):
        try:
            payload = json.loads(data)
        except ValueError as exc:
            raise CheckpointError(f"unreadable checkpoint: {exc}") from None
        missing = {"schema_version", "fingerprint", "stream", "accumulators"} - set(payload)
        if missing:
            raise CheckpointError(f"checkpoint lacks fields {sorted(missing)}")
        return cls(payload["fingerprint"], payload["stream"], payload["accumulators"],
                   payload.get("metadata", {}), payload["schema_version"])

    def save(self, path):
        tmp = f"{path}.tmp"
        with open(tmp, "wb") as fh:
            fh.write(self.to_bytes())
        os.replace(tmp, path)

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def _plain(acc):
    out = {}
    for name, value in acc.items():
        if isinstance(value, np.ndarray):
            out[name] = [int(v) for v in value.ravel()]
        elif isinstance(value, (list, tuple)):
            out[name] = [int(v) for v in value]
        else:
            out[name] = int(value)
    return out


def checkpoint_roundtrip(stream, accumulators, fingerprint_hex, started=None):
    """Snapshot a stream position and integer accumulators."""
    now = time.time()
    meta = {"saved_at": now}
    if started is not None:
        meta["elapsed_s"] = now - started
    return Checkpoint(fingerprint_hex, stream.state(), _plain(accumulators), meta)


def restore(checkpoint, expected_fingerprint):
    """Inverse of ``checkpoint_roundtrip``; refuses foreign checkpoints."""
    if checkpoint.schema_version != SCHEMA_VERSION:
        raise CheckpointError(f"unsupported schema version {checkpoint.schema_version}")
    if checkpoint.fingerprint != expected_fingerprint:
        raise CheckpointError("checkpoint fingerprint does not match the run parameters")
    stream = LdsStream.from_state(checkpoint.stream)
    acc = {k: (np.array(v, dtype=np.int64) if isinstance(v, list) else v)
           for k, v in checkpoint.accumulators.items()}
    return stream, acc


def block_ranges(start, stop, block_size):
    """Contiguous (start, count) pieces; independent of the worker count."""
    out = []
    k = start
    while k < stop:
        n = min(block_size, stop - k)
        out.append((k, n))
        k += n
    return out


def ordered_map(fn, ranges, workers=1):
    """Apply ``fn(start, count)`` to each range, yielding results in index order."""
    if workers <= 1:
        for r in ranges:
            yield fn(*r)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        wave = max(workers * 2, 1)
        for i in range(0, len(ranges), wave):
            futures = [pool.submit(fn, *r) for r in ranges[i:i + wave]]
            for fut in futures:
                yield fut.result()


def star_discrepancy_proxy(points, cells=32):
    """Largest |empirical - Lebesgue| mass over anchored dyadic boxes in 2-D."""
    points = np.asarray(points)
    n = len(points)
    idx = np.minimum((points * cells).astype(int), cells - 1)
    hist = np.zeros((cells, cells))
    np.add.at(hist, (idx[:, 0], idx[:, 1]), 1)
    cum = hist.cumsum(0).cumsum(1) / n
    edges = np.arange(1, cells + 1) / cells
    return float(np.max(np.abs(cum - np.outer(edges, edges))))
