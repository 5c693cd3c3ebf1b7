"""Edge sequences: deterministic generators, shuffling, weighting, file I/O.

An :class:`EdgeSequence` is the unit of every experiment. The *order* of
its edges is semantically meaningful (it is the insertion order of the
union operations) and is preserved exactly by every transformation here.

Edges are stored columnarly (numpy arrays) so multi-million-edge sequences
stay cheap; individual :class:`Edge` objects are materialized on access.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .rng import Rng


class ParameterError(ValueError):
    """Invalid argument to a generator or data-structure operation."""


class EdgeFileError(ValueError):
    """Malformed edge-list file; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    weight: Optional[float] = None


class EdgeSequence:
    """Ordered list of edges over vertices ``0 .. vertex_count-1``."""

    __slots__ = ("vertex_count", "u", "v", "w", "provenance")

    def __init__(self, vertex_count, u, v, w=None, provenance=""):
        self.vertex_count = int(vertex_count)
        self.u = np.ascontiguousarray(u, dtype=np.int64)
        self.v = np.ascontiguousarray(v, dtype=np.int64)
        self.w = None if w is None else np.ascontiguousarray(w, dtype=np.float64)
        self.provenance = provenance
        if self.vertex_count < 1:
            raise ParameterError("vertex_count must be >= 1")
        if self.u.shape != self.v.shape or self.u.ndim != 1:
            raise ParameterError("endpoint arrays must be 1-d and equal length")
        if self.w is not None and self.w.shape != self.u.shape:
            raise ParameterError("weight array length must match edge count")
        if len(self.u) > 0:
            if (self.u == self.v).any():
                raise ParameterError("self-loops are not allowed")
            lo = min(self.u.min(), self.v.min())
            hi = max(self.u.max(), self.v.max())
            if lo < 0 or hi >= self.vertex_count:
                raise ParameterError("vertex id out of range")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Sequence, provenance: str = "") -> "EdgeSequence":
        us, vs, ws = [], [], []
        weighted = False
        for e in edges:
            if isinstance(e, Edge):
                us.append(e.u), vs.append(e.v)
                ws.append(math.nan if e.weight is None else e.weight)
                weighted = weighted or e.weight is not None
            else:
                u, v = e[0], e[1]
                us.append(u), vs.append(v)
                if len(e) > 2 and e[2] is not None:
                    ws.append(e[2])
                    weighted = True
                else:
                    ws.append(math.nan)
        w = np.array(ws, dtype=np.float64) if weighted else None
        return cls(vertex_count, np.array(us, dtype=np.int64),
                   np.array(vs, dtype=np.int64), w, provenance)

    def __len__(self) -> int:
        return len(self.u)

    def __getitem__(self, i: int) -> Edge:
        w = None
        if self.w is not None and not math.isnan(self.w[i]):
            w = float(self.w[i])
        return Edge(int(self.u[i]), int(self.v[i]), w)

    def __iter__(self) -> Iterator[Edge]:
        return (self[i] for i in range(len(self)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeSequence):
            return NotImplemented
        if self.vertex_count != other.vertex_count or len(self) != len(other):
            return False
        if not (np.array_equal(self.u, other.u) and np.array_equal(self.v, other.v)):
            return False
        if self.w is None and other.w is None:
            return True
        a = np.full(len(self), math.nan) if self.w is None else self.w
        b = np.full(len(other), math.nan) if other.w is None else other.w
        return bool(np.array_equal(a, b, equal_nan=True))

    def __repr__(self) -> str:
        return (f"EdgeSequence(n={self.vertex_count}, m={len(self)}, "
                f"provenance={self.provenance!r})")

    def with_order(self, order) -> "EdgeSequence":
        """Reorder edges by ``order`` (a permutation of positions)."""
        order = np.asarray(order, dtype=np.int64)
        w = None if self.w is None else self.w[order]
        return EdgeSequence(self.vertex_count, self.u[order], self.v[order],
                            w, self.provenance)

    def edge_multiset(self):
        """Order-insensitive fingerprint, for permutation invariants."""
        if self.w is None:
            w = [float("-inf")] * len(self)  # sortable stand-in for "no weight"
        else:
            w = [float("-inf") if math.isnan(x) else x for x in self.w.tolist()]
        return sorted(zip(self.u.tolist(), self.v.tolist(), w))


GENERATOR_KINDS = ("cycle", "star", "path", "erdos_renyi", "complete")


def generate(kind: str, n: int, rng: Optional[Rng] = None, p: Optional[float] = None) -> EdgeSequence:
    """Build a named graph family in its canonical edge order.

    ``cycle``: (i, i+1 mod n) for i in 0..n-1 (needs n >= 3).
    ``star``: (0, i) for i in 1..n-1.
    ``path``: (i, i+1) for i in 0..n-2.
    ``complete``: all pairs in lexicographic order.
    ``erdos_renyi``: each pair kept independently with probability ``p``,
    coins flipped in lexicographic pair order (needs ``rng``).
    """
    if kind not in GENERATOR_KINDS:
        raise ParameterError(f"unknown generator kind {kind!r}")
    if kind == "cycle":
        if n < 3:
            raise ParameterError("cycle needs n >= 3")
        u = np.arange(n, dtype=np.int64)
        v = (u + 1) % n
        return EdgeSequence(n, u, v, provenance=f"cycle(n={n})")
    if n < 2:
        raise ParameterError(f"{kind} needs n >= 2")
    if kind == "star":
        v = np.arange(1, n, dtype=np.int64)
        return EdgeSequence(n, np.zeros(n - 1, dtype=np.int64), v,
                            provenance=f"star(n={n})")
    if kind == "path":
        u = np.arange(n - 1, dtype=np.int64)
        return EdgeSequence(n, u, u + 1, provenance=f"path(n={n})")

    # complete and erdos_renyi enumerate unordered pairs lexicographically
    uu, vv = np.triu_indices(n, k=1)
    uu = uu.astype(np.int64)
    vv = vv.astype(np.int64)
    if kind == "complete":
        return EdgeSequence(n, uu, vv, provenance=f"complete(n={n})")
    if p is None or not (0.0 < p <= 1.0):
        raise ParameterError("erdos_renyi needs 0 < p <= 1")
    if rng is None:
        raise ParameterError("erdos_renyi needs an rng")
    keep = rng.random(len(uu)) < p
    return EdgeSequence(n, uu[keep], vv[keep],
                        provenance=f"erdos_renyi(n={n},p={p},seed={rng.seed})")


def shuffle(seq: EdgeSequence, rng: Rng) -> EdgeSequence:
    """Uniformly permute edge order (Fisher-Yates, driven solely by rng)."""
    out = seq.with_order(rng.permutation(len(seq)))
    out.provenance = seq.provenance + "|shuffled"
    return out


def assign_random_weights(seq: EdgeSequence, rng: Rng) -> EdgeSequence:
    """Attach i.i.d. uniform weights; ties are re-drawn until all distinct."""
    m = len(seq)
    w = rng.random(m)
    while True:
        _, first = np.unique(w, return_index=True)
        dup = np.setdiff1d(np.arange(m), first, assume_unique=False)
        if len(dup) == 0:
            break
        w[dup] = rng.random(len(dup))
    out = EdgeSequence(seq.vertex_count, seq.u, seq.v, w, seq.provenance + "|weighted")
    return out


def parse_edge_file(path) -> EdgeSequence:
    """Read the plain edge-list format.

    First non-comment line is ``<n> <m>``; then m lines ``u v [w]``.
    Lines starting with ``#`` are comments. Self-loops and out-of-range
    vertices are rejected with the offending line number.
    """
    n = m = None
    us, vs, ws = [], [], []
    weighted = False
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if n is None:
                if len(parts) != 2:
                    raise EdgeFileError("expected header '<n> <m>'", lineno)
                try:
                    n, m = int(parts[0]), int(parts[1])
                except ValueError:
                    raise EdgeFileError("non-integer header", lineno) from None
                if n < 1 or m < 0:
                    raise EdgeFileError("header values out of range", lineno)
                continue
            if len(parts) not in (2, 3):
                raise EdgeFileError("expected 'u v [w]'", lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise EdgeFileError("non-integer endpoint", lineno) from None
            if u == v:
                raise EdgeFileError(f"self-loop ({u}, {v})", lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise EdgeFileError(f"vertex out of range ({u}, {v})", lineno)
            if len(parts) == 3:
                try:
                    w = float(parts[2])
                except ValueError:
                    raise EdgeFileError("non-numeric weight", lineno) from None
                if w < 0 or math.isnan(w):
                    raise EdgeFileError("weight must be non-negative", lineno)
                ws.append(w)
                weighted = True
            else:
                ws.append(math.nan)
            us.append(u)
            vs.append(v)
    if n is None:
        raise EdgeFileError("missing header", 1)
    if len(us) != m:
        raise EdgeFileError(f"expected {m} edges, found {len(us)}", lineno if us else 1)
    w = np.array(ws) if weighted else None
    return EdgeSequence(n, np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64),
                        w, provenance=str(path))


def write_edge_file(seq: EdgeSequence, path) -> None:
    """Write the format read by :func:`parse_edge_file` (round-trip exact)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{seq.vertex_count} {len(seq)}\n")
        for i in range(len(seq)):
            if seq.w is not None and not math.isnan(seq.w[i]):
                fh.write(f"{seq.u[i]} {seq.v[i]} {float(seq.w[i])!r}\n")
            else:
                fh.write(f"{seq.u[i]} {seq.v[i]}\n")
