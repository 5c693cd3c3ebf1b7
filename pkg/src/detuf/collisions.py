"""The sequentialized random process: collision statistics and potential.

Edges are inserted one at a time in a uniformly shuffled order. Before
each insertion we can ask: if two distinct *active* (not yet inserted)
edges were drawn at random, would they collide, i.e. are both external
and do they share the same "smaller" adjacent component? This module
computes that probability exactly at every step, traces the depth-rank
potential that bounds its sum, and offers Monte Carlo and windowed
counters as cross-checks.

Two engines produce traces: a pure-Python exact engine carrying rational
arithmetic (used for small inputs and as the oracle) and a compiled
incremental engine (:mod:`detuf._kernel`) for large sequences. They are
held equal by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from . import _kernel
from .forest import Forest, LinkingStrategy
from .graphs import Edge, EdgeSequence, ParameterError, shuffle
from .rng import Rng

Number = Union[Fraction, float]


def _endpoints(e) -> Tuple[int, int]:
    if isinstance(e, Edge):
        return e.u, e.v
    return int(e[0]), int(e[1])


def smaller_adjacent_root(f: Forest, e) -> Optional[int]:
    """The root an edge would priority-write: its smaller adjacent root.

    Returns None for internal edges (endpoints already connected).
    """
    u, v = _endpoints(e)
    ru, rv = f.root(u), f.root(v)
    if ru == rv:
        return None
    return f.smaller_root(ru, rv)


def collides(f: Forest, e1, e2) -> bool:
    """Strict collision: both edges external with the same smaller root."""
    s1 = smaller_adjacent_root(f, e1)
    if s1 is None:
        return False
    s2 = smaller_adjacent_root(f, e2)
    return s2 == s1


def collides_simplified(f: Forest, e1, e2) -> bool:
    """Weakened collision: both external and sharing any adjacent component."""
    u1, v1 = _endpoints(e1)
    r1a, r1b = f.root(u1), f.root(v1)
    if r1a == r1b:
        return False
    u2, v2 = _endpoints(e2)
    r2a, r2b = f.root(u2), f.root(v2)
    if r2a == r2b:
        return False
    return r2a in (r1a, r1b) or r2b in (r1a, r1b)


def classify_edges(f: Forest, edges) -> List[Optional[int]]:
    """Smaller adjacent root per edge, None where internal."""
    return [smaller_adjacent_root(f, e) for e in edges]


@dataclass
class StepStats:
    """Exact collision accounting for one step of the random process."""

    t: int
    component_count: int
    m: Optional[List[int]]  # active-to-larger edge counts, components in linking order
    p_exact: Number
    phi: Number
    colliding_pairs: int


def step_stats(f: Forest, active: Sequence, t: int, total_edges: int,
               frozen_rank_sum: Number = 0) -> StepStats:
    """Compute StepStats for the given forest state and active edge list.

    ``p_exact`` comes from the per-component formula
    sum_i m_i*(m_i-1) / ((E-t)*(E-t-1)); ``colliding_pairs`` is recounted
    independently by exhaustive pair enumeration with the collision
    predicate. ``phi`` needs the frozen rank contributions of already
    inserted edges, supplied as ``frozen_rank_sum`` (0 at t=0).
    """
    if len(active) == 0:
        raise ParameterError("active edge list must be non-empty")
    if t != total_edges - len(active):
        raise ParameterError("t must equal total_edges - len(active)")
    a = len(active)
    counts: dict = {}
    for e in active:
        s = smaller_adjacent_root(f, e)
        if s is not None:
            counts[s] = counts.get(s, 0) + 1
    if a >= 2:
        p = Fraction(sum(c * (c - 1) for c in counts.values()), a * (a - 1))
    else:
        p = Fraction(0)
    pairs = 0
    for i in range(a):
        for j in range(i + 1, a):
            if collides(f, active[i], active[j]):
                pairs += 1
    roots_in_order = sorted(f.roots(), key=f._sort_key)
    m_hist = [counts.get(r, 0) for r in roots_in_order]
    d = 0
    for e in active:
        u, v = _endpoints(e)
        d += f.uncompressed_depth(u) + f.uncompressed_depth(v)
    phi = Fraction(total_edges, total_edges - t) * d + frozen_rank_sum
    return StepStats(t, f.component_count, m_hist, p, phi, pairs)


def potential(f: Forest, active: Sequence, frozen_ranks: Sequence[Tuple[int, int]],
              total_edges: int) -> Fraction:
    """The potential at t = len(frozen_ranks).

    Active edges contribute their current rank (sum of endpoint shadow
    depths) scaled by E/(E-t); each inserted edge i contributes its rank
    frozen right after it was applied, scaled by E/(E-i), i 1-based.
    """
    t = len(frozen_ranks)
    if t >= total_edges:
        raise ParameterError("potential is defined for 0 <= t <= |E|-1")
    d = 0
    for e in active:
        u, v = _endpoints(e)
        d += f.uncompressed_depth(u) + f.uncompressed_depth(v)
    phi = Fraction(total_edges, total_edges - t) * d
    for i, rank_i in frozen_ranks:
        phi += Fraction(total_edges, total_edges - i) * rank_i
    return phi


@dataclass
class ProcessTrace:
    """Per-step record of one full run of the random process."""

    sequence: EdgeSequence               # in the replayed (shuffled) order
    component_count: Optional[np.ndarray]
    p_exact: Optional[Sequence[Number]]
    phi: Optional[Sequence[Number]]
    colliding_pairs: Optional[np.ndarray]
    m_hist: Optional[List[List[int]]]
    frozen_rank_values: np.ndarray       # rank of edge i frozen at insertion
    merged: np.ndarray
    sum_pt: float
    sum_pt_first_half: float
    final_phi: float

    @property
    def total_edges(self) -> int:
        return len(self.sequence)

    @property
    def frozen_ranks(self) -> List[Tuple[int, int]]:
        """(i, rank frozen when edge i was applied), i 1-based."""
        return [(i + 1, int(v)) for i, v in enumerate(self.frozen_rank_values)]

    def steps(self) -> List[StepStats]:
        if self.p_exact is None:
            raise ParameterError("trace was run with record_steps=False")
        out = []
        for t in range(self.total_edges):
            out.append(StepStats(
                t, int(self.component_count[t]),
                None if self.m_hist is None else self.m_hist[t],
                self.p_exact[t], self.phi[t], int(self.colliding_pairs[t])))
        return out


def _trace_exact(seq: EdgeSequence, strategy: LinkingStrategy,
                 pair_enumeration: bool, record_m: bool) -> ProcessTrace:
    n, m = seq.vertex_count, len(seq)
    f = Forest(n, strategy, compaction="full")
    eu, ev = seq.u.tolist(), seq.v.tolist()

    comp = np.empty(m, dtype=np.int64)
    pairs_arr = np.empty(m, dtype=np.int64)
    merged = np.zeros(m, dtype=bool)
    p_list: List[Fraction] = []
    phi_list: List[Fraction] = []
    m_hist: Optional[List[List[int]]] = [] if record_m else None
    frozen = np.zeros(m, dtype=np.int64)
    frozen_sum = Fraction(0)

    for t in range(m):
        a = m - t
        counts: dict = {}
        smaller: List[Optional[int]] = []
        for i in range(t, m):
            ru, rv = f.root(eu[i]), f.root(ev[i])
            if ru == rv:
                smaller.append(None)
            else:
                s = f.smaller_root(ru, rv)
                smaller.append(s)
                counts[s] = counts.get(s, 0) + 1
        q = sum(c * (c - 1) for c in counts.values())
        p = Fraction(q, a * (a - 1)) if a >= 2 else Fraction(0)
        if pair_enumeration:
            cnt = 0
            for i in range(a):
                si = smaller[i]
                if si is None:
                    continue
                for j in range(i + 1, a):
                    if smaller[j] == si:
                        cnt += 1
            pairs = cnt
        else:
            pairs = q // 2
        d = 0
        for i in range(t, m):
            d += f.uncompressed_depth(eu[i]) + f.uncompressed_depth(ev[i])
        comp[t] = f.component_count
        pairs_arr[t] = pairs
        p_list.append(p)
        phi_list.append(Fraction(m, m - t) * d + frozen_sum)
        if record_m:
            roots_in_order = sorted(f.roots(), key=f._sort_key)
            m_hist.append([counts.get(r, 0) for r in roots_in_order])

        out = f.union(eu[t], ev[t])
        merged[t] = out.merged
        fr = f.uncompressed_depth(eu[t]) + f.uncompressed_depth(ev[t])
        frozen[t] = fr
        if t + 1 < m:
            frozen_sum += Fraction(m, m - (t + 1)) * fr

    sum_pt = float(sum(p_list))
    sum_half = float(sum(p_list[: m // 2 + 1]))
    return ProcessTrace(seq, comp, p_list, phi_list, pairs_arr, m_hist,
                        frozen, merged, sum_pt, sum_half, float(phi_list[-1]))


def _trace_fast(seq: EdgeSequence, strategy: LinkingStrategy,
                record_steps: bool) -> ProcessTrace:
    n, m = seq.vertex_count, len(seq)
    out_c, out_q, out_d, out_f, frozen_raw, merged, _depth = _kernel.run_trace_kernel(
        n, seq.u, seq.v, strategy.kind, strategy.priorities)
    t = np.arange(m, dtype=np.float64)
    a = m - t
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(a >= 2, out_q / (a * np.maximum(a - 1, 1)), 0.0)
    phi = (m / (m - t)) * out_d + out_f
    sum_pt = float(p.sum())
    sum_half = float(p[: m // 2 + 1].sum())
    final_phi = float(phi[-1])
    if not record_steps:
        return ProcessTrace(seq, None, None, None, None, None, frozen_raw,
                            merged.astype(bool), sum_pt, sum_half, final_phi)
    return ProcessTrace(seq, out_c, p, phi, out_q // 2, None, frozen_raw,
                        merged.astype(bool), sum_pt, sum_half, final_phi)


# exact rational arithmetic is quadratic per trace; beyond this many edges
# the compiled engine takes over under method="auto"
_EXACT_LIMIT = 600


def replay_process(seq: EdgeSequence, strategy: LinkingStrategy,
                   method: str = "auto", record_steps: bool = True,
                   pair_enumeration: bool = False,
                   record_m: bool = False) -> ProcessTrace:
    """Replay ``seq`` in its given order, recording per-step statistics.

    ``method="exact"`` forces the rational-arithmetic engine,
    ``method="fast"`` the compiled one; ``"auto"`` picks by size.
    ``pair_enumeration`` recounts colliding pairs exhaustively instead of
    deriving them from the per-component histogram (exact engine only).
    """
    if len(seq) == 0:
        raise ParameterError("edge sequence must be non-empty")
    if method == "auto":
        method = "exact" if len(seq) <= _EXACT_LIMIT else "fast"
    if method == "exact":
        return _trace_exact(seq, strategy, pair_enumeration, record_m)
    if method == "fast":
        return _trace_fast(seq, strategy, record_steps)
    raise ParameterError(f"unknown method {method!r}")


def run_random_process(seq: EdgeSequence, strategy: LinkingStrategy, rng: Rng,
                       method: str = "auto", record_steps: bool = True,
                       pair_enumeration: bool = False,
                       record_m: bool = False) -> ProcessTrace:
    """Shuffle ``seq`` with ``rng``, then replay it (see replay_process)."""
    return replay_process(shuffle(seq, rng), strategy, method, record_steps,
                          pair_enumeration, record_m)


def monte_carlo_pt(f: Forest, active: Sequence, trials: int, rng: Rng) -> float:
    """Fraction of sampled distinct active-edge pairs that collide."""
    a = len(active)
    if a < 2:
        raise ParameterError("need at least two active edges")
    if trials < 1:
        raise ParameterError("need at least one trial")
    first = rng.integers(0, a, trials)
    offset = rng.integers(0, a - 1, trials)
    hits = 0
    for k in range(trials):
        i = int(first[k])
        j = (i + 1 + int(offset[k])) % a
        if collides(f, active[i], active[j]):
            hits += 1
    return hits / trials


def toy_window_collisions(seq: EdgeSequence, window: int,
                          strategy: LinkingStrategy) -> int:
    """Count pairwise collisions over every window of the given size.

    For each position i, pairs inside [i, i+window) are counted against
    the forest holding edges before i; then edge i is inserted. The total
    upper-bounds the failed reservations of the windowed parallel run
    with the same window.
    """
    if window < 2:
        raise ParameterError("window must be >= 2")
    m = len(seq)
    f = Forest(seq.vertex_count, strategy, compaction="full")
    eu, ev = seq.u.tolist(), seq.v.tolist()
    total = 0
    for i in range(m):
        hi = min(i + window, m)
        counts: dict = {}
        for j in range(i, hi):
            ru, rv = f.root(eu[j]), f.root(ev[j])
            if ru != rv:
                s = f.smaller_root(ru, rv)
                counts[s] = counts.get(s, 0) + 1
        total += sum(c * (c - 1) // 2 for c in counts.values())
        f.union(eu[i], ev[i])
    return total


def simplified_p_trace(seq: EdgeSequence, strategy: LinkingStrategy,
                       return_pairs: bool = False):
    """Exact per-step collision probability under the simplified definition.

    Counts active external pairs sharing *any* adjacent component. This
    blows up against the strict definition, which is the point of the
    contrast; quadratic in the sequence length, so keep inputs moderate.
    With ``return_pairs`` also returns the per-step pair counts.
    """
    n, m = seq.vertex_count, len(seq)
    f = Forest(n, strategy, compaction="full")
    labels = np.arange(n, dtype=np.int64)
    members = {v: [v] for v in range(n)}
    eu64, ev64 = seq.u, seq.v
    eu, ev = eu64.tolist(), ev64.tolist()
    p = np.zeros(m, dtype=np.float64)
    pairs_out = np.zeros(m, dtype=np.int64)
    for t in range(m):
        a = m - t
        if a >= 2:
            lu = labels[eu64[t:]]
            lv = labels[ev64[t:]]
            ext = lu != lv
            if ext.any():
                x, y = lu[ext], lv[ext]
                deg = np.bincount(np.concatenate((x, y)), minlength=n).astype(np.int64)
                share_any = int((deg * (deg - 1) // 2).sum())
                key = np.minimum(x, y) * n + np.maximum(x, y)
                _, dup = np.unique(key, return_counts=True)
                share_both = int((dup * (dup - 1) // 2).sum())
                pairs_out[t] = share_any - share_both
                p[t] = pairs_out[t] / (a * (a - 1) / 2)
        out = f.union(eu[t], ev[t])
        if out.merged:
            members[out.winner_root].extend(members[out.loser_root])
            moved = members.pop(out.loser_root)
            labels[np.array(moved, dtype=np.int64)] = out.winner_root
    if return_pairs:
        return p, pairs_out
    return p
