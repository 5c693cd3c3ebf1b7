"""Synchronous multi-thread contention model.

T threads proceed in lockstep iterations; each picks a remaining edge of
a uniformly shuffled sequence (realized as the next T positions of the
shuffle, which is distributionally the same and reproducible). Colliding
picks within an iteration are write-contention events; the edges are
processed regardless, in sequence order, so contention accounting never
changes the resulting partition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence

from .forest import Forest, LinkingStrategy
from .graphs import EdgeSequence, ParameterError, shuffle
from .rng import Rng


@dataclass
class ContentionRun:
    threads: int
    events: int
    per_iteration: List[int]


def simulate_contention(seq: EdgeSequence, strategy: LinkingStrategy,
                        threads: int, rng: Rng) -> ContentionRun:
    """Count pairwise collisions among each iteration's T picks.

    The final (possibly partial) iteration counts pairs among whatever
    edges remain.
    """
    if threads < 2:
        raise ParameterError("contention model needs at least 2 threads")
    shuffled = shuffle(seq, rng)
    m = len(shuffled)
    f = Forest(shuffled.vertex_count, strategy, compaction="full")
    eu, ev = shuffled.u.tolist(), shuffled.v.tolist()
    per_iteration: List[int] = []
    for start in range(0, m, threads):
        hi = min(start + threads, m)
        counts: Dict[int, int] = {}
        for t in range(start, hi):
            ru, rv = f.root(eu[t]), f.root(ev[t])
            if ru != rv:
                s = f.smaller_root(ru, rv)
                counts[s] = counts.get(s, 0) + 1
        per_iteration.append(sum(c * (c - 1) // 2 for c in counts.values()))
        for t in range(start, hi):
            f.union(eu[t], ev[t])
    return ContentionRun(threads, sum(per_iteration), per_iteration)


@dataclass
class SweepRow:
    threads: int
    seeds: int
    mean_events: float
    events_over_t_squared: float


def sweep_contention(seq: EdgeSequence, strategy_kind: str,
                     t_list: Sequence[int], seeds: int,
                     rng: Rng) -> List[SweepRow]:
    """Mean contention per thread count; tie priorities re-drawn per seed."""
    if seeds < 1:
        raise ParameterError("need at least one seed")
    rows = []
    for threads in t_list:
        total = 0
        for k in range(seeds):
            child = rng.split(f"contention.T{threads}.{k}")
            strategy = LinkingStrategy.make(strategy_kind, seq.vertex_count,
                                            child.split("prio"))
            run = simulate_contention(seq, strategy, threads, child.split("order"))
            total += run.events
        mean = total / seeds
        rows.append(SweepRow(threads, seeds, mean, mean / threads ** 2))
    return rows
