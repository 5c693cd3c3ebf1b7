"""Windowed parallel union-find with deterministic reservations.

Each iteration examines the next window of the edge sequence in three
barrier-separated phases: every edge priority-writes its position into
the reservation slot of its smaller adjacent root; a fetch-min reduction
finds the first position whose reservation lost; the conflict-free prefix
before that position is then applied. Within a phase only idempotent
reads and fetch-min writes occur, so the outcome is independent of
scheduling by construction: the set of successful unions, the per
iteration prefix lengths, and the shadow forest are identical for every
thread count.

Links for an executed prefix are re-derived per connected group of roots
by divide-and-conquer, comparing roots under the configured strategy at
every merge, which preserves the linking technique's depth guarantees
(naively replaying the prefix links can build linear-depth paths).
"""

from __future__ import annotations

import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .collisions import collides
from .forest import ContractViolation, Forest, LinkingStrategy
from .graphs import EdgeSequence, ParameterError

INFINITY = (1 << 63) - 1


class ReservationTable:
    """Per-vertex fetch-minimum slots realizing priority-write semantics.

    Slots are versioned by epoch instead of rewritten, so clearing costs
    O(1) per iteration. ``write_min`` is atomic under an internal lock;
    the stored minimum is the same for every interleaving.
    """

    def __init__(self, n: int):
        self.n = n
        self._value = [INFINITY] * n
        self._stamp = [0] * n
        self._epoch = 1
        self._lock = threading.Lock()

    def clear(self) -> None:
        self._epoch += 1

    def write_min(self, slot: int, value: int) -> None:
        with self._lock:
            if self._stamp[slot] != self._epoch:
                self._stamp[slot] = self._epoch
                self._value[slot] = value
            elif value < self._value[slot]:
                self._value[slot] = value

    def read(self, slot: int) -> int:
        return self._value[slot] if self._stamp[slot] == self._epoch else INFINITY


def write_min(table: ReservationTable, slot: int, value: int) -> None:
    table.write_min(slot, value)


@dataclass(frozen=True)
class WindowPolicy:
    """Window sizing rule: fixed S, or adaptive doubling/halving."""

    kind: str
    s: int
    s_min: int = 1
    s_max: Optional[int] = None

    @classmethod
    def fixed(cls, s: int) -> "WindowPolicy":
        if s < 1:
            raise ParameterError("window size must be >= 1")
        return cls("fixed", s)

    @classmethod
    def adaptive(cls, s0: int, s_min: int = 1, s_max: Optional[int] = None) -> "WindowPolicy":
        if s0 < 1 or s_min < 1 or (s_max is not None and s_max < s_min):
            raise ParameterError("invalid adaptive window bounds")
        return cls("adaptive", s0, s_min, s_max)

    def next_size(self, s: int, l: int, r: int, stop: int, total: int) -> int:
        if self.kind == "fixed":
            return s
        hi = self.s_max if self.s_max is not None else total
        if stop == r:
            return min(2 * s, max(hi, 1))
        if stop - l < s / 2:
            return max(s // 2, self.s_min)
        return s


@dataclass
class WorkCounters:
    finds: int = 0
    parent_reads: int = 0
    link_writes: int = 0

    def merge(self, other: "WorkCounters") -> None:
        self.finds += other.finds
        self.parent_reads += other.parent_reads
        self.link_writes += other.link_writes

    def total(self) -> int:
        return self.finds + self.parent_reads + self.link_writes


@dataclass
class RunStats:
    """Accounting for one windowed run."""

    total_edges: int
    iterations: int
    executed_per_iteration: List[int]
    window_per_iteration: List[int]
    failed_per_iteration: List[int]
    failed_reservation_events: int
    success_set: List[int]
    work: WorkCounters
    wall_time: Optional[float] = None
    fixed_window: Optional[int] = None
    max_depth_per_iteration: Optional[List[int]] = None
    forest: Optional[Forest] = None  # attached only on request

    @property
    def extra_iterations(self) -> Optional[int]:
        """Iterations beyond the collision-free minimum (fixed policy only)."""
        if self.fixed_window is None:
            return None
        return max(0, self.iterations - math.ceil(self.total_edges / self.fixed_window))


class _SequentialExecutor:
    threads = 1

    def run_phase(self, fn, count: int) -> None:
        if count > 0:
            fn(0, count, 0)

    def close(self) -> None:
        pass


class _PoolExecutor:
    """Fixed worker pool; each phase is one barrier-synchronized dispatch."""

    def __init__(self, threads: int):
        self.threads = threads
        self._pool = ThreadPoolExecutor(max_workers=threads)

    def run_phase(self, fn, count: int) -> None:
        if count == 0:
            return
        k = min(self.threads, count)
        chunk = (count + k - 1) // k
        futures = []
        for slot in range(k):
            lo = slot * chunk
            hi = min(lo + chunk, count)
            if lo < hi:
                futures.append(self._pool.submit(fn, lo, hi, slot))
        for fut in futures:
            fut.result()

    def close(self) -> None:
        self._pool.shutdown(wait=True)


def _counted_find(f: Forest, u: int, counters: WorkCounters) -> int:
    """find_root with the forest's compaction mode, counting reads/writes."""
    counters.finds += 1
    parent = f.parent
    if f.compaction == "one_try_splitting":
        while parent[u] != u:
            nxt = parent[u]
            counters.parent_reads += 1
            if parent[nxt] != nxt:
                counters.link_writes += 1
            parent[u] = parent[nxt]
            u = nxt
        return u
    r = u
    while parent[r] != r:
        r = parent[r]
        counters.parent_reads += 1
    if f.compaction == "full":
        while parent[u] != r:
            counters.link_writes += 1
            parent[u], u = r, parent[u]
    return r


def bulk_find_roots(f: Forest, vertices: Sequence[int],
                    executor=None, counters: Optional[WorkCounters] = None) -> List[int]:
    """Roots for all queried vertices, then full compression of the paths.

    Runs in two barrier-separated passes: read-only walks from the frozen
    forest state resolve every root (so work counts are schedule
    independent), then every traversed vertex is re-linked directly to
    its root. The shadow forest is untouched. Equivalent to per-vertex
    find_root with full compaction.
    """
    executor = executor or _SequentialExecutor()
    counters = counters if counters is not None else WorkCounters()
    uniq = sorted(set(int(v) for v in vertices))
    parent = f.parent
    roots: List[int] = [0] * len(uniq)
    paths: List[List[int]] = [[] for _ in uniq]
    slot_counters = [WorkCounters() for _ in range(executor.threads)]

    def walk(lo: int, hi: int, slot: int) -> None:
        c = slot_counters[slot]
        for idx in range(lo, hi):
            u = uniq[idx]
            c.finds += 1
            path = []
            while parent[u] != u:
                path.append(u)
                u = parent[u]
                c.parent_reads += 1
            roots[idx] = u
            paths[idx] = path

    executor.run_phase(walk, len(uniq))

    def relink(lo: int, hi: int, slot: int) -> None:
        # unconditional idempotent writes: paths come from the frozen
        # pre-phase state, so the write count is schedule-independent
        # even when walks share ancestors across workers
        c = slot_counters[slot]
        for idx in range(lo, hi):
            r = roots[idx]
            for v in paths[idx]:
                parent[v] = r
                c.link_writes += 1

    executor.run_phase(relink, len(uniq))
    for c in slot_counters:
        counters.merge(c)
    lookup = {v: roots[i] for i, v in enumerate(uniq)}
    return [lookup[int(v)] for v in vertices]


def make_reservations(f: Forest, edges: EdgeSequence, l: int, r: int,
                      table: ReservationTable,
                      roots: Optional[List[Tuple[int, int]]] = None,
                      executor=None,
                      counters: Optional[WorkCounters] = None) -> List[Optional[Tuple[int, int, int]]]:
    """Reservation phase over window positions [l, r).

    Each external edge fetch-mins its position into the slot of its
    smaller adjacent root; same-component positions reserve nothing.
    Root lookups observe the forest state at iteration start (no links
    happen here). Returns per-position (root_u, root_v, smaller) or None
    for same-component positions.
    """
    if not (0 <= l < r <= len(edges)):
        raise ParameterError("window bounds out of range")
    executor = executor or _SequentialExecutor()
    counters = counters if counters is not None else WorkCounters()
    out: List[Optional[Tuple[int, int, int]]] = [None] * (r - l)
    if roots is None:
        endpoints: List[int] = []
        for t in range(l, r):
            endpoints.append(int(edges.u[t]))
            endpoints.append(int(edges.v[t]))
        flat = bulk_find_roots(f, endpoints, executor, counters)
        roots = [(flat[2 * k], flat[2 * k + 1]) for k in range(r - l)]

    def reserve(lo: int, hi: int, slot: int) -> None:
        for k in range(lo, hi):
            ru, rv = roots[k]
            if ru == rv:
                continue
            s = ru if f.compare_roots(ru, rv) < 0 else rv
            table.write_min(s, l + k)
            out[k] = (ru, rv, s)

    executor.run_phase(reserve, r - l)
    return out


def first_failure(table: ReservationTable,
                  reservations: Sequence[Optional[Tuple[int, int, int]]],
                  l: int, r: int, executor=None) -> int:
    """First window position whose reservation lost, or r if none.

    Computed as a fetch-min reduction over per-chunk minima, so the
    result does not depend on scheduling.
    """
    executor = executor or _SequentialExecutor()
    mins = [r] * executor.threads

    def scan(lo: int, hi: int, slot: int) -> None:
        best = r
        for k in range(lo, hi):
            res = reservations[k]
            if res is not None and table.read(res[2]) != l + k:
                best = l + k
                break
        mins[slot] = min(mins[slot], best)

    executor.run_phase(scan, r - l)
    return min(mins) if mins else r


def _count_failures(table: ReservationTable,
                    reservations: Sequence[Optional[Tuple[int, int, int]]],
                    l: int) -> int:
    failed = 0
    for k, res in enumerate(reservations):
        if res is not None and table.read(res[2]) != l + k:
            failed += 1
    return failed


def _merge_group(f: Forest, roots: List[int], lo: int, hi: int,
                 counters: WorkCounters) -> int:
    if hi - lo == 1:
        return roots[lo]
    mid = (lo + hi) // 2
    a = _merge_group(f, roots, lo, mid, counters)
    b = _merge_group(f, roots, mid, hi, counters)
    if f.compare_roots(a, b) < 0:
        loser, winner = a, b
    else:
        loser, winner = b, a
    f.link(loser, winner)
    counters.link_writes += 1
    return winner


def parallel_link_all(f: Forest, edges: EdgeSequence, l: int, stop: int,
                      roots: Optional[List[Tuple[int, int]]] = None,
                      executor=None,
                      counters: Optional[WorkCounters] = None,
                      validate: bool = False) -> List[int]:
    """Apply the conflict-free prefix [l, stop); returns merged positions.

    Roots touched by the prefix are grouped into the connected components
    they will form, then each group is united by divide-and-conquer with
    the linking strategy applied at every merge, keeping the strategy's
    depth bound intact. Groups are disjoint, so workers never contend.
    """
    executor = executor or _SequentialExecutor()
    counters = counters if counters is not None else WorkCounters()
    if stop <= l:
        return []
    if roots is None:
        endpoints: List[int] = []
        for t in range(l, stop):
            endpoints.append(int(edges.u[t]))
            endpoints.append(int(edges.v[t]))
        flat = bulk_find_roots(f, endpoints, executor, counters)
        roots = [(flat[2 * k], flat[2 * k + 1]) for k in range(stop - l)]

    merged_positions: List[int] = []
    pairs: List[Tuple[int, int]] = []
    for k in range(stop - l):
        ru, rv = roots[k]
        if ru != rv:
            merged_positions.append(l + k)
            pairs.append((ru, rv))

    if validate:
        window_edges = [edges[t] for t in range(l, stop)]
        for i in range(len(window_edges)):
            for j in range(i + 1, len(window_edges)):
                if collides(f, window_edges[i], window_edges[j]):
                    raise ContractViolation(
                        f"colliding pair inside executed prefix [{l}, {stop})")

    if not pairs:
        return merged_positions

    # group roots that become one component, using a scratch union-find
    scratch: Dict[int, int] = {}

    def sfind(x: int) -> int:
        root = x
        while scratch.get(root, root) != root:
            root = scratch[root]
        while scratch.get(x, x) != x:
            scratch[x], x = root, scratch[x]
        return root

    for ru, rv in pairs:
        a, b = sfind(ru), sfind(rv)
        if a != b:
            scratch[a] = b

    groups: Dict[int, List[int]] = {}
    seen = set()
    for ru, rv in pairs:
        for x in (ru, rv):
            if x not in seen:
                seen.add(x)
                groups.setdefault(sfind(x), []).append(x)
    group_list = sorted((sorted(members) for members in groups.values()),
                        key=lambda g: g[0])

    if validate:
        per_group_edges: Dict[int, int] = {}
        for ru, rv in pairs:
            per_group_edges[sfind(ru)] = per_group_edges.get(sfind(ru), 0) + 1
        for g in group_list:
            if per_group_edges.get(sfind(g[0]), 0) != len(g) - 1:
                raise ContractViolation("prefix edges form a cycle within a group")

    slot_counters = [WorkCounters() for _ in range(executor.threads)]

    def link_groups(lo: int, hi: int, slot: int) -> None:
        c = slot_counters[slot]
        for gi in range(lo, hi):
            g = group_list[gi]
            _merge_group(f, g, 0, len(g), c)

    executor.run_phase(link_groups, len(group_list))
    for c in slot_counters:
        counters.merge(c)
    return merged_positions


def _scan_stop(f: Forest, edges: EdgeSequence, l: int, r: int,
               table: ReservationTable, counters: WorkCounters
               ) -> Tuple[int, int, List[Tuple[int, int]]]:
    """Sequential early-exit equivalent of reserve + first_failure.

    Positions are scanned in ascending order, so the first position whose
    slot is already taken is exactly the fetch-min stop. Only the prefix
    up to the first failure is visited; work counters therefore reflect
    the scan, not the full-window reservation phase. Valid only in
    single-threaded runs; outcome-equivalent to the phased path.
    """
    table.clear()
    roots: List[Tuple[int, int]] = []
    stop = r
    failures = 0
    for t in range(l, r):
        ru = _counted_find(f, int(edges.u[t]), counters)
        rv = _counted_find(f, int(edges.v[t]), counters)
        if ru == rv:
            roots.append((ru, rv))
            continue
        s = ru if f.compare_roots(ru, rv) < 0 else rv
        if table.read(s) != INFINITY:
            stop = t
            failures = 1
            break
        table.write_min(s, t)
        roots.append((ru, rv))
    return stop, failures, roots


def run_windowed(seq: EdgeSequence, strategy: LinkingStrategy, policy: WindowPolicy,
                 threads: int = 1, detach_stop_edge: bool = True,
                 compaction: str = "full", validate: bool = False,
                 scan_reservations: bool = False,
                 record_depth_history: bool = False,
                 keep_forest: bool = False) -> RunStats:
    """Run the windowed algorithm over ``seq`` in its given order.

    The sequence is consumed as-is (shuffle beforehand if a random order
    is wanted). With ``detach_stop_edge`` the edge at the stop position is
    applied sequentially after each prefix, so measured iteration counts
    match the analyzed process; disable it to follow the basic loop
    verbatim. ``scan_reservations`` switches single-threaded runs to an
    early-exit reservation scan with identical outcomes but less work.
    """
    if threads < 1:
        raise ParameterError("threads must be >= 1")
    if scan_reservations and threads != 1:
        raise ParameterError("reservation scan is a sequential-only path")
    n, m = seq.vertex_count, len(seq)
    f = Forest(n, strategy, compaction)
    table = ReservationTable(n)
    executor = _SequentialExecutor() if threads == 1 else _PoolExecutor(threads)
    counters = WorkCounters()
    successes: List[int] = []
    executed: List[int] = []
    windows: List[int] = []
    faileds: List[int] = []
    depth_hist: List[int] = [] if record_depth_history else None
    s = policy.s
    started = time.perf_counter()
    try:
        i = 0
        while i < m:
            r = min(i + s, m)
            if scan_reservations:
                stop, failures, roots = _scan_stop(f, seq, i, r, table, counters)
                prefix_roots = roots
            else:
                table.clear()
                endpoints: List[int] = []
                for t in range(i, r):
                    endpoints.append(int(seq.u[t]))
                    endpoints.append(int(seq.v[t]))
                flat = bulk_find_roots(f, endpoints, executor, counters)
                roots = [(flat[2 * k], flat[2 * k + 1]) for k in range(r - i)]
                reservations = make_reservations(f, seq, i, r, table, roots,
                                                 executor, counters)
                stop = first_failure(table, reservations, i, r, executor)
                failures = _count_failures(table, reservations, i)
                prefix_roots = roots[: stop - i]
            merged_now = parallel_link_all(f, seq, i, stop, prefix_roots,
                                           executor, counters, validate)
            successes.extend(merged_now)
            count = stop - i
            nxt = stop
            if detach_stop_edge and stop < m:
                out = f.union(int(seq.u[stop]), int(seq.v[stop]))
                counters.finds += 2
                if out.merged:
                    counters.link_writes += 1
                    successes.append(stop)
                count += 1
                nxt = stop + 1
            executed.append(count)
            windows.append(s)
            faileds.append(failures)
            if record_depth_history:
                depth_hist.append(f.max_uncompressed_depth())
            s = policy.next_size(s, i, r, stop, m)
            i = nxt
    finally:
        executor.close()
    wall = time.perf_counter() - started
    return RunStats(
        total_edges=m,
        iterations=len(executed),
        executed_per_iteration=executed,
        window_per_iteration=windows,
        failed_per_iteration=faileds,
        failed_reservation_events=sum(faileds),
        success_set=successes,
        work=counters,
        wall_time=wall,
        fixed_window=policy.s if policy.kind == "fixed" else None,
        max_depth_per_iteration=depth_hist,
        forest=f if keep_forest else None,
    )


def sequential_run(seq: EdgeSequence, strategy: LinkingStrategy,
                   compaction: str = "full") -> Tuple[List[int], WorkCounters]:
    """Plain sequential replay; the oracle for internal determinism."""
    f = Forest(seq.vertex_count, strategy, compaction)
    counters = WorkCounters()
    successes: List[int] = []
    for t in range(len(seq)):
        ru = _counted_find(f, int(seq.u[t]), counters)
        rv = _counted_find(f, int(seq.v[t]), counters)
        if ru == rv:
            continue
        if f.compare_roots(ru, rv) < 0:
            f.link(ru, rv)
        else:
            f.link(rv, ru)
        counters.link_writes += 1
        successes.append(t)
    return successes, counters


def verify_internal_determinism(seq: EdgeSequence, strategy: LinkingStrategy,
                                policy: WindowPolicy, threads: int = 1) -> bool:
    """True iff the windowed success set equals the sequential one."""
    stats = run_windowed(seq, strategy, policy, threads)
    sequential, _ = sequential_run(seq, strategy)
    return stats.success_set == sequential


@dataclass
class MstResult:
    positions: List[int]          # into the weight-sorted sequence
    edges: List
    total_weight: float
    sorted_sequence: EdgeSequence
    run_stats: RunStats


def parallel_kruskal(seq: EdgeSequence, strategy: LinkingStrategy,
                     policy: WindowPolicy, threads: int = 1) -> MstResult:
    """Kruskal by windowed union-find: sort by weight, take the successes.

    Weights must all be present and pairwise distinct, which makes the
    minimum spanning forest unique and the outcome deterministic.
    """
    if seq.w is None or np.isnan(seq.w).any():
        raise ParameterError("all edges need weights")
    if len(np.unique(seq.w)) != len(seq):
        raise ParameterError("duplicate weights are rejected")
    order = np.argsort(seq.w, kind="stable")
    sorted_seq = seq.with_order(order)
    stats = run_windowed(sorted_seq, strategy, policy, threads)
    edges = [sorted_seq[p] for p in stats.success_set]
    total = float(sum(sorted_seq.w[p] for p in stats.success_set))
    return MstResult(stats.success_set, edges, total, sorted_seq, stats)
