"""Empirical lower-bound machinery for cycle graphs.

Three experiments: circular local-minima statistics of random
permutations (which control how many colliding edge pairs a fresh cycle
has), the probability that a shuffled cycle's prefix is collision-free
(which decays fast once the prefix reaches ~sqrt(N log N)), and the
iteration count of the windowed algorithm under the most optimistic
policy, a window spanning the entire unprocessed suffix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .forest import LinkingStrategy
from .graphs import ParameterError, generate, shuffle
from .parallel import WindowPolicy, run_windowed
from .rng import Rng


def count_local_minima(perm: Sequence[int]) -> int:
    """Circular local minima of a permutation of 1..N (N >= 3)."""
    p = np.asarray(perm, dtype=np.int64)
    n = len(p)
    if n < 3:
        raise ParameterError("need N >= 3")
    if not np.array_equal(np.sort(p), np.arange(1, n + 1)):
        raise ParameterError("input is not a permutation of 1..N")
    left = np.roll(p, 1)
    right = np.roll(p, -1)
    return int(((p < left) & (p < right)).sum())


@dataclass
class MinimaStats:
    n: int
    trials: int
    mean_m: float
    tail_prob: float  # empirical Pr[M <= (N-3)/18]


def minima_experiment(n: int, trials: int, rng: Rng) -> MinimaStats:
    """Sample local-minima counts of random circular permutations."""
    if n < 3:
        raise ParameterError("need N >= 3")
    if trials < 1:
        raise ParameterError("need at least one trial")
    threshold = (n - 3) / 18
    total = 0
    tail = 0
    for _ in range(trials):
        p = rng.permutation(n)
        left = np.roll(p, 1)
        right = np.roll(p, -1)
        m = int(((p < left) & (p < right)).sum())
        total += m
        if m <= threshold:
            tail += 1
    return MinimaStats(n, trials, total / trials, tail / trials)


def _first_failure_position(order: np.ndarray, prio: np.ndarray, n: int,
                            scan_limit: int) -> int:
    """First shuffled position whose empty-state reservation loses.

    On a fresh cycle every vertex is a singleton root, so every strategy
    reserves the lower-priority endpoint of each edge; position t fails
    exactly when an earlier prefix edge reserved the same vertex. Returns
    scan_limit if no failure occurs among the first scan_limit positions.
    """
    taken = set()
    for t in range(min(scan_limit, len(order))):
        j = int(order[t])
        u, v = j, (j + 1) % n
        s = u if prio[u] < prio[v] else v
        if s in taken:
            return t
        taken.add(s)
    return scan_limit


def prefix_no_collision_prob(n: int, window: int, trials: int,
                             strategy_kind: str, rng: Rng) -> float:
    """Probability a shuffled cycle's first window is conflict-free.

    Operationally: the windowed algorithm with this window size executes
    its full first window at i=0 (no failed reservation). Tie priorities
    and edge order are re-drawn each trial.
    """
    probs = prefix_no_collision_sweep(n, [window], trials, strategy_kind, rng)
    return probs[0]


def prefix_no_collision_sweep(n: int, windows: Sequence[int], trials: int,
                              strategy_kind: str, rng: Rng) -> List[float]:
    """No-collision probability for several window sizes at once.

    Each trial's first-failure position answers every window, so the
    sweep is monotone nonincreasing in the window size by construction.
    """
    if strategy_kind not in ("size", "rank", "priority"):
        raise ParameterError(f"unknown strategy kind {strategy_kind!r}")
    for w in windows:
        if not (2 <= w <= n):
            raise ParameterError("window must be in [2, N]")
    if trials < 1:
        raise ParameterError("need at least one trial")
    limit = max(windows)
    hits = [0] * len(windows)
    for k in range(trials):
        child = rng.split(f"prefix.{k}")
        prio = child.split("prio").permutation(n)
        order = child.split("order").permutation(n)
        pos = _first_failure_position(order, prio, n, limit)
        for idx, w in enumerate(windows):
            if pos >= w:
                hits[idx] += 1
    return [h / trials for h in hits]


def maximal_window_iterations(n: int, trials: int, strategy_kind: str,
                              rng: Rng) -> List[int]:
    """Iterations of the windowed run whose window is the whole suffix.

    A fixed window of |E| always spans the entire unprocessed tail, the
    most optimistic conflict-free-prefix policy; the early-exit
    reservation scan keeps each trial linear in N.
    """
    if trials < 1:
        raise ParameterError("need at least one trial")
    base = generate("cycle", n)
    out: List[int] = []
    for k in range(trials):
        child = rng.split(f"maxwin.{k}")
        strategy = LinkingStrategy.make(strategy_kind, n, child.split("prio"))
        seq = shuffle(base, child.split("order"))
        stats = run_windowed(seq, strategy, WindowPolicy.fixed(len(seq)),
                             threads=1, scan_reservations=True)
        out.append(stats.iterations)
    return out
