"""Compressed disjoint-set forest with pluggable linking strategies.

Alongside the compressed forest (whose paths shorten under compaction) a
*shadow* forest records the raw link structure and is never rewritten, so
uncompressed depths stay queryable after any amount of compression. The
two always induce the same partition.

Linking strategies impose a strict total order on roots: the "smaller"
root (by size, rank, or random priority, ties broken by distinct seeded
priorities) always becomes the child. Priorities may be set to vertex ids
for hand-checkable examples via ``tie_break="ids"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from .graphs import ParameterError
from .rng import Rng

STRATEGY_KINDS = ("size", "rank", "priority")
COMPACTION_MODES = ("none", "full", "one_try_splitting")


class ContractViolation(RuntimeError):
    """An operation was called outside its contract (e.g. on a non-root)."""


@dataclass(frozen=True)
class UnionOutcome:
    merged: bool
    loser_root: Optional[int] = None
    winner_root: Optional[int] = None


@dataclass(frozen=True)
class LinkingStrategy:
    """Root ordering rule plus per-vertex distinct tie-break priorities."""

    kind: str
    priorities: List[int] = field(repr=False)

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ParameterError(f"unknown strategy kind {self.kind!r}")
        if len(set(self.priorities)) != len(self.priorities):
            raise ParameterError("tie-break priorities must be pairwise distinct")

    @classmethod
    def make(cls, kind: str, n: int, rng: Optional[Rng] = None,
             tie_break: str = "random") -> "LinkingStrategy":
        """Build a strategy for an n-vertex forest.

        ``tie_break="random"`` draws a priority permutation from ``rng``;
        ``tie_break="ids"`` uses vertex ids (debug aid for hand examples).
        """
        if tie_break == "ids":
            prio = list(range(n))
        elif tie_break == "random":
            if rng is None:
                raise ParameterError("random tie-break needs an rng")
            prio = rng.permutation(n).tolist()
        else:
            raise ParameterError(f"unknown tie_break {tie_break!r}")
        return cls(kind, prio)

    @classmethod
    def by_size(cls, n, rng=None, tie_break="random"):
        return cls.make("size", n, rng, tie_break)

    @classmethod
    def by_rank(cls, n, rng=None, tie_break="random"):
        return cls.make("rank", n, rng, tie_break)

    @classmethod
    def by_random_priority(cls, n, rng=None, tie_break="random"):
        return cls.make("priority", n, rng, tie_break)


class Forest:
    """Disjoint-set forest over vertices ``0 .. n-1``, single writer."""

    __slots__ = ("n", "parent", "shadow_parent", "size", "rank",
                 "strategy", "compaction", "_components")

    def __init__(self, n: int, strategy: LinkingStrategy, compaction: str = "full"):
        if n < 1:
            raise ParameterError("forest needs n >= 1")
        if compaction not in COMPACTION_MODES:
            raise ParameterError(f"unknown compaction mode {compaction!r}")
        if len(strategy.priorities) < n:
            raise ParameterError("strategy priorities shorter than vertex count")
        self.n = n
        self.parent = list(range(n))
        self.shadow_parent = list(range(n))
        self.size = [1] * n
        self.rank = [0] * n
        self.strategy = strategy
        self.compaction = compaction
        self._components = n

    @property
    def component_count(self) -> int:
        return self._components

    def _check_vertex(self, u: int) -> None:
        if not (0 <= u < self.n):
            raise ParameterError(f"vertex {u} out of range [0, {self.n})")

    def root(self, u: int) -> int:
        """Root of u's component; read-only (no compaction)."""
        parent = self.parent
        while parent[u] != u:
            u = parent[u]
        return u

    def find_root(self, u: int) -> int:
        """Root of u's component, applying the configured compaction.

        Never changes the partition or the shadow forest.
        """
        self._check_vertex(u)
        parent = self.parent
        if self.compaction == "one_try_splitting":
            # each visited node is re-pointed at its grandparent, once
            while parent[u] != u:
                nxt = parent[u]
                parent[u] = parent[nxt]
                u = nxt
            return u
        r = u
        while parent[r] != r:
            r = parent[r]
        if self.compaction == "full":
            while parent[u] != r:
                parent[u], u = r, parent[u]
        return r

    def _sort_key(self, r: int):
        if self.strategy.kind == "size":
            return (self.size[r], self.strategy.priorities[r])
        if self.strategy.kind == "rank":
            return (self.rank[r], self.strategy.priorities[r])
        return (self.strategy.priorities[r],)

    def compare_roots(self, a: int, b: int) -> int:
        """Strict total order on roots: negative if a is smaller, positive if b.

        The "smaller" root per this order is the one that loses a link.
        """
        if self.parent[a] != a or self.parent[b] != b:
            raise ContractViolation("compare_roots needs root arguments")
        if a == b:
            raise ContractViolation("compare_roots needs distinct roots")
        return -1 if self._sort_key(a) < self._sort_key(b) else 1

    def smaller_root(self, a: int, b: int) -> int:
        return a if self.compare_roots(a, b) < 0 else b

    def link(self, loser: int, winner: int) -> None:
        """Attach root ``loser`` under root ``winner`` (both must be roots).

        Updates compressed and shadow forests, size, and rank (rank grows
        only on ties, the standard union-by-rank rule).
        """
        if self.parent[loser] != loser or self.parent[winner] != winner:
            raise ContractViolation("link needs root arguments")
        if loser == winner:
            raise ContractViolation("link needs distinct roots")
        self.parent[loser] = winner
        self.shadow_parent[loser] = winner
        self.size[winner] += self.size[loser]
        if self.rank[winner] == self.rank[loser]:
            self.rank[winner] += 1
        self._components -= 1

    def union(self, u: int, v: int) -> UnionOutcome:
        self._check_vertex(u)
        self._check_vertex(v)
        ru = self.find_root(u)
        rv = self.find_root(v)
        if ru == rv:
            return UnionOutcome(False)
        if self.compare_roots(ru, rv) < 0:
            loser, winner = ru, rv
        else:
            loser, winner = rv, ru
        self.link(loser, winner)
        return UnionOutcome(True, loser, winner)

    def uncompressed_depth(self, u: int) -> int:
        """Path length from u to its root in the shadow forest."""
        self._check_vertex(u)
        shadow = self.shadow_parent
        d = 0
        while shadow[u] != u:
            u = shadow[u]
            d += 1
        return d

    def connected(self, u: int, v: int) -> bool:
        return self.root(u) == self.root(v)

    def component_size(self, u: int) -> int:
        return self.size[self.root(u)]

    def roots(self) -> List[int]:
        return [v for v in range(self.n) if self.parent[v] == v]

    def partition(self) -> List[List[int]]:
        """Components as vertex lists keyed by root, for oracle comparisons."""
        groups: dict = {}
        for v in range(self.n):
            groups.setdefault(self.root(v), []).append(v)
        return [groups[r] for r in sorted(groups)]

    def max_uncompressed_depth(self) -> int:
        return max(self.uncompressed_depth(v) for v in range(self.n))


def new_forest(n: int, strategy: LinkingStrategy, compaction: str = "full") -> Forest:
    return Forest(n, strategy, compaction)
