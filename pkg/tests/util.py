"""Shared independent oracles for the test suite.

These deliberately avoid the library's own data structures: connectivity
comes from breadth-first search over plain adjacency lists, and the MST
oracle is a self-contained Kruskal with its own tiny union-find.
"""

from collections import deque
from typing import List, Sequence, Set, Tuple

from detuf import EdgeSequence, LinkingStrategy, Rng, generate


def bfs_partition(n: int, edges: Sequence[Tuple[int, int]]) -> List[Set[int]]:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    parts = []
    for s in range(n):
        if seen[s]:
            continue
        comp = set()
        queue = deque([s])
        seen[s] = True
        while queue:
            x = queue.popleft()
            comp.add(x)
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
        parts.append(comp)
    return parts


def bfs_component_count(n: int, edges) -> int:
    return len(bfs_partition(n, edges))


def partition_of_forest(f) -> List[Set[int]]:
    groups = {}
    for v in range(f.n):
        groups.setdefault(f.root(v), set()).add(v)
    return sorted(groups.values(), key=lambda s: min(s))


def same_partition(f, n: int, edges) -> bool:
    ours = sorted(partition_of_forest(f), key=lambda s: min(s))
    theirs = sorted(bfs_partition(n, edges), key=lambda s: min(s))
    return ours == theirs


def kruskal_oracle(seq: EdgeSequence) -> Tuple[List[Tuple[int, int]], float]:
    """Sequential Kruskal with its own union-find; edges as sorted pairs."""
    order = sorted(range(len(seq)), key=lambda i: seq.w[i])
    parent = list(range(seq.vertex_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    picked = []
    total = 0.0
    for i in order:
        u, v = int(seq.u[i]), int(seq.v[i])
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            picked.append((min(u, v), max(u, v)))
            total += float(seq.w[i])
    return sorted(picked), total


def random_graph(rng: Rng, n_max: int = 64, families=("cycle", "star", "path",
                                                      "erdos_renyi")) -> EdgeSequence:
    """A small random graph from a mixed family corpus."""
    fam = families[int(rng.integers(0, len(families)))]
    n = int(rng.integers(4, n_max + 1))
    if fam == "erdos_renyi":
        p = min(1.0, float(rng.random()) * 0.2 + 2.0 / n)
        seq = generate(fam, n, rng.split("gen"), p)
        if len(seq) == 0:
            return generate("path", n)
        return seq
    return generate(fam, n)


def random_strategy(rng: Rng, n: int) -> LinkingStrategy:
    kind = ("size", "rank", "priority")[int(rng.integers(0, 3))]
    return LinkingStrategy.make(kind, n, rng.split("prio"))
