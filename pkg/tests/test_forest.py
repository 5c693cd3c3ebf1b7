import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detuf import (ContractViolation, Forest, LinkingStrategy, ParameterError,
                   Rng, generate, new_forest, shuffle)

from util import random_graph, random_strategy, same_partition


def ids_strategy(n, kind="size"):
    return LinkingStrategy.make(kind, n, tie_break="ids")


class TestNewForest:
    def test_fresh_parents(self):
        f = new_forest(3, ids_strategy(3))
        assert f.parent == [0, 1, 2]
        assert f.shadow_parent == [0, 1, 2]

    def test_component_count(self):
        for n in (1, 2, 17):
            assert new_forest(n, ids_strategy(n)).component_count == n

    def test_singleton(self):
        assert new_forest(1, ids_strategy(1)).find_root(0) == 0

    def test_rejects_zero(self):
        with pytest.raises(ParameterError):
            new_forest(0, ids_strategy(1))

    def test_fresh_sizes_ranks_depths(self):
        f = new_forest(5, ids_strategy(5))
        assert f.size == [1] * 5 and f.rank == [0] * 5
        assert all(f.uncompressed_depth(v) == 0 for v in range(5))


class TestFindRoot:
    def test_fresh(self):
        f = new_forest(8, ids_strategy(8))
        assert f.find_root(5) == 5

    def test_lower_id_links_under_higher(self):
        f = new_forest(2, ids_strategy(2))
        f.union(0, 1)
        assert f.find_root(0) == 1

    def test_full_compaction_relinks(self):
        f = new_forest(6, ids_strategy(6), compaction="full")
        for a, b in [(0, 1), (1, 2), (2, 3)]:
            f.union(a, b)
        r = f.find_root(0)
        assert f.parent[0] == r

    def test_one_try_splitting_grandparents(self):
        f = new_forest(6, ids_strategy(6), compaction="one_try_splitting")
        # hand-build a path 0 -> 1 -> 2 -> 3 in both forests
        for v in range(3):
            f.parent[v] = v + 1
            f.shadow_parent[v] = v + 1
        assert f.find_root(0) == 3
        assert f.parent[0] == 2  # skipped one level
        assert f.shadow_parent[0] == 1  # shadow untouched

    def test_out_of_range(self):
        f = new_forest(3, ids_strategy(3))
        with pytest.raises(ParameterError):
            f.find_root(3)

    def test_idempotent(self):
        f = new_forest(16, ids_strategy(16))
        rng = Rng(3)
        for _ in range(20):
            f.union(int(rng.integers(0, 16)), int(rng.integers(0, 16)) )
        for v in range(16):
            assert f.find_root(f.find_root(v)) == f.find_root(v)


class TestCompareRoots:
    def test_smaller_size_loses(self):
        f = new_forest(7, ids_strategy(7))
        f.union(0, 1)            # {0,1} rooted at 1
        for a, b in [(2, 3), (3, 4), (4, 5)]:
            f.union(a, b)        # {2..5} rooted somewhere, size 4
        small, big = f.find_root(0), f.find_root(2)
        assert f.compare_roots(small, big) < 0
        assert f.smaller_root(small, big) == small

    def test_tie_broken_by_priority(self):
        st_ = LinkingStrategy("size", [3, 1, 2])
        f = Forest(3, st_)
        assert f.compare_roots(1, 0) < 0  # priority 1 < 3
        assert f.smaller_root(0, 2) == 2

    def test_non_root_rejected(self):
        f = new_forest(3, ids_strategy(3))
        f.union(0, 1)
        with pytest.raises(ContractViolation):
            f.compare_roots(0, 2)  # 0 is no longer a root

    def test_antisymmetry_exhaustive(self):
        master = Rng(99)
        for k in range(20):
            child = master.split(f"anti.{k}")
            seq = random_graph(child.split("g"), 24)
            n = seq.vertex_count
            f = Forest(n, random_strategy(child.split("s"), n))
            order = shuffle(seq, child.split("o"))
            for e in list(order)[: len(order) // 2]:
                f.union(e.u, e.v)
            roots = f.roots()
            for a in roots:
                for b in roots:
                    if a != b:
                        assert f.compare_roots(a, b) == -f.compare_roots(b, a)


class TestUnion:
    def test_triangle_hand_simulation(self):
        f = new_forest(3, ids_strategy(3))
        o1 = f.union(0, 1)
        o2 = f.union(1, 2)
        o3 = f.union(0, 2)
        assert (o1.merged, o2.merged, o3.merged) == (True, True, False)
        assert o3.loser_root is None and o3.winner_root is None
        assert f.find_root(0) == f.find_root(2) == 1
        assert [f.uncompressed_depth(v) for v in range(3)] == [1, 0, 1]

    def test_noop_union_leaves_parents(self):
        f = new_forest(4, ids_strategy(4))
        f.union(0, 1)
        before = list(f.parent)
        out = f.union(0, 1)
        assert not out.merged and f.parent == before

    def test_out_of_range(self):
        f = new_forest(3, ids_strategy(3))
        with pytest.raises(ParameterError):
            f.union(0, 9)

    def test_size_bookkeeping(self):
        master = Rng(5)
        for k in range(20):
            child = master.split(f"size.{k}")
            seq = random_graph(child.split("g"), 32)
            n = seq.vertex_count
            f = Forest(n, LinkingStrategy.by_size(n, child.split("s")))
            for e in shuffle(seq, child.split("o")):
                f.union(e.u, e.v)
            for r in f.roots():
                members = [v for v in range(n) if f.root(v) == r]
                assert f.size[r] == len(members)


class TestPartitionOracle:
    def test_bfs_equivalence_over_corpus(self):
        # partition after every prefix equals BFS connectivity, and the
        # size/rank depth bounds hold at the end, over 200 sequences
        master = Rng(77)
        for k in range(200):
            child = master.split(f"bfs.{k}")
            seq = shuffle(random_graph(child.split("g"), 64), child.split("o"))
            n = seq.vertex_count
            f = Forest(n, random_strategy(child.split("s"), n))
            inserted = []
            for e in seq:
                f.union(e.u, e.v)
                inserted.append((e.u, e.v))
                assert same_partition(f, n, inserted)


class TestDepthBounds:
    def test_size_and_rank_log_bounds(self):
        master = Rng(77)  # same corpus as the partition oracle
        for k in range(200):
            child = master.split(f"bfs.{k}")
            seq = shuffle(random_graph(child.split("g"), 64), child.split("o"))
            n = seq.vertex_count
            for kind in ("size", "rank"):
                f = Forest(n, LinkingStrategy.make(kind, n, child.split(kind)))
                for e in seq:
                    f.union(e.u, e.v)
                for v in range(n):
                    d = f.uncompressed_depth(v)
                    if kind == "size":
                        assert d <= math.log2(f.component_size(v))
                    else:
                        assert d <= f.rank[f.root(v)]
                        assert d <= math.log2(n) + 1e-9

    def test_star_size_depth(self):
        # by_size on a star keeps depth at 1 after the first merge
        n = 33
        f = Forest(n, LinkingStrategy.by_size(n, Rng(4)))
        for e in generate("star", n):
            f.union(e.u, e.v)
        assert f.max_uncompressed_depth() <= math.floor(math.log2(n))


class TestCompactionTransparency:
    def test_outcomes_and_shadow_identical(self):
        master = Rng(13)
        for k in range(25):
            child = master.split(f"compaction.{k}")
            seq = shuffle(random_graph(child.split("g"), 48), child.split("o"))
            n = seq.vertex_count
            strat = random_strategy(child.split("s"), n)
            outcomes, shadows = [], []
            for mode in ("none", "full", "one_try_splitting"):
                f = Forest(n, strat, compaction=mode)
                outcomes.append([f.union(e.u, e.v) for e in seq])
                shadows.append(list(f.shadow_parent))
            assert outcomes[0] == outcomes[1] == outcomes[2]
            assert shadows[0] == shadows[1] == shadows[2]


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 40), st.integers(0, 2 ** 32))
def test_union_depths_never_negative_and_partition_refines(n, seed):
    rng = Rng(seed)
    f = Forest(n, LinkingStrategy.by_size(n, rng.split("s")))
    for _ in range(n):
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        if u != v:
            f.union(u, v)
    sizes = [f.component_size(v) for v in range(n)]
    assert sum(1 for v in range(n) if f.root(v) == v) == f.component_count
    assert all(s >= 1 for s in sizes)
