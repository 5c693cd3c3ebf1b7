import math
from fractions import Fraction

import numpy as np
import pytest

from detuf import (Edge, EdgeSequence, Forest, LinkingStrategy, ParameterError,
                   Rng, collides, collides_simplified, generate, monte_carlo_pt,
                   potential, replay_process, run_random_process, shuffle,
                   simplified_p_trace, step_stats, toy_window_collisions)
from detuf.collisions import _trace_exact, _trace_fast
from detuf.parallel import WindowPolicy, run_windowed

from util import random_graph, random_strategy


def ids_forest(n, kind="size", compaction="full"):
    return Forest(n, LinkingStrategy.make(kind, n, tie_break="ids"), compaction)


class TestCollides:
    def test_fresh_triangle(self):
        f = ids_forest(3)
        assert collides(f, (0, 1), (0, 2))
        assert not collides(f, (0, 1), (1, 2))

    def test_internal_edge_never_collides(self):
        f = ids_forest(4)
        f.union(0, 1)
        assert not collides(f, (0, 1), (2, 3))
        assert not collides(f, (2, 3), (0, 1))

    def test_shared_smaller_component(self):
        # two three-vertex components and a singleton; both dashed edges
        # point at the singleton, the smaller side of each
        f = ids_forest(7)
        for a, b in [(0, 1), (1, 2), (3, 4), (4, 5)]:
            f.union(a, b)
        assert collides(f, (0, 6), (3, 6))

    def test_simplified_examples(self):
        f = ids_forest(3)
        for e1, e2 in [((0, 1), (1, 2)), ((0, 1), (0, 2)), ((1, 2), (0, 2))]:
            assert collides_simplified(f, e1, e2)
        g = ids_forest(4)
        assert not collides_simplified(g, (0, 1), (2, 3))

    def test_strict_implies_simplified(self):
        master = Rng(17)
        for k in range(25):
            child = master.split(f"imp.{k}")
            seq = shuffle(random_graph(child.split("g"), 32), child.split("o"))
            n = seq.vertex_count
            f = Forest(n, random_strategy(child.split("s"), n))
            half = len(seq) // 2
            for e in list(seq)[:half]:
                f.union(e.u, e.v)
            rest = list(seq)[half:]
            for i in range(len(rest)):
                for j in range(i + 1, len(rest)):
                    if collides(f, rest[i], rest[j]):
                        assert collides_simplified(f, rest[i], rest[j])


class TestStepStats:
    def test_fresh_triangle(self):
        f = ids_forest(3)
        edges = [Edge(0, 1), Edge(1, 2), Edge(0, 2)]
        s = step_stats(f, edges, 0, 3)
        assert s.m == [2, 1, 0]
        assert s.p_exact == Fraction(1, 3)
        assert s.colliding_pairs == 1
        assert s.component_count == 3

    def test_fresh_four_cycle(self):
        f = ids_forest(4)
        s = step_stats(f, list(generate("cycle", 4)), 0, 4)
        assert s.m == [2, 1, 1, 0]
        assert s.p_exact == Fraction(1, 6)

    def test_formula_matches_enumeration_everywhere(self):
        master = Rng(23)
        for k in range(15):
            child = master.split(f"fm.{k}")
            seq = shuffle(random_graph(child.split("g"), 20), child.split("o"))
            n, m = seq.vertex_count, len(seq)
            f = Forest(n, random_strategy(child.split("s"), n))
            edges = list(seq)
            for t in range(m):
                s = step_stats(f, edges[t:], t, m)
                a = m - t
                if a >= 2:
                    assert s.p_exact * a * (a - 1) / 2 == s.colliding_pairs
                f.union(edges[t].u, edges[t].v)

    def test_single_active_edge_p_zero(self):
        f = ids_forest(3)
        s = step_stats(f, [Edge(0, 1)], 2, 3)
        assert s.p_exact == 0


class TestPotential:
    def test_phi0_zero(self):
        for kind in ("cycle", "star"):
            seq = generate(kind, 6)
            f = ids_forest(6)
            assert potential(f, list(seq), [], len(seq)) == 0

    def test_triangle_hand_value(self):
        seq = EdgeSequence.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        tr = _trace_exact(seq, LinkingStrategy.make("size", 3, tie_break="ids"),
                          pair_enumeration=False, record_m=False)
        assert [float(x) for x in tr.phi] == [0.0, 3.0, 10.5]

    def test_potential_function_matches_trace(self):
        master = Rng(31)
        for k in range(10):
            child = master.split(f"pot.{k}")
            seq = shuffle(random_graph(child.split("g"), 16), child.split("o"))
            n, m = seq.vertex_count, len(seq)
            strat = random_strategy(child.split("s"), n)
            tr = _trace_exact(seq, strat, False, False)
            f = Forest(n, strat)
            edges = list(seq)
            for t in range(m):
                frozen = tr.frozen_ranks[:t]
                assert potential(f, edges[t:], frozen, m) == tr.phi[t]
                f.union(edges[t].u, edges[t].v)

    def test_domain_error(self):
        f = ids_forest(3)
        with pytest.raises(ParameterError):
            potential(f, [], [(1, 0), (2, 1), (3, 0)], 3)

    def test_by_size_run_bound(self):
        # Phi_{E-1} <= 4 E log2(V) (log2(E)+2) on every by_size run
        master = Rng(41)
        for k in range(20):
            child = master.split(f"bound.{k}")
            seq = random_graph(child.split("g"), 64)
            n, m = seq.vertex_count, len(seq)
            strat = LinkingStrategy.by_size(n, child.split("s"))
            tr = run_random_process(seq, strat, child.split("o"), method="exact")
            bound = 4 * m * math.log2(n) * (math.log2(m) + 2)
            assert tr.final_phi <= bound


class TestEngineAgreement:
    @pytest.mark.parametrize("kind", ["size", "rank", "priority"])
    def test_exact_vs_fast(self, kind):
        master = Rng(57)
        for gname, n, p in [("cycle", 48, None), ("star", 48, None),
                            ("path", 48, None), ("erdos_renyi", 48, 0.15),
                            ("erdos_renyi", 24, 0.5), ("complete", 12, None)]:
            child = master.split(f"{kind}.{gname}.{n}")
            seq = generate(gname, n, child.split("gen"), p)
            if len(seq) < 2:
                continue
            sh = shuffle(seq, child.split("order"))
            strat = LinkingStrategy.make(kind, n, child.split("prio"))
            ex = _trace_exact(sh, strat, pair_enumeration=True, record_m=False)
            fa = _trace_fast(sh, strat, record_steps=True)
            assert np.array_equal(ex.component_count, fa.component_count)
            assert np.array_equal(ex.colliding_pairs, fa.colliding_pairs)
            assert np.array_equal(ex.merged, fa.merged)
            assert np.array_equal(ex.frozen_rank_values, fa.frozen_rank_values)
            pe = np.array([float(x) for x in ex.p_exact])
            ph = np.array([float(x) for x in ex.phi])
            assert np.allclose(pe, fa.p_exact, rtol=1e-12, atol=0)
            assert np.allclose(ph, fa.phi, rtol=1e-9, atol=1e-9)
            assert abs(ex.sum_pt - fa.sum_pt) <= 1e-9
            assert abs(ex.final_phi - fa.final_phi) <= 1e-6 * max(1.0, ex.final_phi)


class TestRunRandomProcess:
    def test_trace_shape_and_sums(self):
        seq = generate("cycle", 12)
        strat = LinkingStrategy.by_size(12, Rng(1))
        tr = run_random_process(seq, strat, Rng(2), method="exact")
        assert len(tr.p_exact) == len(seq)
        assert tr.sum_pt == pytest.approx(float(sum(tr.p_exact)))
        steps = tr.steps()
        assert steps[0].t == 0 and steps[-1].t == len(seq) - 1

    def test_cycle_pt_lower_bound_small(self):
        # mean p_t >= (1/3) / (n-t-1) for t <= n-3 on cycles
        n, seeds = 64, 400
        seq = generate("cycle", n)
        acc = np.zeros(n)
        for s in range(seeds):
            child = Rng(600 + s)
            strat = LinkingStrategy.by_size(n, child.split("p"))
            tr = run_random_process(seq, strat, child.split("o"), method="fast")
            acc += np.asarray(tr.p_exact)
        mean = acc / seeds
        for t in range(0, n - 2):
            bound = (1 / 3) / (n - t - 1)
            se = math.sqrt(max(mean[t] * (1 - mean[t]), 1e-6) / seeds)
            assert mean[t] >= bound - 3 * se


class TestMonteCarlo:
    def test_fresh_triangle(self):
        f = ids_forest(3)
        edges = [Edge(0, 1), Edge(1, 2), Edge(0, 2)]
        est = monte_carlo_pt(f, edges, 10 ** 5, Rng(7))
        assert abs(est - 1 / 3) <= 0.01

    def test_no_collisions_gives_zero(self):
        f = ids_forest(4)
        assert monte_carlo_pt(f, [Edge(0, 1), Edge(2, 3)], 1000, Rng(1)) == 0.0

    def test_against_exact_three_sigma(self):
        master = Rng(71)
        trials = 3000
        for k in range(100):
            child = master.split(f"mc.{k}")
            seq = shuffle(random_graph(child.split("g"), 24), child.split("o"))
            n, m = seq.vertex_count, len(seq)
            f = Forest(n, random_strategy(child.split("s"), n))
            cut = int(child.integers(0, max(1, m - 2)))
            edges = list(seq)
            for e in edges[:cut]:
                f.union(e.u, e.v)
            active = edges[cut:]
            if len(active) < 2:
                continue
            s = step_stats(f, active, cut, m)
            p = float(s.p_exact)
            est = monte_carlo_pt(f, active, trials, child.split("mc"))
            sigma = math.sqrt(max(p * (1 - p), 1e-9) / trials)
            assert abs(est - p) <= max(3 * sigma, 1e-3)

    def test_parameter_errors(self):
        f = ids_forest(3)
        with pytest.raises(ParameterError):
            monte_carlo_pt(f, [Edge(0, 1)], 10, Rng(0))
        with pytest.raises(ParameterError):
            monte_carlo_pt(f, [Edge(0, 1), Edge(1, 2)], 0, Rng(0))


class TestToyWindow:
    def test_window_two_equals_adjacent_scan(self):
        master = Rng(83)
        for k in range(10):
            child = master.split(f"toy2.{k}")
            seq = shuffle(random_graph(child.split("g"), 24), child.split("o"))
            n, m = seq.vertex_count, len(seq)
            strat = random_strategy(child.split("s"), n)
            expected = 0
            f = Forest(n, strat)
            edges = list(seq)
            for i in range(m):
                if i + 1 < m and collides(f, edges[i], edges[i + 1]):
                    expected += 1
                f.union(edges[i].u, edges[i].v)
            assert toy_window_collisions(seq, 2, strat) == expected

    def test_cycle8_brute_force_recount(self):
        # independent nested-loop recount against a fixed seed
        seq = shuffle(generate("cycle", 8), Rng(12345))
        strat = LinkingStrategy.by_size(8, Rng(54321))
        window = 4
        f = Forest(8, strat)
        edges = list(seq)
        brute = 0
        for i in range(len(edges)):
            for a in range(i, min(i + window, len(edges))):
                for b in range(a + 1, min(i + window, len(edges))):
                    if collides(f, edges[a], edges[b]):
                        brute += 1
            f.union(edges[i].u, edges[i].v)
        assert toy_window_collisions(seq, window, strat) == brute

    def test_upper_bounds_parallel_failures(self):
        master = Rng(91)
        for k in range(20):
            child = master.split(f"toyub.{k}")
            seq = shuffle(random_graph(child.split("g"), 32), child.split("o"))
            n = seq.vertex_count
            strat = random_strategy(child.split("s"), n)
            window = int(child.integers(2, 9))
            toy = toy_window_collisions(seq, window, strat)
            stats = run_windowed(seq, strat, WindowPolicy.fixed(window))
            assert toy >= stats.failed_reservation_events

    def test_window_too_small(self):
        with pytest.raises(ParameterError):
            toy_window_collisions(generate("cycle", 4), 1,
                                  LinkingStrategy.make("size", 4, tie_break="ids"))


class TestSimplifiedBlowup:
    def test_simplified_matches_predicate_small(self):
        master = Rng(101)
        for k in range(8):
            child = master.split(f"simp.{k}")
            seq = shuffle(random_graph(child.split("g"), 16), child.split("o"))
            n, m = seq.vertex_count, len(seq)
            strat = random_strategy(child.split("s"), n)
            p_arr = simplified_p_trace(seq, strat)
            f = Forest(n, strat)
            edges = list(seq)
            for t in range(m):
                a = m - t
                cnt = 0
                for i in range(t, m):
                    for j in range(i + 1, m):
                        if collides_simplified(f, edges[i], edges[j]):
                            cnt += 1
                expect = cnt / (a * (a - 1) / 2) if a >= 2 else 0.0
                assert p_arr[t] == pytest.approx(expect)
                f.union(edges[t].u, edges[t].v)

    def test_er_blowup_ratio(self):
        # simplified collisions dwarf strict ones on supercritical ER graphs
        n = 2 ** 12
        ratios = []
        for s in range(3):
            child = Rng(1000 + s)
            seq = generate("erdos_renyi", n, child.split("gen"), 2.0 / n)
            strat = LinkingStrategy.by_size(n, child.split("prio"))
            sh = shuffle(seq, child.split("order"))
            strict = replay_process(sh, strat, method="fast").sum_pt
            simplified = float(simplified_p_trace(sh, strat).sum())
            ratios.append(simplified / strict)
        assert sum(ratios) / len(ratios) >= 10
