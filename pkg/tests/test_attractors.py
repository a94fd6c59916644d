import random
import re
from collections import Counter

import numpy as np
import pytest

from bithresh.attractors import (check_theorem1, cycle_equivalent,
                                 cycle_length_multiset, enumerate_phase_space, orbit_from,
                                 periodic_table)
from bithresh.dynamics import (System, ThresholdAssignment, UpdateScheme, WeightedSystem,
                               encode_state, parse_state)
from bithresh.errors import InvalidInput, ResourceLimit
from bithresh.graphs import Graph, circle_graph, random_graph, random_tree
from bithresh.verify import random_symmetric_weighted

C4_SYNC = System.uniform(circle_graph(4), 1, 3)
C4_SEQ = C4_SYNC.with_scheme((1, 2, 3, 4))


def circ_seq(n):
    return System.uniform(circle_graph(n), 1, 3, range(1, n + 1))


def random_system(rng, n):
    g = random_graph(n, rng.uniform(0.2, 0.7), rng)
    kup = tuple(rng.randint(0, d + 2) for d in g.degrees())
    kdown = tuple(rng.randint(0, d + 2) for d in g.degrees())
    pi = None
    if rng.random() < 0.6:
        pi = list(range(1, n + 1))
        rng.shuffle(pi)
        pi = tuple(pi)
    return System(g, ThresholdAssignment(kup, kdown), UpdateScheme(pi))


class TestOrbit:
    def test_example_three_cycle(self):
        orbit = orbit_from(C4_SEQ, encode_state((1, 0, 0, 1)))
        assert orbit.transient == 0
        assert orbit.period == 3
        assert orbit.cycle == tuple(encode_state(b) for b in
                                    [(1, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0)])

    def test_zero_state(self):
        orbit = orbit_from(C4_SEQ, 0)
        assert (orbit.transient, orbit.period) == (0, 1)

    def test_circ6(self):
        assert orbit_from(circ_seq(6), parse_state("000010")).period == 5

    def test_brent_matches_table(self, rng):
        for _ in range(300):
            s = random_system(rng, rng.randint(1, 14))
            x = rng.getrandbits(s.n)
            a = orbit_from(s, x)
            b = orbit_from(s, x, low_memory=True)
            assert (a.transient, a.period) == (b.transient, b.period)
            assert set(a.cycle) == set(b.cycle)
            assert a.cycle[0] == b.cycle[0]

    def test_orbit_invariants(self, rng):
        for _ in range(100):
            s = random_system(rng, rng.randint(1, 12))
            x = rng.getrandbits(s.n)
            o = orbit_from(s, x)
            y = x
            for _ in range(o.transient):
                y = s.step(y)
            assert y == o.cycle[0]
            for r in range(1, o.period):
                y = s.step(y)
                assert y != o.cycle[0]
            assert s.step(y) == o.cycle[0]
            # minimal transient: the state one step earlier is not on the cycle
            if o.transient:
                z = x
                for _ in range(o.transient - 1):
                    z = s.step(z)
                assert z not in o.cycle


class TestPhaseSpace:
    def test_example_sync_max_two(self):
        assert enumerate_phase_space(C4_SYNC).max_cycle_length() == 2

    def test_example_seq_has_three(self):
        assert enumerate_phase_space(C4_SEQ).max_cycle_length() == 3

    def test_single_vertex(self):
        s = System.uniform(Graph(1), 1, 1)
        portrait = enumerate_phase_space(s)
        assert [(a.representative, a.length, a.basin_size) for a in portrait.attractors] == \
            [(0, 1, 1), (1, 1, 1)]

    def test_cap(self):
        with pytest.raises(ResourceLimit, match="cap of 5"):
            enumerate_phase_space(circ_seq(6), cap=5)

    def test_all_on(self):
        g = random_graph(8, 0.5, random.Random(3))
        s = System.uniform(g, 0, 0)
        portrait = enumerate_phase_space(s)
        assert len(portrait.attractors) == 1
        a = portrait.attractors[0]
        assert (a.representative, a.length, a.basin_size) == (255, 1, 256)
        assert cycle_length_multiset(s) == Counter({1: 1})

    def test_multiset_circ5(self):
        assert 4 in cycle_length_multiset(circ_seq(5))

    def test_sync_multiset_bounded_by_two(self):
        assert max(cycle_length_multiset(C4_SYNC)) <= 2

    def test_decomposition_invariants(self, rng):
        for _ in range(40):
            s = random_system(rng, rng.randint(1, 11))
            p = enumerate_phase_space(s)
            assert sum(a.basin_size for a in p.attractors) == 1 << s.n
            reps = [a.representative for a in p.attractors]
            assert reps == sorted(reps)
            seen = set()
            for a in p.attractors:
                cyc = p.cycle(a.representative)
                assert len(cyc) == a.length
                assert min(cyc) == a.representative
                assert not seen & set(cyc)
                seen |= set(cyc)
                assert all(int(p.successor[c]) in cyc for c in cyc)
            assert seen == set(np.flatnonzero(p.periodic).tolist())

    def test_orbit_oracle_equivalence(self, rng):
        for _ in range(40):
            s = random_system(rng, rng.randint(1, 10))
            p = enumerate_phase_space(s)
            for x in range(1 << s.n):
                o = orbit_from(s, x)
                assert o.transient == int(p.transient[x])
                assert o.period == p.period_of(x)
                assert min(o.cycle) == int(p.representative[x])

    def test_deterministic_exports(self):
        s = random_system(random.Random(9), 9)
        a = enumerate_phase_space(s, workers=1)
        b = enumerate_phase_space(s, workers=3)
        assert a.to_dot() == b.to_dot()
        assert a.to_csv() == b.to_csv()

    def test_dot_shape(self):
        dot = enumerate_phase_space(C4_SEQ).to_dot()
        assert dot.startswith("digraph")
        assert len(re.findall(r"->", dot)) == 16
        assert len(re.findall(r'^  "[01]{4}";$', dot, re.M)) == 16
        assert '"1001" -> "0010"' in dot

    def test_csv(self):
        csv = enumerate_phase_space(C4_SEQ).to_csv().splitlines()
        assert csv[0] == "attractor_id,length,representative,basin_size"
        assert sorted(int(r.split(",")[1]) for r in csv[1:]) == [1, 1, 3, 3]

    def test_larger_enumeration(self):
        s = circ_seq(16)
        p = enumerate_phase_space(s)
        assert p.max_cycle_length() == 15
        assert int(p.transient.max()) >= 0
        assert sum(a.basin_size for a in p.attractors) == 1 << 16


class TestPeriodicTable:
    def test_fixed_point(self):
        t = periodic_table(C4_SEQ, 0)
        assert t.period == 1 and set(t.gammas) == {1}

    def test_sync_two_cycle(self):
        t = periodic_table(C4_SYNC, encode_state((1, 0, 0, 1)))
        assert t.period == 2
        assert set(t.gammas) <= {1, 2}

    def test_circ6_rows(self):
        t = periodic_table(circ_seq(6), parse_state("000010"))
        assert t.period == 5
        assert t.gammas == (5,) * 6
        assert all(sum(r) == 1 for r in t.rows)

    def test_columns_are_successive_states(self):
        s = circ_seq(7)
        t = periodic_table(s, parse_state("0000010"))
        for l in range(t.period):
            assert s.step(t.column(l)) == t.column(l + 1)
        for row, g in zip(t.rows, t.gammas):
            assert t.period % g == 0
            assert all(row[(l + g) % t.period] == row[l] for l in range(t.period))


class TestPeriodTwo:
    def test_random_n10(self):
        rng = random.Random(5)
        for _ in range(5):
            report = check_theorem1(random_symmetric_weighted(10, rng))
            assert report.exhaustive and report.states_checked == 1024
            assert report.max_period <= 2 and report.passed

    def test_single_vertex(self):
        report = check_theorem1(WeightedSystem([[2]], [1], [3]))
        assert report.max_period <= 2

    def test_sampled_mode(self):
        rng = random.Random(8)
        report = check_theorem1(random_symmetric_weighted(14, rng), exhaustive_cap=10, samples=200)
        assert not report.exhaustive and report.states_checked == 200 and report.passed

    def test_refuses_asymmetric(self):
        ws = WeightedSystem([[0, 1], [0, 0]], [1, 1], allow_asymmetric=True)
        with pytest.raises(InvalidInput):
            check_theorem1(ws)

    def test_asymmetric_can_exceed_two(self):
        rng = random.Random(11)
        found = None
        for _ in range(500):
            n = rng.randint(2, 5)
            a = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
            ws = WeightedSystem(a, [rng.randint(-2, 2) for _ in range(n)],
                                [rng.randint(-2, 2) for _ in range(n)], allow_asymmetric=True)
            report = check_theorem1(ws, allow_asymmetric=True)
            if report.max_period > 2:
                found = report
                break
        assert found is not None
        assert not found.applicable and found.violations


class TestCycleEquivalence:
    def test_self(self):
        assert cycle_equivalent(C4_SEQ, C4_SEQ)

    def test_sync_vs_seq(self):
        assert not cycle_equivalent(C4_SEQ, C4_SYNC)

    def test_tree_two_orders(self):
        g = random_tree(7, random.Random(2))
        s = System.uniform(g, 1, 3)
        assert cycle_equivalent(s.with_scheme(range(1, 8)), s.with_scheme(range(7, 0, -1)))

    def test_size_mismatch(self):
        with pytest.raises(InvalidInput):
            cycle_equivalent(C4_SEQ, circ_seq(5))
