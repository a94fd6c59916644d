"""Acceptance criteria, one test each, exact checks with wall-clock bounds.

Run with ``pytest tests/test_acceptance.py -s`` to see each PASS/FAIL line as
it happens; the lines are repeated in the terminal summary either way.
"""

import math
import random
import time
from contextlib import contextmanager

from bithresh.attractors import enumerate_phase_space, orbit_from
from bithresh.dynamics import System, ThresholdAssignment, encode_state
from bithresh.graphs import circle_graph, random_tree, root_levels, x_tree
from bithresh.kappa import check_parent_copy, level_order_permutation
from bithresh.potential import descent_trace
from bithresh.verify import (DEFAULT_SEED, circle_witness_state, family_system,
                             random_low_delta_system, random_symmetric_weighted, suite_bands,
                             suite_kappa, union_system)

from conftest import ACCEPTANCE_LINES


@contextmanager
def criterion(number, title, bound):
    """Time the body; ``state['ok']`` must be set True by the body for a pass."""
    state = {"ok": False, "detail": ""}
    start = time.perf_counter()
    try:
        yield state
    finally:
        elapsed = time.perf_counter() - start
        within = bound is None or elapsed < bound
        verdict = "PASS" if state["ok"] and within else "FAIL"
        limit = "" if bound is None else f" < {bound:g}s"
        line = f"[{verdict}] {number:>2}. {title}: {state['detail']} ({elapsed:.2f}s{limit})"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert state["ok"], state["detail"]
    assert within, f"took {elapsed:.2f}s, bound {bound}s"


# ---------------------------------------------------------------- shared systems


def systems_c1():
    c4 = circle_graph(4)
    return [System.uniform(c4, 1, 3), System.uniform(c4, 1, 3, (1, 2, 3, 4))]


def systems_c2():
    rng = random.Random(DEFAULT_SEED)
    return [random_symmetric_weighted(rng.randint(1, 12), rng) for _ in range(200)]


def systems_c3():
    rng = random.Random(DEFAULT_SEED + 1)
    return [random_low_delta_system(rng.randint(1, 12), rng) for _ in range(200)]


def systems_c4():
    return [(System.uniform(circle_graph(n), 1, 3, range(1, n + 1)), circle_witness_state(n))
            for n in range(4, 17)]


def system_c5():
    s1 = System.uniform(circle_graph(5), 1, 3, range(1, 6))
    s2 = System.uniform(circle_graph(6), 1, 3, range(1, 7))
    system, bu = union_system(s1, s2)
    return system, bu, circle_witness_state(5) | (circle_witness_state(6) << 5), (s1, s2)


def systems_c6():
    out = [(fam, c, *family_system(fam, c))
           for fam in ("htree", "ytree", "xtree") for c in range(3, 9)]
    out.append(("xtree", 2, System.uniform(x_tree(5), 1, 3, range(1, 6)),
                encode_state((0, 1, 1, 0, 0))))
    return out


def systems_c7(perms=5):
    """(tree system with degree rule, root, [level order, sampled orders...])."""
    rng = random.Random(DEFAULT_SEED + 2)
    out = []
    for _ in range(50):
        tree = random_tree(rng.randint(1, 10), rng)
        s = System(tree, ThresholdAssignment.degree_rule(tree))
        root = rng.randint(1, tree.n)
        orders = [level_order_permutation(root_levels(tree, root))]
        for _ in range(perms):
            pi = list(tree.vertices)
            rng.shuffle(pi)
            orders.append(tuple(pi))
        out.append((s, root, orders))
    return out


# ---------------------------------------------------------------- criteria


def test_c01_example():
    with criterion(1, "Circ_4 example", 1.0) as st:
        sync, seq = systems_c1()
        x = encode_state((1, 0, 0, 1))
        fx, fpx = sync.step(x), seq.step(x)
        sync_max = enumerate_phase_space(sync).max_cycle_length()
        seq_lengths = {a.length for a in enumerate_phase_space(seq).attractors}
        st["ok"] = (fx == encode_state((0, 1, 1, 0)) and fpx == encode_state((0, 0, 1, 0))
                    and sync_max == 2 and 3 in seq_lengths)
        st["detail"] = f"sync max cycle {sync_max}, seq cycle lengths {sorted(seq_lengths)}"


def test_c02_synchronous_period_two():
    with criterion(2, "symmetric synchronous systems have period <= 2", 60.0) as st:
        worst, states = 0, 0
        for ws in systems_c2():
            portrait = enumerate_phase_space(ws)
            worst = max(worst, portrait.max_cycle_length())
            states += 1 << ws.n
        st["ok"] = worst <= 2
        st["detail"] = f"200 systems, {states} states, max period {worst}"


def test_c03_low_delta_fixed_points():
    with criterion(3, "delta <= 1 gives only fixed points, potential descends", 60.0) as st:
        rng = random.Random(DEFAULT_SEED + 3)
        non_fixed = flips = bad = 0
        for s in systems_c3():
            non_fixed += sum(1 for a in enumerate_phase_space(s).attractors if a.length != 1)
            for _ in range(16):
                for f in descent_trace(s, s.scheme.pi, rng.getrandbits(s.n)):
                    flips += 1
                    bound = s.thresholds.delta(f.vertex) - 2
                    bad += not (f.delta_p <= bound < 0)
        st["ok"] = non_fixed == 0 and bad == 0 and flips > 0
        st["detail"] = f"{non_fixed} non-fixed attractors, {bad}/{flips} bad flips"


def test_c04_circle_witness():
    with criterion(4, "Circ_n witness on a cycle of length n-1, n=4..16", 5.0) as st:
        bad = [n for n, (s, x) in zip(range(4, 17), systems_c4())
               if (o := orbit_from(s, x)).transient != 0 or o.period != n - 1]
        st["ok"] = not bad
        st["detail"] = f"failures at n={bad}" if bad else "13 circles"


def test_c05_bridged_union():
    with criterion(5, "Circ_5 + Circ_6 bridged union", 5.0) as st:
        system, bu, x, parts = system_c5()
        c = [orbit_from(s, circle_witness_state(s.n)).period for s in parts]
        o = orbit_from(system, x)
        st["ok"] = c == [4, 5] and o.transient == 0 and o.period == math.lcm(*c) == 20
        st["detail"] = f"component cycles {c}, union period {o.period}"


def test_c06_tree_families():
    with criterion(6, "H/Y/X tree cycles of length c=3..8, X_5 2-cycle", 10.0) as st:
        bad = []
        for fam, c, s, x in systems_c6():
            o = orbit_from(s, x)
            if o.period != c or (fam, c) == ("xtree", 2) and o.transient != 0:
                bad.append((fam, c, o.period))
        st["ok"] = not bad
        st["detail"] = f"failures {bad}" if bad else "19 systems"


def test_c07_degree_rule_trees():
    with criterion(7, "parent copy and fixed points on degree-rule trees", 30.0) as st:
        copy_fail = non_fixed = states = 0
        for s, root, orders in systems_c7():
            for x in range(1 << s.n):
                states += 1
                copy_fail += not check_parent_copy(s, root, x).holds
            for pi in orders:
                non_fixed += sum(1 for a in enumerate_phase_space(s.with_scheme(pi)).attractors
                                 if a.length != 1)
        st["ok"] = copy_fail == 0 and non_fixed == 0
        st["detail"] = (f"{states} states, {copy_fail} copy failures, "
                        f"{non_fixed} non-fixed attractors")


def test_c08_row_machinery():
    with criterion(8, "partition/band/L/psi checks on 10^4 rows", 30.0) as st:
        res = suite_bands(samples=10_000, seed=DEFAULT_SEED)
        failed = [c.label for c in res.checks if not c.ok]
        st["ok"] = res.passed
        st["detail"] = f"failed: {failed}" if failed else f"{len(res.checks)} checks"


def test_c09_kappa():
    with criterion(9, "kappa(tree) = 1, n <= 8; all orders cycle-equivalent, n <= 6", 120.0) as st:
        res = suite_kappa(n_max=8, n_max_perm=6, seed=DEFAULT_SEED)
        failed = [c.label for c in res.checks if not c.ok]
        st["ok"] = res.passed
        st["detail"] = f"failed: {failed}" if failed else f"{len(res.checks)} checks"


def _all_systems():
    yield from systems_c1()
    yield from systems_c2()
    yield from systems_c3()
    yield from (s for s, _ in systems_c4() if s.n <= 12)
    system, *_ = system_c5()
    yield system
    yield from (s for *_, s, _ in systems_c6() if s.n <= 12)
    for s, _, orders in systems_c7():
        yield from (s.with_scheme(pi) for pi in orders)


def test_c10_oracle_equivalence():
    with criterion(10, "orbit_from agrees with phase-space enumeration", None) as st:
        systems = mismatches = states = 0
        for s in _all_systems():
            if s.n > 12:
                continue
            systems += 1
            portrait = enumerate_phase_space(s)
            for x in range(1 << s.n):
                states += 1
                o = orbit_from(s, x, low_memory=bool(x & 1))
                if (o.transient, o.period) != (int(portrait.transient[x]), portrait.period_of(x)):
                    mismatches += 1
        st["ok"] = mismatches == 0 and systems > 0
        st["detail"] = f"{systems} systems, {states} states, {mismatches} mismatches"
