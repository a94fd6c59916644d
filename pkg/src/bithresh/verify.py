"""Seeded verification suites behind ``bithresh verify``.

Each suite returns a :class:`SuiteResult` whose ``passed`` flag is the
conjunction of its individual checks.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import partial

import networkx as nx

from .attractors import check_theorem1, enumerate_phase_space, cycle_length_multiset, orbit_from
from .dynamics import System, ThresholdAssignment, UpdateScheme, WeightedSystem, encode_state
from .errors import InvalidParameter
from .graphs import (Graph, bridge_union, circle_graph, h_tree, random_graph, random_tree,
                     root_levels, x_tree, y_tree)
from .kappa import check_parent_copy, kappa_classes, level_order_permutation
from .potential import descent_trace
from .proofcheck import (band_of, bands, build_partition, check_band_lemma, classify_types,
                         l_operator, psi, psi_telescoped, row_gamma, support)

DEFAULT_SEED = 20111


@dataclass
class Check:
    label: str
    ok: bool
    detail: str = ""


@dataclass
class SuiteResult:
    name: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, label: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(label, bool(ok), detail))

    def to_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed,
                "checks": [asdict(c) for c in self.checks]}


# ---------------------------------------------------------------- generators


def circle_witness_state(n: int) -> int:
    """(0, ..., 0, 1, 0): a single 1 at vertex n-1."""
    return 1 << (n - 2)


def family_system(family: str, c: int) -> tuple[System, int]:
    """Tree family with a length-``c`` orbit, thresholds (1, 3), identity order, and its start state."""
    if family == "htree":
        n = 4 * c - 6
        graph, eta = h_tree(n), c - 1
        ones = range(n // 2 + 1, n - eta + 2)
    elif family == "ytree":
        n = 3 * c - 2
        graph, eta = y_tree(n), c
        ones = range(eta, 2 * eta - 1)
    elif family == "xtree":
        n = 4 * c - 3
        graph, eta = x_tree(n), c
        ones = (2, 3) if c == 2 else range(eta, 2 * eta - 1)
    else:
        raise InvalidParameter(f"unknown tree family {family!r}")
    system = System.uniform(graph, 1, 3, range(1, n + 1))
    return system, sum(1 << (v - 1) for v in ones)


def random_symmetric_weighted(n: int, rng: random.Random, weight: int = 3) -> WeightedSystem:
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            a[i][j] = a[j][i] = rng.randint(-weight, weight)
    span = weight * n
    kup = [rng.randint(-span, span) for _ in range(n)]
    kdown = [rng.randint(-span, span) for _ in range(n)]
    return WeightedSystem(a, kup, kdown)


def random_low_delta_system(n: int, rng: random.Random, p: float | None = None) -> System:
    """Random graph, per-vertex thresholds with kdown - kup <= 1, random permutation."""
    graph = random_graph(n, rng.uniform(0.2, 0.8) if p is None else p, rng)
    kup, kdown = [], []
    for d in graph.degrees():
        up = rng.randint(0, d + 2)
        kup.append(up)
        kdown.append(rng.randint(0, min(d + 2, up + 1)))
    pi = list(range(1, n + 1))
    rng.shuffle(pi)
    return System(graph, ThresholdAssignment(tuple(kup), tuple(kdown)), UpdateScheme(tuple(pi)))


def random_periodic_row(rng: random.Random, t_min: int = 3, t_max: int = 32) -> tuple[int, ...]:
    """Uniform random 0/1 row of random length with period >= 3 (rejection sampling)."""
    while True:
        t = rng.randint(t_min, t_max)
        z = tuple(rng.getrandbits(1) for _ in range(t))
        if row_gamma(z) >= 3:
            return z


def unlabelled_trees(n: int) -> list[Graph]:
    if n == 1:
        return [Graph(1)]
    return [Graph(n, [(u + 1, v + 1) for u, v in t.edges()]) for t in nx.nonisomorphic_trees(n)]


# ---------------------------------------------------------------- suites


def suite_thm1(count: int = 200, n_max: int = 12, seed: int = DEFAULT_SEED) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("thm1")
    worst = 0
    bad = 0
    for _ in range(count):
        ws = random_symmetric_weighted(rng.randint(1, n_max), rng)
        report = check_theorem1(ws, exhaustive_cap=n_max)
        worst = max(worst, report.max_period)
        bad += len(report.violations)
    res.add(f"{count} symmetric systems, all states: period <= 2", bad == 0 and worst <= 2,
            f"max period {worst}")
    return res


def suite_thm2(count: int = 200, n_max: int = 12, seed: int = DEFAULT_SEED,
               starts: int = 8) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("thm2")
    non_fixed = 0
    flips = bad_flips = 0
    for _ in range(count):
        s = random_low_delta_system(rng.randint(1, n_max), rng)
        portrait = enumerate_phase_space(s)
        non_fixed += sum(1 for a in portrait.attractors if a.length != 1)
        for _ in range(starts):
            trace = descent_trace(s, s.scheme.pi, rng.getrandbits(s.n), max_steps=10 * s.n + 10)
            flips += len(trace)
            bad_flips += sum(1 for f in trace
                             if not f.delta_p <= s.thresholds.delta(f.vertex) - 2 < 0)
    res.add(f"{count} systems with delta <= 1: only fixed points", non_fixed == 0,
            f"{non_fixed} non-fixed attractors")
    res.add("every flip lowers the potential by at least 2 - delta", bad_flips == 0,
            f"{flips} flips checked")
    return res


def suite_prop5(n_min: int = 4, n_max: int = 16) -> SuiteResult:
    res = SuiteResult("prop5")
    for n in range(n_min, n_max + 1):
        s = System.uniform(circle_graph(n), 1, 3, range(1, n + 1))
        orbit = orbit_from(s, circle_witness_state(n))
        res.add(f"Circ_{n}: witness on a cycle of length {n - 1}",
                orbit.transient == 0 and orbit.period == n - 1, f"period {orbit.period}")
    return res


def union_system(s1: System, s2: System, u1: int = 1, u2: int = 1):
    """Bridged union of two sequential systems; the bridge gets thresholds (3, 3) and updates last."""
    bu = bridge_union(s1.graph, s2.graph, u1, u2)
    kup = s1.thresholds.kup + s2.thresholds.kup + (3,)
    kdown = s1.thresholds.kdown + s2.thresholds.kdown + (3,)
    pi = tuple(s1.scheme.pi) + tuple(bu.right_map[v] for v in s2.scheme.pi) + (bu.bridge,)
    return System(bu.graph, ThresholdAssignment(kup, kdown), UpdateScheme(pi)), bu


def suite_prop6(n1: int = 5, n2: int = 6, u1: int = 1, u2: int = 1) -> SuiteResult:
    res = SuiteResult("prop6")
    s1 = System.uniform(circle_graph(n1), 1, 3, range(1, n1 + 1))
    s2 = System.uniform(circle_graph(n2), 1, 3, range(1, n2 + 1))
    x1, x2 = circle_witness_state(n1), circle_witness_state(n2)
    c1, c2 = orbit_from(s1, x1).period, orbit_from(s2, x2).period
    system, bu = union_system(s1, s2, u1, u2)
    x = x1 | (x2 << n1)
    orbit = orbit_from(system, x)
    want = math.lcm(c1, c2)
    res.add(f"Circ_{n1} + Circ_{n2}: cycle of length lcm({c1}, {c2}) = {want}",
            orbit.transient == 0 and orbit.period == want, f"period {orbit.period}")
    res.add("bridge vertex stays 0 on the cycle",
            all(not (y >> (bu.bridge - 1)) & 1 for y in orbit.cycle))
    return res


def suite_tree_family(family: str, c_min: int = 3, c_max: int = 8) -> SuiteResult:
    res = SuiteResult(family)
    for c in range(c_min, c_max + 1):
        s, x = family_system(family, c)
        orbit = orbit_from(s, x)
        res.add(f"{family} n={s.n}: orbit of length {c}", orbit.period == c,
                f"transient {orbit.transient}, period {orbit.period}")
    if family == "xtree":
        s = System.uniform(x_tree(5), 1, 3, range(1, 6))
        orbit = orbit_from(s, encode_state((0, 1, 1, 0, 0)))
        res.add("X_5 from 01100: 2-cycle", orbit.period == 2 and orbit.transient == 0)
    return res


def suite_lemma9(count: int = 50, n_max: int = 10, seed: int = DEFAULT_SEED,
                 perms: int = 5) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("lemma9")
    copy_fail = non_fixed = 0
    for _ in range(count):
        graph = random_tree(rng.randint(1, n_max), rng)
        s = System(graph, ThresholdAssignment.degree_rule(graph))
        root = rng.randint(1, graph.n)
        copy_fail += sum(1 for x in range(1 << graph.n)
                         if not check_parent_copy(s, root, x).holds)
        orders = [level_order_permutation(root_levels(graph, root))]
        for _ in range(perms):
            pi = list(graph.vertices)
            rng.shuffle(pi)
            orders.append(tuple(pi))
        for pi in orders:
            portrait = enumerate_phase_space(s.with_scheme(pi))
            non_fixed += sum(1 for a in portrait.attractors if a.length != 1)
    res.add(f"parent copy on {count} random trees, all states", copy_fail == 0,
            f"{copy_fail} failures")
    res.add("only fixed points under sampled permutations", non_fixed == 0,
            f"{non_fixed} non-fixed attractors")
    return res


def suite_bands(samples: int = 10_000, seed: int = DEFAULT_SEED, t_min: int = 3,
                t_max: int = 32) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("bands")
    failures = {k: 0 for k in ("partition", "band", "lemma", "m01=m10", "L", "psi0", "psi-sum",
                               "telescoped")}
    for _ in range(samples):
        z = random_periodic_row(rng, t_min, t_max)
        t = len(z)
        part = build_partition(z)
        sets = part.all_sets()
        if sum(len(s) for s in sets) != len(support(z)) or set().union(*sets) != support(z):
            failures["partition"] += 1
        band_list = bands(z)
        if any(len(band_of(p.indices, band_list)) != 1 for p in part.parts):
            failures["band"] += 1
        if not check_band_lemma(z, part).holds:
            failures["lemma"] += 1
        counts = classify_types(z, part)
        if counts.m01 != counts.m10:
            failures["m01=m10"] += 1
        rows = [z] + [tuple(rng.getrandbits(1) for _ in range(t)) for _ in range(2)]
        a = [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in rows] for _ in rows]
        if l_operator(a[0][1], rows[0], rows[1]) + l_operator(a[0][1], rows[1], rows[0]) != 0:
            failures["L"] += 1
        if psi(a, rows, 0, 0, part) != 0:
            failures["psi0"] += 1
        ks = range(len(part.parts) + 1)
        if sum(psi(a, rows, 0, k, part) for k in ks) != sum(
                l_operator(a[0][j], rows[0], rows[j]) for j in range(len(rows))):
            failures["psi-sum"] += 1
        if any(psi(a, rows, 0, k, part) != psi_telescoped(a, rows, 0, k, part) for k in ks):
            failures["telescoped"] += 1
    for key, bad in failures.items():
        res.add(f"{key} over {samples} rows", bad == 0, f"{bad} failures")
    return res


def suite_kappa(n_max: int = 8, n_max_perm: int = 6, seed: int = DEFAULT_SEED) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("kappa")
    for n in range(1, n_max + 1):
        counts = [kappa_classes(t).count for t in unlabelled_trees(n)]
        res.add(f"kappa = 1 for all {len(counts)} trees on {n} vertices",
                all(c == 1 for c in counts))
    for n in range(1, n_max_perm + 1):
        for tree in unlabelled_trees(n):
            # (1, 3) clipped to the legal range d(v) + 2 at isolated vertices
            profiles = [ThresholdAssignment((1,) * n, tuple(min(3, d + 2) for d in tree.degrees()))]
            profiles.append(ThresholdAssignment(
                tuple(rng.randint(0, d + 2) for d in tree.degrees()),
                tuple(rng.randint(0, d + 2) for d in tree.degrees())))
            for t in profiles:
                base = System(tree, t)
                ref = None
                same = True
                for pi in itertools.permutations(range(1, n + 1)):
                    ms = cycle_length_multiset(base.with_scheme(pi))
                    if ref is None:
                        ref = ms
                    elif ms != ref:
                        same = False
                        break
                res.add(f"tree {tree.sorted_edges()} thresholds {t.kup}/{t.kdown}: "
                        f"all {math.factorial(n)} orders cycle-equivalent", same)
    return res


SUITES = {
    "thm1": suite_thm1,
    "thm2": suite_thm2,
    "prop5": suite_prop5,
    "prop6": suite_prop6,
    "htree": partial(suite_tree_family, "htree"),
    "ytree": partial(suite_tree_family, "ytree"),
    "xtree": partial(suite_tree_family, "xtree"),
    "lemma9": suite_lemma9,
    "bands": suite_bands,
    "kappa": suite_kappa,
}
