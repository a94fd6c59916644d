"""Acyclic orientations, source-to-sink moves and kappa-equivalence.

Also hosts the level-order update sequence on rooted trees and the
parent-copy check for the ``kup = 1, kdown(v) = d(v) + 1`` profile.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .dynamics import System, UpdateScheme, check_permutation, step_sequential
from .errors import InvalidInput, InvalidMove, NotApplicable, ResourceLimit
from .graphs import Graph, RootedLevels, root_levels

MAX_EDGES = 20


@dataclass(frozen=True)
class AcyclicOrientation:
    """Orientation of every edge of ``graph``; ``arcs`` holds directed pairs ``(tail, head)``."""

    graph: Graph
    arcs: frozenset[tuple[int, int]]

    def __post_init__(self):
        if len(self.arcs) != len(self.graph.edges) or any(
                (min(a), max(a)) not in self.graph.edges for a in self.arcs):
            raise InvalidInput("arcs must orient each graph edge exactly once")
        if not _is_acyclic(self.graph.n, self.arcs):
            raise InvalidInput("orientation contains a directed cycle")

    def in_degree(self, v: int) -> int:
        return sum(1 for _, h in self.arcs if h == v)

    def out_degree(self, v: int) -> int:
        return sum(1 for t, _ in self.arcs if t == v)

    def is_source(self, v: int) -> bool:
        return self.in_degree(v) == 0

    def is_sink(self, v: int) -> bool:
        return self.out_degree(v) == 0

    def to_list(self) -> list[list[int]]:
        return [list(a) for a in sorted(self.arcs)]

    def encode(self) -> int:
        """Bit e is set iff the e-th sorted edge ``(u, v)`` is oriented ``u -> v``."""
        return sum(1 << i for i, e in enumerate(self.graph.sorted_edges()) if e in self.arcs)


def _is_acyclic(n: int, arcs) -> bool:
    indeg = [0] * (n + 1)
    out: list[list[int]] = [[] for _ in range(n + 1)]
    for t, h in arcs:
        out[t].append(h)
        indeg[h] += 1
    queue = deque(v for v in range(1, n + 1) if indeg[v] == 0)
    seen = 0
    while queue:
        u = queue.popleft()
        seen += 1
        for w in out[u]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == n


def orientation_from_permutation(x: Graph, pi: Sequence[int]) -> AcyclicOrientation:
    pi = check_permutation(pi, x.n)
    pos = {v: i for i, v in enumerate(pi)}
    arcs = frozenset((u, v) if pos[u] < pos[v] else (v, u) for u, v in x.edges)
    return AcyclicOrientation(x, arcs)


def _reverse_at(o: AcyclicOrientation, v: int) -> AcyclicOrientation:
    arcs = frozenset((h, t) if v in (t, h) else (t, h) for t, h in o.arcs)
    return AcyclicOrientation(o.graph, arcs)


def source_to_sink(o: AcyclicOrientation, v: int) -> AcyclicOrientation:
    if not o.is_source(v):
        raise InvalidMove(f"vertex {v} is not a source")
    return _reverse_at(o, v)


def sink_to_source(o: AcyclicOrientation, v: int) -> AcyclicOrientation:
    if not o.is_sink(v):
        raise InvalidMove(f"vertex {v} is not a sink")
    return _reverse_at(o, v)


# ---------------------------------------------------------------- bitmask closure


class _Codec:
    """Orientations of ``graph`` as integers (see ``AcyclicOrientation.encode``)."""

    def __init__(self, graph: Graph, max_edges: int):
        if len(graph.edges) > max_edges:
            raise ResourceLimit(
                f"{len(graph.edges)} edges exceeds the orientation-closure bound of {max_edges}")
        self.graph = graph
        self.edges = graph.sorted_edges()
        # per vertex: bits of incident edges, and bits that point *into* v when set
        self.incident = [0] * (graph.n + 1)
        self.into_when_set = [0] * (graph.n + 1)
        for i, (u, v) in enumerate(self.edges):
            self.incident[u] |= 1 << i
            self.incident[v] |= 1 << i
            self.into_when_set[v] |= 1 << i

    def is_source(self, code: int, v: int) -> bool:
        inc = self.incident[v]
        into = (code & self.into_when_set[v]) | (~code & inc & ~self.into_when_set[v])
        return into & inc == 0

    def moves(self, code: int):
        for v in self.graph.vertices:
            if self.incident[v] and self.is_source(code, v):
                yield code ^ self.incident[v]

    def is_acyclic(self, code: int) -> bool:
        arcs = [(u, v) if code >> i & 1 else (v, u) for i, (u, v) in enumerate(self.edges)]
        return _is_acyclic(self.graph.n, arcs)

    def decode(self, code: int) -> AcyclicOrientation:
        arcs = frozenset((u, v) if code >> i & 1 else (v, u) for i, (u, v) in enumerate(self.edges))
        return AcyclicOrientation(self.graph, arcs)


def _closure(codec: _Codec, start: int) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        for d in codec.moves(c):
            if d not in seen:
                seen.add(d)
                queue.append(d)
    return seen


@dataclass(frozen=True)
class KappaResult:
    count: int
    representatives: tuple[AcyclicOrientation, ...]
    n_orientations: int


def kappa_classes(x: Graph, *, max_edges: int = MAX_EDGES) -> KappaResult:
    """Classes of acyclic orientations under source-to-sink conversions."""
    codec = _Codec(x, max_edges)
    acyclic = [c for c in range(1 << len(codec.edges)) if codec.is_acyclic(c)]
    unassigned = set(acyclic)
    reps = []
    for c in acyclic:
        if c not in unassigned:
            continue
        cls = _closure(codec, c)
        unassigned -= cls
        reps.append(codec.decode(c))
    return KappaResult(len(reps), tuple(reps), len(acyclic))


def kappa_equivalent(x: Graph, pi1: Sequence[int], pi2: Sequence[int], *,
                     max_edges: int = MAX_EDGES) -> bool:
    o1 = orientation_from_permutation(x, pi1)
    o2 = orientation_from_permutation(x, pi2)
    if o1.arcs == o2.arcs:
        return True
    codec = _Codec(x, max_edges)
    return o2.encode() in _closure(codec, o1.encode())


# ---------------------------------------------------------------- trees


def level_order_permutation(levels: RootedLevels) -> tuple[int, ...]:
    """Deepest level first, ascending labels within a level."""
    return tuple(v for level in reversed(levels.levels) for v in sorted(level))


def has_degree_rule(system: System) -> bool:
    g, t = system.graph, system.thresholds
    return all(t.up(v) == 1 and t.down(v) == g.degree(v) + 1 for v in g.vertices)


@dataclass(frozen=True)
class ParentCopyResult:
    holds: bool
    image: int
    witness: dict[int, tuple[int, int]]


def check_parent_copy(system: System, root: int, x: int) -> ParentCopyResult:
    """One level-order sequential step; check ``x'_v == x_p(v)`` for every non-root ``v``.

    ``witness`` maps each non-root vertex to ``(x'_v, x_p(v))``. The system's
    own update scheme is ignored.
    """
    if not has_degree_rule(system):
        raise NotApplicable("parent-copy needs kup = 1 and kdown(v) = d(v) + 1 everywhere")
    levels = root_levels(system.graph, root)
    pi = level_order_permutation(levels)
    y = step_sequential(system, x, pi)
    witness = {v: ((y >> (v - 1)) & 1, (x >> (p - 1)) & 1) for v, p in sorted(levels.parent.items())}
    return ParentCopyResult(all(a == b for a, b in witness.values()), y, witness)


def level_order_system(system: System, root: int) -> System:
    levels = root_levels(system.graph, root)
    return system.with_scheme(UpdateScheme(level_order_permutation(levels)))
