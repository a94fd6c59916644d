"""Graph families, bridged unions and rooted-tree levels.

Vertices are labelled ``1..n`` everywhere in the public API. Internally the
dynamics code works with 0-based bit positions, so vertex ``v`` is stored at
bit ``v - 1`` of a state integer.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import InvalidInput, InvalidParameter

Edge = tuple[int, int]


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``1..n``.

    ``edges`` holds pairs ``(u, v)`` with ``u < v``.
    """

    n: int
    edges: frozenset[Edge]

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if not isinstance(n, int) or n < 1:
            raise InvalidParameter(f"vertex count must be a positive integer, got {n!r}")
        normed = set()
        for e in edges:
            u, v = e
            if u == v:
                raise InvalidParameter(f"self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise InvalidParameter(f"edge {e} has an endpoint outside 1..{n}")
            edge = _norm_edge(u, v)
            if edge in normed:
                raise InvalidParameter(f"duplicate edge {edge}")
            normed.add(edge)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(normed))

    @cached_property
    def _adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def degrees(self) -> list[int]:
        """Degrees of vertices 1..n, in label order."""
        return [len(self._adjacency[v]) for v in self.vertices]

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def is_connected(self) -> bool:
        seen = {1}
        queue = deque([1])
        while queue:
            u = queue.popleft()
            for w in self.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.n

    def is_tree(self) -> bool:
        return len(self.edges) == self.n - 1 and self.is_connected()

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "Graph":
        try:
            n = data["n"]
            edges = [tuple(e) for e in data["edges"]]
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed graph document: {exc}") from exc
        if any(len(e) != 2 for e in edges):
            raise InvalidInput("every edge must be a pair [u, v]")
        return cls(n, edges)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        return cls.from_dict(json.loads(text))

    def to_dot(self, name: str = "X") -> str:
        lines = [f"graph {name} {{"]
        lines.extend(f"  {v};" for v in self.vertices)
        lines.extend(f"  {u} -- {v};" for u, v in self.sorted_edges())
        lines.append("}")
        return "\n".join(lines) + "\n"


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(1, n)])


def circle_graph(n: int) -> Graph:
    """Circ_n: the cycle 1-2-...-n-1."""
    if n < 3:
        raise InvalidParameter(f"circle graph needs n >= 3, got {n}")
    return Graph(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])


def h_tree(n: int) -> Graph:
    """H-tree on n = 4*beta + 2 vertices.

    Two paths ``1..n/2`` and ``n/2+1..n`` joined by the crossbar
    ``{eta, n - eta + 1}`` where ``eta = beta + 1``.
    """
    if n < 6 or n % 4 != 2:
        raise InvalidParameter(f"H-tree needs n = 4*beta + 2 with beta >= 1, got {n}")
    beta = (n - 2) // 4
    eta = beta + 1
    half = n // 2
    edges = [(i, i + 1) for i in range(1, half)]
    edges += [(half + i, half + i + 1) for i in range(1, half)]
    edges.append((eta, n - eta + 1))
    return Graph(n, edges)


def y_tree(n: int) -> Graph:
    """Y-tree on n = 3*beta + 1 vertices; ``eta = beta + 1`` has degree 3."""
    if n < 4 or n % 3 != 1:
        raise InvalidParameter(f"Y-tree needs n = 3*beta + 1 with beta >= 1, got {n}")
    eta = (n - 1) // 3 + 1
    edges = [(i, i + 1) for i in range(1, 2 * eta - 1)]
    edges += [(i, i + 1) for i in range(2 * eta, n)]
    edges.append((eta, n))
    return Graph(n, edges)


def x_tree(n: int) -> Graph:
    """X-tree on n = 4*beta + 1 vertices with centre ``eta = beta + 1``.

    Arm labelling:

    * arm 1: ``1..beta``, vertex ``beta`` adjacent to the centre;
    * arm 2: ``eta+1..2*eta-1``, vertex ``eta+1`` adjacent to the centre;
    * arm 3: ``2*eta..3*eta-2``, labelled tip to centre (``3*eta-2`` adjacent);
    * arm 4: ``3*eta-1..4*eta-3``, labelled centre to tip (``3*eta-1`` adjacent).
    """
    if n < 5 or n % 4 != 1:
        raise InvalidParameter(f"X-tree needs n = 4*beta + 1 with beta >= 1, got {n}")
    beta = (n - 1) // 4
    eta = beta + 1
    arms = [
        list(range(eta - 1, 0, -1)),
        list(range(eta + 1, 2 * eta)),
        list(range(3 * eta - 2, 2 * eta - 1, -1)),
        list(range(3 * eta - 1, 4 * eta - 2)),
    ]
    edges = []
    for arm in arms:
        # each arm listed centre-outwards
        prev = eta
        for v in arm:
            edges.append((prev, v))
            prev = v
    return Graph(n, edges)


@dataclass(frozen=True)
class BridgedUnion:
    graph: Graph
    left_map: dict[int, int]
    right_map: dict[int, int]
    bridge: int


def bridge_union(x1: Graph, x2: Graph, u1: int, u2: int) -> BridgedUnion:
    """Disjoint union of ``x1`` and ``x2`` plus a vertex ``w`` joined to ``u1`` and ``u2``.

    ``x2`` is relabelled by the offset ``x1.n``; ``w`` gets label ``x1.n + x2.n + 1``.
    """
    if not 1 <= u1 <= x1.n:
        raise InvalidParameter(f"anchor u1={u1} is not a vertex of the first graph")
    if not 1 <= u2 <= x2.n:
        raise InvalidParameter(f"anchor u2={u2} is not a vertex of the second graph")
    offset = x1.n
    w = x1.n + x2.n + 1
    edges = list(x1.edges)
    edges += [(u + offset, v + offset) for u, v in x2.edges]
    edges += [(u1, w), (u2 + offset, w)]
    return BridgedUnion(
        graph=Graph(w, edges),
        left_map={v: v for v in x1.vertices},
        right_map={v: v + offset for v in x2.vertices},
        bridge=w,
    )


@dataclass(frozen=True)
class RootedLevels:
    root: int
    levels: tuple[tuple[int, ...], ...]
    parent: dict[int, int]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def level_of(self, v: int) -> int:
        for i, level in enumerate(self.levels):
            if v in level:
                return i
        raise KeyError(v)


def root_levels(x: Graph, root: int) -> RootedLevels:
    """Breadth-first levels of a tree; each level is sorted by label."""
    if not x.is_tree():
        raise InvalidInput("root_levels requires a tree")
    if not 1 <= root <= x.n:
        raise InvalidInput(f"root {root} is not a vertex")
    parent: dict[int, int] = {}
    levels = [(root,)]
    seen = {root}
    while True:
        nxt = []
        for u in levels[-1]:
            for w in x.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    parent[w] = u
                    nxt.append(w)
        if not nxt:
            break
        levels.append(tuple(sorted(nxt)))
    return RootedLevels(root=root, levels=tuple(levels), parent=parent)


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    """Erdos-Renyi G(n, p)."""
    return Graph(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)
                     if rng.random() < p])


def random_tree(n: int, rng: random.Random) -> Graph:
    """Uniform random labelled tree via a Pruefer sequence."""
    if n == 1:
        return Graph(1)
    if n == 2:
        return Graph(2, [(1, 2)])
    seq = [rng.randint(1, n) for _ in range(n - 2)]
    degree = [1] * (n + 1)
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = next(u for u in range(1, n + 1) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = (i for i in range(1, n + 1) if degree[i] == 1)
    edges.append((u, w))
    return Graph(n, edges)
