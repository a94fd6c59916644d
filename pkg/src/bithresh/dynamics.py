"""Bi-threshold vertex functions and the synchronous / sequential system maps.

States are plain Python integers with vertex 1 at the least significant bit.
``parse_state`` and ``format_state`` convert to and from the ``"b1b2...bn"``
string form used for all I/O.

Two flavours of system share the same duck-typed surface (``n``, ``step``,
``successors``):

* :class:`System` - a graph with per-vertex ``(kup, kdown)`` thresholds
  compared against the closed-neighbourhood count, updated synchronously or
  along a permutation;
* :class:`WeightedSystem` - a symmetric rational matrix with rational
  thresholds, updated synchronously. Comparisons are exact: the matrix and
  thresholds are rescaled to a common integer denominator once.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInput, InvalidParameter
from .graphs import Graph

# ---------------------------------------------------------------- states


def encode_state(bits: Sequence[int]) -> int:
    x = 0
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise InvalidInput(f"state entries must be 0 or 1, got {b!r}")
        x |= b << i
    return x


def decode_state(x: int, n: int) -> tuple[int, ...]:
    return tuple((x >> i) & 1 for i in range(n))


def parse_state(text: str, n: int | None = None) -> int:
    text = text.strip()
    if not text or any(c not in "01" for c in text):
        raise InvalidInput(f"state string must consist of 0/1 characters, got {text!r}")
    if n is not None and len(text) != n:
        raise InvalidInput(f"state {text!r} has length {len(text)}, expected {n}")
    return encode_state([int(c) for c in text])


def format_state(x: int, n: int) -> str:
    return "".join(str((x >> i) & 1) for i in range(n))


def states_to_bits(xs: np.ndarray, n: int) -> np.ndarray:
    """(N,) integer states -> (N, n) 0/1 matrix, column i = vertex i+1."""
    shifts = np.arange(n, dtype=np.int64)
    return ((xs.astype(np.int64)[:, None] >> shifts) & 1).astype(np.int64)


# ---------------------------------------------------------------- thresholds


@dataclass(frozen=True)
class ThresholdAssignment:
    """Per-vertex up/down thresholds, indexed by ``vertex - 1``."""

    kup: tuple[int, ...]
    kdown: tuple[int, ...]

    def __post_init__(self):
        if len(self.kup) != len(self.kdown):
            raise InvalidParameter("kup and kdown must cover the same vertices")

    @property
    def n(self) -> int:
        return len(self.kup)

    def up(self, v: int) -> int:
        return self.kup[v - 1]

    def down(self, v: int) -> int:
        return self.kdown[v - 1]

    def delta(self, v: int) -> int:
        return self.kdown[v - 1] - self.kup[v - 1]

    @classmethod
    def uniform(cls, n: int, kup: int, kdown: int) -> "ThresholdAssignment":
        return cls((kup,) * n, (kdown,) * n)

    @classmethod
    def degree_rule(cls, graph: Graph, kup: int = 1) -> "ThresholdAssignment":
        """``kup`` everywhere and ``kdown(v) = d(v) + 1``."""
        return cls((kup,) * graph.n, tuple(d + 1 for d in graph.degrees()))

    @classmethod
    def from_mapping(cls, n: int, table: dict[int, tuple[int, int]]) -> "ThresholdAssignment":
        if set(table) != set(range(1, n + 1)):
            raise InvalidParameter("threshold table must cover exactly the vertices 1..n")
        return cls(tuple(table[v][0] for v in range(1, n + 1)),
                   tuple(table[v][1] for v in range(1, n + 1)))


@dataclass(frozen=True)
class UpdateScheme:
    """Synchronous when ``pi`` is None, otherwise sequential along ``pi``."""

    pi: tuple[int, ...] | None = None

    @property
    def mode(self) -> str:
        return "sync" if self.pi is None else "seq"

    @classmethod
    def synchronous(cls) -> "UpdateScheme":
        return cls(None)

    @classmethod
    def sequential(cls, pi: Iterable[int]) -> "UpdateScheme":
        return cls(tuple(pi))


def check_permutation(pi: Sequence[int], n: int) -> tuple[int, ...]:
    pi = tuple(pi)
    if sorted(pi) != list(range(1, n + 1)):
        raise InvalidInput(f"{list(pi)} is not a permutation of 1..{n}")
    return pi


# ---------------------------------------------------------------- graph systems


@dataclass(frozen=True)
class System:
    graph: Graph
    thresholds: ThresholdAssignment
    scheme: UpdateScheme = field(default_factory=UpdateScheme)

    def __post_init__(self):
        g, t = self.graph, self.thresholds
        if t.n != g.n:
            raise InvalidParameter(f"thresholds cover {t.n} vertices, graph has {g.n}")
        for v in g.vertices:
            hi = g.degree(v) + 2
            if not (0 <= t.up(v) <= hi and 0 <= t.down(v) <= hi):
                raise InvalidParameter(
                    f"thresholds ({t.up(v)}, {t.down(v)}) at vertex {v} outside 0..{hi}")
        if self.scheme.pi is not None:
            check_permutation(self.scheme.pi, g.n)
        # closed-neighbourhood bit masks, indexed by vertex - 1
        masks = tuple(
            (1 << (v - 1)) | sum(1 << (u - 1) for u in g.neighbors(v)) for v in g.vertices)
        object.__setattr__(self, "_masks", masks)

    @property
    def n(self) -> int:
        return self.graph.n

    @classmethod
    def uniform(cls, graph: Graph, kup: int, kdown: int,
                pi: Iterable[int] | None = None) -> "System":
        scheme = UpdateScheme(None if pi is None else tuple(pi))
        return cls(graph, ThresholdAssignment.uniform(graph.n, kup, kdown), scheme)

    def with_scheme(self, scheme: UpdateScheme | Iterable[int] | None) -> "System":
        if not isinstance(scheme, UpdateScheme):
            scheme = UpdateScheme(None if scheme is None else tuple(scheme))
        return System(self.graph, self.thresholds, scheme)

    def mask(self, v: int) -> int:
        return self._masks[v - 1]

    def step(self, x: int) -> int:
        if self.scheme.pi is None:
            return step_synchronous(self, x)
        return step_sequential(self, x, self.scheme.pi)

    def successors(self, xs: np.ndarray) -> np.ndarray:
        """Vectorised ``step`` over an array of integer states."""
        xs = xs.astype(np.int64, copy=True)
        kup, kdown = self.thresholds.kup, self.thresholds.kdown
        if self.scheme.pi is None:
            out = np.zeros_like(xs)
            for i in range(self.n):
                out |= self._vertex_bits(xs, i, kup[i], kdown[i]) << i
            return out
        for v in self.scheme.pi:
            i = v - 1
            bit = self._vertex_bits(xs, i, kup[i], kdown[i])
            xs = (xs & ~np.int64(1 << i)) | (bit << i)
        return xs

    def _vertex_bits(self, xs, i, kup, kdown):
        sig = np.bitwise_count(xs & np.int64(self._masks[i])).astype(np.int64)
        cur = (xs >> i) & 1
        return np.where(cur == 0, sig >= kup, sig >= kdown).astype(np.int64)


def sigma(system: System, x: int, v: int) -> int:
    """Number of 1-states in the closed neighbourhood of ``v``."""
    return (x & system.mask(v)).bit_count()


def eval_vertex(system: System, x: int, v: int) -> int:
    s = (x & system.mask(v)).bit_count()
    if (x >> (v - 1)) & 1:
        return int(s >= system.thresholds.kdown[v - 1])
    return int(s >= system.thresholds.kup[v - 1])


def local_function(system: System, x: int, v: int) -> int:
    """The X-local map F_v: replace coordinate ``v`` by the vertex function."""
    b = eval_vertex(system, x, v)
    return (x & ~(1 << (v - 1))) | (b << (v - 1))


def step_synchronous(system: System, x: int) -> int:
    y = 0
    for v in system.graph.vertices:
        y |= eval_vertex(system, x, v) << (v - 1)
    return y


def step_sequential(system: System, x: int, pi: Sequence[int]) -> int:
    pi = check_permutation(pi, system.n)
    for v in pi:
        x = local_function(system, x, v)
    return x


# ---------------------------------------------------------------- weighted systems


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        raise InvalidInput("weighted systems take exact rationals, not floats")
    return Fraction(value)


class WeightedSystem:
    """Synchronous bi-threshold map over a weighted matrix.

    ``x_i = 0`` becomes 1 iff ``sum_j a_ij x_j >= kup_i``; ``x_i = 1`` becomes
    0 iff that sum is ``< kdown_i``. Asymmetric matrices are refused unless
    ``allow_asymmetric`` is set, in which case ``symmetric`` reports False.
    """

    def __init__(self, a, kup, kdown=None, *, allow_asymmetric: bool = False):
        rows = [[_as_fraction(v) for v in row] for row in a]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise InvalidInput("weight matrix must be square and non-empty")
        kup = [_as_fraction(k) for k in kup]
        kdown = list(kup) if kdown is None else [_as_fraction(k) for k in kdown]
        if len(kup) != n or len(kdown) != n:
            raise InvalidInput("threshold vectors must have one entry per row")
        self.symmetric = all(rows[i][j] == rows[j][i] for i in range(n) for j in range(i))
        if not self.symmetric and not allow_asymmetric:
            raise InvalidInput("weight matrix is not symmetric (pass allow_asymmetric to override)")
        self.a = tuple(tuple(r) for r in rows)
        self.kup = tuple(kup)
        self.kdown = tuple(kdown)
        self.n = n
        # common denominator -> exact integer comparisons
        denom = math.lcm(*(q.denominator for q in (*sum(self.a, ()), *self.kup, *self.kdown)))
        self._ia = [[int(q * denom) for q in r] for r in self.a]
        self._iup = [int(q * denom) for q in self.kup]
        self._idown = [int(q * denom) for q in self.kdown]
        bound = max(abs(v) for v in (*sum(self._ia, []), *self._iup, *self._idown, 1))
        self._fits_int64 = bound * (n + 1) < 2**62

    def __repr__(self):
        return f"WeightedSystem(n={self.n}, symmetric={self.symmetric})"

    @classmethod
    def from_system(cls, system: System) -> "WeightedSystem":
        """Adjacency-plus-identity matrix with the system's integer thresholds."""
        n = system.n
        a = [[0] * n for _ in range(n)]
        for u, v in system.graph.edges:
            a[u - 1][v - 1] = a[v - 1][u - 1] = 1
        for i in range(n):
            a[i][i] = 1
        return cls(a, system.thresholds.kup, system.thresholds.kdown)

    def field_sums(self, x: int) -> list[Fraction]:
        """Exact ``sum_j a_ij x_j`` for every i."""
        return [sum((self.a[i][j] for j in range(self.n) if (x >> j) & 1), Fraction(0))
                for i in range(self.n)]

    def step(self, x: int) -> int:
        return step_weighted_synchronous(self, x)

    def successors(self, xs: np.ndarray) -> np.ndarray:
        bits = states_to_bits(xs, self.n)
        if self._fits_int64:
            sums = bits @ np.array(self._ia, dtype=np.int64).T
            up = np.array(self._iup, dtype=np.int64)
            down = np.array(self._idown, dtype=np.int64)
        else:
            sums = bits.astype(object) @ np.array(self._ia, dtype=object).T
            up = np.array(self._iup, dtype=object)
            down = np.array(self._idown, dtype=object)
        new = np.where(bits == 0, sums >= up, sums >= down).astype(np.int64)
        return (new << np.arange(self.n, dtype=np.int64)).sum(axis=1)


def step_weighted_synchronous(ws: WeightedSystem, x: int) -> int:
    y = 0
    for i in range(ws.n):
        s = sum(ws._ia[i][j] for j in range(ws.n) if (x >> j) & 1)
        if (x >> i) & 1:
            bit = int(s >= ws._idown[i])
        else:
            bit = int(s >= ws._iup[i])
        y |= bit << i
    return y


# ---------------------------------------------------------------- parallel helper


def successor_table(system, states: np.ndarray | None = None, *, workers: int = 1,
                    chunk: int = 1 << 18) -> np.ndarray:
    """Successor of every state in ``states`` (default: all ``2**n`` states).

    Work is split into fixed chunks; the result does not depend on ``workers``.
    """
    if states is None:
        states = np.arange(1 << system.n, dtype=np.int64)
    pieces = [states[i:i + chunk] for i in range(0, len(states), chunk)]
    if workers > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(system.successors, pieces))
    else:
        results = [system.successors(p) for p in pieces]
    if not results:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(results)
