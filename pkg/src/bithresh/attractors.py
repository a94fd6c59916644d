"""Orbits, phase portraits and periodic tables of system maps.

Any object with ``n``, ``step(x) -> int`` and ``successors(np.ndarray)`` works
as a system here (graph systems and weighted systems both qualify).
"""

from __future__ import annotations

import io
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .dynamics import WeightedSystem, format_state, successor_table
from .errors import InvalidInput, ResourceLimit
from .proofcheck import row_gamma

DEFAULT_CAP = 24


@dataclass(frozen=True)
class OrbitResult:
    transient: int
    period: int
    cycle: tuple[int, ...]


def orbit_from(system, x: int, *, low_memory: bool = False) -> OrbitResult:
    """Transient length, period and cycle of the orbit starting at ``x``.

    The default keeps a dict of visited states (memory ~ s + T). With
    ``low_memory`` Brent's teleporting-tortoise search is used, storing O(1)
    states, followed by a second pass that recovers the minimal transient.
    """
    f = system.step
    if not low_memory:
        seen: dict[int, int] = {}
        trail = []
        y = x
        while y not in seen:
            seen[y] = len(trail)
            trail.append(y)
            y = f(y)
        s = seen[y]
        return OrbitResult(s, len(trail) - s, tuple(trail[s:]))

    power = lam = 1
    tortoise, hare = x, f(x)
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = f(hare)
        lam += 1
    tortoise = hare = x
    for _ in range(lam):
        hare = f(hare)
    mu = 0
    while tortoise != hare:
        tortoise, hare = f(tortoise), f(hare)
        mu += 1
    cycle = [tortoise]
    y = f(tortoise)
    while y != tortoise:
        cycle.append(y)
        y = f(y)
    return OrbitResult(mu, lam, tuple(cycle))


@dataclass(frozen=True)
class Attractor:
    representative: int
    length: int
    basin_size: int


@dataclass
class PhasePortrait:
    """Functional graph of a system map on all ``2**n`` states.

    ``representative[x]`` is the smallest state on the cycle reached from
    ``x``; ``transient[x]`` is the number of steps before ``x`` lands on it.
    """

    n: int
    successor: np.ndarray
    periodic: np.ndarray
    representative: np.ndarray
    transient: np.ndarray
    attractors: tuple[Attractor, ...] = field(default=())

    @property
    def n_states(self) -> int:
        return 1 << self.n

    def cycle(self, representative: int) -> tuple[int, ...]:
        out = [int(representative)]
        y = int(self.successor[representative])
        while y != representative:
            out.append(y)
            y = int(self.successor[y])
        return tuple(out)

    def cycles(self) -> list[tuple[int, ...]]:
        return [self.cycle(a.representative) for a in self.attractors]

    def period_of(self, x: int) -> int:
        rep = int(self.representative[x])
        return self._length_by_rep[rep]

    @cached_property
    def _length_by_rep(self) -> dict[int, int]:
        return {a.representative: a.length for a in self.attractors}

    def max_cycle_length(self) -> int:
        return max(a.length for a in self.attractors)

    def to_dot(self) -> str:
        n = self.n
        buf = io.StringIO()
        buf.write("digraph phase_space {\n")
        for x in range(self.n_states):
            buf.write(f'  "{format_state(x, n)}";\n')
        for x in range(self.n_states):
            buf.write(f'  "{format_state(x, n)}" -> "{format_state(int(self.successor[x]), n)}";\n')
        buf.write("}\n")
        return buf.getvalue()

    def to_csv(self) -> str:
        lines = ["attractor_id,length,representative,basin_size"]
        for i, a in enumerate(self.attractors, start=1):
            lines.append(f"{i},{a.length},{format_state(a.representative, self.n)},{a.basin_size}")
        return "\n".join(lines) + "\n"


def decompose(successor: np.ndarray, n: int) -> PhasePortrait:
    """Attractor decomposition of a functional graph on ``2**n`` nodes."""
    size = len(successor)
    idx = np.int32 if n < 31 else np.int64
    succ = successor.astype(idx)
    # pointer doubling: jump = F^(2^k); after k >= n+1 rounds jump(x) is periodic
    # and rep_min(x) = min over F^j(x), j < 2^k
    jump = succ.copy()
    rep = np.arange(size, dtype=idx)
    for _ in range(n + 1):
        rep = np.minimum(rep, rep[jump])
        jump = jump[jump]
    periodic = np.zeros(size, dtype=bool)
    periodic[jump] = True
    # for periodic x the window F^j(x), j < 2^(n+1), covers the whole cycle
    representative = rep[jump]

    transient = np.full(size, -1, dtype=idx)
    transient[periodic] = 0
    pending = np.flatnonzero(~periodic)
    depth = 0
    while pending.size:
        depth += 1
        ready = transient[succ[pending]] == depth - 1
        transient[pending[ready]] = depth
        pending = pending[~ready]

    reps, basin = np.unique(representative, return_counts=True)
    lengths = np.bincount(representative[periodic], minlength=size)
    attractors = tuple(Attractor(int(r), int(lengths[r]), int(b)) for r, b in zip(reps, basin))
    return PhasePortrait(n, succ, periodic, representative, transient, attractors)


def enumerate_phase_space(system, *, cap: int = DEFAULT_CAP, workers: int = 1) -> PhasePortrait:
    if system.n > cap:
        raise ResourceLimit(f"phase space of n={system.n} exceeds the cap of {cap} vertices")
    return decompose(successor_table(system, workers=workers), system.n)


def cycle_length_multiset(system, *, cap: int = DEFAULT_CAP) -> Counter:
    portrait = enumerate_phase_space(system, cap=cap)
    return Counter(a.length for a in portrait.attractors)


def cycle_equivalent(system1, system2, *, cap: int = DEFAULT_CAP) -> bool:
    """Equal cycle-length multisets, i.e. isomorphic periodic parts."""
    if system1.n != system2.n:
        raise InvalidInput("cycle equivalence compares systems of equal size")
    return cycle_length_multiset(system1, cap=cap) == cycle_length_multiset(system2, cap=cap)


@dataclass(frozen=True)
class PeriodicTable:
    """The n x T matrix whose columns are the successive states of a cycle."""

    n: int
    period: int
    rows: tuple[tuple[int, ...], ...]
    gammas: tuple[int, ...]
    transient: int = 0

    def column(self, l: int) -> int:
        return sum(self.rows[i][l % self.period] << i for i in range(self.n))

    @classmethod
    def from_cycle(cls, n: int, cycle, transient: int = 0) -> "PeriodicTable":
        cycle = list(cycle)
        rows = tuple(tuple((c >> i) & 1 for c in cycle) for i in range(n))
        return cls(n, len(cycle), rows, tuple(row_gamma(r) for r in rows), transient)


def periodic_table(system, x: int) -> PeriodicTable:
    orbit = orbit_from(system, x)
    return PeriodicTable.from_cycle(system.n, orbit.cycle, orbit.transient)


@dataclass
class Theorem1Report:
    n: int
    symmetric: bool
    exhaustive: bool
    states_checked: int
    max_period: int
    violations: list[int]

    @property
    def applicable(self) -> bool:
        return self.symmetric

    @property
    def passed(self) -> bool:
        return not self.violations


def check_theorem1(ws: WeightedSystem, exhaustive_cap: int = 20, *, samples: int = 2000,
                   seed: int = 0, allow_asymmetric: bool = False) -> Theorem1Report:
    """Check that every synchronous orbit settles into period 1 or 2.

    Exhaustive when ``ws.n <= exhaustive_cap``, otherwise ``samples`` random
    starting states are followed. ``violations`` lists starting states (or
    cycle representatives) whose period exceeds 2; for a symmetric matrix
    this list must be empty.
    """
    if not ws.symmetric and not allow_asymmetric:
        raise InvalidInput("the period-two check requires a symmetric weight matrix")
    if ws.n <= exhaustive_cap:
        portrait = enumerate_phase_space(ws, cap=exhaustive_cap)
        bad = [a.representative for a in portrait.attractors if a.length > 2]
        return Theorem1Report(ws.n, ws.symmetric, True, 1 << ws.n,
                              portrait.max_cycle_length(), bad)
    rng = random.Random(seed)
    worst = 0
    bad = []
    for _ in range(samples):
        x = rng.getrandbits(ws.n)
        period = orbit_from(ws, x, low_memory=True).period
        worst = max(worst, period)
        if period > 2:
            bad.append(x)
    return Theorem1Report(ws.n, ws.symmetric, False, samples, worst, bad)
