"""Potential function for sequential bi-threshold systems.

Vertex potential is ``kdown(v)`` in state 1 and ``d(v) + 2 - kup(v)`` in
state 0; every edge whose endpoints disagree contributes 1. Any single
vertex flip changes the total by at most ``delta(v) - 2`` where
``delta(v) = kdown(v) - kup(v)``, so with ``delta <= 1`` everywhere each
flip strictly lowers the potential.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .dynamics import System, check_permutation, eval_vertex
from .errors import InternalInconsistency
from .graphs import Edge


def _bit(x: int, v: int) -> int:
    return (x >> (v - 1)) & 1


def vertex_potential(system: System, x: int, v: int) -> int:
    if _bit(x, v):
        return system.thresholds.down(v)
    return system.graph.degree(v) + 2 - system.thresholds.up(v)


def edge_potential(x: int, e: Edge) -> int:
    u, v = e
    return int(_bit(x, u) != _bit(x, v))


@dataclass(frozen=True)
class PotentialBreakdown:
    vertex_potentials: dict[int, int]
    edge_potentials: dict[Edge, int]
    total: int


def system_potential(system: System, x: int) -> PotentialBreakdown:
    vp = {v: vertex_potential(system, x, v) for v in system.graph.vertices}
    ep = {e: edge_potential(x, e) for e in system.graph.sorted_edges()}
    return PotentialBreakdown(vp, ep, sum(vp.values()) + sum(ep.values()))


def potential(system: System, x: int) -> int:
    return system_potential(system, x).total


def local_potential(system: System, x: int, v: int) -> int:
    """Potential of ``v`` plus its incident edges; the only terms a flip at ``v`` touches."""
    return vertex_potential(system, x, v) + sum(
        edge_potential(x, (v, u)) for u in system.graph.neighbors(v))


@dataclass(frozen=True)
class Flip:
    step: int
    vertex: int
    before: int
    after: int
    delta_p: int
    p_after: int


def descent_trace(system: System, pi: Sequence[int], x: int, max_steps: int = 1000) -> list[Flip]:
    """Apply F_pi up to ``max_steps`` times recording every vertex flip.

    Stops early after a pass with no flips. Raises
    :class:`InternalInconsistency` if some flip changes the potential by
    more than ``delta(v) - 2``.
    """
    pi = check_permutation(pi, system.n)
    p = potential(system, x)
    trace: list[Flip] = []
    for step in range(1, max_steps + 1):
        flipped = False
        for v in pi:
            b = eval_vertex(system, x, v)
            old = _bit(x, v)
            if b == old:
                continue
            before = local_potential(system, x, v)
            x ^= 1 << (v - 1)
            dp = local_potential(system, x, v) - before
            p += dp
            bound = system.thresholds.delta(v) - 2
            if dp > bound:
                raise InternalInconsistency(
                    f"flip at vertex {v} changed the potential by {dp} > {bound}")
            trace.append(Flip(step, v, old, b, dp, p))
            flipped = True
        if not flipped:
            break
    return trace


def trace_csv(trace: Sequence[Flip]) -> str:
    lines = ["step,vertex,from,to,delta_P,P_after"]
    lines += [f"{f.step},{f.vertex},{f.before},{f.after},{f.delta_p},{f.p_after}" for f in trace]
    return "\n".join(lines) + "\n"
