"""Combinatorics of periodic rows: supports, stride-2 partitions, bands, L and Psi.

A *row* is a tuple of 0/1 values ``z(0..T-1)`` read cyclically. These are
the rows of the matrix whose columns are the successive states of a
periodic orbit, but every function here except :func:`certify_orbit` is
purely combinatorial and accepts arbitrary rows.

All arithmetic is exact (``Fraction`` for weights).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InvalidInput, NotApplicable

Row = tuple[int, ...]


def _divisors(t: int) -> list[int]:
    return [d for d in range(1, t + 1) if t % d == 0]


def row_gamma(z: Sequence[int]) -> int:
    """Smallest divisor g of T with z(l + g) = z(l) cyclically."""
    t = len(z)
    if t == 0:
        raise InvalidInput("empty row")
    for g in _divisors(t):
        if all(z[(l + g) % t] == z[l] for l in range(t)):
            return g
    raise AssertionError("unreachable: T itself always works")


def support(z: Sequence[int]) -> frozenset[int]:
    return frozenset(l for l, b in enumerate(z) if b == 1)


@dataclass(frozen=True)
class Part:
    """Stride-2 run ``start, start+2, ..., start+2*extent`` (mod T) inside the support."""

    start: int
    extent: int
    indices: tuple[int, ...]


@dataclass(frozen=True)
class Partition:
    period: int
    c0: tuple[int, ...]
    parts: tuple[Part, ...]

    def all_sets(self) -> list[frozenset[int]]:
        out = [frozenset(self.c0)] if self.c0 else []
        return out + [frozenset(p.indices) for p in self.parts]


def _stride_orbit(l: int, t: int) -> list[int]:
    out, k = [], l
    while True:
        out.append(k)
        k = (k + 2) % t
        if k == l:
            return out


def build_partition(z: Sequence[int], *, offset: int = 0) -> Partition:
    """Partition the support of a row with period >= 3.

    ``C0`` is the first full stride-2 cyclic orbit contained in the support
    (only possible for even T). The remaining parts are maximal stride-2
    runs; candidate starts are scanned in increasing order beginning at
    ``offset``.
    """
    z = tuple(z)
    t = len(z)
    if row_gamma(z) <= 2:
        raise NotApplicable("partition is defined only for rows with period >= 3")
    supp = support(z)
    c0: tuple[int, ...] = ()
    for l0 in range(t):
        orbit = _stride_orbit(l0, t)
        if all(k in supp for k in orbit):
            c0 = tuple(orbit)
            break
    used = set(c0)
    parts = []
    for step in range(t):
        l = (offset + step) % t
        if l in used or l not in supp or z[(l - 2) % t] != 0:
            continue
        run = [l]
        while z[(run[-1] + 2) % t] == 1:
            run.append((run[-1] + 2) % t)
        used.update(run)
        parts.append(Part(l, len(run) - 1, tuple(run)))
    if used != supp:
        raise AssertionError("stride-2 runs failed to cover the support")
    return Partition(t, c0, tuple(parts))


@dataclass(frozen=True)
class TypeCounts:
    types: tuple[str, ...]
    m00: int
    m01: int
    m10: int
    m11: int


def part_type(z: Sequence[int], part: Part) -> str:
    t = len(z)
    left = z[(part.start - 1) % t]
    right = z[(part.start + 2 * part.extent + 1) % t]
    return f"{left}{right}"


def classify_types(z: Sequence[int], partition: Partition) -> TypeCounts:
    """Type ``ab`` of each part from the entries just left and right of it. C0 is untyped."""
    types = tuple(part_type(z, p) for p in partition.parts)
    c = {k: types.count(k) for k in ("00", "01", "10", "11")}
    return TypeCounts(types, c["00"], c["01"], c["10"], c["11"])


@dataclass(frozen=True)
class Band:
    start: int
    end: int
    members: tuple[int, ...]


def bands(z: Sequence[int]) -> list[Band]:
    """Maximal cyclic segments separated by runs of at least two zeros.

    If no such zero-run exists the whole cycle forms one band, listed from 0.
    """
    z = tuple(z)
    t = len(z)
    if 1 not in z:
        return []
    # positions that are part of a zero-run of length >= 2
    gap = [z[l] == 0 and (z[(l - 1) % t] == 0 or z[(l + 1) % t] == 0) for l in range(t)]
    if not any(gap):
        return [Band(0, t - 1, tuple(range(t)))]
    out = []
    # start scanning right after a gap position so no band is split by the wrap
    first = next(l for l in range(t) if gap[l])
    current: list[int] = []
    for step in range(1, t + 1):
        l = (first + step) % t
        if gap[l]:
            if current:
                out.append(current)
                current = []
        else:
            current.append(l)
    if current:
        out.append(current)
    result = [Band(seg[0], seg[-1], tuple(seg)) for seg in out]
    return sorted(result, key=lambda b: b.start)


@dataclass(frozen=True)
class BandLemmaResult:
    holds: bool
    witness: Band | None = None
    counts: tuple[int, int] | None = None


def check_band_lemma(z: Sequence[int], partition: Partition | None = None) -> BandLemmaResult:
    """Each band holds either no 01/10 parts or exactly one of each."""
    if partition is None:
        partition = build_partition(z)
    band_list = bands(z)
    for band in band_list:
        members = set(band.members)
        n01 = n10 = 0
        for p in partition.parts:
            if p.start in members:
                kind = part_type(z, p)
                n01 += kind == "01"
                n10 += kind == "10"
        if (n01, n10) not in ((0, 0), (1, 1)):
            return BandLemmaResult(False, band, (n01, n10))
    return BandLemmaResult(True)


def band_of(parts_indices: Sequence[int], band_list: list[Band]) -> list[int]:
    """Indices of the bands that contain every element of ``parts_indices``."""
    return [i for i, b in enumerate(band_list) if set(parts_indices) <= set(b.members)]


def l_operator(a_ij, zi: Sequence[int], zj: Sequence[int]) -> Fraction:
    """``a_ij * sum_l (z_j(l+1) - z_j(l-1)) * z_i(l)`` with cyclic indices."""
    t = len(zi)
    if len(zj) != t:
        raise InvalidInput("rows must share the same period")
    total = sum((zj[(l + 1) % t] - zj[(l - 1) % t]) * zi[l] for l in range(t))
    return Fraction(a_ij) * total


def _part_sets(partition: Partition) -> list[tuple[int, ...]]:
    return [partition.c0] + [p.indices for p in partition.parts]


def psi(a, rows: Sequence[Sequence[int]], i: int, k: int,
        partition: Partition | None = None) -> Fraction:
    """Literal double sum over ``j`` and ``l in C_k`` (``i`` is 0-based, ``k=0`` is C0)."""
    if partition is None:
        partition = build_partition(rows[i])
    cells = _part_sets(partition)[k]
    t = partition.period
    total = Fraction(0)
    for j, zj in enumerate(rows):
        inner = sum(zj[(l + 1) % t] - zj[(l - 1) % t] for l in cells)
        total += Fraction(a[i][j]) * inner
    return total


def psi_telescoped(a, rows: Sequence[Sequence[int]], i: int, k: int,
                   partition: Partition | None = None) -> Fraction:
    """Right-neighbour field minus left-neighbour field of part ``k >= 1``."""
    if partition is None:
        partition = build_partition(rows[i])
    if k == 0:
        return Fraction(0)
    part = partition.parts[k - 1]
    t = partition.period
    right = (part.start + 2 * part.extent + 1) % t
    left = (part.start - 1) % t
    return sum((Fraction(a[i][j]) * (zj[right] - zj[left]) for j, zj in enumerate(rows)),
               Fraction(0))


# ---------------------------------------------------------------- orbit certification


@dataclass
class RowCertificate:
    row: int
    gamma: int
    parts: list[list[int]] = field(default_factory=list)
    types: list[str] = field(default_factory=list)
    psi: list[str] = field(default_factory=list)
    bounds: list[bool] = field(default_factory=list)
    l_row_sum: str = "0"


@dataclass
class OrbitCertificate:
    period: int
    symmetric: bool
    rows: list[RowCertificate]
    l_total: str
    l_total_zero: bool

    @property
    def long_rows(self) -> list[RowCertificate]:
        return [r for r in self.rows if r.gamma >= 3]

    @property
    def all_bounds_hold(self) -> bool:
        return all(all(r.bounds) for r in self.rows)

    @property
    def vacuous(self) -> bool:
        return not self.long_rows

    @property
    def contradiction(self) -> bool:
        """Symmetric weights with a row of period >= 3 whose bounds all hold.

        The bounds then force a negative total while anti-symmetry forces
        zero, so this can only be produced by a bug.
        """
        return self.symmetric and bool(self.long_rows) and self.all_bounds_hold and self.l_total_zero

    @property
    def failed_steps(self) -> list[str]:
        out = [f"row {r.row}: part {k} ({t}) bound"
               for r in self.rows for k, (t, ok) in enumerate(zip(r.types, r.bounds), 1) if not ok]
        if not self.l_total_zero:
            out.append("anti-symmetry: sum of L over all row pairs is not zero")
        return out

    def to_dict(self) -> dict:
        d = asdict(self)
        d["vacuous"] = self.vacuous
        d["contradiction"] = self.contradiction
        d["failed_steps"] = self.failed_steps
        return d


def certify_orbit(ws, table) -> OrbitCertificate:
    """Evaluate the per-type Psi bounds and the global L anti-symmetry on an orbit.

    ``ws`` is a :class:`~bithresh.dynamics.WeightedSystem`; ``table`` a
    periodic table whose columns must form a genuine cycle of ``ws``.
    """
    t, n = table.period, table.n
    if n != ws.n:
        raise InvalidInput("table and system disagree on dimension")
    for l in range(t):
        if ws.step(table.column(l)) != table.column(l + 1):
            raise InvalidInput(f"column {l} does not map to column {l + 1}")
    rows = table.rows
    a = ws.a
    total = sum((l_operator(a[i][j], rows[i], rows[j]) for i in range(n) for j in range(n)),
                Fraction(0))
    certs = []
    for i in range(n):
        gamma = row_gamma(rows[i])
        cert = RowCertificate(row=i + 1, gamma=gamma)
        cert.l_row_sum = str(sum((l_operator(a[i][j], rows[i], rows[j]) for j in range(n)),
                                 Fraction(0)))
        if gamma >= 3:
            part = build_partition(rows[i])
            counts = classify_types(rows[i], part)
            cert.parts = [list(p.indices) for p in part.parts]
            cert.types = list(counts.types)
            up, down = ws.kup[i], ws.kdown[i]
            limit = {"00": 0, "11": 0, "10": up - down, "01": down - up}
            for k, kind in enumerate(counts.types, start=1):
                value = psi(a, rows, i, k, part)
                cert.psi.append(str(value))
                cert.bounds.append(value < limit[kind])
        certs.append(cert)
    return OrbitCertificate(t, ws.symmetric, certs, str(total), total == 0)
