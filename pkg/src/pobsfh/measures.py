"""Local combinatorics of a valid diagram: domains, index quantities, periodic domains."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .diagram import ALPHA, BETA, Diagram
from .errors import DomainMismatchError
from .linalg import integer_kernel, nonneg_nonzero_in_lattice, rational_rank


@dataclass(frozen=True)
class Domain:
    """Integer multiplicities on regions (missing regions count as 0)."""

    mult: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "mult", {k: v for k, v in self.mult.items() if v})

    def __getitem__(self, region: str) -> int:
        return self.mult.get(region, 0)

    def __add__(self, other: "Domain") -> "Domain":
        out = dict(self.mult)
        for k, v in other.mult.items():
            out[k] = out.get(k, 0) + v
        return Domain(out)

    def __neg__(self) -> "Domain":
        return Domain({k: -v for k, v in self.mult.items()})

    def __sub__(self, other: "Domain") -> "Domain":
        return self + (-other)

    def __rmul__(self, k: int) -> "Domain":
        return Domain({r: k * v for r, v in self.mult.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Domain) and self.mult == other.mult

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.mult.items())))

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(sorted(self.mult))

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.mult.values())

    def to_vector(self, regions: Sequence[str]) -> list[int]:
        return [self[r] for r in regions]

    @classmethod
    def from_regions(cls, regions: Iterable[str]) -> "Domain":
        out: dict[str, int] = {}
        for r in regions:
            out[r] = out.get(r, 0) + 1
        return cls(out)

    def __repr__(self) -> str:
        body = " + ".join(f"{v}*{k}" if v != 1 else k for k, v in sorted(self.mult.items()))
        return f"Domain({body or '0'})"


# ---------------------------------------------------------------------------
# balancedness, niceness


def _components(diagram: Diagram) -> list[set[str]]:
    adj: dict[str, set[str]] = {r: set() for r in diagram.region_ids}
    for s in diagram.segments:
        adj[s.left].add(s.right)
        adj[s.right].add(s.left)
    seen: set[str] = set()
    comps = []
    for r in diagram.region_ids:
        if r in seen:
            continue
        stack, comp = [r], set()
        while stack:
            q = stack.pop()
            if q in comp:
                continue
            comp.add(q)
            stack.extend(adj[q] - comp)
        seen |= comp
        comps.append(comp)
    return comps


def _region_boundary_matrix(diagram: Diagram) -> tuple[list[tuple[str, int]], list[list[int]]]:
    """Rows: segments; columns: interior regions; entry = coefficient of the segment in d(region)."""
    seg_keys = sorted(diagram.segment_map)
    cols = {r: j for j, r in enumerate(diagram.interior_regions)}
    rows = []
    for key in seg_keys:
        s = diagram.segment_map[key]
        row = [0] * len(cols)
        if s.left in cols:
            row[cols[s.left]] += 1
        if s.right in cols:
            row[cols[s.right]] -= 1
        rows.append(row)
    return seg_keys, rows


def curve_class_rank(diagram: Diagram, family: str) -> int:
    """Rank of the span of the ``family`` curves in H_1(Sigma; Q).

    A rational combination of curves is null-homologous iff it bounds a
    combination of regions avoiding the boundary of the surface, so the rank
    is ``rank[dR | C] - rank[dR]``, with ``dR`` the region boundary matrix and
    ``C`` the curve indicator columns.
    """
    seg_keys, rows = _region_boundary_matrix(diagram)
    curves = diagram.family(family)
    aug = []
    for key, row in zip(seg_keys, rows):
        aug.append(row + [1 if key[0] == c.id else 0 for c in curves])
    return rational_rank(aug) - rational_rank(rows) if rows else 0


@dataclass(frozen=True)
class BalanceReport:
    balanced: bool
    reasons: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.balanced


def check_balanced(diagram: Diagram) -> BalanceReport:
    reasons = []
    if len(diagram.alpha) != len(diagram.beta):
        reasons.append(f"|alpha| = {len(diagram.alpha)} != |beta| = {len(diagram.beta)}")
    bnd = set(diagram.boundary_regions)
    for comp in _components(diagram):
        if not comp & bnd:
            reasons.append("closed component containing regions " + ", ".join(sorted(comp)))
    for fam in (ALPHA, BETA):
        n = len(diagram.family(fam))
        rank = curve_class_rank(diagram, fam)
        if rank != n:
            reasons.append(f"{fam} curves dependent in H_1(Sigma; Q): rank {rank} < {n}")
    return BalanceReport(not reasons, tuple(reasons))


@dataclass(frozen=True)
class NicenessReport:
    nice: bool
    offenders: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.nice


def is_nice(diagram: Diagram) -> NicenessReport:
    corners = diagram.corner_counts
    bad = tuple(
        sorted(r.id for r in diagram.regions if not r.meets_boundary and not (r.chi == 1 and corners[r.id] in (2, 4)))
    )
    return NicenessReport(not bad, bad)


# ---------------------------------------------------------------------------
# index quantities


def euler_measure(diagram: Diagram, d: Domain) -> Fraction:
    corners = diagram.corner_counts
    return sum(
        (v * (diagram.region_map[r].chi - Fraction(corners[r], 4)) for r, v in d.mult.items()),
        Fraction(0),
    )


def point_measure(diagram: Diagram, d: Domain, g: Iterable[str]) -> Fraction:
    pm = diagram.point_map
    return sum((Fraction(sum(d[r] for r in pm[p].sectors), 4) for p in g), Fraction(0))


@dataclass(frozen=True)
class BoundaryChain:
    segments: Mapping[tuple[str, int], int]
    defect: Mapping[str, Mapping[str, int]]  # family -> point -> coefficient

    def family_defect(self, family: str) -> dict[str, int]:
        return {p: v for p, v in self.defect[family].items() if v}

    def is_zero(self) -> bool:
        return not any(self.segments.values())


def boundary_chain(diagram: Diagram, d: Domain) -> BoundaryChain:
    """Segment multiplicities of the boundary of ``d`` and their point defects.

    The boundary of a region runs with the region on its left, so a segment
    appears with multiplicity ``d(left) - d(right)``.  The defect of a family
    at a point is (incoming multiplicity) - (outgoing multiplicity) along that
    family's curve.
    """
    segs = {s.key: d[s.left] - d[s.right] for s in diagram.segments}
    defect: dict[str, dict[str, int]] = {}
    for fam in (ALPHA, BETA):
        out: dict[str, int] = {}
        for c in diagram.family(fam):
            n = len(c.points)
            for i, p in enumerate(c.points):
                out[p] = segs[(c.id, (i - 1) % n)] - segs[(c.id, i)]
        defect[fam] = out
    return BoundaryChain(segs, defect)


def connection_defect(x: Sequence[str], y: Sequence[str]) -> dict[str, int]:
    """The first-family defect of a domain from ``x`` to ``y``: +1 on y, -1 on x."""
    out: dict[str, int] = {}
    for p in y:
        out[p] = out.get(p, 0) + 1
    for p in x:
        out[p] = out.get(p, 0) - 1
    return {p: v for p, v in out.items() if v}


def connects(diagram: Diagram, d: Domain, x: Sequence[str], y: Sequence[str], first: str = ALPHA) -> bool:
    """Does ``d`` connect ``x`` to ``y`` when ``first`` is the leading family?"""
    bc = boundary_chain(diagram, d)
    second = BETA if first == ALPHA else ALPHA
    want = connection_defect(x, y)
    return bc.family_defect(first) == want and bc.family_defect(second) == {p: -v for p, v in want.items()}


def maslov_index(
    diagram: Diagram, d: Domain, x: Sequence[str], y: Sequence[str], first: str = ALPHA, check: bool = True
) -> Fraction:
    if check and not connects(diagram, d, x, y, first):
        raise DomainMismatchError("domain does not connect the given generators")
    return euler_measure(diagram, d) + point_measure(diagram, d, x) + point_measure(diagram, d, y)


# ---------------------------------------------------------------------------
# periodic domains and admissibility


def defect_matrix(diagram: Diagram, regions: Optional[Sequence[str]] = None) -> list[list[int]]:
    """Rows: (family, point) defects; columns: regions (default: interior regions)."""
    regions = list(diagram.interior_regions if regions is None else regions)
    col = {r: j for j, r in enumerate(regions)}
    rows = []
    for fam in (ALPHA, BETA):
        for c in diagram.family(fam):
            n = len(c.points)
            segs = diagram.curve_segments(c.id)
            for i, _p in enumerate(c.points):
                row = [0] * len(regions)
                s_in, s_out = segs[(i - 1) % n], segs[i]
                for s, sign in ((s_in, 1), (s_out, -1)):
                    if s.left in col:
                        row[col[s.left]] += sign
                    if s.right in col:
                        row[col[s.right]] -= sign
                rows.append(row)
    return rows


def periodic_domains(diagram: Diagram) -> list[Domain]:
    """Z-basis of periodic domains (zero defect everywhere, zero on boundary regions)."""
    regions = diagram.interior_regions
    if not regions:
        return []
    rows = defect_matrix(diagram, regions)
    basis = integer_kernel(rows, len(regions))
    return [Domain(dict(zip(regions, v))) for v in basis]


def check_admissibility(diagram: Diagram, basis: Optional[Sequence[Domain]] = None) -> bool:
    """No nonzero periodic domain has only nonnegative multiplicities."""
    if basis is None:
        basis = periodic_domains(diagram)
    regions = diagram.interior_regions
    return not nonneg_nonzero_in_lattice([p.to_vector(regions) for p in basis])
