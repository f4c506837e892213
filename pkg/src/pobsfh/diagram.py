"""Combinatorial sutured Heegaard diagrams and the ``.sfd`` file format.

A diagram is stored as incidence data: two families of oriented closed
curves given as cyclic lists of intersection points, the segments between
consecutive points with the regions on either side, and at every point the
four regions met around it.  Nothing geometric is stored.

Sector convention: the four sector entries of a point are listed
counterclockwise (with respect to the orientation of the surface), starting
with the sector immediately counterclockwise of the outgoing alpha direction.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from .errors import ParseError

ALPHA = "alpha"
BETA = "beta"


@dataclass(frozen=True)
class Curve:
    id: str
    family: str
    points: tuple[str, ...]

    @property
    def segment_count(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class Segment:
    """The arc of ``curve`` from ``points[index]`` to ``points[index + 1]``."""

    curve: str
    index: int
    start: str
    end: str
    left: str
    right: str

    @property
    def key(self) -> tuple[str, int]:
        return (self.curve, self.index)


@dataclass(frozen=True)
class IntersectionPoint:
    id: str
    sectors: tuple[str, ...]


@dataclass(frozen=True)
class Region:
    id: str
    chi: int
    meets_boundary: bool


@dataclass(frozen=True)
class Violation:
    rule: str
    entity: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.entity}: {self.message}"


@dataclass(frozen=True, eq=False)
class Diagram:
    name: str
    euler_char: int
    boundary_components: int
    alpha: tuple[Curve, ...]
    beta: tuple[Curve, ...]
    points: tuple[IntersectionPoint, ...]
    segments: tuple[Segment, ...]
    regions: tuple[Region, ...]
    contact_generator: Optional[tuple[str, ...]] = None
    meta: Mapping[str, Any] = field(default_factory=dict)

    # -- lookups (valid diagrams only) ------------------------------------
    @cached_property
    def curves(self) -> dict[str, Curve]:
        return {c.id: c for c in self.alpha + self.beta}

    @cached_property
    def point_map(self) -> dict[str, IntersectionPoint]:
        return {p.id: p for p in self.points}

    @cached_property
    def region_map(self) -> dict[str, Region]:
        return {r.id: r for r in self.regions}

    @cached_property
    def region_ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.regions)

    @cached_property
    def interior_regions(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.regions if not r.meets_boundary)

    @cached_property
    def boundary_regions(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.regions if r.meets_boundary)

    @cached_property
    def segment_map(self) -> dict[tuple[str, int], Segment]:
        return {s.key: s for s in self.segments}

    @cached_property
    def point_curves(self) -> dict[str, dict[str, tuple[str, int]]]:
        """point id -> {family: (curve id, position)}."""
        out: dict[str, dict[str, tuple[str, int]]] = {p.id: {} for p in self.points}
        for c in self.alpha + self.beta:
            for i, p in enumerate(c.points):
                out.setdefault(p, {})[c.family] = (c.id, i)
        return out

    @cached_property
    def corner_counts(self) -> dict[str, int]:
        counts = Counter(r for p in self.points for r in p.sectors)
        return {r.id: counts.get(r.id, 0) for r in self.regions}

    def curve_segments(self, curve_id: str) -> list[Segment]:
        c = self.curves[curve_id]
        return [self.segment_map[(curve_id, i)] for i in range(len(c.points))]

    def incident_segments(self, point: str, family: str) -> tuple[Segment, Segment]:
        """(incoming, outgoing) segments of ``family`` at ``point``."""
        cid, i = self.point_curves[point][family]
        n = len(self.curves[cid].points)
        return self.segment_map[(cid, (i - 1) % n)], self.segment_map[(cid, i)]

    def family(self, family: str) -> tuple[Curve, ...]:
        return self.alpha if family == ALPHA else self.beta

    # -- serialisation ----------------------------------------------------
    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "name": self.name,
            "euler_char": self.euler_char,
            "boundary_components": self.boundary_components,
            "alpha": [list(c.points) for c in self.alpha],
            "beta": [list(c.points) for c in self.beta],
            "points": [{"id": p.id, "sectors": list(p.sectors)} for p in sorted(self.points, key=lambda p: p.id)],
            "segments": [
                {"curve": s.curve, "from": s.start, "to": s.end, "left": s.left, "right": s.right}
                for s in sorted(self.segments, key=lambda s: (s.curve, s.start, s.index))
            ],
            "regions": [
                {"id": r.id, "chi": r.chi, "meets_boundary": r.meets_boundary}
                for r in sorted(self.regions, key=lambda r: r.id)
            ],
        }
        if self.contact_generator is not None:
            d["contact_generator"] = list(self.contact_generator)
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def curve_ids(family: str, n: int) -> list[str]:
    prefix = "a" if family == ALPHA else "b"
    return [f"{prefix}{i + 1}" for i in range(n)]


def diagram_from_dict(data: Mapping[str, Any]) -> Diagram:
    """Parse an ``.sfd`` payload.  Structural reference errors are left for :func:`validate`."""
    try:
        families = {}
        for fam in (ALPHA, BETA):
            raw = data.get(fam, [])
            curves = []
            for cid, entry in zip(curve_ids(fam, len(raw)), raw):
                if isinstance(entry, Mapping):
                    cid = str(entry["id"])
                    entry = entry["points"]
                curves.append(Curve(cid, fam, tuple(str(p) for p in entry)))
            families[fam] = tuple(curves)
        points = tuple(
            IntersectionPoint(str(p["id"]), tuple(str(r) for r in p["sectors"])) for p in data.get("points", [])
        )
        regions = tuple(
            Region(str(r["id"]), int(r["chi"]), bool(r.get("meets_boundary", False))) for r in data.get("regions", [])
        )
        curve_points = {c.id: c.points for c in families[ALPHA] + families[BETA]}
        segments = []
        for s in data.get("segments", []):
            cid = str(s["curve"])
            start = str(s["from"])
            pts = curve_points.get(cid, ())
            index = pts.index(start) if start in pts else -1
            segments.append(Segment(cid, index, start, str(s["to"]), str(s["left"]), str(s["right"])))
        cg = data.get("contact_generator")
        return Diagram(
            name=str(data.get("name", "")),
            euler_char=int(data["euler_char"]),
            boundary_components=int(data["boundary_components"]),
            alpha=families[ALPHA],
            beta=families[BETA],
            points=points,
            segments=tuple(segments),
            regions=regions,
            contact_generator=None if cg is None else tuple(str(p) for p in cg),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed diagram: {exc!r}") from exc


def load_diagram(source: Union[str, Path, Mapping[str, Any]]) -> Diagram:
    if isinstance(source, Mapping):
        return diagram_from_dict(source)
    try:
        data = json.loads(Path(source).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: not valid JSON: {exc}") from exc
    return diagram_from_dict(data)


def dump_diagram(diagram: Diagram, path: Union[str, Path]) -> None:
    Path(path).write_text(diagram.dumps(), encoding="utf-8")


# ---------------------------------------------------------------------------
# validation


def sector_patterns(
    a_in: Segment, a_out: Segment, b_in: Segment, b_out: Segment
) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """The two admissible sector lists at a point, one per local sign."""
    # The alpha half-edges fix sectors as (left out, left in, right in, right out);
    # beta either leaves or arrives between alpha-out and alpha-in.
    with_out = (b_out.right, b_out.left, b_in.left, b_in.right)
    with_in = (b_in.left, b_in.right, b_out.right, b_out.left)
    return with_out, with_in


def validate(diagram: Diagram) -> list[Violation]:
    """Check every structural invariant; returns an empty list iff the diagram is valid."""
    out: list[Violation] = []
    v = out.append
    region_ids = [r.id for r in diagram.regions]
    regions = set(region_ids)
    point_ids = [p.id for p in diagram.points]
    points = set(point_ids)

    for rid, n in Counter(region_ids).items():
        if n > 1:
            v(Violation("duplicate-id", rid, "region listed twice"))
    for pid, n in Counter(point_ids).items():
        if n > 1:
            v(Violation("duplicate-id", pid, "point listed twice"))
    cids = [c.id for c in diagram.alpha + diagram.beta]
    for cid, n in Counter(cids).items():
        if n > 1:
            v(Violation("duplicate-id", cid, "curve listed twice"))

    if diagram.boundary_components < 1:
        v(Violation("no-boundary", diagram.name, "boundary_components must be positive"))

    membership: dict[str, Counter] = {p: Counter() for p in points}
    for c in diagram.alpha + diagram.beta:
        if not c.points:
            v(Violation("empty-curve", c.id, "curve has no intersection points"))
        for p in c.points:
            if p not in points:
                v(Violation("dangling-point", c.id, f"references unknown point {p}"))
            else:
                membership[p][c.family] += 1
    for p, fams in membership.items():
        for fam in (ALPHA, BETA):
            if fams[fam] != 1:
                v(Violation("point-incidence", p, f"lies on {fams[fam]} {fam} curves (expected 1)"))

    expected = {(c.id, i) for c in diagram.alpha + diagram.beta for i in range(len(c.points))}
    seen: Counter = Counter()
    curve_pts = {c.id: c.points for c in diagram.alpha + diagram.beta}
    for s in diagram.segments:
        if s.curve not in curve_pts:
            v(Violation("dangling-curve", f"{s.curve}:{s.start}", "segment on unknown curve"))
            continue
        if s.index < 0:
            v(Violation("segment-endpoint", f"{s.curve}:{s.start}", "start point not on curve"))
            continue
        pts = curve_pts[s.curve]
        if pts[(s.index + 1) % len(pts)] != s.end:
            v(Violation("segment-endpoint", f"{s.curve}:{s.start}", f"end {s.end} is not the next point"))
        for side in (s.left, s.right):
            if side not in regions:
                v(Violation("dangling-region", f"{s.curve}:{s.start}", f"references unknown region {side}"))
        seen[s.key] += 1
    for key in sorted(expected - set(seen)):
        v(Violation("missing-segment", f"{key[0]}:{key[1]}", "no segment record"))
    for key, n in seen.items():
        if n > 1:
            v(Violation("duplicate-segment", f"{key[0]}:{key[1]}", "segment listed twice"))

    for p in diagram.points:
        if len(p.sectors) != 4:
            v(Violation("sector-count", p.id, f"{len(p.sectors)} sectors (expected 4)"))
        for r in p.sectors:
            if r not in regions:
                v(Violation("dangling-region", p.id, f"sector references unknown region {r}"))

    if out:
        # the remaining checks need consistent references
        return out

    for p in diagram.points:
        a_in, a_out = diagram.incident_segments(p.id, ALPHA)
        b_in, b_out = diagram.incident_segments(p.id, BETA)
        head = (a_out.left, a_in.left, a_in.right, a_out.right)
        if tuple(p.sectors) != head:
            v(Violation("sector-mismatch", p.id, "sectors disagree with alpha side regions"))
            continue
        if tuple(p.sectors) not in sector_patterns(a_in, a_out, b_in, b_out):
            v(Violation("sector-mismatch", p.id, "sectors disagree with beta side regions"))

    total = sum(r.chi for r in diagram.regions) - len(diagram.segments) + len(diagram.points)
    if total != diagram.euler_char:
        v(Violation("euler-mismatch", diagram.name, f"sum chi - E + V = {total}, declared {diagram.euler_char}"))

    nb = sum(1 for r in diagram.regions if r.meets_boundary)
    if diagram.boundary_components >= 1 and not 1 <= nb <= diagram.boundary_components:
        v(Violation("boundary-regions", diagram.name,
                    f"{nb} boundary regions for {diagram.boundary_components} boundary circles"))

    cg = diagram.contact_generator
    if cg is not None:
        for p in cg:
            if p not in points:
                v(Violation("contact-generator", p, "unknown point"))
        if all(p in points for p in cg):
            for fam in (ALPHA, BETA):
                hit = Counter(diagram.point_curves[p][fam][0] for p in cg)
                for c in diagram.family(fam):
                    if hit[c.id] != 1:
                        v(Violation("contact-generator", c.id, f"{hit[c.id]} contact points on curve (expected 1)"))
    return out


def relabel(diagram: Diagram, points: Mapping[str, str], regions: Mapping[str, str],
            curves: Optional[Mapping[str, str]] = None) -> Diagram:
    """Rename ids (used to test label independence)."""
    cmap = dict(curves or {})

    def cur(c: Curve) -> Curve:
        return Curve(cmap.get(c.id, c.id), c.family, tuple(points[p] for p in c.points))

    return Diagram(
        name=diagram.name,
        euler_char=diagram.euler_char,
        boundary_components=diagram.boundary_components,
        alpha=tuple(cur(c) for c in diagram.alpha),
        beta=tuple(cur(c) for c in diagram.beta),
        points=tuple(IntersectionPoint(points[p.id], tuple(regions[r] for r in p.sectors)) for p in diagram.points),
        segments=tuple(
            Segment(cmap.get(s.curve, s.curve), s.index, points[s.start], points[s.end], regions[s.left], regions[s.right])
            for s in diagram.segments
        ),
        regions=tuple(Region(regions[r.id], r.chi, r.meets_boundary) for r in diagram.regions),
        contact_generator=None if diagram.contact_generator is None else tuple(points[p] for p in diagram.contact_generator),
    )


def swap_families(diagram: Diagram) -> Diagram:
    """Exchange the roles of the two curve families.

    The point sector lists are rotated so the new alpha family (the old beta)
    leads, keeping the counterclockwise convention.
    """
    new_alpha = tuple(Curve(c.id, ALPHA, c.points) for c in diagram.beta)
    new_beta = tuple(Curve(c.id, BETA, c.points) for c in diagram.alpha)
    pts = []
    for p in diagram.points:
        b_in, b_out = diagram.incident_segments(p.id, BETA)
        pts.append(IntersectionPoint(p.id, (b_out.left, b_in.left, b_in.right, b_out.right)))
    return Diagram(
        name=diagram.name,
        euler_char=diagram.euler_char,
        boundary_components=diagram.boundary_components,
        alpha=new_alpha,
        beta=new_beta,
        points=tuple(pts),
        segments=diagram.segments,
        regions=diagram.regions,
        contact_generator=diagram.contact_generator,
    )
