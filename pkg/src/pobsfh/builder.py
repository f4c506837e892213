"""Build the sutured Heegaard diagram of a partial open book.

The surface is ``Sigma = P x {0}  cup  -S x {-1}``, glued along the band
sides ``A = dP cap dS``.  It is cut into convex polygons: one rectangle per
P-band on sheet 0, and on sheet -1 one polygon per base disk and per band.
Inside each polygon the curve pieces are straight chords; the chord
arrangement is traced exactly (rational arithmetic) and its faces are glued
across the seams into regions.

* ``alpha_j`` = cocore ``a_j`` on sheet 0, back along ``a_j`` on sheet -1;
* ``beta_j``  = pushoff ``b_j`` on sheet 0, back along ``h(b_j)`` on sheet -1;
* the contact generator is ``{x_j} = {a_j cap b_j on sheet 0}``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Any, Optional

from .diagram import ALPHA, BETA, Curve, Diagram, IntersectionPoint, Region, Segment
from .errors import ArrangementDegenerateError, ValidationError
from .pob import (
    PartialOpenBook,
    band_boundary,
    polygon_boundaries,
    side_point,
    used_slots,
    validate_pob,
    word_pieces,
)

Vec = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Chord:
    id: tuple
    start: tuple
    end: tuple
    family: str
    curve: str
    forward: bool  # does the curve run start -> end


@dataclass
class Polygon:
    key: tuple
    verts: list[tuple]  # counterclockwise in Sigma
    edge_keys: list[tuple]  # edge i joins verts[i] -> verts[i + 1]
    chords: list[Chord] = field(default_factory=list)


# ---------------------------------------------------------------------------
# polygons


def _foot_of(v: tuple) -> Optional[tuple]:
    if v[0] == "corner":
        return (v[1], v[2] + 1)
    if v[0] == "slot":
        return (v[1], v[2])
    return None


def _side_of(v: tuple) -> Optional[tuple]:
    if v[0] == "corner":
        return (v[1], "L" if v[3] == 0 else "R")
    if v[0] == "side":
        return (v[1], "L" if v[2] in ("aL", "bS") else "R")
    return None


def _pair(u: tuple, v: tuple) -> tuple:
    return tuple(sorted((u, v), key=repr))


def _edge_key(u: tuple, v: tuple, sheet0: bool) -> tuple:
    fu, fv = _foot_of(u), _foot_of(v)
    if fu is not None and fu == fv:
        return ("foot0", *fu) if sheet0 else ("foot", *fu, _pair(u, v))
    su, sv = _side_of(u), _side_of(v)
    if su is not None and su == sv:
        return ("side", *su, _pair(u, v))
    return ("free", _pair(u, v))


def _polygon(key: tuple, s_ccw: list[tuple], sheet0: bool) -> Polygon:
    verts = list(s_ccw) if sheet0 else list(reversed(s_ccw))
    n = len(verts)
    keys = [_edge_key(verts[i], verts[(i + 1) % n], sheet0) for i in range(n)]
    return Polygon(key, verts, keys)


def polygons(pob: PartialOpenBook) -> list[Polygon]:
    """The polygons of Sigma with their chords, sheet 0 first."""
    bounds = polygon_boundaries(pob)
    slots = used_slots(pob)
    p_ids = [b.id for b in pob.surface.p_bands]
    curve_no = {bid: i + 1 for i, bid in enumerate(p_ids)}
    out: list[Polygon] = []
    by_key: dict[tuple, Polygon] = {}
    for b in pob.surface.p_bands:
        rim = [v for v in band_boundary(b, slots) if v[0] != "slot"]
        poly = _polygon(("sheet0", b.id), rim, True)
        k = curve_no[b.id]
        poly.chords.append(Chord(("a", b.id, 0), side_point(b.id, "aL"), side_point(b.id, "aR"), ALPHA, f"a{k}", True))
        poly.chords.append(Chord(("b", b.id, 0), side_point(b.id, "bS"), side_point(b.id, "bE"), BETA, f"b{k}", True))
        out.append(poly)
    for key in sorted(bounds, key=repr):
        poly = _polygon(key, bounds[key], False)
        by_key[key] = poly
        out.append(poly)
    for b in pob.surface.p_bands:
        k = curve_no[b.id]
        by_key[("band", b.id)].chords.append(
            Chord(("a", b.id, 1), side_point(b.id, "aL"), side_point(b.id, "aR"), ALPHA, f"a{k}", False)
        )
    for bid in p_ids:
        for i, pc in enumerate(word_pieces(pob, pob.monodromy[bid])):
            by_key[pc.polygon].chords.append(Chord(("h", bid, i), pc.start, pc.end, BETA, f"b{curve_no[bid]}", False))
    return out


# ---------------------------------------------------------------------------
# exact arrangement inside one polygon


class _Degenerate(Exception):
    pass


def _half(v: Vec) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _angle_cmp(a: Vec, b: Vec) -> int:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    if cross == 0:
        raise _Degenerate("parallel half-edges at a vertex")
    return -1 if cross > 0 else 1


def _positions(n: int, attempt: int) -> list[int]:
    if attempt == 0:
        return list(range(n))
    rng = random.Random(attempt)
    xs, x = [], 0
    for _ in range(n):
        x += rng.randint(1, 4)
        xs.append(x)
    return xs


@dataclass
class Arrangement:
    nfaces: int
    boundary_face: list[int]  # face inside boundary edge i
    piece_faces: dict[tuple, list[tuple[int, int]]]  # chord id -> [(left, right)] along stored direction
    nodes: dict[tuple, list[Any]]  # chord id -> [start, crossing..., end]
    rotations: dict[tuple, list[tuple[tuple, int, int]]]  # crossing -> ccw [(chord id, +-1, left face)]


def arrange(poly: Polygon, attempt: int = 0) -> Arrangement:
    n = len(poly.verts)
    xs = _positions(2 * n, attempt)
    vpos = {v: (Fraction(xs[2 * i]), Fraction(xs[2 * i]) ** 2) for i, v in enumerate(poly.verts)}
    vidx = {v: i for i, v in enumerate(poly.verts)}
    bends = [(Fraction(xs[2 * i + 1]), Fraction(xs[2 * i + 1]) ** 2) for i in range(n)]

    chords = poly.chords
    crossings: dict[tuple, Vec] = {}
    along: dict[tuple, list[tuple[Fraction, Any]]] = {c.id: [] for c in chords}
    for i in range(len(chords)):
        for j in range(i + 1, len(chords)):
            c1, c2 = chords[i], chords[j]
            a, b = sorted((vidx[c1.start], vidx[c1.end]))
            if (a < vidx[c2.start] < b) == (a < vidx[c2.end] < b):
                continue
            p, q = vpos[c1.start], vpos[c1.end]
            r, s = vpos[c2.start], vpos[c2.end]
            d1 = (q[0] - p[0], q[1] - p[1])
            d2 = (s[0] - r[0], s[1] - r[1])
            den = d1[0] * d2[1] - d1[1] * d2[0]
            t = ((r[0] - p[0]) * d2[1] - (r[1] - p[1]) * d2[0]) / den
            u = ((r[0] - p[0]) * d1[1] - (r[1] - p[1]) * d1[0]) / den
            key = ("X", poly.key, c1.id, c2.id)
            crossings[key] = (p[0] + t * d1[0], p[1] + t * d1[1])
            along[c1.id].append((t, key))
            along[c2.id].append((u, key))

    pos: dict[Any, Vec] = dict(vpos)
    pos.update(crossings)
    # edges: (tail, head, dir at tail, dir at head, tag)
    edges: list[tuple[Any, Any, Vec, Vec, tuple]] = []
    for i in range(n):
        u, v = poly.verts[i], poly.verts[(i + 1) % n]
        bp = bends[i]
        edges.append((u, v, (bp[0] - pos[u][0], bp[1] - pos[u][1]), (bp[0] - pos[v][0], bp[1] - pos[v][1]), ("bnd", i)))
    nodes: dict[tuple, list[Any]] = {}
    for c in chords:
        ts = sorted(along[c.id], key=lambda tk: tk[0])
        if any(ts[k][0] == ts[k + 1][0] for k in range(len(ts) - 1)):
            raise _Degenerate("three chords through one point")
        seq = [c.start] + [k for _, k in ts] + [c.end]
        nodes[c.id] = seq
        for k in range(len(seq) - 1):
            u, v = seq[k], seq[k + 1]
            d = (pos[v][0] - pos[u][0], pos[v][1] - pos[u][1])
            edges.append((u, v, d, (-d[0], -d[1]), ("chord", c.id, k)))

    rot: dict[Any, list[tuple[int, int]]] = {}
    dirs: dict[tuple[int, int], Vec] = {}
    for e, (u, v, du, dv, _tag) in enumerate(edges):
        rot.setdefault(u, []).append((e, 0))
        rot.setdefault(v, []).append((e, 1))
        dirs[(e, 0)] = du
        dirs[(e, 1)] = dv
    for v, hs in rot.items():
        hs.sort(key=cmp_to_key(lambda h1, h2: _angle_cmp(dirs[h1], dirs[h2])))
    where = {h: (v, k) for v, hs in rot.items() for k, h in enumerate(hs)}

    def head(h: tuple[int, int]) -> Any:
        return edges[h[0]][1] if h[1] == 0 else edges[h[0]][0]

    face_of: dict[tuple[int, int], int] = {}
    nf = 0
    for start in sorted(dirs):
        if start in face_of:
            continue
        h = start
        while h not in face_of:
            face_of[h] = nf
            twin = (h[0], 1 - h[1])
            v, k = where[twin]
            h = rot[v][k - 1]
        if h != start:
            raise _Degenerate("inconsistent face cycle")
        nf += 1
    outer = face_of[(0, 1)]
    if any(face_of[(i, 1)] != outer for i in range(n)):
        raise _Degenerate("boundary not on a single outer face")
    remap = {}
    for f in range(nf):
        if f != outer:
            remap[f] = len(remap)
    fo = {h: remap.get(f, -1) for h, f in face_of.items()}

    expected = 1 + len(chords) + len(crossings)
    if len(remap) != expected:
        raise _Degenerate(f"{len(remap)} faces, expected {expected}")

    piece_faces: dict[tuple, list[tuple[int, int]]] = {c.id: [] for c in chords}
    chord_edge: dict[tuple[int, int], tuple[tuple, int]] = {}
    for e, (_u, _v, _du, _dv, tag) in enumerate(edges):
        if tag[0] == "chord":
            piece_faces[tag[1]].append((fo[(e, 0)], fo[(e, 1)]))
            chord_edge[(e, 0)] = (tag[1], 1)
            chord_edge[(e, 1)] = (tag[1], -1)
    rotations = {
        x: [(*chord_edge[h], fo[h]) for h in rot[x]] for x in crossings
    }
    return Arrangement(len(remap), [fo[(i, 0)] for i in range(n)], piece_faces, nodes, rotations)


# ---------------------------------------------------------------------------
# assembly


class _UF:
    def __init__(self) -> None:
        self.parent: dict[Any, Any] = {}

    def find(self, a: Any) -> Any:
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: Any, b: Any) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _arrangements(polys: list[Polygon], attempts: int = 16) -> list[Arrangement]:
    out = []
    for poly in polys:
        for attempt in range(attempts):
            try:
                out.append(arrange(poly, attempt))
                break
            except _Degenerate:
                continue
        else:
            raise ArrangementDegenerateError(f"no generic placement found for polygon {poly.key}")
    return out


def build_diagram(pob: PartialOpenBook, name: Optional[str] = None) -> Diagram:
    """The sutured diagram of ``pob`` with its contact generator marked."""
    violations = validate_pob(pob)
    if violations:
        raise ValidationError(violations)
    polys = polygons(pob)
    arrs = _arrangements(polys)

    # glue faces across seams; count cells off the curves for chi
    uf = _UF()
    faces = [(pi, f) for pi, a in enumerate(arrs) for f in range(a.nfaces)]
    for f in faces:
        uf.find(f)
    edge_sites: dict[tuple, list[tuple[int, int]]] = {}
    for pi, poly in enumerate(polys):
        for i, key in enumerate(poly.edge_keys):
            edge_sites.setdefault(key, []).append((pi, arrs[pi].boundary_face[i]))
    boundary_edges = []
    for key, sites in edge_sites.items():
        if len(sites) == 2:
            uf.union(sites[0], sites[1])
        elif len(sites) == 1:
            boundary_edges.append(key)
        else:
            raise ArrangementDegenerateError(f"edge {key} shared by {len(sites)} polygons")

    order: dict[Any, str] = {}
    for f in faces:
        r = uf.find(f)
        if r not in order:
            order[r] = f"R{len(order) + 1}"

    def region(pi: int, f: int) -> str:
        return order[uf.find((pi, f))]

    chi: dict[str, int] = {r: 0 for r in order.values()}
    for f in faces:
        chi[region(*f)] += 1
    for key, sites in edge_sites.items():
        chi[region(*sites[0])] -= 1
    # non-curve vertices all lie on the boundary of Sigma
    vert_region: dict[tuple, str] = {}
    bnd_uf = _UF()
    for pi, poly in enumerate(polys):
        n = len(poly.verts)
        for i, key in enumerate(poly.edge_keys):
            if len(edge_sites[key]) != 1:
                continue
            u, v = poly.verts[i], poly.verts[(i + 1) % n]
            bnd_uf.union(u, v)
            for w in (u, v):
                vert_region[w] = region(pi, arrs[pi].boundary_face[i])
    for r in vert_region.values():
        chi[r] += 1
    meets = {region(*edge_sites[k][0]) for k in boundary_edges}
    n_boundary = len({bnd_uf.find(w) for w in vert_region})

    # curves
    chord_home: dict[tuple, tuple[int, Chord]] = {}
    for pi, poly in enumerate(polys):
        for c in poly.chords:
            chord_home[c.id] = (pi, c)
    p_ids = [b.id for b in pob.surface.p_bands]
    routes: dict[str, list[tuple[tuple, bool]]] = {}
    for k, bid in enumerate(p_ids, start=1):
        routes[f"a{k}"] = [(("a", bid, 0), True), (("a", bid, 1), False)]
        n_pieces = len(word_pieces(pob, pob.monodromy[bid]))
        routes[f"b{k}"] = [(("b", bid, 0), True)] + [(("h", bid, i), False) for i in reversed(range(n_pieces))]

    point_names: dict[Any, str] = {}
    for k, bid in enumerate(p_ids, start=1):
        point_names[("X", ("sheet0", bid), ("a", bid, 0), ("b", bid, 0))] = f"x{k}"

    def walk(cid: str) -> list[tuple]:
        items: list[tuple] = []
        for chord_id, fwd in routes[cid]:
            pi, _c = chord_home[chord_id]
            a = arrs[pi]
            seq = a.nodes[chord_id]
            pieces = a.piece_faces[chord_id]
            if fwd:
                for k in range(len(pieces)):
                    l, r = pieces[k]
                    items.append(("piece", region(pi, l), region(pi, r)))
                    if k + 1 < len(seq) - 1:
                        items.append(("pt", seq[k + 1]))
            else:
                for k in reversed(range(len(pieces))):
                    l, r = pieces[k]
                    items.append(("piece", region(pi, r), region(pi, l)))
                    if k >= 1:
                        items.append(("pt", seq[k]))
        return items

    walks = {cid: walk(cid) for cid in routes}
    for k in range(len(p_ids)):
        for it in walks[f"a{k + 1}"]:
            if it[0] == "pt" and it[1] not in point_names:
                point_names[it[1]] = f"p{sum(1 for v in point_names.values() if v.startswith('p')) + 1}"

    curves: dict[str, Curve] = {}
    segments: list[Segment] = []
    for cid, items in walks.items():
        first = next(i for i, it in enumerate(items) if it[0] == "pt")
        items = items[first:] + items[:first]
        pts = [point_names[it[1]] for it in items if it[0] == "pt"]
        fam = ALPHA if cid.startswith("a") else BETA
        curves[cid] = Curve(cid, fam, tuple(pts))
        idx = -1
        side: Optional[tuple[str, str]] = None
        for it in items + [items[0]]:
            if it[0] == "pt":
                if idx >= 0:
                    assert side is not None
                    segments.append(Segment(cid, idx, pts[idx], pts[(idx + 1) % len(pts)], side[0], side[1]))
                idx += 1
                side = None
                if idx == len(pts):
                    break
            else:
                if side is None:
                    side = (it[1], it[2])
                elif side != (it[1], it[2]):
                    raise ArrangementDegenerateError(f"segment of {cid} changes sides across a seam")

    points = []
    for pi, a in enumerate(arrs):
        for x, ring in a.rotations.items():
            alpha_chord = next(c for c in polys[pi].chords if c.family == ALPHA and c.id in x[2:])
            want = (alpha_chord.id, 1 if alpha_chord.forward else -1)
            k = next(i for i, (c, d, _f) in enumerate(ring) if (c, d) == want)
            ring = ring[k:] + ring[:k]
            points.append(IntersectionPoint(point_names[x], tuple(region(pi, f) for _c, _d, f in ring)))

    regions = tuple(Region(r, chi[r], r in meets) for r in sorted(set(order.values()), key=lambda s: int(s[1:])))
    return Diagram(
        name=name if name is not None else pob.name,
        euler_char=pob.surface.euler_char - len(p_ids),
        boundary_components=n_boundary,
        alpha=tuple(curves[f"a{k + 1}"] for k in range(len(p_ids))),
        beta=tuple(curves[f"b{k + 1}"] for k in range(len(p_ids))),
        points=tuple(sorted(points, key=lambda p: p.id)),
        segments=tuple(segments),
        regions=regions,
        contact_generator=tuple(f"x{k + 1}" for k in range(len(p_ids))),
        meta={"source": "pob", "polygons": [p.key for p in polys]},
    )
