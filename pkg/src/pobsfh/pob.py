"""Abstract partial open books encoded as disks with bands, and the ``.pob`` format.

The page ``S`` is a union of base disks with bands (1-handles) attached along
feet, which are position intervals on the disk boundaries.  The bands flagged
``is_P`` are the handles ``P_1, ..., P_r``; the disks together with the other
bands form the closure of ``S - P``.

Band coordinates: a band is a rectangle ``[0, 1] x [0, 1]`` with ``t`` running
from foot 1 to foot 2 and ``s`` across it.  Side ``L`` is ``s = 0`` and side
``R`` is ``s = 1``; both sides lie on the boundary of ``S``.  Strand slots are
ordered by increasing ``s``; at foot 1 they appear counterclockwise on the
disk boundary in increasing slot order, at foot 2 in decreasing slot order.

The cocore ``a_j`` of a P-band crosses it at ``t = 1/2`` from side L to side
R.  Its pushoff ``b_j`` starts on side L just after ``a_j`` (in the boundary
orientation, i.e. at ``t > 1/2``) and ends on side R just before it
(``t < 1/2``), crossing ``a_j`` once with positive sign.

Monodromy words.  The image ``h(b_j)`` is the list of band passes it makes,
read from its start on side L of band ``j`` to its end on side R:

* ``[]`` means ``h(b_j) = b_j``;
* otherwise the first token ``[j, d, k]`` leaves band ``j`` through foot 2
  (``d = "+"``) or foot 1 (``d = "-"``) at slot ``k``; the last token
  ``[j, d, k]`` enters band ``j`` through foot 1 (``"+"``) or foot 2 (``"-"``)
  at slot ``k`` and runs to the end point; every token in between is a full
  pass through a band, foot 1 to foot 2 for ``"+"``, at slot ``k`` on both
  feet.  Consecutive passes are joined by a chord across a base disk.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Union

from .diagram import Violation
from .errors import ParseError

H_A_IDENTITY_VIOLATION = "H_A_IDENTITY_VIOLATION"
NOT_EMBEDDING = "NOT_EMBEDDING"
DISCONNECTED_SURFACE = "DISCONNECTED_SURFACE"
MISSING_IMAGE = "MISSING_IMAGE"
BAD_FOOT = "BAD_FOOT"
BAD_TOKEN = "BAD_TOKEN"
NOT_CONNECTABLE = "NOT_CONNECTABLE"


@dataclass(frozen=True)
class Foot:
    disk: int
    start: int
    end: int

    def to_json(self) -> list[int]:
        return [self.start, self.end] if self.disk == 0 else [self.disk, self.start, self.end]


@dataclass(frozen=True)
class Band:
    id: str
    foot_1: Foot
    foot_2: Foot
    slots: int
    is_P: bool

    def foot(self, which: int) -> Foot:
        return self.foot_1 if which == 1 else self.foot_2


@dataclass(frozen=True)
class RibbonSurface:
    circle_sizes: tuple[int, ...]
    bands: tuple[Band, ...]

    @property
    def band_map(self) -> dict[str, Band]:
        return {b.id: b for b in self.bands}

    @property
    def p_bands(self) -> tuple[Band, ...]:
        return tuple(b for b in self.bands if b.is_P)

    @property
    def euler_char(self) -> int:
        return len(self.circle_sizes) - len(self.bands)


@dataclass(frozen=True)
class Token:
    band: str
    direction: int  # +1: foot 1 -> foot 2
    slot: int

    def to_json(self) -> list[Any]:
        return [self.band, "+" if self.direction > 0 else "-", self.slot]


@dataclass(frozen=True)
class ArcWord:
    """An arc from side L of band ``home`` to side R of it, as band passes."""

    home: str
    tokens: tuple[Token, ...] = ()

    @property
    def start(self) -> tuple[str, str]:
        return (self.home, "L")

    @property
    def end(self) -> tuple[str, str]:
        return (self.home, "R")


@dataclass(frozen=True)
class PartialOpenBook:
    name: str
    surface: RibbonSurface
    monodromy: Mapping[str, ArcWord]
    meta: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        sizes = self.surface.circle_sizes
        return {
            "name": self.name,
            "circle_size": sizes[0] if len(sizes) == 1 else list(sizes),
            "bands": [
                {"id": b.id, "foot_1": b.foot_1.to_json(), "foot_2": b.foot_2.to_json(), "slots": b.slots, "is_P": b.is_P}
                for b in self.surface.bands
            ],
            "monodromy": {k: [t.to_json() for t in w.tokens] for k, w in self.monodromy.items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# parsing


def _foot(raw: Any) -> Foot:
    vals = [int(x) for x in raw]
    if len(vals) == 2:
        return Foot(0, vals[0], vals[1])
    if len(vals) == 3:
        return Foot(vals[0], vals[1], vals[2])
    raise ValueError(f"foot must be [start, end] or [disk, start, end], got {raw!r}")


def _direction(raw: Any) -> int:
    if raw in ("+", 1, "+1"):
        return 1
    if raw in ("-", "−", -1, "-1"):
        return -1
    raise ValueError(f"bad direction {raw!r}")


def pob_from_dict(data: Mapping[str, Any]) -> PartialOpenBook:
    try:
        sizes = data["circle_size"]
        sizes = tuple(int(x) for x in sizes) if isinstance(sizes, (list, tuple)) else (int(sizes),)
        bands = tuple(
            Band(str(b["id"]), _foot(b["foot_1"]), _foot(b["foot_2"]), int(b.get("slots", 1)), bool(b.get("is_P", False)))
            for b in data.get("bands", [])
        )
        mono = {}
        for key, toks in dict(data.get("monodromy", {})).items():
            parsed = []
            for t in toks:
                if t and t[0] == "chord":
                    raise ValueError("chord tokens are implicit between band passes; drop them")
                band, d, slot = t
                parsed.append(Token(str(band), _direction(d), int(slot)))
            mono[str(key)] = ArcWord(str(key), tuple(parsed))
        return PartialOpenBook(str(data.get("name", "")), RibbonSurface(sizes, bands), mono)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed partial open book: {exc}") from exc


def load_pob(source: Union[str, Path, Mapping[str, Any]]) -> PartialOpenBook:
    if isinstance(source, Mapping):
        return pob_from_dict(source)
    try:
        data = json.loads(Path(source).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: not valid JSON: {exc}") from exc
    return pob_from_dict(data)


# ---------------------------------------------------------------------------
# arc pieces


@dataclass(frozen=True)
class Piece:
    """One chord of an image arc inside a single polygon of the page.

    ``polygon`` is ``("disk", i)`` or ``("band", id)``; ends are boundary
    point keys: ``("slot", band, foot, slot)`` or ``("side", band, name)``.
    """

    polygon: tuple[str, Any]
    start: tuple
    end: tuple


def slot_point(band: str, foot: int, slot: int) -> tuple:
    return ("slot", band, foot, slot)


def side_point(band: str, name: str) -> tuple:
    return ("side", band, name)


def word_pieces(pob: PartialOpenBook, word: ArcWord) -> list[Piece]:
    """Chords of ``h(b_home)`` in order from its start to its end (assumes a checked word)."""
    bands = pob.surface.band_map
    home = word.home
    start, end = side_point(home, "bS"), side_point(home, "bE")
    toks = word.tokens
    if not toks:
        return [Piece(("band", home), start, end)]
    pieces = []
    first, last = toks[0], toks[-1]
    exit_foot = 2 if first.direction > 0 else 1
    prev = slot_point(home, exit_foot, first.slot)
    pieces.append(Piece(("band", home), start, prev))
    prev_disk = bands[home].foot(exit_foot).disk
    for tok in toks[1:-1]:
        f_in, f_out = (1, 2) if tok.direction > 0 else (2, 1)
        b = bands[tok.band]
        here = slot_point(tok.band, f_in, tok.slot)
        pieces.append(Piece(("disk", prev_disk), prev, here))
        prev = slot_point(tok.band, f_out, tok.slot)
        pieces.append(Piece(("band", tok.band), here, prev))
        prev_disk = b.foot(f_out).disk
    entry_foot = 1 if last.direction > 0 else 2
    here = slot_point(home, entry_foot, last.slot)
    pieces.append(Piece(("disk", prev_disk), prev, here))
    pieces.append(Piece(("band", home), here, end))
    return pieces


# ---------------------------------------------------------------------------
# polygon boundary orders (counterclockwise in S)


def used_slots(pob: PartialOpenBook) -> dict[tuple[str, int], list[int]]:
    out: dict[tuple[str, int], set[int]] = {}
    for w in pob.monodromy.values():
        for pc in word_pieces(pob, w):
            for pt in (pc.start, pc.end):
                if pt[0] == "slot":
                    out.setdefault((pt[1], pt[2]), set()).add(pt[3])
    return {k: sorted(v) for k, v in out.items()}


def corner(band: str, t: int, s: int) -> tuple:
    return ("corner", band, t, s)


def band_boundary(band: Band, slots: Mapping[tuple[str, int], list[int]]) -> list[tuple]:
    """Boundary points of a band rectangle, counterclockwise in S."""
    bid = band.id
    pts: list[tuple] = [corner(bid, 0, 0)]
    if band.is_P:
        pts += [side_point(bid, "aL"), side_point(bid, "bS")]
    pts.append(corner(bid, 1, 0))
    pts += [slot_point(bid, 2, k) for k in slots.get((bid, 2), [])]
    pts.append(corner(bid, 1, 1))
    if band.is_P:
        pts += [side_point(bid, "aR"), side_point(bid, "bE")]
    pts.append(corner(bid, 0, 1))
    pts += [slot_point(bid, 1, k) for k in reversed(slots.get((bid, 1), []))]
    return pts


def disk_feet(pob: PartialOpenBook, disk: int) -> list[tuple[Band, int]]:
    feet = [(b, f) for b in pob.surface.bands for f in (1, 2) if b.foot(f).disk == disk]
    return sorted(feet, key=lambda bf: bf[0].foot(bf[1]).start)


def disk_boundary(pob: PartialOpenBook, disk: int, slots: Mapping[tuple[str, int], list[int]]) -> list[tuple]:
    """Boundary points of a base disk, counterclockwise: feet in position order, a free point after each."""
    pts: list[tuple] = []
    feet = disk_feet(pob, disk)
    if not feet:
        return [("free", disk, k) for k in range(3)]
    for i, (b, f) in enumerate(feet):
        used = slots.get((b.id, f), [])
        if f == 1:
            pts.append(corner(b.id, 0, 0))
            pts += [slot_point(b.id, 1, k) for k in used]
            pts.append(corner(b.id, 0, 1))
        else:
            pts.append(corner(b.id, 1, 1))
            pts += [slot_point(b.id, 2, k) for k in reversed(used)]
            pts.append(corner(b.id, 1, 0))
        pts.append(("free", disk, i))
    return pts


def polygon_boundaries(pob: PartialOpenBook) -> dict[tuple[str, Any], list[tuple]]:
    slots = used_slots(pob)
    out: dict[tuple[str, Any], list[tuple]] = {}
    for d in range(len(pob.surface.circle_sizes)):
        out[("disk", d)] = disk_boundary(pob, d, slots)
    for b in pob.surface.bands:
        out[("band", b.id)] = band_boundary(b, slots)
    return out


def interleaved(order: Mapping[tuple, int], c1: tuple[tuple, tuple], c2: tuple[tuple, tuple]) -> bool:
    a, b = sorted((order[c1[0]], order[c1[1]]))
    inside = [a < order[p] < b for p in c2]
    return inside[0] != inside[1]


# ---------------------------------------------------------------------------
# validation


def _structure_violations(pob: PartialOpenBook) -> list[Violation]:
    out: list[Violation] = []
    v = out.append
    surf = pob.surface
    ids = [b.id for b in surf.bands]
    if len(set(ids)) != len(ids):
        v(Violation(BAD_FOOT, pob.name, "duplicate band ids"))
    if not surf.circle_sizes or any(n < 1 for n in surf.circle_sizes):
        v(Violation(BAD_FOOT, pob.name, "circle sizes must be positive"))
    intervals: dict[int, list[tuple[int, int, str]]] = {}
    for b in surf.bands:
        if b.slots < 1:
            v(Violation(BAD_FOOT, b.id, "slots must be positive"))
        for f in (1, 2):
            ft = b.foot(f)
            if not 0 <= ft.disk < len(surf.circle_sizes):
                v(Violation(BAD_FOOT, b.id, f"foot {f} on unknown disk {ft.disk}"))
                continue
            if not 0 <= ft.start <= ft.end < surf.circle_sizes[ft.disk]:
                v(Violation(BAD_FOOT, b.id, f"foot {f} interval {ft.start}..{ft.end} outside 0..{surf.circle_sizes[ft.disk] - 1}"))
            intervals.setdefault(ft.disk, []).append((ft.start, ft.end, f"{b.id}.{f}"))
    for disk, ivs in intervals.items():
        ivs.sort()
        for (s1, e1, n1), (s2, e2, n2) in zip(ivs, ivs[1:]):
            if s2 <= e1:
                v(Violation(BAD_FOOT, n2, f"foot overlaps {n1} on disk {disk}"))
    # connectivity of S
    parent = list(range(len(surf.circle_sizes)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for b in surf.bands:
        d1, d2 = b.foot_1.disk, b.foot_2.disk
        if 0 <= d1 < len(parent) and 0 <= d2 < len(parent):
            parent[find(d1)] = find(d2)
    roots = {find(i) for i in range(len(parent))}
    if len(roots) > 1:
        v(Violation(DISCONNECTED_SURFACE, pob.name, f"page has {len(roots)} components"))
    return out


def _word_violations(pob: PartialOpenBook) -> list[Violation]:
    out: list[Violation] = []
    v = out.append
    bands = pob.surface.band_map
    for b in pob.surface.p_bands:
        if b.id not in pob.monodromy:
            v(Violation(MISSING_IMAGE, b.id, "P-band has no monodromy image"))
    for key, word in pob.monodromy.items():
        if key not in bands:
            v(Violation(BAD_TOKEN, key, "monodromy given for unknown band"))
            continue
        if not bands[key].is_P:
            v(Violation(BAD_TOKEN, key, "monodromy given for a band outside P"))
            continue
        toks = word.tokens
        if len(toks) == 1:
            v(Violation(H_A_IDENTITY_VIOLATION, key, "a one-token word cannot both leave and return to the band"))
            continue
        ok = True
        for t in toks:
            if t.band not in bands:
                v(Violation(BAD_TOKEN, key, f"unknown band {t.band}"))
                ok = False
            elif not 0 <= t.slot < bands[t.band].slots:
                v(Violation(BAD_TOKEN, key, f"slot {t.slot} out of range for band {t.band}"))
                ok = False
        if toks and (toks[0].band != key or toks[-1].band != key):
            v(Violation(H_A_IDENTITY_VIOLATION, key, "image endpoints are not the endpoints of the pushoff"))
            ok = False
        if not ok:
            continue
        # consecutive passes must meet on a common disk
        for i in range(len(toks) - 1):
            cur, nxt = toks[i], toks[i + 1]
            f_out = (2 if cur.direction > 0 else 1)
            f_in = (1 if nxt.direction > 0 else 2)
            d_out = bands[cur.band].foot(f_out).disk
            d_in = bands[nxt.band].foot(f_in).disk
            if d_out != d_in:
                v(Violation(NOT_CONNECTABLE, key, f"pass {i} exits on disk {d_out}, pass {i + 1} enters on disk {d_in}"))
    return out


def validate_pob(pob: PartialOpenBook) -> list[Violation]:
    """All violations of the partial open book conditions (empty iff valid)."""
    out = _structure_violations(pob)
    out += _word_violations(pob)
    if out:
        return out
    # slot collisions
    owner: dict[tuple, str] = {}
    for key in sorted(pob.monodromy):
        for pc in word_pieces(pob, pob.monodromy[key])[:-1]:
            pt = pc.end
            if pt in owner:
                out.append(Violation(NOT_EMBEDDING, key, f"slot {pt[3]} of band {pt[1]} foot {pt[2]} used twice"))
            owner[pt] = key
    if out:
        return out
    bounds = polygon_boundaries(pob)
    chords: dict[tuple, list[tuple[str, tuple, tuple]]] = {}
    for key in sorted(pob.monodromy):
        for pc in word_pieces(pob, pob.monodromy[key]):
            chords.setdefault(pc.polygon, []).append((key, pc.start, pc.end))
    for poly, cs in sorted(chords.items(), key=lambda kv: repr(kv[0])):
        order = {p: i for i, p in enumerate(bounds[poly])}
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                if interleaved(order, cs[i][1:], cs[j][1:]):
                    who = cs[i][0] if cs[i][0] == cs[j][0] else f"{cs[i][0]}/{cs[j][0]}"
                    out.append(Violation(NOT_EMBEDDING, who, f"image arcs cross inside {poly[0]} {poly[1]}"))
    return out


# ---------------------------------------------------------------------------


def standard_pushoff(pob: PartialOpenBook, j: str) -> ArcWord:
    """The pushoff ``b_j`` of the cocore of band ``j``: the empty word."""
    band = pob.surface.band_map.get(j)
    if band is None or not band.is_P:
        raise KeyError(f"{j} is not a P-band")
    return ArcWord(j)


def cocore_crossings(pob: PartialOpenBook, word: ArcWord) -> dict[str, int]:
    """How often ``h(b_home)`` crosses each cocore, read off the word."""
    bands = pob.surface.band_map
    counts = {b.id: 0 for b in pob.surface.p_bands}
    toks = word.tokens
    if not toks:
        counts[word.home] += 1
        return counts
    # leaving through foot 1 or returning through foot 2 passes t = 1/2
    if toks[0].direction < 0:
        counts[word.home] += 1
    if toks[-1].direction < 0:
        counts[word.home] += 1
    for t in toks[1:-1]:
        if bands[t.band].is_P:
            counts[t.band] += 1
    return counts


def intersection_census(pob: PartialOpenBook) -> list[list[int]]:
    """Matrix of ``|alpha_i cap beta_j|`` indexed by P-bands in declaration order."""
    pb = [b.id for b in pob.surface.p_bands]
    out = [[0] * len(pb) for _ in pb]
    for j, bj in enumerate(pb):
        counts = cocore_crossings(pob, pob.monodromy[bj])
        for i, bi in enumerate(pb):
            out[i][j] = (1 if i == j else 0) + counts[bi]
    return out


def pob_euler_char(pob: PartialOpenBook) -> int:
    """Euler characteristic of the Heegaard surface: chi(S) - r."""
    return pob.surface.euler_char - len(pob.surface.p_bands)

