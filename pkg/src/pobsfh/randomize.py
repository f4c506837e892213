"""Random monodromy words on small annulus and pants templates.

Words are random walks through the bands that start and end in the home
band.  Slot numbers are then drawn at random until the arcs embed, and
the result is kept only if the built diagram is nice.
"""

from __future__ import annotations

import random
from typing import Any, Iterator, Optional

from .builder import build_diagram
from .diagram import Diagram
from .measures import is_nice
from .pob import PartialOpenBook, load_pob, validate_pob

TEMPLATES: dict[str, dict[str, Any]] = {
    # one disk, one P-band: an annulus
    "annulus-1": {
        "circle_size": 4,
        "bands": [("P1", (0, 0, 0), (0, 2, 2), True)],
    },
    # two disks in a cycle: an annulus with two P-bands
    "annulus-2": {
        "circle_size": [4, 4],
        "bands": [("P1", (0, 0, 0), (1, 2, 2), True), ("P2", (1, 0, 0), (0, 2, 2), True)],
    },
    # one disk, two P-bands: a pair of pants
    "pants-2": {
        "circle_size": 8,
        "bands": [("A", (0, 0, 0), (0, 2, 2), True), ("B", (0, 4, 4), (0, 6, 6), True)],
    },
    # annulus of S - P plus one P-band: a pair of pants
    "pants-1": {
        "circle_size": 8,
        "bands": [("Q", (0, 0, 0), (0, 2, 2), False), ("P", (0, 4, 4), (0, 6, 6), True)],
    },
}


def _walk(rng: random.Random, bands: list[tuple], home: str, max_middle: int) -> Optional[list[tuple[str, int]]]:
    feet = {b[0]: (b[1][0], b[2][0]) for b in bands}
    d0 = rng.choice((1, -1))
    disk = feet[home][1] if d0 > 0 else feet[home][0]
    toks = [(home, d0)]
    for _ in range(rng.randint(0, max_middle)):
        moves = [(bid, 1) for bid, (f1, _f2) in feet.items() if f1 == disk]
        moves += [(bid, -1) for bid, (_f1, f2) in feet.items() if f2 == disk]
        bid, d = rng.choice(moves)
        toks.append((bid, d))
        disk = feet[bid][1] if d > 0 else feet[bid][0]
    closing = [d for d, foot_disk in ((1, feet[home][0]), (-1, feet[home][1])) if foot_disk == disk]
    if not closing:
        return None
    toks.append((home, rng.choice(closing)))
    return toks


def _slot_words(rng: random.Random, walks: dict[str, list[tuple[str, int]]]) -> tuple[dict[str, list[list[Any]]], dict[str, int]]:
    strands: dict[str, int] = {}
    for toks in walks.values():
        for bid, _d in toks:
            strands[bid] = strands.get(bid, 0) + 1
    pools = {bid: rng.sample(range(n), n) for bid, n in strands.items()}
    words = {}
    for home, toks in walks.items():
        words[home] = [[bid, "+" if d > 0 else "-", pools[bid].pop()] for bid, d in toks]
    return words, strands


def random_pob(rng: random.Random, template: str, max_middle: int = 2, tries: int = 60,
               identity_rate: float = 0.15) -> Optional[PartialOpenBook]:
    """One embedded random partial open book on ``template``, or None."""
    t = TEMPLATES[template]
    bands = t["bands"]
    for _ in range(tries):
        walks: dict[str, list[tuple[str, int]]] = {}
        ok = True
        for b in bands:
            if not b[3]:
                continue
            if rng.random() < identity_rate:
                walks[b[0]] = []
                continue
            w = _walk(rng, bands, b[0], max_middle)
            if w is None:
                ok = False
                break
            walks[b[0]] = w
        if not ok:
            continue
        words, strands = _slot_words(rng, walks)
        data = {
            "name": f"random-{template}",
            "circle_size": t["circle_size"],
            "bands": [
                {"id": bid, "foot_1": list(f1), "foot_2": list(f2), "slots": max(1, strands.get(bid, 1)), "is_P": isp}
                for bid, f1, f2, isp in bands
            ],
            "monodromy": words,
        }
        pob = load_pob(data)
        if not validate_pob(pob):
            return pob
    return None


def random_nice_diagrams(seed: int, count: int, max_middle: int = 2) -> Iterator[tuple[PartialOpenBook, Diagram]]:
    """``count`` distinct random builds that pass niceness, cycling through the templates."""
    rng = random.Random(seed)
    names = sorted(TEMPLATES)
    seen: set[str] = set()
    produced = 0
    attempts = 0
    while produced < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("random generation stalled")
        template = names[attempts % len(names)]
        pob = random_pob(rng, template, max_middle)
        if pob is None:
            continue
        key = pob.dumps()
        if key in seen:
            continue
        d = build_diagram(pob)
        if not is_nice(d):
            continue
        seen.add(key)
        produced += 1
        yield pob, d
