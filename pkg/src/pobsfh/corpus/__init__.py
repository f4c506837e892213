"""Encoded examples with their expected invariants.

Expected tuples are ``(generator_count, sfh_dimension, eh_is_cycle, eh_trivial)``.
Provenance tags: [STATED] values are quoted results for the example;
[DERIVED] values follow from the stated relations by GF(2) elimination.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Any, Union

from ..builder import build_diagram
from ..diagram import Diagram, load_diagram
from ..errors import UnknownExampleError
from ..pob import PartialOpenBook, load_pob


@dataclass(frozen=True)
class Expected:
    generator_count: int
    sfh_dimension: int
    eh_is_cycle: bool
    eh_trivial: bool

    def as_tuple(self) -> tuple[int, int, bool, bool]:
        return (self.generator_count, self.sfh_dimension, self.eh_is_cycle, self.eh_trivial)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    filename: str
    expected: Expected
    anchor: str

    @property
    def kind(self) -> str:
        return "pob" if self.filename.endswith(".pob") else "sfd"

    def payload(self) -> dict[str, Any]:
        return json.loads(resources.files(__package__).joinpath(self.filename).read_text(encoding="utf-8"))

    def input(self) -> Union[PartialOpenBook, Diagram]:
        return load_pob(self.payload()) if self.kind == "pob" else load_diagram(self.payload())

    def diagram(self) -> Diagram:
        src = self.input()
        return build_diagram(src) if isinstance(src, PartialOpenBook) else src


def _e(g: int, dim: int, cycle: bool, trivial: bool) -> Expected:
    return Expected(g, dim, cycle, trivial)


_ENTRIES = [
    # [STATED] 2^r generators, trivial boundary map, rank 2^r, EH a generator
    CorpusEntry("ex1-r1", "ex1-r1.pob", _e(2, 2, True, False), "annulus page, one P-arc, identity"),
    CorpusEntry("ex1-r2", "ex1-r2.pob", _e(4, 4, True, False), "annulus page, two P-arcs, identity"),
    CorpusEntry("ex1-r3", "ex1-r3.pob", _e(8, 8, True, False), "annulus page, three P-arcs, identity"),
    # [STATED] generators x, y, z and EH = 0; [DERIVED] dy = dz = x leaves rank 3 - 2*1 = 1
    CorpusEntry("ex2", "ex2.pob", _e(3, 1, True, True), "annulus page, left-handed core twist"),
    # [STATED] single generator, SFH = Z, EH a generator
    CorpusEntry("ex3", "ex3.pob", _e(1, 1, True, False), "annulus page, right-handed core twist (standard 3-ball)"),
    # [STATED] x, y with dy = x - x = 0; mod 2 the pair cancels too, so rank 2
    CorpusEntry("ex4-r2", "ex4-r2.pob", _e(2, 2, True, False), "annulus page, two P-arcs, right-handed core twist"),
    # [STATED] six generators; [DERIVED] two columns equal to the same nonzero sum: image 1, kernel 5, rank 4
    CorpusEntry("ex4-r3", "ex4-r3.pob", _e(6, 4, True, False), "annulus page, three P-arcs, right-handed core twist"),
    # [STATED] generators x, y with dy = x by the bigon R; SFH = 0, EH = 0
    CorpusEntry("ex5", "ex5.pob", _e(2, 0, True, True), "neighbourhood of an overtwisted disk"),
    # [STATED] seven generators, d(y, x') = (x, x'); [DERIVED] rank 1 as HF-hat of the 3-sphere
    CorpusEntry("ex6", "ex6.sfd", _e(7, 1, True, True), "overtwisted 3-sphere, pants page"),
    # [STATED] unique intersection point, EH generates SFH = Z
    CorpusEntry("handlebody-g1n1", "handlebody-g1n1.pob", _e(1, 1, True, False), "handlebody, genus 1, one boundary circle"),
    CorpusEntry("handlebody-g0n3", "handlebody-g0n3.pob", _e(1, 1, True, False), "handlebody, genus 0, three boundary circles"),
    # [STATED] product piece has SFH = Z generated by EH
    CorpusEntry("product-piece", "product-piece.pob", _e(1, 1, True, False), "product piece, empty P"),
]

_BY_NAME = {e.name: e for e in _ENTRIES}


def example_names() -> list[str]:
    return [e.name for e in _ENTRIES]


def entries() -> list[CorpusEntry]:
    return list(_ENTRIES)


def load_example(name: str) -> CorpusEntry:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise UnknownExampleError(f"unknown example {name!r}; known: {', '.join(example_names())}") from None


def source_text(filename: str) -> str:
    return resources.files(__package__).joinpath(filename).read_text(encoding="utf-8")
