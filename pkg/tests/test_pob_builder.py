from __future__ import annotations

import copy
import json

import pytest

from pobsfh.builder import build_diagram, polygons
from pobsfh.corpus import entries, load_example, source_text
from pobsfh.diagram import validate
from pobsfh.engine import enumerate_generators, point_count_matrix
from pobsfh.errors import ParseError, ValidationError
from pobsfh.measures import check_admissibility, check_balanced
from pobsfh.pob import (
    DISCONNECTED_SURFACE,
    H_A_IDENTITY_VIOLATION,
    MISSING_IMAGE,
    NOT_CONNECTABLE,
    NOT_EMBEDDING,
    ArcWord,
    cocore_crossings,
    intersection_census,
    load_pob,
    pob_euler_char,
    standard_pushoff,
    validate_pob,
)

POB_ENTRIES = [e for e in entries() if e.kind == "pob"]


def payload(name: str) -> dict:
    if name == "ex6":
        return json.loads(source_text("ex6.pob"))
    return copy.deepcopy(load_example(name).payload())


def rules(data) -> set[str]:
    return {v.rule for v in validate_pob(load_pob(data))}


@pytest.mark.parametrize("entry", POB_ENTRIES, ids=lambda e: e.name)
def test_corpus_pobs_valid(entry):
    assert validate_pob(entry.input()) == []


def test_identity_violation_wrong_band():
    data = payload("ex6")
    data["monodromy"]["A"][0][0] = "B"
    assert H_A_IDENTITY_VIOLATION in rules(data)


def test_identity_violation_single_token():
    data = payload("ex3")
    data["monodromy"]["P1"] = data["monodromy"]["P1"][:1]
    assert rules(data) == {H_A_IDENTITY_VIOLATION}


def test_crossing_arcs_not_embedded():
    data = payload("ex4-r2")
    data["monodromy"]["P1"][0][2] = 2
    assert rules(data) == {NOT_EMBEDDING}


def test_slot_reuse_not_embedded():
    data = payload("ex4-r2")
    data["monodromy"]["P2"][1][2] = data["monodromy"]["P1"][0][2]
    data["monodromy"]["P2"][1][0] = data["monodromy"]["P1"][0][0]
    assert NOT_EMBEDDING in rules(data) or NOT_CONNECTABLE in rules(data)


def test_slot_collision_same_pass():
    data = payload("ex2")
    data["monodromy"]["P1"] = [["P1", "-", 0], ["P1", "+", 0], ["P1", "-", 1]]
    data["bands"][0]["slots"] = 3
    assert NOT_EMBEDDING in rules(data)


def test_disconnected_surface():
    data = payload("ex3")
    data["circle_size"] = [4, 4]
    assert DISCONNECTED_SURFACE in rules(data)


def test_missing_image():
    data = payload("ex6")
    del data["monodromy"]["B"]
    assert MISSING_IMAGE in rules(data)


def test_not_connectable():
    data = payload("ex1-r2")
    data["monodromy"]["P1"] = [["P1", "+", 0], ["P1", "+", 0]]
    assert NOT_CONNECTABLE in rules(data)


def test_chord_tokens_rejected():
    data = payload("ex3")
    data["monodromy"]["P1"].insert(1, ["chord", 0, 1])
    with pytest.raises(ParseError):
        load_pob(data)


def test_invalid_pob_does_not_build():
    data = payload("ex6")
    del data["monodromy"]["B"]
    with pytest.raises(ValidationError):
        build_diagram(load_pob(data))


def test_standard_pushoff():
    pob = load_example("ex1-r2").input()
    assert standard_pushoff(pob, "P1") == ArcWord("P1")
    assert cocore_crossings(pob, standard_pushoff(pob, "P1")) == {"P1": 1, "P2": 0}
    with pytest.raises(KeyError):
        standard_pushoff(load_example("handlebody-g1n1").input(), "Q1")


def test_census_examples():
    assert intersection_census(load_example("ex1-r2").input()) == [[2, 0], [0, 2]]
    assert intersection_census(load_example("ex3").input()) == [[1]]
    assert intersection_census(load_example("ex2").input()) == [[3]]
    assert intersection_census(load_example("ex4-r3").input()) == [[1, 1, 1], [1, 1, 1], [1, 1, 1]]
    assert intersection_census(load_example("product-piece").input()) == []


def test_census_matches_built_points(random_cases):
    pobs = [e.input() for e in POB_ENTRIES] + [p for p, _ in random_cases]
    for pob in pobs:
        assert intersection_census(pob) == point_count_matrix(build_diagram(pob))


@pytest.mark.parametrize("entry", POB_ENTRIES, ids=lambda e: e.name)
def test_built_diagram_structure(entry):
    pob = entry.input()
    d = build_diagram(pob)
    assert validate(d) == []
    assert d.euler_char == pob_euler_char(pob)
    assert len(d.alpha) == len(d.beta) == len(pob.surface.p_bands)
    assert check_balanced(d)
    assert check_admissibility(d)
    pc = d.point_curves
    for i, x in enumerate(d.contact_generator, 1):
        assert x == f"x{i}"
        assert pc[x]["alpha"][0] == f"a{i}" and pc[x]["beta"][0] == f"b{i}"
    assert d.dumps() == build_diagram(pob).dumps()


def test_product_piece():
    d = load_example("product-piece").diagram()
    assert d.points == () and d.alpha == ()
    assert [(r.chi, r.meets_boundary) for r in d.regions] == [(1, True)]
    assert [g.points for g in enumerate_generators(d)] == [()]


def test_handlebody_boundary_circles():
    g1 = load_example("handlebody-g1n1").diagram()
    g0 = load_example("handlebody-g0n3").diagram()
    assert g1.boundary_components == 1
    assert g0.boundary_components == 3
    # chi(S) - r with S a disk plus three bands
    assert g1.euler_char == g0.euler_char == -3


def test_identity_annulus_regions():
    d = load_example("ex1-r1").diagram()
    interior = [d.region_map[r] for r in d.interior_regions]
    assert [(r.chi, d.corner_counts[r.id]) for r in interior] == [(1, 2), (1, 2)]


def test_polygons_partition_sheets():
    pob = load_pob(payload("ex6"))
    keys = [p.key for p in polygons(pob)]
    assert len(keys) == len(set(keys))
    assert {k[0] for k in keys} == {"sheet0", "band", "disk"}


def test_random_builds_balanced_admissible(random_cases):
    assert len(random_cases) >= 100
    for pob, d in random_cases:
        assert validate(d) == []
        assert check_balanced(d)
        assert check_admissibility(d)
        assert d.euler_char == pob_euler_char(pob)


def test_shipped_sfd_is_the_build_of_its_pob():
    built = build_diagram(load_pob(payload("ex6")), name="ex6")
    assert built.to_dict() == load_example("ex6").diagram().to_dict()
