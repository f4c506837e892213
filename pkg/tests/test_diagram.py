from __future__ import annotations

import copy
import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pobsfh.diagram import ALPHA, BETA, dump_diagram, load_diagram, relabel, swap_families, validate
from pobsfh.errors import ParseError

# A once-punctured torus cut by a meridian and a longitude meeting once:
# the complement is one annulus touching the boundary.  chi = 0 - 2 + 1 = -1.
PUNCTURED_TORUS = {
    "name": "punctured-torus",
    "euler_char": -1,
    "boundary_components": 1,
    "alpha": [["x"]],
    "beta": [["x"]],
    "points": [{"id": "x", "sectors": ["R", "R", "R", "R"]}],
    "segments": [
        {"curve": "a1", "from": "x", "to": "x", "left": "R", "right": "R"},
        {"curve": "b1", "from": "x", "to": "x", "left": "R", "right": "R"},
    ],
    "regions": [{"id": "R", "chi": 0, "meets_boundary": True}],
    "contact_generator": ["x"],
}


def codes(data) -> set[str]:
    return {v.rule for v in validate(load_diagram(data))}


def test_hand_encoded_torus_is_valid():
    d = load_diagram(PUNCTURED_TORUS)
    assert validate(d) == []
    assert [c.id for c in d.alpha] == ["a1"] and [c.id for c in d.beta] == ["b1"]
    assert d.interior_regions == ()


def test_builder_matches_hand_encoding(corpus):
    built = corpus["ex3"]
    hand = load_diagram(PUNCTURED_TORUS)
    ren = relabel(hand, {"x": "x1"}, {"R": "R1"})
    assert built.to_dict() | {"name": "punctured-torus"} == ren.to_dict()


def test_corpus_diagrams_valid(corpus):
    for name, d in corpus.items():
        assert validate(d) == [], name


def test_round_trip(corpus, tmp_path):
    for name, d in corpus.items():
        p = tmp_path / f"{name}.sfd"
        dump_diagram(d, p)
        again = load_diagram(p)
        assert again.to_dict() == d.to_dict()
        assert again.dumps() == d.dumps()


@pytest.mark.parametrize(
    "mutate, code",
    [
        (lambda d: d["regions"][0].update(chi=1), "euler-mismatch"),
        (lambda d: d["points"][0].update(sectors=["R"] * 3), "sector-count"),
        (lambda d: d["points"][0].update(sectors=["R", "R", "R", "Q"]), "dangling-region"),
        (lambda d: d["segments"].pop(), "missing-segment"),
        (lambda d: d["segments"].append(dict(d["segments"][0])), "duplicate-segment"),
        (lambda d: d.update(contact_generator=["y"]), "contact-generator"),
        (lambda d: d.update(boundary_components=0), "no-boundary"),
        (lambda d: d["regions"][0].update(meets_boundary=False), "boundary-regions"),
        (lambda d: d["alpha"].append([]), "empty-curve"),
    ],
)
def test_violations(mutate, code):
    data = copy.deepcopy(PUNCTURED_TORUS)
    mutate(data)
    assert code in codes(data)


def test_sector_mismatch(corpus):
    data = corpus["ex1-r1"].to_dict()
    p = data["points"][0]
    p["sectors"] = p["sectors"][1:] + p["sectors"][:1]
    assert "sector-mismatch" in codes(data)


def test_point_on_two_alphas(corpus):
    data = corpus["ex1-r1"].to_dict()
    data["alpha"].append([data["alpha"][0][0]])
    assert "point-incidence" in codes(data)


def test_parse_errors(tmp_path):
    with pytest.raises(ParseError):
        load_diagram({"name": "x"})
    bad = tmp_path / "bad.sfd"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_diagram(bad)


@given(st.sampled_from(["ex1-r2", "ex4-r3", "ex5", "ex6"]), st.randoms(use_true_random=False))
def test_relabel_preserves_validity(name, rnd: random.Random):
    from pobsfh.corpus import load_example

    d = load_example(name).diagram()
    pts = [p.id for p in d.points]
    regs = [r.id for r in d.regions]
    pm = dict(zip(pts, rnd.sample([f"q{i}" for i in range(len(pts))], len(pts))))
    rm = dict(zip(regs, rnd.sample([f"S{i}" for i in range(len(regs))], len(regs))))
    e = relabel(d, pm, rm)
    assert validate(e) == []
    assert json.loads(e.dumps())["contact_generator"] == [pm[p] for p in d.contact_generator]


def test_swap_families_is_valid_and_involutive(corpus):
    for d in corpus.values():
        s = swap_families(d)
        assert validate(s) == []
        assert [c.family for c in s.alpha] == [ALPHA] * len(d.beta)
        assert [c.family for c in s.beta] == [BETA] * len(d.alpha)
        assert swap_families(s).to_dict() == d.to_dict()
