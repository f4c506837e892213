from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_generators, brute_permanent, gf2_rank_numpy, homology_dim_bruteforce
from pobsfh.corpus import load_example
from pobsfh.diagram import ALPHA, load_diagram, relabel, swap_families
from pobsfh.engine import (
    Generator,
    compute_report,
    connecting_domains,
    differential,
    dfs_domains,
    eh_class,
    enumerate_generators,
    is_empty_polygon,
    oracle_domains_all,
    permanent,
    point_count_matrix,
    sfh_dimension,
)
from pobsfh.errors import NoContactGeneratorError, NotNiceError
from pobsfh.measures import Domain
from pobsfh.builder import build_diagram
from pobsfh.pob import load_pob


def test_generators_match_bruteforce(corpus, random_cases):
    for d in list(corpus.values()) + [d for _, d in random_cases[:40]]:
        gens = enumerate_generators(d)
        assert {frozenset(g.points) for g in gens} == brute_generators(d)
        assert len(gens) == len(set(gens))


def test_permanent_counts_generators(corpus, random_cases):
    for d in list(corpus.values()) + [d for _, d in random_cases[:40]]:
        m = point_count_matrix(d)
        assert permanent(m) == brute_permanent(m) == len(enumerate_generators(d))


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(0, 3), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_ryser_permanent(m):
    assert permanent(m) == brute_permanent(m)


def test_generator_is_ordered_by_alpha(corpus):
    d = corpus["ex4-r3"]
    pc = d.point_curves
    for g in enumerate_generators(d):
        assert [pc[p]["alpha"][0] for p in g] == [c.id for c in d.alpha]
        assert set(g.assignment(d)) == {c.id for c in d.alpha}


def test_bigon_to_contact_point_in_left_twist(corpus):
    # in the left-twisted annulus both non-contact points reach x1 by one bigon
    d = corpus["ex2"]
    x = Generator(("x1",))
    for start, region in (("p1", "R3"), ("p2", "R2")):
        doms = connecting_domains(d, Generator((start,)), x)
        assert doms == [Domain({region: 1})]
        assert connecting_domains(d, x, Generator((start,))) == []


def test_identity_annulus_two_cancelling_bigons(corpus):
    d = corpus["ex1-r1"]
    doms = connecting_domains(d, Generator(("p1",)), Generator(("x1",)))
    assert sorted(map(repr, doms)) == sorted(map(repr, [Domain({"R2": 1}), Domain({"R3": 1})]))
    assert differential(d).matrix.is_zero()


def test_counted_domains_are_empty_polygons(corpus, random_cases):
    for d in list(corpus.values()) + [d for _, d in random_cases[:60]]:
        gens = enumerate_generators(d)
        for x in gens:
            for y in gens:
                if x != y:
                    for dom in connecting_domains(d, x, y):
                        assert is_empty_polygon(d, dom, x, y)


def test_dfs_agrees_with_oracle(corpus):
    for d in corpus.values():
        gens = enumerate_generators(d)
        table = oracle_domains_all(d, gens)
        for j, x in enumerate(gens):
            for i, y in enumerate(gens):
                if i == j:
                    continue
                want = sorted(map(repr, table.get((j, i), [])))
                assert sorted(map(repr, dfs_domains(d, x, y))) == want


def test_jobs_and_oracle_give_the_same_matrix(corpus):
    for d in corpus.values():
        base = differential(d)
        assert differential(d, jobs=4).matrix == base.matrix
        assert differential(d, oracle=True).matrix == base.matrix
        assert differential(d, oracle=True).counts == base.counts


def test_homology_dimension_against_enumeration(corpus, random_cases):
    for d in list(corpus.values()) + [d for _, d in random_cases]:
        dm = differential(d)
        if dm.size > 12:
            continue
        rows = dm.matrix.to_lists()
        assert sfh_dimension(dm) == homology_dim_bruteforce(rows)
        assert gf2_rank_numpy(rows) * 2 + sfh_dimension(dm) == dm.size


def test_swap_transposes(corpus):
    for d in corpus.values():
        fwd = differential(d).as_pairs()
        back = differential(swap_families(d)).as_pairs()
        assert back == {(b, a) for a, b in fwd}
        assert differential(d, first=ALPHA).as_pairs() == back


def test_relabel_invariance():
    d = load_example("ex4-r3").diagram()
    rnd = random.Random(5)
    pts = [p.id for p in d.points]
    regs = [r.id for r in d.regions]
    pm = dict(zip(pts, rnd.sample([f"q{i}" for i in range(len(pts))], len(pts))))
    rm = dict(zip(regs, rnd.sample([f"S{i}" for i in range(len(regs))], len(regs))))
    e = relabel(d, pm, rm)
    base = {(frozenset(pm[p] for p in a), frozenset(pm[p] for p in b)) for a, b in differential(d).as_pairs()}
    assert differential(e).as_pairs() == base
    r1, r2 = compute_report(d), compute_report(e)
    assert (r1.generator_count, r1.sfh_dimension, r1.eh_trivial) == (r2.generator_count, r2.sfh_dimension, r2.eh_trivial)


def test_eh_verdicts(corpus):
    assert eh_class(corpus["ex3"]).nonzero
    v = eh_class(corpus["ex5"])
    assert v.is_cycle and v.trivial and not v.nonzero


def test_no_contact_generator(corpus):
    data = corpus["ex2"].to_dict()
    data.pop("contact_generator")
    d = load_diagram(data)
    with pytest.raises(NoContactGeneratorError):
        eh_class(d)
    r = compute_report(d)
    assert r.eh_is_cycle is None and "eh_is_cycle" not in r.to_dict()


def test_not_nice_is_refused(data_dir):
    d = build_diagram(load_pob(data_dir / "not-nice.pob"))
    with pytest.raises(NotNiceError) as exc:
        compute_report(d)
    assert list(exc.value.offenders) == ["R3"]
    with pytest.raises(NotNiceError):
        connecting_domains(d, *enumerate_generators(d)[:2])


def test_report_shape(corpus):
    r = compute_report(corpus["ex2"])
    out = r.to_dict(include_differential=True)
    assert list(out) == ["name", "generator_count", "sfh_dimension", "eh_is_cycle", "eh_trivial", "diagnostics", "differential"]
    assert "timing_ms" not in out["diagnostics"]
    assert "timing_ms" in compute_report(corpus["ex2"], timing=True).diagnostics
    assert "EH class: trivial" in r.to_text()
    assert "EH class: nontrivial" in compute_report(corpus["ex3"]).to_text()
    assert r.to_json() == compute_report(corpus["ex2"]).to_json()
