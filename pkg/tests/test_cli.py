from __future__ import annotations

import io
import json

import pytest

from pobsfh import cli, engine
from pobsfh.corpus import source_text
from test_measures import LENS


def run(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def corpus_file(tmp_path):
    def write(filename: str):
        p = tmp_path / filename
        p.write_text(source_text(filename))
        return str(p)

    return write


def test_validate_ok(corpus_file):
    code, out, _ = run("validate", corpus_file("ex2.pob"))
    assert code == 0
    assert "balanced: True" in out and "nice: True" in out and "admissible: True" in out


def test_validate_failure(tmp_path):
    p = tmp_path / "bad.pob"
    data = json.loads(source_text("ex3.pob"))
    data["monodromy"]["P1"] = data["monodromy"]["P1"][:1]
    p.write_text(json.dumps(data))
    code, out, _ = run("validate", str(p))
    assert code == 1
    assert out.startswith("H_A_IDENTITY_VIOLATION")


def test_parse_errors(tmp_path):
    code, _, err = run("compute", str(tmp_path / "missing.sfd"))
    assert code == 4 and "PARSE_ERROR" in err
    p = tmp_path / "junk.sfd"
    p.write_text("{")
    assert run("compute", str(p))[0] == 4


def test_not_nice_exit(data_dir):
    code, _, err = run("compute", str(data_dir / "not-nice.pob"))
    assert code == 2
    assert "NOT_NICE" in err and "R3" in err


def test_not_admissible_exit(corpus_file, monkeypatch):
    monkeypatch.setattr(engine, "check_admissibility", lambda d, basis=None: False)
    code, _, err = run("compute", corpus_file("ex3.pob"))
    assert code == 3 and "NOT_ADMISSIBLE" in err


def test_not_balanced_exit(tmp_path):
    p = tmp_path / "lens.sfd"
    p.write_text(json.dumps(LENS))
    code, _, err = run("compute", str(p))
    assert code == 1 and "NOT_BALANCED" in err
    code, out, _ = run("validate", str(p))
    assert code == 0 and "balanced: False" in out


def test_compute_json(corpus_file):
    code, out, _ = run("compute", corpus_file("ex5.pob"), "--json", "--dump-differential")
    assert code == 0
    data = json.loads(out)
    assert data["generator_count"] == 2 and data["sfh_dimension"] == 0
    assert data["eh_is_cycle"] is True and data["eh_trivial"] is True
    assert data["differential"]["generators"] == [["p1"], ["x1"]]
    assert data["differential"]["matrix"] == [[0, 0], [1, 0]]
    assert "timing_ms" not in data["diagnostics"]


def test_compute_text_and_flags(corpus_file):
    path = corpus_file("ex4-r3.pob")
    code, out, _ = run("compute", path, "--dump-differential", "--jobs", "3", "--timing")
    assert code == 0
    assert "SFH dimension over GF(2): 4" in out
    assert "time:" in out
    _, plain, _ = run("compute", path, "--json")
    _, orc, _ = run("compute", path, "--json", "--oracle")
    a, b = json.loads(plain), json.loads(orc)
    assert a["diagnostics"].pop("search") == "dfs" and b["diagnostics"].pop("search") == "oracle"
    assert a == b


def test_build_round_trip(corpus_file, tmp_path):
    out_path = tmp_path / "ex2.sfd"
    code, out, _ = run("build", corpus_file("ex2.pob"), "-o", str(out_path))
    assert code == 0 and "3 points" in out
    code, out, _ = run("compute", str(out_path), "--json")
    assert json.loads(out)["sfh_dimension"] == 1
    code, stdout_sfd, _ = run("build", corpus_file("ex2.pob"))
    assert stdout_sfd == out_path.read_text()


def test_build_needs_pob(corpus_file):
    assert run("build", corpus_file("ex6.sfd"))[0] == 4


def test_render_is_deterministic(corpus_file, tmp_path):
    src = corpus_file("ex6.pob")
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert run("render", src, "-o", str(a))[0] == 0
    assert run("render", src, "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.startswith("<svg") and text.count('class="point contact"') == 2
    assert run("render", corpus_file("ex6.sfd"), "-o", str(a))[0] == 0


def test_corpus_commands():
    code, out, _ = run("corpus", "list")
    assert code == 0 and len(out.strip().splitlines()) == 12
    code, out, _ = run("corpus", "run")
    assert code == 0 and out.strip().endswith("12/12 pass")
