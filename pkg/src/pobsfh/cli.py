"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 not nice, 3 not admissible,
4 parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO, Union

from .builder import build_diagram
from .corpus import entries
from .diagram import Diagram, load_diagram, validate
from .engine import compute_report
from .errors import ParseError, SFHError
from .measures import check_admissibility, check_balanced, is_nice
from .pob import PartialOpenBook, load_pob, validate_pob
from .render import render


def _load(path: str) -> Union[Diagram, PartialOpenBook]:
    p = Path(path)
    if not p.is_file():
        raise ParseError(f"{path}: no such file")
    if p.suffix == ".pob":
        return load_pob(p)
    return load_diagram(p)


def _as_diagram(obj: Union[Diagram, PartialOpenBook]) -> Diagram:
    return build_diagram(obj) if isinstance(obj, PartialOpenBook) else obj


def cmd_validate(args: argparse.Namespace, out: TextIO) -> int:
    obj = _load(args.input)
    if isinstance(obj, PartialOpenBook):
        violations = validate_pob(obj)
    else:
        violations = validate(obj)
    if violations:
        for v in violations:
            print(str(v), file=out)
        return 1
    d = _as_diagram(obj)
    bal = check_balanced(d)
    nice = is_nice(d)
    print(f"valid: {d.name}", file=out)
    print(f"balanced: {bal.balanced}" + ("" if bal else " (" + "; ".join(bal.reasons) + ")"), file=out)
    print(f"nice: {nice.nice}" + ("" if nice else " (" + ", ".join(nice.offenders) + ")"), file=out)
    if bal:
        print(f"admissible: {check_admissibility(d)}", file=out)
    return 0


def cmd_build(args: argparse.Namespace, out: TextIO) -> int:
    obj = _load(args.input)
    if not isinstance(obj, PartialOpenBook):
        raise ParseError("build expects a .pob file")
    d = build_diagram(obj)
    text = d.dumps()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}: {len(d.points)} points, {len(d.regions)} regions", file=out)
    else:
        out.write(text)
    return 0


def cmd_compute(args: argparse.Namespace, out: TextIO) -> int:
    d = _as_diagram(_load(args.input))
    report = compute_report(d, oracle=args.oracle, jobs=args.jobs, timing=args.timing)
    if args.json:
        out.write(report.to_json(include_differential=args.dump_differential))
    else:
        out.write(report.to_text(include_differential=args.dump_differential))
    return 0


def cmd_render(args: argparse.Namespace, out: TextIO) -> int:
    render(_load(args.input), args.output)
    print(f"wrote {args.output}", file=out)
    return 0


def cmd_corpus(args: argparse.Namespace, out: TextIO) -> int:
    if args.action == "list":
        for e in entries():
            print(f"{e.name:<18} {e.filename:<22} {e.anchor}", file=out)
        return 0
    failures = 0
    print(f"{'name':<18} {'expected':<24} {'got':<24} verdict", file=out)
    for e in entries():
        try:
            r = compute_report(e.diagram(), oracle=args.oracle)
            got = (r.generator_count, r.sfh_dimension, r.eh_is_cycle, r.eh_trivial)
        except SFHError as exc:
            got = (exc.code,)
        ok = got == e.expected.as_tuple()
        failures += not ok
        print(f"{e.name:<18} {str(e.expected.as_tuple()):<24} {str(got):<24} {'pass' if ok else 'FAIL'}", file=out)
    n = len(entries())
    print(f"{n - failures}/{n} pass", file=out)
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pobsfh", description="Sutured Floer homology (GF(2)) of partial open books.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a .pob or .sfd file")
    v.add_argument("input")
    v.set_defaults(func=cmd_validate)

    b = sub.add_parser("build", help="build the diagram of a .pob file")
    b.add_argument("input")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("compute", help="compute SFH dimension and the EH verdict")
    c.add_argument("input")
    c.add_argument("--json", action="store_true", help="structured output")
    c.add_argument("--dump-differential", action="store_true", help="append the differential")
    c.add_argument("--oracle", action="store_true", help="use the exhaustive domain sweep")
    c.add_argument("--jobs", type=int, default=1, help="worker threads for the differential")
    c.add_argument("--timing", action="store_true", help="include wall time in diagnostics")
    c.set_defaults(func=cmd_compute)

    r = sub.add_parser("render", help="write a schematic SVG")
    r.add_argument("input")
    r.add_argument("-o", "--output", required=True)
    r.set_defaults(func=cmd_render)

    k = sub.add_parser("corpus", help="list or run the encoded examples")
    k.add_argument("action", choices=["list", "run"])
    k.add_argument("--oracle", action="store_true")
    k.set_defaults(func=cmd_corpus)
    return p


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except SFHError as exc:
        print(f"error: {exc.code}: {exc}", file=err)
        return exc.exit_code
    except json.JSONDecodeError as exc:
        print(f"error: PARSE_ERROR: {exc}", file=err)
        return 4


if __name__ == "__main__":
    sys.exit(main())
