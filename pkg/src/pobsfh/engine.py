"""The sutured Floer chain complex over GF(2) of a nice diagram.

By default the complex is ``CF(Sigma, beta, alpha)``: the beta family leads,
so a domain from ``x`` to ``y`` has beta boundary running from ``x`` to ``y``
and alpha boundary running back.  ``first=ALPHA`` computes the other order.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .diagram import ALPHA, BETA, Diagram, validate
from .errors import (
    DSquaredNonzeroError,
    NoContactGeneratorError,
    NotAdmissibleError,
    NotBalancedError,
    NotNiceError,
    ValidationError,
)
from .linalg import Gf2Matrix, gf2_rank, gf2_solve
from .measures import (
    Domain,
    check_admissibility,
    check_balanced,
    defect_matrix,
    euler_measure,
    is_nice,
    maslov_index,
    periodic_domains,
    point_measure,
)

ORACLE_MAX_REGIONS = 20


@dataclass(frozen=True, order=True)
class Generator:
    """One intersection point per alpha curve, listed in alpha-curve order."""

    points: tuple[str, ...]

    def assignment(self, diagram: Diagram) -> dict[str, str]:
        return {c.id: p for c, p in zip(diagram.alpha, self.points)}

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __str__(self) -> str:
        return "(" + ", ".join(self.points) + ")"


def enumerate_generators(diagram: Diagram) -> list[Generator]:
    """All bijections alpha -> beta realized by intersection points, sorted."""
    beta_of = {p.id: diagram.point_curves[p.id][BETA][0] for p in diagram.points}
    options = [sorted(c.points) for c in diagram.alpha]
    out: list[Generator] = []
    chosen: list[str] = []
    used: set[str] = set()

    def rec(i: int) -> None:
        if i == len(options):
            out.append(Generator(tuple(chosen)))
            return
        for p in options[i]:
            b = beta_of[p]
            if b in used:
                continue
            used.add(b)
            chosen.append(p)
            rec(i + 1)
            chosen.pop()
            used.discard(b)

    rec(0)
    return sorted(out)


def permanent(matrix: Sequence[Sequence[int]]) -> int:
    """Permanent by Ryser's formula (for cross-checks on small matrices)."""
    n = len(matrix)
    if n == 0:
        return 1
    total = 0
    for mask in range(1, 1 << n):
        prod = 1
        for row in matrix:
            prod *= sum(row[j] for j in range(n) if mask >> j & 1)
        total += (-1) ** (n - bin(mask).count("1")) * prod
    return total


def point_count_matrix(diagram: Diagram) -> list[list[int]]:
    """``|alpha_i cap beta_j|``."""
    a_idx = {c.id: i for i, c in enumerate(diagram.alpha)}
    b_idx = {c.id: j for j, c in enumerate(diagram.beta)}
    out = [[0] * len(diagram.beta) for _ in diagram.alpha]
    for p in diagram.points:
        pc = diagram.point_curves[p.id]
        out[a_idx[pc[ALPHA][0]]][b_idx[pc[BETA][0]]] += 1
    return out


# ---------------------------------------------------------------------------
# domain search


class _Offsets:
    """Union-find over regions with integer offsets: value(r) = value(root) + off(r)."""

    def __init__(self, regions: Iterable[str], anchored: Iterable[str]):
        self.parent = {r: r for r in regions}
        self.off = {r: 0 for r in self.parent}
        self.fixed: dict[str, int] = {}
        self.span: dict[str, tuple[int, int]] = {r: (0, 0) for r in self.parent}
        for r in anchored:
            self.fixed[r] = 0

    def copy(self) -> "_Offsets":
        new = object.__new__(_Offsets)
        new.parent = dict(self.parent)
        new.off = dict(self.off)
        new.fixed = dict(self.fixed)
        new.span = dict(self.span)
        return new

    def find(self, r: str) -> tuple[str, int]:
        acc = 0
        while self.parent[r] != r:
            acc += self.off[r]
            r = self.parent[r]
        return r, acc

    def ok(self, root: str) -> bool:
        lo, hi = self.span[root]
        if root in self.fixed:
            base = self.fixed[root]
            return 0 <= base + lo and base + hi <= 1
        return hi - lo <= 1

    def relate(self, a: str, b: str, diff: int) -> bool:
        """Impose value(a) - value(b) = diff; False on contradiction or range failure."""
        ra, oa = self.find(a)
        rb, ob = self.find(b)
        if ra == rb:
            return oa - ob == diff
        # value(rb) = value(ra) + oa - ob - diff
        shift = oa - ob - diff
        fa, fb = self.fixed.get(ra), self.fixed.get(rb)
        if fa is not None and fb is not None and fb != fa + shift:
            return False
        self.parent[rb] = ra
        self.off[rb] = shift
        lo_a, hi_a = self.span[ra]
        lo_b, hi_b = self.span[rb]
        self.span[ra] = (min(lo_a, lo_b + shift), max(hi_a, hi_b + shift))
        if fa is None and fb is not None:
            self.fixed[ra] = fb - shift
        return self.ok(ra)

    def values(self) -> Optional[dict[str, int]]:
        out = {}
        for r in self.parent:
            root, acc = self.find(r)
            if root not in self.fixed:
                return None
            out[r] = self.fixed[root] + acc
        return out


def _curve_chains(diagram: Diagram, curve_id: str, defect: dict[str, int]) -> list[list[int]]:
    """Segment multiplicity vectors in {-1,0,1} on one curve realizing the given point defects."""
    pts = diagram.curves[curve_id].points
    if sum(defect.get(p, 0) for p in pts):
        return []
    base = [0] * len(pts)
    for i in range(1, len(pts)):
        base[i] = base[i - 1] - defect.get(pts[i], 0)
    out = []
    for c in (-1, 0, 1):
        chain = [v + c for v in base]
        if all(-1 <= v <= 1 for v in chain):
            out.append(chain)
    return out


def _second(first: str) -> str:
    return ALPHA if first == BETA else BETA


def _is_counted(diagram: Diagram, d: Domain, x: Sequence[str], y: Sequence[str], first: str) -> bool:
    return bool(d.mult) and d.is_nonnegative() and maslov_index(diagram, d, x, y, first, check=False) == 1


def dfs_domains(diagram: Diagram, x: Generator, y: Generator, first: str = BETA) -> list[Domain]:
    """Nonnegative {0,1} index-one domains from ``x`` to ``y``, by propagation over curve chains.

    Each curve carries the boundary multiplicity of the domain; its chain is
    fixed by the point defects up to adding the whole curve, so there are at
    most three choices per curve.  Choices are taken curve by curve, and every
    segment imposes ``d(left) - d(right)`` on the regions; boundary regions
    are pinned to zero.  Branches leaving {0,1} are cut.
    """
    want: dict[str, int] = {}
    for p in y.points:
        want[p] = want.get(p, 0) + 1
    for p in x.points:
        want[p] = want.get(p, 0) - 1
    fam_defect = {first: want, _second(first): {p: -v for p, v in want.items()}}
    curves = [(c.id, c.family) for c in diagram.alpha + diagram.beta]
    # most constrained first
    options = []
    for cid, fam in curves:
        chains = _curve_chains(diagram, cid, fam_defect[fam])
        if not chains:
            return []
        options.append((cid, chains))
    options.sort(key=lambda o: len(o[1]))

    found: list[Domain] = []
    start = _Offsets(diagram.region_ids, diagram.boundary_regions)

    def rec(i: int, state: _Offsets) -> None:
        if i == len(options):
            vals = state.values()
            if vals is None:
                return
            d = Domain(vals)
            if _is_counted(diagram, d, x.points, y.points, first):
                found.append(d)
            return
        cid, chains = options[i]
        segs = diagram.curve_segments(cid)
        for chain in chains:
            st = state.copy()
            if all(st.relate(s.left, s.right, m) for s, m in zip(segs, chain)):
                rec(i + 1, st)

    rec(0, start)
    return sorted(found, key=lambda d: d.support)


def oracle_domains_all(diagram: Diagram, generators: Sequence[Generator], first: str = BETA) -> dict[tuple[int, int], list[Domain]]:
    """Exhaustive sweep of all {0,1} vectors on interior regions.

    Returns ``(index of x, index of y) -> domains`` for every counted domain.
    Independent of the propagation search: it only evaluates the boundary and
    index formulas on every candidate.
    """
    regions = list(diagram.interior_regions)
    k = len(regions)
    if k > ORACLE_MAX_REGIONS:
        raise ValueError(f"oracle limited to {ORACLE_MAX_REGIONS} interior regions, got {k}")
    if k == 0:
        return {}
    rows = np.array(defect_matrix(diagram, regions), dtype=np.int64).reshape(-1, k)
    npts = sum(len(c.points) for c in diagram.alpha)
    alpha_rows, beta_rows = rows[:npts], rows[npts:]
    # row order of each block: points along the curves of that family
    alpha_pts = [p for c in diagram.alpha for p in c.points]
    beta_pts = [p for c in diagram.beta for p in c.points]
    beta_pos = {p: i for i, p in enumerate(beta_pts)}
    perm = [beta_pos[p] for p in alpha_pts]
    lead = alpha_rows if first == ALPHA else beta_rows[perm]
    other = beta_rows[perm] if first == ALPHA else alpha_rows
    gen_index = {frozenset(g.points): i for i, g in enumerate(generators)}
    out: dict[tuple[int, int], list[Domain]] = {}
    chunk = 1 << 16
    shifts = np.arange(k, dtype=np.int64)
    for lo in range(1, 1 << k, chunk):
        codes = np.arange(lo, min(lo + chunk, 1 << k), dtype=np.int64)
        vecs = ((codes[:, None] >> shifts[None, :]) & 1).astype(np.int64)
        a = vecs @ lead.T
        b = vecs @ other.T
        keep = np.all((a >= -1) & (a <= 1), axis=1) & np.all(a + b == 0, axis=1)
        for code_row, arow in zip(vecs[keep], a[keep]):
            d = Domain({regions[j]: 1 for j in range(k) if code_row[j]})
            neg = {alpha_pts[i] for i in np.nonzero(arow < 0)[0]}
            pos = {alpha_pts[i] for i in np.nonzero(arow > 0)[0]}
            for gi, g in enumerate(generators):
                gs = set(g.points)
                if not neg <= gs or gs & pos:
                    continue
                yi = gen_index.get(frozenset((gs - neg) | pos))
                if yi is None:
                    continue
                if maslov_index(diagram, d, g.points, generators[yi].points, first, check=False) == 1:
                    out.setdefault((gi, yi), []).append(d)
    for key in out:
        out[key].sort(key=lambda d: d.support)
    return out


def connecting_domains(diagram: Diagram, x: Generator, y: Generator, first: str = BETA,
                       oracle: bool = False) -> list[Domain]:
    """Counted domains from ``x`` to ``y``."""
    nice = is_nice(diagram)
    if not nice:
        raise NotNiceError(nice.offenders)
    if oracle:
        gens = [x, y] if x != y else [x]
        table = oracle_domains_all(diagram, gens, first)
        return table.get((0, len(gens) - 1), [])
    if x == y or sum(1 for p, q in zip(x.points, y.points) if p != q) > 2:
        return []
    return dfs_domains(diagram, x, y, first)


def is_empty_polygon(diagram: Diagram, d: Domain, x: Generator, y: Generator) -> bool:
    """Post-hoc shape check: an embedded bigon or square with no other generator corner inside."""
    if any(v not in (0, 1) for v in d.mult.values()):
        return False
    e = euler_measure(diagram, d)
    if e not in (Fraction(0), Fraction(1, 2)):
        return False
    moved = [(p, q) for p, q in zip(x.points, y.points) if p != q]
    corners = {p for pq in moved for p in pq}
    if len(corners) not in (2, 4):
        return False
    fixed = [p for p in x.points if p not in corners]
    return point_measure(diagram, d, fixed) == 0


# ---------------------------------------------------------------------------
# differential and homology


@dataclass(frozen=True)
class DifferentialMatrix:
    """Entry ``(i, j)`` is the mod-2 count of domains from generator ``j`` to generator ``i``."""

    generators: tuple[Generator, ...]
    matrix: Gf2Matrix
    counts: dict[tuple[int, int], int] = field(default_factory=dict, compare=False)

    @property
    def size(self) -> int:
        return len(self.generators)

    def index(self, g: Generator | Iterable[str]) -> int:
        key = frozenset(g.points if isinstance(g, Generator) else g)
        for i, h in enumerate(self.generators):
            if frozenset(h.points) == key:
                return i
        raise KeyError(f"not a generator: {g}")

    def image(self, g: Generator | Iterable[str]) -> list[Generator]:
        j = self.index(g)
        return [self.generators[i] for i in range(self.size) if self.matrix.entry(i, j)]

    def as_pairs(self) -> set[tuple[frozenset, frozenset]]:
        """Nonzero entries as (source point set, target point set)."""
        gens = self.generators
        return {
            (frozenset(gens[j].points), frozenset(gens[i].points))
            for i in range(self.size)
            for j in range(self.size)
            if self.matrix.entry(i, j)
        }

    def squares_to_zero(self) -> bool:
        return self.matrix.matmul(self.matrix).is_zero()

    def to_dict(self) -> dict[str, Any]:
        return {
            "generators": [list(g.points) for g in self.generators],
            "matrix": self.matrix.to_lists(),
        }


def _column(diagram: Diagram, gens: Sequence[Generator], j: int, first: str) -> dict[int, int]:
    out = {}
    for i, y in enumerate(gens):
        if i == j:
            continue
        n = len(connecting_domains(diagram, gens[j], y, first))
        if n:
            out[i] = n
    return out


def differential(diagram: Diagram, first: str = BETA, oracle: bool = False, jobs: int = 1,
                 check_preconditions: bool = True) -> DifferentialMatrix:
    """The GF(2) differential; raises if it does not square to zero."""
    if check_preconditions:
        nice = is_nice(diagram)
        if not nice:
            raise NotNiceError(nice.offenders)
        if not check_admissibility(diagram):
            raise NotAdmissibleError("diagram has a nonzero nonnegative periodic domain")
    gens = tuple(enumerate_generators(diagram))
    n = len(gens)
    counts: dict[tuple[int, int], int] = {}
    if oracle:
        for (j, i), ds in oracle_domains_all(diagram, gens, first).items():
            if i != j:
                counts[(i, j)] = len(ds)
    else:
        cols = range(n)
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(lambda j: _column(diagram, gens, j, first), cols))
        else:
            results = [_column(diagram, gens, j, first) for j in cols]
        for j, col in enumerate(results):
            for i, c in col.items():
                counts[(i, j)] = c
    data = [0] * n
    for (i, j), c in sorted(counts.items()):
        if c % 2:
            data[i] |= 1 << j
    dm = DifferentialMatrix(gens, Gf2Matrix(n, n, tuple(data)), dict(sorted(counts.items())))
    if not dm.squares_to_zero():
        raise DSquaredNonzeroError("d o d != 0 over GF(2)")
    return dm


def sfh_dimension(d: DifferentialMatrix) -> int:
    if not d.squares_to_zero():
        raise DSquaredNonzeroError("d o d != 0 over GF(2)")
    return d.size - 2 * gf2_rank(d.matrix)


@dataclass(frozen=True)
class EHVerdict:
    is_cycle: bool
    trivial: bool

    @property
    def nonzero(self) -> bool:
        return self.is_cycle and not self.trivial


def eh_class(diagram: Diagram, d: Optional[DifferentialMatrix] = None) -> EHVerdict:
    if diagram.contact_generator is None:
        raise NoContactGeneratorError("diagram has no contact generator")
    if d is None:
        d = differential(diagram)
    j = d.index(diagram.contact_generator)
    col = d.matrix.column(j)
    sol = gf2_solve(d.matrix, 1 << j)
    return EHVerdict(col == 0, sol.solvable)


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class Report:
    name: str
    generator_count: int
    sfh_dimension: int
    eh_is_cycle: Optional[bool]
    eh_trivial: Optional[bool]
    diagnostics: dict[str, Any]
    differential: Optional[DifferentialMatrix] = field(default=None, compare=False)

    @property
    def eh_nonzero(self) -> Optional[bool]:
        if self.eh_is_cycle is None:
            return None
        return bool(self.eh_is_cycle and not self.eh_trivial)

    def to_dict(self, include_differential: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "name": self.name,
            "generator_count": self.generator_count,
            "sfh_dimension": self.sfh_dimension,
        }
        if self.eh_is_cycle is not None:
            out["eh_is_cycle"] = self.eh_is_cycle
            out["eh_trivial"] = self.eh_trivial
        out["diagnostics"] = dict(self.diagnostics)
        if include_differential and self.differential is not None:
            out["differential"] = self.differential.to_dict()
        return out

    def to_json(self, include_differential: bool = False) -> str:
        return json.dumps(self.to_dict(include_differential), indent=2) + "\n"

    def to_text(self, include_differential: bool = False) -> str:
        lines = [
            f"diagram: {self.name}",
            f"generators: {self.generator_count}",
            f"SFH dimension over GF(2): {self.sfh_dimension}",
        ]
        if self.eh_is_cycle is None:
            lines.append("EH class: no contact generator")
        elif not self.eh_is_cycle:
            lines.append("EH class: contact generator is not a cycle")
        elif self.eh_trivial:
            lines.append("EH class: trivial (boundary)")
        else:
            lines.append("EH class: nontrivial (generator candidate)")
        diag = self.diagnostics
        lines.append(
            f"nice: {diag['nice']}  admissible: {diag['admissible']}  periodic domains: {diag['periodic_rank']}"
        )
        if "timing_ms" in diag:
            lines.append(f"time: {diag['timing_ms']} ms")
        if include_differential and self.differential is not None:
            d = self.differential
            for j, g in enumerate(d.generators):
                img = d.image(g)
                rhs = " + ".join(str(h) for h in img) if img else "0"
                lines.append(f"d{g} = {rhs}")
        return "\n".join(lines) + "\n"


def compute_report(diagram: Diagram, oracle: bool = False, jobs: int = 1, timing: bool = False,
                   first: str = BETA) -> Report:
    """Validate, check every precondition, and compute the homology and contact class verdicts."""
    t0 = time.perf_counter()
    violations = validate(diagram)
    if violations:
        raise ValidationError(violations)
    bal = check_balanced(diagram)
    if not bal:
        raise NotBalancedError(bal.reasons)
    nice = is_nice(diagram)
    if not nice:
        raise NotNiceError(nice.offenders)
    basis = periodic_domains(diagram)
    if not check_admissibility(diagram, basis):
        raise NotAdmissibleError("diagram has a nonzero nonnegative periodic domain")
    d = differential(diagram, first=first, oracle=oracle, jobs=jobs, check_preconditions=False)
    dim = sfh_dimension(d)
    eh: Optional[EHVerdict] = eh_class(diagram, d) if diagram.contact_generator is not None else None
    diagnostics: dict[str, Any] = {
        "balanced": True,
        "nice": True,
        "admissible": True,
        "periodic_rank": len(basis),
        "interior_regions": len(diagram.interior_regions),
        "search": "oracle" if oracle else "dfs",
    }
    if timing:
        diagnostics["timing_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    return Report(
        name=diagram.name,
        generator_count=d.size,
        sfh_dimension=dim,
        eh_is_cycle=None if eh is None else eh.is_cycle,
        eh_trivial=None if eh is None else eh.trivial,
        diagnostics=diagnostics,
        differential=d,
    )
