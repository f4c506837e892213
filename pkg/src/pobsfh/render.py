"""Deterministic schematic SVG output.

A partial open book is drawn as its base disks with bands (P-bands
highlighted) above a panel for the built diagram.  The diagram panel shows
the curves as nodes, alpha on the left and beta on the right, with one edge
per intersection point; the contact generator's points are highlighted.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Union
from xml.sax.saxutils import escape

from .builder import build_diagram
from .diagram import Diagram
from .pob import PartialOpenBook

_STYLE = (
    "<style>"
    ".disk{fill:#f4f4f4;stroke:#333}.band{fill:none;stroke:#999;stroke-width:6}"
    ".band.P{stroke:#3a7}.alpha{fill:#e33}.beta{fill:#36c}"
    ".point{fill:#000}.point.contact{fill:#e90;stroke:#000}"
    "line.edge{stroke:#777}line.edge.contact{stroke:#e90;stroke-width:3}"
    "text{font-family:monospace;font-size:11px}"
    "</style>"
)


def _f(x: float) -> str:
    return f"{x:.2f}"


def _diagram_panel(d: Diagram, top: float, width: float) -> tuple[list[str], float]:
    out: list[str] = []
    n = max(len(d.alpha), len(d.beta), 1)
    row = 40.0
    height = n * row + 40
    xa, xb = 80.0, width - 80.0
    pos = {}
    for i, c in enumerate(d.alpha):
        pos[c.id] = (xa, top + 30 + i * row)
    for i, c in enumerate(d.beta):
        pos[c.id] = (xb, top + 30 + i * row)
    contact = set(d.contact_generator or ())
    # parallel edges between one pair of curves are spread vertically
    groups: dict[tuple[str, str], list[str]] = {}
    for p in sorted(d.points, key=lambda p: p.id):
        pc = d.point_curves[p.id]
        groups.setdefault((pc["alpha"][0], pc["beta"][0]), []).append(p.id)
    for (a, b), pids in sorted(groups.items()):
        (x1, y1), (x2, y2) = pos[a], pos[b]
        for k, pid in enumerate(pids):
            off = (k - (len(pids) - 1) / 2) * 10
            mx, my = (x1 + x2) / 2, (y1 + y2) / 2 + off
            cls = "edge contact" if pid in contact else "edge"
            out.append(f'<line class="{cls}" x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(mx)}" y2="{_f(my)}"/>')
            out.append(f'<line class="{cls}" x1="{_f(mx)}" y1="{_f(my)}" x2="{_f(x2)}" y2="{_f(y2)}"/>')
            pcls = "point contact" if pid in contact else "point"
            out.append(f'<circle class="{pcls}" data-id="{escape(pid)}" cx="{_f(mx)}" cy="{_f(my)}" r="4"/>')
            out.append(f'<text x="{_f(mx + 6)}" y="{_f(my - 4)}">{escape(pid)}</text>')
    for c in d.alpha + d.beta:
        x, y = pos[c.id]
        cls = "alpha" if c.family == "alpha" else "beta"
        out.append(f'<circle class="{cls}" cx="{_f(x)}" cy="{_f(y)}" r="9"/>')
        tx = x - 34 if c.family == "alpha" else x + 14
        out.append(f'<text x="{_f(tx)}" y="{_f(y + 4)}">{escape(c.id)}</text>')
    out.append(
        f'<text x="10" y="{_f(top + height - 8)}">{escape(d.name)}: {len(d.points)} points, '
        f'{len(d.interior_regions)} interior regions, {d.boundary_components} boundary circles</text>'
    )
    return out, height


def _pob_panel(pob: PartialOpenBook, width: float) -> tuple[list[str], float]:
    out: list[str] = []
    sizes = pob.surface.circle_sizes
    radius = 60.0
    gap = width / (len(sizes) + 1)
    centres = [(gap * (i + 1), 110.0) for i in range(len(sizes))]

    def at(disk: int, position: float) -> tuple[float, float]:
        cx, cy = centres[disk]
        t = 2 * math.pi * position / sizes[disk]
        return cx + radius * math.cos(t), cy - radius * math.sin(t)

    for b in pob.surface.bands:
        f1, f2 = b.foot_1, b.foot_2
        x1, y1 = at(f1.disk, (f1.start + f1.end) / 2)
        x2, y2 = at(f2.disk, (f2.start + f2.end) / 2)
        bulge = 40.0 + 15 * pob.surface.bands.index(b)
        cx, cy = (x1 + x2) / 2, min(y1, y2) - bulge
        cls = "band P" if b.is_P else "band"
        out.append(f'<path class="{cls}" d="M {_f(x1)} {_f(y1)} Q {_f(cx)} {_f(cy)} {_f(x2)} {_f(y2)}"/>')
        out.append(f'<text x="{_f(cx)}" y="{_f(cy / 2 + (y1 + y2) / 4)}">{escape(b.id)}</text>')
    for i, (cx, cy) in enumerate(centres):
        out.append(f'<circle class="disk" cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(radius)}"/>')
        out.append(f'<text x="{_f(cx - 12)}" y="{_f(cy + 4)}">D{i}</text>')
    y = 200.0
    for bid in sorted(pob.monodromy):
        toks = " ".join(t.to_json()[0] + t.to_json()[1] + str(t.slot) for t in pob.monodromy[bid].tokens) or "id"
        out.append(f'<text x="10" y="{_f(y)}">h(b_{escape(bid)}) = {escape(toks)}</text>')
        y += 14
    return out, y + 10


def render_svg(obj: Union[Diagram, PartialOpenBook], width: float = 480.0) -> str:
    body: list[str] = []
    top = 0.0
    if isinstance(obj, PartialOpenBook):
        part, top = _pob_panel(obj, width)
        body += part
        diagram = build_diagram(obj)
    else:
        diagram = obj
    part, h = _diagram_panel(diagram, top, width)
    body += part
    total = top + h
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(total)}" '
        f'viewBox="0 0 {_f(width)} {_f(total)}">'
    )
    return "\n".join([head, _STYLE, *body, "</svg>"]) + "\n"


def render(obj: Union[Diagram, PartialOpenBook], path: Union[str, Path]) -> None:
    Path(path).write_text(render_svg(obj), encoding="utf-8")
