"""SVG drawings of two-dimensional complexes, in ``M`` coordinates."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .cellcx import Cell, CellComplexD, TorusComplexE, torus_label

SCALE = 90
PAD = 50
FILLS = ["#dbe8f6", "#f6e3cf", "#dcefd8", "#efd8ec", "#f3f0c8", "#d8eeee"]


def variable_names(r: int) -> List[str]:
    return list("xyzw") if r == 4 else list("xyz")[:r] if r <= 3 else [f"x{i}" for i in range(r)]


def laurent_str(e: Sequence[int], names: Sequence[str]) -> str:
    def part(sign):
        out = []
        for x, k in zip(names, e):
            k *= sign
            if k == 1:
                out.append(x)
            elif k > 1:
                out.append(f"{x}{_sup(k)}")
        return "".join(out)

    num, den = part(1), part(-1)
    if not den:
        return num or "1"
    return f"{num or '1'}/{den}"


def _sup(k: int) -> str:
    return "".join("⁰¹²³⁴⁵⁶⁷⁸⁹"[int(c)] for c in str(k))


def _ordered(cell: Cell) -> List[Tuple[Fraction, ...]]:
    cx, cy = cell.barycenter
    return sorted(cell.vertices, key=lambda v: math.atan2(float(v[1] - cy), float(v[0] - cx)))


class _Canvas:
    def __init__(self, cells: Sequence[Cell], extra: Sequence[Tuple[float, float]] = ()):
        pts = [(float(v[0]), float(v[1])) for c in cells for v in c.vertices] + list(extra)
        if pts:
            self.x0 = min(p[0] for p in pts)
            self.y1 = max(p[1] for p in pts)
            self.w = (max(p[0] for p in pts) - self.x0) * SCALE + 2 * PAD
            self.h = (self.y1 - min(p[1] for p in pts)) * SCALE + 2 * PAD
        else:
            self.x0 = self.y1 = 0.0
            self.w = self.h = 2 * PAD
        self.items: List[str] = []

    def xy(self, p) -> Tuple[float, float]:
        return (
            round(PAD + (float(p[0]) - self.x0) * SCALE, 2),
            round(PAD + (self.y1 - float(p[1])) * SCALE, 2),
        )

    def add(self, s: str) -> None:
        self.items.append(s)

    def svg(self, title: str) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.w:g}" height="{self.h:g}" '
            f'viewBox="0 0 {self.w:g} {self.h:g}" font-family="serif" font-size="13">'
        )
        defs = (
            '<defs><marker id="arrow" viewBox="0 0 10 10" refX="5" refY="5" markerWidth="7" '
            'markerHeight="7" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#333"/></marker></defs>'
        )
        return "\n".join([head, f"<title>{title}</title>", defs] + self.items + ["</svg>"]) + "\n"


def _text(cv: _Canvas, p, label: str, dy: float = -8) -> None:
    x, y = cv.xy(p)
    cv.add(f'<text x="{x:g}" y="{y + dy:g}" text-anchor="middle">{label}</text>')


def render_D(D: CellComplexD, names: Optional[Sequence[str]] = None) -> str:
    if D.td.n != 2 and D.cells:
        raise ValueError("only two-dimensional complexes can be drawn")
    names = names or variable_names(D.td.r)
    cv = _Canvas(D.cells)
    for t, i in enumerate(D.cells_of_dim(2)):
        pts = " ".join("%g,%g" % cv.xy(v) for v in _ordered(D.cells[i]))
        cv.add(f'<polygon points="{pts}" fill="{FILLS[t % len(FILLS)]}" stroke="none"/>')
    for i in D.cells_of_dim(1):
        a, b = D.cells[i].vertices
        (x1, y1), (x2, y2) = cv.xy(a), cv.xy(b)
        cv.add(f'<line x1="{x1:g}" y1="{y1:g}" x2="{x2:g}" y2="{y2:g}" stroke="#333" stroke-width="1.5"/>')
    for i in D.cells_of_dim(0):
        c = D.cells[i]
        x, y = cv.xy(c.barycenter)
        lattice = all(v.denominator == 1 for v in c.barycenter)
        fill = "#000" if lattice else "#fff"
        cv.add(f'<circle cx="{x:g}" cy="{y:g}" r="4" fill="{fill}" stroke="#000"/>')
        _text(cv, c.barycenter, laurent_str(c.ceiling(), names))
    return cv.svg("D")


def render_E(E: TorusComplexE, names: Optional[Sequence[str]] = None) -> str:
    """Fundamental domain of ``E`` with arrows giving the edge orientations.

    Edges drawn on opposite sides of the unit square with matching arrows
    are identified.
    """
    if E.td.n != 2 and E.cells:
        raise ValueError("only two-dimensional complexes can be drawn")
    names = names or variable_names(E.td.r)
    e_names = list(names)
    cv = _Canvas(E.cells, [(0.0, 0.0), (1.0, 1.0)] if E.cells else [])
    if E.cells:
        (x0, y0), (x1, y1) = cv.xy((0, 1)), cv.xy((1, 0))
        cv.add(
            f'<rect x="{x0:g}" y="{y0:g}" width="{x1 - x0:g}" height="{y1 - y0:g}" '
            'fill="none" stroke="#999" stroke-dasharray="4 3"/>'
        )
    for t, i in enumerate(E.cells_of_dim(2)):
        c = E.cells[i]
        pts = " ".join("%g,%g" % cv.xy(v) for v in _ordered(c))
        cv.add(f'<polygon points="{pts}" fill="{FILLS[t % len(FILLS)]}" stroke="none"/>')
        ceil, floor = torus_label(c)
        _text(cv, c.barycenter, f"{laurent_str(ceil, e_names)}⊗{laurent_str(floor, e_names)}", 4)
    for i in E.cells_of_dim(1):
        c = E.cells[i]
        a, b = sorted(c.vertices)
        (x1, y1), (x2, y2) = cv.xy(a), cv.xy(b)
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        cv.add(f'<line x1="{x1:g}" y1="{y1:g}" x2="{x2:g}" y2="{y2:g}" stroke="#333" stroke-width="1.5"/>')
        cv.add(f'<line x1="{x1:g}" y1="{y1:g}" x2="{mx:g}" y2="{my:g}" stroke="none" marker-end="url(#arrow)"/>')
    for i in E.cells_of_dim(0):
        c = E.cells[i]
        x, y = cv.xy(c.barycenter)
        cv.add(f'<circle cx="{x:g}" cy="{y:g}" r="4" fill="#000"/>')
        ceil, floor = torus_label(c)
        _text(cv, c.barycenter, f"{laurent_str(ceil, e_names)}⊗{laurent_str(floor, e_names)}")
    return cv.svg("E")


def render(obj) -> str:
    if isinstance(obj, CellComplexD):
        return render_D(obj)
    if isinstance(obj, TorusComplexE):
        return render_E(obj)
    raise TypeError(f"cannot render {type(obj).__name__}")


def empty_svg() -> str:
    return _Canvas([]).svg("empty")
