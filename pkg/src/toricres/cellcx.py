"""Cell complexes cut out by the integral coordinate hyperplanes of ``R^r``.

Points of the slice ``alpha + M_R`` are written in ``M`` coordinates ``m``; the
ambient point is ``alpha + (<m, u_i>)_i``. A cell is determined by which side of
every integral hyperplane it lies on, stored as a *code* per coordinate:
``2k`` means the coordinate equals ``k`` and ``2k + 1`` means it lies strictly
between ``k`` and ``k + 1``. Realizations are convex, so a feasible code vector
is exactly one cell.

Two complexes are built here:

* ``D``: the cells of the slice ``alpha + M_R`` inside the closed quadrant.
  Its vertices include the exponents of all monomials of degree ``deg alpha``.
* ``E``: the same arrangement through the origin, taken modulo ``M``. Each
  orbit is stored by a representative whose barycenter has ``M`` coordinates
  in ``[0, 1)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import exactla as la
from .errors import NotAFacet
from .toric import Exponent, ToricData

Code = Tuple[int, ...]
Point = Tuple[Fraction, ...]


@dataclass
class Cell:
    pattern: Code
    dim: int
    barycenter: Point
    vertices: List[Point] = field(default_factory=list, repr=False)
    faces: List[int] = field(default_factory=list)

    @property
    def at_set(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.pattern) if c % 2 == 0)

    def ceiling(self) -> Exponent:
        return tuple((c + 1) // 2 for c in self.pattern)

    def floor(self) -> Exponent:
        return tuple(c // 2 for c in self.pattern)

    def intervals(self) -> List[Tuple[str, int]]:
        return [("at", c // 2) if c % 2 == 0 else ("between", c // 2) for c in self.pattern]


def code_of_value(v: Fraction) -> int:
    f = math.floor(v)
    return 2 * f if v == f else 2 * f + 1


def pattern_of_point(td: ToricData, m: Sequence, alpha: Optional[Sequence[int]] = None) -> Code:
    return tuple(code_of_value(Fraction(v)) for v in td.values(m, alpha))


def compatible(face: Code, cell: Code) -> bool:
    """Whether the cell with code ``face`` lies in the closure of ``cell``."""
    for f, c in zip(face, cell):
        if c % 2 == 0:
            if f != c:
                return False
        elif abs(f - c) > 1:
            return False
    return True


def shift_pattern(td: ToricData, pattern: Code, t: Sequence[int]) -> Code:
    """Code of the cell translated by ``t`` in ``M``."""
    vals = td.values(t)
    return tuple(c + 2 * v for c, v in zip(pattern, vals))


class _Arrangement:
    """Shared machinery for one toric datum: local cones, closures, orientations."""

    def __init__(self, td: ToricData):
        self.td = td
        self.rays = [list(u) for u in td.rays]
        self.n = td.n
        self.r = td.r
        self._cone_cache: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], bool] = {}
        self._closure_cache: Dict[Code, List[Point]] = {}
        self._basis_cache: Dict[Tuple[int, ...], List[List[int]]] = {}

    # -- local structure at a point --------------------------------------
    def cone_feasible(self, idx: Tuple[int, ...], signs: Tuple[int, ...]) -> bool:
        """Is ``{w : sign <w, u_i> = s_i for i in idx}`` nonempty?"""
        key = (idx, signs)
        hit = self._cone_cache.get(key)
        if hit is None:
            eq = [self.rays[i] for i, s in zip(idx, signs) if s == 0]
            ineq = [[s * x for x in self.rays[i]] for i, s in zip(idx, signs) if s != 0]
            hit = _strict_cone_feasible(eq, ineq, self.n)
            self._cone_cache[key] = hit
        return hit

    def local_patterns(
        self, m: Point, alpha: Optional[Sequence[int]] = None, quadrant: bool = False
    ) -> List[Tuple[Code, int]]:
        """All cells whose closure contains the point ``m``, with their dimensions."""
        vals = [Fraction(v) for v in self.td.values(m, alpha)]
        tight = tuple(i for i, v in enumerate(vals) if v.denominator == 1)
        base = [code_of_value(v) for v in vals]
        out = []
        for signs in itertools.product((-1, 0, 1), repeat=len(tight)):
            if quadrant and any(s < 0 and vals[i] == 0 for i, s in zip(tight, signs)):
                continue
            if not self.cone_feasible(tight, signs):
                continue
            code = list(base)
            for i, s in zip(tight, signs):
                code[i] = base[i] + s
            at = [self.rays[i] for i, s in zip(tight, signs) if s == 0]
            out.append((tuple(code), self.n - la.rational_rank(at) if at else self.n))
        return out

    # -- closures -------------------------------------------------------------
    def closure_vertices(self, pattern: Code, alpha: Optional[Sequence[int]] = None) -> List[Point]:
        """Vertices of the closed cell, sorted."""
        a = tuple(alpha) if alpha is not None else (0,) * self.r
        key = tuple(c - 2 * x for c, x in zip(pattern, a))
        hit = self._closure_cache.get(key)
        if hit is None:
            hit = self._closure_vertices_at_origin(key)
            self._closure_cache[key] = hit
        return hit

    def _closure_vertices_at_origin(self, pattern: Code) -> List[Point]:
        eq_rows = [self.rays[i] for i, c in enumerate(pattern) if c % 2 == 0]
        eq_rhs = [c // 2 for c in pattern if c % 2 == 0]
        between = [i for i, c in enumerate(pattern) if c % 2 == 1]
        k = self.n - (la.rational_rank(eq_rows) if eq_rows else 0)
        found = set()
        for chosen in itertools.combinations(between, k):
            for ups in itertools.product((0, 1), repeat=k):
                rows = eq_rows + [self.rays[i] for i in chosen]
                rhs = eq_rhs + [pattern[i] // 2 + u for i, u in zip(chosen, ups)]
                if la.rational_rank(rows) < self.n:
                    continue
                m = la.solve_rational(rows, rhs)
                if m is None:
                    continue
                vals = self.td.values(m)
                if all(
                    (v == c // 2) if c % 2 == 0 else (c // 2 <= v <= c // 2 + 1)
                    for v, c in zip(vals, pattern)
                ):
                    found.add(tuple(m))
        return sorted(found)

    # -- orientation ---------------------------------------------------------
    def direction_basis(self, at_set: Tuple[int, ...]) -> List[List[int]]:
        """Hermite-reduced lattice basis of the directions of a cell."""
        hit = self._basis_cache.get(at_set)
        if hit is None:
            hit = la.integer_kernel([self.rays[i] for i in at_set], cols=self.n)
            self._basis_cache[at_set] = hit
        return hit

    def incidence(self, cell: Cell, face: Cell) -> int:
        """Sign of ``face`` in the boundary of ``cell`` (outward normal first)."""
        if face.dim != cell.dim - 1 or not compatible(face.pattern, cell.pattern):
            raise NotAFacet(f"{face.pattern} is not a facet of {cell.pattern}")
        b = self.direction_basis(cell.at_set)
        c = self.direction_basis(face.at_set)
        normal = [x - y for x, y in zip(face.barycenter, cell.barycenter)]
        vectors = [normal] + [list(v) for v in c]
        B = la.transpose(b, cols=self.n)
        coords = []
        for v in vectors:
            x = la.solve_rational(B, v)
            if x is None:
                raise NotAFacet("face direction outside cell direction space")
            coords.append(x)
        s = la.det(coords)
        if s == 0:
            raise NotAFacet("degenerate facet orientation")
        return 1 if s > 0 else -1

    def make_cell(self, pattern: Code, dim: int, alpha: Optional[Sequence[int]] = None) -> Cell:
        verts = self.closure_vertices(pattern, alpha)
        k = len(verts)
        bary = tuple(sum(v[c] for v in verts) / k for c in range(self.n))
        return Cell(pattern=pattern, dim=dim, barycenter=bary, vertices=verts)


@lru_cache(maxsize=None)
def _arrangement(td: ToricData) -> _Arrangement:
    return _Arrangement(td)


def arrangement(td: ToricData) -> _Arrangement:
    return _arrangement(td)


def _strict_cone_feasible(eq: List[List[int]], pos: List[List[int]], n: int) -> bool:
    """Feasibility of ``eq w = 0, pos w > 0`` by Fourier-Motzkin elimination.

    Scaling lets ``> 0`` be replaced with ``>= 1``.
    """
    K = la.nullspace_rational(eq, cols=n) if eq else la.nullspace_rational([], cols=n)
    if not pos:
        return True
    if not K:
        return False
    # constraints g . y >= h in the kernel coordinates y
    system = [
        ([sum(Fraction(p[j]) * K[t][j] for j in range(n)) for t in range(len(K))], Fraction(1))
        for p in pos
    ]
    return fourier_motzkin_feasible(system, len(K))


def fourier_motzkin_feasible(system: List[Tuple[List[Fraction], Fraction]], nvars: int) -> bool:
    """Decide whether ``{y : g . y >= h for (g, h) in system}`` is nonempty."""
    for var in range(nvars):
        lower, upper, rest = [], [], []
        for g, h in system:
            if g[var] > 0:
                lower.append((g, h))
            elif g[var] < 0:
                upper.append((g, h))
            else:
                rest.append((g, h))
        for gl, hl in lower:
            for gu, hu in upper:
                a, b = gl[var], -gu[var]
                g = [b * x + a * y for x, y in zip(gl, gu)]
                rest.append((g, b * hl + a * hu))
        system = rest
    return all(h <= 0 for _, h in system)


# ---------------------------------------------------------------------------
# The slice complex D


@dataclass
class CellComplexD:
    td: ToricData
    alpha: Exponent
    cells: List[Cell]
    index: Dict[Code, int] = field(repr=False)

    def labels(self) -> List[Exponent]:
        return [c.ceiling() for c in self.cells]

    def label(self, i: int) -> Exponent:
        return self.cells[i].ceiling()

    def cells_of_dim(self, k: int) -> List[int]:
        return [i for i, c in enumerate(self.cells) if c.dim == k]

    @property
    def dim(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    def f_vector(self) -> Tuple[int, ...]:
        return tuple(len(self.cells_of_dim(k)) for k in range(self.dim + 1))

    def vertex_labels(self) -> List[Exponent]:
        return sorted(self.cells[i].ceiling() for i in self.cells_of_dim(0))

    def point(self, m: Sequence) -> tuple:
        return self.td.values(m, self.alpha)

    def incidence(self, i: int, j: int) -> int:
        return arrangement(self.td).incidence(self.cells[i], self.cells[j])

    def boundary(self, k: int) -> Dict[Tuple[int, int], int]:
        """Signed incidences ``(face, cell) -> sign`` from dimension ``k`` to ``k - 1``."""
        out = {}
        for i in self.cells_of_dim(k):
            for j in self.cells[i].faces:
                out[(j, i)] = self.incidence(i, j)
        return out

    def to_dict(self) -> dict:
        return {
            "kind": "D",
            "fan": self.td.fan.to_dict(),
            "deg_matrix": [list(r) for r in self.td.deg_matrix],
            "alpha": list(self.alpha),
            "cells": [
                {
                    "id": i,
                    "dim": c.dim,
                    "pattern": list(c.pattern),
                    "barycenter": [str(x) for x in c.barycenter],
                    "label": list(c.ceiling()),
                    "faces": [
                        {"id": j, "sign": self.incidence(i, j)} for j in c.faces
                    ],
                }
                for i, c in enumerate(self.cells)
            ],
        }


    @classmethod
    def from_dict(cls, data: dict) -> "CellComplexD":
        """Rebuild from the fan, degree matrix and ``alpha``, then check the stored cells."""
        if data.get("kind") != "D":
            raise ValueError("not a serialized D complex")
        td = ToricData.from_dict(data)
        D = build_D(td, data["alpha"])
        if D.to_dict() != data:
            raise ValueError("stored cells do not match the rebuilt complex")
        return D


def d_vertices(td: ToricData, alpha: Sequence[int]) -> List[Point]:
    """All vertices of ``D`` in ``M`` coordinates, sorted."""
    alpha = tuple(alpha)
    n, r = td.n, td.r
    rays = [list(u) for u in td.rays]
    # coordinate bounds over the section polytope {m : alpha + A m >= 0}
    corner = []
    for subset in itertools.combinations(range(r), n):
        A = [rays[i] for i in subset]
        if la.det(A) == 0:
            continue
        m = la.solve_rational(A, [-alpha[i] for i in subset])
        vals = td.values(m, alpha)
        if all(v >= 0 for v in vals):
            corner.append(vals)
    if not corner:
        return []
    top = [math.floor(max(v[i] for v in corner)) for i in range(r)]
    found = set()
    for subset in itertools.combinations(range(r), n):
        A = [rays[i] for i in subset]
        if la.det(A) == 0:
            continue
        Ainv = la.inverse_rational(A)
        for ks in itertools.product(*(range(top[i] + 1) for i in subset)):
            rhs = [k - alpha[i] for k, i in zip(ks, subset)]
            m = tuple(la.matvec(Ainv, rhs))
            if all(v >= 0 for v in td.values(m, alpha)):
                found.add(m)
    return sorted(found)


def d_vertex_labels(td: ToricData, alpha: Sequence[int]) -> List[Exponent]:
    out = set()
    for m in d_vertices(td, alpha):
        out.add(tuple(math.ceil(v) for v in td.values(m, alpha)))
    return sorted(out)


def build_D(td: ToricData, alpha: Sequence[int]) -> CellComplexD:
    """Cells of ``alpha + M_R`` inside the quadrant, with faces linked."""
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise ValueError("alpha must be nonnegative")
    arr = arrangement(td)
    dims: Dict[Code, int] = {}
    for v in d_vertices(td, alpha):
        for pattern, dim in arr.local_patterns(v, alpha, quadrant=True):
            dims[pattern] = dim
    order = sorted(dims, key=lambda p: (dims[p], p))
    cells = [arr.make_cell(p, dims[p], alpha) for p in order]
    index = {c.pattern: i for i, c in enumerate(cells)}
    for c in cells:
        if c.dim == 0:
            continue
        faces = set()
        for v in c.vertices:
            for p, k in arr.local_patterns(v, alpha, quadrant=True):
                if k == c.dim - 1 and compatible(p, c.pattern):
                    faces.add(index[p])
        c.faces = sorted(faces)
    return CellComplexD(td=td, alpha=alpha, cells=cells, index=index)


def ceiling_label(D: CellComplexD, i: int) -> Exponent:
    return D.cells[i].ceiling()


def interior_label(D: CellComplexD, m: Sequence[Fraction]) -> Exponent:
    """Ceiling label computed from an arbitrary point of the slice."""
    return tuple(math.ceil(v) for v in D.point(m))


# ---------------------------------------------------------------------------
# The torus complex E


@dataclass(frozen=True)
class BoundaryRecord:
    face: int
    translation: Tuple[int, ...]
    sign: int


@dataclass
class TorusComplexE:
    td: ToricData
    cells: List[Cell]
    index: Dict[Code, int] = field(repr=False)
    boundary: List[List[BoundaryRecord]] = field(default_factory=list)

    def cells_of_dim(self, k: int) -> List[int]:
        return [i for i, c in enumerate(self.cells) if c.dim == k]

    def f_vector(self) -> Tuple[int, ...]:
        return tuple(len(self.cells_of_dim(k)) for k in range(self.td.n + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * f for k, f in enumerate(self.f_vector()))

    def canonical(self, pattern: Code) -> Tuple[int, Tuple[int, ...]]:
        """Orbit id and translation ``t`` with ``pattern == rep + t``."""
        arr = arrangement(self.td)
        verts = arr.closure_vertices(pattern)
        bary = [sum(v[c] for v in verts) / len(verts) for c in range(self.td.n)]
        t = tuple(math.floor(x) for x in bary)
        rep = shift_pattern(self.td, pattern, [-x for x in t])
        return self.index[rep], t

    def cover_cell(self, i: int, t: Sequence[int]) -> Cell:
        """The lift ``cells[i] + t`` in ``M_R``."""
        c = self.cells[i]
        return Cell(
            pattern=shift_pattern(self.td, c.pattern, t),
            dim=c.dim,
            barycenter=tuple(b + x for b, x in zip(c.barycenter, t)),
            vertices=[tuple(v + x for v, x in zip(p, t)) for p in c.vertices],
            faces=list(c.faces),
        )

    def gamma(self, i: int, t: Optional[Sequence[int]] = None) -> tuple:
        """Barycenter of ``cells[i] + t`` in ``R^r``."""
        m = self.cells[i].barycenter
        if t is not None:
            m = tuple(b + x for b, x in zip(m, t))
        return self.td.values(m)

    def to_dict(self) -> dict:
        return {
            "kind": "E",
            "fan": self.td.fan.to_dict(),
            "deg_matrix": [list(r) for r in self.td.deg_matrix],
            "cells": [
                {
                    "id": i,
                    "dim": c.dim,
                    "pattern": list(c.pattern),
                    "barycenter": [str(x) for x in c.barycenter],
                    "label": [list(x) for x in torus_label(c)],
                    "boundary": [
                        {"face": b.face, "translation": list(b.translation), "sign": b.sign}
                        for b in self.boundary[i]
                    ],
                }
                for i, c in enumerate(self.cells)
            ],
        }


    @classmethod
    def from_dict(cls, data: dict) -> "TorusComplexE":
        if data.get("kind") != "E":
            raise ValueError("not a serialized E complex")
        E = build_E(ToricData.from_dict(data))
        if E.to_dict() != data:
            raise ValueError("stored cells do not match the rebuilt complex")
        return E


def torus_vertices(td: ToricData) -> List[Point]:
    """Arrangement vertices with ``M`` coordinates in ``[0, 1)``."""
    n, r = td.n, td.r
    rays = [list(u) for u in td.rays]
    found = set()
    for subset in itertools.combinations(range(r), n):
        A = [rays[i] for i in subset]
        if la.det(A) == 0:
            continue
        Ainv = la.inverse_rational(A)
        ranges = []
        for i in subset:
            lo = sum(min(0, x) for x in rays[i])
            hi = sum(max(0, x) for x in rays[i])
            ranges.append(range(lo, hi + 1))
        for ks in itertools.product(*ranges):
            m = tuple(la.matvec(Ainv, list(ks)))
            if all(0 <= x < 1 for x in m):
                found.add(m)
    return sorted(found)


def build_E(td: ToricData) -> TorusComplexE:
    arr = arrangement(td)
    dims: Dict[Code, int] = {}
    for v in torus_vertices(td):
        for pattern, dim in arr.local_patterns(v):
            cell = arr.make_cell(pattern, dim)
            t = [math.floor(x) for x in cell.barycenter]
            dims[shift_pattern(td, pattern, [-x for x in t])] = dim
    order = sorted(dims, key=lambda p: (dims[p], p))
    cells = [arr.make_cell(p, dims[p]) for p in order]
    E = TorusComplexE(td=td, cells=cells, index={c.pattern: i for i, c in enumerate(cells)})
    for c in cells:
        records = []
        seen = set()
        for v in c.vertices:
            for p, k in arr.local_patterns(v):
                if k != c.dim - 1 or p in seen or not compatible(p, c.pattern):
                    continue
                seen.add(p)
                j, t = E.canonical(p)
                face = E.cover_cell(j, t)
                records.append(BoundaryRecord(j, t, arr.incidence(c, face)))
        records.sort(key=lambda b: (b.face, b.translation))
        c.faces = sorted({b.face for b in records})
        E.boundary.append(records)
    return E


def torus_label(c: Cell) -> Tuple[Exponent, Exponent]:
    """``(ceil(gamma), ceil(-gamma))`` for the barycenter ``gamma`` in ``R^r``."""
    return c.ceiling(), tuple(-x for x in c.floor())


def project_to_E(D: CellComplexD, E: TorusComplexE, i: int) -> Tuple[int, Tuple[int, ...]]:
    """Torus cell and translation in ``M`` of the image of ``D.cells[i]``."""
    pattern = tuple(c - 2 * a for c, a in zip(D.cells[i].pattern, D.alpha))
    return E.canonical(pattern)


def sample_interior_points(cell: Cell) -> List[Point]:
    """The barycenter and midpoints towards each closure vertex; all interior."""
    pts = [cell.barycenter]
    for v in cell.vertices:
        pts.append(tuple((b + x) / 2 for b, x in zip(cell.barycenter, v)))
    return pts


def iter_boundary_pairs(E: TorusComplexE) -> Iterable[Tuple[int, BoundaryRecord]]:
    for i, recs in enumerate(E.boundary):
        for rec in recs:
            yield i, rec
