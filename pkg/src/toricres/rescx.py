"""Multigraded free complexes built from the labeled cell complexes.

* ``build_F``: the cellular complex of ``D`` (a resolution of ``trunc_d(S)``).
* ``build_G``: the cellular complex of the torus ``E`` over ``R = S (x) S``.
* ``fm_transform_S``: the single-row complex computing the transform of
  ``S(d)`` through ``G``, with section bases indexed by monomials.

Entries of a differential are polynomials stored as ``{exponent: coeff}``.
``differentials[k]`` maps term ``k`` to term ``k - 1`` and is keyed by
``(row, col)`` with rows indexing term ``k - 1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import exactla as la
from .cellcx import CellComplexD, TorusComplexE, arrangement, project_to_E
from .errors import MismatchWitness, NotFineGraded, NotNef
from .toric import Exponent, ToricData

Poly = Dict[Tuple[int, ...], int]


def poly_add(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + c
        if not out[e]:
            del out[e]
    return out


def poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
            if not out[e]:
                del out[e]
    return out


def monomial_str(e: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for x, k in zip(names, e):
        if k == 1:
            parts.append(x)
        elif k:
            parts.append(f"{x}^{k}" if k > 0 else f"{x}^({k})")
    return "".join(parts) or "1"


def poly_str(p: Poly, names: Sequence[str], split: Optional[int] = None) -> str:
    if not p:
        return "0"
    terms = []
    for e, c in sorted(p.items(), reverse=True):
        if split is None:
            mono = monomial_str(e, names)
        else:
            mono = monomial_str(e[:split], names) + "⊗" + monomial_str(e[split:], names)
        if mono == "1" or split is not None:
            body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        else:
            body = mono if abs(c) == 1 else f"{abs(c)}{mono}"
        terms.append(("-" if c < 0 else "+", body))
    s = "".join(f" {sg} {b}" for sg, b in terms).strip()
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


@dataclass
class Summand:
    twist: Tuple[int, ...]
    tag: tuple
    fine: Optional[Exponent] = None


@dataclass
class FreeComplex:
    nvars: int
    terms: Dict[int, List[Summand]]
    differentials: Dict[int, Dict[Tuple[int, int], Poly]]
    split: Optional[int] = None  # number of variables of the first tensor factor

    @property
    def length(self) -> int:
        nonzero = [k for k, v in self.terms.items() if v]
        return max(nonzero) - min(nonzero) if nonzero else 0

    def ranks(self) -> Dict[int, int]:
        return {k: len(v) for k, v in sorted(self.terms.items())}

    def twists(self, k: int) -> List[Tuple[int, ...]]:
        return [s.twist for s in self.terms.get(k, [])]

    def matrix(self, k: int) -> List[List[Poly]]:
        rows = len(self.terms.get(k - 1, []))
        cols = len(self.terms.get(k, []))
        M = [[{} for _ in range(cols)] for _ in range(rows)]
        for (i, j), p in self.differentials.get(k, {}).items():
            M[i][j] = p
        return M

    def dd_witness(self) -> Optional[Tuple[int, int, int, Poly]]:
        """First ``(k, row, col, value)`` with nonzero ``d_{k-1} d_k``, else None."""
        for k in sorted(self.differentials):
            if k - 1 not in self.differentials:
                continue
            lower = self.differentials[k - 1]
            by_row: Dict[int, List[Tuple[int, Poly]]] = {}
            for (i, t), p in lower.items():
                by_row.setdefault(t, []).append((i, p))
            acc: Dict[Tuple[int, int], Poly] = {}
            for (t, j), p in self.differentials[k].items():
                for i, q in by_row.get(t, []):
                    acc[(i, j)] = poly_add(acc.get((i, j), {}), poly_mul(q, p))
            for key in sorted(acc):
                if acc[key]:
                    return (k, key[0], key[1], acc[key])
        return None

    def is_complex(self) -> bool:
        return self.dd_witness() is None

    def degree_of(self, e: Sequence[int], td: ToricData) -> Tuple[int, ...]:
        if self.split is None:
            return td.degree(e)
        return td.degree(e[: self.split]) + td.degree(e[self.split:])

    def check_degrees(self, td: ToricData) -> bool:
        """Every entry is homogeneous of degree ``twist(target) - twist(source)``."""
        for k, entries in self.differentials.items():
            src, tgt = self.terms[k], self.terms[k - 1]
            for (i, j), p in entries.items():
                want = tuple(a - b for a, b in zip(tgt[i].twist, src[j].twist))
                if any(self.degree_of(e, td) != want for e in p):
                    return False
        return True

    def with_sign_flipped(self, k: int, key: Tuple[int, int]) -> "FreeComplex":
        diffs = {i: dict(v) for i, v in self.differentials.items()}
        diffs[k][key] = {e: -c for e, c in diffs[k][key].items()}
        return FreeComplex(self.nvars, self.terms, diffs, self.split)

    def to_dict(self) -> dict:
        return {
            "nvars": self.nvars,
            "split": self.split,
            "terms": {
                str(k): [
                    {
                        "twist": list(s.twist),
                        "tag": _jsonable(s.tag),
                        "fine": list(s.fine) if s.fine is not None else None,
                    }
                    for s in v
                ]
                for k, v in sorted(self.terms.items())
            },
            "differentials": {
                str(k): [
                    {"row": i, "col": j, "sign": c, "exponent": list(e)}
                    for (i, j), p in sorted(v.items())
                    for e, c in sorted(p.items())
                ]
                for k, v in sorted(self.differentials.items())
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FreeComplex":
        terms = {
            int(k): [
                Summand(
                    tuple(s["twist"]),
                    _untuple(s["tag"]),
                    tuple(s["fine"]) if s.get("fine") is not None else None,
                )
                for s in v
            ]
            for k, v in data["terms"].items()
        }
        diffs: Dict[int, Dict[Tuple[int, int], Poly]] = {}
        for k, entries in data["differentials"].items():
            d: Dict[Tuple[int, int], Poly] = {}
            for ent in entries:
                key = (ent["row"], ent["col"])
                d[key] = poly_add(d.get(key, {}), {tuple(ent["exponent"]): ent["sign"]})
            diffs[int(k)] = d
        return cls(data["nvars"], terms, diffs, data.get("split"))

    def pretty(self, k: int, names: Optional[Sequence[str]] = None) -> str:
        """Matrix of ``d_k`` with targets as rows, as plain text."""
        r = self.split or self.nvars
        names = list(names) if names else [f"x{i}" for i in range(r)]
        M = self.matrix(k)
        cells = [[poly_str(p, names, self.split) for p in row] for row in M]
        if not cells:
            return ""
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def _jsonable(tag):
    if isinstance(tag, tuple):
        return [_jsonable(t) for t in tag]
    return tag


def _untuple(tag):
    if isinstance(tag, list):
        return tuple(_untuple(t) for t in tag)
    return tag


def _sub(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def build_F(D: CellComplexD) -> FreeComplex:
    td = D.td
    terms: Dict[int, List[Summand]] = {}
    position: Dict[int, int] = {}
    for k in range(D.dim + 1):
        ids = D.cells_of_dim(k)
        terms[k] = []
        for pos, i in enumerate(ids):
            lab = D.label(i)
            terms[k].append(Summand(tuple(-x for x in td.degree(lab)), ("cell", i), lab))
            position[i] = pos
    if not terms:
        terms[0] = []
    diffs: Dict[int, Dict[Tuple[int, int], Poly]] = {}
    for k in range(1, D.dim + 1):
        d = {}
        for i in D.cells_of_dim(k):
            for j in D.cells[i].faces:
                d[(position[j], position[i])] = {_sub(D.label(i), D.label(j)): D.incidence(i, j)}
        diffs[k] = d
    return FreeComplex(td.r, terms, diffs)


def _ceil_floor(pattern) -> Tuple[Exponent, Exponent]:
    return tuple((c + 1) // 2 for c in pattern), tuple(c // 2 for c in pattern)


def _torus_records(E: TorusComplexE):
    """Yield ``(cell, face, ceil gamma - ceil delta, floor delta - floor gamma, sign)``."""
    for i, c in enumerate(E.cells):
        cg, fg = _ceil_floor(c.pattern)
        for rec in E.boundary[i]:
            face = E.cover_cell(rec.face, rec.translation)
            cd, fd = _ceil_floor(face.pattern)
            yield i, rec.face, _sub(cg, cd), _sub(fd, fg), rec.sign


def build_G(E: TorusComplexE) -> FreeComplex:
    td = E.td
    terms: Dict[int, List[Summand]] = {k: [] for k in range(td.n + 1)}
    position: Dict[int, int] = {}
    for k in range(td.n + 1):
        for pos, i in enumerate(E.cells_of_dim(k)):
            cg, fg = _ceil_floor(E.cells[i].pattern)
            twist = tuple(-x for x in td.degree(cg)) + td.degree(fg)
            terms[k].append(Summand(twist, ("cell", i)))
            position[i] = pos
    diffs: Dict[int, Dict[Tuple[int, int], Poly]] = {k: {} for k in range(1, td.n + 1)}
    for i, j, first, second, sign in _torus_records(E):
        k = E.cells[i].dim
        key = (position[j], position[i])
        diffs[k][key] = poly_add(diffs[k].get(key, {}), {first + second: sign})
    for k in diffs:
        diffs[k] = {key: p for key, p in diffs[k].items() if p}
    return FreeComplex(2 * td.r, terms, diffs, split=td.r)


def fm_transform_S(E: TorusComplexE, d: Sequence[int]) -> FreeComplex:
    """The complex of free ``S``-modules from the transform of ``S(d)``.

    The torus cell with barycenter ``gamma`` contributes
    ``S(deg x^floor(-gamma)) (x) S_{d + deg x^floor(gamma)}``, one free summand
    per monomial of the second factor.
    """
    return fm_transform(E, d)


def fm_transform(E: TorusComplexE, d: Sequence[int], ideal=None) -> FreeComplex:
    """Transform of ``S(d)``, or of ``(S/I)(d)`` when a monomial ``ideal`` is given.

    For the quotient, monomials of ``I`` are dropped from the second factor;
    they span a subcomplex because every entry multiplies by a monomial.
    """
    td = E.td
    d = tuple(d)
    if not td.is_nef(d):
        raise NotNef(f"{d} is not nef")

    def basis(shift):
        return [xi for xi in td.sections(shift) if ideal is None or not ideal.contains(xi)]

    terms: Dict[int, List[Summand]] = {k: [] for k in range(td.n + 1)}
    position: Dict[Tuple[int, Exponent], int] = {}
    for k in range(td.n + 1):
        for i in E.cells_of_dim(k):
            cg, fg = _ceil_floor(E.cells[i].pattern)
            twist = tuple(-x for x in td.degree(cg))
            shift = tuple(a + b for a, b in zip(d, td.degree(fg)))
            for xi in basis(shift):
                position[(i, xi)] = len(terms[k])
                fine = tuple(a + b - c for a, b, c in zip(xi, cg, fg))
                terms[k].append(Summand(twist, ("cell", i, xi), fine))
    diffs: Dict[int, Dict[Tuple[int, int], Poly]] = {k: {} for k in range(1, td.n + 1)}
    for i, j, first, second, sign in _torus_records(E):
        k = E.cells[i].dim
        _, fg = _ceil_floor(E.cells[i].pattern)
        for xi in basis(tuple(a + b for a, b in zip(d, td.degree(fg)))):
            target = tuple(a + b for a, b in zip(xi, second))
            if (j, target) not in position:
                continue
            key = (position[(j, target)], position[(i, xi)])
            p = poly_add(diffs[k].get(key, {}), {first: sign})
            if p:
                diffs[k][key] = p
            else:
                diffs[k].pop(key, None)
    return FreeComplex(td.r, terms, diffs)


# ---------------------------------------------------------------------------
# strands and exactness


@dataclass
class Strand:
    beta: Exponent
    bases: Dict[int, List[int]]
    matrices: Dict[int, List[List[int]]]


def _require_fine(K: FreeComplex) -> None:
    for k, entries in K.differentials.items():
        for (i, j), p in entries.items():
            src, tgt = K.terms[k][j], K.terms[k - 1][i]
            if src.fine is None or tgt.fine is None or len(p) != 1:
                raise NotFineGraded(f"entry ({i}, {j}) of d_{k} is not a fine-graded monomial")
            (e,) = p
            if _sub(src.fine, tgt.fine) != e:
                raise NotFineGraded(f"entry ({i}, {j}) of d_{k} has the wrong fine degree")


def strand(K: FreeComplex, beta: Sequence[int]) -> Strand:
    """The vector-space complex spanned by generators whose fine degree divides ``x^beta``."""
    _require_fine(K)
    beta = tuple(beta)
    bases = {
        k: [i for i, s in enumerate(v) if all(a <= b for a, b in zip(s.fine, beta))]
        for k, v in K.terms.items()
    }
    matrices = {}
    for k, entries in K.differentials.items():
        rows = {i: t for t, i in enumerate(bases.get(k - 1, []))}
        cols = {j: t for t, j in enumerate(bases.get(k, []))}
        M = la.zeros(len(rows), len(cols))
        for (i, j), p in entries.items():
            if j in cols:
                (c,) = p.values()
                M[rows[i]][cols[j]] = c
        matrices[k] = M
    return Strand(beta, bases, matrices)


def strand_homology(st: Strand) -> Dict[int, int]:
    ranks = {}
    for k, M in st.matrices.items():
        ranks[k] = la.rational_rank(M) if M and M[0] else 0
    out = {}
    for k, basis in sorted(st.bases.items()):
        out[k] = len(basis) - ranks.get(k, 0) - ranks.get(k + 1, 0)
    return out


def generator_class(K: FreeComplex, k: int, index: int) -> bool:
    """Whether the generator ``index`` of ``K_k`` is a cycle that is not a boundary.

    The test runs in the strand at the generator's own fine degree.
    """
    st = strand(K, K.terms[k][index].fine)
    pos = st.bases[k].index(index)
    M = st.matrices.get(k)
    if M and any(row[pos] for row in M):
        return False
    N = st.matrices.get(k + 1)
    if not N or not N[0]:
        return True
    unit = [row + [1 if t == pos else 0] for t, row in enumerate(N)]
    return la.rational_rank(unit) > la.rational_rank(N)


def label_box(K: FreeComplex) -> Exponent:
    fines = [s.fine for v in K.terms.values() for s in v]
    if not fines:
        return ()
    return tuple(max(f[i] for f in fines) for i in range(len(fines[0])))


def box_points(top: Sequence[int]) -> Iterable[Exponent]:
    return itertools.product(*(range(t + 1) for t in top))


@dataclass
class ResolutionReport:
    ok: bool
    dd_zero: bool
    box: Exponent
    points_checked: int
    length: int
    failure: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "dd_zero": self.dd_zero,
            "box": list(self.box),
            "points_checked": self.points_checked,
            "length": self.length,
            "failure": self.failure,
        }


def verify_resolution(F: FreeComplex, generators: Optional[Sequence[Exponent]] = None) -> ResolutionReport:
    """Check that ``F`` resolves the monomial ideal generated by its degree-0 labels.

    For every ``beta`` in the box up to the componentwise maximum label, the
    strand at ``beta`` must have no positive homology and one-dimensional
    ``H_0`` exactly when some generator divides ``x^beta``.
    """
    wit = F.dd_witness()
    if wit is not None:
        k, i, j, val = wit
        return ResolutionReport(False, False, (), 0, F.length,
                                {"reason": "dd != 0", "index": k, "row": i, "col": j,
                                 "value": [[list(e), c] for e, c in val.items()]})
    if generators is None:
        generators = [s.fine for s in F.terms.get(0, [])]
    top = label_box(F)
    count = 0
    for beta in box_points(top):
        count += 1
        h = strand_homology(strand(F, beta))
        expect0 = int(any(all(g <= b for g, b in zip(gen, beta)) for gen in generators))
        bad = {k: v for k, v in h.items() if k > 0 and v}
        if bad or h.get(0, 0) != expect0:
            return ResolutionReport(False, True, top, count, F.length,
                                    {"reason": "strand homology", "beta": list(beta),
                                     "homology": {str(k): v for k, v in h.items()},
                                     "expected_h0": expect0})
    return ResolutionReport(True, True, top, count, F.length)


# ---------------------------------------------------------------------------
# F(d) versus the transform of S(d)


@dataclass
class Certificate:
    bijection: Dict[int, List[Tuple[int, Tuple[int, Exponent]]]]
    twists_checked: int
    entries_checked: int

    def counts(self) -> Dict[int, int]:
        return {k: len(v) for k, v in self.bijection.items()}

    def to_dict(self) -> dict:
        return {
            "bijection": {
                str(k): [
                    {"cell": c, "torus_cell": e, "monomial": list(xi)} for c, (e, xi) in v
                ]
                for k, v in sorted(self.bijection.items())
            },
            "twists_checked": self.twists_checked,
            "entries_checked": self.entries_checked,
        }


def match_theorem(
    D: CellComplexD,
    E: TorusComplexE,
    d: Sequence[int],
    F: Optional[FreeComplex] = None,
    Phi: Optional[FreeComplex] = None,
) -> Certificate:
    """Exhibit ``F(d) ~= Phi(S(d))`` summand by summand and entry by entry.

    A cell of ``D`` whose barycenter is ``alpha + gamma + delta`` with ``gamma``
    the torus representative and ``delta`` in ``M`` goes to the basis monomial
    ``alpha + floor(gamma + delta)`` of the torus cell of ``gamma``.
    """
    td = D.td
    d = tuple(d)
    F = F if F is not None else build_F(D)
    Phi = Phi if Phi is not None else fm_transform_S(E, d)
    phi_pos = {
        k: {s.tag[1:]: pos for pos, s in enumerate(v)} for k, v in Phi.terms.items()
    }
    mapping: Dict[int, Dict[int, int]] = {}
    bijection: Dict[int, List[Tuple[int, Tuple[int, Exponent]]]] = {}
    twists = 0
    for k, summands in F.terms.items():
        mapping[k] = {}
        bijection[k] = []
        for pos, s in enumerate(summands):
            i = s.tag[1]
            cell = D.cells[i]
            e, t = project_to_E(D, E, i)
            xi = tuple(c // 2 for c in cell.pattern)
            target = phi_pos.get(k, {}).get((e, xi))
            if target is None:
                raise MismatchWitness(f"cell {i} has no partner ({e}, {xi}) in Phi", (k, i, e, xi))
            if target in mapping[k].values():
                raise MismatchWitness(f"partner of cell {i} is used twice", (k, i))
            cg, fg = _ceil_floor(E.cells[e].pattern)
            lhs = tuple(a - b for a, b in zip(d, td.degree(D.label(i))))
            rhs = tuple(-x for x in td.degree(cg))
            if lhs != rhs or tuple(x + y for x, y in zip(s.twist, d)) != Phi.terms[k][target].twist:
                raise MismatchWitness(f"twist mismatch at cell {i}: {lhs} vs {rhs}", (k, i))
            twists += 1
            mapping[k][pos] = target
            bijection[k].append((i, (e, xi)))
        if len(mapping[k]) != len(Phi.terms.get(k, [])):
            raise MismatchWitness(
                f"index {k}: {len(mapping[k])} cells vs {len(Phi.terms.get(k, []))} summands", (k,)
            )
    entries = 0
    for k in set(F.differentials) | set(Phi.differentials):
        moved = {
            (mapping[k - 1][i], mapping[k][j]): p for (i, j), p in F.differentials.get(k, {}).items()
        }
        target = {key: p for key, p in Phi.differentials.get(k, {}).items() if p}
        if moved != target:
            keys = sorted(set(moved) ^ set(target) | {q for q in moved if q in target and moved[q] != target[q]})
            raise MismatchWitness(f"d_{k} differs at {keys[:3]}", (k, keys[:3]))
        entries += len(target)
    return Certificate(bijection, twists, entries)
