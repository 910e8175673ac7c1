"""Ceiling truncation of ``S`` and of free complexes, and their homology."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import exactla as la
from .cellcx import d_vertex_labels
from .errors import HypothesisViolated, NotNef
from .rescx import FreeComplex, Poly, Summand, fm_transform, generator_class, poly_add, strand, strand_homology
from .toric import Exponent, ToricData


def divides(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Sequence[int], b: Sequence[int]) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal stored by its minimal generators (sorted)."""

    nvars: int
    generators: Tuple[Exponent, ...]

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], nvars: Optional[int] = None) -> "MonomialIdeal":
        gens = sorted({tuple(int(x) for x in g) for g in gens})
        if nvars is None:
            if not gens:
                raise ValueError("nvars is required for the zero ideal")
            nvars = len(gens[0])
        if any(x < 0 for g in gens for x in g):
            raise ValueError("generators must be nonnegative")
        minimal = [g for g in gens if not any(h != g and divides(h, g) for h in gens)]
        return cls(nvars, tuple(minimal))

    @classmethod
    def unit(cls, nvars: int) -> "MonomialIdeal":
        return cls(nvars, ((0,) * nvars,))

    def is_unit(self) -> bool:
        return self.generators == ((0,) * self.nvars,)

    def contains(self, e: Sequence[int]) -> bool:
        return any(divides(g, e) for g in self.generators)

    def __contains__(self, e) -> bool:
        return self.contains(e)

    def colon_power(self, f: Sequence[int]) -> "MonomialIdeal":
        """``I : (x^f)^infinity``: zero out the variables in the support of ``f``."""
        return MonomialIdeal.from_generators(
            (tuple(0 if fi else gi for gi, fi in zip(g, f)) for g in self.generators), self.nvars
        )

    def colon(self, f: Sequence[int]) -> "MonomialIdeal":
        return MonomialIdeal.from_generators(
            (tuple(max(gi - fi, 0) for gi, fi in zip(g, f)) for g in self.generators), self.nvars
        )

    def intersect(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return MonomialIdeal.from_generators(
            (lcm(g, h) for g in self.generators for h in other.generators), self.nvars
        )

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return MonomialIdeal.from_generators(self.generators + other.generators, self.nvars)

    def shift(self, m: Sequence[int]) -> "MonomialIdeal":
        """``x^m * I``."""
        return MonomialIdeal.from_generators(
            (tuple(a + b for a, b in zip(g, m)) for g in self.generators), self.nvars
        )

    def to_dict(self) -> dict:
        return {"nvars": self.nvars, "generators": [list(g) for g in self.generators]}


def trunc_ideal(td: ToricData, d: Sequence[int], alpha: Optional[Sequence[int]] = None) -> MonomialIdeal:
    """The ceiling truncation: generated by the vertex labels of ``D``."""
    d = tuple(d)
    if not td.is_nef(d):
        raise NotNef(f"{d} is not nef")
    if alpha is None:
        alpha = td.choose_alpha(d)
    elif td.degree(alpha) != d:
        raise ValueError(f"alpha {tuple(alpha)} does not have degree {d}")
    return MonomialIdeal.from_generators(d_vertex_labels(td, alpha), td.r)


def saturate(I: MonomialIdeal, irrelevant: Sequence[Sequence[int]]) -> MonomialIdeal:
    """``I : B^infinity`` for ``B`` generated by the monomials ``irrelevant``."""
    out: Optional[MonomialIdeal] = None
    for f in irrelevant:
        J = I.colon_power(f)
        out = J if out is None else out.intersect(J)
    return out if out is not None else I


def taylor_complex(I: MonomialIdeal, td: ToricData) -> FreeComplex:
    """Taylor resolution of ``S/I``: one summand per subset of generators."""
    gens = list(I.generators)
    r = td.r
    terms: Dict[int, List[Summand]] = {}
    position: Dict[Tuple[int, ...], int] = {}
    for k in range(len(gens) + 1):
        terms[k] = []
        for J in itertools.combinations(range(len(gens)), k):
            m = (0,) * r
            for j in J:
                m = lcm(m, gens[j])
            position[J] = len(terms[k])
            terms[k].append(Summand(tuple(-x for x in td.degree(m)), ("subset", J), m))
    diffs: Dict[int, Dict[Tuple[int, int], Poly]] = {}
    for k in range(1, len(gens) + 1):
        d = {}
        for J in itertools.combinations(range(len(gens)), k):
            mJ = terms[k][position[J]].fine
            for t in range(k):
                sub = J[:t] + J[t + 1:]
                mS = terms[k - 1][position[sub]].fine
                d[(position[sub], position[J])] = {tuple(a - b for a, b in zip(mJ, mS)): (-1) ** t}
        diffs[k] = d
    return FreeComplex(r, terms, diffs)


# ---------------------------------------------------------------------------
# presentations and truncated complexes


@dataclass
class ModulePresentation:
    """``K <- L``: target twists, source twists and the matrix between them."""

    target_twists: List[Tuple[int, ...]]
    source_twists: List[Tuple[int, ...]]
    entries: Dict[Tuple[int, int], Poly]
    target_fine: Optional[List[Exponent]] = None
    source_fine: Optional[List[Exponent]] = None

    def as_complex(self, td: ToricData) -> FreeComplex:
        terms = {
            0: [Summand(tuple(t), ("target", i)) for i, t in enumerate(self.target_twists)],
            1: [Summand(tuple(t), ("source", j)) for j, t in enumerate(self.source_twists)],
        }
        if self.target_fine is not None:
            for s, f in zip(terms[0], self.target_fine):
                s.fine = tuple(f)
        if self.source_fine is not None:
            for s, f in zip(terms[1], self.source_fine):
                s.fine = tuple(f)
        K = FreeComplex(td.r, terms, {1: dict(self.entries)})
        assign_fine_degrees(K, td)
        return K

    @classmethod
    def from_dict(cls, data: dict) -> "ModulePresentation":
        entries: Dict[Tuple[int, int], Poly] = {}
        for ent in data["entries"]:
            key = (int(ent["row"]), int(ent["col"]))
            for term in ent["terms"]:
                entries[key] = poly_add(entries.get(key, {}), {tuple(term["exponent"]): int(term["sign"])})
        return cls(
            [tuple(t) for t in data["target_twists"]],
            [tuple(t) for t in data["source_twists"]],
            entries,
            [tuple(f) for f in data["target_fine"]] if data.get("target_fine") else None,
            [tuple(f) for f in data["source_fine"]] if data.get("source_fine") else None,
        )

    def to_dict(self) -> dict:
        out = {
            "target_twists": [list(t) for t in self.target_twists],
            "source_twists": [list(t) for t in self.source_twists],
            "entries": [
                {
                    "row": i,
                    "col": j,
                    "terms": [{"sign": c, "exponent": list(e)} for e, c in sorted(p.items())],
                }
                for (i, j), p in sorted(self.entries.items())
            ],
        }
        if self.target_fine is not None:
            out["target_fine"] = [list(f) for f in self.target_fine]
        if self.source_fine is not None:
            out["source_fine"] = [list(f) for f in self.source_fine]
        return out


def assign_fine_degrees(K: FreeComplex, td: ToricData) -> None:
    """Fill in missing fine degrees by propagating along monomial entries."""
    missing = [(k, i) for k, v in K.terms.items() for i, s in enumerate(v) if s.fine is None]
    if not missing:
        return
    edges: Dict[Tuple[int, int], List[Tuple[Tuple[int, int], Exponent, int]]] = {}
    for k, entries in K.differentials.items():
        for (i, j), p in entries.items():
            if len(p) != 1:
                raise ValueError("fine degrees need monomial entries")
            (e,) = p
            edges.setdefault((k, j), []).append(((k - 1, i), e, -1))
            edges.setdefault((k - 1, i), []).append(((k, j), e, 1))
    for start in missing:
        k, i = start
        s = K.terms[k][i]
        if s.fine is not None:
            continue
        want = tuple(-x for x in s.twist)
        secs = td.sections(want)
        s.fine = secs[0] if secs else td.representative(want)
        stack = [start]
        while stack:
            node = stack.pop()
            g = K.terms[node[0]][node[1]].fine
            for other, e, sign in edges.get(node, []):
                o = K.terms[other[0]][other[1]]
                f = tuple(a + sign * b for a, b in zip(g, e))
                if o.fine is None:
                    o.fine = f
                    stack.append(other)
                elif o.fine != f:
                    raise ValueError("entries are not consistent with a fine grading")


@dataclass
class TruncatedComplex:
    complex: FreeComplex
    d: Tuple[int, ...]
    ideals: Dict[int, List[MonomialIdeal]]

    def to_dict(self) -> dict:
        return {
            "d": list(self.d),
            "complex": self.complex.to_dict(),
            "ideals": {
                str(k): [I.to_dict() for I in v] for k, v in sorted(self.ideals.items())
            },
        }


def truncation_twists(K: FreeComplex) -> List[Tuple[int, ...]]:
    """The degrees ``a`` of the summands ``S(-a)`` of ``K``."""
    return sorted({tuple(-x for x in s.twist) for v in K.terms.values() for s in v})


def truncate_complex(K: FreeComplex, d: Sequence[int], td: ToricData) -> TruncatedComplex:
    """Replace each ``S(-a)`` by ``trunc_{d-a}(S)(-a)``; maps are restrictions."""
    d = tuple(d)
    cache: Dict[Tuple[int, ...], MonomialIdeal] = {}
    for a in truncation_twists(K):
        da = tuple(x - y for x, y in zip(d, a))
        if not td.is_nef(da):
            raise HypothesisViolated(a, f"d - a = {da} is not nef for the twist a = {a}")
        cache[da] = trunc_ideal(td, da)
    ideals = {
        k: [cache[tuple(x + y for x, y in zip(d, s.twist))] for s in v] for k, v in K.terms.items()
    }
    T = TruncatedComplex(K, d, ideals)
    check_containment(T)
    return T


def check_containment(T: TruncatedComplex) -> None:
    """Each truncated generator must map into the truncated target."""
    for k, entries in T.complex.differentials.items():
        for (i, j), p in entries.items():
            src, tgt = T.ideals[k][j], T.ideals[k - 1][i]
            for g in src.generators:
                for e in p:
                    if not tgt.contains(tuple(a + b for a, b in zip(g, e))):
                        raise HypothesisViolated(
                            tuple(-x for x in T.complex.terms[k][j].twist),
                            f"truncated generator {g} of summand {j} leaves the target in d_{k}",
                        )


def truncate_map(
    entries: Dict[Tuple[int, int], Poly],
    source: Sequence[MonomialIdeal],
    target: Sequence[MonomialIdeal],
) -> Dict[Tuple[int, Exponent], Dict[int, Poly]]:
    """Images of the truncated generators ``x^g e_j`` as vectors over the target."""
    out: Dict[Tuple[int, Exponent], Dict[int, Poly]] = {}
    for j, I in enumerate(source):
        for g in I.generators:
            img: Dict[int, Poly] = {}
            for (i, jj), p in entries.items():
                if jj != j:
                    continue
                shifted = {tuple(a + b for a, b in zip(e, g)): c for e, c in p.items()}
                if not all(target[i].contains(e) for e in shifted):
                    raise HypothesisViolated((), f"generator {g} of summand {j} leaves target {i}")
                img[i] = poly_add(img.get(i, {}), shifted)
            out[(j, g)] = {i: p for i, p in img.items() if p}
    return out


# ---------------------------------------------------------------------------
# fine-graded homology


@dataclass
class HomologyClass:
    index: int
    beta: Exponent
    degree: Tuple[int, ...]
    vector: List[Tuple[int, int]]  # (summand, coefficient); element is c * x^(beta - fine) e_summand

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "beta": list(self.beta),
            "degree": list(self.degree),
            "vector": [[s, c] for s, c in self.vector],
        }


@dataclass
class HomologyReport:
    window: Tuple[Exponent, Exponent]
    dims: Dict[int, Dict[Exponent, int]]
    classes: List[HomologyClass] = field(default_factory=list)

    def total(self, k: int) -> int:
        return sum(self.dims.get(k, {}).values())

    def positive_nonzero(self) -> bool:
        return any(self.total(k) for k in self.dims if k > 0)

    def to_dict(self) -> dict:
        return {
            "window": [list(self.window[0]), list(self.window[1])],
            "within_window": True,
            "dims": {
                str(k): [{"beta": list(b), "dim": v} for b, v in sorted(d.items())]
                for k, d in sorted(self.dims.items())
            },
            "classes": [c.to_dict() for c in self.classes],
        }


def _space(T: TruncatedComplex, k: int, beta: Exponent) -> List[int]:
    out = []
    for i, s in enumerate(T.complex.terms.get(k, [])):
        cof = tuple(b - f for b, f in zip(beta, s.fine))
        if all(c >= 0 for c in cof) and T.ideals[k][i].contains(cof):
            out.append(i)
    return out


def _matrix(T: TruncatedComplex, k: int, rows: List[int], cols: List[int]) -> List[List[int]]:
    rpos = {i: t for t, i in enumerate(rows)}
    cpos = {j: t for t, j in enumerate(cols)}
    M = la.zeros(len(rows), len(cols))
    for (i, j), p in T.complex.differentials.get(k, {}).items():
        if i in rpos and j in cpos:
            M[rpos[i]][cpos[j]] = sum(p.values())
    return M


def _rank(M: List[List[int]]) -> int:
    return la.rational_rank(M) if M and M[0] else 0


def homology_at(T: TruncatedComplex, beta: Exponent) -> Dict[int, Tuple[int, List[List]]]:
    """Per index: homology dimension and witness kernel vectors not in the image."""
    out = {}
    indices = sorted(T.complex.terms)
    spaces = {k: _space(T, k, beta) for k in indices}
    for k in indices:
        basis = spaces[k]
        if not basis:
            continue
        down = _matrix(T, k, spaces.get(k - 1, []), basis) if k - 1 in spaces else []
        up = _matrix(T, k + 1, basis, spaces.get(k + 1, [])) if k + 1 in spaces else []
        r_down = _rank(down) if down else 0
        r_up = _rank(up) if up and up[0] else 0
        h = len(basis) - r_down - r_up
        if h <= 0:
            continue
        kernel = la.nullspace_rational(down, cols=len(basis)) if down else [
            [int(i == j) for j in range(len(basis))] for i in range(len(basis))
        ]
        image_cols = la.transpose(up, cols=0) if up and up[0] else []
        witnesses = []
        span = [list(c) for c in image_cols]
        base_rank = _rank(span) if span else 0
        for v in kernel:
            trial = span + [list(v)]
            rk = la.rational_rank(trial)
            if rk > base_rank:
                span, base_rank = trial, rk
                witnesses.append(_integral(v))
            if len(witnesses) == h:
                break
        out[k] = (h, [[(basis[t], c) for t, c in enumerate(w) if c] for w in witnesses])
    return out


def _integral(v) -> List[int]:
    from fractions import Fraction
    import math

    den = 1
    for x in v:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    w = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in w:
        g = math.gcd(g, x)
    return [x // g for x in w] if g else w


def default_window(T: TruncatedComplex, margin: int = 2) -> Tuple[Exponent, Exponent]:
    lows, highs = [], []
    for k, v in T.complex.terms.items():
        for i, s in enumerate(v):
            lows.append(s.fine)
            for g in T.ideals[k][i].generators:
                highs.append(tuple(a + b for a, b in zip(s.fine, g)))
    r = T.complex.nvars
    lo = tuple(min(x[i] for x in lows) for i in range(r))
    hi = tuple(max(x[i] for x in highs) + margin for i in range(r))
    return lo, hi


def truncated_homology(
    T: TruncatedComplex,
    window: Optional[Tuple[Sequence[int], Sequence[int]]] = None,
    td: Optional[ToricData] = None,
    indices: Optional[Sequence[int]] = None,
) -> HomologyReport:
    """Fine-graded homology of ``T`` at every ``beta`` in the window box."""
    if window is None:
        window = default_window(T)
    lo, hi = tuple(window[0]), tuple(window[1])
    dims: Dict[int, Dict[Exponent, int]] = {}
    classes: List[HomologyClass] = []
    for beta in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        for k, (h, wits) in homology_at(T, beta).items():
            if indices is not None and k not in indices:
                continue
            dims.setdefault(k, {})[beta] = h
            deg = td.degree(beta) if td is not None else ()
            for w in wits:
                classes.append(HomologyClass(k, beta, deg, w))
    return HomologyReport((lo, hi), dims, classes)


def is_boundary(T: TruncatedComplex, k: int, beta: Exponent, vector: Sequence[Tuple[int, int]]) -> bool:
    basis = _space(T, k, beta)
    pos = {i: t for t, i in enumerate(basis)}
    if any(i not in pos for i, _ in vector):
        raise ValueError("vector is not supported in degree beta")
    v = [0] * len(basis)
    for i, c in vector:
        v[pos[i]] = c
    if not any(v):
        return True
    up_space = _space(T, k + 1, beta)
    if not up_space:
        return False
    M = _matrix(T, k + 1, basis, up_space)
    cols = la.transpose(M)
    return la.rational_rank(cols + [v]) == la.rational_rank(cols)


@dataclass
class TorsionEntry:
    homology_class: HomologyClass
    powers: Dict[int, Optional[int]]  # irrelevant generator -> smallest annihilating power

    @property
    def torsion(self) -> bool:
        return all(p is not None for p in self.powers.values())

    def to_dict(self) -> dict:
        return {
            "class": self.homology_class.to_dict(),
            "powers": {str(i): p for i, p in self.powers.items()},
            "status": "B-torsion" if self.torsion else "bound exhausted",
        }


@dataclass
class TorsionReport:
    bound: int
    entries: List[TorsionEntry]

    @property
    def all_torsion(self) -> bool:
        return all(e.torsion for e in self.entries)

    @property
    def inconclusive(self) -> List[TorsionEntry]:
        return [e for e in self.entries if not e.torsion]

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "all_torsion": self.all_torsion,
            "entries": [e.to_dict() for e in self.entries],
        }


def irrelevant_homology_check(
    T: TruncatedComplex,
    report: HomologyReport,
    irrelevant: Sequence[Sequence[int]],
    bound: int = 10,
) -> TorsionReport:
    """For every positive-index class, find ``N <= bound`` with ``x_sigma^N g`` a boundary.

    A class that no power up to ``bound`` kills is reported as inconclusive
    rather than as a failure.
    """
    entries = []
    for cls in report.classes:
        if cls.index <= 0:
            continue
        powers: Dict[int, Optional[int]] = {}
        for s, f in enumerate(irrelevant):
            found = None
            for N in range(1, bound + 1):
                beta = tuple(b + N * x for b, x in zip(cls.beta, f))
                if is_boundary(T, cls.index, beta, cls.vector):
                    found = N
                    break
            powers[s] = found
        entries.append(TorsionEntry(cls, powers))
    return TorsionReport(bound, entries)


def truncated_h0_expected(
    td: ToricData, K: FreeComplex, T: TruncatedComplex, beta: Sequence[int]
) -> int:
    """``dim trunc_d(Q)_beta`` for ``Q = coker(K_0 <- K_1)`` with ``K_0`` cyclic.

    Computed from ideal membership: the image of ``trunc(K_1)`` in ``trunc(K_0)``
    is the monomial ideal generated by ``entry * generator`` for each summand.
    """
    if len(K.terms.get(0, [])) != 1:
        raise ValueError("expects a cyclic target")
    base = K.terms[0][0].fine
    cof = tuple(b - f for b, f in zip(beta, base))
    if any(c < 0 for c in cof) or not T.ideals[0][0].contains(cof):
        return 0
    image = []
    for (i, j), p in K.differentials.get(1, {}).items():
        for e in p:
            for g in T.ideals[1][j].generators:
                image.append(tuple(a + b for a, b in zip(e, g)))
    if image and MonomialIdeal.from_generators(image, td.r).contains(cof):
        return 0
    return 1


@dataclass(frozen=True)
class GeneratorClass:
    """A summand ``1 (x) x^xi`` of the transform that is a non-boundary cycle."""

    index: int
    cell: int
    xi: Exponent
    twist: Tuple[int, ...]
    fine: Exponent

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "cell": self.cell,
            "xi": list(self.xi),
            "twist": list(self.twist),
            "fine": list(self.fine),
        }


def fm_quotient_classes(E, I: MonomialIdeal, d: Sequence[int]) -> List[GeneratorClass]:
    """Generators ``1 (x) x^xi`` of the transform of ``(S/I)(d)`` that carry homology.

    Only single generators in positive index are tested; sums of generators
    that happen to be cycles are not searched for.
    """
    P = fm_transform(E, d, I)
    out = []
    for k in sorted(P.terms):
        if k == 0:
            continue
        for idx, s in enumerate(P.terms[k]):
            if generator_class(P, k, idx):
                _, cell, xi = s.tag
                out.append(GeneratorClass(k, cell, xi, s.twist, s.fine))
    return out
