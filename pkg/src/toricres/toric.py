"""Smooth complete toric varieties given by a fan.

A :class:`Fan` is validated and turned into :class:`ToricData`, which carries
the presentation ``0 -> M -> Z^r -> Pic X -> 0`` of the Picard group, the
degree map on exponent vectors of the Cox ring ``S = k[x_1, ..., x_r]`` and the
irrelevant ideal. Characters ``m`` of the torus are written in the basis of
``M`` dual to the standard basis of ``N = Z^n``, so the inclusion ``M -> Z^r``
is the ray matrix itself.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import exactla as la
from .errors import (
    EmptyLinearSystem,
    NotComplete,
    NotPrimitive,
    NotSmooth,
    ProjectivityAssumed,
    TorsionPicard,
)

Exponent = Tuple[int, ...]
PicDegree = Tuple[int, ...]


@dataclass(frozen=True)
class Fan:
    """A simplicial fan: primitive rays and maximal cones as ray-index sets."""

    dim: int
    rays: Tuple[Tuple[int, ...], ...]
    max_cones: Tuple[Tuple[int, ...], ...]
    name: str = ""

    @classmethod
    def from_lists(cls, rays, max_cones, name: str = "") -> "Fan":
        rays = tuple(tuple(int(x) for x in u) for u in rays)
        if not rays:
            raise NotComplete("a fan needs at least one ray")
        cones = tuple(sorted(tuple(sorted(int(i) for i in c)) for c in max_cones))
        return cls(len(rays[0]), rays, cones, name)

    @classmethod
    def from_dict(cls, data: dict) -> "Fan":
        fan = cls.from_lists(data["rays"], data["max_cones"], data.get("name", ""))
        if "dim" in data and int(data["dim"]) != fan.dim:
            raise ValueError(f"dim {data['dim']} does not match ray length {fan.dim}")
        return fan

    def to_dict(self) -> dict:
        out = {
            "dim": self.dim,
            "rays": [list(u) for u in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }
        if self.name:
            out["name"] = self.name
        return out

    def validate(self) -> None:
        """Raise if the fan is not smooth and complete.

        Smoothness: each maximal cone has ``dim`` rays forming a lattice basis.
        Completeness: the rays span ``R^n`` and every codimension-one face of a
        maximal cone lies in exactly two maximal cones.
        """
        n = self.dim
        for i, u in enumerate(self.rays):
            if len(u) != n:
                raise ValueError(f"ray {i} has length {len(u)}, expected {n}")
            if math.gcd(*u) != 1:
                raise NotPrimitive(f"ray {i} = {u} is not primitive")
        r = len(self.rays)
        for cone in self.max_cones:
            if any(not 0 <= i < r for i in cone):
                raise ValueError(f"cone {cone} references a missing ray")
            if len(cone) != n:
                raise NotSmooth(f"cone {cone} has {len(cone)} rays, expected {n}")
            d = la.det([self.rays[i] for i in cone])
            if abs(d) != 1:
                raise NotSmooth(f"cone {cone} has determinant {d}")
        if la.rational_rank([list(u) for u in self.rays]) < n:
            raise NotComplete("rays do not span R^n")
        if n == 1:
            if sorted(self.rays) != [(-1,), (1,)] or len(self.max_cones) != 2:
                raise NotComplete("a complete one-dimensional fan has rays +1 and -1")
            return
        count: Dict[Tuple[int, ...], int] = {}
        for cone in self.max_cones:
            for facet in itertools.combinations(cone, n - 1):
                count[facet] = count.get(facet, 0) + 1
        for facet, k in sorted(count.items()):
            if k != 2:
                raise NotComplete(f"face {facet} lies in {k} maximal cones, expected 2")


@dataclass(frozen=True)
class ToricData:
    """The ambient variety ``X`` and its Cox ring.

    ``m_inclusion`` is ``r x n`` (row ``i`` is the ray ``u_i``), ``deg_matrix``
    is ``rho x r``, and ``deg_matrix @ m_inclusion == 0``.
    """

    fan: Fan
    m_inclusion: Tuple[Tuple[int, ...], ...]
    deg_matrix: Tuple[Tuple[int, ...], ...]
    irrelevant_generators: Tuple[Exponent, ...]
    _section_cache: Dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def n(self) -> int:
        return self.fan.dim

    @property
    def r(self) -> int:
        return len(self.fan.rays)

    @property
    def rho(self) -> int:
        return self.r - self.n

    @property
    def rays(self):
        return self.fan.rays

    def degree(self, e: Sequence) -> PicDegree:
        """Pic degree of an exponent vector (integral or rational)."""
        out = tuple(sum(a * x for a, x in zip(row, e)) for row in self.deg_matrix)
        if all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1) for x in out):
            return tuple(int(x) for x in out)
        return out

    def values(self, m: Sequence, alpha: Optional[Sequence] = None) -> tuple:
        """The point ``alpha + (<m, u_i>)_i`` of ``R^r``."""
        vals = tuple(sum(a * x for a, x in zip(u, m)) for u in self.rays)
        if alpha is None:
            return vals
        return tuple(v + a for v, a in zip(vals, alpha))

    def representative(self, d: Sequence[int]) -> Exponent:
        """Some integral ``a`` with ``degree(a) == d`` (possibly with negative entries)."""
        return _integer_preimage(self.deg_matrix, tuple(d))

    def cartier_data(self, d: Sequence[int]) -> Tuple[Exponent, List[Tuple[int, ...]]]:
        """A representative ``a`` of ``d`` and ``m_sigma`` for each maximal cone.

        ``m_sigma`` solves ``<m_sigma, u_i> = -a_i`` for the rays of ``sigma``.
        """
        a = self.representative(d)
        ms = []
        for cone in self.fan.max_cones:
            A = [list(self.rays[i]) for i in cone]
            m = la.solve_rational(A, [-a[i] for i in cone])
            ms.append(tuple(int(x) for x in m))
        return a, ms

    def is_nef(self, d: Sequence[int]) -> bool:
        a, ms = self.cartier_data(d)
        return all(
            sum(x * y for x, y in zip(m, u)) >= -a[j]
            for m in ms
            for j, u in enumerate(self.rays)
        )

    def sections(self, d: Sequence[int]) -> List[Exponent]:
        """Exponents ``alpha >= 0`` with ``degree(alpha) == d``, sorted lexicographically."""
        d = tuple(int(x) for x in d)
        cached = self._section_cache.get(d)
        if cached is not None:
            return list(cached)
        a = self.representative(d)
        box = _polytope_box(self.rays, a, Fraction(0))
        out: List[Exponent] = []
        if box is not None:
            for m in itertools.product(*(range(lo, hi + 1) for lo, hi in box)):
                alpha = self.values(m, a)
                if all(x >= 0 for x in alpha):
                    out.append(tuple(alpha))
        out.sort()
        self._section_cache[d] = tuple(out)
        return out

    def choose_alpha(self, d: Sequence[int]) -> Exponent:
        secs = self.sections(d)
        if not secs:
            raise EmptyLinearSystem(f"no monomials of degree {tuple(d)}")
        return secs[0]

    @cached_property
    def fan_complex(self) -> List[FrozenSet[int]]:
        """All faces (including the empty one) of the fan's simplicial complex."""
        faces = set()
        for cone in self.fan.max_cones:
            for k in range(len(cone) + 1):
                faces.update(frozenset(c) for c in itertools.combinations(cone, k))
        return sorted(faces, key=lambda f: (len(f), sorted(f)))

    def line_bundle_cohomology(self, e: Sequence[int], i: int) -> int:
        """``dim H^i(X, O(e))`` from the reduced cohomology of ray subcomplexes.

        For a character ``m`` the ``m``-graded piece of ``H^i`` is the reduced
        cohomology in degree ``i-1`` of the subcomplex of the fan spanned by
        rays with ``<m, u_j> < -a_j``.
        """
        return self.cohomology_vector(e)[i] if 0 <= i <= self.n else 0

    def cohomology_vector(self, e: Sequence[int]) -> Tuple[int, ...]:
        a = self.representative(e)
        # Contributing characters lie in bounded chambers of the hyperplanes
        # <m, u_j> = -a_j - 1/2.
        box = _polytope_box(self.rays, a, Fraction(1, 2), require_feasible=False)
        totals = [0] * (self.n + 1)
        if box is None:
            return tuple(totals)
        for m in itertools.product(*(range(lo, hi + 1) for lo, hi in box)):
            neg = frozenset(
                j for j, u in enumerate(self.rays) if sum(x * y for x, y in zip(m, u)) < -a[j]
            )
            red = self._reduced_cohomology(neg)
            for k, b in enumerate(red):
                # reduced degree k-1 feeds H^k
                if b and k <= self.n:
                    totals[k] += b
        return tuple(totals)

    def _reduced_cohomology(self, support: FrozenSet[int]) -> Tuple[int, ...]:
        return _reduced_betti(tuple(f for f in self.fan_complex if f <= support), self.n)

    def euler_characteristic(self, e: Sequence[int]) -> int:
        return sum((-1) ** i * h for i, h in enumerate(self.cohomology_vector(e)))

    def to_dict(self) -> dict:
        return {
            "fan": self.fan.to_dict(),
            "m_inclusion": [list(r) for r in self.m_inclusion],
            "deg_matrix": [list(r) for r in self.deg_matrix],
            "irrelevant_generators": [list(g) for g in self.irrelevant_generators],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ToricData":
        td = build_toric(Fan.from_dict(data["fan"]), data.get("deg_matrix"))
        if "m_inclusion" in data and [list(r) for r in td.m_inclusion] != data["m_inclusion"]:
            raise ValueError("m_inclusion does not match the fan")
        return td


def _reduced_betti(faces: Tuple[FrozenSet[int], ...], n: int) -> Tuple[int, ...]:
    """Reduced Betti numbers ``b~_{k-1}`` for ``k = 0..n`` of a simplicial complex.

    ``faces`` must include the empty face; index ``k`` of the result is the
    reduced (co)homology in degree ``k - 1``.
    """
    return _reduced_betti_cached(tuple(sorted((tuple(sorted(f)) for f in faces), key=lambda f: (len(f), f))), n)


@lru_cache(maxsize=None)
def _reduced_betti_cached(faces: Tuple[Tuple[int, ...], ...], n: int) -> Tuple[int, ...]:
    by_dim: Dict[int, List[Tuple[int, ...]]] = {}
    for f in faces:
        by_dim.setdefault(len(f) - 1, []).append(f)
    index = {k: {f: i for i, f in enumerate(v)} for k, v in by_dim.items()}
    ranks: Dict[int, int] = {}
    for k, cells in by_dim.items():
        if k < 0:
            continue
        rows = by_dim.get(k - 1, [])
        B = la.zeros(len(rows), len(cells))
        for j, f in enumerate(cells):
            for t in range(len(f)):
                B[index[k - 1][f[:t] + f[t + 1:]]][j] = (-1) ** t
        ranks[k] = la.rational_rank(B)
    out = []
    for k in range(-1, n):
        dim_k = len(by_dim.get(k, []))
        out.append(dim_k - ranks.get(k, 0) - ranks.get(k + 1, 0))
    return tuple(out)


def _integer_preimage(D: Sequence[Sequence[int]], d: Tuple[int, ...]) -> Exponent:
    S, U, V = la.smith_normal_form([list(r) for r in D])
    rhs = la.matvec(U, d)
    rho, r = len(D), len(D[0])
    y = [0] * r
    for i in range(rho):
        s = S[i][i] if i < r else 0
        if s == 0:
            if rhs[i]:
                raise ValueError(f"degree {d} is not in the image of the degree map")
            continue
        if rhs[i] % s:
            raise ValueError(f"degree {d} is not in the image of the degree map")
        y[i] = rhs[i] // s
    return tuple(la.matvec(V, y))


def _polytope_box(rays, a, shift: Fraction, require_feasible: bool = True):
    """Integer bounding box of the points cut out of ``<m, u_j> >= -a_j - shift``.

    With ``require_feasible`` the box covers the polytope through its vertices;
    otherwise it covers every intersection point of ``n`` of the hyperplanes,
    hence all bounded chambers of the arrangement. Returns None if empty.
    """
    n = len(rays[0])
    pts = []
    for subset in itertools.combinations(range(len(rays)), n):
        A = [list(rays[i]) for i in subset]
        if la.det(A) == 0:
            continue
        m = la.solve_rational(A, [-a[i] - shift for i in subset])
        if require_feasible and any(
            sum(x * y for x, y in zip(m, u)) < -a[j] - shift for j, u in enumerate(rays)
        ):
            continue
        pts.append(m)
    if not pts:
        # A polytope of a complete fan is bounded, so it is empty here; with a
        # single ray direction (n == 0) nothing to do either.
        return None
    box = []
    for c in range(n):
        lo = min(p[c] for p in pts)
        hi = max(p[c] for p in pts)
        box.append((math.floor(lo) - (0 if require_feasible else 1), math.ceil(hi) + (0 if require_feasible else 1)))
    return box


def build_toric(fan: Fan, pic_basis: Optional[Sequence[Sequence[int]]] = None) -> ToricData:
    """Validate ``fan`` and compute its Picard presentation.

    The default basis of ``Pic X`` is the Hermite normal form of the cokernel
    map ``Z^r -> Z^rho``. ``pic_basis`` substitutes another degree matrix,
    which must define the same cokernel up to a unimodular change of basis.
    """
    fan.validate()
    warnings.warn(
        "projectivity of the fan is assumed, not verified", ProjectivityAssumed, stacklevel=2
    )
    A = [list(u) for u in fan.rays]
    r, n = len(A), fan.dim
    S, U, _ = la.smith_normal_form(A)
    diag = [S[i][i] for i in range(n)]
    if any(s == 0 for s in diag):
        raise NotComplete("rays do not span R^n")
    if any(s != 1 for s in diag):
        raise TorsionPicard(f"Pic X has torsion: invariant factors {diag}")
    Q = U[n:]
    if Q:
        H, _ = la.hermite_normal_form(Q)
    else:
        H = []
    if pic_basis is not None:
        P = [list(int(x) for x in row) for row in pic_basis]
        if len(P) != r - n or any(len(row) != r for row in P):
            raise ValueError(f"pic_basis must be {r - n} x {r}")
        if any(any(row) for row in la.matmul(P, A)):
            raise ValueError("pic_basis does not annihilate the ray matrix")
        S2, _, _ = la.smith_normal_form(P)
        if any(S2[i][i] != 1 for i in range(r - n)):
            raise ValueError("pic_basis is not a basis of the Picard group")
        H = P
    irrelevant = tuple(
        tuple(0 if i in cone else 1 for i in range(r)) for cone in fan.max_cones
    )
    return ToricData(
        fan=fan,
        m_inclusion=tuple(tuple(u) for u in fan.rays),
        deg_matrix=tuple(tuple(row) for row in H),
        irrelevant_generators=irrelevant,
    )


def basis_change(td: ToricData, other: Sequence[Sequence[int]]) -> List[List[int]]:
    """Unimodular ``W`` with ``other == W @ td.deg_matrix``."""
    D = [list(r) for r in td.deg_matrix]
    # Columns of D^T span; solve W row by row on a set of pivot columns.
    W = []
    for row in other:
        w = la.solve_rational(la.transpose(D), list(row))
        if w is None or any(x.denominator != 1 for x in w):
            raise ValueError("degree matrices do not share a cokernel")
        W.append([int(x) for x in w])
    if abs(la.det(W)) != 1:
        raise ValueError("basis change is not unimodular")
    return W
