import itertools

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_rank
from toricres.cellcx import build_E
from toricres.corpus import NONEXACT_IDEAL, corpus_pairs
from toricres.errors import HypothesisViolated, NotNef
from toricres.modtrunc import (
    ModulePresentation,
    MonomialIdeal,
    check_containment,
    default_window,
    fm_quotient_classes,
    homology_at,
    irrelevant_homology_check,
    is_boundary,
    saturate,
    taylor_complex,
    trunc_ideal,
    truncate_complex,
    truncate_map,
    truncated_h0_expected,
    truncated_homology,
)
from toricres.rescx import FreeComplex, Summand, strand, strand_homology


def saturation_member(I, irrelevant, e, bound=12):
    """``x^e`` lies in ``I : B^inf`` iff every ``f`` in ``B`` has ``f^N x^e`` in ``I``."""
    return all(
        any(I.contains(tuple(a + N * b for a, b in zip(e, f))) for N in range(bound + 1)) for f in irrelevant
    )


def monomials_of_degree(r, ell):
    return sorted(e for e in itertools.product(range(ell + 1), repeat=r) if sum(e) == ell)


def single(td, fine=None):
    """``S`` as a complex with one summand."""
    fine = fine or (0,) * td.r
    twist = tuple(-x for x in td.degree(fine))
    return FreeComplex(td.r, {0: [Summand(twist, ("S",), tuple(fine))]}, {})


# ---------------------------------------------------------------------------
# monomial ideals


def test_ideal_keeps_minimal_generators():
    I = MonomialIdeal.from_generators([(1, 0), (2, 0), (1, 1), (0, 3)])
    assert I.generators == ((0, 3), (1, 0))
    assert (5, 0) in I and (0, 2) not in I


def test_ideal_rejects_negative_and_empty():
    with pytest.raises(ValueError):
        MonomialIdeal.from_generators([(1, -1)])
    with pytest.raises(ValueError):
        MonomialIdeal.from_generators([])
    assert MonomialIdeal.from_generators([], 3).generators == ()


def test_unit_ideal():
    U = MonomialIdeal.unit(3)
    assert U.is_unit() and (0, 0, 0) in U


def test_colon_and_intersection():
    I = MonomialIdeal.from_generators([(2, 1), (0, 3)])
    assert I.colon((1, 0)) == MonomialIdeal.from_generators([(1, 1), (0, 3)])
    assert I.colon_power((1, 0)) == MonomialIdeal.from_generators([(0, 1)])
    J = MonomialIdeal.from_generators([(1, 0)])
    assert I.intersect(J) == MonomialIdeal.from_generators([(2, 1), (1, 3)])
    assert (I + J) == MonomialIdeal.from_generators([(1, 0), (0, 3)])


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.tuples(*[st.integers(0, 3)] * 3), min_size=1, max_size=4),
    st.lists(st.tuples(*[st.integers(0, 3)] * 3), min_size=1, max_size=4),
)
def test_intersection_is_membership_and(a, b):
    I, J = MonomialIdeal.from_generators(a), MonomialIdeal.from_generators(b)
    K = I.intersect(J)
    for e in itertools.product(range(7), repeat=3):
        assert (e in K) == (e in I and e in J)


def test_ideal_dict(f2):
    I = trunc_ideal(f2, (1, 1))
    d = I.to_dict()
    assert MonomialIdeal.from_generators(d["generators"], d["nvars"]) == I


# ---------------------------------------------------------------------------
# ceiling truncation


def test_f2_truncation_generators(f2):
    I = trunc_ideal(f2, (1, 1))
    # the three non-lattice vertex labels are multiples of lattice ones
    assert len(I.generators) == 6
    assert MonomialIdeal.from_generators(f2.sections((1, 1))) == I


def test_truncation_independent_of_alpha(toric):
    for name, d in corpus_pairs():
        td = toric(name)
        secs = td.sections(d)
        ideals = {trunc_ideal(td, d, a) for a in secs}
        assert len(ideals) == 1, (name, d)


@pytest.mark.parametrize("name,n", [("P1", 1), ("P2", 2)])
def test_projective_space_truncation_is_a_power_of_the_maximal_ideal(toric, name, n):
    td = toric(name)
    for ell in range(0, 4):
        assert trunc_ideal(td, (ell,)).generators == tuple(monomials_of_degree(n + 1, ell))


@pytest.mark.parametrize("name", ["P1xP1", "P1xP1xP1"])
def test_unimodular_truncation_is_generated_by_sections(toric, name):
    td = toric(name)
    for d in itertools.product(range(0, 3), repeat=td.rho):
        assert trunc_ideal(td, d) == MonomialIdeal.from_generators(td.sections(d)), d


def test_truncation_contains_all_sections(toric):
    for name, d in corpus_pairs():
        td = toric(name)
        I = trunc_ideal(td, d)
        assert all(e in I for e in td.sections(d))


def test_truncation_rejects_bad_input(f2):
    with pytest.raises(NotNef):
        trunc_ideal(f2, (-1, 0))
    with pytest.raises(ValueError):
        trunc_ideal(f2, (1, 1), (1, 0, 0, 0))


def test_saturation_of_truncations_is_the_unit_ideal(toric):
    for name, d in corpus_pairs():
        td = toric(name)
        assert saturate(trunc_ideal(td, d), td.irrelevant_generators).is_unit(), (name, d)


def test_saturation_matches_membership_oracle(toric):
    td = toric("F2")
    B = td.irrelevant_generators
    for gens in ([(1, 0, 0, 0)], [(0, 1, 0, 0), (0, 0, 0, 1)], [(1, 0, 1, 0)], [(1, 1, 0, 0), (0, 0, 1, 1)]):
        I = MonomialIdeal.from_generators(gens)
        sat = saturate(I, B)
        for e in itertools.product(range(3), repeat=4):
            assert (e in sat) == saturation_member(I, B, e), (gens, e)


# ---------------------------------------------------------------------------
# Taylor complex


def test_taylor_of_two_generators(toric):
    td = toric("P2")
    K = taylor_complex(MonomialIdeal.from_generators([(1, 1, 0), (0, 1, 1)]), td)
    assert K.ranks() == {0: 1, 1: 2, 2: 1}
    assert sorted(K.differentials[2].values(), key=sorted) == [{(0, 0, 1): 1}, {(1, 0, 0): -1}]
    assert K.is_complex() and K.check_degrees(td)


def test_taylor_resolves_the_quotient(toric):
    td = toric("P2")
    for gens in ([(1, 1, 0), (0, 1, 1)], [(2, 0, 0), (1, 1, 0), (0, 0, 1)], [(1, 0, 0)]):
        I = MonomialIdeal.from_generators(gens)
        K = taylor_complex(I, td)
        for beta in itertools.product(range(4), repeat=3):
            h = strand_homology(strand(K, beta))
            assert all(v == 0 for k, v in h.items() if k > 0), (gens, beta)
            assert h[0] == (0 if beta in I else 1)


def test_taylor_twists_are_lcm_degrees(f2):
    I = MonomialIdeal.from_generators([(1, 1, 0, 0), (0, 1, 1, 0)])
    K = taylor_complex(I, f2)
    assert [s.fine for s in K.terms[2]] == [(1, 1, 1, 0)]
    assert K.twists(2) == [tuple(-x for x in f2.degree((1, 1, 1, 0)))]


# ---------------------------------------------------------------------------
# truncated complexes


def test_truncating_S_gives_the_truncation_ideal(f2):
    T = truncate_complex(single(f2), (1, 1), f2)
    I = trunc_ideal(f2, (1, 1))
    assert T.ideals[0] == [I]
    for beta in itertools.product(range(4), range(2), range(4), range(2)):
        h = homology_at(T, beta)
        assert h.get(0, (0, []))[0] == (1 if beta in I else 0)


def test_trivial_pair_is_exact(toric):
    # S/<x0> on P1 is the skyscraper at a point; truncation keeps it exact in positive index
    td = toric("P1")
    K = taylor_complex(MonomialIdeal.from_generators([(1, 0)]), td)
    for ell in (1, 2, 3):
        T = truncate_complex(K, (ell,), td)
        lo, hi = default_window(T)
        for beta in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
            h = homology_at(T, beta)
            assert 1 not in h
            assert h.get(0, (0, []))[0] == truncated_h0_expected(td, K, T, beta)


def test_h0_matches_membership_formula(toric):
    td = toric("F2")
    K = taylor_complex(MonomialIdeal.from_generators([(1, 0, 0, 0), (0, 0, 0, 1)]), td)
    T = truncate_complex(K, (2, 1), td)
    lo, hi = default_window(T, margin=1)
    for beta in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        assert homology_at(T, beta).get(0, (0, []))[0] == truncated_h0_expected(td, K, T, beta)


def test_truncated_maps_land_in_targets(f2):
    K = taylor_complex(MonomialIdeal.from_generators([(1, 0, 0, 0), (0, 0, 1, 0)]), f2)
    T = truncate_complex(K, (2, 1), f2)
    check_containment(T)
    for k in (1, 2):
        images = truncate_map(K.differentials[k], T.ideals[k], T.ideals[k - 1])
        assert len(images) == sum(len(I.generators) for I in T.ideals[k])


def test_truncation_is_functorial_on_composites(f2):
    # truncating d1 and d2 separately and composing is the truncation of d1 d2 = 0
    K = taylor_complex(MonomialIdeal.from_generators([(1, 0, 0, 0), (0, 0, 1, 0)]), f2)
    T = truncate_complex(K, (2, 1), f2)
    up = truncate_map(K.differentials[2], T.ideals[2], T.ideals[1])
    for (j, g), vec in up.items():
        total = {}
        for i, p in vec.items():
            for (t, jj), q in K.differentials[1].items():
                if jj != i:
                    continue
                for e1, c1 in p.items():
                    for e2, c2 in q.items():
                        key = (t, tuple(a + b for a, b in zip(e1, e2)))
                        total[key] = total.get(key, 0) + c1 * c2
        assert all(v == 0 for v in total.values())


def test_hypothesis_violation_reports_the_twist(three):
    K = taylor_complex(MonomialIdeal.from_generators(NONEXACT_IDEAL), three)
    with pytest.raises(HypothesisViolated) as err:
        truncate_complex(K, (1, 1), three)
    assert err.value.twist == (2, -1)


@pytest.mark.parametrize("m", [2, 3])
def test_hypothesis_holds_from_two_on(three, m):
    K = taylor_complex(MonomialIdeal.from_generators(NONEXACT_IDEAL), three)
    d = (m, m)
    for s in (s for v in K.terms.values() for s in v):
        assert three.is_nef(tuple(x + y for x, y in zip(d, s.twist)))
    truncate_complex(K, d, three)


def test_threefold_truncated_homology_and_torsion(three):
    K = taylor_complex(MonomialIdeal.from_generators(NONEXACT_IDEAL), three)
    T = truncate_complex(K, (2, 2), three)
    rep = truncated_homology(T, td=three)
    assert rep.positive_nonzero()
    assert rep.total(1) > 0
    for c in rep.classes[:20]:
        if c.index == 1:
            assert not is_boundary(T, 1, c.beta, c.vector)
    tor = irrelevant_homology_check(T, rep, three.irrelevant_generators, bound=6)
    assert len(tor.entries) == rep.total(1) + rep.total(2)
    data = tor.to_dict()
    assert data["bound"] == 6 and set(data) == {"bound", "all_torsion", "entries"}
    assert all(e["status"] in ("B-torsion", "bound exhausted") for e in data["entries"])


def test_transform_classes_match_truncated_strands(three):
    E = build_E(three)
    I = MonomialIdeal.from_generators(NONEXACT_IDEAL)
    K = taylor_complex(I, three)
    T = truncate_complex(K, (2, 2), three)
    classes = fm_quotient_classes(E, I, (2, 2))
    x1 = [c for c in classes if c.xi[1] >= 1 and three.degree(tuple(a - (i == 1) for i, a in enumerate(c.xi))) == (1, 2)]
    assert sorted(c.xi for c in x1) == [(0, 1, 0, 1, 2), (0, 2, 0, 1, 1), (0, 3, 0, 1, 0)]
    for c in x1:
        assert c.index == 1 and c.twist == (-1, 1)
        assert homology_at(T, c.fine)[1][0] >= 1


def test_quotient_transform_of_unit_ideal_is_zero(f2_E, f2):
    assert fm_quotient_classes(f2_E, MonomialIdeal.unit(4), (1, 1)) == []


# ---------------------------------------------------------------------------
# presentations


def test_presentation_round_trip_and_grading(f2):
    # S <- S(-1,0)^2 via (x, z): the cokernel is S/<x, z>
    P = ModulePresentation(
        [(0, 0)],
        [(-1, 0), (-1, 0)],
        {(0, 0): {(1, 0, 0, 0): 1}, (0, 1): {(0, 0, 1, 0): 1}},
    )
    back = ModulePresentation.from_dict(P.to_dict())
    assert back.to_dict() == P.to_dict()
    K = P.as_complex(f2)
    assert [s.fine for s in K.terms[1]] == [(1, 0, 0, 0), (0, 0, 1, 0)]
    T = truncate_complex(K, (1, 1), f2)
    for beta in itertools.product(range(3), repeat=4):
        assert homology_at(T, beta).get(0, (0, []))[0] == truncated_h0_expected(f2, K, T, beta)


def test_presentation_rejects_inconsistent_grading(f2):
    P = ModulePresentation([(0, 0)], [(-1, 0)], {(0, 0): {(1, 0, 0, 0): 1, (0, 0, 1, 0): 1}})
    with pytest.raises(ValueError):
        P.as_complex(f2)


def test_homology_report_dict(f2):
    T = truncate_complex(single(f2), (1, 1), f2)
    rep = truncated_homology(T, ((0, 0, 0, 0), (1, 1, 1, 1)), f2)
    data = rep.to_dict()
    assert data["within_window"] is True
    assert data["window"] == [[0, 0, 0, 0], [1, 1, 1, 1]]
    assert rep.total(0) == sum(1 for b in itertools.product(range(2), repeat=4) if b in trunc_ideal(f2, (1, 1)))


def test_strand_ranks_of_truncation_agree_with_oracle(three):
    K = taylor_complex(MonomialIdeal.from_generators(NONEXACT_IDEAL), three)
    T = truncate_complex(K, (2, 2), three)
    from toricres.modtrunc import _matrix, _space

    for beta in [(0, 2, 0, 1, 2), (1, 2, 1, 2, 2), (2, 3, 2, 2, 2)]:
        h = homology_at(T, beta)
        for k in (0, 1, 2):
            basis = _space(T, k, beta)
            down = _matrix(T, k, _space(T, k - 1, beta), basis) if k else []
            up = _matrix(T, k + 1, basis, _space(T, k + 1, beta))
            rd = brute_rank(down) if down and down[0] else 0
            ru = brute_rank(up) if up and up[0] else 0
            assert h.get(k, (0, []))[0] == len(basis) - rd - ru
