import json
import os
from collections import Counter

import pytest

from oracles import brute_rank, check_chain_equivalence, parse_poly
from toricres.cellcx import build_D, build_E
from toricres.corpus import corpus_pairs
from toricres.errors import MismatchWitness, NotNef
from toricres.modtrunc import MonomialIdeal, trunc_ideal
from toricres.rescx import (
    FreeComplex,
    Summand,
    build_F,
    build_G,
    fm_transform_S,
    label_box,
    match_theorem,
    strand,
    strand_homology,
    verify_resolution,
)

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def golden(key):
    with open(os.path.join(GOLDEN, "f2_matrices.json"), encoding="utf-8") as fh:
        g = json.load(fh)
    return {int(k): [[parse_poly(c, g["names"]) for c in row] for row in M] for k, M in g[key].items()}


def witness(key):
    with open(os.path.join(GOLDEN, "f2_witness.json"), encoding="utf-8") as fh:
        w = json.load(fh)[key]
    return {int(k): (v["perm"], v["signs"]) for k, v in w.items()}


def compose(A, B, mul):
    """Product of two polynomial matrices given as lists of exponent dicts."""
    out = []
    for row in A:
        new = []
        for j in range(len(B[0])):
            acc = Counter()
            for t, p in enumerate(row):
                for e1, c1 in p.items():
                    for e2, c2 in B[t][j].items():
                        acc[mul(e1, e2)] += c1 * c2
            new.append({e: c for e, c in acc.items() if c})
        out.append(new)
    return out


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def f_of(td, d):
    return build_F(build_D(td, td.choose_alpha(d)))


# ---------------------------------------------------------------------------
# F for F2


def test_f2_F_twists(f2_F):
    assert Counter(f2_F.twists(0)) == Counter({(-1, -1): 6, (0, -2): 3})
    assert Counter(f2_F.twists(1)) == Counter({(-2, -1): 4, (0, -2): 4, (-1, -2): 6})
    assert Counter(f2_F.twists(2)) == Counter({(0, -2): 1, (-1, -2): 2, (-2, -2): 3})


def test_f2_golden_matrices_form_a_complex():
    M = golden("F")
    assert all(not p for row in compose(M[1], M[2], add) for p in row)


def test_f2_F_matches_golden_up_to_signed_permutation(f2_F):
    theirs = golden("F")
    ours = {k: f2_F.matrix(k) for k in theirs}
    assert check_chain_equivalence(ours, theirs, witness("F"))


def test_golden_witness_is_a_signed_permutation():
    for key, sizes in (("F", {0: 9, 1: 14, 2: 6}), ("G", {0: 2, 1: 5, 2: 3})):
        for k, (perm, signs) in witness(key).items():
            assert sorted(perm) == list(range(sizes[k]))
            assert set(signs) <= {1, -1}


def test_perturbed_golden_is_rejected(f2_F):
    theirs = golden("F")
    theirs[1][0][0] = {e: -c for e, c in theirs[1][0][0].items()}
    ours = {k: f2_F.matrix(k) for k in theirs}
    assert not check_chain_equivalence(ours, theirs, witness("F"))


def test_f2_F_degrees(f2, f2_F):
    assert f2_F.check_degrees(f2)
    assert f2_F.is_complex()


def test_f2_F_pretty(f2_F):
    text = f2_F.pretty(2, list("xyzw"))
    assert text.count("\n") == 13
    assert "w" in text


# ---------------------------------------------------------------------------
# G for F2


def test_f2_G_twists(f2_G):
    assert Counter(f2_G.twists(0)) == Counter({(0, 0, 0, 0): 1, (1, -1, 1, -1): 1})
    assert Counter(f2_G.twists(1)) == Counter(
        {(-1, 0, -1, 0): 1, (1, -1, 0, -1): 2, (0, -1, 1, -1): 2}
    )
    assert Counter(f2_G.twists(2)) == Counter({(1, -1, -1, -1): 1, (0, -1, 0, -1): 1, (-1, -1, 1, -1): 1})


def test_f2_G_matches_golden_up_to_signed_permutation(f2_G):
    theirs = golden("G")
    ours = {k: f2_G.matrix(k) for k in theirs}
    assert check_chain_equivalence(ours, theirs, witness("G"))


def test_f2_G_doubled_edge_entry(f2_G):
    # the loop edge contributes two boundary terms to the same vertex
    target = {(1, 0, 0, 0, 0, 0, 1, 0): 1, (0, 0, 1, 0, 1, 0, 0, 0): -1}
    negated = {e: -c for e, c in target.items()}
    entries = [p for p in f2_G.differentials[1].values()]
    assert target in entries or negated in entries


def test_f2_G_is_complex(f2, f2_G):
    assert f2_G.is_complex()
    assert f2_G.check_degrees(f2)


def test_golden_G_forms_a_complex():
    M = golden("G")
    assert all(not p for row in compose(M[1], M[2], add) for p in row)


def test_p1_G_is_the_diagonal_equation(toric):
    G = build_G(build_E(toric("P1")))
    assert G.ranks() == {0: 1, 1: 1}
    assert G.twists(1) == [(-1, -1)]
    (entry,) = G.differentials[1].values()
    # x0 y1 - x1 y0 up to sign
    assert entry in ({(1, 0, 0, 1): -1, (0, 1, 1, 0): 1}, {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1})


# ---------------------------------------------------------------------------
# the transform of S(d)


def test_f2_phi_ranks(f2_E):
    P = fm_transform_S(f2_E, (1, 1))
    assert P.ranks() == {0: 9, 1: 14, 2: 6}
    assert P.is_complex()


def test_f2_phi_blocks(f2, f2_E):
    # dimension of each block is the number of sections of d + deg floor(gamma)
    P = fm_transform_S(f2_E, (1, 1))
    by_twist = Counter((k, s.twist) for k, v in P.terms.items() for s in v)
    assert by_twist == Counter(
        {
            (0, (0, 0)): len(f2.sections((1, 1))),
            (0, (1, -1)): len(f2.sections((2, 0))),
            (1, (-1, 0)): len(f2.sections((0, 1))),
            (1, (1, -1)): 2 * len(f2.sections((1, 0))),
            (1, (0, -1)): 2 * len(f2.sections((2, 0))),
            (2, (1, -1)): len(f2.sections((0, 0))),
            (2, (0, -1)): len(f2.sections((1, 0))),
            (2, (-1, -1)): len(f2.sections((2, 0))),
        }
    )


def test_phi_of_trivial_degree(f2_E, f2):
    P = fm_transform_S(f2_E, (0, 0))
    assert P.ranks() == {0: 1, 1: 0, 2: 0}
    assert build_F(build_D(f2, (0, 0, 0, 0))).ranks() == {0: 1}


def test_phi_rejects_non_nef(f2_E):
    with pytest.raises(NotNef):
        fm_transform_S(f2_E, (-1, 0))


def test_match_theorem_f2(f2, f2_D, f2_E):
    cert = match_theorem(f2_D, f2_E, (1, 1))
    assert cert.counts() == {0: 9, 1: 14, 2: 6}
    assert cert.twists_checked == 29
    assert cert.entries_checked == sum(len(v) for v in build_F(f2_D).differentials.values())


@pytest.mark.parametrize("ell", [1, 2, 3, 4])
def test_match_theorem_p1(toric, ell):
    td = toric("P1")
    D = build_D(td, td.choose_alpha((ell,)))
    cert = match_theorem(D, build_E(td), (ell,))
    assert cert.counts() == {0: ell + 1, 1: ell}


def test_match_theorem_p1xp1(toric):
    td = toric("P1xP1")
    D = build_D(td, td.choose_alpha((1, 1)))
    assert match_theorem(D, build_E(td), (1, 1)).counts() == {0: 4, 1: 4, 2: 1}


def test_match_theorem_all_corpus_pairs(toric):
    for name, d in corpus_pairs():
        td = toric(name)
        D = build_D(td, td.choose_alpha(d))
        cert = match_theorem(D, build_E(td), d)
        assert cert.counts() == build_F(D).ranks(), (name, d)


def test_match_theorem_detects_tampering(f2_D, f2_E):
    P = fm_transform_S(f2_E, (1, 1))
    key = next(iter(P.differentials[1]))
    with pytest.raises(MismatchWitness):
        match_theorem(f2_D, f2_E, (1, 1), Phi=P.with_sign_flipped(1, key))
    terms = dict(P.terms)
    terms[0] = terms[0][:-1]
    short = FreeComplex(P.nvars, terms, P.differentials)
    with pytest.raises(MismatchWitness):
        match_theorem(f2_D, f2_E, (1, 1), Phi=short)


# ---------------------------------------------------------------------------
# exactness


def test_verify_resolution_f2(f2, f2_F):
    rep = verify_resolution(f2_F)
    assert rep.ok and rep.dd_zero
    assert rep.box == (3, 1, 3, 1)
    assert rep.points_checked == 64
    assert rep.length == 2


def test_verify_resolution_h0_is_the_truncation(toric):
    for name, d in corpus_pairs():
        td = toric(name)
        F = f_of(td, d)
        gens = trunc_ideal(td, d).generators
        assert MonomialIdeal.from_generators([s.fine for s in F.terms[0]]) == trunc_ideal(td, d)
        if sum(len(v) for v in F.terms.values()) <= 40:
            assert verify_resolution(F, gens).ok, (name, d)


def test_resolution_length_bounded_by_dimension(toric):
    for name, d in corpus_pairs():
        td = toric(name)
        assert f_of(td, d).length <= td.n


def test_p1_resolution_is_eagon_northcott(toric):
    td = toric("P1")
    for ell in range(1, 5):
        F = f_of(td, (ell,))
        assert F.ranks() == {0: ell + 1, 1: ell}
        entries = [p for p in F.differentials[1].values()]
        assert len(entries) == 2 * ell
        assert {e for p in entries for e in p} == {(1, 0), (0, 1)}
        assert verify_resolution(F).ok


def test_strand_matrix_ranks_match_oracle(f2_F):
    top = label_box(f2_F)
    for beta in [(0, 0, 1, 1), (1, 1, 2, 1), top, (3, 1, 0, 0)]:
        st = strand(f2_F, beta)
        h = strand_homology(st)
        for k, basis in st.bases.items():
            down = st.matrices.get(k)
            up = st.matrices.get(k + 1)
            r_down = brute_rank(down) if down and down[0] else 0
            r_up = brute_rank(up) if up and up[0] else 0
            assert h[k] == len(basis) - r_down - r_up


def test_broken_complex_fails_verification(f2_F):
    key = next(iter(f2_F.differentials[2]))
    rep = verify_resolution(f2_F.with_sign_flipped(2, key))
    assert not rep.ok and not rep.dd_zero
    assert rep.failure["reason"] == "dd != 0"


def test_non_exact_complex_is_reported(f2_F):
    # drop the top cells: the complex is still a complex but not exact
    terms = dict(f2_F.terms)
    terms[2] = []
    cut = FreeComplex(f2_F.nvars, terms, {1: f2_F.differentials[1], 2: {}})
    rep = verify_resolution(cut)
    assert rep.dd_zero and not rep.ok
    assert rep.failure["reason"] == "strand homology"


# ---------------------------------------------------------------------------
# ∂∂ = 0 and single sign flips


def test_length_one_flip_is_a_change_of_basis(toric):
    F = f_of(toric("P1"), (2,))
    flipped = F.with_sign_flipped(1, next(iter(F.differentials[1])))
    assert flipped.is_complex() and verify_resolution(flipped).ok


def _built_complexes(toric):
    out = []
    for name, d in corpus_pairs():
        F = f_of(toric(name), d)
        # in length one there is no composite, and a flip is only a change of basis
        if F.length >= 2:
            out.append((f"F {name} {d}", F))
    for name in ("P2", "F1", "F2", "threefold5"):
        td = toric(name)
        E = build_E(td)
        out.append((f"G {name}", build_G(E)))
    return out


def test_every_sign_flip_is_detected(toric):
    for label, K in _built_complexes(toric):
        assert K.is_complex(), label
        for k, entries in K.differentials.items():
            for key in entries:
                assert not K.with_sign_flipped(k, key).is_complex(), (label, k, key)


def test_free_complex_round_trip(f2_F, f2_G, f2_E):
    for K in (f2_F, f2_G, fm_transform_S(f2_E, (1, 1))):
        data = K.to_dict()
        back = FreeComplex.from_dict(data)
        assert back.to_dict() == data
        assert back.ranks() == K.ranks()


def test_summand_defaults():
    s = Summand((0, 0), ("cell", 0))
    assert s.fine is None
