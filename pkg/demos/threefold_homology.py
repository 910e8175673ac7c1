"""Truncating the Taylor resolution of a non-saturated quotient on a toric threefold.

With I = <x0 x1, x1 x2>, the truncated complex fails to be exact in every
degree m(1,1) with m >= 2, and the failure is witnessed by classes coming
from the transform of S/I.
"""
import warnings

from toricres import HypothesisViolated, MonomialIdeal, build_E, corpus_toric, taylor_complex, truncate_complex
from toricres.corpus import NONEXACT_IDEAL
from toricres.modtrunc import fm_quotient_classes, homology_at, irrelevant_homology_check, truncated_homology

warnings.simplefilter("ignore")  # projectivity is assumed for corpus fans

td = corpus_toric("threefold5")
I = MonomialIdeal.from_generators(NONEXACT_IDEAL)
K = taylor_complex(I, td)
print("Taylor twists:", [s.twist for v in K.terms.values() for s in v])

try:
    truncate_complex(K, (1, 1), td)
except HypothesisViolated as exc:
    print("m = 1:", exc)

E = build_E(td)
for m in (2, 3, 4):
    T = truncate_complex(K, (m, m), td)
    classes = [c for c in fm_quotient_classes(E, I, (m, m)) if c.xi[1] >= 1]
    for c in classes:
        h = homology_at(T, c.fine)
        dims = {k: v[0] for k, v in h.items() if v[0]}
        print(f"m = {m}: class x^{c.xi} in G_{c.index}, twist {c.twist}, homology {dims}")

T = truncate_complex(K, (2, 2), td)
H = truncated_homology(T, td=td)
torsion = irrelevant_homology_check(T, H, td.irrelevant_generators)
print(f"{len(torsion.entries)} higher classes in the window, all killed by a power of B:", torsion.all_torsion)
