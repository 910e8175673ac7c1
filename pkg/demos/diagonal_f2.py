"""The torus complex E of F2 and the resolution G of the diagonal it supports."""
import warnings

from toricres import build_E, build_G, corpus_toric

warnings.simplefilter("ignore")  # projectivity is assumed for corpus fans

E = build_E(corpus_toric("F2"))
print("f-vector of E:", E.f_vector(), "euler characteristic:", E.euler_characteristic())

G = build_G(E)
for k in sorted(G.terms):
    print(f"G_{k} twists:", G.twists(k))

# each edge of F2's torus has two boundary records to the same vertex orbit
print("d_1 =")
print(G.pretty(1, "xyzw"))
print("d^2 = 0:", G.is_complex())
