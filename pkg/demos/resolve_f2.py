"""Cellular resolution of the degree (1,1) truncation on the Hirzebruch surface F2."""
import warnings

from toricres import build_D, build_F, corpus_toric, trunc_ideal, verify_resolution
from toricres.render import laurent_str

warnings.simplefilter("ignore")  # projectivity is assumed for corpus fans

td = corpus_toric("F2")
d = (1, 1)
D = build_D(td, td.choose_alpha(d))
print("f-vector of D:", D.f_vector())
print("vertex labels:", ", ".join(laurent_str(e, "xyzw") for e in D.vertex_labels()))

I = trunc_ideal(td, d)
print("minimal generators of the truncation:", len(I.generators))

F = build_F(D)
print("ranks of F:", F.ranks())
print("d_1 =")
print(F.pretty(1, "xyzw"))

# exactness is checked strand by strand over the whole label box
rep = verify_resolution(F, I.generators)
print(f"resolution: {rep.ok}, length {rep.length}, {rep.points_checked} fine degrees checked")
