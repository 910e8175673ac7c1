"""Applying G to S(d) reproduces F(d), summand by summand and entry by entry."""
import warnings

from toricres import build_D, build_E, corpus_toric, fm_transform_S, match_theorem

warnings.simplefilter("ignore")  # projectivity is assumed for corpus fans

for name, d in [("F2", (1, 1)), ("P1", (3,)), ("P1xP1", (1, 1)), ("threefold5", (1, 1))]:
    td = corpus_toric(name)
    D, E = build_D(td, td.choose_alpha(d)), build_E(td)
    Phi = fm_transform_S(E, d)
    cert = match_theorem(D, E, d, Phi=Phi)
    print(f"{name} d={d}: ranks {Phi.ranks()}, {cert.twists_checked} twists and {cert.entries_checked} entries agree")
