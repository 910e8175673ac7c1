"""Cellular resolutions of ceiling truncations of toric Cox rings.

Modules:

* ``exactla``: exact integer and rational linear algebra (HNF, SNF, kernels).
* ``toric``: fans, Picard presentation, nef test, sections, line bundle cohomology.
* ``cellcx``: the slice complex ``D`` and the torus complex ``E``.
* ``rescx``: free complexes ``F``, ``G`` and the transform of ``S(d)``; strands.
* ``modtrunc``: truncation of ideals and complexes, saturation, homology.
* ``cli``: the ``toricres`` command.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    EmptyLinearSystem,
    HypothesisViolated,
    MismatchWitness,
    NotAFacet,
    NotComplete,
    NotFineGraded,
    NotNef,
    NotPrimitive,
    NotSmooth,
    ProjectivityAssumed,
    ToricError,
    TorsionPicard,
)
from .toric import Fan, ToricData, build_toric  # noqa: E402
from .cellcx import build_D, build_E, ceiling_label, project_to_E, torus_label  # noqa: E402
from .rescx import (  # noqa: E402
    FreeComplex,
    build_F,
    build_G,
    fm_transform,
    fm_transform_S,
    match_theorem,
    strand,
    strand_homology,
    verify_resolution,
)
from .modtrunc import (  # noqa: E402
    MonomialIdeal,
    ModulePresentation,
    irrelevant_homology_check,
    saturate,
    taylor_complex,
    trunc_ideal,
    truncate_complex,
    truncated_homology,
)
from .corpus import CORPUS, corpus_toric, load_fan  # noqa: E402
