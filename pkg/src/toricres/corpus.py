"""Named smooth projective toric varieties used throughout the tests and demos.

Fan files are JSON or TOML documents with ``dim``, ``rays`` and ``max_cones``
(0-based).  Two optional keys are understood: ``pic_basis`` (a degree matrix
replacing the default Hermite basis) and ``degrees`` (a list of nef degrees
worth trying).
"""
from __future__ import annotations

import json
import os
import sys
from typing import Dict, List, Optional, Tuple

from .toric import Fan, ToricData, build_toric

CORPUS: Dict[str, dict] = {
    "P1": {
        "dim": 1,
        "rays": [[1], [-1]],
        "max_cones": [[0], [1]],
        "degrees": [[0], [1], [2], [3], [4]],
    },
    "P2": {
        "dim": 2,
        "rays": [[1, 0], [0, 1], [-1, -1]],
        "max_cones": [[0, 1], [1, 2], [0, 2]],
        "degrees": [[1], [2]],
    },
    "P1xP1": {
        "dim": 2,
        "rays": [[1, 0], [-1, 0], [0, 1], [0, -1]],
        "max_cones": [[0, 2], [0, 3], [1, 2], [1, 3]],
        "degrees": [[1, 1], [2, 1], [2, 2]],
    },
    "P1xP1xP1": {
        "dim": 3,
        "rays": [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]],
        "max_cones": [[a, b, c] for a in (0, 1) for b in (2, 3) for c in (4, 5)],
        "degrees": [[1, 1, 1]],
    },
    "F1": {
        "dim": 2,
        "rays": [[1, 0], [0, 1], [-1, 1], [0, -1]],
        "max_cones": [[0, 1], [1, 2], [2, 3], [0, 3]],
        "degrees": [[1, 1], [2, 1]],
    },
    "F2": {
        "dim": 2,
        "rays": [[1, 0], [0, 1], [-1, 2], [0, -1]],
        "max_cones": [[0, 1], [1, 2], [2, 3], [0, 3]],
        # variables x, y, z, w of degrees (1,0), (-2,1), (1,0), (0,1)
        "pic_basis": [[1, -2, 1, 0], [0, 1, 0, 1]],
        "degrees": [[1, 1], [2, 1], [2, 0], [0, 1]],
    },
    "threefold5": {
        "dim": 3,
        "rays": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, 0, -1], [1, -1, 1]],
        "max_cones": [[0, 1, 2], [0, 1, 3], [0, 2, 4], [0, 3, 4], [1, 2, 3], [2, 3, 4]],
        # x3 and x4 are the basis of Pic
        "pic_basis": [[1, 0, 1, 1, 0], [-1, 1, -1, 0, 1]],
        "degrees": [[1, 1]],
    },
}

# Monomial ideal x0*x1, x1*x2 on threefold5: its truncations at 2d, 3d, ...
# satisfy the nef hypothesis yet keep positive homology.
NONEXACT_IDEAL = [[1, 1, 0, 0, 0], [0, 1, 1, 0, 0]]


def fan_from_document(data: dict) -> Tuple[Fan, Optional[List[List[int]]]]:
    for key in ("rays", "max_cones"):
        if key not in data:
            raise ValueError(f"fan document is missing '{key}'")
    return Fan.from_dict(data), data.get("pic_basis")


def read_document(path: str) -> dict:
    with open(path, "rb") as fh:
        raw = fh.read()
    if path.endswith(".toml"):
        if sys.version_info >= (3, 11):
            import tomllib
        else:
            import tomli as tomllib
        return tomllib.loads(raw.decode("utf-8"))
    return json.loads(raw.decode("utf-8"))


def load_fan(source: str) -> Tuple[Fan, Optional[List[List[int]]], dict]:
    """Fan, optional Pic basis and the raw document, from a path or a corpus name."""
    if os.path.exists(source):
        data = read_document(source)
    elif source in CORPUS:
        data = dict(CORPUS[source], name=source)
    else:
        raise FileNotFoundError(f"no fan file or corpus entry named {source!r}")
    fan, basis = fan_from_document(data)
    return fan, basis, data


def corpus_toric(name: str) -> ToricData:
    entry = CORPUS[name]
    fan, basis = fan_from_document(dict(entry, name=name))
    return build_toric(fan, basis)


def corpus_pairs() -> List[Tuple[str, Tuple[int, ...]]]:
    """Every (name, nef degree) listed in the corpus."""
    return [(name, tuple(d)) for name, entry in CORPUS.items() for d in entry["degrees"]]
