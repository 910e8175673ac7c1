"""Command line entry point: ``toricres <command> --fan FILE ...``.

Every command writes into its own output directory: JSON artifacts, plain
text matrices (targets as rows) and a ``manifest.json`` with input hashes.
Exit codes: 0 success, 1 invalid input, 2 hypothesis failure, 3 a
verification failed.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import warnings
from typing import Dict, List, Optional, Sequence

from . import __version__
from .cellcx import CellComplexD, TorusComplexE, build_D, build_E
from .corpus import CORPUS, load_fan, read_document
from .errors import HypothesisViolated, MismatchWitness, NotNef, ProjectivityAssumed, ToricError
from .modtrunc import (
    MonomialIdeal,
    ModulePresentation,
    default_window,
    fm_quotient_classes,
    irrelevant_homology_check,
    taylor_complex,
    trunc_ideal,
    truncate_complex,
    truncated_homology,
)
from .render import empty_svg, render_D, render_E, variable_names
from .rescx import FreeComplex, build_F, build_G, fm_transform_S, match_theorem, verify_resolution
from .toric import Fan, ToricData, build_toric

EXIT_OK, EXIT_INVALID, EXIT_HYPOTHESIS, EXIT_VERIFY = 0, 1, 2, 3


class Job:
    """Output directory plus the bookkeeping for its manifest."""

    def __init__(self, command: str, out: str, args: Dict[str, object]):
        self.command = command
        self.out = out
        self.args = args
        self.inputs: Dict[str, str] = {}
        self.outputs: List[str] = []
        os.makedirs(out, exist_ok=True)

    def record_input(self, path: Optional[str]) -> None:
        if path and os.path.exists(path):
            with open(path, "rb") as fh:
                self.inputs[os.path.basename(path)] = hashlib.sha256(fh.read()).hexdigest()
        elif path in CORPUS:
            text = dumps(CORPUS[path]).encode("utf-8")
            self.inputs[f"corpus:{path}"] = hashlib.sha256(text).hexdigest()

    def write_json(self, name: str, obj) -> None:
        self.write_text(name, dumps(obj))

    def write_text(self, name: str, text: str) -> None:
        with open(os.path.join(self.out, name), "w", encoding="utf-8") as fh:
            fh.write(text)
        if name not in self.outputs:
            self.outputs.append(name)

    def finish(self, status: int) -> int:
        self.write_json(
            "manifest.json",
            {
                "tool": "toricres",
                "version": __version__,
                "command": self.command,
                "arguments": self.args,
                "inputs": self.inputs,
                "outputs": sorted(self.outputs),
                "exit_code": status,
            },
        )
        return status


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_degree(text: str, rho: int) -> tuple:
    try:
        d = tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise ToricError(f"degree {text!r} is not a comma separated list of integers")
    if len(d) != rho:
        raise ToricError(f"degree {d} has {len(d)} entries, Pic X has rank {rho}")
    return d


def _toric(args) -> ToricData:
    fan, basis, _ = load_fan(args.fan)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ProjectivityAssumed)
        return build_toric(fan, basis)


def write_matrices(job: Job, stem: str, K: FreeComplex, names: Sequence[str]) -> None:
    for k in sorted(K.differentials):
        job.write_text(f"{stem}_d{k}.txt", K.pretty(k, names) + "\n")


# ---------------------------------------------------------------------------
# commands


def validation_report(fan: Fan) -> dict:
    checks = {}
    witness = None
    try:
        fan.validate()
        checks["smooth_complete"] = True
    except ToricError as exc:
        checks["smooth_complete"] = False
        witness = f"{type(exc).__name__}: {exc}"
    except ValueError as exc:
        checks["smooth_complete"] = False
        witness = str(exc)
    report = {"fan": fan.to_dict(), "checks": checks, "witness": witness, "projective": "assumed"}
    if witness is None:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ProjectivityAssumed)
                td = build_toric(fan)
            checks["torsion_free_pic"] = True
            report["rho"] = td.rho
            report["deg_matrix"] = [list(r) for r in td.deg_matrix]
        except ToricError as exc:
            checks["torsion_free_pic"] = False
            report["witness"] = f"{type(exc).__name__}: {exc}"
    report["ok"] = all(checks.values())
    return report


def cmd_validate(args) -> int:
    job = Job("validate", args.out, {"fan": args.fan})
    job.record_input(args.fan)
    fan, basis, _ = load_fan(args.fan)
    report = validation_report(fan)
    if report["ok"] and basis is not None:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ProjectivityAssumed)
                report["deg_matrix"] = [list(r) for r in build_toric(fan, basis).deg_matrix]
        except ValueError as exc:
            report["ok"] = False
            report["witness"] = str(exc)
    job.write_json("validation.json", report)
    print("valid" if report["ok"] else f"invalid: {report['witness']}")
    return job.finish(EXIT_OK if report["ok"] else EXIT_INVALID)


def cmd_resolve(args) -> int:
    td = _toric(args)
    d = parse_degree(args.degree, td.rho)
    job = Job("resolve", args.out, {"fan": args.fan, "degree": list(d)})
    job.record_input(args.fan)
    if not td.is_nef(d):
        raise NotNef(f"{d} is not nef")
    alpha = td.choose_alpha(d)
    D = build_D(td, alpha)
    F = build_F(D)
    names = variable_names(td.r)
    job.write_json("D.json", D.to_dict())
    job.write_json("F.json", F.to_dict())
    job.write_json("trunc_ideal.json", trunc_ideal(td, d, alpha).to_dict())
    write_matrices(job, "F", F, names)
    report = verify_resolution(F, D.vertex_labels())
    job.write_json("verification.json", report.to_dict())
    if args.svg and td.n == 2:
        job.write_text("D.svg", render_D(D, names))
    print(f"F: ranks {F.ranks()}, exact on {report.points_checked} fine degrees: {report.ok}")
    return job.finish(EXIT_OK if report.ok else EXIT_VERIFY)


def cmd_diagonal(args) -> int:
    td = _toric(args)
    job = Job("diagonal", args.out, {"fan": args.fan})
    job.record_input(args.fan)
    E = build_E(td)
    G = build_G(E)
    names = variable_names(td.r)
    job.write_json("E.json", E.to_dict())
    job.write_json("G.json", G.to_dict())
    write_matrices(job, "G", G, names)
    if args.svg and td.n == 2:
        job.write_text("E.svg", render_E(E, names))
    ok = G.is_complex() and G.check_degrees(td)
    print(f"E: f-vector {E.f_vector()}, G ranks {G.ranks()}, complex: {ok}")
    return job.finish(EXIT_OK if ok else EXIT_VERIFY)


def cmd_fm(args) -> int:
    td = _toric(args)
    d = parse_degree(args.degree, td.rho)
    job = Job("fm", args.out, {"fan": args.fan, "degree": list(d)})
    job.record_input(args.fan)
    E = build_E(td)
    Phi = fm_transform_S(E, d)
    D = build_D(td, td.choose_alpha(d))
    job.write_json("Phi.json", Phi.to_dict())
    write_matrices(job, "Phi", Phi, variable_names(td.r))
    try:
        cert = match_theorem(D, E, d, Phi=Phi)
    except MismatchWitness as exc:
        job.write_json("certificate.json", {"ok": False, "message": str(exc), "witness": _plain(exc.witness)})
        print(f"mismatch: {exc}")
        return job.finish(EXIT_VERIFY)
    job.write_json("certificate.json", dict(cert.to_dict(), ok=True))
    print(f"Phi(S{d}) matches F: {cert.counts()}")
    return job.finish(EXIT_OK)


def load_module(path: str, td: ToricData) -> FreeComplex:
    data = read_document(path)
    if "ideal" in data:
        return taylor_complex(MonomialIdeal.from_generators(data["ideal"], td.r), td)
    if "presentation" in data:
        return ModulePresentation.from_dict(data["presentation"]).as_complex(td)
    if "complex" in data:
        return FreeComplex.from_dict(data["complex"])
    raise ToricError("module file needs one of 'ideal', 'presentation' or 'complex'")


def cmd_truncate(args) -> int:
    td = _toric(args)
    d = parse_degree(args.degree, td.rho)
    if not args.module:
        raise ToricError("truncate needs --module")
    job = Job(
        "truncate",
        args.out,
        {
            "fan": args.fan,
            "degree": list(d),
            "module": os.path.basename(args.module),
            "window": args.window,
            "torsion_bound": args.torsion_bound,
        },
    )
    job.record_input(args.fan)
    job.record_input(args.module)
    K = load_module(args.module, td)
    T = truncate_complex(K, d, td)
    window = default_window(T, margin=args.window)
    report = truncated_homology(T, window, td)
    job.write_json("truncated.json", T.to_dict())
    hom = report.to_dict()
    data = read_document(args.module)
    if "ideal" in data:
        E = build_E(td)
        I = MonomialIdeal.from_generators(data["ideal"], td.r)
        hom["transform_classes"] = [c.to_dict() for c in fm_quotient_classes(E, I, d)]
    job.write_json("homology.json", hom)
    torsion = irrelevant_homology_check(T, report, td.irrelevant_generators, args.torsion_bound)
    job.write_json("torsion.json", torsion.to_dict())
    totals = {k: report.total(k) for k in sorted(report.dims)}
    print(f"homology within window {list(window[0])}..{list(window[1])}: {totals}")
    print(f"positive-index classes: {len(torsion.entries)}, B-torsion within bound: {torsion.all_torsion}")
    return job.finish(EXIT_OK)


def cmd_render(args) -> int:
    job = Job("render", args.out, {"input": os.path.basename(args.input)})
    job.record_input(args.input)
    data = read_document(args.input)
    kind = data.get("kind")
    if kind not in ("D", "E"):
        raise ToricError("render expects a D or E complex")
    if not data.get("cells"):
        job.write_text(f"{kind}.svg", empty_svg())
        return job.finish(EXIT_OK)
    if len(data["fan"]["rays"][0]) != 2:
        raise ToricError("render draws two-dimensional complexes only")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ProjectivityAssumed)
        if kind == "D":
            svg = render_D(CellComplexD.from_dict(data))
        else:
            svg = render_E(TorusComplexE.from_dict(data))
    job.write_text(f"{kind}.svg", svg)
    return job.finish(EXIT_OK)


def _plain(w):
    if isinstance(w, dict):
        return {str(k): _plain(v) for k, v in w.items()}
    if isinstance(w, (list, tuple)):
        return [_plain(v) for v in w]
    if isinstance(w, (int, str, bool)) or w is None:
        return w
    return str(w)


COMMANDS = {
    "validate": cmd_validate,
    "resolve": cmd_resolve,
    "diagonal": cmd_diagonal,
    "fm": cmd_fm,
    "truncate": cmd_truncate,
    "render": cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricres", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"toricres {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, degree=False):
        sp.add_argument("--fan", required=True, help="fan file (JSON/TOML) or corpus name")
        if degree:
            sp.add_argument("--degree", required=True, help="comma separated Pic degree, e.g. 1,1")
        sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--svg", action="store_true", help="also draw two-dimensional complexes")

    common(sub.add_parser("validate", help="check smoothness, completeness and Pic"))
    common(sub.add_parser("resolve", help="D, F and the truncation ideal"), degree=True)
    common(sub.add_parser("diagonal", help="E and the diagonal complex G"))
    common(sub.add_parser("fm", help="transform of S(d) and its comparison with F"), degree=True)
    sp = sub.add_parser("truncate", help="truncate a module complex and compute homology")
    common(sp, degree=True)
    sp.add_argument("--module", help="JSON with 'ideal', 'presentation' or 'complex'")
    sp.add_argument("--window", type=int, default=2, help="margin added to the homology window")
    sp.add_argument("--torsion-bound", type=int, default=10, dest="torsion_bound")
    sp = sub.add_parser("render", help="SVG of a D.json or E.json complex")
    sp.add_argument("input")
    sp.add_argument("--out", default="out")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (NotNef, HypothesisViolated) as exc:
        print(f"hypothesis failure: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except MismatchWitness as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ToricError, ValueError, KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
