"""Command-line front end: ``kahler-algebroid <verb> MODEL [flags]``.

Exit codes: 0 all checks pass, 1 a check failed or needed structure is
missing, 2 malformed input.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from typing import Any

from . import constructions as cons
from . import presets
from .cohomology import cohomology
from .errors import ConsistencyError, IncompleteModelError, ModelError, ParseError
from .lefschetz import (
    betti_evenness_check,
    ddstar_lemma_check,
    equivalence_theorem_check,
    hard_lefschetz_check,
    intersection_pairing,
    kahler_identity_suite,
    symplectic_harmonic_check,
)
from .model import AlgebroidPresentation, validate
from .modelfile import SCHEMA_VERSION, canonical_json, jsonable, model_hash, parse_bspec, parse_model

EXIT_OK, EXIT_FAIL, EXIT_MALFORMED = 0, 1, 2


class CliFailure(Exception):
    def __init__(self, message: str, code: int, hint: str = ""):
        super().__init__(message)
        self.code = code
        self.hint = hint


def load_model(ref: str, m: int | None) -> AlgebroidPresentation:
    if ref in presets.MODEL_PRESETS:
        if m is not None and ref != "abelian-2m":
            raise CliFailure("--m only applies to abelian-2m", EXIT_MALFORMED)
        if m is not None and m < 1:
            raise CliFailure("--m must be at least 1", EXIT_MALFORMED)
        return presets.model_preset(ref, m)
    if ref in presets.BSPEC_PRESETS:
        raise CliFailure(f"{ref!r} is a b-manifold spec, not an algebroid model", EXIT_FAIL, hint=f"try: bgeometry {ref}")
    if ref in presets.RING_PRESETS:
        raise CliFailure(f"{ref!r} is a ring, not an algebroid model", EXIT_FAIL, hint=f"use it with cohomology MODEL --kunneth {ref}")
    if not os.path.exists(ref):
        raise CliFailure(f"no such model file or preset: {ref!r}", EXIT_MALFORMED, hint="list-presets shows the built-in names")
    with open(ref, encoding="utf-8") as fh:
        return parse_model(fh.read())


def _header(verb: str, p: AlgebroidPresentation | None = None) -> dict:
    out: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "command": verb}
    if p is not None:
        out["model"] = {"name": p.name, "rank": p.rank, "sha256": model_hash(p)}
    return out


# --- verbs ---------------------------------------------------------------------


def cmd_validate(args) -> tuple[dict, int]:
    p = load_model(args.model, args.m)
    rep = validate(p)
    out = _header("validate", p)
    out["validation"] = {name: v for name, v in rep.items()}
    return out, EXIT_OK if rep.all_ok else EXIT_FAIL


def cmd_cohomology(args) -> tuple[dict, int]:
    p = load_model(args.model, args.m)
    if args.bigraded and p.J is None:
        raise CliFailure("--bigraded needs a complex structure J", EXIT_FAIL)
    if (args.bigraded or args.harmonic) and p.metric is None:
        raise CliFailure("--harmonic/--bigraded need a metric", EXIT_FAIL)
    res = cohomology(p, bigraded=args.bigraded, harmonic=args.harmonic)
    out = _header("cohomology", p)
    out["dims"] = list(res.dims)
    out["euler_characteristic"] = res.euler_characteristic
    if res.harmonic is not None:
        out["harmonic"] = {str(k): v for k, v in res.harmonic.items()}
    if res.bigraded is not None:
        out["bigraded"] = res.bigraded
        out["dolbeault"] = res.dolbeault
    code = EXIT_OK
    if args.kunneth:
        if args.kunneth not in presets.RING_PRESETS:
            raise CliFailure(f"unknown ring {args.kunneth!r}", EXIT_MALFORMED)
        k = cons.kunneth_dims(p, presets.RING_PRESETS[args.kunneth]())
        out["kunneth"] = {"ring": args.kunneth, "dims": list(k.dims), "hard_lefschetz": k.hard_lefschetz, "hl": k.hl}
        if k.hl and not k.hard_lefschetz:
            code = EXIT_FAIL
    return out, code


def cmd_theorems(args) -> tuple[dict, int]:
    p = load_model(args.model, args.m)
    sel = {
        "hard_lefschetz": args.hard_lefschetz or args.all,
        "ddstar": args.ddstar or args.all,
        "identities": args.identities or args.all,
        "pairing": args.pairing or args.all,
    }
    if not any(sel.values()):
        sel = dict.fromkeys(sel, True)
        args.all = True
    if p.omega is None:
        raise CliFailure("theorem checks need a symplectic form omega", EXIT_FAIL)
    out = _header("theorems", p)
    ok = True
    if sel["hard_lefschetz"]:
        hl = hard_lefschetz_check(p)
        out["hard_lefschetz"] = {"ok": hl.ok, "m": hl.m, "entries": hl.entries}
        ok &= hl.ok
    if sel["ddstar"]:
        dd = ddstar_lemma_check(p)
        out["ddstar"] = {"ok": dd.ok, "entries": dd.entries}
        ok &= dd.ok
        sh = symplectic_harmonic_check(p)
        out["symplectic_harmonic"] = sh
        ok &= sh.verdict.ok
    if sel["identities"]:
        missing = [n for n in ("metric", "J") if getattr(p, n) is None]
        if missing:
            out["identities"] = {"ok": False, "missing": missing}
            ok = False
        else:
            ids = kahler_identity_suite(p)
            out["identities"] = {"ok": ids.ok, "results": ids.results, "notes": ids.notes}
            ok &= ids.ok
    if sel["pairing"]:
        if p.eta is None:
            out["pairing"] = {"ok": False, "missing": ["eta"]}
            ok = False
        else:
            try:
                pr = intersection_pairing(p)
                be = betti_evenness_check(p)
                out["pairing"] = {"entries": pr.entries}
                out["betti_evenness"] = {
                    "all_even": be.all_even,
                    "consistent": be.consistent,
                    "odd_dims": be.odd_dims,
                    "pairing_nondegenerate": be.pairing_nondegenerate,
                    "contrapositive": be.contrapositive,
                }
                ok &= be.all_even
            except ModelError as exc:
                out["pairing"] = {"ok": False, "error": str(exc), "witness": exc.witness}
                ok = False
    if args.all:
        try:
            eq = equivalence_theorem_check(p)
            out["equivalence"] = {
                "hard_lefschetz": eq.hard_lefschetz,
                "ddstar": eq.ddstar,
                "symplectic_harmonic": eq.symplectic_harmonic,
                "consistent": eq.consistent,
            }
        except ConsistencyError as exc:
            out["equivalence"] = {"consistent": False, "error": str(exc)}
            ok = False
    return out, EXIT_OK if ok else EXIT_FAIL


def cmd_bgeometry(args) -> tuple[dict, int]:
    ref = args.spec
    if ref in presets.BSPEC_PRESETS:
        spec = presets.BSPEC_PRESETS[ref]()
    elif os.path.exists(ref):
        with open(ref, encoding="utf-8") as fh:
            spec = parse_bspec(fh.read())
    else:
        raise CliFailure(f"no such b-manifold spec or preset: {ref!r}", EXIT_MALFORMED)
    m = args.m
    if m is None:
        n = len(cons.mazzeo_melrose(spec)) - 1
        m = n // 2
    if m < 0:
        raise CliFailure("--m must be nonnegative", EXIT_MALFORMED)
    rep = cons.b_hard_lefschetz_obstruction(spec, m)
    out = _header("bgeometry")
    out["spec"] = {"name": spec.name, "bM": list(spec.bM), "bZ": list(spec.bZ)}
    out["dims"] = list(rep.dims)
    out["m"] = m
    out["hard_lefschetz"] = {"verdict": rep.verdict, "entries": rep.entries}
    return out, EXIT_FAIL if rep.verdict == "impossible" else EXIT_OK


def cmd_list_presets(args) -> tuple[dict, int]:
    out = _header("list-presets")
    out["models"] = {k: presets.DESCRIPTIONS[k] for k in presets.MODEL_PRESETS}
    out["bgeometry"] = {k: presets.DESCRIPTIONS[k] for k in presets.BSPEC_PRESETS}
    out["rings"] = {k: presets.DESCRIPTIONS[k] for k in presets.RING_PRESETS}
    return out, EXIT_OK


# --- output --------------------------------------------------------------------


def render_table(obj: Any, indent: int = 0) -> str:
    """Indented key/value listing of a JSON-ready report."""
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}- [{i}]")
                lines.append(render_table(v, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(v)}")
    else:
        lines.append(f"{pad}{_inline(obj)}")
    return "\n".join(lines)


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)
    return False


def _inline(v) -> str:
    if isinstance(v, list):
        return "(" + ", ".join(_inline(x) for x in v) + ")"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kahler-algebroid", description="Exact checks for Kähler Lie algebroid models.")
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(sp):
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (default)")
        fmt.add_argument("--table", dest="fmt", action="store_const", const="table", help="human-readable listing")
        sp.add_argument("--timing", action="store_true", help="add wall-clock runtime (breaks byte-identical output)")
        sp.set_defaults(fmt="json")

    sp = sub.add_parser("validate", help="axiom checks of a model")
    sp.add_argument("model", help="model file or preset name")
    sp.add_argument("--m", type=int, help="half-rank for the abelian-2m preset")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("cohomology", help="cohomology dimensions")
    sp.add_argument("model")
    sp.add_argument("--m", type=int)
    sp.add_argument("--bigraded", action="store_true", help="(p,q) tables")
    sp.add_argument("--harmonic", action="store_true", help="harmonic bases")
    sp.add_argument("--kunneth", metavar="RING", help="Künneth with a preset ring, e.g. cp1-ring")
    common(sp)
    sp.set_defaults(func=cmd_cohomology)

    sp = sub.add_parser("theorems", help="Hard Lefschetz, dd*-lemma, identities, pairing")
    sp.add_argument("model")
    sp.add_argument("--m", type=int)
    sp.add_argument("--hard-lefschetz", action="store_true")
    sp.add_argument("--ddstar", action="store_true")
    sp.add_argument("--identities", action="store_true")
    sp.add_argument("--pairing", action="store_true")
    sp.add_argument("--all", action="store_true", help="everything plus the equivalence check")
    common(sp)
    sp.set_defaults(func=cmd_theorems)

    sp = sub.add_parser("bgeometry", help="b-cohomology dimensions and the Lefschetz obstruction")
    sp.add_argument("spec", help="spec file {\"bM\": [...], \"bZ\": [...]} or preset name")
    sp.add_argument("--m", type=int, help="half-dimension (default: from the dimension vector)")
    common(sp)
    sp.set_defaults(func=cmd_bgeometry)

    sp = sub.add_parser("list-presets", help="built-in models, specs and rings")
    common(sp)
    sp.set_defaults(func=cmd_list_presets)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    start = time.perf_counter()
    try:
        report, code = args.func(args)
    except CliFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.hint:
            print(f"hint: {exc.hint}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except IncompleteModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness: {jsonable(exc.witness)}", file=sys.stderr)
        return EXIT_FAIL
    report["exit_code"] = code
    if args.timing:
        report["runtime_seconds"] = round(time.perf_counter() - start, 6)
    if args.fmt == "table":
        sys.stdout.write(render_table(jsonable(report)) + "\n")
    else:
        sys.stdout.write(canonical_json(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
