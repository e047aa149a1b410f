"""Command-line interface.

Verbs: check, anomalies, cohomology, catalog list, catalog show, export.
Exit codes: 0 = all requested checks pass, 1 = an axiom/verdict fails,
2 = parse or usage error, 3 = internal error. Output is deterministic;
--format machine emits one JSON document with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, TextIO

from . import __version__
from .catalog import CatalogEntry, catalog_get, catalog_names
from .checkers import (
    PROFILES,
    AxiomReport,
    check_all_profiles,
    check_profile,
)
from .exactmath import Poly, PolyParseError, parse_poly
from .fileformat import (
    FormatError,
    ParsedDocument,
    parse_document,
    serialize_document,
    serialize_kvalgebra,
    serialize_structure,
)
from .funmodel import Section
from .kvfin import (
    COEFF_SELF,
    COEFF_TRIVIAL,
    clan_classify,
    cohomology_summary,
    exactness_witness,
    kv_defect_fin,
)
from .structures import (
    courant_T,
    jacobiator,
    kv_anomaly,
    leibniz_anomaly,
    pairing_coboundary,
)


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of calling sys.exit, so errors map to
    exit code 2 uniformly."""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="algebroid", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_input(p):
        p.add_argument("file", nargs="?", help="structure-definition file")
        p.add_argument("--catalog", help="built-in structure name")
        p.add_argument(
            "--format", choices=("text", "machine"), default="text",
            help="output format (machine = JSON, stable key order)",
        )
        p.add_argument(
            "--seed", type=int, default=42,
            help="seed for randomized property sweeps; exhaustive verdicts "
            "never depend on it",
        )

    p = sub.add_parser("check", help="run axiom-profile checks")
    add_input(p)
    p.add_argument(
        "--profile",
        choices=PROFILES + ("clan",),
        help="profile to check; default runs all applicable profiles",
    )
    p.add_argument(
        "--accept", action="append", default=[],
        help="extra clan verdicts treated as passing (e.g. pseudo-clan)",
    )

    p = sub.add_parser("anomalies", help="evaluate anomaly tensors on inputs")
    add_input(p)
    p.add_argument(
        "sections", nargs="+",
        help="section inputs as comma-separated component polynomials",
    )
    p.add_argument(
        "--function", default="1",
        help="function input for the Leibniz anomaly (default 1)",
    )

    p = sub.add_parser("cohomology", help="finite KV cohomology dimensions")
    add_input(p)
    p.add_argument("--degree", type=int, default=0)
    p.add_argument(
        "--coefficients", choices=(COEFF_SELF, COEFF_TRIVIAL), default=COEFF_SELF
    )
    p.add_argument(
        "--exactness", action="store_true",
        help="solve beta = dTheta for the entry's form; prints the "
        "functional or NON-EXACT",
    )

    p = sub.add_parser("catalog", help="list or show built-in structures")
    csub = p.add_subparsers(dest="catalog_verb", required=True)
    pl = csub.add_parser("list", help="list entry names")
    pl.add_argument("--format", choices=("text", "machine"), default="text")
    ps = csub.add_parser("show", help="show one entry")
    ps.add_argument("name")
    ps.add_argument("--format", choices=("text", "machine"), default="text")

    p = sub.add_parser("export", help="print the canonical file serialization")
    add_input(p)
    return parser


# ---------------------------------------------------------------------------
# Input loading.
# ---------------------------------------------------------------------------


def _load(args) -> ParsedDocument:
    if getattr(args, "catalog", None) and getattr(args, "file", None):
        raise UsageError("give either a file or --catalog, not both")
    if getattr(args, "catalog", None):
        try:
            entry = catalog_get(args.catalog)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        if entry.kind == "function-model":
            return ParsedDocument("structure", entry.name, structure=entry.structure)
        return ParsedDocument(
            "kvalgebra", entry.name, algebra=entry.algebra, form=entry.form
        )
    if getattr(args, "file", None):
        with open(args.file, "r", encoding="utf-8") as fh:
            return parse_document(fh.read())
    raise UsageError("no input: give a file or --catalog NAME")


# ---------------------------------------------------------------------------
# Serialization of reports.
# ---------------------------------------------------------------------------


def _witness_dict(witness) -> Optional[dict]:
    if witness is None:
        return None
    return {
        "inputs": [str(v) for v in witness.inputs],
        "residual": str(witness.residual),
    }


def _report_dict(report: AxiomReport) -> dict:
    return {
        "profile": report.profile,
        "passed": report.passed,
        "axioms": [
            {
                "label": e.label,
                "passed": e.passed,
                "witness": _witness_dict(e.witness),
                "note": e.note,
            }
            for e in report.entries
        ],
    }


def _emit(args, out: TextIO, payload: dict, text: str):
    if args.format == "machine":
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        out.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# Verbs.
# ---------------------------------------------------------------------------


def _clan_text(report) -> str:
    lines = [f"classification: {report.verdict}"]
    for key, value in report.sub_verdicts.items():
        lines.append(f"  {key}: {'pass' if value else 'FAIL'}")
    if report.kv_witness is not None:
        i, j, k, defect = report.kv_witness
        lines.append(f"  kv witness: (e{i+1},e{j+1},e{k+1}) defect {_vec_str(defect)}")
    if report.invariance_witness is not None:
        i, j, k, res = report.invariance_witness
        lines.append(f"  invariance witness: (e{i+1},e{j+1},e{k+1}) residual {res}")
    return "\n".join(lines)


def _vec_str(vec) -> str:
    return "(" + ", ".join(str(v) for v in vec) + ")"


def _cmd_check(args, out: TextIO) -> int:
    doc = _load(args)
    if doc.kind == "kvalgebra":
        return _cmd_check_finite(args, doc, out)
    S = doc.structure
    if args.profile == "clan":
        raise UsageError("profile 'clan' applies to finite KV algebras")
    if args.profile:
        report = check_profile(S, args.profile)
        _emit(args, out, _report_dict(report), str(report))
        return 0 if report.passed else 1
    # capability matrix over all profiles
    matrix = check_all_profiles(S)
    payload, lines = {}, [f"capability matrix for {doc.name or 'input structure'}:"]
    any_pass = False
    for profile in PROFILES:
        result = matrix[profile]
        if isinstance(result, str):
            payload[profile] = {"applicable": False, "reason": result}
            lines.append(f"  {profile}: not applicable ({result})")
        else:
            payload[profile] = {"applicable": True, **_report_dict(result)}
            any_pass = any_pass or result.passed
            verdict = "PASS" if result.passed else (
                "FAIL at " + ", ".join(result.failing_labels())
            )
            lines.append(f"  {profile}: {verdict}")
    _emit(args, out, payload, "\n".join(lines))
    return 0 if any_pass else 1


def _cmd_check_finite(args, doc: ParsedDocument, out: TextIO) -> int:
    A = doc.algebra
    if args.profile in PROFILES:
        raise UsageError(
            f"profile {args.profile!r} applies to function-model structures; "
            "finite KV algebras support 'kv' via the clan sub-verdicts or "
            "--profile clan"
        )
    if doc.form is None:
        witness = kv_defect_fin(A)
        passed = witness is None
        text = "kv: pass" if passed else (
            f"kv: FAIL at (e{witness[0]+1},e{witness[1]+1},e{witness[2]+1}) "
            f"defect {_vec_str(witness[3])}"
        )
        _emit(args, out, {"kv": passed}, text)
        return 0 if passed else 1
    report = clan_classify(A, doc.form)
    payload = {"verdict": report.verdict, "sub_verdicts": report.sub_verdicts}
    _emit(args, out, payload, _clan_text(report))
    accepted = {"clan", *args.accept}
    return 0 if report.verdict in accepted else 1


def _parse_section(text: str, rank: int, base_dim: int) -> Section:
    parts = text.split(",")
    if len(parts) != rank:
        raise UsageError(
            f"section {text!r} has {len(parts)} components, expected {rank}"
        )
    return Section([parse_poly(p, base_dim) for p in parts])


def _cmd_anomalies(args, out: TextIO) -> int:
    if args.catalog and args.file:
        # with --catalog, every positional is a section input
        args.sections = [args.file] + args.sections
        args.file = None
    doc = _load(args)
    if doc.kind != "structure":
        raise UsageError("anomaly evaluation applies to function-model structures")
    S = doc.structure
    if len(args.sections) < 3:
        raise UsageError("need three section inputs (s, s', s'')")
    s, sp, spp = (
        _parse_section(t, S.rank, S.base_dim) for t in args.sections[:3]
    )
    f = parse_poly(args.function, S.base_dim)
    results = {}
    if S.mult.skew:
        results["J"] = str(jacobiator(S, s, sp, spp))
    results["KV"] = str(kv_anomaly(S, s, sp, spp))
    results["L"] = str(leibniz_anomaly(S, s, f, sp))
    if S.pairing is not None:
        if S.mult.skew:
            results["T"] = str(courant_T(S, s, sp, spp))
        results["delta_pairing"] = str(pairing_coboundary(S, s, sp, spp))
    text = "\n".join(f"{key} = {results[key]}" for key in sorted(results))
    _emit(args, out, results, text)
    return 0


def _cmd_cohomology(args, out: TextIO) -> int:
    doc = _load(args)
    if doc.kind != "kvalgebra":
        raise UsageError(
            "cohomology dimensions are computed for finite KV algebras only; "
            "the function-model complex is infinite-dimensional"
        )
    A = doc.algebra
    if args.exactness:
        if doc.form is None:
            raise UsageError("--exactness needs a [form] section or catalog form")
        try:
            theta = exactness_witness(A, doc.form)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if theta is None:
            _emit(args, out, {"exact": False}, "NON-EXACT")
            return 1
        payload = {"exact": True, "theta": [str(v) for v in theta]}
        _emit(args, out, payload, "EXACT: Theta = " + _vec_str(theta))
        return 0
    summary = cohomology_summary(A, args.coefficients, args.degree)
    text = (
        f"degree {args.degree}, coefficients {args.coefficients}: "
        f"dim C = {summary['dim_cochains']}, dim ker = {summary['dim_kernel']}, "
        f"dim im = {summary['dim_image']}, dim H = {summary['dim_h']}"
    )
    _emit(args, out, summary, text)
    return 0


def _cmd_catalog(args, out: TextIO) -> int:
    if args.catalog_verb == "list":
        names = catalog_names()
        _emit(args, out, {"entries": names}, "\n".join(names))
        return 0
    try:
        entry = catalog_get(args.name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    serialized = _serialize_entry(entry)
    payload = {
        "name": entry.name,
        "kind": entry.kind,
        "note": entry.note,
        "definition": serialized,
    }
    text = f"name: {entry.name}\nkind: {entry.kind}\nnote: {entry.note}\n\n{serialized}"
    _emit(args, out, payload, text)
    return 0


def _serialize_entry(entry: CatalogEntry) -> str:
    if entry.kind == "function-model":
        return serialize_structure(entry.structure, entry.name)
    return serialize_kvalgebra(entry.algebra, entry.form, entry.name)


def _cmd_export(args, out: TextIO) -> int:
    doc = _load(args)
    out.write(serialize_document(doc))
    return 0


_VERBS = {
    "check": _cmd_check,
    "anomalies": _cmd_anomalies,
    "cohomology": _cmd_cohomology,
    "catalog": _cmd_catalog,
    "export": _cmd_export,
}


def run(argv, out: TextIO, err: TextIO) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _VERBS[args.verb](args, out)
    except (UsageError, FormatError, PolyParseError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except Exception as exc:  # noqa: BLE001 - exit-code contract
        err.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return 3


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv, sys.stdout, sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
