"""Command-line front end: check setup documents, emit families, run sweeps.

Document format (JSON): {"dim": int, "epsilon": [+-1, ...],
"brackets": [{"i": int, "j": int, "coeffs": ["p/q", ...]}, ...] with i < j and
each pair at most once (the mirror rows are implied), "vertical": [ints],
"horizontal": [i, j], optional "meta": object}.  Rationals travel as strings
so no floating point ever enters the exact pipeline.

Exit codes: 0 ok; 1 sweep found disagreements; 2 Jacobi failure; 3 parse /
unknown-family error; 4 family constraint violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .algebra import (
    ConstraintError,
    FoliationSetup,
    MetricFrame,
    StructureError,
    StructureTensor,
    as_scalar,
    format_scalar,
    jacobi_residual,
)
from .families import (
    FamilyId,
    FamilySpec,
    build_family,
    closed_form_theta,
    family_basis_names,
    family_dimension,
)
from .geometry import classify
from .verifier import SweepConfig, find_conjecture_counterexamples, run_sweep

EXIT_OK = 0
EXIT_DISAGREEMENT = 1
EXIT_JACOBI = 2
EXIT_PARSE = 3
EXIT_CONSTRAINT = 4


class ParseError(ValueError):
    """Document or argument parsing failure; `field` names the offending field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _require(doc: dict, field: str, kind, what: str):
    if field not in doc:
        raise ParseError(field, "missing required field")
    value = doc[field]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(field, f"expected {what}")
    return value


def _parse_coeff(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(where, f"floating literal {value!r} not allowed; use exact 'p/q' strings")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return as_scalar(value)
        except StructureError as exc:
            raise ParseError(where, str(exc)) from None
    raise ParseError(where, f"expected rational string, got {type(value).__name__}")


def document_to_setup(doc: dict) -> tuple[FoliationSetup, dict | None]:
    """Validate and build a foliation setup from a parsed document."""
    if not isinstance(doc, dict):
        raise ParseError("document", "top level must be an object")
    dim = _require(doc, "dim", int, "an integer")
    if dim < 1:
        raise ParseError("dim", "must be positive")
    epsilon = _require(doc, "epsilon", list, "a list of +-1")
    brackets = _require(doc, "brackets", list, "a list of bracket rows")
    vertical = _require(doc, "vertical", list, "a list of indices")
    horizontal = _require(doc, "horizontal", list, "a pair of indices")

    for field, values in (("epsilon", epsilon), ("vertical", vertical), ("horizontal", horizontal)):
        for v in values:
            if not isinstance(v, int) or isinstance(v, bool):
                raise ParseError(field, f"entries must be integers, got {v!r}")

    rows: dict[tuple[int, int], list[Fraction]] = {}
    for pos, entry in enumerate(brackets):
        where = f"brackets[{pos}]"
        if not isinstance(entry, dict):
            raise ParseError(where, "expected an object with i, j, coeffs")
        i = _require(entry, "i", int, "an integer")
        j = _require(entry, "j", int, "an integer")
        coeffs = _require(entry, "coeffs", list, "a list of rationals")
        if not (0 <= i < j < dim):
            raise ParseError(where, f"need 0 <= i < j < dim, got i={i}, j={j}")
        if (i, j) in rows:
            raise ParseError(where, f"pair ({i}, {j}) listed more than once")
        if len(coeffs) != dim:
            raise ParseError(f"{where}.coeffs", f"expected {dim} entries, got {len(coeffs)}")
        rows[(i, j)] = [_parse_coeff(v, f"{where}.coeffs[{k}]") for k, v in enumerate(coeffs)]

    meta = doc.get("meta")
    if meta is not None and not isinstance(meta, dict):
        raise ParseError("meta", "must be an object when present")
    try:
        tensor = StructureTensor.from_rows(dim, rows)
        frame = MetricFrame(tuple(epsilon))
        setup = FoliationSetup(tensor, frame, tuple(vertical), tuple(horizontal))
    except StructureError as exc:
        raise ParseError("document", str(exc)) from None
    return setup, meta


def setup_to_document(setup: FoliationSetup, meta: dict | None = None) -> dict:
    dim = setup.dim
    brackets = []
    for i in range(dim):
        for j in range(i + 1, dim):
            row = setup.tensor.row(i, j)
            if any(row):
                brackets.append(
                    {"i": i, "j": j, "coeffs": [format_scalar(v) for v in row]}
                )
    doc = {
        "dim": dim,
        "epsilon": list(setup.frame.epsilon),
        "brackets": brackets,
        "vertical": list(setup.vertical),
        "horizontal": list(setup.horizontal),
    }
    if meta:
        doc["meta"] = meta
    return doc


def load_document(path: str) -> tuple[FoliationSetup, dict | None]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise ParseError("file", str(exc)) from None
    except json.JSONDecodeError as exc:
        raise ParseError("file", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return document_to_setup(doc)


def _basis_names(setup: FoliationSetup, meta: dict | None) -> list[str]:
    if meta and isinstance(meta.get("basis"), list) and len(meta["basis"]) == setup.dim:
        return [str(n) for n in meta["basis"]]
    return [f"e{i}" for i in range(setup.dim)]


def format_vector(vec: Sequence[Fraction], names: Sequence[str]) -> str:
    terms = []
    for coeff, name in zip(vec, names):
        if not coeff:
            continue
        if coeff == 1:
            terms.append(f"+ {name}")
        elif coeff == -1:
            terms.append(f"- {name}")
        elif coeff > 0:
            terms.append(f"+ {format_scalar(coeff)} {name}")
        else:
            terms.append(f"- {format_scalar(-coeff)} {name}")
    if not terms:
        return "0"
    head = terms[0][2:] if terms[0].startswith("+ ") else "-" + terms[0][2:]
    return " ".join([head] + terms[1:])


def _yesno(flag: bool) -> str:
    return "yes" if flag else "no"


def cmd_check(args) -> int:
    try:
        setup, meta = load_document(args.path)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    names = _basis_names(setup, meta)
    report = jacobi_residual(setup.tensor)
    if not report.is_zero:
        i, j, k = report.worst_triple()
        print(
            f"jacobi: FAIL (max residual {format_scalar(report.max_abs)} "
            f"at triple ({names[i]}, {names[j]}, {names[k]}))"
        )
        return EXIT_JACOBI
    print("jacobi: ok")
    result = classify(setup, require_jacobi=False)
    print(f"conformal: {_yesno(result.conformal)}")
    print(f"semi-riemannian: {_yesno(result.semi_riemannian)}")
    print(f"minimal: {_yesno(result.minimal)}")
    print(f"totally geodesic: {_yesno(result.totally_geodesic)}")
    if not result.totally_geodesic:
        for (i, j), vec in result.totally_geodesic_witnesses:
            print(f"  B^V({names[i]}, {names[j]}) = {format_vector(vec, names)}")
    print(f"mean curvature: {format_vector(result.mean_curvature, names)}")
    print(f"conformal vector: {format_vector(result.conformal_vector, names)}")
    return EXIT_OK


def _parse_params(pairs: list[str]) -> dict[str, str]:
    params: dict[str, str] = {}
    for pair in pairs:
        if "=" not in pair:
            raise ParseError("--param", f"expected name=value, got {pair!r}")
        name, value = pair.split("=", 1)
        params[name.strip()] = value.strip()
    return params


def _parse_epsilon(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.replace("+", "").split(","))
    except ValueError:
        raise ParseError("--epsilon", f"expected comma-separated +-1 list, got {text!r}") from None
    return values


def cmd_family(args) -> int:
    try:
        family = FamilyId.parse(args.family)
        params = _parse_params(args.param or [])
        signature = _parse_epsilon(args.epsilon) if args.epsilon else None
        spec = FamilySpec.create(family, params, signature)
    except (ParseError, StructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        setup = build_family(spec)
    except ConstraintError as exc:
        print(f"constraint violation: {exc} [{exc.relation}]", file=sys.stderr)
        return EXIT_CONSTRAINT
    theta = closed_form_theta(spec)
    meta = {
        "family": family.value,
        "basis": list(family_basis_names(family)),
        "parameters": {k: format_scalar(v) for k, v in spec.params.items()},
        "theta": {f"theta{i + 1}": format_scalar(t) for i, t in enumerate(theta)},
    }
    text = json.dumps(setup_to_document(setup, meta), indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _signature_config(args, family: FamilyId) -> SweepConfig:
    mode = "all"
    fixed: tuple[tuple[int, ...], ...] = ()
    if getattr(args, "signatures", None):
        chunks = args.signatures
        if chunks == ["all"]:
            mode = "all"
        elif chunks == ["riemannian-only"]:
            mode = "riemannian-only"
        else:
            mode = "fixed"
            fixed = tuple(_parse_epsilon(chunk) for chunk in chunks)
    if getattr(args, "riemannian", False):
        mode = "riemannian-only"
        fixed = ()
    return SweepConfig(
        family=family,
        samples=args.samples,
        seed=args.seed,
        parameter_range=args.range,
        signature_mode=mode,
        fixed_signatures=fixed,
    )


def cmd_sweep(args) -> int:
    try:
        family = FamilyId.parse(args.family)
        config = _signature_config(args, family)
    except (ParseError, StructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report = run_sweep(config)
    total = report.total_cases
    print(f"family: {family.value}")
    print(f"samples: {config.samples}")
    print(f"signatures per draw: {report.signatures_per_draw}")
    print(f"total cases: {total}")
    print(f"disagreements: {len(report.disagreements)}")
    print("flag counts:")
    labels = (
        ("conformal", "conformal"),
        ("semiRiemannian", "semi-riemannian"),
        ("minimal", "minimal"),
        ("totallyGeodesic", "totally geodesic"),
    )
    for key, label in labels:
        print(f"  {label}: {report.flag_counts[key]}/{total}")
    if family in (FamilyId.SU2xSO2, FamilyId.SL2RxSO2):
        verdict = "confirmed" if not report.disagreements else "VIOLATED"
        print(f"minimal iff t14 = t24 = 0: {verdict}")
        print(f"resampled draws: {report.resampled_draws}")
    else:
        print(
            "totally-geodesic conjecture counterexamples: "
            f"{report.tg_counterexample_count}"
        )
        print(f"minimality counterexamples: {report.minimality_counterexample_count}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            handle.write(report.to_json())
        print(f"report written to {args.json}")
    return EXIT_DISAGREEMENT if report.disagreements else EXIT_OK


def cmd_counterexample(args) -> int:
    try:
        family = FamilyId.parse(args.family)
        config = _signature_config(args, family)
        hits = find_conjecture_counterexamples(config)
    except (ParseError, StructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if not hits:
        scope = "in Riemannian signature " if config.signature_mode == "riemannian-only" else ""
        print(
            f"none (no conformal instance with a totally-geodesic violation found "
            f"{scope}for this family; {config.samples} samples, seed {config.seed})"
        )
        return EXIT_OK
    shown = hits[: args.max_print]
    print(f"found {len(hits)} counterexample case(s); showing {len(shown)}")
    for pos, entry in enumerate(shown, start=1):
        print(f"counterexample {pos}:")
        print(f"  family: {entry['family']}")
        print(f"  signature: {entry['signature']}")
        nonzero = {k: v for k, v in entry["params"].items() if v != "0"}
        if nonzero:
            rendered = ", ".join(f"{k} = {v}" for k, v in nonzero.items())
            print(f"  nonzero parameters: {rendered} (all others 0)")
        else:
            print("  nonzero parameters: none")
        print(f"  violated condition: {entry['violatedCondition']} != 0")
        if "witnessPair" in entry:
            names = family_basis_names(family)
            vec = tuple(as_scalar(v) for v in entry["witnessValue"])
            pair = entry["witnessPair"]
            print(f"  witness: B^V({pair[0]}, {pair[1]}) = {format_vector(vec, names)}")
        print(f"  compact-type vertical: {_yesno(entry['compactType'])}")
        print(f"  still minimal: {_yesno(entry['minimal'])}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liefol",
        description=(
            "Classify left-invariant codimension-two foliations on semi-Riemannian "
            "Lie groups with exact rational arithmetic."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="classify a setup document")
    p_check.add_argument("path", help="setup document (JSON)")
    p_check.set_defaults(func=cmd_check)

    p_family = sub.add_parser("family", help="emit a classified family member as a document")
    p_family.add_argument("family", help="family id (su2, sl2r, su2xsu2, su2xsl2r, su2xso2, sl2rxso2)")
    p_family.add_argument("--param", nargs="*", action="extend", default=[], metavar="NAME=VALUE")
    p_family.add_argument("--epsilon", help="comma-separated causal characters, e.g. 1,-1,1,1,1")
    p_family.add_argument("--out", help="output path (stdout if omitted)")
    p_family.set_defaults(func=cmd_family)

    p_sweep = sub.add_parser("sweep", help="randomized classification sweep with closed-form cross-check")
    p_sweep.add_argument("family")
    p_sweep.add_argument("--samples", type=int, default=100)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--range", type=int, default=10, help="bound for rational numerators/denominators")
    p_sweep.add_argument(
        "--signatures",
        nargs="*",
        action="extend",
        default=[],
        help="'all', 'riemannian-only', or one or more comma-separated epsilon lists",
    )
    p_sweep.add_argument("--json", help="write the machine-readable report here")
    p_sweep.set_defaults(func=cmd_sweep)

    p_ce = sub.add_parser("counterexample", help="search for conformal, non-totally-geodesic instances")
    p_ce.add_argument("family")
    p_ce.add_argument("--samples", type=int, default=200)
    p_ce.add_argument("--seed", type=int, default=0)
    p_ce.add_argument("--range", type=int, default=10)
    p_ce.add_argument(
        "--signatures",
        nargs="*",
        action="extend",
        default=[],
        help="'all', 'riemannian-only', or one or more comma-separated epsilon lists",
    )
    p_ce.add_argument("--riemannian", action="store_true", help="restrict to the all-positive signature")
    p_ce.add_argument("--max-print", type=int, default=5)
    p_ce.set_defaults(func=cmd_counterexample)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
