"""Command-line front end.

Every invocation prints one JSON report (or a text summary with
``--format text``) on stdout and exits with 0 (pass), 1 (check failed) or
2 (input error).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .jacmod import (
    HypothesisError,
    KempfNotFound,
    check_intertwining_phi,
    fuzz_harness,
    jacobian_subspace,
    kempf_witness,
    yau_check,
)
from .modanalysis import DecompositionAuditError, NotInvariantError, decompose, invariants
from .polyring import (
    DIM_CAP_ENV,
    DimensionCapError,
    PolyParseError,
    dimension_cap,
    format_rational,
    monomial_basis,
    parse_poly,
    parse_rational,
)
from .qlinalg import QMatrix, Subspace
from .repcore import ROLES, RepSpec, direct_sum, make_rep, sl2_irrep, sln_standard, validate

SCHEMA_VERSION = 1

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad command-line input; reported with exit code 2."""


# -- RepSpecFile ---------------------------------------------------------------


def rep_to_json(rep: RepSpec) -> dict:
    return {
        "n": rep.n,
        "generators": [
            {
                "name": g.name,
                "role": g.role,
                "matrix": [[format_rational(x) for x in row] for row in g.matrix.entries],
            }
            for g in rep.generators
        ],
        "sl2_triples": [list(t) for t in rep.sl2_triples],
    }


def _entry(value, where: str):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise InputError(f"{where}: matrix entries must be rational strings, got {value!r}")
    try:
        return parse_rational(str(value))
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def rep_from_json(data) -> RepSpec:
    if not isinstance(data, dict):
        raise InputError("rep file must hold a JSON object")
    n = data.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError("rep file: 'n' must be a positive integer")
    gens = data.get("generators")
    if not isinstance(gens, list) or not gens:
        raise InputError("rep file: 'generators' must be a non-empty list")
    parsed = []
    for idx, g in enumerate(gens):
        if not isinstance(g, dict):
            raise InputError(f"generator {idx}: expected an object")
        name, role, matrix = g.get("name"), g.get("role"), g.get("matrix")
        if not isinstance(name, str) or not name:
            raise InputError(f"generator {idx}: missing name")
        if role not in ROLES:
            raise InputError(f"generator {name}: role must be one of {', '.join(ROLES)}")
        if (not isinstance(matrix, list) or len(matrix) != n
                or any(not isinstance(r, list) or len(r) != n for r in matrix)):
            raise InputError(f"generator {name}: matrix must be {n}x{n}")
        rows = [[_entry(x, f"generator {name}[{i}][{j}]") for j, x in enumerate(r)]
                for i, r in enumerate(matrix)]
        parsed.append((name, role, QMatrix.from_rows(rows, cols=n)))
    triples = data.get("sl2_triples", [])
    if not isinstance(triples, list) or any(
            not isinstance(t, list) or len(t) != 3 or not all(isinstance(x, str) for x in t)
            for t in triples):
        raise InputError("rep file: 'sl2_triples' must be a list of name triples")
    rep = make_rep(n, parsed, triples)
    problems = validate(rep)
    if problems:
        raise InputError("invalid representation: " + "; ".join(map(str, problems)))
    return rep


def load_rep(args) -> tuple[RepSpec, dict]:
    chosen = [x for x in (args.sl2_rep, args.sln, args.rep) if x is not None]
    if len(chosen) != 1:
        raise InputError("give exactly one of --sl2-rep, --sln, --rep")
    if args.sl2_rep is not None:
        try:
            ms = [int(x) for x in args.sl2_rep.split(",")]
        except ValueError:
            raise InputError(f"--sl2-rep expects comma-separated integers, got {args.sl2_rep!r}") from None
        if any(m < 0 for m in ms):
            raise InputError("--sl2-rep weights must be non-negative")
        return direct_sum([sl2_irrep(m) for m in ms]), {"sl2_rep": ms}
    if args.sln is not None:
        if args.sln < 2:
            raise InputError("--sln needs k >= 2")
        return sln_standard(args.sln), {"sln": args.sln}
    path = Path(args.rep)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    return rep_from_json(data), {"rep": str(path)}


def load_poly(spec: str, n: int):
    if spec.startswith("@"):
        path = Path(spec[1:])
        try:
            spec = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_poly(spec.strip(), n)
    except PolyParseError as exc:
        raise InputError(str(exc)) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _weights(ws) -> list:
    return [list(w) for w in sorted(ws, reverse=True)]


def _decomposition(report) -> dict:
    return {
        "total_dim": report.total_dim,
        "highest_weight_set": _weights(report.highest_weight_set),
        "summands": [
            {"highest_weight": list(s.highest_weight), "generated_dim": s.generated_dim,
             "hwv": [format_rational(x) for x in s.hwv]}
            for s in report.summands
        ],
    }


# -- commands -----------------------------------------------------------------
# each returns (exit code, result dict)


def cmd_verify_hom(args, rep: RepSpec, inputs: dict):
    if args.degree < 0:
        raise InputError("--degree must be non-negative")
    inputs["degree"] = args.degree
    monomial_basis(rep.n, args.degree)
    res = check_intertwining_phi(rep, args.degree)
    result = {"passed": res.passed, "checked": res.checked}
    if res.counterexample is not None:
        result["counterexample"] = res.counterexample.as_dict()
    return (EXIT_PASS if res.passed else EXIT_FAIL), result


def cmd_invariants(args, rep: RepSpec, inputs: dict):
    if args.degree < 0:
        raise InputError("--degree must be non-negative")
    inputs["degree"] = args.degree
    S = invariants(rep, args.degree)
    return EXIT_PASS, {"dim": S.dim, "basis": [str(p) for p in S.polys()]}


def cmd_yau(args, rep: RepSpec, inputs: dict):
    f = load_poly(args.poly, rep.n)
    inputs["poly"] = str(f)
    try:
        report = yau_check(rep, f)
    except KempfNotFound as exc:
        return EXIT_FAIL, {"kempf_not_found": str(exc)}
    result = report.as_dict()
    ok = report.subset_holds and report.quotient_hom
    return (EXIT_PASS if ok else EXIT_FAIL), result


def cmd_kempf(args, rep: RepSpec, inputs: dict):
    f = load_poly(args.poly, rep.n)
    inputs["poly"] = str(f)
    try:
        g = kempf_witness(rep, f, seed=args.seed)
    except KempfNotFound as exc:
        return EXIT_FAIL, {"found": False, "reason": str(exc)}
    return EXIT_PASS, {"found": True, "witness": str(g)}


def cmd_decompose(args, rep: RepSpec, inputs: dict):
    if (args.degree is None) == (args.subspace_from_jacobian is None):
        raise InputError("give exactly one of --degree, --subspace-from-jacobian")
    if args.degree is not None:
        if args.degree < 0:
            raise InputError("--degree must be non-negative")
        inputs["degree"] = args.degree
        S = Subspace.full(monomial_basis(rep.n, args.degree))
    else:
        f = load_poly(args.subspace_from_jacobian, rep.n)
        inputs["jacobian_of"] = str(f)
        S = jacobian_subspace(f)
    try:
        report = decompose(rep, S)
    except DecompositionAuditError as exc:
        return EXIT_FAIL, {"audit_failure": str(exc)}
    return EXIT_PASS, _decomposition(report)


def cmd_fuzz(args, rep, inputs: dict):
    if args.trials < 0 or args.max_m < 0 or args.max_d < 1:
        raise InputError("--trials and --max-m must be non-negative, --max-d at least 1")
    inputs.update(seed=args.seed, trials=args.trials, max_m=args.max_m, max_d=args.max_d,
                  inject_fault=args.inject_fault)
    summary = fuzz_harness(args.seed, args.trials, args.max_m, args.max_d,
                           inject_fault=args.inject_fault)
    return (EXIT_PASS if summary.all_passed else EXIT_FAIL), summary.as_dict()


def cmd_show_rep(args, rep: RepSpec, inputs: dict):
    return EXIT_PASS, rep_to_json(rep)


COMMANDS = {
    "verify-hom": (cmd_verify_hom, True),
    "invariants": (cmd_invariants, True),
    "yau": (cmd_yau, True),
    "kempf": (cmd_kempf, True),
    "decompose": (cmd_decompose, True),
    "fuzz": (cmd_fuzz, False),
    "show-rep": (cmd_show_rep, True),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="invjac", description="Exact checks on invariant Jacobians.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def rep_args(p):
        p.add_argument("--sl2-rep", metavar="M1,M2,...",
                       help="direct sum of sl2 irreducibles V(M1) + V(M2) + ...")
        p.add_argument("--sln", type=int, metavar="K", help="defining representation of sl_K")
        p.add_argument("--rep", metavar="FILE", help="RepSpecFile JSON")

    def common(p):
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("verify-hom", help="check that f (x) e_i -> df/dx_i intertwines on A_d (x) V")
    rep_args(p); common(p)
    p.add_argument("--degree", type=int, required=True)

    p = sub.add_parser("invariants", help="basis of the invariants in A_d")
    rep_args(p); common(p)
    p.add_argument("--degree", type=int, required=True)

    p = sub.add_parser("yau", help="highest weights of J(f) against those of A_1")
    rep_args(p); common(p)
    p.add_argument("--poly", required=True, help="polynomial, or @FILE")

    p = sub.add_parser("kempf", help="invariant g of the same degree with J(g) = J(f)")
    rep_args(p); common(p)
    p.add_argument("--poly", required=True, help="polynomial, or @FILE")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("decompose", help="highest weight decomposition of A_d or J(f)")
    rep_args(p); common(p)
    p.add_argument("--degree", type=int)
    p.add_argument("--subspace-from-jacobian", metavar="POLY")

    p = sub.add_parser("fuzz", help="seeded random end-to-end trials")
    common(p)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--max-m", type=int, default=3)
    p.add_argument("--max-d", type=int, default=4)
    p.add_argument("--inject-fault", action="store_true",
                   help="use a corrupted action on A (x) V (negative control)")

    p = sub.add_parser("show-rep", help="print the RepSpecFile for a representation")
    rep_args(p); common(p)
    return parser


def render_text(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']} (exit {report['exit_code']})"]
    for key, value in report.get("inputs", {}).items():
        lines.append(f"  input {key}: {value}")
    if "error" in report:
        lines.append(f"  error: {report['error']['message']}")
    for key, value in report.get("result", {}).items():
        if key == "trials":
            continue
        lines.append(f"  {key}: {json.dumps(value, ensure_ascii=False)}")
    return "\n".join(lines)


def _status(code: int) -> str:
    return {EXIT_PASS: "pass", EXIT_FAIL: "fail"}.get(code, "error")


def run(argv=None) -> tuple[int, dict]:
    """Execute a command; returns the exit code and the report dict."""
    start = time.perf_counter()
    report = {"schema_version": SCHEMA_VERSION, "command": None, "inputs": {}}
    args = None
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise InputError("missing command")
        report["command"] = args.command
        try:
            dimension_cap()
        except ValueError:
            raise InputError(f"{DIM_CAP_ENV} must be an integer") from None
        handler, needs_rep = COMMANDS[args.command]
        rep = None
        if needs_rep:
            rep, echo = load_rep(args)
            report["inputs"].update(echo)
        code, result = handler(args, rep, report["inputs"])
        report["result"] = result
    except (InputError, DimensionCapError, HypothesisError) as exc:
        code = EXIT_INPUT
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    except NotInvariantError as exc:
        code = EXIT_INPUT
        report["error"] = {"type": type(exc).__name__, "message": str(exc),
                           "witness": {"generator": exc.generator,
                                       "element": None if exc.element is None else str(exc.element)}}
    except Exception as exc:  # noqa: BLE001 - the exit-code contract is total
        code = EXIT_INPUT
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    report["status"] = _status(code)
    report["exit_code"] = code
    report["timings"] = {"elapsed_seconds": round(time.perf_counter() - start, 6)}
    report["format"] = getattr(args, "format", "json") if args is not None else "json"
    return code, report


def main(argv=None) -> int:
    code, report = run(argv)
    fmt = report.pop("format")
    if fmt == "text":
        print(render_text(report))
    else:
        print(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False))
    return code


if __name__ == "__main__":
    sys.exit(main())
