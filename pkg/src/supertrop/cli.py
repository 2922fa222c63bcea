"""Command-line front end.

    supertrop det --matrix A.txt [--json] [--max-n N]
    supertrop adj|tadj|qinv|qid --matrix A.txt [--retract] [--json]
    supertrop solve --matrix A.txt --rhs v.txt [--json]
    supertrop charpoly --matrix A.txt [--retract] [--json]
    supertrop eig --matrix A.txt [--retract] [--json]
    supertrop check --suite builtin --n 3 --trials 500 --seed 0 [--json]
    supertrop check --lhs "(adj (mul A B))" --rhs "(mul (adj B) (adj A))" --rel surpass --guard none

Exit status: 0 success, 1 domain error, 2 usage or parse error.
A matrix path of ``-`` reads standard input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import _config
from .errors import MalformedExpression, ParseError, SizeCapExceeded, SupertropError
from .harness import builtin_suite, check_identity, parse_expression
from .io import format_matrix, matrix_to_json, parse_matrix, parse_vector
from .matrix import (
    adjoint,
    determinant,
    is_quasi_identity,
    quasi_identities,
    quasi_inverse,
    tangible_adjoint,
)
from .scalar import format_scalar
from .solver import cramer_solve
from .spectral import char_poly, eigen_data

SCHEMA = "supertrop/1"
COMMANDS = ("det", "adj", "tadj", "qinv", "qid", "solve", "charpoly", "eig", "check")
EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="supertrop", description="Supertropical matrix algebra.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--matrix", help="matrix file (text or JSON), '-' for stdin")
    p.add_argument("--rhs", help="solve: right-hand side vector file; check: right expression")
    p.add_argument("--lhs", help="check: left expression")
    p.add_argument("--rel", default="surpass", help="check: surpass|numatch|eq|nu_geq|quasi_identity")
    p.add_argument("--guard", default="none", help="check: none|qinv|tangible|ghost|qinv-closed")
    p.add_argument("--suite", choices=("builtin",))
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--retract", action="store_true", help="apply the tangible retract to the result")
    p.add_argument("--max-n", type=int, help="enumeration cap (overrides SUPERTROP_MAX_N)")
    return p


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def _matrix(args):
    if not args.matrix:
        raise _Usage(f"{args.command} requires --matrix")
    M = parse_matrix(_read(args.matrix))
    cap = _config.max_n()
    if max(M.shape) > cap:
        raise SizeCapExceeded(f"matrix shape {M.shape} exceeds the enumeration cap {cap}")
    return M


def _vec(v):
    return [format_scalar(a) for a in v]


def _rows(M):
    return [[format_scalar(a) for a in row] for row in M]


def _cmd_det(args):
    d = determinant(_matrix(args))
    out = {
        "determinant": format_scalar(d.value),
        "layer": "zero" if d.value.is_zero else ("ghost" if d.value.is_ghost else "tangible"),
        "singular": d.is_singular,
        "attaining": [list(p) for p in d.attaining],
    }
    text = [f"det: {out['determinant']}", f"layer: {out['layer']}"]
    text += ["attaining: " + " ".join(str(list(p)) for p in d.attaining)] if d.attaining else []
    return out, "\n".join(text)


def _matrix_result(M, args):
    if args.retract:
        M = M.retract()
    return {"matrix": matrix_to_json(M), "text": _rows(M)}, format_matrix(M)


def _cmd_adj(args):
    return _matrix_result(adjoint(_matrix(args)), args)


def _cmd_tadj(args):
    return _matrix_result(tangible_adjoint(_matrix(args)), args)


def _cmd_qinv(args):
    return _matrix_result(quasi_inverse(_matrix(args)), args)


def _cmd_qid(args):
    right, left = quasi_identities(_matrix(args))
    out = {
        "I_A": _rows(right),
        "I'_A": _rows(left),
        "I_A_is_quasi_identity": is_quasi_identity(right),
        "I'_A_is_quasi_identity": is_quasi_identity(left),
    }
    text = ["I_A:", format_matrix(right), "I'_A:", format_matrix(left)]
    return out, "\n".join(text)


def _cmd_solve(args):
    A = _matrix(args)
    if not args.rhs:
        raise _Usage("solve requires --rhs")
    v = parse_vector(_read(args.rhs))
    r = cramer_solve(A, v)
    out = {
        "solution": _vec(r.solution),
        "residual": _vec(r.residual),
        "surpasses": r.surpasses,
        "exact": r.exact,
        "good_vector": r.good_vector,
    }
    text = [f"{k}: {' '.join(v) if isinstance(v, list) else str(v).lower()}" for k, v in out.items()]
    return out, "\n".join(text)


def _cmd_charpoly(args):
    f = char_poly(_matrix(args))
    if args.retract:
        f = f.retract()
    roots = f.roots() if f.is_quasi_tangible else []
    prev = 0
    listed = []
    for b, m in roots:
        listed.append({"root": format_scalar(b), "m": m, "multiplicity": m - prev})
        prev = m
    out = {
        "coefficients": [format_scalar(c) for c in f.coeffs],
        "essential": list(f.essential()),
        "quasi_tangible": f.is_quasi_tangible,
        "roots": listed,
    }
    text = [
        f"f: {f}",
        "essential degrees: " + " ".join(str(k) for k in out["essential"]),
        "roots: " + " ".join(f"{r['root']} (m={r['m']})" for r in listed),
    ]
    return out, "\n".join(text)


def _cmd_eig(args):
    A = _matrix(args)
    # eigenvectors of the retract are eigenvectors of any nu-matched matrix
    pairs = eigen_data(A.retract() if args.retract else A)
    out = {"pairs": [p.to_dict() for p in pairs]}
    text = [
        f"beta={d['eigenvalue']} J={d['J']} column={d['column']} v=({' '.join(d['vector'])}) verified={str(d['verified']).lower()}"
        for d in out["pairs"]
    ]
    return out, "\n".join(text)


def _cmd_check(args):
    if args.trials < 0 or args.n < 0:
        raise _Usage("--trials and --n must be non-negative")
    if args.suite:
        if args.n > _config.max_n():
            raise SizeCapExceeded(f"n = {args.n} exceeds the enumeration cap {_config.max_n()}")
        reports = builtin_suite(args.n, args.trials, args.seed)
    else:
        if not args.lhs:
            raise _Usage("check requires --suite builtin or --lhs")
        try:
            lhs = parse_expression(args.lhs)
            rhs = parse_expression(args.rhs) if args.rhs else None
            reports = [check_identity(lhs, rhs, args.rel, args.n, args.trials, args.seed, args.guard)]
        except MalformedExpression as exc:
            raise _Usage(str(exc)) from None
    out = {"n": args.n, "trials": args.trials, "seed": args.seed,
           "pass": all(r.passed for r in reports), "reports": [r.to_dict() for r in reports]}
    text = [
        f"{'PASS' if r.passed else 'FAIL'} [{r.family or r.relation}] {r.name} ({len(r.failures)} failures)"
        for r in reports
    ]
    for r in reports:
        for f in r.failures[:1]:
            text.append(f"  counterexample in {r.name} (trial {f.trial}, seed {f.seed}):")
            for k, m in f.matrices.items():
                text += [f"  {k} ="] + ["    " + line for line in m.splitlines()]
            if f.error:
                text.append(f"  error: {f.error}")
    return out, "\n".join(text)


_DISPATCH = {
    "det": _cmd_det,
    "adj": _cmd_adj,
    "tadj": _cmd_tadj,
    "qinv": _cmd_qinv,
    "qid": _cmd_qid,
    "solve": _cmd_solve,
    "charpoly": _cmd_charpoly,
    "eig": _cmd_eig,
    "check": _cmd_check,
}


def _emit(args, payload: dict, text: str, stream):
    if getattr(args, "json", False):
        stream.write(json.dumps({"schema": SCHEMA, **payload}, sort_keys=True) + "\n")
    else:
        stream.write(text + "\n")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
    except _Usage as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    if args.max_n is not None and args.max_n < 0:
        sys.stderr.write("usage error: --max-n must be non-negative\n")
        return EXIT_USAGE
    try:
        _config.max_n()
        _config.requested_backend()
    except ValueError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    try:
        with _config.max_n_override(args.max_n):
            payload, text = _DISPATCH[args.command](args)
    except _Usage as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        err = {"module": exc.module, "name": exc.name, "message": str(exc)}
        stream = sys.stdout if args.json else sys.stderr
        _emit(args, {"command": args.command, "error": err}, f"error: {exc.module}.{exc.name}: {exc}", stream)
        return EXIT_USAGE
    except SupertropError as exc:
        err = {"module": exc.module, "name": exc.name, "message": str(exc)}
        stream = sys.stdout if args.json else sys.stderr
        _emit(args, {"command": args.command, "error": err}, f"error: {exc.module}.{exc.name}: {exc}", stream)
        return EXIT_DOMAIN
    _emit(args, {"command": args.command, **payload}, text, sys.stdout)
    if args.command == "check" and not payload["pass"]:
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
