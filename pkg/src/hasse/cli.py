"""Command-line interface: ``hasse <subcommand> ...``.

Exit codes: 0 decided / valid, 1 invalid certificate, 2 invalid input,
3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

from . import __version__
from .conics import find_conic_point, parametrize_conic, solve_general_fp, solve_system_fp
from .counterexamples import (
    HEIGHT_BUDGET,
    SearchConfig,
    global_search_height,
    search_counterexamples,
    verify_certificate,
)
from .errors import BudgetExceeded, HasseError, InvalidInput
from .lifting import lift_fourth_power_2adic, lift_rth_power
from .local import FACTOR_BUDGET, decide_local, real_solvable
from .modarith import LiftRequest, factorize, legendre
from .padic import p_local_solve_general
from .system import SystemCoeffs

EXIT_OK, EXIT_INVALID_CERT, EXIT_INVALID_INPUT, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class RunManifest:
    command: str
    arguments: dict
    budgets: dict = field(default_factory=dict)
    version: str = __version__
    outcome: str = ""


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(args, manifest: RunManifest, result: dict, text: str) -> None:
    if args.json:
        print(_dump({"manifest": asdict(manifest), "result": result}))
    else:
        print(text)


def _manifest(args, budgets=None) -> RunManifest:
    skip = {"json", "threads", "func", "command"}
    argd = {k: v for k, v in vars(args).items() if k not in skip}
    return RunManifest(args.command, argd, budgets or {})


# ---------------------------------------------------------------- commands

def cmd_legendre(args) -> int:
    val = legendre(args.a, args.p)
    m = _manifest(args)
    m.outcome = str(val)
    _emit(args, m, {"a": args.a, "p": args.p, "legendre": val}, f"({args.a}/{args.p}) = {val}")
    return EXIT_OK


def cmd_conic(args) -> int:
    pt = find_conic_point(args.a, args.b, args.p)
    res = {"point": [pt.x0, pt.y0]}
    text = f"point ({pt.x0}, {pt.y0}) on {args.a}x^2 + {args.b}y^2 = 1 mod {args.p}"
    if args.p != 2:
        par = parametrize_conic(args.a, args.b, args.p, pt)
        res.update(q1=list(par.q1), q2=list(par.q2), q3=list(par.q3))
        text += f"\nq1 = {par.q1}\nq2 = {par.q2}\nq3 = {par.q3}  (ascending coefficients)"
    m = _manifest(args)
    m.outcome = "point found"
    _emit(args, m, res, text)
    return EXIT_OK


def cmd_solve_fp(args) -> int:
    if args.b:
        sol = solve_general_fp(args.a, args.b, args.c, args.d, args.p)
    else:
        sol = solve_system_fp(args.a, args.c, args.d, args.p)
    m = _manifest(args)
    m.outcome = sol.classification.value
    res = {"solution": list(sol.as_tuple()), "modulus": args.p, "classification": sol.classification.value}
    _emit(args, m, res, f"(u, v, w, z) = {sol.as_tuple()} mod {args.p} [{sol.classification.value}]")
    return EXIT_OK


def cmd_lift(args) -> int:
    if args.p == 2 and args.r == 4:
        root = lift_fourth_power_2adic(args.N, args.k)
    else:
        root = lift_rth_power(LiftRequest(args.N, args.r, args.p, args.k))
    mod = args.p**args.k
    m = _manifest(args)
    m.outcome = str(root)
    res = {"root": root, "modulus": mod}
    _emit(args, m, res, f"{root}^{args.r} == {args.N} (mod {mod})")
    return EXIT_OK


def _local_general(args, coeffs: SystemCoeffs) -> tuple[dict, str, str]:
    # b != 0: only the real place and the good primes can be decided
    a, b, c, d = coeffs.as_tuple()
    real, how = real_solvable(coeffs)
    disc = b * b - 4 * a * c
    if disc == 0:
        raise InvalidInput("b^2 - 4ac = 0")
    n = 2 * a * c * d * disc
    if abs(n) > args.factor_budget:
        raise BudgetExceeded(f"|2acd(b^2-4ac)| exceeds the factorization budget {args.factor_budget}")
    bad = sorted(factorize(n))
    res = {
        "coeffs": [a, b, c, d],
        "real": {"solvable": real, "witness": how},
        "bad_primes": bad,
        "bad_prime_status": "undecided: no procedure for primes dividing 2acd(b^2-4ac) when b != 0",
        "good_primes": "solvable: every p not dividing 2acd(b^2-4ac) has a Z_p-point",
    }
    if not real:
        outcome = "not locally solvable (real place)"
    else:
        outcome = f"undecided at bad primes {bad}"
    lines = [f"real: {'solvable' if real else 'not solvable'} ({how})",
             f"bad primes (undecided): {bad}",
             "good primes: solvable", outcome]
    return res, outcome, "\n".join(lines)


def cmd_local(args) -> int:
    coeffs = SystemCoeffs(args.a, args.b, args.c, args.d)
    m = _manifest(args, {"factor_budget": args.factor_budget})
    if args.b:
        res, outcome, text = _local_general(args, coeffs)
        m.outcome = outcome
        _emit(args, m, res, text)
        return EXIT_OK
    rep = decide_local(coeffs, args.factor_budget)
    res = rep.to_dict()
    m.outcome = "locally solvable" if rep.locally_solvable else "not locally solvable"
    lines = [f"real: {'solvable' if rep.real else 'not solvable'} ({rep.real_witness})"]
    for v in rep.primes:
        if v.solvable:
            lines.append(f"p={v.p}: solvable [{v.case}] witness {v.witness} mod {v.modulus} "
                         f"for system {v.witness_system}")
        else:
            tail = "none mod 16" if v.p == 2 else "none"
            lines.append(f"p={v.p}: not solvable [{v.case}] witness: {tail}")
    lines.append(m.outcome)
    _emit(args, m, res, "\n".join(lines))
    return EXIT_OK


def cmd_global_search(args) -> int:
    coeffs = SystemCoeffs(args.a, args.b, args.c, args.d)
    sol = global_search_height(coeffs, args.height)
    m = _manifest(args, {"height": args.height, "height_budget": HEIGHT_BUDGET})
    m.outcome = "found" if sol else "none"
    text = f"least solution: {sol}" if sol else f"no nontrivial solution with height <= {args.height}"
    _emit(args, m, {"solution": list(sol) if sol else None, "height": args.height}, text)
    return EXIT_OK


def cmd_counterexamples(args) -> int:
    cfg = SearchConfig(args.q_bound, args.d_bound, args.height, family=args.family)
    certs = search_counterexamples(cfg, args.threads)
    for cert in certs:
        print(_dump(cert.to_dict()), flush=True)
    m = _manifest(args, {"q_bound": args.q_bound, "d_bound": args.d_bound, "height": args.height})
    m.outcome = f"{len(certs)} certificates"
    if args.json:
        print(_dump({"manifest": asdict(m)}))
    else:
        print(f"# {m.outcome}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    text = sys.stdin.read() if args.file == "-" else open(args.file, encoding="utf-8").read()
    certs = _parse_certificates(text)
    results = []
    status = EXIT_OK
    for cert in certs:
        ok, why = verify_certificate(cert)
        results.append({"q": cert.get("q"), "d": cert.get("d"), "valid": ok, "failure": why})
        if not ok:
            status = EXIT_INVALID_CERT
    m = _manifest(args)
    m.outcome = "valid" if status == EXIT_OK else "invalid"
    lines = [f"q={r['q']} d={r['d']}: " + ("valid" if r["valid"] else f"INVALID ({r['failure']})")
             for r in results]
    _emit(args, m, {"certificates": results}, "\n".join(lines) or "no certificates")
    return status


def _parse_certificates(text: str) -> list[dict]:
    text = text.strip()
    if not text:
        raise InvalidInput("empty certificate input")
    try:
        obj = json.loads(text)
        items = obj if isinstance(obj, list) else [obj]
    except json.JSONDecodeError:
        try:
            items = [json.loads(line) for line in text.splitlines() if line.strip()]
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"malformed JSON: {exc}") from exc
    if not all(isinstance(x, dict) for x in items):
        raise InvalidInput("certificates must be JSON objects")
    return [x for x in items if "manifest" not in x]


def cmd_padic_solve(args) -> int:
    coeffs = SystemCoeffs(args.a, args.b, args.c, args.d)
    sol = p_local_solve_general(coeffs, args.p, args.precision)
    trunc = sol.truncation(args.precision)
    mod = args.p**args.precision
    m = _manifest(args)
    m.outcome = "solved"
    res = {"solution": list(trunc), "modulus": mod, "swapped": sol.swapped}
    note = " (U and W exchanged during normalisation)" if sol.swapped else ""
    _emit(args, m, res, f"(u, v, w, z) = {trunc} mod {args.p}^{args.precision}{note}")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    def common_flags(suppress: bool) -> argparse.ArgumentParser:
        # subcommands must not overwrite values given before the subcommand name
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--json", action="store_true",
                            default=argparse.SUPPRESS if suppress else False,
                            help="machine-readable JSON output")
        common.add_argument("--threads", type=int,
                            default=argparse.SUPPRESS if suppress else (os.cpu_count() or 1),
                            help="worker processes for searches (default: all cores)")
        return common

    parser = argparse.ArgumentParser(
        prog="hasse",
        description="Local and global solvability of aU^2 + bV^2 + cW^2 = dZ^2, UW = V^2.",
        parents=[common_flags(False)],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub_common = common_flags(True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text, description=help_text, parents=[sub_common])
        sp.set_defaults(func=func)
        return sp

    sp = add("legendre", cmd_legendre, "Legendre symbol (a/p)")
    sp.add_argument("a", type=int)
    sp.add_argument("p", type=int)

    sp = add("conic", cmd_conic, "point and parametrization of a x^2 + b y^2 = 1 over F_p")
    for name in ("a", "b", "p"):
        sp.add_argument(name, type=int)

    sp = add("solve-fp", cmd_solve_fp, "nontrivial F_p-solution of the system with b = 0 (or --b)")
    for name in ("a", "c", "d", "p"):
        sp.add_argument(name, type=int)
    sp.add_argument("--b", type=int, default=0, help="middle coefficient (default 0)")

    sp = add("lift", cmd_lift, "r-th root of N modulo p^k (p = 2, r = 4 uses the 2-adic lift)")
    for name in ("N", "r", "p", "k"):
        sp.add_argument(name, type=int)

    sp = add("local", cmd_local, "local solvability report for (a, b, c, d)")
    for name in ("a", "b", "c", "d"):
        sp.add_argument(name, type=int)
    sp.add_argument("--factor-budget", type=int, default=FACTOR_BUDGET,
                    help="largest |acd| that will be factored")

    sp = add("global-search", cmd_global_search, "least integer solution up to a height bound")
    for name in ("a", "b", "c", "d"):
        sp.add_argument(name, type=int)
    sp.add_argument("--height", type=int, default=100, help="height bound H (default 100)")

    sp = add("counterexamples", cmd_counterexamples,
             "certified counterexamples (q, d), streamed as JSON lines")
    sp.add_argument("--q-bound", type=int, default=100)
    sp.add_argument("--d-bound", type=int, default=30)
    sp.add_argument("--height", type=int, default=0, help="integer search height per certificate")
    sp.add_argument("--family", choices=("mod16", "mod8"), default="mod16",
                    help="q == 1 mod 16, or the relaxed q == 1 mod 8")

    sp = add("verify", cmd_verify, "re-check certificates from a JSON or JSON-lines file ('-' for stdin)")
    sp.add_argument("file")

    sp = add("padic-solve", cmd_padic_solve, "Z_p-point of the general system for a good prime p")
    for name in ("a", "b", "c", "d", "p"):
        sp.add_argument(name, type=int)
    sp.add_argument("--precision", type=int, default=8, help="p-adic precision K (default 8)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidInput, HasseError, ValueError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
