"""Command-line interface: ``pws-solve <command> ...``.

Exit codes: 0 success, 1 mathematically negative result (unsolvable,
not exact, inequality violated), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import serialize as ser
from .estimates import EstimatePreconditionError, l_uniformity_experiment, verify_solution_estimate
from .fourier import assemble, evaluate
from .grids import NormSpec, SampleGrid
from .ktypes import GroupMismatch, KType, ParityError, parity_compatible, q_poly
from .polyring import StructuralError
from .pws import compose
from .solver import (
    check_exactness_at_ktype,
    kernel_at_ktype,
    solve_system,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2

STRATEGY_NAMES = {"snf": "snf_direct", "induction": "row_induction"}

# options whose values may legitimately start with "-"
_DASH_VALUE_OPTS = ("--l", "--lambda", "--theta", "--l-range")


class UsageError(Exception):
    pass


def parse_ktype(text: str) -> KType:
    try:
        parts = [int(x) for x in str(text).split(",")]
    except ValueError as exc:
        raise UsageError(f"bad K-type {text!r}; use an integer or comma-separated integers") from exc
    return KType(tuple(parts))


def _opt_ktype(text):
    return None if text is None else parse_ktype(text)


def parse_l_range(text: str) -> list[KType]:
    """``"a..b"`` (rank one) or a single K-type."""
    if ".." in text:
        a, b = text.split("..", 1)
        try:
            lo, hi = int(a), int(b)
        except ValueError as exc:
            raise UsageError(f"bad range {text!r}; expected a..b") from exc
        if lo > hi:
            raise UsageError(f"empty range {text!r}")
        return [KType((k,)) for k in range(lo, hi + 1)]
    return [parse_ktype(text)]


def parse_complex_vector(text: str) -> list[complex]:
    try:
        return [complex(x.replace("i", "j")) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad complex vector {text!r}") from exc


def parse_float_vector(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad real vector {text!r}") from exc


def _grid(args, rank: int) -> SampleGrid:
    try:
        return SampleGrid.parse(args.grid, rank)
    except ValueError as exc:
        raise UsageError(f"bad --grid {args.grid!r}; expected R:res") from exc


def _spec(args) -> NormSpec:
    try:
        return NormSpec(args.r, args.N)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _compatible(l: KType, types) -> bool:
    return all(l.rank == k.rank and parity_compatible(l, k) for k in types)


def _sweep(types, ls):
    keep = [l for l in ls if _compatible(l, types)]
    skipped = [str(l) for l in ls if not _compatible(l, types)]
    return keep, _skip_note(skipped)


def _skip_note(skipped) -> list[str]:
    if not skipped:
        return []
    return ["skipped parity-incompatible l: " + ", ".join(str(s) for s in skipped)]


# -- commands ---------------------------------------------------------------
# each returns (exit code, result, diagnostics, human-readable text)


def cmd_qpoly(args):
    n, m = parse_ktype(args.n), parse_ktype(args.m)
    g = q_poly(n, m)
    result = {"n": n.to_json(), "m": m.to_json(), "q": str(g), "degree": g.degree}
    return EXIT_OK, result, [], str(g)


def _solve_report_json(rep):
    return {
        "status": rep.status,
        "method": rep.method,
        "solution": None if rep.solution is None else ser.vector_to_json(rep.solution),
        "certificate": rep.certificate,
    }


def cmd_solve(args):
    P = ser.operator_from_json(ser.read_json(args.operator))
    w = ser.vector_from_json(ser.read_json(args.rhs), _opt_ktype(args.l))
    rep = solve_system(P, w, w.ktype, STRATEGY_NAMES[args.strategy], args.degree_cap)
    code = EXIT_OK if rep.solved else EXIT_NEGATIVE
    if rep.solved:
        text = "solution: " + ", ".join(str(h) for h in rep.solution.h)
    else:
        text = f"{rep.status}: {rep.certificate}"
    return code, _solve_report_json(rep), ser.parity_warnings(P), text


def cmd_kernel(args):
    P = ser.operator_from_json(ser.read_json(args.operator))
    l = parse_ktype(args.l)
    gens = kernel_at_ktype(P, l)
    result = {"l": l.to_json(), "generators": [ser.vector_to_json(g) for g in gens]}
    text = "\n".join("(" + ", ".join(str(h) for h in g.h) + ")" for g in gens) or "kernel is zero"
    return EXIT_OK, result, ser.parity_warnings(P), text


def _exact_at(P, Q, l):
    return l.to_json(), check_exactness_at_ktype(P, Q, l).value


def cmd_check_exact(args):
    P = ser.operator_from_json(ser.read_json(args.P))
    Q = ser.operator_from_json(ser.read_json(args.Q))
    ls, diags = _sweep(P.sources + P.targets + Q.sources, parse_l_range(args.l))
    if args.jobs > 1 and len(ls) > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(_exact_at, [P] * len(ls), [Q] * len(ls), ls))
    else:
        rows = [_exact_at(P, Q, l) for l in ls]
    table = [{"l": l, "exactness": e} for l, e in rows]
    all_exact = all(e == "exact" for _, e in rows)
    text = "\n".join(f"l={l}: {e}" for l, e in rows)
    return (EXIT_OK if all_exact else EXIT_NEGATIVE), {"table": table, "all_exact": all_exact}, diags, text


def cmd_compose(args):
    P2 = ser.operator_from_json(ser.read_json(args.P2))
    P1 = ser.operator_from_json(ser.read_json(args.P1))
    C = compose(P2, P1)
    text = "\n".join("[" + ", ".join(str(a) for a in row) + "]" for row in C.entries)
    return EXIT_OK, {"operator": ser.operator_to_json(C), "is_zero": C.is_zero()}, [], text


def cmd_verify_estimate(args):
    P = ser.operator_from_json(ser.read_json(args.operator))
    spec = _spec(args)
    grid = _grid(args, P.rank)
    note = "grid-sampled norms are lower bounds of the true suprema"
    if args.l_range is not None:
        rep = l_uniformity_experiment(P, parse_l_range(args.l_range), spec, args.M, grid,
                                      factor=args.factor, strategy=STRATEGY_NAMES[args.strategy],
                                      jobs=args.jobs)
        diags = _skip_note(rep.skipped) + [rep.note]
        text = "\n".join(f"l={r['l']}: {r['ratio']}" for r in rep.table)
        text += f"\nmax/median = {rep.max_over_median:.6g} (factor {rep.factor})"
        # evidence only: a large spread is reported, not treated as failure
        return EXIT_OK, rep.to_json(), diags, text
    if args.u is None:
        raise UsageError("verify-estimate needs --u (or --l-range for the sweep)")
    u = ser.vector_from_json(ser.read_json(args.u), _opt_ktype(args.l))
    if args.v is not None:
        v = ser.vector_from_json(ser.read_json(args.v), u.ktype)
        how = "given"
    else:
        from .pws import apply

        rep = solve_system(P, apply(P, u), u.ktype, STRATEGY_NAMES[args.strategy])
        if rep.solution is None:
            return EXIT_NEGATIVE, _solve_report_json(rep), [], f"{rep.status}: {rep.certificate}"
        v, how = rep.solution, rep.method
    ratio = verify_solution_estimate(P, u, v, spec, args.M, grid)
    result = {"ratio": ratio, "v": ser.vector_to_json(v), "v_source": how,
              "spec": {"r": spec.r, "N": spec.N, "M": args.M}, "grid": grid.to_json()}
    return EXIT_OK, result, [note], f"ratio = {ratio:.12g}"


def cmd_assemble(args):
    vecs = [ser.vector_from_json(ser.read_json(p)) for p in args.vectors]
    comps = {}
    for v in vecs:
        if v.ktype in comps:
            comps[v.ktype] = comps[v.ktype] + v
        else:
            comps[v.ktype] = v
    if not comps:
        raise UsageError("assemble needs at least one vector file")
    s = assemble(comps)
    doc = ser.section_to_json(s)
    return EXIT_OK, {"section": doc}, [], json.dumps(doc)


def cmd_eval(args):
    s = ser.section_from_json(ser.read_json(args.section))
    lam = parse_complex_vector(args.lam)
    theta = parse_float_vector(args.theta)
    if len(lam) != s.rank or len(theta) != s.rank:
        raise UsageError(f"--lambda and --theta need {s.rank} coordinate(s)")
    val = evaluate(s, lam, theta)
    result = {"lambda": [[z.real, z.imag] for z in lam], "theta": theta,
              "value": [[complex(z).real, complex(z).imag] for z in val]}
    text = "[" + ", ".join(_fmt_complex(z) for z in val) + "]"
    return EXIT_OK, result, [], text


def _fmt_complex(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit a compact JSON report")
    fmt.add_argument("--pretty", action="store_true", help="emit an indented JSON report")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    num = argparse.ArgumentParser(add_help=False)
    num.add_argument("--grid", default="10:101", help="sample window R:res (default 10:101)")
    num.add_argument("--r", type=float, default=0.0, help="support radius in the weight")
    num.add_argument("--N", type=float, default=0, help="polynomial order in the weight")

    solv = argparse.ArgumentParser(add_help=False)
    solv.add_argument("--strategy", choices=sorted(STRATEGY_NAMES), default="snf")
    solv.add_argument("--degree-cap", type=int, default=None,
                      help="degree bound for product-group searches")

    p = argparse.ArgumentParser(prog="pws-solve", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("qpoly", parents=[common], help="print the twist generator q_{n,m}")
    q.add_argument("n")
    q.add_argument("m")
    q.set_defaults(func=cmd_qpoly)

    s = sub.add_parser("solve", parents=[common, solv], help="solve P v = w at one K-type")
    s.add_argument("operator")
    s.add_argument("rhs")
    s.add_argument("--l", default=None, help="K-type (defaults to the rhs file's ktype)")
    s.set_defaults(func=cmd_solve)

    k = sub.add_parser("kernel", parents=[common], help="kernel generators at a K-type")
    k.add_argument("operator")
    k.add_argument("--l", required=True)
    k.set_defaults(func=cmd_kernel)

    c = sub.add_parser("check-exact", parents=[common], help="compare Im Q with Ker P")
    c.add_argument("P")
    c.add_argument("Q")
    c.add_argument("--l", required=True, help="K-type or range a..b")
    c.set_defaults(func=cmd_check_exact)

    co = sub.add_parser("compose", parents=[common], help="compose operators P2 after P1")
    co.add_argument("P2")
    co.add_argument("P1")
    co.set_defaults(func=cmd_compose)

    v = sub.add_parser("verify-estimate", parents=[common, num, solv],
                       help="empirical constant in the solution estimate")
    v.add_argument("operator")
    v.add_argument("--u", help="vector file for u")
    v.add_argument("--v", help="vector file for v (default: solve P v = P u)")
    v.add_argument("--l", default=None, help="K-type override for u")
    v.add_argument("--M", type=int, default=0, help="order shift on the solution side")
    v.add_argument("--l-range", default=None, help="sweep a..b with u = (1,...,1)")
    v.add_argument("--factor", type=float, default=10.0, help="max/median threshold for sweeps")
    v.set_defaults(func=cmd_verify_estimate)

    a = sub.add_parser("assemble", parents=[common], help="assemble vectors into a section")
    a.add_argument("vectors", nargs="+")
    a.set_defaults(func=cmd_assemble)

    e = sub.add_parser("eval", parents=[common], help="evaluate a section at (λ, θ)")
    e.add_argument("section")
    e.add_argument("--lambda", dest="lam", required=True, help="complex coordinates, comma separated")
    e.add_argument("--theta", required=True, help="angles, comma separated")
    e.set_defaults(func=cmd_eval)
    return p


def _glue_dash_values(argv: list[str]) -> list[str]:
    """Turn ``--l -3..3`` into ``--l=-3..3`` so argparse keeps the value."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _DASH_VALUE_OPTS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def _inputs(args) -> dict:
    skip = {"func", "json", "pretty", "command"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def main(argv=None) -> int:
    argv = _glue_dash_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        code, result, diags, text = args.func(args)
    except (UsageError, ser.SchemaError, ParityError, GroupMismatch, StructuralError,
            EstimatePreconditionError) as exc:
        msg = str(exc)
        if args.json or args.pretty:
            _emit(args, ser.report(args.command, _inputs(args), None, [f"error: {msg}"]))
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    if args.json or args.pretty:
        _emit(args, ser.report(args.command, _inputs(args), result, diags))
    else:
        for d in diags:
            print(f"note: {d}", file=sys.stderr)
        print(text)
    return code


def _emit(args, doc):
    print(json.dumps(doc, indent=2 if args.pretty else None, ensure_ascii=False))


if __name__ == "__main__":
    sys.exit(main())
