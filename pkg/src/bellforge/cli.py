"""``bellforge`` command-line interface.

Exit codes: 0 success, 1 a self-test criterion failed, 2 invalid input,
3 numeric breakdown.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import io as bio
from .behaviors import CHSH, BellScenario, ConditionalBehavior, JointBehavior
from .geometry import (
    INEQUALITIES,
    build_inequality,
    face_class_counts,
    facet_det_formula,
    is_facet,
    max_over_vertices,
    membership,
    saturating_vertices,
    witness_det,
)
from .numerics import FLOAT, MixedPolicyError, NumericBreakdown, parse_scalar, policy_of
from .quantum import behavior_of, chsh_leak_strategy, tilted_hardy_strategy
from .randomness import LABEL, beta_star, curve, point
from .vertices import (
    RelaxationParams,
    input_vertices,
    mdpdl_vertices,
    pd_conditional_vertices,
)

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _scalar(text):
    try:
        v = parse_scalar(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if policy_of([v]) == FLOAT:
        print(f"warning: decimal {text!r} switches to float arithmetic; pass p/q for exact results",
              file=sys.stderr)
    return v


def _jobs(args) -> int:
    if args.jobs is not None:
        return args.jobs
    env = os.environ.get("BELLFORGE_JOBS")
    if not env:
        return 1
    try:
        n = int(env)
    except ValueError:
        raise ValueError(f"BELLFORGE_JOBS must be an integer, got {env!r}") from None
    if n < 1:
        raise ValueError("BELLFORGE_JOBS must be positive")
    return n


def _params(args) -> RelaxationParams:
    g = lambda name, default: getattr(args, name, None) if getattr(args, name, None) is not None else default
    return RelaxationParams(
        l=g("l", Fraction(1, 4)), h=g("h", Fraction(1, 4)),
        epsA=g("epsA", 0), epsB=g("epsB", 0), kappa=g("kappa", 0),
    )


def _write(args, text: str) -> None:
    out = getattr(args, "out", "-") or "-"
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _emit_records(args, records, header):
    if args.format == "csv":
        _write(args, bio.csv_text(header, [[r[h] for h in header] for r in records]))
    else:
        _write(args, bio.dumps(records))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_vertices(args) -> int:
    scenario = args.scenario
    params = _params(args)
    jobs = _jobs(args)
    if args.kind == "input":
        V = input_vertices(params, scenario)
    elif args.kind == "conditional":
        V = pd_conditional_vertices(params.epsA, params.epsB, scenario, jobs=jobs)
    else:
        V = mdpdl_vertices(params, scenario, filter_extremal=args.filter_extremal, jobs=jobs)
    if args.format == "csv":
        header = ["index"] + [f"v{i}" for i in range(len(V[0]))]
        _write(args, bio.csv_text(header, [[i, *v.values] for i, v in enumerate(V)]))
    else:
        _write(args, bio.dumps([bio.behavior_to_json(v) for v in V]))
    return EXIT_OK


def cmd_check(args) -> int:
    p = bio.load_behavior(args.behavior)
    f = build_inequality(args.ineq, _params(args), p.scenario)
    if p.kind != f.kind:
        raise ValueError(f"{args.ineq} acts on {f.kind} behaviors, file holds a {p.kind} one")
    if FLOAT in (p.policy, f.policy):
        f = f.as_float()
    value = f.value(p)
    margin = value - f.bound
    violated = margin > 1e-9 if f.policy == FLOAT else margin > 0
    rec = {"inequality": args.ineq, "value": value, "bound": f.bound,
           "margin": margin, "violated": bool(violated)}
    _emit_records(args, rec if args.format == "json" else [rec], ["inequality", "value", "bound", "margin", "violated"])
    return EXIT_OK


def cmd_facet(args) -> int:
    eps = args.eps
    V = pd_conditional_vertices(eps, eps, CHSH, jobs=_jobs(args))
    f = build_inequality("pd_facet", RelaxationParams(epsA=eps, epsB=eps))
    best, _ = max_over_vertices(f, V)
    rep = is_facet(f, V)
    sat = saturating_vertices(f, V)
    rec = {
        "eps": eps,
        "max": best,
        "bound": f.bound,
        "facet": rep.facet,
        "saturating_count": rep.saturating_count,
        "saturating_dim": rep.saturating_dim,
        "polytope_dim": rep.polytope_dim,
        "class_counts": face_class_counts(sat, eps),
    }
    if policy_of([eps]) != FLOAT:
        rec["det"] = witness_det(eps)
        rec["det_formula"] = facet_det_formula(eps)
    _emit_records(args, rec if args.format == "json" else [rec], list(rec))
    return EXIT_OK


def cmd_decompose(args) -> int:
    p = bio.load_behavior(args.behavior)
    params = _params(args)
    if p.kind == "conditional":
        V = pd_conditional_vertices(params.epsA, params.epsB, p.scenario, jobs=_jobs(args))
    elif p.kind == "joint":
        V = mdpdl_vertices(params, p.scenario, filter_extremal=args.filter_extremal, jobs=_jobs(args))
    else:
        V = input_vertices(params, p.scenario)
    res = membership(p, V)
    rec = {"status": res.status, "n_vertices": len(V)}
    if res.status == "inside":
        rec["residual"] = res.residual
        rec["weights"] = [
            {"index": i, "weight": w, "vertex": bio.behavior_to_json(V[i])}
            for i, w in enumerate(res.weights) if w != 0
        ]
    else:
        rec["separator"] = {"coeffs": list(res.separator.coeffs), "bound": res.separator.bound}
    _write(args, bio.dumps(rec))
    return EXIT_OK


def cmd_quantum(args) -> int:
    if args.strategy == "tilted-hardy":
        if args.eps is None:
            raise ValueError("tilted-hardy needs --eps")
        strat = tilted_hardy_strategy(float(args.eps))
    else:
        if args.kappa is None:
            raise ValueError("chsh-leak needs --kappa")
        strat = chsh_leak_strategy(float(args.kappa))
    _write(args, bio.dumps(bio.behavior_to_json(behavior_of(strat))))
    return EXIT_OK


def cmd_pg(args) -> int:
    k = float(args.kappa)
    if (args.beta is None) == (args.curve is None):
        raise ValueError("give exactly one of --beta or --curve")
    pts = [point(float(args.beta), k)] if args.beta is not None else curve(k, args.curve)
    header = ["beta", "kappa", "pg", "hmin"]
    if args.format == "csv":
        _write(args, bio.csv_text(header, [p.as_row() for p in pts]))
        return EXIT_OK
    bs = beta_star(k)
    recs = [{"beta": p.beta_obs, "kappa": p.kappa, "pg": p.pg, "hmin": p.hmin,
             "beta_star": bs, "label": LABEL} for p in pts]
    _write(args, bio.dumps(recs[0] if args.beta is not None else recs))
    return EXIT_OK


def cmd_self_test(args) -> int:
    from .acceptance import format_table, run_all

    results = run_all()
    sys.stdout.write(format_table(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_params(p, *names):
    for name in names:
        p.add_argument(f"--{name}", type=_scalar, default=None, metavar="P/Q")


def _add_common(p, formats=("json",)):
    p.add_argument("--out", default="-", help="output path, '-' for standard output")
    p.add_argument("--format", choices=formats, default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="bellforge", description="MDPDL Bell polytopes, leaky CHSH and guessing probability")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("vertices", help="enumerate input, conditional or joint vertices")
    p.add_argument("--kind", choices=("input", "conditional", "joint"), required=True)
    _add_params(p, "l", "h", "epsA", "epsB")
    p.add_argument("--scenario", type=BellScenario.parse, default=CHSH, metavar="nA,nB,nX,nY")
    p.add_argument("--filter-extremal", action="store_true")
    p.add_argument("--jobs", type=int, default=None)
    _add_common(p, ("json", "csv"))
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("check", help="evaluate a named inequality on a behavior file")
    p.add_argument("--ineq", choices=INEQUALITIES, required=True)
    _add_params(p, "l", "h", "epsA", "epsB", "kappa")
    p.add_argument("--eps", type=_scalar, default=None, help="sets epsA = epsB")
    p.add_argument("--behavior", required=True)
    _add_common(p, ("json", "csv"))
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("facet", help="verify the PD facet inequality at one eps")
    p.add_argument("--eps", type=_scalar, required=True)
    p.add_argument("--jobs", type=int, default=None)
    _add_common(p, ("json", "csv"))
    p.set_defaults(func=cmd_facet)

    p = sub.add_parser("decompose", help="convex decomposition or separating functional")
    _add_params(p, "l", "h", "epsA", "epsB")
    p.add_argument("--eps", type=_scalar, default=None, help="sets epsA = epsB")
    p.add_argument("--behavior", required=True)
    p.add_argument("--filter-extremal", action="store_true")
    p.add_argument("--jobs", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("quantum", help="behavior of a two-qubit strategy")
    p.add_argument("--strategy", choices=("tilted-hardy", "chsh-leak"), required=True)
    _add_params(p, "eps", "kappa")
    _add_common(p)
    p.set_defaults(func=cmd_quantum)

    p = sub.add_parser("pg", help="guessing probability under input leakage")
    p.add_argument("--kappa", type=_scalar, required=True)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--curve", type=int, default=None, metavar="N")
    _add_common(p, ("json", "csv"))
    p.set_defaults(func=cmd_pg)

    p = sub.add_parser("self-test", help="run the acceptance checks")
    p.set_defaults(func=cmd_self_test)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    eps = getattr(args, "eps", None)
    if eps is not None and args.command in ("check", "decompose"):
        args.epsA = args.epsB = eps
    jobs = getattr(args, "jobs", None)
    if jobs is not None and jobs < 1:
        print("bellforge: error: --jobs must be positive", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except NumericBreakdown as exc:
        print(f"bellforge: numeric breakdown: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, MixedPolicyError, ZeroDivisionError, OSError) as exc:
        print(f"bellforge: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
