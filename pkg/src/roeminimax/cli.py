"""Command-line front end.

Exit codes: 0 success (all checks pass), 1 input error, 2 a verification
check failed, 3 a solver failed (affected checks reported as unverified).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import ratio, solver
from .generators import (
    SkiRentalParams,
    SplitMix64,
    gen_constant_ratio,
    gen_random,
    gen_ski_rental,
    random_distribution,
)
from .model import (
    ParseError,
    SolverFailure,
    ToleranceConfig,
    ValidationError,
    dump_instance,
    load_distribution,
    read_instance,
)
from .verifier import _sig, verify_instance

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_SOLVER = 0, 1, 2, 3

log = logging.getLogger("roeminimax")


class InputError(Exception):
    pass


def _tolerances(args) -> ToleranceConfig:
    kw = {}
    if args.tol is not None:
        kw["abs_tol"] = args.tol
        kw["rel_tol"] = args.tol
    if args.lp_tol is not None:
        kw["lp_tol"] = args.lp_tol
    if args.max_iters is not None:
        kw["max_bisection_iters"] = args.max_iters
    try:
        return ToleranceConfig(**kw)
    except ValidationError as exc:
        raise InputError(str(exc)) from None


def _load_instance(path):
    try:
        return read_instance(path)
    except OSError as exc:
        raise InputError(f"cannot read instance {path}: {exc.strerror}") from None
    except (ParseError, ValidationError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_dists(paths, n):
    dists = []
    for p in paths or ():
        try:
            with open(p, "rb") as fh:
                dists.append(load_distribution(fh, n))
        except OSError as exc:
            raise InputError(f"cannot read distribution {p}: {exc.strerror}") from None
        except (ParseError, ValidationError) as exc:
            raise InputError(f"{p}: {exc}") from None
    return dists


def _round_floats(obj):
    if isinstance(obj, float):
        return _sig(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _text_lines(obj, prefix=""):
    for k, v in obj.items():
        if isinstance(v, dict):
            yield f"{prefix}{k}:"
            yield from _text_lines(v, prefix + "  ")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            yield f"{prefix}{k}:"
            for i, item in enumerate(v):
                yield f"{prefix}  [{i}]"
                yield from _text_lines(item, prefix + "    ")
        else:
            yield f"{prefix}{k}: {_scalar_text(v)}"


def _scalar_text(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar_text(x) for x in v) + "]"
    if v is None:
        return "n/a"
    return str(v)


def _emit(args, payload: dict, text: str | None = None) -> None:
    payload = _round_floats(payload)
    if args.format == "json":
        out = json.dumps(payload, indent=2) + "\n"
    else:
        out = (text if text is not None else "\n".join(_text_lines(payload))) + "\n"
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)


def cmd_solve(args) -> int:
    tol = _tolerances(args)
    inst = _load_instance(args.instance)
    if args.objective == "pure":
        rv = ratio.pure_minimax(inst)
        payload = {"objective": "pure", "instance": inst.name, "value": rv.value,
                   "best_design": rv.argmin_design, "worst_state": rv.argmax_state,
                   "diagnostics": {}}
    else:
        fn = solver.best_adversary_eor if args.objective == "eor" else solver.best_adversary_roe
        res = fn(inst, tol)
        diag = {"iterations": res.iterations, "residual": res.residual}
        if args.objective == "roe":
            # residual bounds |g(lambda*)| for the linearized game
            diag["lambda"] = res.value
        if res.designer_mix is not None:
            diag["designer_mix"] = res.designer_mix.tolist()
        payload = {"objective": args.objective, "instance": inst.name, "value": res.value,
                   "adversary_dist": res.adversary_dist.weights.tolist(),
                   "best_design": res.best_design, "diagnostics": diag}
    _emit(args, payload)
    return EXIT_OK


def cmd_bound(args) -> int:
    tol = _tolerances(args)
    inst = _load_instance(args.instance)
    dists = _load_dists(args.dist, inst.n_states)
    if not dists:
        raise InputError("bound needs at least one --dist file")
    pure = ratio.pure_minimax(inst).value
    rows = []
    for path, d in zip(args.dist, dists):
        e = ratio.eor_lower_bound(inst, d)
        r = ratio.roe_lower_bound(inst, d)
        rows.append({"dist": str(path), "eor_bound": e.value, "eor_design": e.best_design,
                     "roe_bound": r.value, "roe_design": r.best_design,
                     "below_pure_minimax": bool(e.value <= pure + tol.allowance(pure, e.value)
                                                and r.value <= pure + tol.allowance(pure, r.value))})
    _emit(args, {"instance": inst.name, "pure_minimax": pure, "bounds": rows})
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = _tolerances(args)
    inst = _load_instance(args.instance)
    dists = _load_dists(args.dist, inst.n_states)
    if args.random_dists:
        rng = SplitMix64(args.seed)
        dists += [random_distribution(inst.n_states, rng) for _ in range(args.random_dists)]
    suite = verify_instance(inst, dists, tol, deep=args.deep, seed=args.seed)
    _emit(args, suite.to_dict(), suite.render_text())
    if suite.any_failed:
        for r in suite.reports:
            for c in r.failed:
                print(f"FAILED [{r.kind}] {c.relation} (slack {c.slack:.3g})", file=sys.stderr)
        return EXIT_VERIFY
    if suite.any_unverified:
        for r in suite.reports:
            for e in r.errors:
                print(f"UNVERIFIED [{r.kind}] {e}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        if args.kind == "ski":
            inst = gen_ski_rental(SkiRentalParams(args.buy, args.horizon))
        elif args.kind == "random":
            inst = gen_random(args.designs, args.states, args.seed, args.lo, args.hi)
        else:
            inst = gen_constant_ratio(args.designs, args.states, args.ratio, args.seed)
    except ValidationError as exc:
        raise InputError(str(exc)) from None
    data = dump_instance(inst)
    pure = ratio.pure_minimax(inst).value
    summary = f"{inst.name}: designs={inst.n_designs} states={inst.n_states} pure={pure:.12g}"
    if args.out:
        Path(args.out).write_bytes(data)
        print(summary)
    else:
        sys.stdout.write(data.decode("utf-8"))
        print(summary, file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, help="absolute and relative comparison tolerance")
    common.add_argument("--lp-tol", type=float, help="duality-gap tolerance for game solves")
    common.add_argument("--max-iters", type=int, help="iteration limit for the ROE root search")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="roeminimax", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="sup-inf value of an objective")
    s.add_argument("instance")
    s.add_argument("--objective", choices=("pure", "eor", "roe"), default="roe")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bound", parents=[common], help="lower bounds for fixed state mixtures")
    b.add_argument("instance")
    b.add_argument("--dist", action="append", default=[], help="distribution JSON (repeatable)")
    b.set_defaults(func=cmd_bound)

    v = sub.add_parser("verify", parents=[common], help="certify every bound chain")
    v.add_argument("instance")
    v.add_argument("--dist", action="append", default=[])
    v.add_argument("--random-dists", type=int, default=0, metavar="K")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--deep", action="store_true", help="also search 1e5 random mixtures per design")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate an instance file")
    gsub = g.add_subparsers(dest="kind", required=True)
    gs = gsub.add_parser("ski", parents=[common])
    gs.add_argument("--buy", type=int, required=True)
    gs.add_argument("--horizon", type=int, required=True)
    gr = gsub.add_parser("random", parents=[common])
    gr.add_argument("--designs", type=int, required=True)
    gr.add_argument("--states", type=int, required=True)
    gr.add_argument("--seed", type=int, default=0)
    gr.add_argument("--lo", type=float, default=0.1)
    gr.add_argument("--hi", type=float, default=10.0)
    gc = gsub.add_parser("const", parents=[common])
    gc.add_argument("--ratio", type=float, required=True)
    gc.add_argument("--designs", type=int, default=2)
    gc.add_argument("--states", type=int, default=2)
    gc.add_argument("--seed", type=int, default=0)
    for q in (gs, gr, gc):
        q.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        for k, v in exc.diagnostics.items():
            print(f"  {k}: {v}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
