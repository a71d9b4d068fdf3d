"""Command-line front end.

Exit codes: 0 pass, 1 law failure, 2 undetermined, 3 usage or parse error.
The default seed comes from ``IDEALSPACE_SEED`` when set.
"""

from __future__ import annotations

import argparse
import inspect
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .expr import Sym
from .lattice import (FAILS, HOLDS, check_distributivity, check_lattice_axioms, check_modularity,
                      dedekind_demo, inclusion_constant, uniqueness_probe)
from .measure import FunctionVector, MeasureError, make_space
from .norms import ConvergenceError, NormError, dual_norm, norm
from .parse import ParseError, parse_expr, parse_numbers
from .reports import LawReport, exit_status, read_records, to_table, write_records
from .suites import DEFAULT_SEED, LAWS
from .symbolic import check_closure, check_galois, CLOSURE_OPS, order_leq, reduce_with_trace
from .symmetric import (SymmetricSpace, check_inclusion_chain, check_transfer_isomorphism,
                        mekler_transfer, norming_value)

EXIT_PASS, EXIT_FAIL, EXIT_UNDETERMINED, EXIT_USAGE = 0, 1, 2, 3
SEED_ENV = "IDEALSPACE_SEED"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    seed: int = DEFAULT_SEED
    tol: float = 1e-6
    law_tol: Optional[float] = None
    masses: Optional[list] = None
    kind: str = "finite"
    out: Optional[str] = None
    table: Optional[str] = None
    counts: dict = field(default_factory=dict)

    def validate(self):
        if self.tol <= 0 or (self.law_tol is not None and self.law_tol <= 0):
            raise UsageError("tolerances must be positive")
        for k, v in self.counts.items():
            if v < 1:
                raise UsageError(f"sample count {k} must be >= 1, got {v}")
        return self

    def space(self, required: bool = True):
        if self.masses is None:
            if required:
                raise UsageError("a measure space is required: pass --masses")
            return None
        return make_space(self.masses, self.kind)


def _parse_value(key: str, raw: str):
    if key in ("masses",):
        return parse_numbers(raw)
    if key in ("kind", "out", "table"):
        return raw
    if key == "seed":
        return int(raw)
    if key in ("tol", "law_tol"):
        return float(raw)
    try:
        return int(raw)
    except ValueError:
        try:
            return float(raw)
        except ValueError:
            raise UsageError(f"value for {key!r} must be numeric, got {raw!r}") from None


def read_config(path: str) -> dict:
    """Flat ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{i}: expected key=value, got {line!r}")
            k, v = (t.strip() for t in line.split("=", 1))
            out[k] = v
    return out


def build_config(args) -> RunConfig:
    raw = {}
    env_seed = os.environ.get(SEED_ENV)
    if env_seed:
        raw["seed"] = env_seed
    if args.config:
        raw.update(read_config(args.config))
    for item in args.set or []:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        raw[k.strip()] = v.strip()
    for key in ("seed", "masses", "kind", "out", "table", "tol"):
        v = getattr(args, key, None)
        if v is not None:
            raw[key] = str(v)
    cfg = RunConfig()
    for k, v in raw.items():
        val = _parse_value(k, v)
        if hasattr(cfg, k) and k != "counts":
            setattr(cfg, k, val)
        else:
            cfg.counts[k] = val
    return cfg.validate()


def read_vector(path: str, space) -> FunctionVector:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    values = parse_numbers(text)
    if len(values) != space.n:
        raise UsageError(f"vector has {len(values)} entries, the space has {space.n} atoms")
    return FunctionVector(np.array(values), space)


def _fmt(v: float) -> str:
    return repr(float(v))


# --- subcommands -----------------------------------------------------------

def cmd_eval(args, cfg):
    E = parse_expr(args.expr)
    x = read_vector(args.vector, cfg.space())
    r = norm(E, x, cfg.tol)
    print(_fmt(r.value))
    return EXIT_PASS if r.converged else EXIT_UNDETERMINED


def cmd_dual(args, cfg):
    E = parse_expr(args.expr)
    x = read_vector(args.vector, cfg.space())
    r = dual_norm(E, x, cfg.tol, method=args.method)
    print(_fmt(r.value))
    return EXIT_PASS if r.converged else EXIT_UNDETERMINED


def cmd_order(args, cfg):
    A, B = parse_expr(args.a), parse_expr(args.b)
    space = cfg.space(required=False)
    if space is not None:
        v = inclusion_constant(A, B, space, seed=cfg.seed)
        print(f"{A} ⊂¹ {B}: {v.relation} (constant estimate {v.constant_estimate:.12g}"
              + (f", certified bound {v.upper_bound:.12g})" if v.upper_bound is not None else ")"))
        if v.relation == FAILS:
            print("witness: " + ",".join(_fmt(t) for t in v.witness.values))
        return {HOLDS: EXIT_PASS, FAILS: EXIT_FAIL}.get(v.relation, EXIT_UNDETERMINED)
    d = order_leq(A, B)
    verdict = {True: "holds", False: "fails", None: "unknown"}[d.holds]
    print(f"{A} ⊂¹ {B}: {verdict}")
    if d.steps:
        print(d.trace())
    if d.witness is not None:
        print(f"witness on {d.witness.space}: " + ",".join(_fmt(t) for t in d.witness.values))
    return {True: EXIT_PASS, False: EXIT_FAIL}.get(d.holds, EXIT_UNDETERMINED)


def cmd_reduce(args, cfg):
    S = parse_expr(args.expr)
    out, steps = reduce_with_trace(S)
    print(out)
    if not args.quiet:
        for i, st in enumerate(steps, 1):
            print(f"  {i}. [{st.rule}] {st.before} -> {st.after}")
    return EXIT_PASS


def _profile(text: str):
    e = parse_expr(text)
    if not isinstance(e, Sym):
        raise UsageError(f"expected a profile (sym.Lp, sym.orlicz, sym.lorentz), got {e}")
    return e.profile


def cmd_transfer(args, cfg):
    profile = _profile(args.profile)
    target = make_space(parse_numbers(args.target), args.target_kind)
    source = cfg.space(required=False) or make_space([target.total], target.kind if
                                                     target.kind != "counting" else "finite")
    S = mekler_transfer(SymmetricSpace(profile, source), target)
    print(f"{S.profile} on {S.space}")
    print(f"norming value: {_fmt(norming_value(S.profile, target.total))}")
    if args.vector:
        x = read_vector(args.vector, target)
        print(_fmt(norm(S.expr, x, cfg.tol).value))
    return EXIT_PASS


def _custom_reports(law: str, spaces: list, cfg, args) -> list[LawReport]:
    """Single-instance checks on user-supplied spaces."""
    def need(k):
        if len(spaces) != k:
            raise UsageError(f"check {law} with --spaces needs {k} expressions")

    tol = cfg.law_tol or 1e-4
    samples = int(cfg.counts.get("samples", 5))
    if law in ("galois",):
        return [check_galois(spaces)]
    if law == "closure":
        return [check_closure(op, spaces) for op in CLOSURE_OPS]
    if law == "dedekind":
        out = dedekind_demo(n_max=int(cfg.counts.get("n_max", 1000)), family=spaces,
                            space=cfg.space(required=False), seed=cfg.seed,
                            lower_bounds=int(cfg.counts.get("lower_bounds", 100)))
        return list(out.values())
    space = cfg.space()
    if law == "axioms":
        need(3)
        return [check_lattice_axioms(*spaces, space, samples, tol, cfg.seed)]
    if law == "modularity":
        need(3)
        return [check_modularity(*spaces, space, samples, tol, cfg.seed)]
    if law == "distributivity":
        need(3)
        return [check_distributivity(*spaces, space, samples, tol, cfg.seed)]
    if law == "uniqueness":
        need(3)
        return [uniqueness_probe(*spaces, space, samples, tol, cfg.seed)]
    profiles = [s.profile if isinstance(s, Sym) else None for s in spaces]
    if None in profiles:
        raise UsageError(f"check {law} needs profiles (sym.Lp, sym.orlicz, sym.lorentz)")
    if law == "chain":
        return [check_inclusion_chain(SymmetricSpace(p, space), samples * 8,
                                      cfg.law_tol or 1e-6, cfg.seed) for p in profiles]
    if law == "transfer":
        need(2)
        if args.target is None:
            raise UsageError("check transfer with --spaces needs --target masses")
        target = make_space(parse_numbers(args.target), args.target_kind)
        return [check_transfer_isomorphism(SymmetricSpace(profiles[0], space),
                                           SymmetricSpace(profiles[1], space), target,
                                           samples, tol, cfg.seed)]
    raise UsageError(f"check {law} does not accept --spaces")


def _runner_counts(fn, cfg) -> dict:
    params = inspect.signature(fn).parameters
    kw = {k: v for k, v in cfg.counts.items() if k in params}
    unknown = sorted(set(cfg.counts) - set(params) - {"samples"})
    if unknown:
        raise UsageError(f"unknown settings for this law: {', '.join(unknown)}")
    if "samples" in cfg.counts and "samples" in params:
        kw["samples"] = cfg.counts["samples"]
    if cfg.law_tol is not None and "tol" in params:
        kw["tol"] = cfg.law_tol
    return kw


def cmd_check(args, cfg):
    if args.law not in LAWS:
        raise UsageError(f"unknown law {args.law!r}; choose from {', '.join(sorted(LAWS))}")
    if args.spaces:
        reports = _custom_reports(args.law, [parse_expr(s) for s in args.spaces], cfg, args)
    else:
        fn = LAWS[args.law]
        reports = fn(seed=cfg.seed, **_runner_counts(fn, cfg))
    return _emit(reports, cfg)


def _emit(reports, cfg):
    table = to_table(reports)
    print(table)
    if cfg.out:
        write_records(cfg.out, reports)
    if cfg.table:
        with open(cfg.table, "w", encoding="utf-8") as fh:
            fh.write(table + "\n")
    return exit_status(reports)


def cmd_report(args, cfg):
    reports = []
    for path in args.records:
        for rec in read_records(path):
            reports.append(LawReport(rec["law"], rec["tol"], rec.get("seed"), rec["instances"],
                                     rec["undetermined"], rec["max_violation"],
                                     rec.get("witness"), rec.get("details", [])))
    return _emit(reports, cfg)


# --- entry point -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--masses", help="atom masses, e.g. 0.5,0.5")
    common.add_argument("--kind", choices=("finite", "probability", "counting"))
    common.add_argument("--seed", type=int, help=f"random seed (default ${SEED_ENV} or {DEFAULT_SEED})")
    common.add_argument("--tol", type=float, help="solver tolerance")
    common.add_argument("--config", help="flat key=value settings file")
    common.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override one setting (repeatable)")
    common.add_argument("--out", help="write machine-readable JSON-lines records here")
    common.add_argument("--table", help="write the text table here")

    p = _Parser(prog="idealspace", description="Lattices of ideal spaces on finite measure spaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eval", parents=[common], help="norm of a vector in a space")
    s.add_argument("expr")
    s.add_argument("vector", help="CSV file with one value per atom ('-' for stdin)")
    s.set_defaults(fn=cmd_eval)

    s = sub.add_parser("dual", parents=[common], help="Köthe dual norm of a vector")
    s.add_argument("expr")
    s.add_argument("vector")
    s.add_argument("--method", choices=("auto", "generic"), default="auto")
    s.set_defaults(fn=cmd_dual)

    s = sub.add_parser("order", parents=[common],
                       help="decide A ⊂¹ B (symbolically, or numerically with --masses)")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(fn=cmd_order)

    s = sub.add_parser("check", parents=[common], help="run a law suite")
    s.add_argument("law", help=", ".join(sorted(LAWS)))
    s.add_argument("--spaces", nargs="+", help="check these expressions instead of random ones")
    s.add_argument("--target", help="target masses for check transfer")
    s.add_argument("--target-kind", default="probability",
                   choices=("finite", "probability", "counting"))
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("reduce", parents=[common], help="normal form with rule trace")
    s.add_argument("expr")
    s.add_argument("--quiet", action="store_true", help="omit the rule trace")
    s.set_defaults(fn=cmd_reduce)

    s = sub.add_parser("transfer", parents=[common], help="rebind a profile to new masses")
    s.add_argument("profile")
    s.add_argument("target", help="target masses")
    s.add_argument("--target-kind", default="probability",
                   choices=("finite", "probability", "counting"))
    s.add_argument("--vector", help="evaluate this vector on the target space")
    s.set_defaults(fn=cmd_transfer)

    s = sub.add_parser("report", parents=[common], help="aggregate JSON-lines records")
    s.add_argument("records", nargs="+")
    s.set_defaults(fn=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        return args.fn(args, cfg)
    except (UsageError, ParseError, MeasureError, NormError, OSError, ValueError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as err:
        print(f"undetermined: {err}", file=sys.stderr)
        return EXIT_UNDETERMINED


if __name__ == "__main__":
    sys.exit(main())
