"""``hyperioso`` command line: analyze, verify, junta and sweep.

Exit codes: 0 success, 1 check failure, 2 usage or parse error, 3 resource budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Optional, Sequence

from . import __version__
from . import harness
from .core import MAX_N, BooleanFunction, mean, variance
from .errors import BudgetError, ConfigError, DegenerateCorpusError, HyperiosoError
from .families import FamilySpec, KINDS, generate, log_n_power, tribes
from .geometry import (
    edge_boundary_measure,
    influence_sq_sum,
    influence_vector,
    sensitivity_moment,
    talagrand_boundary,
    total_influence,
    vertex_boundary_measure,
)
from .junta import JuntaParams, extract_junta, kkl_variant_report, nearest_junta
from .spectral import level_weights, noise_mismatch, noise_stability

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
ANALYZE_MAX_N = 20
SWEEP_MAX_N = 20


class UsageError(Exception):
    pass


# -- function specs ------------------------------------------------------


def _check_n_budget(n: int, cap: int = MAX_N) -> int:
    if n < 0:
        raise UsageError(f"negative dimension n={n}")
    if n > cap:
        raise BudgetError(f"n={n} exceeds the cap of {cap}")
    return n


def _int_token(key: str, val: str) -> int:
    try:
        return int(val)
    except ValueError:
        raise UsageError(f"token {key}={val!r} is not an integer") from None


def parse_function_spec(text: str, cap: int = MAX_N) -> BooleanFunction:
    """Parse ``tt:<n>:<hex>``, ``family=<kind>,...,n=<n>`` or ``random,seed=<s>,n=<n>[,bias=<b>]``."""
    text = text.strip()
    if text.startswith("tt:"):
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"expected tt:<n>:<hex>, got {text!r}")
        _check_n_budget(_int_token("n", parts[1]), cap)
        try:
            return BooleanFunction.parse(text)
        except ConfigError as exc:
            raise UsageError(str(exc)) from None
    tokens = [t.strip() for t in text.split(",") if t.strip()]
    if not tokens:
        raise UsageError("empty function spec")
    params: dict = {}
    kind = None
    for i, tok in enumerate(tokens):
        if i == 0 and tok == "random":
            kind = "random"
            continue
        if "=" not in tok:
            raise UsageError(f"token {tok!r} is not key=value")
        key, val = (s.strip() for s in tok.split("=", 1))
        if key == "family" and i == 0:
            kind = val
            continue
        if key in params or key == "family":
            raise UsageError(f"token {tok!r} repeats a key")
        params[key] = val
    if kind is None:
        raise UsageError(f"token {tokens[0]!r}: expected family=<kind>, random or tt:")
    if kind not in KINDS:
        raise UsageError(f"token family={kind!r}: unknown family, expected one of {', '.join(KINDS)}")
    n_tok = params.pop("n", None)
    for key, val in list(params.items()):
        if key == "S":
            params[key] = tuple(_int_token("S", v) for v in val.split("+"))
        elif key == "bias":
            try:
                params[key] = float(val)
            except ValueError:
                raise UsageError(f"token bias={val!r} is not a number") from None
        else:
            params[key] = _int_token(key, val)
    try:
        spec = FamilySpec(kind, params)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    if n_tok is None:
        n = spec.implied_n()
        if n is None:
            raise UsageError(f"spec {text!r} needs n=<n>")
    else:
        n = _int_token("n", n_tok)
    _check_n_budget(n, cap)
    try:
        return generate(spec, n)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None


def _float_list(text: str, name: str) -> list:
    try:
        vals = [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--{name} expects comma-separated numbers, got {text!r}") from None
    if not vals:
        raise UsageError(f"--{name} is empty")
    return vals


def _int_range(text: str, name: str) -> list:
    """``a:b[:step]`` (inclusive) or a comma list."""
    text = str(text)
    try:
        if ":" in text:
            parts = [int(t) for t in text.split(":")]
            if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] <= 0):
                raise ValueError
            step = parts[2] if len(parts) == 3 else 1
            return list(range(parts[0], parts[1] + 1, step))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--{name} expects a:b[:step] or a comma list, got {text!r}") from None


# -- output helpers ------------------------------------------------------


def _dump(doc: dict) -> str:
    doc = {"schema_version": harness.SCHEMA_VERSION, "version": __version__, **doc}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _finite(x):
    return x if x is None or math.isfinite(x) else None


# -- commands ------------------------------------------------------------


def cmd_analyze(args) -> int:
    f = parse_function_spec(args.spec, ANALYZE_MAX_N)
    ps = _float_list(args.p, "p")
    epss = _float_list(args.eps, "eps")
    if any(p <= 0 for p in ps):
        raise UsageError("--p values must be positive")
    if any(not 0 <= e <= 1 for e in epss):
        raise UsageError("--eps values must lie in [0, 1]")
    lw = level_weights(f)
    report = {
        "function": f.serialize(),
        "spec": args.spec,
        "n": f.n,
        "mean": mean(f),
        "var": variance(f),
        "influences": [float(v) for v in influence_vector(f)],
        "total_influence": total_influence(f),
        "M": influence_sq_sum(f),
        "moments": {repr(p): sensitivity_moment(f, p) for p in ps},
        "talagrand": {repr(p): talagrand_boundary(f, p) for p in ps if 0.5 <= p <= 1.0},
        "level_weights": list(lw.w),
        "edge_boundary": edge_boundary_measure(f),
        "vertex_boundary": vertex_boundary_measure(f),
        "noise": [
            {"eps": e, "stability": noise_stability(f, e), "mismatch": noise_mismatch(f, e)} for e in epss
        ],
        "kk_surface": [{k: _finite(v) if isinstance(v, float) else v for k, v in row.items()}
                       for row in harness.kk_surface(f)],
        "kkl": {repr(p): kkl_variant_report(f, p) for p in ps if 0.5 <= p <= 1.0},
    }
    _emit(_dump(report), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    threads = args.threads if args.threads is not None else harness.default_threads()
    if threads < 1:
        raise UsageError("--threads must be at least 1")
    try:
        corpus = harness.parse_corpus(args.corpus)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    try:
        ids = harness.resolve_ids(args.checks.split(","))
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    reports, skipped = [], []
    for cid in ids:
        try:
            reports.append(harness.run_check(cid, corpus, threads))
        except DegenerateCorpusError:
            check = harness.REGISTRY[cid]
            skipped.append({"id": cid, "kind": check.kind, "statement": check.statement,
                            "corpus": corpus.descriptor, "functions": len(corpus), "status": "degenerate"})
    failed = [r for r in reports if not r.ok_overall]
    text = harness.reports_json(corpus.descriptor, reports, skipped)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "report.json"), "w", encoding="utf-8") as fh:
            fh.write(text)
        with open(os.path.join(args.out, "report.csv"), "w", encoding="utf-8", newline="") as fh:
            fh.write(harness.reports_csv(reports))
    elif not args.quiet:
        sys.stdout.write(text)
    for r in reports:
        line = f"{r.check_id:24s} {r.kind:5s} {'ok' if r.ok_overall else 'FAIL':4s} min_ratio={r.min_ratio!r}"
        print(line, file=sys.stderr)
    for s in skipped:
        print(f"{s['id']:24s} {s['kind']:5s} degenerate", file=sys.stderr)
    for r in failed:
        if r.kind == "hard":
            print(f"FAIL {r.check_id}: witness {r.failure_witness}", file=sys.stderr)
        else:
            print(f"FAIL {r.check_id}: min ratio {r.min_ratio!r} below floor {r.floor!r}, witness {r.witness}",
                  file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_junta(args) -> int:
    f = parse_function_spec(args.spec)
    try:
        params = JuntaParams(args.eps, args.p, args.c1, args.c2)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    res = extract_junta(f, params)
    doc = {"function": f.serialize(), "spec": args.spec, "eps": args.eps, "p": args.p,
           "C1": args.c1, "C2": args.c2, **res.to_dict()}
    if args.oracle is not None:
        try:
            coords, dist = nearest_junta(f, args.oracle)
        except ConfigError as exc:
            raise UsageError(str(exc)) from None
        doc["oracle"] = {"j": args.oracle, "coords": list(coords), "distance": dist,
                         "gap": res.distance - dist}
    _emit(_dump(doc), args.out)
    return EXIT_OK


SWEEP_QUANTITIES = ("moment", "total_influence", "variance", "edge_boundary", "vertex_boundary")


def _sweep_members(args) -> list:
    fam = args.family
    out = []
    if fam == "tribes":
        ws = _int_range(args.w or "2,3", "w")
        n_max = args.n_max
        if n_max is None:
            raise UsageError("tribes sweep needs --n-max")
        _check_n_budget(n_max, SWEEP_MAX_N)
        for w in ws:
            if w < 1:
                raise UsageError(f"--w value {w} must be positive")
            for m in range(1, n_max // w + 1):
                out.append((f"w={w},m={m}", w * m, tribes(w, m)))
        return out
    if args.n is None:
        raise UsageError(f"{fam} sweep needs --n")
    for n in _int_range(args.n, "n"):
        _check_n_budget(n, SWEEP_MAX_N)
        if fam == "majority" and n % 2 == 0:
            raise UsageError(f"majority needs odd n, got {n}")
        params = {}
        if fam in ("and_k", "or_k"):
            params["k"] = n
        try:
            f = generate(FamilySpec(fam, params), n)
        except ConfigError as exc:
            raise UsageError(str(exc)) from None
        out.append((",".join(f"{k}={v}" for k, v in params.items()), n, f))
    return out


def cmd_sweep(args) -> int:
    if args.quantity not in SWEEP_QUANTITIES:
        raise UsageError(f"--quantity must be one of {', '.join(SWEEP_QUANTITIES)}")
    p = args.p
    members = _sweep_members(args)
    if not members:
        raise UsageError("sweep range is empty")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["family", "params", "n", "quantity", "p", "value", "log_n_pow_p", "ratio"])
    for params, n, f in members:
        if args.quantity == "moment":
            value = sensitivity_moment(f, p)
        elif args.quantity == "total_influence":
            value = total_influence(f)
        elif args.quantity == "variance":
            value = variance(f)
        elif args.quantity == "edge_boundary":
            value = edge_boundary_measure(f)
        else:
            value = vertex_boundary_measure(f)
        ref = log_n_power(n, p)
        ratio = value / ref if n > 1 and ref > 0 else float("nan")
        writer.writerow([args.family, params, n, args.quantity, repr(p), repr(value), repr(ref), repr(ratio)])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperioso", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hyperioso {__version__}")
    parser.add_argument("--config", help="JSON file with the same keys as the flags (flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="all scalar quantities of one function")
    a.add_argument("spec")
    a.add_argument("--p", default="0.5,1", help="comma-separated moment exponents")
    a.add_argument("--eps", default="0.5,0.25,0.125,0.0625", help="noise rates for the stability curve")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run checks over a corpus")
    v.add_argument("--corpus", default="exhaustive:3")
    v.add_argument("--checks", default="all", help="comma list of ids, or hard / ratio / all")
    v.add_argument("--threads", type=int, default=None)
    v.add_argument("--out", help="directory for report.json and report.csv")
    v.add_argument("--quiet", action="store_true", help="do not print the JSON report")
    v.set_defaults(func=cmd_verify)

    j = sub.add_parser("junta", help="extract a junta approximation")
    j.add_argument("spec")
    j.add_argument("--eps", type=float, default=0.1)
    j.add_argument("--p", type=float, default=1.0)
    j.add_argument("--c1", type=float, default=JuntaParams.__dataclass_fields__["C1"].default)
    j.add_argument("--c2", type=float, default=JuntaParams.__dataclass_fields__["C2"].default)
    j.add_argument("--oracle", type=int, default=None, help="compare against the best junta of this size")
    j.add_argument("--out")
    j.set_defaults(func=cmd_junta)

    s = sub.add_parser("sweep", help="plot-ready CSV of a quantity across a family")
    s.add_argument("--family", required=True, choices=("tribes", "majority", "and_k", "or_k", "parity", "dictator"))
    s.add_argument("--w", help="tribe widths, comma list or a:b")
    s.add_argument("--n", help="dimensions, comma list or a:b[:step]")
    s.add_argument("--n-max", type=int, dest="n_max")
    s.add_argument("--p", type=float, default=0.5)
    s.add_argument("--quantity", default="moment")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config!r}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    known = set(vars(args)) - {"func", "command", "config"}
    unknown = sorted(k.replace("-", "_") for k in cfg if k.replace("-", "_") not in known)
    if unknown:
        raise UsageError(f"unknown config keys for {args.command}: {', '.join(unknown)}")
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    subparser.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()})
    return parser.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    except UsageError as exc:
        print(f"hyperioso: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as exc:
        print(f"hyperioso: budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConfigError, HyperiosoError) as exc:
        print(f"hyperioso: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
