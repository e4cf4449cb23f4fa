"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .cache import ResultCache, cache_key
from .engines import build_engine, EngineError, HNNEngine, word_to_element
from .equivgrowth import SampledFunction, reference_function, preceq_witness, equiv_verdict
from .growth import (
    BudgetExceeded,
    DEFAULT_ELEMENT_BUDGET,
    DEFAULT_PAIR_BUDGET,
    GrowthTable,
    HatMetric,
    conjugacy_growth_table,
    growth_table,
    primitive_growth_table,
    translation_number_estimate,
)
from .smallcancel import SCParams, check_condition, generate_W_word, symmetrize, parse_rational
from .wordlang import DSLSyntaxError, parse_word

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3


class InputError(Exception):
    pass


def emit_plot_data(table) -> str:
    """Plain-text columns for external plotting: ``n value ln(value)`` for
    exact tables, ``n lower upper ln(upper)`` for bracketed ones."""
    if table is None or not table.values:
        return ""

    def ln(v):
        return f"{math.log(v):.6f}" if v and v > 0 else "-inf"

    lines = []
    for n in range(len(table.values)):
        if table.exact:
            v = table.values[n]
            lines.append(f"{n} {v} {ln(v)}")
        else:
            lo, hi = table.lower[n], table.upper[n]
            lines.append(f"{n} {lo} {hi} {ln(hi)}")
    return "\n".join(lines) + "\n"


def _header(prov: dict) -> str:
    return "".join(f"# {k}: {v}\n" for k, v in prov.items())


_RELEVANT = {
    "growth": ("group", "radius", "budget"),
    "conj-growth": ("group", "radius", "budget", "pair_budget"),
    "prim-growth": ("group", "radius", "budget"),
    "compare": ("f", "g", "cmax", "n", "equiv", "column"),
    "check-sc": ("group", "word", "words", "eps", "mu", "lam", "c", "rho", "letter_bound"),
    "hat-metric": ("group", "h1", "h2", "radius", "factor", "letter_bound", "budget"),
    "translation": ("group", "word", "radius", "budget"),
    "reduce": ("group", "word"),
    "gen-w": ("group", "n", "x", "plan"),
}


def _provenance(args, extra: Optional[dict] = None) -> dict:
    # thread count and cache location are left out: outputs do not depend on them
    prov = {"tool": f"cgw {__version__}", "command": args.command}
    for k in _RELEVANT[args.command]:
        v = getattr(args, k, None)
        if v is not None:
            prov[k if k != "lam" else "lambda"] = v
    prov.update(extra or {})
    return prov


def _engine(args):
    if not args.group:
        raise InputError("--group is required")
    return build_engine(args.group)


def _write(args, text: str):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _cache(args) -> ResultCache:
    d = args.cache or os.environ.get("CGW_CACHE")
    return ResultCache(d) if d else ResultCache(None)


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    try:
        return max(1, int(os.environ.get("CGW_THREADS", "1")))
    except ValueError:
        raise InputError("CGW_THREADS must be an integer")


# -- table commands ---------------------------------------------------------

_TABLES = {"growth": growth_table, "conj-growth": conjugacy_growth_table, "prim-growth": primitive_growth_table}


def _render_table(table: GrowthTable, args) -> str:
    prov = _provenance(args)
    return table.to_csv(prov) if args.format == "csv" else table.to_json(prov)


def cmd_table(args) -> int:
    e = _engine(args)
    if args.radius is None or args.radius < 0:
        raise InputError("--radius N (N >= 0) is required")
    fn = _TABLES[args.command]
    params = {"radius": args.radius, "budget": args.budget, "format": args.format}
    if args.command == "conj-growth":
        params["pair_budget"] = args.pair_budget

    def compute():
        kw = {"budget": args.budget, "threads": _threads(args)}
        if args.command == "conj-growth":
            kw["pair_budget"] = args.pair_budget
        return _render_table(fn(e, args.radius, **kw), args)

    text, hit = _cache(args).get_or_compute(cache_key(e.describe(), args.command, params), compute)
    _write(args, text)
    if args.plot:
        table = GrowthTable.from_csv(text) if args.format == "csv" else _table_from_json(text)
        data = emit_plot_data(table)
        Path(args.plot).write_text(_header(_provenance(args)) + data if data else "")
    return EXIT_OK


def _table_from_json(text: str) -> GrowthTable:
    d = json.loads(text)
    return GrowthTable(d["kind"], d["group"], d["generators"], d["values"], d["lower"], d["upper"])


# -- compare ------------------------------------------------------------------

def _load_function(source: str, N: Optional[int], column: str) -> SampledFunction:
    if source.startswith("ref:"):
        if N is None:
            raise InputError(f"{source}: reference functions need a range (give --n or a table on the other side)")
        return reference_function(source[4:], N)
    path = Path(source)
    if not path.exists():
        raise InputError(f"no such table file: {source}")
    text = path.read_text()
    table = _table_from_json(text) if text.lstrip().startswith("{") else GrowthTable.from_csv(text)
    return SampledFunction.from_table(table, name=path.stem, column=column)


def cmd_compare(args) -> int:
    if not args.f or not args.g:
        raise InputError("--f and --g are required")
    N = args.n
    f = g = None
    if not args.f.startswith("ref:"):
        f = _load_function(args.f, None, args.column)
        N = N or f.N
    if not args.g.startswith("ref:"):
        g = _load_function(args.g, None, args.column)
        N = N or g.N
    f = f or _load_function(args.f, N, args.column)
    g = g or _load_function(args.g, N, args.column)
    verdict = equiv_verdict(f, g, args.cmax) if args.equiv else preceq_witness(f, g, args.cmax)
    d = verdict.to_dict()
    d["provenance"] = _provenance(args)
    _write(args, json.dumps(d, indent=2, sort_keys=True) + "\n")
    if args.plot:
        C = verdict.C or args.cmax
        lines = [f"{n} {f(n)} {g(C * n)}" for n in range(f.lo, f.N + 1) if g.defined(C * n)]
        Path(args.plot).write_text(_header(_provenance(args, {"columns": f"n f(n) g({C}n)"})) + "\n".join(lines) + "\n"
                                   if lines else "")
    return EXIT_OK


# -- small cancellation -------------------------------------------------------

def cmd_check_sc(args) -> int:
    e = _engine(args)
    texts = []
    if args.words:
        path = Path(args.words)
        if not path.exists():
            raise InputError(f"no such word file: {args.words}")
        texts = [ln.strip() for ln in path.read_text().splitlines() if ln.strip() and not ln.startswith("#")]
    texts += args.word or []
    if not texts:
        raise InputError("give relator words with --words FILE or --word W")
    words = [parse_word(t) for t in texts]
    for w in words:
        for l in w.letters:
            if l.gen not in e.generators and not l.gen.startswith("{"):
                raise InputError(f"unknown generator {l.gen!r} for {e.describe()}")
    S = symmetrize(words)
    params = SCParams(args.eps, parse_rational(args.mu), parse_rational(args.lam), args.c, args.rho)
    report = check_condition(e, S, params, args.letter_bound or 0)
    d = report.to_dict(S)
    d["provenance"] = _provenance(args)
    _write(args, json.dumps(d, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_gen_w(args) -> int:
    e = _engine(args)
    if args.n is None:
        raise InputError("--n is required")
    plan = None
    if args.plan:
        try:
            plan = [tuple(int(x) for x in pair.split(":")) for pair in args.plan.split(",")]
        except ValueError:
            raise InputError("--plan must look like '1:3,2:4' (exponent pairs p:q)")
    w = generate_W_word(e, args.x, args.n, plan)
    out = {"word": str(w.word), "certificate": w.certificate, "provenance": _provenance(args)}
    _write(args, json.dumps(out, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


# -- metric commands ---------------------------------------------------------

def cmd_hat(args) -> int:
    e = _engine(args)
    if args.h1 is None or args.h2 is None or args.radius is None:
        raise InputError("--h1, --h2 and --radius are required")
    h1 = word_to_element(e, parse_word(args.h1, e.generators))
    h2 = word_to_element(e, parse_word(args.h2, e.generators))
    hm = HatMetric(e, args.radius, args.factor, args.letter_bound, budget=args.budget)
    res = hm.distance(h1, h2)
    if args.format == "json":
        out = {"h1": e.format(h1), "h2": e.format(h2), "value": res.value, "radius": res.radius,
               "letter_bound": res.letter_bound, "result": res.describe(), "provenance": _provenance(args)}
        _write(args, json.dumps(out, indent=2, sort_keys=True) + "\n")
    else:
        _write(args, res.describe() + "\n")
    return EXIT_OK


def cmd_translation(args) -> int:
    e = _engine(args)
    if args.word is None or args.radius is None:
        raise InputError("--word and --radius (number of powers) are required")
    g = word_to_element(e, parse_word(args.word, e.generators))
    est = translation_number_estimate(e, g, args.radius, budget=args.budget)
    if args.format == "json":
        out = {"element": e.format(g), "lengths": est.lengths, "samples": [str(s) for s in est.samples],
               "inf": str(est.inf), "distorted": est.distorted, "provenance": _provenance(args)}
        _write(args, json.dumps(out, indent=2, sort_keys=True) + "\n")
    else:
        lines = [_header(_provenance(args, {"distorted": est.distorted, "inf": est.inf})), "n,length,ratio,inf\n"]
        for n, (L, s, m) in enumerate(zip(est.lengths, est.samples, est.inf_so_far), 1):
            lines.append(f"{n},{L},{s},{m}\n")
        _write(args, "".join(lines))
    return EXIT_OK


def cmd_reduce(args) -> int:
    e = _engine(args)
    if args.word is None:
        raise InputError("--word is required")
    g = word_to_element(e, parse_word(args.word, e.generators))
    if args.format == "json":
        out = {"normal_form": e.format(g), "provenance": _provenance(args)}
        if isinstance(e, HNNEngine):
            out["t_length"] = e.t_length(g)
        _write(args, json.dumps(out, indent=2, sort_keys=True) + "\n")
    else:
        _write(args, e.format(g) + "\n")
    return EXIT_OK


COMMANDS = {
    "growth": cmd_table,
    "conj-growth": cmd_table,
    "prim-growth": cmd_table,
    "compare": cmd_compare,
    "check-sc": cmd_check_sc,
    "hat-metric": cmd_hat,
    "translation": cmd_translation,
    "reduce": cmd_reduce,
    "gen-w": cmd_gen_w,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cgw", description="conjugacy growth workbench")
    p.add_argument("--version", action="version", version=f"cgw {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--group")
        s.add_argument("--word", action="append" if name == "check-sc" else "store")
        s.add_argument("--radius", type=int)
        s.add_argument("--budget", type=int, default=DEFAULT_ELEMENT_BUDGET)
        s.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET)
        s.add_argument("--threads", type=int)
        s.add_argument("--format", choices=("csv", "json"), default="csv")
        s.add_argument("--cache")
        s.add_argument("--output", "-o")
        s.add_argument("--plot")
        s.add_argument("--cmax", type=int, default=4)
        s.add_argument("--eps", type=int, default=0)
        s.add_argument("--mu", default="1/6")
        s.add_argument("--lambda", dest="lam", default="1")
        s.add_argument("--c", type=int, default=0)
        s.add_argument("--rho", type=int, default=1)
        s.add_argument("--letter-bound", type=int)
        s.add_argument("--words")
        s.add_argument("--f")
        s.add_argument("--g")
        s.add_argument("--n", type=int)
        s.add_argument("--equiv", action="store_true")
        s.add_argument("--column", choices=("value", "lower", "upper"), default="value")
        s.add_argument("--x")
        s.add_argument("--plan")
        s.add_argument("--h1")
        s.add_argument("--h2")
        s.add_argument("--factor", type=int, default=0)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads is not None and args.threads < 1:
        print("cgw: error: --threads must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    if args.budget < 1 or args.pair_budget < 1:
        print("cgw: error: budgets must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"cgw: budget exceeded: {exc} (complete through radius {exc.radius})", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, DSLSyntaxError, EngineError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"cgw: error: {msg}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
