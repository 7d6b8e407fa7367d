"""Command-line interface.

Exit codes: 0 decided/pass, 1 input error, 2 resource error, 3 a verify or
scan assertion failed.  Limits come from flags, then ``DPSTAB_*`` environment
variables, then defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from dpstab.generate import connected_bipartite_graphs
from dpstab.graph import (
    Graph,
    GraphError,
    emit_graph6,
    is_named_graph,
    named_graph,
    parse_edge_list,
    parse_graph6,
)
from dpstab.harness import (
    FAIL,
    INCONCLUSIVE,
    Limits,
    arc_transitive_set,
    conjecture_scan,
    lemma_sweeps,
    prop_cm_sweep,
    prop_km_sweep,
    read_corpus,
    sigma_lemma_sweep,
    theorem_sweep,
    verify_prop_cm,
    verify_prop_km,
    verify_theorem_1a,
    verify_theorem_1b,
)
from dpstab.permgroup import (
    DEFAULT_NODE_BUDGET,
    ResourceError,
    arc_orbits,
    automorphism_group,
    format_perm,
)
from dpstab.products import DEFAULT_VERTEX_CAP, direct_product
from dpstab.stability import (
    DEFAULT_COPRIME_BOUND,
    classify_graph,
    classify_pair,
    find_sigma_automorphism,
    find_two_fold,
)

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_ASSERT = 0, 1, 2, 3
FORMATS = ("json", "csv", "text")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    budget: int = DEFAULT_NODE_BUDGET
    vertex_cap: int = DEFAULT_VERTEX_CAP
    coprime_bound: int = DEFAULT_COPRIME_BOUND
    format: str = "json"
    jobs: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("budget", "vertex_cap", "coprime_bound", "jobs"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be positive")
        if self.seed < 0:
            raise InputError("seed must be non-negative")
        if self.format not in FORMATS:
            raise InputError(f"format must be one of {', '.join(FORMATS)}")

    @property
    def limits(self) -> Limits:
        return Limits(self.budget, self.vertex_cap, self.coprime_bound)


_ENV = {
    "budget": ("DPSTAB_BUDGET", int),
    "vertex_cap": ("DPSTAB_VERTEX_CAP", int),
    "coprime_bound": ("DPSTAB_COPRIME_BOUND", int),
    "format": ("DPSTAB_FORMAT", str),
    "jobs": ("DPSTAB_JOBS", int),
    "seed": ("DPSTAB_SEED", int),
}


def resolve_config(args: argparse.Namespace, environ=os.environ) -> RunConfig:
    values = {}
    for name, (var, cast) in _ENV.items():
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
        elif var in environ:
            try:
                values[name] = cast(environ[var])
            except ValueError:
                raise InputError(f"{var}={environ[var]!r} is not a valid {cast.__name__}") from None
    return RunConfig(**values)


def load_graph(source: str, format_in: Optional[str] = None) -> Graph:
    """A graph6 (.g6) or edge-list (.el) file, a built-in name such as ``petersen``, or a graph6 string."""
    path = Path(source)
    if path.is_file():
        fmt = format_in or {".g6": "g6", ".el": "el"}.get(path.suffix.lower())
        if fmt is None:
            raise InputError(f"cannot infer the format of {source}; pass --format-in g6|el")
        text = path.read_text()
        if fmt == "el":
            return parse_edge_list(text)
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) != 1:
            raise InputError(f"{source}: expected exactly one graph6 line, found {len(lines)}")
        return parse_graph6(lines[0])
    name = path.stem if path.suffix.lower() in (".g6", ".el") else source
    if is_named_graph(name):
        return named_graph(name)
    # last resort: a raw graph6 string on the command line
    try:
        return parse_graph6(source)
    except GraphError:
        raise InputError(f"{source!r} is neither a readable file, a built-in graph name nor graph6") from None


# ---------------------------------------------------------------- commands


def cmd_stability(args, cfg: RunConfig):
    if args.graph:
        gamma = load_graph(args.graph, args.format_in)
        verdict = classify_graph(gamma, cfg.budget, cfg.vertex_cap, cfg.coprime_bound)
        result = {"mode": "graph", "gamma": emit_graph6(gamma), **verdict.to_dict()}
    else:
        gamma = load_graph(args.pair[0], args.format_in)
        sigma = load_graph(args.pair[1], args.format_in)
        verdict = classify_pair(gamma, sigma, cfg.budget, cfg.vertex_cap, cfg.coprime_bound)
        result = {"mode": "pair", "gamma": emit_graph6(gamma), "sigma": emit_graph6(sigma), **verdict.to_dict()}
    return result, EXIT_OK


def cmd_product(args, cfg: RunConfig):
    a = load_graph(args.a, args.format_in)
    b = load_graph(args.b, args.format_in)
    p = direct_product(a, b, cfg.vertex_cap)
    g6 = emit_graph6(p.graph)
    result = {"graph6": g6, "sidecar": p.sidecar(), "vertices": p.graph.n, "edges": p.graph.num_edges}
    if args.output:
        out = Path(args.output)
        out.write_text(g6 + "\n")
        sidecar = out.with_name(out.name + ".json")
        sidecar.write_text(p.sidecar_json() + "\n")
        result["written"] = [str(out), str(sidecar)]
    return result, EXIT_OK


def cmd_aut(args, cfg: RunConfig):
    g = load_graph(args.graph, args.format_in)
    group = automorphism_group(g, budget=cfg.budget)
    orbits = group.orbits()
    arcs = arc_orbits(g, group) if g.num_edges else []
    return {
        "graph6": emit_graph6(g),
        "order": str(group.order),
        "generators": [format_perm(s) for s in group.generators],
        "orbits": orbits,
        "vertex_transitive": len(orbits) == 1,
        "arc_transitive": len(arcs) == 1,
    }, EXIT_OK


def cmd_witness(args, cfg: RunConfig):
    gamma = load_graph(args.gamma, args.format_in)
    if args.kind == "two-fold":
        w = find_two_fold(gamma, cfg.budget, cfg.vertex_cap)
        result = {"kind": "two-fold", "gamma": emit_graph6(gamma), "witness": w.to_dict() if w else None}
    else:
        if not args.sigma:
            raise InputError("witness sigma needs --sigma")
        sigma = load_graph(args.sigma, args.format_in)
        w = find_sigma_automorphism(gamma, sigma, cfg.budget, cfg.vertex_cap)
        result = {
            "kind": "sigma",
            "gamma": emit_graph6(gamma),
            "sigma": emit_graph6(sigma),
            "witness": w.to_dict() if w else None,
        }
    return result, EXIT_OK


def _needs(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InputError(f"verify {args.check} needs " + ", ".join("--" + n.replace("_", "-") for n in missing))


def cmd_verify(args, cfg: RunConfig):
    limits = cfg.limits
    if args.check in ("theorem-a", "theorem-b"):
        _needs(args, "gamma", "sigma")
        gamma, sigma = load_graph(args.gamma, args.format_in), load_graph(args.sigma, args.format_in)
        fn = verify_theorem_1a if args.check == "theorem-a" else verify_theorem_1b
        results = [fn(gamma, sigma, limits)]
    elif args.check in ("prop-km", "prop-cm"):
        _needs(args, "gamma", "m")
        gamma = load_graph(args.gamma, args.format_in)
        fn = verify_prop_km if args.check == "prop-km" else verify_prop_cm
        results = [fn(gamma, args.m, limits)]
    elif args.check == "theorem-sweep":
        results = theorem_sweep(args.gamma_cap, args.sigma_cap, limits)
    elif args.check == "sigma-lemma-sweep":
        results = sigma_lemma_sweep(args.gamma_cap, args.sigma_cap, limits)
    elif args.check == "prop-km-sweep":
        results = prop_km_sweep(args.max_order, (3, 4, 5), limits)
    elif args.check == "prop-cm-sweep":
        results = prop_cm_sweep(args.max_order, (3, 4, 5, 6, 7, 8), limits)
    else:
        report = lemma_sweeps(args.order_cap, args.single_cap, cfg.seed, args.fuzz, limits)
        return report, EXIT_ASSERT if report["violations"] else EXIT_OK
    statuses = [r.status for r in results]
    summary = {s: statuses.count(s) for s in sorted(set(statuses))}
    result = {"check": args.check, "summary": summary, "results": [r.to_dict() for r in results]}
    return result, EXIT_ASSERT if FAIL in statuses or INCONCLUSIVE in statuses else EXIT_OK


def cmd_scan(args, cfg: RunConfig):
    lo, _, hi = args.m_range.partition("-")
    try:
        ms = range(int(lo), int(hi or lo) + 1)
    except ValueError:
        raise InputError(f"bad --m-range {args.m_range!r}; expected e.g. 3-10") from None
    if args.corpus:
        path = Path(args.corpus)
        if not path.is_file():
            raise InputError(f"corpus {args.corpus} not found")
        corpus = list(read_corpus(path.read_text().splitlines()))
    elif args.arc_transitive:
        corpus = arc_transitive_set(args.arc_transitive, cfg.budget)
    elif args.bipartite:
        corpus = [
            (f"bipartite{n}-{i}", g)
            for n in range(2, args.bipartite + 1)
            for i, g in enumerate(connected_bipartite_graphs(n))
        ]
    else:
        raise InputError("scan needs --corpus, --arc-transitive or --bipartite")
    report = conjecture_scan(corpus, ms, cfg.limits, cfg.jobs)
    result = report.to_dict()
    result["_csv"] = report.to_csv()
    return result, EXIT_ASSERT if report.counterexamples else EXIT_OK


# ---------------------------------------------------------------- plumbing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, help="search-tree node budget")
    common.add_argument("--vertex-cap", dest="vertex_cap", type=int, help="largest product order allowed")
    common.add_argument("--coprime-bound", dest="coprime_bound", type=int, help="largest common factor order searched")
    common.add_argument("--format", choices=FORMATS, help="output format (default json)")
    common.add_argument("--jobs", type=int, help="worker processes for scans")
    common.add_argument("--seed", type=int, help="seed for fuzz suites")
    common.add_argument("--format-in", dest="format_in", choices=("g6", "el"), help="input format override")

    parser = _Parser(prog="dpstab", description="Stability of graphs and graph pairs under the direct product.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("stability", parents=[common], help="classify a graph or a graph pair")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--graph")
    grp.add_argument("--pair", nargs=2, metavar=("GAMMA", "SIGMA"))
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("product", parents=[common], help="direct product as graph6 plus a JSON sidecar")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("aut", parents=[common], help="automorphism group order, generators and orbits")
    p.add_argument("graph")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("witness", parents=[common], help="two-fold or sigma-automorphism witness")
    p.add_argument("kind", choices=("two-fold", "sigma"))
    p.add_argument("gamma")
    p.add_argument("--sigma")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", parents=[common], help="run a theorem or proposition check")
    p.add_argument(
        "check",
        choices=(
            "theorem-a", "theorem-b", "prop-km", "prop-cm",
            "theorem-sweep", "sigma-lemma-sweep", "prop-km-sweep", "prop-cm-sweep", "lemmas",
        ),
    )
    p.add_argument("--gamma")
    p.add_argument("--sigma")
    p.add_argument("--m", type=int)
    p.add_argument("--gamma-cap", dest="gamma_cap", type=int, default=8)
    p.add_argument("--sigma-cap", dest="sigma_cap", type=int, default=6)
    p.add_argument("--max-order", dest="max_order", type=int, default=10)
    p.add_argument("--order-cap", dest="order_cap", type=int, default=5)
    p.add_argument("--single-cap", dest="single_cap", type=int)
    p.add_argument("--fuzz", type=int, default=0, help="random relabelling trials")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", parents=[common], help="scan a corpus for (gamma, K_m) counterexamples")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--corpus", help="graph6 file, one graph per line")
    src.add_argument("--arc-transitive", dest="arc_transitive", type=int, metavar="MAX_ORDER")
    src.add_argument("--bipartite", type=int, metavar="MAX_ORDER")
    p.add_argument("--m-range", dest="m_range", default="3-10")
    p.set_defaults(func=cmd_scan)
    return parser


def _render(envelope: dict, fmt: str) -> str:
    result = envelope["result"]
    csv_text = result.pop("_csv", None) if isinstance(result, dict) else None
    if fmt == "json":
        return json.dumps(envelope, sort_keys=True, indent=2)
    if fmt == "csv":
        if csv_text is not None:
            return csv_text.rstrip("\n")
        rows = ["key,value"]
        for k, v in sorted(result.items()):
            rows.append(f"{k},{json.dumps(v, sort_keys=True) if not isinstance(v, str) else v}")
        return "\n".join(rows)
    lines = [f"{envelope['command']}:"]
    for k, v in result.items():
        lines.append(f"  {k}: {v if isinstance(v, (str, int, bool)) else json.dumps(v, sort_keys=True, ensure_ascii=False)}")
    return "\n".join(lines)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        cfg = resolve_config(args)
        result, code = args.func(args, cfg)
    except (InputError, GraphError, OSError) as exc:
        print(f"dpstab: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"dpstab: resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    envelope = {
        "command": args.command,
        "config": asdict(cfg),
        "result": result,
        "timing": {"seconds": round(time.perf_counter() - start, 6)},
    }
    print(_render(envelope, cfg.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
