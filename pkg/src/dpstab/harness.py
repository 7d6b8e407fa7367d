"""Verification suites: theorem/proposition checkers, sweeps and corpus scans.

Every checker returns a :class:`CheckResult`.  A check whose hypotheses do
not hold is ``skip``, never ``fail``.  ``inconclusive`` marks checks where the
classifier could not settle coprimality.
"""

from __future__ import annotations

import csv
import io
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Iterable, Iterator, Optional

from dpstab.generate import graphs_up_to, regular_graphs_up_to
from dpstab.graph import (
    Graph,
    GraphError,
    circulant,
    complete_graph,
    components,
    cycle_graph,
    emit_graph6,
    generalized_petersen,
    heawood,
    hypercube,
    is_bipartite,
    is_connected,
    is_r_thin,
    k2,
    kneser,
    named_graph,
    read_graph6_lines,
    valency,
)
from dpstab.permgroup import (
    DEFAULT_NODE_BUDGET,
    certificate,
    is_arc_transitive,
    is_automorphism,
    is_identity,
    is_vertex_transitive,
)
from dpstab.products import DEFAULT_VERTEX_CAP, direct_product
from dpstab.stability import (
    DEFAULT_COPRIME_BOUND,
    CoprimeStatus,
    TwoFoldAutomorphism,
    VerdictKind,
    aut_order,
    classify_graph,
    classify_pair,
    coprimality,
    fiber_automorphisms,
    find_sigma_automorphism,
    find_two_fold,
    is_stable_pair,
    two_fold_closure_ops,
)

PASS, FAIL, SKIP, INCONCLUSIVE = "pass", "fail", "skip", "inconclusive"


@dataclass
class CheckResult:
    check: str
    status: str
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status in (PASS, SKIP)

    def to_dict(self) -> dict:
        return {"check": self.check, "status": self.status, "details": self.details}


@dataclass
class Limits:
    budget: int = DEFAULT_NODE_BUDGET
    vertex_cap: int = DEFAULT_VERTEX_CAP
    coprime_bound: int = DEFAULT_COPRIME_BOUND


def _classify(gamma, sigma, limits: Limits):
    return classify_pair(gamma, sigma, limits.budget, limits.vertex_cap, limits.coprime_bound)


def _regular_coprime(gamma: Graph, sigma: Graph) -> Optional[str]:
    kg, ks = valency(gamma), valency(sigma)
    if kg is None:
        return "gamma not regular"
    if ks is None:
        return "sigma not regular"
    if gcd(kg, ks) != 1:
        return f"valencies {kg} and {ks} not coprime"
    return None


def _unclassified(*verdicts) -> bool:
    return any(v.kind is VerdictKind.UNSTABLE_UNCLASSIFIED for v in verdicts)


# ---------------------------------------------------------------- theorem checks


def verify_theorem_1a(gamma: Graph, sigma: Graph, limits: Limits = Limits()) -> CheckResult:
    """Sigma connected, R-thin, bipartite, vertex-transitive; valencies coprime:
    the pair is nontrivially unstable iff gamma is."""
    name = "theorem-a"
    why = _regular_coprime(gamma, sigma)
    if why is None:
        for ok, reason in (
            (is_connected(sigma), "sigma disconnected"),
            (is_r_thin(sigma), "sigma R-thick"),
            (is_bipartite(sigma), "sigma non-bipartite"),
            (is_vertex_transitive(sigma, limits.budget), "sigma not vertex-transitive"),
        ):
            if not ok:
                why = reason
                break
    if why is not None:
        return CheckResult(name, SKIP, {"reason": why})
    pair = _classify(gamma, sigma, limits)
    single = _classify(gamma, k2(), limits)
    details = {"pair": pair.kind.value, "gamma": single.kind.value}
    if _unclassified(pair, single):
        return CheckResult(name, INCONCLUSIVE, details)
    lhs = pair.kind is VerdictKind.NONTRIVIALLY_UNSTABLE
    rhs = single.kind is VerdictKind.NONTRIVIALLY_UNSTABLE
    return CheckResult(name, PASS if lhs == rhs else FAIL, details)


def verify_theorem_1b(gamma: Graph, sigma: Graph, limits: Limits = Limits()) -> CheckResult:
    """Sigma vertex-transitive and disconnected, R-thick or non-bipartite; valencies
    coprime: the pair is not nontrivially unstable."""
    name = "theorem-b"
    why = _regular_coprime(gamma, sigma)
    if why is None and not is_vertex_transitive(sigma, limits.budget):
        why = "sigma not vertex-transitive"
    if why is None and is_connected(sigma) and is_r_thin(sigma) and is_bipartite(sigma):
        why = "sigma connected, R-thin and bipartite"
    if why is not None:
        return CheckResult(name, SKIP, {"reason": why})
    pair = _classify(gamma, sigma, limits)
    details = {"pair": pair.kind.value}
    if _unclassified(pair):
        return CheckResult(name, INCONCLUSIVE, details)
    return CheckResult(name, FAIL if pair.kind is VerdictKind.NONTRIVIALLY_UNSTABLE else PASS, details)


def verify_prop_km(gamma: Graph, m: int, limits: Limits = Limits()) -> CheckResult:
    name = "prop-km"
    k = valency(gamma)
    if m < 3:
        return CheckResult(name, SKIP, {"reason": "m < 3"})
    if k is None or gcd(k, m - 1) != 1:
        return CheckResult(name, SKIP, {"reason": f"valency not coprime to {m - 1}"})
    if aut_order(gamma, limits.budget) == 1:
        return CheckResult(name, SKIP, {"reason": "trivial automorphism group"})
    verdict = _classify(gamma, complete_graph(m), limits)
    expect = VerdictKind.STABLE if is_connected(gamma) and is_r_thin(gamma) else VerdictKind.TRIVIALLY_UNSTABLE
    details = {"m": m, "verdict": verdict.kind.value, "expected": expect.value}
    return CheckResult(name, PASS if verdict.kind is expect else FAIL, details)


def verify_prop_cm(gamma: Graph, m: int, limits: Limits = Limits()) -> CheckResult:
    name = "prop-cm"
    k = valency(gamma)
    if m < 3:
        return CheckResult(name, SKIP, {"reason": "m < 3"})
    if k is None or k % 2 == 0:
        return CheckResult(name, SKIP, {"reason": "valency not odd"})
    if not is_connected(gamma) or not is_r_thin(gamma):
        return CheckResult(name, SKIP, {"reason": "gamma disconnected or R-thick"})
    if aut_order(gamma, limits.budget) == 1:
        return CheckResult(name, SKIP, {"reason": "trivial automorphism group"})
    verdict = _classify(gamma, cycle_graph(m), limits)
    details = {"m": m, "verdict": verdict.kind.value}
    if m % 2:
        expect = VerdictKind.STABLE
    elif m == 4:
        expect = VerdictKind.TRIVIALLY_UNSTABLE
    else:
        single = _classify(gamma, k2(), limits)
        details["gamma"] = single.kind.value
        if _unclassified(verdict, single):
            return CheckResult(name, INCONCLUSIVE, details)
        expect = single.kind
    details["expected"] = expect.value
    return CheckResult(name, PASS if verdict.kind is expect else FAIL, details)


# ---------------------------------------------------------------- sweeps


def vertex_transitive_regular(max_order: int, budget: int = DEFAULT_NODE_BUDGET) -> list[Graph]:
    return [g for g in regular_graphs_up_to(max_order) if is_vertex_transitive(g, budget)]


def theorem_sweep(gamma_cap: int = 8, sigma_cap: int = 6, limits: Limits = Limits()) -> list[CheckResult]:
    """Every pair of regular graphs with coprime valencies, gamma of order
    <= gamma_cap and vertex-transitive sigma of order <= sigma_cap."""
    out = []
    sigmas = vertex_transitive_regular(sigma_cap, limits.budget)
    for gamma in regular_graphs_up_to(gamma_cap):
        for sigma in sigmas:
            if _regular_coprime(gamma, sigma) is not None:
                continue
            part_a = is_connected(sigma) and is_r_thin(sigma) and is_bipartite(sigma)
            res = verify_theorem_1a(gamma, sigma, limits) if part_a else verify_theorem_1b(gamma, sigma, limits)
            res.details.update(gamma=emit_graph6(gamma), sigma=emit_graph6(sigma))
            out.append(res)
    return out


def prop_km_sweep(max_order: int = 10, ms: Iterable[int] = (3, 4, 5), limits: Limits = Limits()) -> list[CheckResult]:
    """verify_prop_km over every regular graph of order <= max_order."""
    out = []
    for gamma in regular_graphs_up_to(max_order):
        for m in ms:
            res = verify_prop_km(gamma, m, limits)
            res.details["gamma"] = emit_graph6(gamma)
            out.append(res)
    return out


def prop_cm_sweep(max_order: int = 10, ms: Iterable[int] = (3, 4, 5, 6, 7, 8), limits: Limits = Limits()) -> list[CheckResult]:
    """verify_prop_cm over every regular graph of order <= max_order."""
    out = []
    for gamma in regular_graphs_up_to(max_order):
        for m in ms:
            res = verify_prop_cm(gamma, m, limits)
            res.details["gamma"] = emit_graph6(gamma)
            out.append(res)
    return out


def sigma_lemma_sweep(gamma_cap: int = 8, sigma_cap: int = 6, limits: Limits = Limits()) -> list[CheckResult]:
    """On connected R-thin regular pairs with coprime valencies, vertex-transitive
    sigma and a non-bipartite factor: a non-diagonal sigma-automorphism exists iff
    the verdict is nontrivially unstable."""
    out = []
    sigmas = [s for s in vertex_transitive_regular(sigma_cap, limits.budget) if is_connected(s) and is_r_thin(s)]
    for gamma in regular_graphs_up_to(gamma_cap):
        if not (is_connected(gamma) and is_r_thin(gamma)):
            continue
        for sigma in sigmas:
            if _regular_coprime(gamma, sigma) is not None:
                continue
            if is_bipartite(gamma) and is_bipartite(sigma):
                continue
            verdict = _classify(gamma, sigma, limits)
            witness = find_sigma_automorphism(gamma, sigma, limits.budget, limits.vertex_cap)
            details = {"gamma": emit_graph6(gamma), "sigma": emit_graph6(sigma), "verdict": verdict.kind.value,
                       "witness": witness is not None}
            if _unclassified(verdict):
                out.append(CheckResult("sigma-lemma", INCONCLUSIVE, details))
                continue
            ok = (witness is not None) == (verdict.kind is VerdictKind.NONTRIVIALLY_UNSTABLE)
            out.append(CheckResult("sigma-lemma", PASS if ok else FAIL, details))
    return out


def product_law_violations(gamma: Graph, sigma: Graph) -> list[str]:
    p = direct_product(gamma, sigma).graph
    bad = []
    if is_bipartite(p) == (not is_bipartite(gamma) and not is_bipartite(sigma)):
        bad.append("non-bipartite law")
    if is_r_thin(p) != (is_r_thin(gamma) and is_r_thin(sigma)):
        bad.append("R-thin law")
    if is_connected(gamma) and is_connected(sigma) and gamma.n >= 2 and sigma.n >= 2:
        k = len(components(p))
        expect = 2 if is_bipartite(gamma) and is_bipartite(sigma) else 1
        if k != expect:
            bad.append(f"connectivity law: {k} components, expected {expect}")
    dg, ds = gamma.degrees(), sigma.degrees()
    if any(p.degree(u * sigma.n + x) != dg[u] * ds[x] for u in range(gamma.n) for x in range(sigma.n)):
        bad.append("degree law")
    return bad


def lemma_sweeps(order_cap: int = 5, single_cap: Optional[int] = None, seed: int = 0, fuzz_trials: int = 0,
                 limits: Limits = Limits()) -> dict:
    """Product laws and stability invariants over every graph up to the caps.

    Pair suites run over all pairs of order <= ``order_cap``; single-graph
    suites over order <= ``single_cap`` (defaults to ``order_cap``).
    """
    single_cap = order_cap if single_cap is None else single_cap
    violations = []
    pair_graphs = graphs_up_to(order_cap)
    pairs = 0
    for gamma in pair_graphs:
        for sigma in pair_graphs:
            pairs += 1
            tag = {"gamma": emit_graph6(gamma), "sigma": emit_graph6(sigma)}
            for law in product_law_violations(gamma, sigma):
                violations.append({**tag, "law": law, "note": _pair_note(gamma, sigma)})
            stable, (a, b, c) = is_stable_pair(gamma, sigma, limits.budget, limits.vertex_cap)
            if c < a * b:
                violations.append({**tag, "law": "order inequality"})
            sa = find_sigma_automorphism(gamma, sigma, limits.budget, limits.vertex_cap)
            if sa is not None and stable:
                violations.append({**tag, "law": "non-diagonal sigma-automorphism on a stable pair"})
    singles = graphs_up_to(single_cap)
    for gamma in singles:
        tag = {"gamma": emit_graph6(gamma)}
        violations.extend({**tag, "law": law, "note": _single_note(gamma)}
                          for law in single_graph_violations(gamma, limits))
    rng = random.Random(seed)
    for _ in range(fuzz_trials):
        gamma = rng.choice(singles)
        perm = list(range(gamma.n))
        rng.shuffle(perm)
        if classify_graph(gamma).kind != classify_graph(gamma.relabel(perm)).kind:
            violations.append({"gamma": emit_graph6(gamma), "law": "verdict changed under relabelling"})
    return {
        "order_cap": order_cap,
        "single_cap": single_cap,
        "pairs": pairs,
        "graphs": len(singles),
        "fuzz_trials": fuzz_trials,
        "violations": violations,
    }


def _pair_note(gamma: Graph, sigma: Graph) -> str:
    iso = [name for name, g in (("gamma", gamma), ("sigma", sigma)) if min(g.degrees()) == 0]
    return f"{' and '.join(iso)} has an isolated vertex" if iso else ""


def _single_note(gamma: Graph) -> str:
    flags = [w for w, ok in (("disconnected", not is_connected(gamma)), ("bipartite", is_bipartite(gamma))) if ok]
    return f"gamma {' and '.join(flags)}; the double cover has layer-mixing automorphisms" if flags else ""


def single_graph_violations(gamma: Graph, limits: Limits = Limits()) -> list[str]:
    bad = []
    stable, _ = is_stable_pair(gamma, k2(), limits.budget, limits.vertex_cap)
    witness = find_two_fold(gamma, limits.budget, limits.vertex_cap)
    if stable == (witness is not None):
        bad.append("instability <=> nontrivial two-fold automorphism")
    gens, _ = fiber_automorphisms(gamma, k2(), limits.budget, limits.vertex_cap)
    tfas = [TwoFoldAutomorphism(sa.perms[0], sa.perms[1]) for sa in gens]
    for t in tfas:
        if not t.nontrivial:
            continue
        if (is_identity(t.alpha) or is_identity(t.beta)) and is_r_thin(gamma):
            bad.append("nontrivial two-fold with an identity coordinate on an R-thin graph")
        if (is_automorphism(gamma, t.alpha) or is_automorphism(gamma, t.beta)) and is_r_thin(gamma):
            bad.append("nontrivial two-fold with an automorphism coordinate on an R-thin graph")
    for t1, t2 in combinations(tfas[:4], 2):
        two_fold_closure_ops(t1, t2, gamma)
    return bad


# ---------------------------------------------------------------- corpora


def arc_transitive_set(max_order: int = 20, budget: int = DEFAULT_NODE_BUDGET) -> list[tuple[str, Graph]]:
    """Connected arc-transitive graphs of order 2..max_order drawn from circulants,
    a few classical families and their complements.  A desk-scale stand-in for a
    census file; it is not claimed to be complete."""
    candidates: list[tuple[str, Graph]] = []
    for n in range(2, max_order + 1):
        half = n // 2
        for r in range(1, half + 1):
            for conn in combinations(range(1, half + 1), r):
                candidates.append((f"circulant({n};{','.join(map(str, conn))})", circulant(n, conn)))
    extra = [
        ("petersen", named_graph("petersen")),
        ("heawood", heawood()),
        ("dodecahedron", generalized_petersen(10, 2)),
        ("desargues", generalized_petersen(10, 3)),
        ("moebius-kantor", generalized_petersen(8, 3)),
        ("q4", hypercube(4)),
    ]
    for n, k in ((6, 2), (6, 3), (7, 2), (7, 3)):
        g = kneser(n, k)
        if g.n <= max_order:
            extra.append((f"kneser({n},{k})", g))
    for a in range(2, 6):
        for b in range(a, 11):
            if a * b <= max_order:
                extra.append((f"k{a}xk{b}", direct_product(complete_graph(a), complete_graph(b)).graph))
    for a in range(2, 6):
        for b in range(2, 11):
            if a * b <= max_order:
                extra.append((f"k{a},{b}", named_graph(f"k{a},{b}")))
    candidates.extend((name, g) for name, g in extra if g.n <= max_order)
    candidates.extend((f"complement({name})", g.complement()) for name, g in list(candidates))
    seen = {}
    for name, g in candidates:
        if g.num_edges == 0 or not is_connected(g):
            continue
        cert = certificate(g, budget)
        if cert in seen:
            continue
        if is_arc_transitive(g, budget):
            seen[cert] = (name, g)
    return sorted(seen.values(), key=lambda item: (item[1].n, item[1].num_edges, emit_graph6(item[1])))


def read_corpus(lines: Iterable[str]) -> Iterator[tuple[str, object]]:
    """Yield ``(id, Graph | GraphError)`` for a graph6 stream; ids are ``line<k>``."""
    for lineno, _, item in read_graph6_lines(lines):
        yield f"line{lineno}", item


# ---------------------------------------------------------------- scans


@dataclass
class ScanReport:
    records: list[dict]
    config: dict
    timings: list[float] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        counts: dict[str, int] = {}
        for r in self.records:
            counts[r["status"]] = counts.get(r["status"], 0) + 1
        return {"instances": len(self.records), **dict(sorted(counts.items()))}

    @property
    def counterexamples(self) -> list[dict]:
        return [r for r in self.records if r["status"] == "counterexample"]

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "summary": self.summary,
            "counterexamples": self.counterexamples,
            "records": self.records,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["graph", "g6", "m", "status", "reason", "aut_gamma", "aut_sigma", "aut_product"]
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in self.records:
            w.writerow(r)
        return buf.getvalue()


def conjecture_instance(graph_id: str, gamma: Graph, m: int, limits: Limits) -> dict:
    """One (gamma, K_m) check of the conjecture that connected R-thin gamma with
    nontrivial automorphisms and coprime to K_m gives a stable pair."""
    rec = {"graph": graph_id, "g6": emit_graph6(gamma), "m": m}
    if not is_connected(gamma):
        return {**rec, "status": "skipped", "reason": "disconnected"}
    if not is_r_thin(gamma):
        return {**rec, "status": "skipped", "reason": "R-thick"}
    if aut_order(gamma, limits.budget) == 1:
        return {**rec, "status": "skipped", "reason": "trivial automorphism group"}
    cop = coprimality(gamma, complete_graph(m), limits.coprime_bound, limits.budget)
    if cop.status is CoprimeStatus.NOT_COPRIME:
        return {**rec, "status": "skipped", "reason": "not coprime to K_m"}
    if cop.status is CoprimeStatus.UNKNOWN:
        return {**rec, "status": "skipped", "reason": "coprimality unknown"}
    stable, (a, b, c) = is_stable_pair(gamma, complete_graph(m), limits.budget, limits.vertex_cap)
    rec.update(aut_gamma=str(a), aut_sigma=str(b), aut_product=str(c))
    if stable:
        return {**rec, "status": "stable", "reason": ""}
    witness = find_sigma_automorphism(gamma, complete_graph(m), limits.budget, limits.vertex_cap)
    rec["witness"] = witness.to_dict() if witness is not None else None
    return {**rec, "status": "counterexample", "reason": "unstable"}


def _timed_instance(args):
    graph_id, gamma, m, limits = args
    t = time.perf_counter()
    rec = conjecture_instance(graph_id, gamma, m, limits)
    return rec, time.perf_counter() - t


def conjecture_scan(
    corpus: Iterable[tuple[str, object]],
    m_range: Iterable[int],
    limits: Limits = Limits(),
    jobs: int = 1,
) -> ScanReport:
    ms = list(m_range)
    records: list[Optional[dict]] = []
    tasks = []
    for graph_id, item in corpus:
        if isinstance(item, GraphError):
            records.append({"graph": graph_id, "g6": "", "m": "", "status": "unreadable", "reason": str(item)})
            continue
        for m in ms:
            tasks.append((len(records), (graph_id, item, m, limits)))
            records.append(None)
    timings = [0.0] * len(records)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_timed_instance, [t for _, t in tasks], chunksize=4))
    else:
        results = [_timed_instance(t) for _, t in tasks]
    for (slot, _), (rec, dt) in zip(tasks, results):
        records[slot] = rec
        timings[slot] = dt
    config = {"m_range": ms, "budget": limits.budget, "vertex_cap": limits.vertex_cap,
              "coprime_bound": limits.coprime_bound}
    return ScanReport(records, config, timings)
