"""Stability of graphs and graph pairs under the direct product.

A pair ``(gamma, sigma)`` is stable when ``Aut(gamma) x Aut(sigma)`` is the
whole of ``Aut(gamma x sigma)``.  The product action always embeds the former
in the latter, so the test reduces to comparing group orders.

Witnesses of instability are two-fold automorphisms ``(alpha, beta)`` and
sigma-automorphisms ``(alpha_0, ..., alpha_{m-1})``.  Both are read off from
automorphisms of the product that fix every fiber ``V(gamma) x {i}``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence

from dpstab.factor import LOOPED_ENUM_CAP, LoopedGraph, divide, is_product_of, looped_graphs, plausible_factor
from dpstab.graph import (
    Bipartition,
    Graph,
    is_bipartite,
    is_connected,
    is_r_thin,
    k2,
    valency,
)
from dpstab.permgroup import (
    DEFAULT_NODE_BUDGET,
    Perm,
    ResourceError,
    automorphism_group,
    inverse,
    mul,
)
from dpstab.products import DEFAULT_VERTEX_CAP, direct_product, fiber_coloring

DEFAULT_COPRIME_BOUND = 12


class WitnessError(ValueError):
    """A witness object failed its defining condition or an operation's precondition."""


# ---------------------------------------------------------------- witnesses


def _two_fold_holds(g: Graph, alpha: Sequence[int], beta: Sequence[int]) -> bool:
    # {u, v} in E  <=>  {u^alpha, v^beta} in E, checked row by row
    for u in range(g.n):
        img = 0
        row = g.adj[alpha[u]]
        for v in range(g.n):
            if row >> beta[v] & 1:
                img |= 1 << v
        if img != g.adj[u]:
            return False
    return True


@dataclass(frozen=True)
class TwoFoldAutomorphism:
    alpha: Perm
    beta: Perm

    @property
    def nontrivial(self) -> bool:
        return self.alpha != self.beta

    def is_valid_for(self, g: Graph) -> bool:
        return len(self.alpha) == len(self.beta) == g.n and _two_fold_holds(g, self.alpha, self.beta)

    def swap(self) -> "TwoFoldAutomorphism":
        return TwoFoldAutomorphism(self.beta, self.alpha)

    def inverse(self) -> "TwoFoldAutomorphism":
        return TwoFoldAutomorphism(inverse(self.alpha), inverse(self.beta))

    def then(self, other: "TwoFoldAutomorphism") -> "TwoFoldAutomorphism":
        """``(alpha gamma, beta delta)``: apply ``self`` first."""
        return TwoFoldAutomorphism(mul(self.alpha, other.alpha), mul(self.beta, other.beta))

    def to_dict(self) -> dict:
        return {"type": "two-fold", "alpha": list(self.alpha), "beta": list(self.beta)}


@dataclass(frozen=True)
class SigmaAutomorphism:
    """``perms[i]`` is the permutation of ``V(gamma)`` attached to sigma-vertex ``i``.

    ``pinned`` lists isolated sigma-vertices whose permutation the search fixed
    to the identity, since no edge constrains them.
    """

    perms: tuple[Perm, ...]
    pinned: tuple[int, ...] = ()

    @property
    def non_diagonal(self) -> bool:
        return len(set(self.perms)) > 1

    def differing_edge(self, sigma: Graph) -> Optional[tuple[int, int]]:
        for i, j in sigma.edges():
            if self.perms[i] != self.perms[j]:
                return i, j
        return None

    def is_valid_for(self, gamma: Graph, sigma: Graph) -> bool:
        if len(self.perms) != sigma.n or any(len(p) != gamma.n for p in self.perms):
            return False
        # (a, b) is two-fold iff (b, a) is, so one orientation per edge suffices
        return all(_two_fold_holds(gamma, self.perms[i], self.perms[j]) for i, j in sigma.edges())

    def to_dict(self) -> dict:
        return {
            "type": "sigma-automorphism",
            "perms": [list(p) for p in self.perms],
            "pinned": list(self.pinned),
        }


def lift_two_fold_to_sigma(
    tfa: TwoFoldAutomorphism, bip: Bipartition, gamma: Graph, sigma: Graph
) -> SigmaAutomorphism:
    """``alpha`` on side A of sigma, ``beta`` on side B."""
    if not bip.is_valid_for(sigma):
        raise WitnessError("bipartition is not valid for sigma")
    if not bip.a or not bip.b:
        raise WitnessError("bipartition needs two nonempty sides")
    if not tfa.is_valid_for(gamma):
        raise WitnessError("not a two-fold automorphism of gamma")
    sa = SigmaAutomorphism(tuple(tfa.alpha if s == 0 else tfa.beta for s in bip.side))
    if not sa.is_valid_for(gamma, sigma):
        raise AssertionError("lifted tuple fails the sigma-automorphism condition; this is a defect")
    return sa


def extract_two_fold_from_sigma(
    sa: SigmaAutomorphism, edge: tuple[int, int], gamma: Graph, sigma: Graph
) -> TwoFoldAutomorphism:
    i, j = edge
    if not sigma.has_edge(i, j):
        raise WitnessError(f"{{{i}, {j}}} is not an edge of sigma")
    if sa.perms[i] == sa.perms[j]:
        raise WitnessError(f"permutations at {i} and {j} coincide")
    tfa = TwoFoldAutomorphism(sa.perms[i], sa.perms[j])
    if not tfa.is_valid_for(gamma):
        raise WitnessError("input is not a sigma-automorphism of gamma along this edge")
    return tfa


def two_fold_closure_ops(
    t1: TwoFoldAutomorphism, t2: TwoFoldAutomorphism, gamma: Graph
) -> dict[str, TwoFoldAutomorphism]:
    out = {"swap": t1.swap(), "inverse": t1.inverse(), "composition": t1.then(t2)}
    for name, t in out.items():
        if not t.is_valid_for(gamma):
            raise AssertionError(f"{name} of two-fold automorphisms is not two-fold; this is a defect")
    return out


# ---------------------------------------------------------------- group orders


@lru_cache(maxsize=4096)
def aut_order(g: Graph, budget: int = DEFAULT_NODE_BUDGET) -> int:
    return automorphism_group(g, budget=budget).order


def is_stable_pair(
    gamma: Graph,
    sigma: Graph,
    budget: int = DEFAULT_NODE_BUDGET,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
) -> tuple[bool, tuple[int, int, int]]:
    """Stable iff ``|Aut(gamma x sigma)| == |Aut gamma| * |Aut sigma|``."""
    prod = direct_product(gamma, sigma, vertex_cap).graph
    a, b, c = aut_order(gamma, budget), aut_order(sigma, budget), aut_order(prod, budget)
    if c % (a * b):
        raise AssertionError(f"|Aut(product)| = {c} is not a multiple of {a} * {b}; this is a defect")
    return c == a * b, (a, b, c)


def is_stable_graph(gamma: Graph, budget: int = DEFAULT_NODE_BUDGET, vertex_cap: int = DEFAULT_VERTEX_CAP):
    return is_stable_pair(gamma, k2(), budget, vertex_cap)


def _fiber_group(gamma: Graph, sigma: Graph, budget: int, vertex_cap: int):
    p = direct_product(gamma, sigma, vertex_cap)
    m = sigma.n
    isolated = tuple(i for i in range(m) if sigma.adj[i] == 0)
    colors = fiber_coloring(p)
    for i in isolated:
        for u in range(gamma.n):
            colors[u * m + i] = m + u * m + i
    return p, isolated, automorphism_group(p.graph, colors, budget)


def _decompose(h: Perm, n1: int, m: int) -> tuple[Perm, ...]:
    perms = []
    for i in range(m):
        perm = []
        for u in range(n1):
            img, j = divmod(h[u * m + i], m)
            if j != i:
                raise AssertionError("fiber-preserving automorphism left its fiber; this is a defect")
            perm.append(img)
        perms.append(tuple(perm))
    return tuple(perms)


def _compose_fibers(perms: Sequence[Perm], n1: int) -> Perm:
    m = len(perms)
    return tuple(perms[v % m][v // m] * m + v % m for v in range(n1 * m))


def fiber_automorphisms(
    gamma: Graph, sigma: Graph, budget: int = DEFAULT_NODE_BUDGET, vertex_cap: int = DEFAULT_VERTEX_CAP
):
    """Generators of the fiber-preserving automorphism group of ``gamma x sigma``,
    decomposed into sigma-automorphisms, plus the group order."""
    p, isolated, group = _fiber_group(gamma, sigma, budget, vertex_cap)
    out = []
    for h in group.generators:
        sa = SigmaAutomorphism(_decompose(h, gamma.n, sigma.n), isolated)
        if not sa.is_valid_for(gamma, sigma) or _compose_fibers(sa.perms, gamma.n) != h:
            raise AssertionError("fiber automorphism does not round-trip; this is a defect")
        out.append(sa)
    return out, group.order


def find_two_fold(
    gamma: Graph, budget: int = DEFAULT_NODE_BUDGET, vertex_cap: int = DEFAULT_VERTEX_CAP
) -> Optional[TwoFoldAutomorphism]:
    """A nontrivial two-fold automorphism of ``gamma``, or ``None`` if every
    two-fold automorphism is ``(g, g)`` with ``g`` in ``Aut(gamma)``."""
    gens, order = fiber_automorphisms(gamma, k2(), budget, vertex_cap)
    found = None
    for sa in gens:
        if sa.non_diagonal:
            found = TwoFoldAutomorphism(sa.perms[0], sa.perms[1])
            break
    if (found is not None) != (order > aut_order(gamma, budget)):
        raise AssertionError("two-fold generators disagree with the order count; this is a defect")
    if found is not None and not found.is_valid_for(gamma):
        raise AssertionError("two-fold witness failed re-verification; this is a defect")
    return found


def find_sigma_automorphism(
    gamma: Graph, sigma: Graph, budget: int = DEFAULT_NODE_BUDGET, vertex_cap: int = DEFAULT_VERTEX_CAP
) -> Optional[SigmaAutomorphism]:
    """A non-diagonal sigma-automorphism of ``gamma`` or ``None``.

    Isolated sigma-vertices get the identity (reported in ``pinned``).
    """
    gens, order = fiber_automorphisms(gamma, sigma, budget, vertex_cap)
    found = next((sa for sa in gens if sa.non_diagonal), None)
    if sigma.num_edges and not any(sigma.adj[i] == 0 for i in range(sigma.n)):
        if (found is not None) != (order > aut_order(gamma, budget)):
            raise AssertionError("sigma-automorphism generators disagree with the order count; this is a defect")
    return found


# ---------------------------------------------------------------- coprimality


class CoprimeStatus(str, enum.Enum):
    COPRIME = "coprime"
    NOT_COPRIME = "not-coprime"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class CoprimalityAnswer:
    """``delta``, ``gamma1`` and ``sigma1`` may carry loops: the witness states
    ``gamma ~= gamma1 x delta`` and ``sigma ~= sigma1 x delta``."""

    status: CoprimeStatus
    reason: str
    delta: Optional[LoopedGraph] = None
    gamma1: Optional[LoopedGraph] = None
    sigma1: Optional[LoopedGraph] = None

    def to_dict(self) -> dict:
        out = {"status": self.status.value, "reason": self.reason}
        if self.status is CoprimeStatus.NOT_COPRIME:
            out.update(delta=self.delta.to_dict(), gamma1=self.gamma1.to_dict(), sigma1=self.sigma1.to_dict())
        return out


def _candidates(d: int, gamma: Graph, sigma: Graph) -> Optional[list[LoopedGraph]]:
    """Looped graphs of order ``d`` that could divide both; ``None`` if the
    order is beyond the enumeration cap."""
    if gamma.num_edges == 0 and sigma.num_edges == 0:
        return [LoopedGraph(d, (0,) * d)]
    for g in (gamma, sigma):
        if g.n == d and g.num_edges:
            # the cofactor has one vertex, so it must be the looped unit
            return [LoopedGraph.of(g)]
    if d > LOOPED_ENUM_CAP:
        return None
    return [
        delta
        for delta in looped_graphs(d)
        if all(g.num_edges == 0 or plausible_factor(delta, g) for g in (gamma, sigma))
    ]


def coprimality(
    gamma: Graph, sigma: Graph, bound: int = DEFAULT_COPRIME_BOUND, budget: int = DEFAULT_NODE_BUDGET
) -> CoprimalityAnswer:
    """Decide whether some ``delta`` of order > 1 divides both graphs.

    Factors may carry loops, so every graph of order > 1 divides itself.
    Sufficient conditions are tried first (coprime orders; regular with coprime
    valencies and one side non-bipartite), then a bounded factor search over
    common divisors ``d`` of the orders with ``d <= bound``.
    """
    n1, n2 = gamma.n, sigma.n
    g = gcd(n1, n2)
    if g == 1:
        return CoprimalityAnswer(CoprimeStatus.COPRIME, "orders are coprime")
    k1, k2_ = valency(gamma), valency(sigma)
    if k1 is not None and k2_ is not None and gcd(k1, k2_) == 1:
        if not is_bipartite(gamma) or not is_bipartite(sigma):
            return CoprimalityAnswer(
                CoprimeStatus.COPRIME, "regular with coprime valencies, one factor non-bipartite"
            )
    complete = True
    for d in range(2, g + 1):
        if g % d:
            continue
        cands = _candidates(d, gamma, sigma) if d <= bound else None
        if cands is None:
            complete = False
            continue
        # divide the graph with fewer vertices first; it usually fails fastest
        first, second = (sigma, gamma) if n2 <= n1 else (gamma, sigma)
        for delta in cands:
            try:
                c1 = divide(first, delta)
                c2 = divide(second, delta) if c1 is not None else None
            except ResourceError:
                complete = False
                continue
            if c1 is not None and c2 is not None:
                g1, s1 = (c2, c1) if first is sigma else (c1, c2)
                return CoprimalityAnswer(CoprimeStatus.NOT_COPRIME, f"common factor of order {d}", delta, g1, s1)
    if complete:
        return CoprimalityAnswer(CoprimeStatus.COPRIME, "exhaustive factor search found no common factor")
    return CoprimalityAnswer(CoprimeStatus.UNKNOWN, f"factor search truncated (bound {bound} or enumeration caps)")


def check_not_coprime_witness(gamma: Graph, sigma: Graph, ans: CoprimalityAnswer, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    if ans.status is not CoprimeStatus.NOT_COPRIME or ans.delta.n < 2:
        return False
    return is_product_of(gamma, ans.gamma1, ans.delta, budget) and is_product_of(sigma, ans.sigma1, ans.delta, budget)


# ---------------------------------------------------------------- verdicts


class VerdictKind(str, enum.Enum):
    STABLE = "stable"
    TRIVIALLY_UNSTABLE = "trivially-unstable"
    NONTRIVIALLY_UNSTABLE = "nontrivially-unstable"
    UNSTABLE_UNCLASSIFIED = "unstable-unclassified"


# enumerated hypothesis violations
GAMMA_DISCONNECTED = "gamma-disconnected"
SIGMA_DISCONNECTED = "sigma-disconnected"
GAMMA_R_THICK = "gamma-r-thick"
SIGMA_R_THICK = "sigma-r-thick"
BOTH_BIPARTITE = "both-bipartite"
NOT_COPRIME = "not-coprime"


@dataclass(frozen=True)
class StabilityVerdict:
    kind: VerdictKind
    orders: tuple[int, int, int]
    violations: tuple[str, ...] = ()
    undetermined: tuple[str, ...] = ()
    coprimality: Optional[CoprimalityAnswer] = None
    witness: Optional[object] = None
    notes: tuple[str, ...] = field(default=())

    @property
    def stable(self) -> bool:
        return self.kind is VerdictKind.STABLE

    def to_dict(self) -> dict:
        a, b, c = self.orders
        return {
            "kind": self.kind.value,
            "orders": {"aut_gamma": str(a), "aut_sigma": str(b), "aut_product": str(c)},
            "violations": list(self.violations),
            "undetermined": list(self.undetermined),
            "coprimality": self.coprimality.to_dict() if self.coprimality else None,
            "witness": self.witness.to_dict() if self.witness is not None else None,
            "notes": list(self.notes),
        }


def hypothesis_violations(gamma: Graph, sigma: Graph, coprime: CoprimalityAnswer) -> tuple[list[str], list[str]]:
    violated, unknown = [], []
    if not is_connected(gamma):
        violated.append(GAMMA_DISCONNECTED)
    if not is_connected(sigma):
        violated.append(SIGMA_DISCONNECTED)
    if not is_r_thin(gamma):
        violated.append(GAMMA_R_THICK)
    if not is_r_thin(sigma):
        violated.append(SIGMA_R_THICK)
    if is_bipartite(gamma) and is_bipartite(sigma):
        violated.append(BOTH_BIPARTITE)
    if coprime.status is CoprimeStatus.NOT_COPRIME:
        violated.append(NOT_COPRIME)
    elif coprime.status is CoprimeStatus.UNKNOWN:
        unknown.append("coprime")
    return violated, unknown


def classify_pair(
    gamma: Graph,
    sigma: Graph,
    budget: int = DEFAULT_NODE_BUDGET,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
    coprime_bound: int = DEFAULT_COPRIME_BOUND,
) -> StabilityVerdict:
    stable, orders = is_stable_pair(gamma, sigma, budget, vertex_cap)
    if stable:
        return StabilityVerdict(VerdictKind.STABLE, orders)
    coprime = coprimality(gamma, sigma, coprime_bound, budget)
    violated, unknown = hypothesis_violations(gamma, sigma, coprime)
    notes = []
    if violated:
        kind = VerdictKind.TRIVIALLY_UNSTABLE
        witness = None
    else:
        kind = VerdictKind.UNSTABLE_UNCLASSIFIED if unknown else VerdictKind.NONTRIVIALLY_UNSTABLE
        witness = find_sigma_automorphism(gamma, sigma, budget, vertex_cap)
        if witness is not None and witness.pinned:
            notes.append("isolated sigma-vertices pinned to the identity")
    return StabilityVerdict(kind, orders, tuple(violated), tuple(unknown), coprime, witness, tuple(notes))


def classify_graph(
    gamma: Graph,
    budget: int = DEFAULT_NODE_BUDGET,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
    coprime_bound: int = DEFAULT_COPRIME_BOUND,
) -> StabilityVerdict:
    return classify_pair(gamma, k2(), budget, vertex_cap, coprime_bound)


def verify_verdict(gamma: Graph, sigma: Graph, verdict: StabilityVerdict, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """Re-check a verdict's evidence: orders, witness validity, and the
    kind/violation consistency."""
    stable, orders = is_stable_pair(gamma, sigma, budget)
    if orders != tuple(verdict.orders) or stable != verdict.stable:
        return False
    if (verdict.kind is VerdictKind.TRIVIALLY_UNSTABLE) != bool(verdict.violations):
        return False
    w = verdict.witness
    if isinstance(w, SigmaAutomorphism) and not (w.is_valid_for(gamma, sigma) and w.non_diagonal):
        return False
    if isinstance(w, TwoFoldAutomorphism) and not (w.is_valid_for(gamma) and w.nontrivial):
        return False
    if verdict.coprimality is not None and verdict.coprimality.status is CoprimeStatus.NOT_COPRIME:
        return check_not_coprime_witness(gamma, sigma, verdict.coprimality, budget)
    return True

