"""Direct-product divisibility with looped factors.

Factorisation under the direct product is only well behaved when factors may
carry loops: the one-vertex graph with a loop is the unit, so every graph
divides itself, and ``K_4 x K_2`` shares the factor ``K_4`` with ``K_4``.
Products of loopless graphs with looped ones can still be loopless.

A looped graph is stored like :class:`Graph` but bit ``v`` of row ``v`` marks
a loop at ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from dpstab.generate import graphs_of_order
from dpstab.graph import Graph, bits, emit_graph6, is_bipartite, is_connected
from dpstab.permgroup import DEFAULT_NODE_BUDGET, ResourceError, canonical_labeling

# looped graphs are enumerated up to this order (1, 2, 6, 20, 90, 544 classes)
LOOPED_ENUM_CAP = 5
DIVISION_BUDGET = 200_000


@dataclass(frozen=True)
class LoopedGraph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ValueError("row count does not match order")
        for u, row in enumerate(self.adj):
            for v in bits(row):
                if not self.adj[v] >> u & 1:
                    raise ValueError(f"asymmetric adjacency at ({u}, {v})")

    @classmethod
    def of(cls, g: Graph) -> "LoopedGraph":
        return cls(g.n, g.adj)

    @property
    def loops(self) -> list[int]:
        return [v for v in range(self.n) if self.adj[v] >> v & 1]

    @property
    def entry_sum(self) -> int:
        return sum(r.bit_count() for r in self.adj)

    def degree(self, v: int) -> int:
        # a loop contributes one to the row sum
        return self.adj[v].bit_count()

    def loopless_part(self) -> Graph:
        return Graph(self.n, tuple(r & ~(1 << v) for v, r in enumerate(self.adj)))

    def to_graph(self) -> Graph:
        if self.loops:
            raise ValueError("graph has loops")
        return Graph(self.n, self.adj)

    def relabel(self, perm) -> "LoopedGraph":
        rows = [0] * self.n
        for u, row in enumerate(self.adj):
            rows[perm[u]] = sum(1 << perm[v] for v in bits(row))
        return LoopedGraph(self.n, tuple(rows))

    def to_dict(self) -> dict:
        return {"graph6": emit_graph6(self.loopless_part()), "loops": self.loops}


UNIT = LoopedGraph(1, (1,))


def looped_product(a: LoopedGraph, b: LoopedGraph) -> LoopedGraph:
    """Kronecker product of adjacency matrices, vertex ``(u, x)`` at ``u*b.n + x``."""
    n2 = b.n
    rows = []
    for u in range(a.n):
        nbrs = bits(a.adj[u])
        for x in range(n2):
            row = 0
            for v in nbrs:
                row |= b.adj[x] << (v * n2)
            rows.append(row)
    return LoopedGraph(a.n * n2, tuple(rows))


def looped_certificate(g: LoopedGraph, budget: int = DEFAULT_NODE_BUDGET) -> tuple[int, tuple[int, ...]]:
    base = g.loopless_part()
    colors = [g.adj[v] >> v & 1 for v in range(g.n)]
    return g.n, g.relabel(canonical_labeling(base, colors, budget)).adj


@lru_cache(maxsize=None)
def looped_graphs(d: int) -> tuple[LoopedGraph, ...]:
    """Every looped graph of order ``d`` up to isomorphism."""
    seen = {}
    for g in graphs_of_order(d):
        for loops in range(1 << d):
            h = LoopedGraph(d, tuple(r | ((loops >> v & 1) << v) for v, r in enumerate(g.adj)))
            seen.setdefault(looped_certificate(h), h)
    return tuple(seen[c] for c in sorted(seen))


def _bipartite_looped(g: LoopedGraph) -> bool:
    return not g.loops and is_bipartite(g.to_graph())


def plausible_factor(delta: LoopedGraph, g: Graph) -> bool:
    """Cheap necessary conditions for ``delta`` to divide ``g`` (g with edges)."""
    s = delta.entry_sum
    if s == 0 or (2 * g.num_edges) % s:
        return False
    if not is_bipartite(g) and _bipartite_looped(delta):
        return False
    if is_connected(g) and not is_connected(delta.loopless_part()):
        return False
    k = g.n // delta.n
    degs = g.degrees()
    for x in range(delta.n):
        dx = delta.degree(x)
        if dx == 0:
            if sum(1 for a in degs if a == 0) < k:
                return False
        elif sum(1 for a in degs if a % dx == 0) < k:
            return False
    return True


def divide(g: Graph, delta: LoopedGraph, budget: int = DIVISION_BUDGET) -> Optional[LoopedGraph]:
    """A cofactor ``h`` with ``g ~= h x delta``, or ``None`` when there is none.

    Backtracking over placements of the vertices of ``g`` into the grid
    ``[k] x V(delta)``; the cofactor's adjacency is read off as it goes.
    Raises :class:`ResourceError` when the budget runs out.
    """
    n, d = g.n, delta.n
    if n % d:
        return None
    k = n // d
    if g.num_edges == 0:
        return LoopedGraph(k, (0,) * k)
    if delta.entry_sum == 0:
        return None
    A = [[delta.adj[x] >> y & 1 for y in range(d)] for x in range(d)]
    ddeg = [delta.degree(x) for x in range(d)]
    gdeg = g.degrees()

    order = []
    seen = 0
    for s in sorted(range(n), key=lambda v: -gdeg[v]):
        if seen >> s & 1:
            continue
        seen |= 1 << s
        queue = [s]
        while queue:
            u = queue.pop(0)
            order.append(u)
            for w in bits(g.adj[u] & ~seen):
                seen |= 1 << w
                queue.append(w)

    cls = [-1] * n
    col = [-1] * n
    taken = [[False] * d for _ in range(k)]
    E = [[-1] * k for _ in range(k)]
    nodes = 0

    def place(t: int, opened: int) -> bool:
        nonlocal nodes
        if t == n:
            return True
        a = order[t]
        for i in range(min(opened + 1, k)):
            for x in range(d):
                if taken[i][x]:
                    continue
                if ddeg[x] == 0:
                    if gdeg[a]:
                        continue
                elif gdeg[a] % ddeg[x] or gdeg[a] // ddeg[x] > k:
                    continue
                nodes += 1
                if nodes > budget:
                    raise ResourceError(f"divisibility search exceeded {budget} nodes")
                undo = []
                ok = True
                if A[x][x]:
                    if E[i][i] == 1:
                        ok = False
                    elif E[i][i] == -1:
                        E[i][i] = 0
                        undo.append((i, i))
                if ok:
                    for b in order[:t]:
                        j, y = cls[b], col[b]
                        edge = g.adj[a] >> b & 1
                        if A[x][y]:
                            if E[i][j] == -1:
                                E[i][j] = E[j][i] = edge
                                undo.append((i, j))
                            elif E[i][j] != edge:
                                ok = False
                                break
                        elif edge:
                            ok = False
                            break
                if ok:
                    cls[a], col[a] = i, x
                    taken[i][x] = True
                    if place(t + 1, max(opened, i + 1)):
                        return True
                    taken[i][x] = False
                    cls[a] = col[a] = -1
                for p, q in undo:
                    E[p][q] = E[q][p] = -1
        return False

    if not place(0, 0):
        return None
    rows = tuple(sum(1 << j for j in range(k) if E[i][j] == 1) for i in range(k))
    return LoopedGraph(k, rows)


def is_product_of(g: Graph, cofactor: LoopedGraph, delta: LoopedGraph, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """Certificate check that ``g ~= cofactor x delta``."""
    p = looped_product(cofactor, delta)
    if p.loops:
        return False
    return looped_certificate(p, budget) == looped_certificate(LoopedGraph.of(g), budget)
