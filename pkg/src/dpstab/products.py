"""Direct (tensor) products and canonical double covers.

Product vertex ``(u, x)`` with ``u`` in the first factor and ``x`` in the
second has index ``u * n2 + x``.  This indexing is fixed; witnesses are
reported in coordinates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from dpstab.graph import Graph, bits, k2
from dpstab.permgroup import ResourceError

DEFAULT_VERTEX_CAP = 4096
INDEXING = "(u, x) -> u*n2 + x"


class VertexCapError(ResourceError):
    pass


@dataclass(frozen=True)
class ProductGraph:
    graph: Graph
    n1: int
    n2: int

    def index(self, u: int, x: int) -> int:
        return u * self.n2 + x

    def coords(self, v: int) -> tuple[int, int]:
        return divmod(v, self.n2)

    def sidecar(self) -> dict:
        return {"n1": self.n1, "n2": self.n2, "indexing": INDEXING}

    def sidecar_json(self) -> str:
        return json.dumps(self.sidecar(), sort_keys=True)


def direct_product(gamma: Graph, sigma: Graph, vertex_cap: int = DEFAULT_VERTEX_CAP) -> ProductGraph:
    n1, n2 = gamma.n, sigma.n
    if n1 * n2 > vertex_cap:
        raise VertexCapError(f"product has {n1 * n2} vertices, above the cap of {vertex_cap}")
    rows = []
    for u in range(n1):
        nbrs = bits(gamma.adj[u])
        for x in range(n2):
            sx = sigma.adj[x]
            row = 0
            for v in nbrs:
                row |= sx << (v * n2)
            rows.append(row)
    return ProductGraph(Graph(n1 * n2, tuple(rows)), n1, n2)


def canonical_double_cover(g: Graph, vertex_cap: int = DEFAULT_VERTEX_CAP) -> ProductGraph:
    return direct_product(g, k2(), vertex_cap)


def fiber(p: ProductGraph, i: int) -> list[int]:
    """Product vertices ``(u, i)`` for every ``u`` in the first factor."""
    if not 0 <= i < p.n2:
        raise IndexError(f"second-factor vertex {i} out of range 0..{p.n2 - 1}")
    return [u * p.n2 + i for u in range(p.n1)]


def fiber_coloring(p: ProductGraph) -> list[int]:
    return [v % p.n2 for v in range(p.graph.n)]
