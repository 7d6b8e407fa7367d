"""Isomorphism-free enumeration of small graphs by vertex augmentation.

Every graph of order ``j + 1`` arises from one of order ``j`` by adding a
vertex, so extending each representative by every admissible neighbourhood
and deduplicating by canonical form yields each isomorphism class once.
Class lists are returned in canonical form, sorted by graph6 string.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable

from dpstab.graph import (
    Graph,
    bipartition,
    complete_graph,
    components,
    cycle_graph,
    disjoint_union,
    emit_graph6,
    empty_graph,
    is_connected,
)
from dpstab.permgroup import canonical_form


def _add_vertex(g: Graph, nbrs: int) -> Graph:
    n = g.n
    rows = [row | ((nbrs >> v & 1) << n) for v, row in enumerate(g.adj)]
    rows.append(nbrs)
    return Graph(n + 1, tuple(rows))


def _dedupe(graphs: Iterable[Graph]) -> list[Graph]:
    seen = {}
    for g in graphs:
        c = canonical_form(g)
        seen.setdefault(c.adj, c)
    return sorted(seen.values(), key=emit_graph6)


def _augment(
    start: list[Graph],
    target: int,
    neighbourhoods: Callable[[Graph, int], Iterable[int]],
    keep: Callable[[Graph, int], bool] = lambda g, target: True,
) -> list[Graph]:
    level = [g for g in start if keep(g, target)]
    while level and level[0].n < target:
        level = _dedupe(
            h
            for g in level
            for nb in neighbourhoods(g, target)
            for h in (_add_vertex(g, nb),)
            if keep(h, target)
        )
    return level


def _all_subsets(g: Graph, target: int) -> Iterable[int]:
    return range(1 << g.n)


@lru_cache(maxsize=None)
def graphs_of_order(n: int) -> tuple[Graph, ...]:
    """All graphs on ``n`` vertices up to isomorphism (1, 2, 4, 11, 34, 156, 1044, ...)."""
    if n < 1:
        raise ValueError("order must be positive")
    if n == 1:
        return (empty_graph(1),)
    return tuple(_augment(list(graphs_of_order(n - 1)), n, _all_subsets))


def graphs_up_to(n: int) -> list[Graph]:
    return [g for k in range(1, n + 1) for g in graphs_of_order(k)]


def connected_graphs_of_order(n: int) -> list[Graph]:
    return [g for g in graphs_of_order(n) if is_connected(g)]


# ---------------------------------------------------------------- regular graphs


def _regular_feasible(g: Graph, n: int, k: int) -> bool:
    remaining = n - g.n
    deficit = 0
    for d in g.degrees():
        if d > k or k - d > remaining:
            return False
        deficit += k - d
    total = k * remaining
    return total - remaining * (remaining - 1) <= deficit <= total and (total - deficit) % 2 == 0


@lru_cache(maxsize=None)
def regular_graphs(n: int, k: int) -> tuple[Graph, ...]:
    """All ``k``-regular graphs on ``n`` vertices up to isomorphism."""
    if n < 1 or not 0 <= k < n or (n * k) % 2:
        return ()
    if 2 * k > n - 1:
        return tuple(_dedupe(g.complement() for g in regular_graphs(n, n - 1 - k)))
    if k == 0:
        return (empty_graph(n),)
    if k == 1:
        return (disjoint_union(*[complete_graph(2)] * (n // 2)),)
    if k == 2:
        return tuple(_dedupe(disjoint_union(*[cycle_graph(c) for c in parts]) for parts in _cycle_partitions(n, 3)))

    def neighbourhoods(g: Graph, target: int):
        after = target - g.n - 1
        open_ = [v for v, d in enumerate(g.degrees()) if d < k]
        for size in range(max(0, k - after), k + 1):
            for combo in combinations(open_, size):
                yield sum(1 << v for v in combo)

    return tuple(_augment([empty_graph(1)], n, neighbourhoods, lambda g, t: _regular_feasible(g, t, k)))


def _cycle_partitions(n: int, smallest: int):
    if n == 0:
        yield []
        return
    for c in range(smallest, n + 1):
        if n - c == 0 or n - c >= c:
            for rest in _cycle_partitions(n - c, c):
                yield [c] + rest


def regular_graphs_up_to(n: int) -> list[Graph]:
    return [g for order in range(1, n + 1) for k in range(order) for g in regular_graphs(order, k)]


# ---------------------------------------------------------------- bipartite graphs


def _bipartite_extensions(g: Graph, target: int) -> Iterable[int]:
    # the new vertex may meet each component on one side only
    side = bipartition(g).side
    comps = components(g)
    choices = [0]
    for comp in comps:
        a = sum(1 << v for v in comp if side[v] == 0)
        b = sum(1 << v for v in comp if side[v] == 1)
        opts = list(_submasks(a))
        opts += [m for m in _submasks(b) if m]
        choices = [c | o for c in choices for o in opts]
    return choices


def _submasks(m: int):
    sub = m
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & m


@lru_cache(maxsize=None)
def bipartite_graphs_of_order(n: int) -> tuple[Graph, ...]:
    if n == 1:
        return (empty_graph(1),)
    return tuple(_augment(list(bipartite_graphs_of_order(n - 1)), n, _bipartite_extensions))


def connected_bipartite_graphs(n: int) -> list[Graph]:
    return [g for g in bipartite_graphs_of_order(n) if is_connected(g)]
