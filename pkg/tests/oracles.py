"""Brute-force reference implementations, independent of the package's search code.

They work on plain edge sets and neighbour lists, never on the package's
refinement or group machinery.
"""

from __future__ import annotations

from itertools import permutations, product


def edge_set(g) -> set[frozenset]:
    return {frozenset(e) for e in g.edges()}


def nbr_sets(g) -> list[frozenset]:
    return [frozenset(v for v in range(g.n) if g.has_edge(u, v)) for u in range(g.n)]


def naive_aut_count(g) -> int:
    """Count every permutation of S_n that preserves the edge set (n <= 7)."""
    edges = edge_set(g)
    return sum(
        all(frozenset(p[v] for v in e) in edges for e in edges)
        for p in permutations(range(g.n))
    )


def backtrack_aut_count(g) -> int:
    """Count automorphisms by extending partial maps vertex by vertex, checking
    adjacency against every earlier vertex and matching degrees."""
    n = g.n
    nb = nbr_sets(g)
    deg = [len(s) for s in nb]
    image = [-1] * n
    used = [False] * n

    def extend(v: int) -> int:
        if v == n:
            return 1
        total = 0
        for w in range(n):
            if used[w] or deg[w] != deg[v]:
                continue
            if all((u in nb[v]) == (image[u] in nb[w]) for u in range(v)):
                image[v], used[w] = w, True
                total += extend(v + 1)
                used[w] = False
        image[v] = -1
        return total

    return extend(0)


def brute_isomorphic(g, h) -> bool:
    if g.n != h.n or len(edge_set(g)) != len(edge_set(h)):
        return False
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False
    eh = edge_set(h)
    eg = edge_set(g)
    return any(all(frozenset(p[v] for v in e) in eh for e in eg) for p in permutations(range(g.n)))


def two_fold_pairs(g):
    """Yield every two-fold automorphism (alpha, beta) of g.

    For fixed alpha, beta(v) must be a vertex whose neighbourhood is
    alpha(N(v)); all bijective choices are enumerated.
    """
    n = g.n
    nb = nbr_sets(g)
    for alpha in permutations(range(n)):
        cands = []
        for v in range(n):
            target = frozenset(alpha[u] for u in nb[v])
            cands.append([w for w in range(n) if nb[w] == target])
        if any(not c for c in cands):
            continue
        for beta in product(*cands):
            if len(set(beta)) == n:
                yield alpha, beta


def has_nontrivial_two_fold(g) -> bool:
    return any(a != b for a, b in two_fold_pairs(g))


def is_two_fold(g, alpha, beta) -> bool:
    n = g.n
    return all(g.has_edge(u, v) == g.has_edge(alpha[u], beta[v]) for u in range(n) for v in range(n))


def brute_product_edges(g, s) -> set[frozenset]:
    """Edge set of the direct product under the (u, x) -> u*n2 + x indexing."""
    n2 = s.n
    out = set()
    for u, v in product(range(g.n), repeat=2):
        for x, y in product(range(n2), repeat=2):
            if g.has_edge(u, v) and s.has_edge(x, y):
                out.add(frozenset((u * n2 + x, v * n2 + y)))
    return out


def has_odd_cycle(g) -> bool:
    """BFS layering: an edge inside one layer closes an odd cycle."""
    nb = nbr_sets(g)
    layer = [-1] * g.n
    for s in range(g.n):
        if layer[s] >= 0:
            continue
        layer[s] = 0
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for w in nb[u]:
                    if layer[w] < 0:
                        layer[w] = layer[u] + 1
                        nxt.append(w)
            frontier = nxt
    return any(layer[u] == layer[v] for u, v in g.edges())


def hand_graph6(n: int, edges) -> str:
    """graph6 for n <= 62 straight from the format rules: one size byte, then
    the upper triangle in column order packed 6 bits per byte, +63."""
    es = {frozenset(e) for e in edges}
    bits = [1 if frozenset((i, j)) in es else 0 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        out.append(chr(63 + int("".join(map(str, bits[k:k + 6])), 2)))
    return "".join(out)
