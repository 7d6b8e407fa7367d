"""Permutation groups and automorphism groups of small graphs.

Permutations are tuples of images acting on the right: ``p[v]`` is the image
of ``v`` and ``mul(p, q)`` applies ``p`` first, then ``q``.

Automorphism groups come from an individualization-refinement search.  The
search walks the first path of the tree (smallest non-singleton cell,
least vertex first), then revisits each level bottom-up looking for one leaf
equivalent to the first leaf in every child subtree whose root vertex is not
yet in the orbit of the first-path vertex.  Generators found at level ``k``
fix the first ``k`` path vertices, so together they form a strong generating
set relative to the base of first-path vertices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from dpstab.graph import Graph, bits

Perm = tuple[int, ...]
Coloring = Sequence[int]

DEFAULT_NODE_BUDGET = 10**7


class ResourceError(RuntimeError):
    """The search tree grew past the configured node budget."""


# ---------------------------------------------------------------- permutations


def identity(n: int) -> Perm:
    return tuple(range(n))


def is_identity(p: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(p))


def mul(p: Sequence[int], q: Sequence[int]) -> Perm:
    """``p`` then ``q``: the image of ``v`` is ``q[p[v]]``."""
    return tuple(q[x] for x in p)


def inverse(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def check_perm(p: Sequence[int], n: Optional[int] = None) -> Perm:
    if n is not None and len(p) != n:
        raise ValueError(f"permutation of degree {len(p)}, expected {n}")
    if sorted(p) != list(range(len(p))):
        raise ValueError(f"not a permutation: {list(p)}")
    return tuple(p)


def transposition(n: int, a: int, b: int) -> Perm:
    p = list(range(n))
    p[a], p[b] = b, a
    return tuple(p)


def format_perm(p: Sequence[int]) -> str:
    """One-line image form, e.g. ``0→1, 1→0, 2→2``."""
    return ", ".join(f"{i}→{x}" for i, x in enumerate(p))


def format_cycles(p: Sequence[int]) -> str:
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cycle = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            seen.add(j)
            cycle.append(j)
            j = p[j]
        out.append("(" + " ".join(map(str, cycle)) + ")")
    return "".join(out) or "()"


def is_automorphism(g: Graph, p: Sequence[int]) -> bool:
    for v in range(g.n):
        img = 0
        for u in bits(g.adj[v]):
            img |= 1 << p[u]
        if img != g.adj[p[v]]:
            return False
    return True


def orbit_partition(n: int, gens: Iterable[Sequence[int]]) -> list[list[int]]:
    """Orbits of the group generated by ``gens``, each sorted, ordered by least point."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for i, x in enumerate(g):
            a, b = find(i), find(x)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


def orbit_of(point: int, gens: Sequence[Sequence[int]]) -> set[int]:
    orb = {point}
    queue = [point]
    while queue:
        x = queue.pop()
        for g in gens:
            y = g[x]
            if y not in orb:
                orb.add(y)
                queue.append(y)
    return orb


# ---------------------------------------------------------------- stabilizer chains


@dataclass
class PermGroup:
    """A permutation group with a stabilizer chain.

    ``transversals[i]`` maps each point of the orbit of ``base[i]`` under the
    pointwise stabilizer of ``base[:i]`` to a coset representative carrying
    ``base[i]`` onto it.
    """

    degree: int
    generators: list[Perm]
    base: list[int] = field(default_factory=list)
    strong_generators: list[Perm] = field(default_factory=list)
    transversals: list[dict[int, Perm]] = field(default_factory=list)

    @property
    def order(self) -> int:
        out = 1
        for t in self.transversals:
            out *= len(t)
        return out

    def contains(self, p: Sequence[int]) -> bool:
        if len(p) != self.degree:
            return False
        r, j = _strip(self.base, self.transversals, tuple(p), 0)
        return j == len(self.base) and is_identity(r)

    def orbits(self) -> list[list[int]]:
        return orbit_partition(self.degree, self.generators)

    def elements(self):
        """Iterate over every element; only sensible for small groups."""
        def walk(i, acc):
            if i == len(self.base):
                yield acc
                return
            for u in self.transversals[i].values():
                yield from walk(i + 1, mul(u, acc))
        yield from walk(0, identity(self.degree))


def _fixes(p: Sequence[int], points: Sequence[int]) -> bool:
    return all(p[b] == b for b in points)


def _transversal(point: int, gens: Sequence[Perm], n: int) -> dict[int, Perm]:
    trans = {point: identity(n)}
    queue = deque([point])
    while queue:
        x = queue.popleft()
        ux = trans[x]
        for s in gens:
            y = s[x]
            if y not in trans:
                trans[y] = mul(ux, s)
                queue.append(y)
    return trans


def _strip(base, transversals, p: Perm, start: int) -> tuple[Perm, int]:
    for i in range(start, len(base)):
        u = transversals[i].get(p[base[i]])
        if u is None:
            return p, i
        p = mul(p, inverse(u))
    return p, len(base)


def group_from_strong_generators(n: int, gens: Sequence[Perm], base: Sequence[int]) -> PermGroup:
    """Build the chain directly from a known strong generating set for ``base``."""
    base = list(base)
    gens = [tuple(g) for g in gens if not is_identity(g)]
    transversals = [
        _transversal(b, [s for s in gens if _fixes(s, base[:i])], n) for i, b in enumerate(base)
    ]
    return PermGroup(n, list(gens), base, list(gens), transversals)


def schreier_sims(n: int, gens: Iterable[Sequence[int]], base: Sequence[int] = ()) -> PermGroup:
    """Deterministic Schreier-Sims: sift every Schreier generator until the chain closes."""
    gens = [check_perm(g, n) for g in gens]
    gens = [g for g in gens if not is_identity(g)]
    base = list(base)
    strong = list(gens)
    for s in strong:
        if _fixes(s, base):
            base.append(next(i for i, x in enumerate(s) if i != x))
    transversals = [dict() for _ in base]
    level_gens = [[] for _ in base]

    def rebuild(i):
        level_gens[i] = [s for s in strong if _fixes(s, base[:i])]
        transversals[i] = _transversal(base[i], level_gens[i], n)

    for i in range(len(base)):
        rebuild(i)
    i = len(base) - 1
    while i >= 0:
        rebuild(i)
        jumped = False
        trans = transversals[i]
        for x, ux in list(trans.items()):
            for s in level_gens[i]:
                y = s[x]
                uxs = mul(ux, s)
                uy = trans[y]
                if uxs == uy:
                    continue
                r, j = _strip(base, transversals, mul(uxs, inverse(uy)), i + 1)
                if j < len(base) or not is_identity(r):
                    if j == len(base):
                        base.append(next(a for a, b in enumerate(r) if a != b))
                        transversals.append({})
                        level_gens.append([])
                    strong.append(r)
                    for level in range(i + 1, j + 1):
                        rebuild(level)
                    i = j
                    jumped = True
                    break
            if jumped:
                break
        if not jumped:
            i -= 1
    return PermGroup(n, gens, base, strong, transversals)


# ---------------------------------------------------------------- refinement


class _Node:
    """Ordered partition: ``lab`` lists vertices by position; cells are contiguous
    ranges, ``end[s]`` is the end of the cell starting at ``s`` and
    ``start[v]`` the start of the cell holding ``v``."""

    __slots__ = ("lab", "end", "start", "trace", "fixed")

    def __init__(self, lab, end, start, trace, fixed):
        self.lab = lab
        self.end = end
        self.start = start
        self.trace = trace
        self.fixed = fixed

    def cells(self):
        s = 0
        n = len(self.lab)
        while s < n:
            e = self.end[s]
            yield s, e
            s = e

    def is_discrete(self) -> bool:
        return all(e - s == 1 for s, e in self.cells())

    def target(self) -> Optional[int]:
        best = None
        size = None
        for s, e in self.cells():
            if e - s > 1 and (size is None or e - s < size):
                best, size = s, e - s
        return best

    def shape(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.cells())


def _refine(adj: Sequence[int], node: _Node, queue: deque, trace: list) -> None:
    lab, end, start = node.lab, node.end, node.start
    n = len(lab)
    active = set(queue)
    while queue:
        w = queue.popleft()
        active.discard(w)
        wmask = 0
        for p in range(w, end[w]):
            wmask |= 1 << lab[p]
        s = 0
        while s < n:
            e = end[s]
            if e - s > 1:
                counts = [(adj[lab[p]] & wmask).bit_count() for p in range(s, e)]
                lo = min(counts)
                if lo != max(counts):
                    groups: dict[int, list[int]] = {}
                    for p, c in zip(range(s, e), counts):
                        groups.setdefault(c, []).append(lab[p])
                    keys = sorted(groups)
                    pos = s
                    frags = []
                    for c in keys:
                        members = groups[c]
                        frag_start = pos
                        for v in members:
                            lab[pos] = v
                            start[v] = frag_start
                            pos += 1
                        end[frag_start] = pos
                        frags.append((frag_start, pos - frag_start))
                    trace.extend((-1, w, s, len(keys)))
                    for c in keys:
                        trace.extend((c, len(groups[c])))
                    if s in active:
                        add = [f for f, _ in frags[1:]]
                    else:
                        largest = max(range(len(frags)), key=lambda k: (frags[k][1], -k))
                        add = [f for k, (f, _) in enumerate(frags) if k != largest]
                    for f in add:
                        if f not in active:
                            active.add(f)
                            queue.append(f)
            s = e
    trace.append(-2)
    trace.extend(node.shape())


def _root(g: Graph, coloring: Optional[Coloring]) -> _Node:
    n = g.n
    colors = list(coloring) if coloring is not None else [0] * n
    if len(colors) != n:
        raise ValueError(f"coloring has {len(colors)} entries for {n} vertices")
    classes: dict = {}
    for v in range(n):
        classes.setdefault(colors[v], []).append(v)
    lab, end, start = [], [0] * n, [0] * n
    queue = deque()
    trace: list = []
    for c in sorted(classes):
        s = len(lab)
        lab.extend(classes[c])
        end[s] = len(lab)
        for v in classes[c]:
            start[v] = s
        queue.append(s)
        trace.extend((-3, c, len(classes[c])))
    node = _Node(lab, end, start, None, ())
    _refine(g.adj, node, queue, trace)
    node.trace = tuple(trace)
    return node


def _individualize(g: Graph, node: _Node, v: int) -> _Node:
    lab, end, start = list(node.lab), list(node.end), list(node.start)
    s = start[v]
    e = end[s]
    p = lab.index(v, s, e)
    lab[s], lab[p] = lab[p], lab[s]
    end[s] = s + 1
    end[s + 1] = e
    for q in range(s + 1, e):
        start[lab[q]] = s + 1
    child = _Node(lab, end, start, None, node.fixed + (v,))
    trace: list = [-4, s]
    _refine(g.adj, child, deque([s]), trace)
    child.trace = tuple(trace)
    return child


def refine(g: Graph, initial: Optional[Coloring] = None) -> list[int]:
    """Coarsest equitable refinement of ``initial``, as colour = index of the cell
    in the refined ordered partition."""
    node = _root(g, initial)
    color = [0] * g.n
    for idx, (s, e) in enumerate(node.cells()):
        for p in range(s, e):
            color[node.lab[p]] = idx
    return color


def is_equitable(g: Graph, coloring: Coloring) -> bool:
    classes: dict = {}
    for v, c in enumerate(coloring):
        classes.setdefault(c, []).append(v)
    masks = []
    for members in classes.values():
        m = 0
        for v in members:
            m |= 1 << v
        masks.append(m)
    for members in classes.values():
        for m in masks:
            if len({(g.adj[v] & m).bit_count() for v in members}) > 1:
                return False
    return True


# ---------------------------------------------------------------- search


def _leaf_rows(g: Graph, lab: Sequence[int]) -> tuple[int, ...]:
    pos = [0] * g.n
    for p, v in enumerate(lab):
        pos[v] = p
    rows = []
    for v in lab:
        r = 0
        for u in bits(g.adj[v]):
            r |= 1 << pos[u]
        rows.append(r)
    return tuple(rows)


class _Search:
    def __init__(self, g: Graph, coloring: Optional[Coloring], budget: int):
        self.g = g
        self.budget = budget
        self.nodes = 0
        self.root = _root(g, coloring)

    def child(self, node: _Node, v: int) -> _Node:
        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceError(f"search exceeded the node budget of {self.budget}")
        return _individualize(self.g, node, v)

    def first_path(self) -> list[_Node]:
        path = [self.root]
        node = self.root
        while True:
            t = node.target()
            if t is None:
                return path
            node = self.child(node, min(node.lab[t:node.end[t]]))
            path.append(node)

    def automorphisms(self) -> tuple[list[Perm], list[int], list[_Node]]:
        path = self.first_path()
        leaf = path[-1]
        base = list(leaf.fixed)
        first_rows = _leaf_rows(self.g, leaf.lab)
        gens: list[Perm] = []
        for k in range(len(path) - 2, -1, -1):
            node = path[k]
            t = node.target()
            cell = sorted(node.lab[t:node.end[t]])
            orbit = orbit_of(base[k], gens)
            for w in cell:
                if w in orbit:
                    continue
                found = self._equivalent_leaf(self.child(node, w), k + 1, path, first_rows, gens)
                if found is not None:
                    assert is_automorphism(self.g, found)
                    gens.append(found)
                    orbit = orbit_of(base[k], gens)
        return gens, base, path

    def _equivalent_leaf(self, node, level, path, first_rows, gens) -> Optional[Perm]:
        ref = path[level]
        if node.trace != ref.trace:
            return None
        if level == len(path) - 1:
            if _leaf_rows(self.g, node.lab) != first_rows:
                return None
            p = [0] * self.g.n
            for a, b in zip(ref.lab, node.lab):
                p[a] = b
            return tuple(p)
        t = node.target()
        local = [s for s in gens if _fixes(s, node.fixed)]
        done: set[int] = set()
        for x in sorted(node.lab[t:node.end[t]]):
            if x in done:
                continue
            found = self._equivalent_leaf(self.child(node, x), level + 1, path, first_rows, gens)
            if found is not None:
                return found
            done |= orbit_of(x, local)
        return None

    def canonical(self, group: PermGroup) -> tuple[int, ...]:
        """Lab of the leaf maximising (path traces, relabelled rows)."""
        strong = group.strong_generators
        best: list = [None, None, None]  # traces, rows, lab

        def compare(traces):
            ref = best[0]
            if ref is None:
                return 1
            a = tuple(traces)
            b = ref[: len(a)]
            return (a > b) - (a < b)

        def dfs(node, traces):
            c = compare(traces)
            if c < 0:
                return
            t = node.target()
            if t is None:
                rows = _leaf_rows(self.g, node.lab)
                key = (tuple(traces), rows)
                if best[0] is None or key > (best[0], best[1]):
                    best[0], best[1], best[2] = key[0], rows, tuple(node.lab)
                return
            local = [s for s in strong if _fixes(s, node.fixed)]
            done: set[int] = set()
            for x in sorted(node.lab[t:node.end[t]]):
                if x in done:
                    continue
                ch = self.child(node, x)
                dfs(ch, traces + [ch.trace])
                done |= orbit_of(x, local)

        dfs(self.root, [self.root.trace])
        return best[2]


def automorphism_group(
    g: Graph, fixed: Optional[Coloring] = None, budget: int = DEFAULT_NODE_BUDGET
) -> PermGroup:
    """Group of the automorphisms of ``g`` that preserve the colouring ``fixed``
    (every automorphism when ``fixed`` is omitted)."""
    search = _Search(g, fixed, budget)
    gens, base, _ = search.automorphisms()
    colors = list(fixed) if fixed is not None else None
    for s in gens:
        if not is_automorphism(g, s) or (colors and any(colors[v] != colors[s[v]] for v in range(g.n))):
            raise AssertionError("search produced a non-automorphism; this is a defect")
    return group_from_strong_generators(g.n, gens, base)


def group_order(group: PermGroup) -> int:
    return group.order


def membership(group: PermGroup, p: Sequence[int]) -> bool:
    return group.contains(p)


def orbits(group: PermGroup) -> list[list[int]]:
    return group.orbits()


def is_vertex_transitive(g: Graph, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    return len(automorphism_group(g, budget=budget).orbits()) == 1


def arc_orbits(g: Graph, group: PermGroup) -> list[list[tuple[int, int]]]:
    arcs = [(u, v) for u in range(g.n) for v in bits(g.adj[u])]
    index = {a: i for i, a in enumerate(arcs)}
    induced = [tuple(index[(s[u], s[v])] for u, v in arcs) for s in group.generators]
    return [[arcs[i] for i in orb] for orb in orbit_partition(len(arcs), induced)]


def is_arc_transitive(g: Graph, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """One orbit on ordered adjacent pairs; edgeless graphs are not arc-transitive."""
    if g.num_edges == 0:
        return False
    return len(arc_orbits(g, automorphism_group(g, budget=budget))) == 1


def canonical_labeling(
    g: Graph, coloring: Optional[Coloring] = None, budget: int = DEFAULT_NODE_BUDGET
) -> Perm:
    """Permutation sending each vertex to its canonical position."""
    search = _Search(g, coloring, budget)
    gens, base, _ = search.automorphisms()
    group = group_from_strong_generators(g.n, gens, base)
    lab = search.canonical(group)
    return inverse(lab)


def canonical_form(g: Graph, budget: int = DEFAULT_NODE_BUDGET) -> Graph:
    return g.relabel(canonical_labeling(g, budget=budget))


def certificate(g: Graph, budget: int = DEFAULT_NODE_BUDGET) -> tuple[int, tuple[int, ...]]:
    """Hashable isomorphism certificate: equal iff the graphs are isomorphic."""
    return g.n, canonical_form(g, budget).adj


def are_isomorphic(g: Graph, h: Graph, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    if g.n != h.n or g.num_edges != h.num_edges or sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return certificate(g, budget) == certificate(h, budget)
