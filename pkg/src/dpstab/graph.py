"""Finite simple undirected graphs stored as adjacency bit-rows.

Vertices are the integers ``0..n-1``.  Row ``adj[v]`` is an int whose bit
``u`` is set iff ``u`` is a neighbour of ``v``.  Graphs are immutable; every
constructor validates symmetry and the absence of loops.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence


class GraphError(ValueError):
    """Raised for malformed graph data or out-of-range constructor arguments."""


class ParseError(GraphError):
    def __init__(self, message: str, offset: Optional[int] = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        if len(self.adj) != self.n:
            raise GraphError(f"expected {self.n} rows, got {len(self.adj)}")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise GraphError(f"row {v} refers to a vertex >= {self.n}")
            if row >> v & 1:
                raise GraphError(f"loop at vertex {v}")
            r = row
            while r:
                low = r & -r
                u = low.bit_length() - 1
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {v} and {u}")
                r ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return bits(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    @property
    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in bits(self.adj[u] >> (u + 1)):
                yield u, u + 1 + v

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        rows = [0] * self.n
        for v in range(self.n):
            r = 0
            for u in bits(self.adj[v]):
                r |= 1 << perm[u]
            rows[perm[v]] = r
        return Graph(self.n, tuple(rows))

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(self.adj)))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        return Graph.from_edges(
            len(vertices),
            ((index[u], index[v]) for u, v in self.edges() if u in index and v in index),
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges}, g6={emit_graph6(self)!r})"


def bits(x: int) -> list[int]:
    """Indices of the set bits of ``x`` in ascending order."""
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


# ---------------------------------------------------------------- graph6


def _size_bytes(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    raise GraphError(f"graph6 short/medium forms cap n at 258047, got {n}")


def emit_graph6(g: Graph) -> str:
    """Encode ``g`` as a graph6 string (no header, no newline)."""
    out = [_size_bytes(g.n)]
    acc = 0
    nbits = 0
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    """Decode a single graph6 line.  A leading ``>>graph6<<`` header is accepted."""
    s = text.rstrip("\r\n")
    base = 0
    if s.startswith(">>graph6<<"):
        s = s[10:]
        base = 10
    if not s:
        raise ParseError("empty graph6 string", base)
    for i, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise ParseError(f"byte {ch!r} outside the printable graph6 range", base + i)
    if s[0] != "~":
        n, pos = ord(s[0]) - 63, 1
    else:
        if len(s) >= 2 and s[1] == "~":
            raise ParseError("long-form graph6 (n >= 258048) is not supported", base + 1)
        if len(s) < 4:
            raise ParseError("truncated size field", base + len(s))
        n = 0
        for ch in s[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        pos = 4
        if n <= 62:
            raise ParseError(f"non-canonical medium size field for n={n}", base)
    if n < 1:
        raise ParseError("graph6 encodes zero vertices; graphs need n >= 1", base)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    payload = s[pos:]
    if len(payload) < nbytes:
        raise ParseError(f"expected {nbytes} payload bytes, got {len(payload)}", base + len(s))
    if len(payload) > nbytes:
        raise ParseError("trailing bytes after the edge payload", base + pos + nbytes)
    rows = [0] * n
    k = 0
    i, j = 0, 1
    for b, ch in enumerate(payload):
        val = ord(ch) - 63
        for shift in range(5, -1, -1):
            bit = val >> shift & 1
            if k >= nbits:
                if bit:
                    raise ParseError("nonzero padding bit", base + pos + b)
                continue
            if bit:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
            i += 1
            if i == j:
                i, j = 0, j + 1
    return Graph(n, tuple(rows))


def read_graph6_lines(lines: Iterable[str]) -> Iterator[tuple[int, str, object]]:
    """Yield ``(line_number, line, Graph | ParseError)`` for each non-blank line."""
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        try:
            yield lineno, line, parse_graph6(line)
        except GraphError as exc:
            yield lineno, line, exc


# ---------------------------------------------------------------- edge lists


def parse_edge_list(text: str) -> Graph:
    """Parse ``n`` followed by whitespace-separated vertex pairs.  ``#`` starts a comment."""
    tokens = []
    for line in text.splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    if not tokens:
        raise ParseError("empty edge list")
    try:
        nums = [int(t) for t in tokens]
    except ValueError as exc:
        raise ParseError(f"non-integer token: {exc}") from None
    n, rest = nums[0], nums[1:]
    if n < 1:
        raise ParseError(f"vertex count must be positive, got {n}")
    if len(rest) % 2:
        raise ParseError("odd number of endpoint tokens")
    pairs = list(zip(rest[::2], rest[1::2]))
    for u, v in pairs:
        if u == v:
            raise ParseError(f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge ({u}, {v}) out of range for n={n}")
    return Graph.from_edges(n, pairs)


def emit_edge_list(g: Graph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- families


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete_graph(m: int) -> Graph:
    if m < 1:
        raise GraphError(f"complete_graph needs m >= 1, got {m}")
    full = (1 << m) - 1
    return Graph(m, tuple(full ^ (1 << v) for v in range(m)))


def cycle_graph(m: int) -> Graph:
    if m < 3:
        raise GraphError(f"cycle_graph needs m >= 3, got {m}")
    return Graph.from_edges(m, ((i, (i + 1) % m) for i in range(m)))


def k2() -> Graph:
    return complete_graph(2)


def path_graph(m: int) -> Graph:
    if m < 1:
        raise GraphError(f"path_graph needs m >= 1, got {m}")
    return Graph.from_edges(m, ((i, i + 1) for i in range(m - 1)))


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise GraphError("complete_bipartite needs both sides nonempty")
    return Graph.from_edges(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def hypercube(d: int) -> Graph:
    if d < 1:
        raise GraphError(f"hypercube needs d >= 1, got {d}")
    n = 1 << d
    return Graph.from_edges(n, ((v, v ^ (1 << i)) for v in range(n) for i in range(d) if v < v ^ (1 << i)))


def generalized_petersen(n: int, k: int) -> Graph:
    if n < 3 or not 1 <= k < n / 2:
        raise GraphError(f"generalized_petersen needs n >= 3 and 1 <= k < n/2, got ({n}, {k})")
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n))
        edges.append((i, n + i))
        edges.append((n + i, n + (i + k) % n))
    return Graph.from_edges(2 * n, edges)


def petersen() -> Graph:
    return generalized_petersen(5, 2)


def kneser(n: int, k: int) -> Graph:
    subsets = [mask(c) for c in combinations(range(n), k)]
    return Graph.from_edges(
        len(subsets),
        ((i, j) for i, j in combinations(range(len(subsets)), 2) if not subsets[i] & subsets[j]),
    )


def circulant(n: int, connection: Iterable[int]) -> Graph:
    jumps = {s % n for s in connection} | {-s % n for s in connection}
    jumps.discard(0)
    return Graph.from_edges(n, ((i, (i + s) % n) for i in range(n) for s in jumps if i < (i + s) % n))


def heawood() -> Graph:
    lines = [(0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 0), (5, 6, 1), (6, 0, 2)]
    return Graph.from_edges(14, ((p, 7 + i) for i, line in enumerate(lines) for p in line))


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return Graph.from_edges(offset, edges)


_NAMED = {
    "petersen": petersen,
    "heawood": heawood,
    "cube": lambda: hypercube(3),
    "dodecahedron": lambda: generalized_petersen(10, 2),
    "desargues": lambda: generalized_petersen(10, 3),
    "moebius-kantor": lambda: generalized_petersen(8, 3),
}

_PATTERNS = [
    (re.compile(r"k(\d+)"), lambda m: complete_graph(int(m[1]))),
    (re.compile(r"c(\d+)"), lambda m: cycle_graph(int(m[1]))),
    (re.compile(r"p(\d+)"), lambda m: path_graph(int(m[1]))),
    (re.compile(r"e(\d+)"), lambda m: empty_graph(int(m[1]))),
    (re.compile(r"q(\d+)"), lambda m: hypercube(int(m[1]))),
    (re.compile(r"k(\d+),(\d+)"), lambda m: complete_bipartite(int(m[1]), int(m[2]))),
    (re.compile(r"gp(\d+),(\d+)"), lambda m: generalized_petersen(int(m[1]), int(m[2]))),
    (re.compile(r"(\d+)(.+)"), lambda m: disjoint_union(*[named_graph(m[2])] * int(m[1]))),
]


def named_graph(name: str) -> Graph:
    """Look up a built-in graph: ``petersen``, ``cube``, ``k5``, ``c6``, ``p3``, ``e4``,
    ``q4``, ``k3,3``, ``gp8,3``, and disjoint multiples such as ``2c3``."""
    key = name.strip().lower()
    if key in _NAMED:
        return _NAMED[key]()
    for pattern, build in _PATTERNS:
        m = pattern.fullmatch(key)
        if m:
            return build(m)
    raise GraphError(f"unknown graph name {name!r}")


def is_named_graph(name: str) -> bool:
    try:
        named_graph(name)
    except GraphError:
        return False
    return True


# ---------------------------------------------------------------- predicates


def components(g: Graph) -> list[list[int]]:
    """Vertex sets of the connected components, each sorted, ordered by least vertex."""
    seen = 0
    out = []
    for start in range(g.n):
        if seen >> start & 1:
            continue
        comp = frontier = 1 << start
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        out.append(bits(comp))
    return out


def is_connected(g: Graph) -> bool:
    return len(components(g)) == 1


@dataclass(frozen=True)
class Bipartition:
    """Two-sided vertex labelling; ``side[v]`` is 0 for side A and 1 for side B."""

    side: tuple[int, ...]

    @property
    def a(self) -> list[int]:
        return [v for v, s in enumerate(self.side) if s == 0]

    @property
    def b(self) -> list[int]:
        return [v for v, s in enumerate(self.side) if s == 1]

    def is_valid_for(self, g: Graph) -> bool:
        if len(self.side) != g.n or any(s not in (0, 1) for s in self.side):
            return False
        return all(self.side[u] != self.side[v] for u, v in g.edges())


def bipartition(g: Graph) -> Optional[Bipartition]:
    """BFS 2-colouring; ``None`` iff ``g`` has an odd cycle.

    Each component's least vertex goes to side A, so an edgeless graph on
    ``n >= 2`` vertices puts everything on side A.  Graphs with an edge always
    get two nonempty sides.
    """
    side = [-1] * g.n
    for start in range(g.n):
        if side[start] != -1:
            continue
        side[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in bits(g.adj[v]):
                if side[u] == -1:
                    side[u] = 1 - side[v]
                    queue.append(u)
                elif side[u] == side[v]:
                    return None
    return Bipartition(tuple(side))


def is_bipartite(g: Graph) -> bool:
    return bipartition(g) is not None


def valency(g: Graph) -> Optional[int]:
    degs = set(g.degrees())
    return degs.pop() if len(degs) == 1 else None


def is_regular(g: Graph) -> bool:
    return valency(g) is not None


def thick_witness(g: Graph) -> Optional[tuple[int, int]]:
    """Least pair ``(u, v)``, ``u < v``, with identical neighbourhoods, if any."""
    first = {}
    for v, row in enumerate(g.adj):
        if row in first:
            return first[row], v
        first[row] = v
    return None


def is_r_thin(g: Graph) -> bool:
    return len(set(g.adj)) == g.n


def has_odd_cycle_through_every_vertex(g: Graph) -> bool:
    """True iff every vertex sits in a non-bipartite component."""
    for comp in components(g):
        if is_bipartite(g.induced(comp)):
            return False
    return True
