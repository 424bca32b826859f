"""Simple undirected graphs: parsing, complementation and classification.

Graphs are immutable and labeled 0..n-1. The classification recognizes the
four structured families that admit special treatment downstream: complete,
null, cluster (disjoint union of cliques) and complete multipartite.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

TAG_COMPLETE = "complete"
TAG_NULL = "null"
TAG_CLUSTER = "cluster"
TAG_MULTIPARTITE = "complete_multipartite"
TAG_GENERAL = "general"


class GraphFormatError(ValueError):
    """Malformed edge-list or graph6 input."""


@dataclass(frozen=True)
class Graph:
    """Simple graph on nodes 0..n-1 with a frozen set of undirected edges."""

    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 1:
            raise GraphFormatError(f"node count must be positive, got {self.n}")
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise GraphFormatError(f"invalid edge ({u}, {v}) for n={self.n}")

    @staticmethod
    def from_edges(n: int, pairs: Iterable) -> "Graph":
        """Build a graph, normalizing and deduplicating edge pairs."""
        norm = set()
        for u, v in pairs:
            u, v = int(u), int(v)
            if u == v:
                raise GraphFormatError(f"loop edge ({u}, {u}) not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"node id out of range in edge ({u}, {v}), n={n}")
            norm.add((min(u, v), max(u, v)))
        return Graph(n, frozenset(norm))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, u: int) -> list:
        return sorted(v for v in range(self.n) if v != u and self.has_edge(u, v))

    def degrees(self) -> list:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_regular(self) -> Optional[int]:
        """Common degree if the graph is regular, else None."""
        deg = self.degrees()
        if all(d == deg[0] for d in deg):
            return deg[0]
        return None


@dataclass(frozen=True)
class GraphClass:
    """Most specific structural label plus the two family membership flags.

    Tag precedence: complete > null > cluster > complete_multipartite > general.
    ``partition`` holds clique sizes for cluster-like graphs and independent
    set sizes for complete multipartite ones, largest first.
    """

    tag: str
    partition: Optional[tuple]
    is_cluster: bool
    is_multipartite: bool

    @property
    def is_degenerate(self) -> bool:
        """Complete and null graphs admit no two-distance representation."""
        return self.tag in (TAG_COMPLETE, TAG_NULL)


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list format: first line n, then one "u v" pair per line."""
    lines = text.splitlines()
    n = None
    pairs = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if n is None:
            try:
                n = int(line.split()[0])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: expected node count, got {line!r}")
            if n < 1:
                raise GraphFormatError(f"line {lineno}: node count must be positive")
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer node id in {line!r}")
        if u == v:
            raise GraphFormatError(f"line {lineno}: loop edge ({u}, {v})")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: node id out of range in ({u}, {v})")
        pairs.append((u, v))
    if n is None:
        raise GraphFormatError("empty input")
    return Graph.from_edges(n, pairs)


def parse_graph6(text: str) -> Graph:
    """Parse a short-form graph6 string (n <= 62)."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphFormatError("truncated graph6 string")
    for ch in s:
        if not (63 <= ord(ch) <= 126):
            raise GraphFormatError(f"invalid graph6 character {ch!r}")
    if ord(s[0]) == 126:
        raise GraphFormatError("graph6 long form (n >= 63) not supported")
    n = ord(s[0]) - 63
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = s[1:]
    if len(body) < nbytes:
        raise GraphFormatError("truncated graph6 bit stream")
    if len(body) > nbytes:
        raise GraphFormatError("trailing characters after graph6 bit stream")
    bits = []
    for ch in body:
        val = ord(ch) - 63
        bits.extend((val >> shift) & 1 for shift in range(5, -1, -1))
    pairs = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                pairs.append((i, j))
            idx += 1
    return Graph.from_edges(n, pairs)


def encode_graph6(g: Graph) -> str:
    """Encode a graph as a short-form graph6 string."""
    if g.n > 62:
        raise GraphFormatError("graph6 short form limited to n <= 62")
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    while len(bits) % 6 != 0:
        bits.append(0)
    out = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def complement(g: Graph) -> Graph:
    """Graph with an edge exactly where g has none."""
    pairs = [(u, v) for u, v in combinations(range(g.n), 2) if not g.has_edge(u, v)]
    return Graph.from_edges(g.n, pairs)


def adjacency_matrix(g: Graph) -> np.ndarray:
    """Symmetric 0/1 adjacency matrix with zero diagonal."""
    a = np.zeros((g.n, g.n))
    for u, v in g.edges:
        a[u, v] = 1.0
        a[v, u] = 1.0
    return a


def _adjacency_sets(g: Graph) -> list:
    adj = [set() for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _is_p3_free(g: Graph) -> bool:
    # Induced P3 = a node with two non-adjacent neighbors; O(n^3) triple scan.
    adj = _adjacency_sets(g)
    for center in range(g.n):
        nb = sorted(adj[center])
        for u, v in combinations(nb, 2):
            if v not in adj[u]:
                return False
    return True


def _component_sizes(g: Graph) -> list:
    adj = _adjacency_sets(g)
    seen = [False] * g.n
    sizes = []
    for start in range(g.n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        count = 0
        while stack:
            u = stack.pop()
            count += 1
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        sizes.append(count)
    return sorted(sizes, reverse=True)


def classify(g: Graph) -> GraphClass:
    """Classify g into the most specific of the five structural tags."""
    full = g.n * (g.n - 1) // 2
    is_cl = _is_p3_free(g)
    gbar = complement(g)
    is_mp = _is_p3_free(gbar)
    if g.num_edges == full:
        return GraphClass(TAG_COMPLETE, (g.n,), True, True)
    if g.num_edges == 0:
        return GraphClass(TAG_NULL, tuple([1] * g.n), True, True)
    if is_cl:
        return GraphClass(TAG_CLUSTER, tuple(_component_sizes(g)), True, is_mp)
    if is_mp:
        return GraphClass(TAG_MULTIPARTITE, tuple(_component_sizes(gbar)), False, True)
    return GraphClass(TAG_GENERAL, None, False, False)


# Common constructions, used heavily by the test-suite and the sweep driver.

def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def null_graph(n: int) -> Graph:
    return Graph.from_edges(n, [])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cluster_graph(sizes: Sequence[int]) -> Graph:
    """Disjoint union of cliques with the given sizes."""
    pairs = []
    start = 0
    for size in sizes:
        nodes = range(start, start + size)
        pairs.extend(combinations(nodes, 2))
        start += size
    return Graph.from_edges(start, pairs)


def complete_multipartite_graph(sizes: Sequence[int]) -> Graph:
    """Complete multipartite graph with independent sets of the given sizes."""
    return complement(cluster_graph(sizes))


def from_mask(n: int, mask: int) -> Graph:
    """Graph from an edge bitmask over combinations(range(n), 2) order."""
    pairs = []
    for k, (u, v) in enumerate(combinations(range(n), 2)):
        if (mask >> k) & 1:
            pairs.append((u, v))
    return Graph.from_edges(n, pairs)


def to_mask(g: Graph) -> int:
    mask = 0
    for k, (u, v) in enumerate(combinations(range(g.n), 2)):
        if g.has_edge(u, v):
            mask |= 1 << k
    return mask
