"""Finite simple graphs with canonical edge indexing, line graphs and classification.

Edges are stored as ``(tail, head)`` with ``tail < head`` and sorted
lexicographically; an edge's index is its rank in that list.  The stored
orientation is the direction used when an edge is identified with ``[0, 1]``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DEFAULT_ISO_CAP, CapExceededError, ParseError, graph_cap


@dataclass(frozen=True)
class SimpleGraph:
    node_count: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.node_count < 0:
            raise ValueError("node_count must be non-negative")
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.node_count - 1}")
            norm.append((min(u, v), max(u, v)))
        srt = sorted(norm)
        if len(set(srt)) != len(srt):
            raise ValueError("duplicate edge")
        object.__setattr__(self, "edges", tuple(srt))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.node_count)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def incident_edges(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.node_count)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_index

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[(min(u, v), max(u, v))]

    def relabel(self, perm: Sequence[int]) -> "SimpleGraph":
        """Graph with node ``v`` renamed ``perm[v]``."""
        return SimpleGraph(self.node_count, tuple((perm[u], perm[v]) for u, v in self.edges))

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        if len(perm) != self.node_count:
            return False
        return all(self.has_edge(perm[u], perm[v]) for u, v in self.edges)


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> SimpleGraph:
    return SimpleGraph(n, tuple(edges))


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> SimpleGraph:
    """``K_{1,leaves}`` with center 0."""
    return SimpleGraph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def paw_graph() -> SimpleGraph:
    """Triangle 0-1-2 with pendant edge 2-3; edge ``e_k`` (1-based) has index ``k-1``."""
    return SimpleGraph(4, ((0, 1), (0, 2), (1, 2), (2, 3)))


def diamond_graph() -> SimpleGraph:
    return SimpleGraph(4, ((0, 1), (0, 2), (1, 2), (1, 3), (2, 3)))


def edge_plus_isolated_graph() -> SimpleGraph:
    """One edge and two isolated nodes."""
    return SimpleGraph(4, ((0, 1),))


def line_graph(g: SimpleGraph) -> tuple[SimpleGraph, tuple[int, ...]]:
    """Line graph and the map edge index of ``g`` -> node of the result (the identity)."""
    pairs = []
    for inc in g.incident_edges:
        for a in range(len(inc)):
            for b in range(a + 1, len(inc)):
                pairs.append((inc[a], inc[b]))
    return SimpleGraph(g.edge_count, tuple(pairs)), tuple(range(g.edge_count))


@dataclass(frozen=True)
class GraphClassification:
    node_count: int
    edge_count: int
    connected: bool
    isolated_nodes: tuple[int, ...]
    isolated_edges: tuple[int, ...]
    regular_degree: int | None
    components: tuple[tuple[int, ...], ...] = field(repr=False, default=())


def connected_components(g: SimpleGraph) -> list[list[int]]:
    seen = [False] * g.node_count
    comps = []
    for s in range(g.node_count):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [s], deque([s])
        while queue:
            x = queue.popleft()
            for y in sorted(g.adjacency[x]):
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def classify(g: SimpleGraph) -> GraphClassification:
    comps = connected_components(g)
    deg = g.degrees()
    isolated_nodes = tuple(v for v in range(g.node_count) if deg[v] == 0)
    isolated_edges = tuple(i for i, (u, v) in enumerate(g.edges) if deg[u] == 1 and deg[v] == 1)
    regular = deg[0] if deg and all(d == deg[0] for d in deg) else None
    return GraphClassification(
        node_count=g.node_count,
        edge_count=g.edge_count,
        connected=len(comps) <= 1,
        isolated_nodes=isolated_nodes,
        isolated_edges=isolated_edges,
        regular_degree=regular,
        components=tuple(tuple(c) for c in comps),
    )


def find_graph_isomorphism(g1: SimpleGraph, g2: SimpleGraph, cap: int | None = None) -> list[int] | None:
    """Node bijection ``phi`` with ``{u,v}`` an edge iff ``{phi(u),phi(v)}`` is one.

    Plain backtracking in order of decreasing degree; candidates must match the
    degree and the sorted neighbour-degree multiset.
    """
    cap = graph_cap(cap, DEFAULT_ISO_CAP)
    if max(g1.node_count, g2.node_count) > cap:
        raise CapExceededError(f"graph isomorphism limited to {cap} nodes")
    n = g1.node_count
    if n != g2.node_count or g1.edge_count != g2.edge_count:
        return None
    d1, d2 = g1.degrees(), g2.degrees()
    if sorted(d1) != sorted(d2):
        return None

    def profile(g, d, v):
        return d[v], tuple(sorted(d[w] for w in g.adjacency[v]))

    p1 = [profile(g1, d1, v) for v in range(n)]
    p2 = [profile(g2, d2, v) for v in range(n)]
    if sorted(p1) != sorted(p2):
        return None
    order = sorted(range(n), key=lambda v: (-d1[v], v))
    phi = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        v = order[k]
        for w in range(n):
            if used[w] or p2[w] != p1[v]:
                continue
            ok = True
            for u in order[:k]:
                if (u in g1.adjacency[v]) != (phi[u] in g2.adjacency[w]):
                    ok = False
                    break
            if not ok:
                continue
            phi[v], used[w] = w, True
            if extend(k + 1):
                return True
            phi[v], used[w] = -1, False
        return False

    return list(phi) if extend(0) else None


def graphs_isomorphic(g1: SimpleGraph, g2: SimpleGraph, cap: int | None = None) -> bool:
    return find_graph_isomorphism(g1, g2, cap=cap) is not None


# --- graph file ------------------------------------------------------------

def parse_graph_text(text: str) -> SimpleGraph:
    """Parse ``nodes N`` followed by one ``u v`` pair per line (0-based).

    Blank lines and ``#`` comments are ignored.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ParseError("empty graph file")
    head = lines[0].split()
    if len(head) != 2 or head[0].lower() != "nodes":
        raise ParseError(f"graph file must start with 'nodes N', got {lines[0]!r}")
    try:
        n = int(head[1])
        edges = []
        for line in lines[1:]:
            toks = line.split()
            if len(toks) != 2:
                raise ParseError(f"expected 'u v', got {line!r}")
            edges.append((int(toks[0]), int(toks[1])))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"non-integer token: {exc}") from None
    try:
        return SimpleGraph(n, tuple(edges))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_graph(g: SimpleGraph) -> str:
    return "".join([f"nodes {g.node_count}\n"] + [f"{u} {v}\n" for u, v in g.edges])


def read_graph(path) -> SimpleGraph:
    with open(path) as fh:
        return parse_graph_text(fh.read())


def write_graph(g: SimpleGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(g))


def to_dot(g: SimpleGraph, name: str = "G", node_labels: dict[int, str] | None = None) -> str:
    lines = [f"graph {name} {{"]
    for v in range(g.node_count):
        label = node_labels.get(v) if node_labels else None
        lines.append(f'  {v} [label="{label}"];' if label else f"  {v};")
    for i, (u, v) in enumerate(g.edges):
        lines.append(f'  {u} -- {v} [label="e{i + 1}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
