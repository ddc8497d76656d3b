"""Node automorphisms A(G), edge symmetries A*(G), induced edge maps A'(G) and the
Whitney/Harary classification relating the three groups."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import DEFAULT_NODE_CAP, CapExceededError, graph_cap
from .graph_core import (
    SimpleGraph,
    classify,
    complete_graph,
    diamond_graph,
    graphs_isomorphic,
    line_graph,
    paw_graph,
)
from .perm_group import Permutation, compose


# --- refinement search -----------------------------------------------------

def _refine(adj: Sequence[Sequence[int]], colors: list[int]) -> tuple[list[int], list]:
    """Colour refinement to the coarsest equitable partition.

    Returns the final colours and the trace of signature multisets, which is what
    a second graph must reproduce for its refinement to correspond.
    """
    trace = []
    ncol = len(set(colors))
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(len(adj))]
        keys = sorted(set(sigs))
        rank = {s: i for i, s in enumerate(keys)}
        colors = [rank[s] for s in sigs]
        trace.append(tuple(sorted(Counter(sigs).items())))
        if len(keys) == ncol:
            return colors, trace
        ncol = len(keys)


def _relabel_initial(colors: Sequence) -> list[int]:
    keys = sorted(set(colors))
    rank = {c: i for i, c in enumerate(keys)}
    return [rank[c] for c in colors]


def _individualize(colors: list[int], v: int) -> list[int]:
    new = list(colors)
    new[v] = max(colors) + 1
    return new


def _search_maps(
    adj1: Sequence[Sequence[int]],
    adj2: Sequence[Sequence[int]],
    colors1: Sequence | None = None,
    colors2: Sequence | None = None,
    first_only: bool = False,
) -> list[tuple[int, ...]]:
    """All colour-respecting isomorphisms ``adj1 -> adj2`` by individualization-refinement.

    The domain side individualizes along one fixed path (first vertex of the first
    non-singleton cell); the image side branches over every vertex of the matching
    cell, so each isomorphism is found at exactly one leaf.
    """
    n = len(adj1)
    if n != len(adj2):
        return []
    if n == 0:
        return [()]
    c1 = _relabel_initial(colors1 if colors1 is not None else [0] * n)
    c2 = _relabel_initial(colors2 if colors2 is not None else [0] * n)
    if Counter(c1) != Counter(c2) or sorted(set(c1)) != sorted(set(c2)):
        return []
    set2 = [set(a) for a in adj2]
    found: list[tuple[int, ...]] = []

    def recurse(dc: list[int], ic: list[int]) -> bool:
        dc, dtrace = _refine(adj1, dc)
        ic, itrace = _refine(adj2, ic)
        if dtrace != itrace:
            return False
        counts = Counter(dc)
        if len(counts) == n:
            pos = {c: v for v, c in enumerate(ic)}
            phi = tuple(pos[dc[v]] for v in range(n))
            if all(phi[w] in set2[phi[v]] for v in range(n) for w in adj1[v]):
                found.append(phi)
                return first_only
            return False
        target = min(c for c, k in counts.items() if k > 1)
        v = dc.index(target)
        dnext = _individualize(dc, v)
        for w in range(n):
            if ic[w] == target and recurse(dnext, _individualize(ic, w)):
                return True
        return False

    recurse(c1, c2)
    return found


def _adjacency_lists(g: SimpleGraph) -> list[list[int]]:
    return [sorted(a) for a in g.adjacency]


def node_automorphisms(g: SimpleGraph, cap: int | None = None) -> list[Permutation]:
    """All adjacency-preserving node permutations, sorted by image array."""
    cap = graph_cap(cap, DEFAULT_NODE_CAP)
    if g.node_count > cap:
        raise CapExceededError(f"automorphism search limited to {cap} nodes (graph has {g.node_count})")
    adj = _adjacency_lists(g)
    maps = _search_maps(adj, adj)
    return [Permutation(m) for m in sorted(maps)]


def edge_symmetries(g: SimpleGraph, cap: int | None = None) -> list[Permutation]:
    """Edge permutations preserving the shares-an-endpoint relation (A*(G)).

    Computed as automorphisms of the line graph; edge index ``e`` is line-graph
    node ``e``.
    """
    cap = graph_cap(cap, DEFAULT_NODE_CAP)
    if g.edge_count > cap:
        raise CapExceededError(f"edge-symmetry search limited to {cap} edges (graph has {g.edge_count})")
    lg, index_map = line_graph(g)
    auts = node_automorphisms(lg, cap=cap)
    inv = {node: e for e, node in enumerate(index_map)}
    out = [Permutation(tuple(inv[a.images[index_map[e]]] for e in range(g.edge_count))) for a in auts]
    return sorted(out, key=lambda p: p.images)


def is_edge_symmetry(g: SimpleGraph, edge_perm: Permutation) -> bool:
    if edge_perm.degree != g.edge_count:
        return False
    lg, _ = line_graph(g)
    return lg.is_automorphism(edge_perm.images)


# --- induced edge maps -----------------------------------------------------

@dataclass(frozen=True)
class InducedEdgeMap:
    """Edge permutation with orientation flags.

    ``edge_perm[e]`` is the index of the image of edge ``e`` and ``flips[e]`` is
    true when the image is traversed against its stored orientation.
    """

    edge_perm: Permutation
    flips: tuple[bool, ...]
    source: Permutation | None = None

    def __post_init__(self):
        object.__setattr__(self, "flips", tuple(bool(f) for f in self.flips))
        if len(self.flips) != self.edge_perm.degree:
            raise ValueError("flips must have one entry per edge")

    @property
    def key(self) -> tuple:
        return (self.edge_perm.images, self.flips)

    def describe(self) -> str:
        flipped = [f"e{e + 1}" for e, f in enumerate(self.flips) if f]
        cyc = _edge_cycles(self.edge_perm)
        return cyc + (f" flips {{{', '.join(flipped)}}}" if flipped else "")


def _edge_cycles(p: Permutation) -> str:
    cyc = p.cycles()
    if not cyc:
        return "()"
    return "".join("(" + " ".join(f"e{a + 1}" for a in c) + ")" for c in cyc)


def induce_edge_map(pi: Permutation, g: SimpleGraph) -> InducedEdgeMap:
    """The edge map ``e = (v, w) -> (pi(v), pi(w))`` of a node automorphism."""
    if pi.degree != g.node_count or not g.is_automorphism(pi.images):
        raise ValueError(f"{pi} is not an automorphism of the graph")
    perm, flips = [], []
    for t, h in g.edges:
        a, b = pi.images[t], pi.images[h]
        perm.append(g.edge_id(a, b))
        flips.append(a > b)
    return InducedEdgeMap(Permutation(tuple(perm)), tuple(flips), source=pi)


def compose_edge_maps(p: InducedEdgeMap, q: InducedEdgeMap) -> InducedEdgeMap:
    """``p o q`` (apply ``q`` first); orientation flags compose by XOR."""
    perm = compose(p.edge_perm, q.edge_perm)
    flips = tuple(q.flips[e] ^ p.flips[q.edge_perm.images[e]] for e in range(perm.degree))
    src = compose(p.source, q.source) if p.source is not None and q.source is not None else None
    return InducedEdgeMap(perm, flips, source=src)


# --- classification --------------------------------------------------------

class WhitneyStatus(str, Enum):
    HARARY_FAILS = "HararyFails"
    EXCEPTIONAL = "Exceptional"
    ALL_ISOMORPHIC = "AllIsomorphic"
    OUTSIDE_HYPOTHESES = "OutsideHypotheses"


EXCEPTIONAL_GRAPHS = (("paw", paw_graph), ("diamond", diamond_graph), ("K4", lambda: complete_graph(4)))


@dataclass(frozen=True)
class SymmetryGroups:
    node_auts: tuple[Permutation, ...]
    edge_syms: tuple[Permutation, ...]
    induced: tuple[InducedEdgeMap, ...]

    @property
    def induced_edge_perms(self) -> tuple[Permutation, ...]:
        """A'(G): distinct edge permutations among the induced maps (orientation ignored)."""
        seen = {}
        for m in self.induced:
            seen.setdefault(m.edge_perm.images, m.edge_perm)
        return tuple(seen[k] for k in sorted(seen))

    @property
    def orders(self) -> tuple[int, int, int]:
        """``(|A(G)|, |A'(G)|, |A*(G)|)``."""
        return len(self.node_auts), len(self.induced_edge_perms), len(self.edge_syms)

    def non_induced_edge_syms(self) -> list[Permutation]:
        induced = {p.images for p in self.induced_edge_perms}
        return [p for p in self.edge_syms if p.images not in induced]


@dataclass(frozen=True)
class WhitneyResult:
    status: WhitneyStatus
    exceptional: str | None
    groups: SymmetryGroups

    @property
    def exceptional_index(self) -> int | None:
        names = [name for name, _ in EXCEPTIONAL_GRAPHS]
        return names.index(self.exceptional) + 1 if self.exceptional else None


def symmetry_groups(g: SimpleGraph, cap: int | None = None) -> SymmetryGroups:
    auts = node_automorphisms(g, cap=cap)
    syms = edge_symmetries(g, cap=cap)
    induced = {}
    for pi in auts:
        m = induce_edge_map(pi, g)
        induced.setdefault(m.key, m)
    return SymmetryGroups(
        node_auts=tuple(auts),
        edge_syms=tuple(syms),
        induced=tuple(induced[k] for k in sorted(induced)),
    )


def whitney_status(g: SimpleGraph, cap: int | None = None) -> WhitneyResult:
    """Relate A(G), A'(G) and A*(G).

    ``HARARY_FAILS``: more than one isolated node or an isolated edge.
    ``EXCEPTIONAL``: connected with >= 3 nodes and isomorphic to paw, diamond or K4.
    ``ALL_ISOMORPHIC``: connected with >= 3 nodes otherwise; equal orders asserted.
    ``OUTSIDE_HYPOTHESES``: Harary's hypotheses hold but the graph is disconnected
    or has fewer than 3 nodes, so Whitney's classification does not apply.
    """
    groups = symmetry_groups(g, cap=cap)
    cls = classify(g)
    if len(cls.isolated_nodes) > 1 or cls.isolated_edges:
        return WhitneyResult(WhitneyStatus.HARARY_FAILS, None, groups)
    if not cls.connected or g.node_count < 3:
        return WhitneyResult(WhitneyStatus.OUTSIDE_HYPOTHESES, None, groups)
    if g.node_count == 4:
        for name, build in EXCEPTIONAL_GRAPHS:
            if graphs_isomorphic(g, build()):
                return WhitneyResult(WhitneyStatus.EXCEPTIONAL, name, groups)
    a, a_ind, a_star = groups.orders
    if not a == a_ind == a_star:
        raise AssertionError(f"Whitney violated: |A|={a}, |A'|={a_ind}, |A*|={a_star}")
    return WhitneyResult(WhitneyStatus.ALL_ISOMORPHIC, None, groups)


def generating_set(perms: Sequence[Permutation]) -> list[Permutation]:
    """Greedy generating set of a permutation group given by all its elements."""
    if not perms:
        return []
    n = perms[0].degree
    gens: list[Permutation] = []
    reached = {tuple(range(n))}
    for p in perms:
        if p.images in reached:
            continue
        gens.append(p)
        frontier = list(reached)
        while frontier:
            x = frontier.pop()
            for s in gens:
                y = tuple(x[i] for i in s.images)
                if y not in reached:
                    reached.add(y)
                    frontier.append(y)
    return gens
