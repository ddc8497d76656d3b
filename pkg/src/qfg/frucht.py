"""Frucht-style realization of a finite group as the automorphism group of a graph.

Every arc of the Cayley color digraph is replaced by a small gadget whose pendant
path lengths encode the generator index (the arc color) and, for generators that
are not involutions, the arc direction:

* non-involution ``g_i``: path ``u - p - q - v`` with a pendant path of length
  ``2i + 1`` hung at ``p`` and one of length ``2i + 2`` hung at ``q``;
* involution ``g_i``: the arcs ``u -> v`` and ``v -> u`` merge into one path
  ``u - p - v`` with a pendant path of length ``2i + 2`` at ``p``.

Group element ``k`` is node ``k``.  The construction is not assumed correct;
:func:`verify_realization` checks it exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .automorphism import node_automorphisms
from .graph_core import SimpleGraph
from .perm_group import FiniteGroup, Permutation, find_isomorphism, group_from_permutations


@dataclass(frozen=True)
class FruchtGraph:
    graph: SimpleGraph
    group_nodes: tuple[int, ...]
    # arc key "u->v:i" (or "u-v:i" for involutions) -> gadget nodes [p, (q,) pendants...]
    gadget_of_arc: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def annotation(self) -> dict:
        return {
            "group_nodes": list(self.group_nodes),
            "gadget_of_arc": {k: list(v) for k, v in self.gadget_of_arc.items()},
        }


def pendant_lengths(i: int, involution: bool) -> tuple[int, ...]:
    """Pendant path lengths of the gadget for generator index ``i``."""
    return (2 * i + 2,) if involution else (2 * i + 1, 2 * i + 2)


def frucht_graph(g: FiniteGroup) -> FruchtGraph:
    n = g.order
    if n == 1:
        return FruchtGraph(SimpleGraph(1, ()), (0,), {})
    if not g.generators:
        raise ValueError("a non-trivial group needs generators")
    if any(s == g.identity for s in g.generators):
        raise ValueError("generators must not include the identity")

    edges: list[tuple[int, int]] = []
    gadgets: dict[str, tuple[int, ...]] = {}
    count = n

    def new_node() -> int:
        nonlocal count
        count += 1
        return count - 1

    def pendant(anchor: int, length: int) -> list[int]:
        nodes, prev = [], anchor
        for _ in range(length):
            x = new_node()
            edges.append((prev, x))
            nodes.append(x)
            prev = x
        return nodes

    for i, s in enumerate(g.generators):
        inv = g.is_involution(s)
        for u in range(n):
            v = g.mul(u, s)
            if inv:
                if v < u:
                    continue
                p = new_node()
                edges += [(u, p), (p, v)]
                tail = pendant(p, pendant_lengths(i, True)[0])
                gadgets[f"{u}-{v}:{i}"] = (p, *tail)
            else:
                lp, lq = pendant_lengths(i, False)
                p, q = new_node(), new_node()
                edges += [(u, p), (p, q), (q, v)]
                tp = pendant(p, lp)
                tq = pendant(q, lq)
                gadgets[f"{u}->{v}:{i}"] = (p, q, *tp, *tq)

    graph = SimpleGraph(count, tuple(edges))
    return FruchtGraph(graph, tuple(range(n)), gadgets)


def left_translation(g: FiniteGroup, fg: FruchtGraph, a: int) -> Permutation:
    """Extend ``u -> a*u`` on group nodes gadget-wise to a node map of the Frucht graph."""
    images = list(range(fg.graph.node_count))
    for u in fg.group_nodes:
        images[u] = g.mul(a, u)
    for key, nodes in fg.gadget_of_arc.items():
        ends, i = key.split(":")
        if "->" in ends:
            u, v = (int(x) for x in ends.split("->"))
            target = fg.gadget_of_arc[f"{g.mul(a, u)}->{g.mul(a, v)}:{i}"]
        else:
            u, v = (int(x) for x in ends.split("-"))
            au, av = g.mul(a, u), g.mul(a, v)
            target = fg.gadget_of_arc[f"{min(au, av)}-{max(au, av)}:{i}"]
        for x, y in zip(nodes, target):
            images[x] = y
    return Permutation(tuple(images))


@dataclass(frozen=True)
class Realization:
    ok: bool
    aut_order: int
    # group element index -> automorphism of the graph, when ok
    witness: tuple[Permutation, ...] | None


def verify_realization(g: FiniteGroup, graph: SimpleGraph, cap: int | None = None) -> Realization:
    """Check ``A(graph)`` is isomorphic to ``g`` and return the witness ``g -> A(graph)``."""
    auts = node_automorphisms(graph, cap=cap)
    if len(auts) != g.order:
        return Realization(False, len(auts), None)
    aut_group = group_from_permutations(auts)
    phi = find_isomorphism(g, aut_group)
    if phi is None:
        return Realization(False, len(auts), None)
    return Realization(True, len(auts), tuple(aut_group.element_perms[phi[a]] for a in range(g.order)))
