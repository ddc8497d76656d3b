"""Finite permutations, finite groups given by generators, and Cayley color digraphs.

Conventions: ``compose(p, q)`` applies ``q`` first, then ``p``.  Group elements are
indexed in BFS discovery order from the identity (index 0) using right
multiplication by the generators, so ``table[a][b]`` is the index of ``a * b`` and
the Cayley arc leaving ``u`` with color ``i`` ends at ``table[u][generators[i]]``.
"""

from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import DEFAULT_ORDER_CAP, CapExceededError, ParseError


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{0, ..., n-1}`` stored as its image array."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        images = list(range(n))
        seen: set[int] = set()
        for cyc in cycles:
            for a in cyc:
                if a in seen:
                    raise ValueError(f"point {a} appears in more than one cycle")
                if not 0 <= a < n:
                    raise ValueError(f"point {a} outside 0..{n - 1}")
                seen.add(a)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                images[a] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __len__(self) -> int:
        return len(self.images)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            nxt = self.images[start]
            while nxt != start:
                cyc.append(nxt)
                seen[nxt] = True
                nxt = self.images[nxt]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_notation(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(a) for a in c) + ")" for c in cyc)

    def order(self) -> int:
        o = 1
        for c in self.cycles():
            o = o * len(c) // np.gcd(o, len(c))
        return int(o)

    def __str__(self) -> str:
        return self.cycle_notation()


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return ``p o q``: apply ``q`` first, then ``p``."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    return Permutation(tuple(p.images[i] for i in q.images))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int | None = None) -> Permutation:
    """Parse disjoint-cycle notation such as ``(0 1)(2 3)``; ``()`` is the identity.

    Points may be separated by spaces or commas.  Without ``n`` the degree is one
    more than the largest point mentioned.
    """
    text = text.strip()
    if not text or _CYCLE_RE.sub("", text).strip():
        raise ParseError(f"malformed cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        tokens = body.replace(",", " ").split()
        try:
            cycles.append([int(t) for t in tokens])
        except ValueError:
            raise ParseError(f"non-integer point in {text!r}") from None
    points = [a for c in cycles for a in c]
    if n is None:
        n = max(points) + 1 if points else 0
    try:
        return Permutation.from_cycles([c for c in cycles if c], n)
    except ValueError as exc:
        raise ParseError(f"{text!r}: {exc}") from None


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Finite group as a multiplication table over element indices ``0..order-1``."""

    table: np.ndarray
    identity: int
    generators: tuple[int, ...]
    element_perms: tuple[Permutation, ...] | None = None
    _inverses: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        table = np.array(self.table, dtype=np.int64)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "generators", tuple(int(g) for g in self.generators))
        inv = np.argmax(table == self.identity, axis=1)
        inv.setflags(write=False)
        object.__setattr__(self, "_inverses", inv)

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverse(self, a: int) -> int:
        return int(self._inverses[a])

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = int(self.table[x, a])
            k += 1
        return k

    def order_spectrum(self) -> Counter:
        return Counter(self.element_order(a) for a in range(self.order))

    def is_involution(self, a: int) -> bool:
        return a != self.identity and int(self.table[a, a]) == self.identity

    def check(self) -> None:
        """Validate identity, Latin square, associativity (Light's test) and generation."""
        t = self.table
        n = self.order
        if t.shape != (n, n):
            raise ValueError("table must be square")
        rng = np.arange(n)
        if not (np.array_equal(t[self.identity], rng) and np.array_equal(t[:, self.identity], rng)):
            raise ValueError("identity row/column is not the identity map")
        srt_rows = np.sort(t, axis=1)
        srt_cols = np.sort(t, axis=0)
        if not (np.all(srt_rows == rng) and np.all(srt_cols == rng[:, None])):
            raise ValueError("table is not a Latin square")
        if _generated(t, self.identity, self.generators) != n:
            raise ValueError("generators do not generate the whole table")
        gens = self.generators or (self.identity,)
        for g in gens:
            # (x g) y == x (g y) for all x, y
            if not np.array_equal(t[t[:, g], :], t[:, t[g, :]]):
                raise ValueError("multiplication is not associative")


def _generated(table: np.ndarray, identity: int, gens: Sequence[int]) -> int:
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = int(table[x, g])
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen)


def _table_from_bfs(parent: list[int], via: list[int], gen_cols: np.ndarray) -> np.ndarray:
    """Fill the full table column by column from a BFS spanning tree.

    ``gen_cols[i][x]`` is ``x * g_i``; element ``b = parent[b] * g_{via[b]}`` so
    ``a * b = (a * parent[b]) * g_{via[b]}``.
    """
    n = len(parent)
    table = np.empty((n, n), dtype=np.int64)
    table[:, 0] = np.arange(n)
    for b in range(1, n):
        table[:, b] = gen_cols[via[b]][table[:, parent[b]]]
    return table


def closure_from_generators(
    gens: Sequence[Permutation], degree: int | None = None, cap: int = DEFAULT_ORDER_CAP
) -> FiniteGroup:
    """Group generated by permutations, with BFS-indexed multiplication table."""
    gens = list(gens)
    if not gens:
        if degree is None:
            raise ValueError("an explicit degree is required for an empty generator list")
        n = degree
    else:
        n = gens[0].degree
        if any(g.degree != n for g in gens):
            raise ValueError("generators have different degrees")
        if degree is not None and degree != n:
            raise ValueError(f"degree {degree} does not match generators ({n})")

    ident = tuple(range(n))
    elements = [ident]
    index = {ident: 0}
    parent, via = [0], [0]
    gen_imgs = [g.images for g in gens]
    gen_cols = [[0] for _ in gens]
    head = 0
    while head < len(elements):
        x = elements[head]
        for i, g in enumerate(gen_imgs):
            y = tuple(x[j] for j in g)
            k = index.get(y)
            if k is None:
                if len(elements) >= cap:
                    raise CapExceededError(f"group order exceeds cap {cap}")
                k = len(elements)
                index[y] = k
                elements.append(y)
                parent.append(head)
                via.append(i)
                for col in gen_cols:
                    col.append(0)
            gen_cols[i][head] = k
        head += 1

    cols = np.array(gen_cols, dtype=np.int64).reshape(len(gens), len(elements))
    table = _table_from_bfs(parent, via, cols)
    return FiniteGroup(
        table=table,
        identity=0,
        generators=tuple(index[g.images] for g in gens),
        element_perms=tuple(Permutation(e) for e in elements),
    )


def _greedy_generators(table: np.ndarray, identity: int) -> list[int]:
    gens: list[int] = []
    reached = {identity}
    for a in range(table.shape[0]):
        if a not in reached:
            gens.append(a)
            seen = set(reached)
            frontier = deque(seen)
            while frontier:
                x = frontier.popleft()
                for g in gens:
                    y = int(table[x, g])
                    if y not in seen:
                        seen.add(y)
                        frontier.append(y)
            reached = seen
    return gens


def group_from_table(table, generators: Sequence[int] | None = None, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Validate a multiplication table and re-index it in BFS order from the identity.

    Without explicit generators a generating set is chosen greedily (smallest
    element not yet reached).
    """
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise ValueError("multiplication table must be a non-empty square array")
    n = t.shape[0]
    if n > cap:
        raise CapExceededError(f"group order {n} exceeds cap {cap}")
    if t.min() < 0 or t.max() >= n:
        raise ValueError("table entries must lie in 0..order-1")
    rng = np.arange(n)
    idents = [e for e in range(n) if np.array_equal(t[e], rng) and np.array_equal(t[:, e], rng)]
    if not idents:
        raise ValueError("table has no identity element")
    e = idents[0]
    gens = list(generators) if generators is not None else _greedy_generators(t, e)
    raw = FiniteGroup(table=t, identity=e, generators=tuple(gens))
    raw.check()

    order = [e]
    pos = {e: 0}
    head = 0
    while head < len(order):
        x = order[head]
        for g in gens:
            y = int(t[x, g])
            if y not in pos:
                pos[y] = len(order)
                order.append(y)
        head += 1
    perm = np.array(order)
    relabel = np.empty(n, dtype=np.int64)
    relabel[perm] = rng
    new_table = relabel[t[np.ix_(perm, perm)]]
    return FiniteGroup(table=new_table, identity=0, generators=tuple(int(relabel[g]) for g in gens))


def group_from_permutations(perms: Sequence[Permutation], cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Group structure on a list of permutations that is already closed under composition."""
    perms = list(perms)
    if not perms:
        raise ValueError("empty permutation list")
    index = {p.images: i for i, p in enumerate(perms)}
    n = len(perms)
    if n > cap:
        raise CapExceededError(f"group order {n} exceeds cap {cap}")
    arr = np.array([p.images for p in perms], dtype=np.int64).reshape(n, perms[0].degree)
    table = np.empty((n, n), dtype=np.int64)
    for b in range(n):
        # a o b: apply b first, then a
        prods = arr[:, arr[b]]
        for a in range(n):
            k = index.get(tuple(prods[a].tolist()))
            if k is None:
                raise ValueError("permutation list is not closed under composition")
            table[a, b] = k
    ident = index.get(tuple(range(perms[0].degree)))
    if ident is None:
        raise ValueError("permutation list lacks the identity")
    gens = _greedy_generators(table, ident)
    g = group_from_table(table, gens, cap=cap)
    # carry the permutations through the BFS relabelling
    order = [ident]
    pos = {ident: 0}
    head = 0
    while head < len(order):
        x = order[head]
        for s in gens:
            y = int(table[x, s])
            if y not in pos:
                pos[y] = len(order)
                order.append(y)
        head += 1
    return FiniteGroup(
        table=g.table,
        identity=0,
        generators=g.generators,
        element_perms=tuple(perms[i] for i in order),
    )


def find_isomorphism(g1: FiniteGroup, g2: FiniteGroup, cap: int = DEFAULT_ORDER_CAP) -> list[int] | None:
    """Return ``phi`` with ``phi[a*b] = phi[a]*phi[b]`` bijective, or ``None``.

    Backtracks over images of ``g1``'s generators, restricted to elements of the
    same order, and extends each assignment along the Cayley graph of ``g1``.
    """
    n = g1.order
    if max(n, g2.order) > cap:
        raise CapExceededError(f"group order exceeds cap {cap}")
    if n != g2.order:
        return None
    t1, t2 = g1.table, g2.table
    if g1.identity == g2.identity and np.array_equal(t1, t2):
        return list(range(n))
    if g1.order_spectrum() != g2.order_spectrum():
        return None

    gens = [g for g in dict.fromkeys(g1.generators) if g != g1.identity]
    if not gens:
        return [g2.identity] if n == 1 else None
    orders2 = [g2.element_order(b) for b in range(n)]
    candidates = [[b for b in range(n) if orders2[b] == g1.element_order(g)] for g in gens]

    for images in product(*candidates):
        phi = _extend_hom(t1, t2, g1.identity, g2.identity, gens, images)
        if phi is not None:
            return phi
    return None


def _extend_hom(t1, t2, e1, e2, gens, images) -> list[int] | None:
    n = t1.shape[0]
    phi = [-1] * n
    phi[e1] = e2
    used = {e2}
    queue = deque([e1])
    while queue:
        x = queue.popleft()
        for g, h in zip(gens, images):
            y = int(t1[x, g])
            img = int(t2[phi[x], h])
            if phi[y] == -1:
                if img in used:
                    return None
                phi[y] = img
                used.add(img)
                queue.append(y)
            elif phi[y] != img:
                return None
    if -1 in phi:
        return None
    p = np.array(phi)
    if not np.array_equal(p[t1], t2[np.ix_(p, p)]):
        return None
    return phi


def groups_isomorphic(g1: FiniteGroup, g2: FiniteGroup, cap: int = DEFAULT_ORDER_CAP) -> bool:
    return find_isomorphism(g1, g2, cap=cap) is not None


@dataclass(frozen=True)
class ColoredDigraph:
    node_count: int
    arcs: tuple[tuple[int, int, int], ...]

    def out_degree(self, u: int) -> int:
        return sum(1 for a in self.arcs if a[0] == u)

    def in_degree(self, u: int) -> int:
        return sum(1 for a in self.arcs if a[1] == u)


def cayley_color_digraph(g: FiniteGroup) -> ColoredDigraph:
    """Arc ``(u, u*g_i, i)`` for every element ``u`` and generator index ``i``."""
    if any(s == g.identity for s in g.generators):
        raise ValueError("the identity cannot be a generator of a Cayley color digraph")
    if not g.generators and g.order != 1:
        raise ValueError("a non-trivial group needs generators")
    arcs = tuple(
        (u, int(g.table[u, s]), i) for u in range(g.order) for i, s in enumerate(g.generators)
    )
    return ColoredDigraph(node_count=g.order, arcs=arcs)


# --- standard groups -------------------------------------------------------

def cyclic_group(n: int) -> FiniteGroup:
    if n == 1:
        return closure_from_generators([], degree=1)
    return closure_from_generators([Permutation(tuple((i + 1) % n for i in range(n)))])


def direct_power_c2(k: int) -> FiniteGroup:
    """Elementary abelian group ``C2^k`` acting on ``2k`` points."""
    gens = [Permutation.from_cycles([(2 * i, 2 * i + 1)], 2 * k) for i in range(k)]
    return closure_from_generators(gens)


def symmetric_group(n: int) -> FiniteGroup:
    if n <= 1:
        return closure_from_generators([], degree=max(n, 1))
    if n == 2:
        return closure_from_generators([Permutation((1, 0))])
    return closure_from_generators(
        [Permutation.from_cycles([(0, 1)], n), Permutation.from_cycles([tuple(range(n))], n)]
    )


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of a regular ``n``-gon (order ``2n``), generated by a rotation and a reflection."""
    rot = Permutation(tuple((i + 1) % n for i in range(n)))
    ref = Permutation(tuple((-i) % n for i in range(n)))
    return closure_from_generators([rot, ref])


# --- group file ------------------------------------------------------------

def parse_group_text(text: str) -> FiniteGroup:
    """Parse the group-file grammar (see README)::

        perm [N]            table
        (0 1)(2 3)          0 1 2 3
        (0 2)               1 0 3 2
        ...                 ...
                            [gens 1 2]

    Lines are stripped; blank lines and ``#`` comments are ignored.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ParseError("empty group file")
    header = lines[0].split()
    kind = header[0].lower()
    if kind == "perm":
        if len(header) > 2:
            raise ParseError(f"bad perm header: {lines[0]!r}")
        degree = None
        if len(header) == 2:
            try:
                degree = int(header[1])
            except ValueError:
                raise ParseError(f"bad degree in header: {lines[0]!r}") from None
        if degree is None:
            pts = [int(t) for line in lines[1:] for t in re.findall(r"\d+", line)]
            degree = max(pts) + 1 if pts else 1
        gens = [parse_cycles(line, degree) for line in lines[1:]]
        return closure_from_generators(gens, degree=degree)
    if kind == "table":
        if len(header) != 1:
            raise ParseError(f"bad table header: {lines[0]!r}")
        rows, gens = [], None
        for line in lines[1:]:
            toks = line.split()
            target = rows
            if toks[0].lower() == "gens":
                if gens is not None:
                    raise ParseError("duplicate gens line")
                toks = toks[1:]
                gens = []
                target = gens
            try:
                vals = [int(t) for t in toks]
            except ValueError:
                raise ParseError(f"non-integer entry in {line!r}") from None
            if target is rows:
                rows.append(vals)
            else:
                gens.extend(vals)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ParseError("multiplication table must be square")
        try:
            return group_from_table(rows, gens)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    raise ParseError(f"unknown group file header {header[0]!r} (expected 'perm' or 'table')")


def read_group(path) -> FiniteGroup:
    with open(path) as fh:
        return parse_group_text(fh.read())


def format_group_perm(g: FiniteGroup) -> str:
    if g.element_perms is None:
        raise ValueError("group has no permutation representation")
    lines = [f"perm {g.element_perms[0].degree}"]
    lines += [g.element_perms[s].cycle_notation() for s in g.generators]
    return "\n".join(lines) + "\n"


def format_group_table(g: FiniteGroup) -> str:
    lines = ["table"]
    lines += [" ".join(str(int(x)) for x in row) for row in g.table]
    if g.generators:
        lines.append("gens " + " ".join(str(s) for s in g.generators))
    return "\n".join(lines) + "\n"
