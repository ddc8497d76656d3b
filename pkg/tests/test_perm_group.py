from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfg.errors import CapExceededError, ParseError
from qfg.perm_group import (
    FiniteGroup,
    Permutation,
    cayley_color_digraph,
    closure_from_generators,
    compose,
    cyclic_group,
    direct_power_c2,
    find_isomorphism,
    format_group_perm,
    format_group_table,
    group_from_table,
    groups_isomorphic,
    parse_cycles,
    parse_group_text,
    symmetric_group,
)

from conftest import corpus_groups

perms5 = st.permutations(list(range(5))).map(lambda x: Permutation(tuple(x)))


def naive_closure(gens):
    """Closure by repeatedly multiplying every known pair until nothing new appears."""
    n = gens[0].degree
    elems = {tuple(range(n))} | {g.images for g in gens}
    while True:
        new = {tuple(a[i] for i in b) for a in elems for b in elems} - elems
        if not new:
            return elems
        elems |= new


def dihedral_table(n):
    """r^a s^b indexed b*n + a; r^a s^b * r^c s^d = r^(a + (-1)^b c) s^(b+d)."""
    t = np.zeros((2 * n, 2 * n), dtype=int)
    for x in range(2 * n):
        a, b = x % n, x // n
        for y in range(2 * n):
            c, d = y % n, y // n
            t[x, y] = ((b + d) % 2) * n + (a + (c if b == 0 else -c)) % n
    return t


def brute_isomorphic(g1, g2):
    n = g1.order
    if n != g2.order:
        return False
    t1, t2 = g1.table, g2.table
    for p in permutations(range(n)):
        if all(p[t1[a, b]] == t2[p[a], p[b]] for a in range(n) for b in range(n)):
            return True
    return False


class TestCompose:
    def test_identity_case(self):
        p = Permutation.from_cycles([(0, 1, 2)], 3)
        assert compose(p, Permutation.identity(3)) == p

    def test_involution_squared(self):
        p = Permutation((1, 0))
        assert compose(p, p).is_identity()

    def test_hand_composed(self):
        p = Permutation.from_cycles([(0, 1)], 3)
        q = Permutation.from_cycles([(1, 2)], 3)
        # q first: 0->0->1, 1->2->2, 2->1->0
        assert compose(p, q).images == (1, 2, 0)

    def test_degree_mismatch(self):
        with pytest.raises(ValueError):
            compose(Permutation.identity(2), Permutation.identity(3))

    @given(perms5, perms5, perms5)
    def test_associative(self, a, b, c):
        assert compose(a, compose(b, c)) == compose(compose(a, b), c)

    @given(perms5)
    def test_inverse(self, p):
        assert compose(p, p.inverse()).is_identity()
        assert compose(p.inverse(), p).is_identity()

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Permutation((0, 0, 1))


class TestCycles:
    def test_roundtrip(self):
        p = parse_cycles("(0 3)(1 2 4)", 6)
        assert p.images == (3, 2, 4, 0, 1, 5)
        assert p.cycle_notation() == "(0 3)(1 2 4)"
        assert parse_cycles("()", 3).is_identity()

    @pytest.mark.parametrize("bad", ["(0 1", "0 1", "(0 1)(1 2)", "(a b)", "(0 5)"])
    def test_malformed(self, bad):
        with pytest.raises(ParseError):
            parse_cycles(bad, 3)

    def test_order(self):
        assert parse_cycles("(0 1)(2 3 4)", 5).order() == 6


class TestClosure:
    def test_trivial(self):
        g = closure_from_generators([Permutation.identity(3)])
        assert g.order == 1

    def test_trivial_empty_with_degree(self):
        assert closure_from_generators([], degree=4).order == 1
        with pytest.raises(ValueError):
            closure_from_generators([])

    def test_cyclic(self):
        g = closure_from_generators([Permutation.from_cycles([(0, 1, 2)], 3)])
        assert g.order == 3

    def test_s3_against_naive_closure(self):
        gens = [Permutation.from_cycles([(0, 1)], 3), Permutation.from_cycles([(0, 1, 2)], 3)]
        g = closure_from_generators(gens)
        oracle = naive_closure(gens)
        assert g.order == len(oracle) == 6
        assert {p.images for p in g.element_perms} == oracle
        invols = [p for p in oracle if sum(p[i] != i for i in range(3)) == 2]
        assert len(invols) == 3
        assert sum(g.is_involution(a) for a in range(g.order)) == 3

    def test_table_matches_composition(self):
        g = symmetric_group(4)
        for a in range(g.order):
            for b in range(0, g.order, 5):
                prod = compose(g.element_perms[a], g.element_perms[b])
                assert g.element_perms[g.mul(a, b)] == prod

    def test_identity_first_bfs(self):
        g = symmetric_group(3)
        assert g.identity == 0 and g.element_perms[0].is_identity()

    def test_cap(self):
        with pytest.raises(CapExceededError):
            closure_from_generators(
                [Permutation.from_cycles([(0, 1)], 5), Permutation.from_cycles([(0, 1, 2, 3, 4)], 5)], cap=100
            )

    @pytest.mark.parametrize("name", list(corpus_groups()) + ["S4", "C2^3"])
    def test_group_invariants_exhaustive(self, name):
        g = {"S4": symmetric_group(4), "C2^3": direct_power_c2(3)}.get(name) or corpus_groups()[name]
        g.check()
        t = g.table
        n = g.order
        assert n <= 48
        # full associativity over all triples
        lhs = t[t[:, :, None], np.arange(n)[None, None, :]]
        rhs = t[np.arange(n)[:, None, None], t[None, :, :]]
        assert np.array_equal(lhs, rhs)


class TestGroupFromTable:
    def test_reindex_and_validate(self):
        g = group_from_table(dihedral_table(3))
        assert g.order == 6 and g.identity == 0
        g.check()

    def test_rejects_non_group(self):
        with pytest.raises(ValueError):
            group_from_table([[0, 1], [1, 1]])
        # Latin square without associativity: a loop of order 5
        loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
        with pytest.raises(ValueError):
            group_from_table(loop)


class TestIsomorphism:
    def test_klein_vs_c4(self):
        assert not groups_isomorphic(direct_power_c2(2), cyclic_group(4))

    @pytest.mark.parametrize("name", list(corpus_groups()))
    def test_self_identity_witness(self, name):
        g = corpus_groups()[name]
        assert find_isomorphism(g, g) == list(range(g.order))

    def test_s3_vs_dihedral_table(self):
        s3 = closure_from_generators([Permutation.from_cycles([(0, 1)], 3), Permutation.from_cycles([(0, 1, 2)], 3)])
        d3 = group_from_table(dihedral_table(3))
        assert brute_isomorphic(s3, d3)
        phi = find_isomorphism(s3, d3)
        assert phi is not None
        t1, t2 = s3.table, d3.table
        assert sorted(phi) == list(range(6))
        assert all(phi[t1[a, b]] == t2[phi[a], phi[b]] for a in range(6) for b in range(6))

    def test_c6_vs_s3(self):
        assert not groups_isomorphic(cyclic_group(6), symmetric_group(3))
        assert not brute_isomorphic(cyclic_group(6), symmetric_group(3))

    def test_equivalence_relation(self):
        test_set = [
            cyclic_group(4),
            direct_power_c2(2),
            group_from_table(dihedral_table(2)),
            cyclic_group(6),
            symmetric_group(3),
            group_from_table(dihedral_table(3)),
            closure_from_generators([Permutation.from_cycles([(0, 1, 2), (3, 4)], 5)]),
        ]
        rel = [[groups_isomorphic(a, b) for b in test_set] for a in test_set]
        k = len(test_set)
        for i in range(k):
            assert rel[i][i]
            for j in range(k):
                assert rel[i][j] == rel[j][i]
                for m in range(k):
                    if rel[i][j] and rel[j][m]:
                        assert rel[i][m]
        # brute-force oracle on the same set
        for i in range(k):
            for j in range(i + 1, k):
                assert rel[i][j] == brute_isomorphic(test_set[i], test_set[j])


class TestCayley:
    def test_trivial(self):
        d = cayley_color_digraph(cyclic_group(1))
        assert d.node_count == 1 and d.arcs == ()

    def test_c3(self):
        d = cayley_color_digraph(cyclic_group(3))
        assert d.node_count == 3
        assert {c for _, _, c in d.arcs} == {0}
        assert len(d.arcs) == 3
        nxt = {u: v for u, v, _ in d.arcs}
        assert sorted(nxt) == [0, 1, 2] and nxt[nxt[nxt[0]]] == 0 and nxt[0] != 0

    def test_s3_counts(self):
        g = symmetric_group(3)
        d = cayley_color_digraph(g)
        assert d.node_count == 6 and len(d.arcs) == 6 * 2
        assert {c for _, _, c in d.arcs} == {0, 1}

    @pytest.mark.parametrize("name", [n for n in corpus_groups() if n != "C1"])
    def test_regular(self, name):
        g = corpus_groups()[name]
        d = cayley_color_digraph(g)
        k = len(g.generators)
        for u in range(g.order):
            assert d.out_degree(u) == k and d.in_degree(u) == k

    def test_identity_generator_rejected(self):
        g = closure_from_generators([Permutation.identity(3), Permutation.from_cycles([(0, 1)], 3)])
        with pytest.raises(ValueError):
            cayley_color_digraph(g)


class TestGroupFile:
    def test_perm_roundtrip(self):
        g = parse_group_text("# S3\nperm 3\n(0 1)\n(0 1 2)\n")
        assert g.order == 6
        assert parse_group_text(format_group_perm(g)).order == 6

    def test_table_roundtrip(self):
        g = group_from_table(dihedral_table(4))
        h = parse_group_text(format_group_table(g))
        assert np.array_equal(h.table, g.table)
        assert h.generators == g.generators

    def test_trivial(self):
        assert parse_group_text("perm 2\n").order == 1

    @pytest.mark.parametrize("text", ["", "foo\n", "perm x\n", "perm 3\n(0 1\n", "table\n0 1\n1\n", "table\n0 1\n1 1\n"])
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse_group_text(text)


@settings(max_examples=30, deadline=None)
@given(st.lists(perms5, min_size=1, max_size=3))
def test_closure_random_generators(gens):
    g = closure_from_generators(gens)
    assert g.order == len(naive_closure(gens))
    assert isinstance(g, FiniteGroup)
    g.check()
