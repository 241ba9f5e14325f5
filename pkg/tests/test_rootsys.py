import itertools
from math import factorial

import pytest
from hypothesis import given, strategies as st

from rootfans.rootsys import (RootVector, SignedPermutation, a2_triples, act,
                              build_root_system, lattice, lattice_index, parse_root,
                              positive_roots, reflect, weyl_elements)

FAMILY_RANKS = [(f, n) for f in "BCD" for n in range(1, 9) if not (f == "D" and n < 2)]


def brute_roots(family, n):
    """Roots from their shape alone: integer vectors of small norm."""
    out = set()
    for v in itertools.product(range(-2, 3), repeat=n):
        nz = [c for c in v if c]
        if family == "B" and (nz in ([1], [-1]) or (len(nz) == 2 and all(abs(c) == 1 for c in nz))):
            out.add(v)
        if family == "C" and (nz in ([2], [-2]) or (len(nz) == 2 and all(abs(c) == 1 for c in nz))):
            out.add(v)
        if family == "D" and len(nz) == 2 and all(abs(c) == 1 for c in nz):
            out.add(v)
    return out


@pytest.mark.parametrize("family,n,count", [("B", 2, 8), ("D", 2, 4), ("C", 3, 18),
                                            ("B", 1, 2), ("D", 4, 24)])
def test_root_counts(family, n, count):
    assert len(build_root_system(family, n).roots) == count


def test_d2_roots_are_pm_u1_pm_u2():
    rs = build_root_system("D", 2)
    assert {r.coords for r in rs.roots} == {(1, 1), (1, -1), (-1, 1), (-1, -1)}


@pytest.mark.parametrize("family,n", [fn for fn in FAMILY_RANKS if fn[1] <= 5])
def test_roots_match_shape_enumeration(family, n):
    assert {r.coords for r in build_root_system(family, n).roots} == brute_roots(family, n)


@pytest.mark.parametrize("family,n", FAMILY_RANKS)
def test_negation_closed(family, n):
    roots = build_root_system(family, n).roots
    assert all(-r in roots for r in roots)


@pytest.mark.parametrize("family,n", FAMILY_RANKS)
def test_positive_roots_are_half_and_sign_coherent(family, n):
    rs = build_root_system(family, n)
    pos = positive_roots(rs)
    assert len(pos) == len(rs.roots) // 2
    for r in rs.roots:
        coeffs = rs.simple_coefficients(r)
        assert all(c.denominator == 1 for c in coeffs)
        assert all(c >= 0 for c in coeffs) or all(c <= 0 for c in coeffs)
        assert (r in pos) == all(c >= 0 for c in coeffs)


def test_simple_roots_standard_choice():
    assert [r.coords for r in build_root_system("B", 3).simple_roots] == [(1, -1, 0), (0, 1, -1), (0, 0, 1)]
    assert [r.coords for r in build_root_system("C", 3).simple_roots] == [(1, -1, 0), (0, 1, -1), (0, 0, 2)]
    assert [r.coords for r in build_root_system("D", 3).simple_roots] == [(1, -1, 0), (0, 1, -1), (0, 1, 1)]


def test_positive_roots_b2_and_b1():
    assert {r.name for r in positive_roots(build_root_system("B", 2))} == {"u1", "u2", "b12", "g12"}
    assert [r.name for r in positive_roots(build_root_system("B", 1))] == ["u1"]
    assert len(positive_roots(build_root_system("D", 3))) == 6


def test_positive_root_order_is_height_then_lex():
    rs = build_root_system("B", 3)
    pos = positive_roots(rs)
    keys = [(rs.height(r), r.coords) for r in pos]
    assert keys == sorted(keys)


def brute_triples(rs):
    pos = positive_roots(rs)
    found = set()
    for a, b in itertools.combinations(pos, 2):
        if (a + b) in set(pos):
            found.add((frozenset((a, b)), a + b))
    return found


@pytest.mark.parametrize("family,n", [fn for fn in FAMILY_RANKS if fn[1] <= 6])
def test_a2_triples_match_pairwise_scan(family, n):
    rs = build_root_system(family, n)
    triples = a2_triples(rs)
    assert len(triples) == len({(frozenset((a, b)), c) for a, b, c in triples})
    assert {(frozenset((a, b)), c) for a, b, c in triples} == brute_triples(rs)


def test_a2_triples_b2_and_b1():
    rs = build_root_system("B", 2)
    named = [tuple(r.name for r in t) for t in a2_triples(rs)]
    assert sorted(named) == sorted([("b12", "u2", "u1"), ("u1", "u2", "g12")])
    assert a2_triples(build_root_system("B", 1)) == []


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_a2_triples_b_families(n):
    # u_i - u_j + u_j = u_i; u_i + u_j; (u_i - u_j) + (u_j - u_k); (u_i - u_j) + (u_j + u_k)
    # counted as unordered pairs of positive roots
    rs = build_root_system("B", n)
    c2 = n * (n - 1) // 2
    c3 = n * (n - 1) * (n - 2) // 6
    expected = c2 + c2 + c3 + 3 * c3
    # families: beta_ij + u_j = u_i; u_i + u_j = gamma_ij; beta_ij + beta_jk = beta_ik;
    # beta_ij + gamma_jk = gamma_ik, beta_ik + gamma_jk = gamma_ij, beta_jk + gamma_ik (i<j<k)
    assert len(a2_triples(rs)) == expected


@pytest.mark.parametrize("family,n,count", [("B", 2, 8), ("D", 3, 24), ("B", 1, 2),
                                            ("C", 4, 384), ("D", 4, 192)])
def test_weyl_counts(family, n, count):
    elems = list(weyl_elements(family, n))
    assert len(elems) == count == len(set(elems))


def test_weyl_b1():
    assert {w.images for w in weyl_elements("B", 1)} == {(1,), (-1,)}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_d_subgroup_closed(n):
    elems = set(weyl_elements("D", n))
    assert all(w.sign_product == 1 for w in elems)
    sample = list(elems)[:30]
    assert all(a * b in elems for a in sample for b in sample)
    assert all(w.inverse() in elems for w in sample)


def test_act_examples():
    u1, b12 = RootVector((1, 0)), RootVector((1, -1))
    assert act(SignedPermutation((-1, 2)), u1) == RootVector((-1, 0))
    assert act(SignedPermutation((2, 1)), b12) == -b12
    orbit = {act(w, u1).coords for w in weyl_elements("B", 2)}
    assert orbit == {(1, 0), (-1, 0), (0, 1), (0, -1)}


def test_act_rank_mismatch():
    with pytest.raises(ValueError):
        act(SignedPermutation((1, 2, 3)), RootVector((1, 0)))


@pytest.mark.parametrize("family,n", [fn for fn in FAMILY_RANKS if fn[1] <= 4])
def test_act_permutes_roots(family, n):
    rs = build_root_system(family, n)
    for w in weyl_elements(family, n):
        assert {act(w, r) for r in rs.roots} == rs.roots


def test_reflection_is_the_weyl_action():
    rs = build_root_system("C", 3)
    for a in rs.simple_roots:
        for r in rs.roots:
            assert RootVector(reflect(a, r.coords)) in rs.roots
            assert reflect(a, reflect(a, r.coords)) == r.coords


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_lattice_indices(n):
    NB, NC = lattice("N", "B", n), lattice("N", "C", n)
    MB, MC = lattice("M", "B", n), lattice("M", "C", n)
    assert lattice_index(NB, NC) == 2
    assert lattice_index(NB, NB) == 1
    assert lattice_index(MC, MB) == 2
    with pytest.raises(ValueError):
        lattice_index(NC, NB)


def test_lattice_membership():
    NB, NC = lattice("N", "B", 3), lattice("N", "C", 3)
    assert NC.contains((1, 1, 1)) and not NB.contains((1, 1, 1))
    assert not NC.contains((1, 1, 0))
    assert NC.is_primitive((1, -1, 1)) and not NC.is_primitive((2, 2, 2))
    assert NB.is_primitive((2, 2, 2))


def test_rank_errors():
    with pytest.raises(ValueError):
        build_root_system("D", 1)
    with pytest.raises(ValueError):
        build_root_system("B", 0)
    with pytest.raises(ValueError):
        build_root_system("E", 6)


@pytest.mark.parametrize("name,coords", [("u1", (1, 0, 0)), ("2u3", (0, 0, 2)), ("B12", (1, -1, 0)),
                                          ("g23", (0, 1, 1)), ("-b13", (-1, 0, 1))])
def test_parse_root(name, coords):
    r = parse_root(name, 3)
    assert r.coords == coords
    assert parse_root(r.name, 3) == r


@given(st.permutations(range(1, 6)), st.lists(st.booleans(), min_size=5, max_size=5))
def test_signed_permutation_group_laws(perm, flips):
    w = SignedPermutation(tuple(-x if f else x for x, f in zip(perm, flips)))
    e = SignedPermutation((1, 2, 3, 4, 5))
    assert w * w.inverse() == e == w.inverse() * w
    v = (3, -1, 4, 1, -5)
    assert w.inverse().act_vector(w.act_vector(v)) == v


def test_signed_permutation_rejects_bad_images():
    with pytest.raises(ValueError):
        SignedPermutation((1, -1))
    with pytest.raises(ValueError):
        SignedPermutation((1, 3))


def test_weyl_order_formula():
    for n in range(1, 5):
        assert sum(1 for _ in weyl_elements("B", n)) == 2 ** n * factorial(n)
