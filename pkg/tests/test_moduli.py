import itertools
import json
import random
from pathlib import Path

import pytest

from rootfans.fan import Cone, cones_of_dim, parse_vector, weyl_chamber_fan
from rootfans.moduli import (CombinatorialType, InconsistentData, ProjectivePair, RnData,
                             act_on_data, apply_J, chain_point_count, classify, classify_bn_data,
                             classify_cn_data, dynkin_fiber, enumerate_fiber_points, fit_quadratic,
                             format_type, is_over_z, orbit_data, orbit_type, parse_type,
                             random_orbit_data, universal_curve_equations, validate_data)
from rootfans.rootsys import (RootVector, SignedPermutation, build_root_system, parse_root,
                              positive_roots, weyl_elements)

FIXTURES = Path(__file__).parent / "fixtures"


def all_cones(family, n):
    fan = weyl_chamber_fan(family, n)
    return [c for m in range(n + 1) for c in cones_of_dim(fan, m)]


def ray_cone(family, n, text):
    fan = weyl_chamber_fan(family, n)
    return Cone((parse_vector(text, n),), fan.lattice)


def data(family, n, q=None, **pairs):
    return RnData.from_assignments(family, n, pairs, q)


# projective pairs

def test_projective_pair_canonical_forms():
    assert ProjectivePair(-2, -4) == ProjectivePair(1, 2)
    assert ProjectivePair(0, -3) == ProjectivePair(0, 1)
    assert ProjectivePair(3, 6, 7) == ProjectivePair(1, 2, 7)
    assert str(ProjectivePair.parse("4:-2")) == "2:-1"
    assert ProjectivePair.parse("1/2:1", 5) == ProjectivePair(3, 1, 5)
    with pytest.raises(ValueError):
        ProjectivePair(0, 0)
    with pytest.raises(ValueError):
        ProjectivePair(1, 1, 4)
    with pytest.raises(ValueError):
        ProjectivePair.parse("1,2")


# validation

def test_validate_examples():
    assert validate_data(data("B", 1, u1="5:3")).valid
    assert validate_data(data("B", 2)).valid
    res = validate_data(data("B", 2, b12="2:1"))
    assert not res.valid
    names = {tuple(r.name for r in t) for t in res.violated}
    assert ("b12", "u2", "u1") in names


def test_missing_pair_rejected():
    rs = build_root_system("B", 2)
    vals = {r: ProjectivePair(1, 1) for r in positive_roots(rs)[1:]}
    with pytest.raises(ValueError):
        RnData("B", 2, vals)


@pytest.mark.parametrize("family,n", [("B", 2), ("B", 3), ("C", 3), ("D", 3)])
def test_orbit_data_valid_and_perturbation_detected(family, n):
    for cone in all_cones(family, n):
        assert validate_data(orbit_data(family, n, cone)).valid
    # a generic torus point: t_beta = x^beta
    x = (2, 3, 5)[:n]
    rs = build_root_system(family, n)
    vals = {}
    for beta in positive_roots(rs):
        num = den = 1
        for xi, e in zip(x, beta.coords):
            num, den = (num * xi ** e, den) if e > 0 else (num, den * xi ** -e)
        vals[beta] = ProjectivePair(num, den)
    assert validate_data(RnData(family, n, vals)).valid
    for beta in positive_roots(rs):
        bad = dict(vals)
        bad[beta] = ProjectivePair(vals[beta].a * 7, vals[beta].b)
        assert not validate_data(RnData(family, n, bad)).valid


# classification

def test_classify_b1_examples():
    assert format_type(classify_bn_data(data("B", 1, u1="0:1"))) == "s1+ | s0 | s1-"
    assert format_type(classify_bn_data(data("B", 1, u1="1:1"))) == "s0 s1+ s1-"
    assert format_type(classify_bn_data(data("B", 1, u1="1:0"))) == "s1- | s0 | s1+"


def test_classify_c_examples():
    assert format_type(classify_cn_data(data("C", 1, **{"2u1": "0:1"}))) == "s1+ | s1-"
    assert format_type(classify_cn_data(data("C", 1))) == "s1+ s1-"
    cone = ray_cone("C", 2, "1/2(v1+v2)")
    assert format_type(classify_cn_data(orbit_data("C", 2, cone))) == "s1+ s2+ | s2- s1-"


def test_classify_rejects_invalid_and_wrong_family():
    with pytest.raises(InconsistentData):
        classify(data("B", 2, b12="2:1"))
    with pytest.raises(ValueError):
        classify_bn_data(data("C", 1))
    with pytest.raises(ValueError):
        classify_cn_data(data("B", 1))


def test_dense_torus_gives_single_part():
    for family, n in [("B", 3), ("C", 2), ("D", 3)]:
        assert classify(data(family, n)).length == 1


@pytest.mark.parametrize("family,n", [("B", 1), ("B", 2), ("B", 3), ("C", 1), ("C", 2), ("C", 3),
                                      ("D", 2), ("D", 3)])
def test_orbit_and_data_agree(family, n):
    for cone in all_cones(family, n):
        assert classify(orbit_data(family, n, cone)) == orbit_type(family, n, cone)


def test_orbit_and_data_agree_d4():
    for cone in all_cones("D", 4):
        assert classify(orbit_data("D", 4, cone)) == orbit_type("D", 4, cone)


def test_orbit_data_matches_pairing_rule():
    """(t_beta : t_-beta) = (0:1) exactly when <beta, v> > 0 for a ray v."""
    for ray in weyl_chamber_fan("B", 3).rays:
        cone = ray_cone("B", 3, _fmt(ray))
        d = orbit_data("B", 3, cone)
        for beta, p in d.values.items():
            s = sum(a * b for a, b in zip(beta.coords, ray))
            assert p.is_zero == (s > 0) and p.is_infinity == (s < 0)


def _fmt(v):
    from rootfans.fan import format_vector
    return format_vector(v)


@pytest.mark.parametrize("family,n", [("B", 3), ("C", 3), ("D", 3)])
def test_orbit_types_symmetric(family, n):
    for cone in all_cones(family, n):
        t = orbit_type(family, n, cone)
        L = t.length
        for k, p in enumerate(t.parts):
            assert {-x for x in p} == t.parts[L - 1 - k]
        if 0 in t.labels:
            assert L % 2 == 1 and 0 in t.parts[L // 2]


@pytest.mark.parametrize("key", ["B3", "C3", "D3"])
def test_rank3_orbit_type_tables(key):
    golden = json.loads((FIXTURES / "orbit_types_rank3.json").read_text())[key]
    family = key[0]
    fan = weyl_chamber_fan(family, 3)
    assert len(golden) == len(fan.rays)
    for ray in fan.rays:
        assert format_type(orbit_type(family, 3, Cone((ray,), fan.lattice))) == golden[_fmt(ray)]


def test_orbit_type_examples():
    assert format_type(orbit_type("D", 3, ray_cone("D", 3, "v1"))) == "s1+ | s2+ s2- s3+ s3- | s1-"
    fan = weyl_chamber_fan("D", 2)
    z = Cone((parse_vector("1/2(v1+v2)", 2), parse_vector("1/2(v1-v2)", 2)), fan.lattice)
    t = orbit_type("D", 2, z)
    assert "2dim" in t.flags
    assert t.components() == ["P1", "P1xP1", "P1"]
    assert format_type(t) == "s1+ | s2+ s2- | s1- [2dim]"


def test_c_coarse_model():
    cone = ray_cone("C", 2, "1/2(v1+v2)")
    t = orbit_type("C", 2, cone, model="coarse")
    assert format_type(t) == "s1+ s2+ | S0 | s2- s1- [nonreduced]"
    t = orbit_type("C", 2, ray_cone("C", 2, "v1"), model="coarse")
    assert format_type(t) == "s1+ | S0 s2+ s2- | s1-"
    with pytest.raises(ValueError):
        orbit_type("C", 2, cone, model="other")


def test_orbit_type_rejects_foreign_cone():
    fan = weyl_chamber_fan("B", 2)
    with pytest.raises(ValueError):
        orbit_type("B", 2, Cone(((2, 0), (0, 2), (-2, 0)), fan.lattice))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_z_rule_matches_translates_of_base_cone(n):
    """The Z flag is set exactly on cones containing a translate of <1/2(v+v_i), 1/2(v-v_i)>."""
    base = []
    for i in range(n):
        for signs in itertools.product((1, -1), repeat=n):
            v = list(signs)
            w = list(signs)
            w[i] = -w[i]
            base.append(frozenset({tuple(v), tuple(w)}))
    for cone in all_cones("D", n):
        contains = any(b <= set(cone.rays) for b in base)
        assert is_over_z(cone) == contains
        if contains:
            assert cone.relative_interior_point().count(0) >= 1


# Weyl group and J

@pytest.mark.parametrize("family,n", [("B", 2), ("B", 3), ("C", 2), ("D", 3)])
def test_weyl_equivariance(family, n):
    rng = random.Random(3)
    cones = all_cones(family, n)
    group = list(weyl_elements(family, n))
    for cone in rng.sample(cones, min(40, len(cones))):
        d = orbit_data(family, n, cone)
        t = classify(d)
        for w in rng.sample(group, 6):
            assert classify(act_on_data(w, d)) == t.relabel(w)


def test_act_on_data_moves_values():
    d = data("B", 2, u1="0:1")
    w = SignedPermutation((2, 1))
    moved = act_on_data(w, d)
    assert moved.t(parse_root("u2", 2)).is_zero
    assert moved.t(parse_root("u1", 2)) == ProjectivePair(1, 1)


def test_apply_j_examples():
    assert apply_J(data("B", 1, u1="2:3")) == data("B", 1, u1="2:-3")
    for p in ("1:0", "0:1"):
        assert apply_J(data("B", 1, u1=p)) == data("B", 1, u1=p)
    with pytest.raises(ValueError):
        apply_J(data("C", 1))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_j_involution_and_invariance(n):
    rng = random.Random(n)
    samples = []
    for cone in all_cones("B", n):
        samples.append(orbit_data("B", n, cone))
        samples.append(random_orbit_data("B", n, cone, 7, rng))
    for d in samples:
        jd = apply_J(d)
        assert validate_data(jd).valid
        assert apply_J(jd) == d
        assert classify(jd) == classify(d)


# finite-field oracle

@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("q", [3, 5])
def test_oracle_counts_b(n, q):
    rng = random.Random(q)
    for cone in all_cones("B", n):
        for d in (orbit_data("B", n, cone, q), random_orbit_data("B", n, cone, q, rng)):
            fc = enumerate_fiber_points("B", n, d, q)
            assert fc.count == chain_point_count(classify(d).length, q)


def test_oracle_examples():
    assert enumerate_fiber_points("B", 1, data("B", 1, 5), 5).count == 6
    assert enumerate_fiber_points("B", 1, data("B", 1, 5, u1="0:1"), 5).count == 16


@pytest.mark.parametrize("n", [1, 2])
def test_oracle_counts_contracted_c(n):
    q = 5
    for cone in all_cones("C", n):
        d = orbit_data("C", n, cone, q)
        fc = enumerate_fiber_points("C", n, d, q, contracted=True)
        assert fc.count == chain_point_count(classify_cn_data(d).length, q)


def test_oracle_counts_d2_chains():
    q = 5
    for cone in all_cones("D", 2):
        d = orbit_data("D", 2, cone, q)
        fc = enumerate_fiber_points("D", 2, d, q)
        if is_over_z(cone):
            assert fc.count > chain_point_count(3, q)
        else:
            assert fc.count == chain_point_count(classify(d).length, q)


def test_d2_z_fiber_is_quadratic():
    fan = weyl_chamber_fan("D", 2)
    z = Cone((parse_vector("1/2(v1+v2)", 2), parse_vector("1/2(v1-v2)", 2)), fan.lattice)
    counts = [(q, enumerate_fiber_points("D", 2, orbit_data("D", 2, z, q), q).count)
              for q in (3, 5, 7, 11)]
    a, b, c = fit_quadratic(counts[:3])
    assert a >= 1 and all(x.denominator == 1 for x in (a, b, c))
    q, count = counts[3]
    assert a * q * q + b * q + c == count


def test_oracle_guards():
    d = data("B", 1, 5)
    with pytest.raises(ValueError):
        enumerate_fiber_points("B", 1, d, 4)
    with pytest.raises(ValueError):
        enumerate_fiber_points("B", 1, d, 17)
    with pytest.raises(ValueError):
        enumerate_fiber_points("B", 3, data("B", 3, 5), 5)
    with pytest.raises(ValueError):
        enumerate_fiber_points("B", 1, d, 3)


def test_random_orbit_data_is_valid_and_on_orbit():
    rng = random.Random(5)
    for cone in all_cones("B", 2):
        d = random_orbit_data("B", 2, cone, 7, rng)
        assert validate_data(d).valid
        assert classify(d) == orbit_type("B", 2, cone)


# curve equations

def test_b1_equations():
    eqs = universal_curve_equations("B", 1).render()
    assert eqs == ["t_u1 z_u2 z_-a1+ = t_-u1 z_-u2 z_a1+",
                   "t_u1 z_a1- z_-u2 = t_-u1 z_-a1- z_u2"]


@pytest.mark.parametrize("family,n", [("B", 1), ("B", 2), ("B", 3), ("C", 2), ("C", 3), ("D", 2), ("D", 3)])
def test_relation_count_brute_force(family, n):
    """One relation per pair of new positive roots whose difference is an old root."""
    big = build_root_system(family, n + 1)
    small = {r.coords for r in build_root_system(family, n).roots}
    # marked points: roots of the bigger system with last coordinate exactly 1
    new = [r.coords for r in big.roots if r.coords[-1] == 1]
    expected = sum(1 for a, b in itertools.combinations(new, 2)
                   if tuple(x - y for x, y in zip(a, b))[:-1] in small)
    system = universal_curve_equations(family, n)
    data_rels = [r for r in system.relations if r.beta is not None]
    assert len(data_rels) == expected
    roots = build_root_system(family, n).roots
    assert all(r.beta in roots for r in data_rels)


def test_c_equations_include_double_section_relations():
    system = universal_curve_equations("C", 2)
    free = [r for r in system.relations if r.beta is None]
    assert len(free) == 2
    assert free[0].render("C", 2) == "z_a1- z_a1+ z_-2u3 = z_-a1- z_-a1+ z_2u3"
    contracted = universal_curve_equations("C", 2, contracted=True)
    assert all(r.beta is not None for r in contracted.relations)
    assert "2u3" not in contracted.coordinate_names()
    with pytest.raises(ValueError):
        universal_curve_equations("B", 2, contracted=True)


# types and diagrams

def test_format_examples_and_round_trip():
    t = CombinatorialType((frozenset({1}), frozenset({0}), frozenset({-1})))
    assert format_type(t) == "s1+ | s0 | s1-"
    assert format_type(CombinatorialType((frozenset({1, 2}), frozenset({-1, -2})))) == "s1+ s2+ | s2- s1-"
    for family, n in [("B", 3), ("C", 3), ("D", 3)]:
        for model in (("fine", "coarse") if family == "C" else ("fine",)):
            for cone in all_cones(family, n):
                t = orbit_type(family, n, cone, model)
                assert parse_type(format_type(t)) == t
                assert CombinatorialType.from_json(t.to_json()) == t


def test_type_invariants_enforced():
    with pytest.raises(ValueError):
        CombinatorialType((frozenset({1}), frozenset({1})))
    with pytest.raises(ValueError):
        CombinatorialType((frozenset({1, 0}), frozenset({-1})))
    with pytest.raises(ValueError):
        parse_type("s1+ | s0 | s2-")
    with pytest.raises(ValueError):
        parse_type("x1 | y")


def test_dynkin_diagrams():
    assert dynkin_fiber("B", 3).to_text() == "s0 <= s1+ - s2+ - s3+"
    assert dynkin_fiber("C", 2).to_text() == "S0 => s1+ - s2+"
    a1 = dynkin_fiber("A", 1)
    assert len(a1.vertices) == 2 and len(a1.edges) == 1
    d4 = dynkin_fiber("D", 4, SignedPermutation((-2, 1, 3, 4)))
    assert d4.vertices[:2] == ("s2+", "s2-")
    assert {e.target for e in d4.edges[:2]} == {"s1+"}
    assert d4.to_text().splitlines()[1].strip() == "s1+ - s3+ - s4+"
    js = dynkin_fiber("B", 2).to_json()
    assert js["edges"][0] == {"source": "s0", "target": "s1+", "multiplicity": 2, "arrow_to": "s0"}


def test_root_vector_names_used_in_data():
    d = data("B", 2, g12="0:1")
    assert d.t(RootVector((-1, -1))).is_infinity
