"""Data side of the moduli interpretation of X(B_n), X(C_n), X(D_n).

Marked points are labelled by integers: the signed label e*i stands for the
section s_i^e (root u_{n+1} + e u_i of the bigger system) and 0 stands for
s_0 (root u_{n+1}) or, in the C-case, the double-section S_0 (root 2u_{n+1}).
Data are stored as one projective pair (t_beta : t_-beta) per positive root.
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

import numpy as np

from .fan import Cone, weyl_chamber_fan
from .rootsys import (RootSystem, RootVector, SignedPermutation, a2_triples,
                      build_root_system, check_family_rank, parse_root,
                      positive_roots)

MAX_ORACLE_PRIME = 13


def is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(q ** 0.5) + 1))


# ---------------------------------------------------------------------------
# projective pairs

@dataclass(frozen=True)
class ProjectivePair:
    """A point (a : b) of P^1 over Q (q is None) or over F_q, kept canonical."""

    a: int
    b: int
    q: int | None = None

    def __post_init__(self):
        a, b, q = self.a, self.b, self.q
        if q is None:
            a, b = Fraction(a), Fraction(b)
            scale = a.denominator * b.denominator
            a, b = int(a * scale), int(b * scale)
            if a == 0 and b == 0:
                raise ValueError("(0:0) is not a projective point")
            g = gcd(a, b)
            a, b = a // g, b // g
            if a < 0 or (a == 0 and b < 0):
                a, b = -a, -b
        else:
            if not is_prime(q):
                raise ValueError(f"{q} is not prime")
            a, b = int(a) % q, int(b) % q
            if a == 0 and b == 0:
                raise ValueError("(0:0) is not a projective point")
            inv = pow(a if a else b, -1, q)
            a, b = a * inv % q, b * inv % q
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def parse(cls, text: str, q: int | None = None) -> "ProjectivePair":
        m = re.fullmatch(r"\s*(-?\d+(?:/\d+)?)\s*:\s*(-?\d+(?:/\d+)?)\s*", text)
        if not m:
            raise ValueError(f"cannot parse projective pair {text!r}; expected a:b")
        a, b = Fraction(m.group(1)), Fraction(m.group(2))
        if q is not None:
            a = a.numerator * pow(a.denominator, -1, q)
            b = b.numerator * pow(b.denominator, -1, q)
        return cls(a, b, q)

    def swap(self) -> "ProjectivePair":
        return ProjectivePair(self.b, self.a, self.q)

    @property
    def is_zero(self) -> bool:
        """The point (0:1)."""
        return self.a == 0

    @property
    def is_infinity(self) -> bool:
        """The point (1:0)."""
        return self.b == 0

    def __str__(self) -> str:
        return f"{self.a}:{self.b}"


def one(q: int | None = None) -> ProjectivePair:
    return ProjectivePair(1, 1, q)


ZERO = (0, 1)
INFINITY = (1, 0)


# ---------------------------------------------------------------------------
# data

@dataclass(frozen=True)
class RnData:
    family: str
    rank: int
    values: Mapping[RootVector, ProjectivePair]
    q: int | None = None

    def __post_init__(self):
        fam = check_family_rank(self.family, self.rank)
        if fam == "A":
            raise ValueError("data are defined here for families B, C, D")
        object.__setattr__(self, "family", fam)
        rs = self.root_system
        pos = set(positive_roots(rs))
        vals = dict(self.values)
        missing = [r for r in pos if r not in vals]
        if missing:
            raise ValueError("missing data for " + ", ".join(sorted(r.name for r in missing)))
        extra = [r for r in vals if r not in pos]
        if extra:
            raise ValueError("not positive roots: " + ", ".join(r.name for r in extra))
        if any(p.q != self.q for p in vals.values()):
            raise ValueError("all pairs must live over the same field")
        object.__setattr__(self, "values", vals)

    @property
    def root_system(self) -> RootSystem:
        return build_root_system(self.family, self.rank)

    def t(self, beta: RootVector) -> ProjectivePair:
        """(t_beta : t_-beta) for any root beta."""
        if beta in self.values:
            return self.values[beta]
        return self.values[-beta].swap()

    @classmethod
    def from_assignments(cls, family: str, n: int, assignments: Mapping[str, str] | None = None,
                         q: int | None = None) -> "RnData":
        """Build data from {'b12': '2:1', ...}; unspecified pairs are (1:1)."""
        rs = build_root_system(family, n)
        vals = {r: one(q) for r in positive_roots(rs)}
        for name, value in (assignments or {}).items():
            r = parse_root(name, n)
            if r not in rs:
                raise ValueError(f"{name} is not a root of {family}{n}")
            p = value if isinstance(value, ProjectivePair) else ProjectivePair.parse(value, q)
            vals[r] = p if r in vals else p.swap()
        return cls(rs.family, n, vals, q)

    def __eq__(self, other) -> bool:
        return (isinstance(other, RnData) and (self.family, self.rank, self.q)
                == (other.family, other.rank, other.q) and self.values == other.values)

    def __hash__(self):
        return hash((self.family, self.rank, self.q, frozenset(self.values.items())))

    def __str__(self) -> str:
        rs = self.root_system
        return ", ".join(f"{r.name}={self.values[r]}" for r in positive_roots(rs))


@dataclass(frozen=True)
class ValidationResult:
    valid: bool
    violated: list[tuple[RootVector, RootVector, RootVector]]

    def __bool__(self) -> bool:
        return self.valid


def validate_data(d: RnData) -> ValidationResult:
    """Check t_a t_b t_-c = t_-a t_-b t_c for each positive a + b = c."""
    bad = []
    for x, y, z in a2_triples(d.root_system):
        px, py, pz = d.t(x), d.t(y), d.t(z)
        lhs = px.a * py.a * pz.b
        rhs = px.b * py.b * pz.a
        if (lhs - rhs) % d.q if d.q else lhs != rhs:
            bad.append((x, y, z))
    return ValidationResult(not bad, bad)


def label_name(label: int, double_section: bool = False) -> str:
    if label == 0:
        return "S0" if double_section else "s0"
    return f"s{abs(label)}{'+' if label > 0 else '-'}"


def coordinate_name(label: int, family: str, n: int) -> str:
    """Name of the P^1 factor attached to a label: a1+, a1-, u3, 2u3."""
    if label == 0:
        return f"{'2' if family == 'C' else ''}u{n + 1}"
    return f"a{abs(label)}{'+' if label > 0 else '-'}"


def _label_vector(label: int, n: int) -> tuple[int, ...]:
    # the part of alpha_label in the span of u_1..u_n
    v = [0] * n
    if label:
        v[abs(label) - 1] = 1 if label > 0 else -1
    return tuple(v)


def labels_for(family: str, n: int, with_zero: bool | None = None) -> list[int]:
    if with_zero is None:
        with_zero = family == "B"
    out = [0] if with_zero else []
    for i in range(1, n + 1):
        out += [i, -i]
    return out


# ---------------------------------------------------------------------------
# combinatorial types

@dataclass(frozen=True)
class CombinatorialType:
    """Symmetric partition P_{-m} | ... | P_m of the labels, left to right."""

    parts: tuple[frozenset[int], ...]
    flags: frozenset[str] = frozenset()
    double_section: bool = False

    def __post_init__(self):
        parts = tuple(frozenset(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "flags", frozenset(self.flags))
        unknown = self.flags - {"nonreduced", "2dim"}
        if unknown:
            raise ValueError(f"unknown flags {sorted(unknown)}")
        if not parts or any(not p for p in parts):
            raise ValueError("parts must be nonempty")
        seen = [x for p in parts for x in p]
        if len(seen) != len(set(seen)):
            raise ValueError("a label occurs in two parts")
        L = len(parts)
        for k, p in enumerate(parts):
            if frozenset(-x for x in p) != parts[L - 1 - k]:
                raise ValueError("type is not symmetric under e*i -> -e*i")
        if 0 in seen and (L % 2 == 0 or 0 not in parts[L // 2]):
            raise ValueError("label 0 must lie in the central part")

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def labels(self) -> frozenset[int]:
        return frozenset(x for p in self.parts for x in p)

    def components(self) -> list[str]:
        """Irreducible components left to right."""
        out = ["P1"] * len(self.parts)
        if "2dim" in self.flags:
            out[len(self.parts) // 2] = "P1xP1"
        return out

    def relabel(self, w: SignedPermutation) -> "CombinatorialType":
        return CombinatorialType(tuple(frozenset(w(x) for x in p) for p in self.parts),
                                 self.flags, self.double_section)

    def to_json(self) -> dict:
        return {"parts": [_sorted_part(p, pos, len(self.parts)) for pos, p in enumerate(self.parts)],
                "flags": sorted(self.flags), "double_section": self.double_section}

    @classmethod
    def from_json(cls, obj: Mapping) -> "CombinatorialType":
        return cls(tuple(frozenset(p) for p in obj["parts"]), frozenset(obj.get("flags", ())),
                   bool(obj.get("double_section", False)))

    def __str__(self) -> str:
        return format_type(self)


def _sorted_part(p: Iterable[int], pos: int, length: int) -> list[int]:
    p = list(p)
    if length % 2 and pos == length // 2:
        return sorted(p, key=lambda x: (x != 0, abs(x), x < 0))
    if pos < length / 2:
        return sorted(p, key=lambda x: (abs(x), x < 0))
    return sorted(p, key=lambda x: (-abs(x), x < 0))


def format_type(t: CombinatorialType) -> str:
    L = len(t.parts)
    body = " | ".join(" ".join(label_name(x, t.double_section) for x in _sorted_part(p, pos, L))
                      for pos, p in enumerate(t.parts))
    for flag in ("nonreduced", "2dim"):
        if flag in t.flags:
            body += f" [{flag}]"
    return body


_LABEL_RE = re.compile(r"^(?:([sS])0|s(\d+)([+-]))$")


def parse_type(text: str) -> CombinatorialType:
    flags = set(re.findall(r"\[(\w+)\]", text))
    body = re.sub(r"\s*\[\w+\]", "", text).strip()
    parts, double = [], False
    for chunk in body.split("|"):
        labels = []
        for tok in chunk.split():
            m = _LABEL_RE.match(tok)
            if not m:
                raise ValueError(f"bad label {tok!r} in {text!r}")
            if m.group(1):
                labels.append(0)
                double = double or m.group(1) == "S"
            else:
                i = int(m.group(2))
                labels.append(i if m.group(3) == "+" else -i)
        parts.append(frozenset(labels))
    return CombinatorialType(tuple(parts), frozenset(flags), double)


# ---------------------------------------------------------------------------
# classification of data

class InconsistentData(ValueError):
    pass


def _classify(d: RnData, labels: Sequence[int]) -> CombinatorialType:
    rs = d.root_system
    n = d.rank
    k = len(labels)
    vec = {x: _label_vector(x, n) for x in labels}
    leq = np.eye(k, dtype=bool)
    strict = []
    for (i, x), (j, y) in itertools.permutations(enumerate(labels), 2):
        beta = RootVector(tuple(a - b for a, b in zip(vec[x], vec[y])))
        if beta not in rs:
            continue
        p = d.t(beta)
        if not p.is_infinity:
            leq[i, j] = True
        if p.is_zero:
            strict.append((i, j))
    for m in range(k):
        leq |= np.outer(leq[:, m], leq[m, :])
    for i, j in strict:
        if leq[j, i]:
            raise InconsistentData(f"{label_name(labels[i])} < {label_name(labels[j])} "
                                   "contradicts the other relations")
    classes: list[list[int]] = []
    for i in range(k):
        for c in classes:
            if leq[i, c[0]] and leq[c[0], i]:
                c.append(i)
                break
        else:
            classes.append([i])
    below = [sum(1 for c2 in classes if leq[c2[0], c[0]]) for c in classes]
    groups: dict[int, list[list[int]]] = {}
    for c, b in zip(classes, below):
        groups.setdefault(b, []).append(c)
    parts, flags = [], set()
    for b in sorted(groups):
        group = groups[b]
        members = [labels[i] for c in group for i in c]
        if len(group) > 1:
            # the only admissible incomparability: s_i^+ and s_i^- alone
            if not (len(group) == 2 and len(members) == 2 and members[0] == -members[1]):
                raise InconsistentData("data do not define a chain: incomparable classes "
                                       + ", ".join(label_name(x) for x in members))
            flags.add("2dim")
        parts.append(frozenset(members))
    for a, b in zip(sorted(groups), sorted(groups)[1:]):
        if not all(leq[i, j] for i in itertools.chain(*groups[a]) for j in itertools.chain(*groups[b])):
            raise InconsistentData("ordering of classes is not total")
    try:
        return CombinatorialType(tuple(parts), frozenset(flags))
    except ValueError as e:
        raise InconsistentData(str(e)) from e


def _require_valid(d: RnData) -> None:
    res = validate_data(d)
    if not res.valid:
        raise InconsistentData("invalid data; violated triples: " + ", ".join(
            "(" + ",".join(r.name for r in t) + ")" for t in res.violated))


def classify_bn_data(d: RnData) -> CombinatorialType:
    if d.family != "B":
        raise ValueError("classify_bn_data expects B_n-data")
    _require_valid(d)
    return _classify(d, labels_for("B", d.rank))


def classify_cn_data(d: RnData) -> CombinatorialType:
    """Type of the fibre of the universal C_n-curve (labels s_i^+-, no s_0)."""
    if d.family != "C":
        raise ValueError("classify_cn_data expects C_n-data")
    _require_valid(d)
    return _classify(d, labels_for("C", d.rank))


def classify(d: RnData) -> CombinatorialType:
    _require_valid(d)
    return _classify(d, labels_for(d.family, d.rank))


# ---------------------------------------------------------------------------
# torus orbits

def _require_cone(family: str, n: int, cone: Cone):
    fan = weyl_chamber_fan(family, n)
    if cone.lattice.rank != n or cone not in fan:
        raise ValueError(f"{cone} is not a cone of Sigma({family}{n})")
    return fan


def orbit_data(family: str, n: int, cone: Cone, q: int | None = None) -> RnData:
    """Data at the distinguished point of the orbit of ``cone``."""
    _require_cone(family, n, cone)
    v = cone.relative_interior_point()
    vals = {}
    for beta in positive_roots(build_root_system(family, n)):
        s = beta.pair(v)
        vals[beta] = ProjectivePair(*(ZERO if s > 0 else INFINITY if s < 0 else (1, 1)), q)
    return RnData(family, n, vals, q)


def random_orbit_data(family: str, n: int, cone: Cone, q: int,
                      rng: random.Random) -> RnData:
    """A random F_q-point of the orbit of ``cone``: torus element x acting on
    the distinguished point."""
    _require_cone(family, n, cone)
    v = cone.relative_interior_point()
    x = [rng.randrange(1, q) for _ in range(n)]
    vals = {}
    for beta in positive_roots(build_root_system(family, n)):
        s = beta.pair(v)
        if s > 0:
            vals[beta] = ProjectivePair(0, 1, q)
        elif s < 0:
            vals[beta] = ProjectivePair(1, 0, q)
        else:
            val = 1
            for xi, e in zip(x, beta.coords):
                val = val * pow(xi, e, q) % q
            vals[beta] = ProjectivePair(val, 1, q)
    return RnData(family, n, vals, q)


def is_over_z(cone: Cone) -> bool:
    """D-case: two half-sum rays of the cone differ in the sign of one coordinate."""
    half = [r for r in cone.rays if all(x % 2 for x in r)]
    return any(sum(1 for a, b in zip(r, s) if a != b) == 1
               for r, s in itertools.combinations(half, 2))


def orbit_type(family: str, n: int, cone: Cone, model: str = "fine") -> CombinatorialType:
    """Combinatorial type over the torus orbit of ``cone``.

    Labels are ordered by the value e*v_i of the interior point v of the cone
    (0 for label 0), largest value leftmost.  ``model`` matters for C only:
    "fine" is the universal C_n-curve (no s_0, chains of any parity),
    "coarse" the fibre of X(C_{n+1}) with double-section S_0 and the
    nonreduced flag over the divisor of half-sum rays.
    """
    family = check_family_rank(family, n)
    if model not in ("fine", "coarse"):
        raise ValueError(f"unknown model {model!r}")
    _require_cone(family, n, cone)
    v = cone.relative_interior_point()
    with_zero = family == "B" or (family == "C" and model == "coarse")
    labels = labels_for(family, n, with_zero)
    value = {x: (0 if x == 0 else (v[abs(x) - 1] if x > 0 else -v[abs(x) - 1])) for x in labels}
    parts = [frozenset(x for x in labels if value[x] == val)
             for val in sorted(set(value.values()), reverse=True)]
    flags = set()
    if family == "C" and model == "coarse" and any(all(x % 2 for x in r) for r in cone.rays):
        flags.add("nonreduced")
    if family == "D" and is_over_z(cone):
        flags.add("2dim")
    return CombinatorialType(tuple(parts), frozenset(flags),
                             double_section=family == "C" and model == "coarse")


# ---------------------------------------------------------------------------
# Weyl group and the involution J

def act_on_data(w: SignedPermutation, d: RnData) -> RnData:
    """Relabel data by w: t'_{w beta} = t_beta."""
    vals = {}
    for beta, p in d.values.items():
        image = RootVector(w.act_vector(beta.coords))
        if image in d.values:
            vals[image] = p
        else:
            vals[-image] = p.swap()
    return RnData(d.family, d.rank, vals, d.q)


def apply_J(d: RnData) -> RnData:
    """(t_{u_i} : t_{-u_i}) -> (t_{u_i} : -t_{-u_i}); other pairs unchanged."""
    if d.family != "B":
        raise ValueError("J is defined on B_n-data")
    _require_valid(d)
    vals = {}
    for beta, p in d.values.items():
        short = sum(1 for c in beta.coords if c) == 1
        vals[beta] = ProjectivePair(p.a, -p.b, d.q) if short else p
    return RnData(d.family, d.rank, vals, d.q)


# ---------------------------------------------------------------------------
# universal curve equations

@dataclass(frozen=True)
class CurveRelation:
    """t_beta * prod lhs = t_-beta * prod rhs; factors are (label, sign) with
    sign +1 for z_alpha and -1 for z_-alpha.  beta is None for the relation
    of the double-section coordinate, which carries no data."""

    beta: RootVector | None
    lhs: tuple[tuple[int, int], ...]
    rhs: tuple[tuple[int, int], ...]

    def render(self, family: str, n: int) -> str:
        def z(f):
            label, sign = f
            return "z_" + ("" if sign > 0 else "-") + coordinate_name(label, family, n)
        left = " ".join(z(f) for f in self.lhs)
        right = " ".join(z(f) for f in self.rhs)
        if self.beta is None:
            return f"{left} = {right}"
        return f"t_{self.beta.name} {left} = t_{(-self.beta).name} {right}"


@dataclass(frozen=True)
class CurveEquationSystem:
    family: str
    rank: int
    coordinates: tuple[int, ...]
    relations: tuple[CurveRelation, ...]
    contracted: bool = False

    def coordinate_names(self) -> list[str]:
        return [coordinate_name(x, self.family, self.rank) for x in self.coordinates]

    def render(self) -> list[str]:
        return [r.render(self.family, self.rank) for r in self.relations]


def universal_curve_equations(family: str, n: int, contracted: bool = False) -> CurveEquationSystem:
    """Equations of X(R_{n+1}) over X(R_n) in the product of the P^1 factors
    of R_{n+1}^+ minus R_n^+.

    For C the double-section factor 2u_{n+1} is included with its own
    relations unless ``contracted`` is set, which gives the universal
    C_n-curve C(C_{n+1}/C_n).
    """
    family = check_family_rank(family, n)
    if family == "A":
        raise ValueError("families B, C, D only")
    if contracted and family != "C":
        raise ValueError("the contracted curve exists for family C only")
    rs = build_root_system(family, n)
    with_zero = family == "B" or (family == "C" and not contracted)
    coords = labels_for(family, n, with_zero)
    rels = []
    if family == "C" and not contracted:
        for i in range(1, n + 1):
            rels.append(CurveRelation(None, ((-i, 1), (i, 1), (0, -1)), ((-i, -1), (i, -1), (0, 1))))
    data_labels = [x for x in coords if not (family == "C" and x == 0)]
    for x, y in itertools.combinations(data_labels, 2):
        beta = RootVector(tuple(a - b for a, b in zip(_label_vector(x, n), _label_vector(y, n))))
        if beta not in rs:
            continue
        a1, a2 = (x, y) if beta in set(positive_roots(rs)) else (y, x)
        beta = beta if a1 == x else -beta
        rels.append(CurveRelation(beta, ((a2, 1), (a1, -1)), ((a2, -1), (a1, 1))))
    return CurveEquationSystem(family, n, tuple(coords), tuple(rels), contracted)


# ---------------------------------------------------------------------------
# finite-field fibre oracle

@dataclass(frozen=True)
class FiberCount:
    count: int
    q: int
    profile: dict[str, int]  # number of distinct values per coordinate

    def predicted_chain_length(self) -> Fraction:
        """l with count = l(q+1) - (l-1), if the fibre is a chain of P^1."""
        return Fraction(self.count - 1, self.q)


def enumerate_fiber_points(family: str, n: int, d: RnData, q: int,
                           contracted: bool = False) -> FiberCount:
    """Count F_q-points of the fibre over d by exhausting (P^1(F_q))^k."""
    if not is_prime(q) or q > MAX_ORACLE_PRIME:
        raise ValueError(f"q must be a prime <= {MAX_ORACLE_PRIME}, got {q}")
    family = check_family_rank(family, n)
    if n > 2:
        raise ValueError("fibre enumeration is limited to n <= 2")
    if d.q != q or d.family != family or d.rank != n:
        raise ValueError("data must be over F_q for the same root system")
    system = universal_curve_equations(family, n, contracted)
    k = len(system.coordinates)
    pos = {x: i for i, x in enumerate(system.coordinates)}
    # P^1(F_q) as (x:1), x in F_q, then (1:0)
    first = np.array(list(range(q)) + [1], dtype=np.int64)
    second = np.array([1] * q + [0], dtype=np.int64)

    def factor(label: int, sign: int) -> np.ndarray:
        shape = [1] * k
        shape[pos[label]] = q + 1
        return (first if sign > 0 else second).reshape(shape)

    mask = np.ones([q + 1] * k, dtype=bool)
    for rel in system.relations:
        ta, tb = (1, 1) if rel.beta is None else (d.t(rel.beta).a, d.t(rel.beta).b)
        lhs = np.int64(ta)
        for f in rel.lhs:
            lhs = lhs * factor(*f)
        rhs = np.int64(tb)
        for f in rel.rhs:
            rhs = rhs * factor(*f)
        mask &= ((lhs - rhs) % q) == 0
    count = int(mask.sum())
    profile = {}
    for x, i in pos.items():
        axes = tuple(a for a in range(k) if a != i)
        profile[coordinate_name(x, family, n)] = int(mask.any(axis=axes).sum()) if axes \
            else int(mask.sum())
    return FiberCount(count, q, profile)


def chain_point_count(length: int, q: int) -> int:
    return length * (q + 1) - (length - 1)


def fit_quadratic(points: Sequence[tuple[int, int]]) -> tuple[Fraction, Fraction, Fraction]:
    """Exact a, b, c with a x^2 + b x + c through three points."""
    if len(points) != 3:
        raise ValueError("need exactly three points")
    (x0, y0), (x1, y1), (x2, y2) = [(Fraction(x), Fraction(y)) for x, y in points]
    d01 = (y1 - y0) / (x1 - x0)
    d12 = (y2 - y1) / (x2 - x1)
    a = (d12 - d01) / (x2 - x0)
    b = d01 - a * (x0 + x1)
    c = y0 - a * x0 * x0 - b * x0
    return a, b, c


# ---------------------------------------------------------------------------
# Dynkin diagrams of fibres over torus fixed points

@dataclass(frozen=True)
class DynkinEdge:
    source: str
    target: str
    multiplicity: int = 1
    arrow_to: str | None = None  # vertex the arrow of a double edge points to


@dataclass(frozen=True)
class DynkinDiagram:
    family: str
    rank: int
    vertices: tuple[str, ...]
    edges: tuple[DynkinEdge, ...]

    def to_text(self) -> str:
        if self.family == "D":
            a, b = self.vertices[0], self.vertices[1]
            tail = " - ".join(self.vertices[2:])
            pad = " " * len(a)
            return f"{a} \\\n{pad}  {tail}\n{b} /"
        out = self.vertices[0]
        for e, v in zip(self.edges, self.vertices[1:]):
            if e.multiplicity == 2:
                out += " <= " if e.arrow_to == e.source else " => "
            else:
                out += " - "
            out += v
        return out

    def to_json(self) -> dict:
        return {"family": self.family, "rank": self.rank, "vertices": list(self.vertices),
                "edges": [{"source": e.source, "target": e.target,
                           "multiplicity": e.multiplicity, "arrow_to": e.arrow_to}
                          for e in self.edges]}


def dynkin_fiber(family: str, n: int, w: SignedPermutation | None = None) -> DynkinDiagram:
    """Fibre of X(R_{n+1}) over the torus fixed point of the chamber of w."""
    family = check_family_rank(family, n)
    if family == "A":
        order = [abs(x) for x in w.images] if w else list(range(1, n + 2))
        if sorted(order) != list(range(1, n + 2)):
            raise ValueError(f"A{n} needs a permutation of 1..{n + 1}")
        verts = [f"s{i}" for i in order]
        edges = [DynkinEdge(a, b) for a, b in zip(verts, verts[1:])]
        return DynkinDiagram(family, n, tuple(verts), tuple(edges))
    w = w or SignedPermutation(tuple(range(1, n + 1)))
    if w.rank != n:
        raise ValueError("rank mismatch")
    chain = [label_name(x) for x in w.images]
    if family in "BC":
        head = "s0" if family == "B" else "S0"
        verts = [head] + chain
        # the arrow points to the short root: u_{n+1} for B, alpha_i for C
        edges = [DynkinEdge(head, chain[0], 2, head if family == "B" else chain[0])]
        edges += [DynkinEdge(a, b) for a, b in zip(chain, chain[1:])]
        return DynkinDiagram(family, n, tuple(verts), tuple(edges))
    first = w.images[0]
    pair = [label_name(abs(first)), label_name(-abs(first))]
    tail = chain[1:]
    verts = pair + tail
    edges = [DynkinEdge(pair[0], tail[0]), DynkinEdge(pair[1], tail[0])]
    edges += [DynkinEdge(a, b) for a, b in zip(tail, tail[1:])]
    return DynkinDiagram(family, n, tuple(verts), tuple(edges))
