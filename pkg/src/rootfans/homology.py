"""Homology of X(B_n): Poincare polynomials, the l^w basis and monomial reduction.

Chain monomials prod l_{B^(h)} are stored as chains of signed subsets,
largest set first.  All signed values use the integer order
-n < ... < -1 < 0 < 1 < ... < n, with w(0) = 0.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .fan import (SimplicialFan, format_subset, normalize_chain, signed_subset,
                  weyl_chamber_fan)
from .rootsys import SignedPermutation, check_family_rank, weyl_elements


class IntPolynomial:
    """Polynomial in t with exact integer coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = []
        for c in coeffs:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError(f"non-integer coefficient {c}")
                c = c.numerator
            if int(c) != c:
                raise ValueError(f"non-integer coefficient {c}")
            cs.append(int(c))
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[int, ...] = tuple(cs)

    @classmethod
    def t(cls) -> "IntPolynomial":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPolynomial((other,))
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        other = _as_poly(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(self[k] + other[k] for k in range(size))

    __radd__ = __add__

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        return self + (-_as_poly(other))

    def __mul__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPolynomial":
        out = IntPolynomial((1,))
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def is_palindromic(self, n: int | None = None) -> bool:
        """t^n p(1/t) = p(t), with n defaulting to the degree."""
        n = self.degree if n is None else n
        return all(self[k] == self[n - k] for k in range(n + 1)) and self.degree <= n

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        out = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("t" if k == 1 else f"t^{k}")
            out.append(sign + body)
        s = "".join(out)
        return s[1:] if s.startswith("+") else s

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        import re
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial")
        if s[0] not in "+-":
            s = "+" + s
        terms = re.findall(r"([+-])(\d*)(t(?:\^(\d+))?)?", s)
        if "".join(a + b + c for a, b, c, _ in terms) != s:
            raise ValueError(f"cannot parse polynomial {text!r}")
        coeffs: dict[int, int] = {}
        for sign, mag, tpart, exp in terms:
            if not mag and not tpart:
                raise ValueError(f"cannot parse polynomial {text!r}")
            c = int(mag) if mag else 1
            k = (int(exp) if exp else 1) if tpart else 0
            coeffs[k] = coeffs.get(k, 0) + (-c if sign == "-" else c)
        top = max(coeffs) if coeffs else 0
        return cls(coeffs.get(k, 0) for k in range(top + 1))


def _as_poly(x) -> IntPolynomial:
    return x if isinstance(x, IntPolynomial) else IntPolynomial((x,))


# ---------------------------------------------------------------------------
# three routes to the Poincare polynomial

def poincare_from_f_vector(f: Sequence[int]) -> IntPolynomial:
    n = len(f) - 1
    s = IntPolynomial((-1, 1))
    return sum((f[m] * s ** (n - m) for m in range(n + 1)), IntPolynomial())


def poincare_from_fan(fan: SimplicialFan) -> IntPolynomial:
    """sum_m d_m (t-1)^(n-m) from the cone counts of a complete simplicial fan."""
    return poincare_from_f_vector(fan.f_vector())


def _series_mul(a: list, b: list, order: int) -> list:
    out = [0] * order
    for i, x in enumerate(a[:order]):
        if x:
            for j in range(order - i):
                if j < len(b) and b[j]:
                    out[i + j] += x * b[j]
    return out


def d_m_closed_form(n: int, m: int) -> int:
    """n! [x^n] e^x (e^{2x}-1)^m, by exact rational power series."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
    order = n + 1
    ex = [Fraction(1, math.factorial(k)) for k in range(order)]
    e2 = [Fraction(0)] + [Fraction(2 ** k, math.factorial(k)) for k in range(1, order)]
    acc = ex
    for _ in range(m):
        acc = _series_mul(acc, e2, order)
    val = acc[n] * math.factorial(n)
    if val.denominator != 1:
        raise ArithmeticError("closed form produced a non-integer")
    return int(val)


def poincare_closed_form(n: int) -> IntPolynomial:
    return poincare_from_f_vector([d_m_closed_form(n, m) for m in range(n + 1)])


def _tpoly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _tpoly_add(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return out


def poincare_series(max_n: int) -> list[IntPolynomial]:
    """n! [y^n] of e^{ys}(t-1)/(t-e^{2ys}), s = t-1, for n = 0..max_n.

    Writing t - e^{2ys} = s (1 - Q) with Q = sum_{k>=1} 2^k s^{k-1} y^k / k!
    removes the apparent pole, so every y-coefficient is a polynomial in t.
    """
    if max_n < 0:
        raise ValueError("max_n must be >= 0")
    order = max_n + 1
    s = [Fraction(-1), Fraction(1)]
    s_pow = [[Fraction(1)]]
    for _ in range(order):
        s_pow.append(_tpoly_mul(s_pow[-1], s))
    a = [[c / math.factorial(k) for c in s_pow[k]] for k in range(order)]
    q = [[]] + [[c * Fraction(2 ** k, math.factorial(k)) for c in s_pow[k - 1]]
                for k in range(1, order)]
    inv = [[Fraction(1)]]
    for k in range(1, order):
        acc: list[Fraction] = []
        for j in range(1, k + 1):
            acc = _tpoly_add(acc, _tpoly_mul(q[j], inv[k - j]))
        inv.append(acc)
    out = []
    for n in range(order):
        acc = []
        for j in range(n + 1):
            acc = _tpoly_add(acc, _tpoly_mul(a[j], inv[n - j]))
        out.append(IntPolynomial(c * math.factorial(n) for c in acc))
    return out


# ---------------------------------------------------------------------------
# descents and the l^w basis

def descent_set(w: SignedPermutation) -> frozenset[int]:
    return frozenset(k for k in range(1, w.rank + 1) if w(k - 1) > w(k))


def descent_polynomial(n: int) -> IntPolynomial:
    """sum over signed permutations of t^(n - |Desc(w)|)."""
    counts = Counter(len(descent_set(w)) for w in weyl_elements("B", n))
    return IntPolynomial(counts.get(n - k, 0) for k in range(n + 1))


def _subset_key(b: frozenset[int]) -> tuple:
    return (len(b), sorted(b))


@dataclass(frozen=True, order=False)
class ChainMonomial:
    """prod_h l_{B^(h)} for a strictly nested chain, stored largest first."""

    chain: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, sets: Iterable[Iterable[int]], n: int | None = None) -> "ChainMonomial":
        sets = [signed_subset(b, n) for b in sets]
        if n is None:
            n = max((abs(x) for b in sets for x in b), default=1)
        return cls(normalize_chain(sets, n) if sets else ())

    @property
    def degree(self) -> int:
        return len(self.chain)

    def sort_key(self) -> tuple:
        return (self.degree, [_subset_key(b) for b in self.chain])

    def __lt__(self, other: "ChainMonomial") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if not self.chain:
            return "1"
        return "*".join("l" + format_subset(b) for b in self.chain)


def basis_monomial(w: SignedPermutation) -> ChainMonomial:
    desc = descent_set(w)
    n = w.rank
    return ChainMonomial(tuple(frozenset(w.images[k - 1:]) for k in range(1, n + 1)
                               if k not in desc))


@dataclass(frozen=True)
class SymmetricPartition:
    """P_0, ..., P_m of a chain monomial; P_{-k} is -P_k."""

    parts: tuple[frozenset[int], ...]

    @property
    def m(self) -> int:
        return len(self.parts) - 1

    def __getitem__(self, k: int) -> frozenset[int]:
        if k < 0:
            return frozenset(-x for x in self.parts[-k])
        return self.parts[k]


def partition_of(y: ChainMonomial, n: int) -> SymmetricPartition:
    ch = y.chain
    used = {abs(x) for x in ch[0]} if ch else set()
    p0 = frozenset([0] + [s * i for i in range(1, n + 1) if i not in used for s in (1, -1)])
    parts = [p0]
    for k in range(len(ch)):
        nxt = ch[k + 1] if k + 1 < len(ch) else frozenset()
        parts.append(ch[k] - nxt)
    return SymmetricPartition(tuple(parts))


def _first_descent(p: SymmetricPartition) -> int | None:
    for k in range(1, p.m + 1):
        if min(p[k - 1]) > max(p[k]):
            return k
    return None


def partition_and_d(y: ChainMonomial, n: int) -> tuple[SymmetricPartition, int]:
    p = partition_of(y, n)
    d = sum(1 for k in range(1, p.m + 1) if min(p[k - 1]) > max(p[k]))
    return p, d


class HomologyClass:
    """Finite integer combination of chain monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[ChainMonomial, int] | None = None):
        self.terms: dict[ChainMonomial, int] = {y: c for y, c in (terms or {}).items() if c}

    @classmethod
    def monomial(cls, y: ChainMonomial, coeff: int = 1) -> "HomologyClass":
        return cls({y: coeff})

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        out = dict(self.terms)
        for y, c in other.terms.items():
            out[y] = out.get(y, 0) + c
        return HomologyClass(out)

    def __neg__(self) -> "HomologyClass":
        return HomologyClass({y: -c for y, c in self.terms.items()})

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        return self + (-other)

    def scale(self, k: int) -> "HomologyClass":
        return HomologyClass({y: k * c for y, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, HomologyClass) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def items(self) -> list[tuple[ChainMonomial, int]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for y, c in self.items():
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            out.append(f"{sign} {mag}{y}")
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __repr__ = __str__


def _between(lower: frozenset[int], upper: frozenset[int] | None, n: int) -> Iterator[frozenset[int]]:
    """Signed subsets B with lower < B < upper (upper None: any B > lower)."""
    if upper is not None:
        free = sorted(upper - lower)
        for k in range(1, len(free)):
            for extra in itertools.combinations(free, k):
                yield lower | frozenset(extra)
        return
    used = {abs(x) for x in lower}
    rest = [i for i in range(1, n + 1) if i not in used]
    for signs in itertools.product((0, 1, -1), repeat=len(rest)):
        if any(signs):
            yield lower | frozenset(s * i for s, i in zip(signs, rest) if s)


def _rewrite(y: ChainMonomial, n: int) -> dict[ChainMonomial, int] | None:
    """One relation step at the first descent of y; None when y is basic."""
    p = partition_of(y, n)
    k = _first_descent(p)
    if k is None:
        return None
    i, j = min(p[k - 1]), max(p[k])
    ch = list(y.chain)
    idx = k - 1
    rest = ch[:idx] + ch[idx + 1:]
    out: dict[ChainMonomial, int] = {}

    def add(b, c):
        new = ChainMonomial(tuple(sorted(rest + [b], key=len, reverse=True)))
        out[new] = out.get(new, 0) + c

    below = ch[idx + 1] if idx + 1 < len(ch) else frozenset()
    if k >= 2:
        above = ch[idx - 1]
        for b in _between(below, above, n):
            if i in b and j not in b:
                add(b, 1)
            elif j in b and i not in b and b != ch[idx]:
                add(b, -1)
    else:
        for b in _between(below, None, n):
            if -j in b:
                add(b, 1)
            elif j in b and b != ch[idx]:
                add(b, -1)
    return out


def reduce_to_basis(x: HomologyClass | ChainMonomial, n: int) -> HomologyClass:
    """Rewrite onto the span of the l^w monomials modulo the relation module."""
    if isinstance(x, ChainMonomial):
        x = HomologyClass.monomial(x)
    out: dict[ChainMonomial, int] = {}
    for y, c in x.terms.items():
        for z, e in _reduce_monomial(y, n).items():
            out[z] = out.get(z, 0) + c * e
    return HomologyClass(out)


@lru_cache(maxsize=None)
def _reduce_cached(y: ChainMonomial, n: int) -> tuple[tuple[ChainMonomial, int], ...]:
    step = _rewrite(y, n)
    if step is None:
        return ((y, 1),)
    # every monomial of the step is strictly larger in the lexicographic order on
    # partitions, so this recursion terminates
    out: dict[ChainMonomial, int] = {}
    for t, e in step.items():
        for z, c in _reduce_cached(t, n):
            out[z] = out.get(z, 0) + e * c
    return tuple((z, c) for z, c in out.items() if c)


def _reduce_monomial(y: ChainMonomial, n: int) -> dict[ChainMonomial, int]:
    return dict(_reduce_cached(y, n))


def all_chain_monomials(n: int) -> list[ChainMonomial]:
    """Every chain monomial over rank n, i.e. every cone of Sigma(B_n)."""
    fan = weyl_chamber_fan("B", n)
    from .fan import ray_subset
    out = []
    for m in range(n + 1):
        for idx in fan.index_tuples(m):
            sets = [ray_subset(fan.rays[i]) for i in idx]
            out.append(ChainMonomial(tuple(sorted(sets, key=len, reverse=True))))
    return out


@dataclass(frozen=True)
class RelationGenerators:
    linear: list[HomologyClass]          # r_i of the cohomology presentation
    incomparable: list[tuple[frozenset[int], frozenset[int]]]  # r_{B,B'}
    pair_relations: list[HomologyClass]  # r_{i,j}((B^(h))_h, k)
    index_relations: list[HomologyClass]  # r_i((B^(h))_h)

    def module_relations(self) -> list[HomologyClass]:
        return self.pair_relations + self.index_relations


def all_signed_subsets(n: int) -> list[frozenset[int]]:
    out = []
    for signs in itertools.product((0, 1, -1), repeat=n):
        if any(signs):
            out.append(frozenset(s * (i + 1) for i, s in enumerate(signs) if s))
    return sorted(out, key=_subset_key)


def relation_generators(n: int) -> RelationGenerators:
    if n < 1:
        raise ValueError("need n >= 1")
    subsets = all_signed_subsets(n)
    linear = []
    for i in range(1, n + 1):
        terms = {}
        for b in subsets:
            if i in b:
                terms[ChainMonomial((b,))] = 1
            elif -i in b:
                terms[ChainMonomial((b,))] = -1
        linear.append(HomologyClass(terms))
    incomparable = [(a, b) for a, b in itertools.combinations(subsets, 2)
                    if not a <= b and not b <= a]
    pair_rel, index_rel = [], []
    for y in all_chain_monomials(n):
        ch = list(y.chain)
        m = len(ch)
        for k in range(m):
            below = ch[k + 1] if k + 1 < m else frozenset()
            diff = sorted(ch[k] - below)
            mids = list(_between(below, ch[k], n))
            for i, j in itertools.permutations(diff, 2):
                terms: dict[ChainMonomial, int] = {}
                for b in mids:
                    sign = (1 if (i in b and j not in b) else
                            -1 if (j in b and i not in b) else 0)
                    if sign:
                        z = ChainMonomial(tuple(sorted(ch + [b], key=len, reverse=True)))
                        terms[z] = terms.get(z, 0) + sign
                pair_rel.append(HomologyClass(terms))
        top = ch[0] if ch else None
        for i in range(1, n + 1):
            if top is not None and (i in top or -i in top):
                continue
            terms = {}
            for b in _between(top or frozenset(), None, n):
                sign = 1 if i in b else -1 if -i in b else 0
                if sign:
                    z = ChainMonomial(tuple([b] + ch))
                    terms[z] = terms.get(z, 0) + sign
            index_rel.append(HomologyClass(terms))
    return RelationGenerators(linear, incomparable, pair_rel, index_rel)


def multiply_divisor_classes(bs: Sequence[Iterable[int]], n: int) -> HomologyClass:
    """Product of divisor classes l_B for pairwise distinct B, reduced to basis."""
    sets = [signed_subset(b, n) for b in bs]
    if len(set(sets)) != len(sets):
        raise ValueError("divisor classes must be pairwise distinct")
    for a, b in itertools.combinations(sets, 2):
        if not a <= b and not b <= a:
            return HomologyClass()
    return reduce_to_basis(ChainMonomial(tuple(sorted(sets, key=len, reverse=True))), n)


def betti_numbers(family: str, n: int) -> list[int]:
    """beta_0..beta_{2n}; odd Betti numbers vanish."""
    family = check_family_rank(family, n)
    if family == "B":
        p = poincare_series(n)[n]
    elif family in "CD":
        p = poincare_from_fan(weyl_chamber_fan(family, n))
    else:
        raise ValueError("Betti numbers are computed for families B, C, D")
    out = [0] * (2 * n + 1)
    for k in range(n + 1):
        out[2 * k] = p[k]
    return out
