"""Classical root systems, their lattices and Weyl groups.

Roots live in the character lattice M with basis u_1..u_n and are stored in
plain integer coordinates.  Coweights (vectors of the dual lattice N, where the
fans live) are stored in *half-unit* coordinates: every true coordinate is
multiplied by 2, so that generators such as 1/2(v_1+...+v_n) are integer
tuples.  The :class:`Lattice` objects know which storage convention they use.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

FAMILIES = ("A", "B", "C", "D")

Vector = tuple[int, ...]


def check_family_rank(family: str, rank: int) -> str:
    family = str(family).upper()
    if family not in FAMILIES:
        raise ValueError(f"unknown root system family {family!r}")
    if not isinstance(rank, int) or rank < 1:
        raise ValueError(f"rank must be a positive integer, got {rank!r}")
    if family == "D" and rank < 2:
        raise ValueError("family D requires rank >= 2")
    return family


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve_exact(columns: Sequence[Sequence[int]], target: Sequence[int]) -> list[Fraction] | None:
    """Solve sum_k c_k * columns[k] = target over Q; None if inconsistent."""
    nvars = len(columns)
    rows = [[Fraction(col[i]) for col in columns] + [Fraction(target[i])]
            for i in range(len(target))]
    piv_cols = []
    r = 0
    for c in range(nvars):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(all(x == 0 for x in row[:-1]) and row[-1] != 0 for row in rows):
        return None
    sol = [Fraction(0)] * nvars
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][-1]
    return sol


# ---------------------------------------------------------------------------
# lattices

@dataclass(frozen=True)
class Lattice:
    """A lattice tag: which of M(R), N(R) and in which storage coordinates.

    ``kind == "M"`` vectors use unit coordinates, ``kind == "N"`` vectors use
    half-unit coordinates.
    """

    kind: str
    family: str
    rank: int

    def __post_init__(self):
        if self.kind not in ("M", "N"):
            raise ValueError(f"lattice kind must be 'M' or 'N', got {self.kind!r}")
        if self.family not in ("B", "C", "D"):
            raise ValueError(f"no lattice model for family {self.family!r}")

    @property
    def tag(self) -> str:
        return f"{self.kind}({self.family}{self.rank})"

    def __str__(self) -> str:
        return self.tag

    @property
    def scale(self) -> int:
        return 1 if self.kind == "M" else 2

    @cached_property
    def basis(self) -> tuple[Vector, ...]:
        n = self.rank
        unit = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        if self.kind == "M":
            if self.family == "B":
                return tuple(unit)
            # root lattice of C_n and of D_n: integer vectors with even sum
            rows = [tuple(1 if j == i else -1 if j == i + 1 else 0 for j in range(n))
                    for i in range(n - 1)]
            rows.append(tuple(2 if j == n - 1 else 0 for j in range(n)))
            return tuple(rows)
        if self.family == "B":
            return tuple(tuple(2 * x for x in u) for u in unit)
        rows = [tuple(2 * x for x in unit[i]) for i in range(n - 1)]
        rows.append((1,) * n)
        return tuple(rows)

    @cached_property
    def covolume(self) -> int:
        """|det| of a basis, in storage coordinates."""
        return abs(int_det(self.basis))

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.rank or not all(isinstance(x, int) for x in v):
            return False
        if self.kind == "M":
            return self.family == "B" or sum(v) % 2 == 0
        parities = {x % 2 for x in v}
        if self.family == "B":
            return parities <= {0}
        return len(parities) <= 1

    def is_primitive(self, v: Sequence[int]) -> bool:
        if not self.contains(v) or not any(v):
            return False
        g = math.gcd(*v)
        for k in range(2, g + 1):
            if g % k == 0 and self.contains(tuple(x // k for x in v)):
                return False
        return True

    def primitive_on_ray(self, v: Sequence[int]) -> Vector:
        """The primitive lattice point on the ray through ``v`` (storage coords)."""
        if not any(v):
            raise ValueError("zero vector spans no ray")
        g = math.gcd(*v)
        w = tuple(x // g for x in v)
        k = 1
        while not self.contains(tuple(k * x for x in w)):
            k += 1
        return tuple(k * x for x in w)


def lattice(kind: str, family: str, rank: int) -> Lattice:
    family = check_family_rank(family, rank)
    return Lattice(kind, family, rank)


def lattice_index(sub: Lattice, sup: Lattice) -> int:
    """Index [sup : sub]; raises if ``sub`` is not a sublattice of ``sup``."""
    if sub.kind != sup.kind or sub.rank != sup.rank:
        raise ValueError(f"{sub} and {sup} live in different spaces")
    for b in sub.basis:
        if not sup.contains(b):
            raise ValueError(f"{sub} is not a sublattice of {sup}")
    idx, rem = divmod(sub.covolume, sup.covolume)
    if rem:
        raise ValueError(f"{sub} is not a sublattice of {sup}")
    return idx


# ---------------------------------------------------------------------------
# roots

@dataclass(frozen=True, order=True)
class RootVector:
    coords: Vector

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __neg__(self) -> "RootVector":
        return RootVector(tuple(-c for c in self.coords))

    def __add__(self, other: "RootVector") -> "RootVector":
        return RootVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RootVector") -> "RootVector":
        return RootVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def norm2(self) -> int:
        return sum(c * c for c in self.coords)

    def pair(self, coweight: Sequence[int]) -> int:
        """Pairing with a coweight given in half-unit coordinates, times 2."""
        return sum(a * b for a, b in zip(self.coords, coweight))

    @property
    def name(self) -> str:
        return root_name(self.coords)

    def __str__(self) -> str:
        return self.name


def root_name(coords: Sequence[int]) -> str:
    """Short names: u1, 2u1, b12 (u1-u2), g12 (u1+u2); a leading '-' negates."""
    nz = [(i + 1, c) for i, c in enumerate(coords) if c]
    if len(nz) == 1:
        i, c = nz[0]
        if abs(c) in (1, 2):
            return ("-" if c < 0 else "") + ("2" if abs(c) == 2 else "") + f"u{i}"
    if len(nz) == 2 and all(abs(c) == 1 for _, c in nz):
        (i, a), (j, b) = nz
        sign = "-" if a < 0 else ""
        kind = "b" if a * b < 0 else "g"
        return f"{sign}{kind}{i}{j}" if max(i, j) < 10 else f"{sign}{kind}{i},{j}"
    return "(" + ",".join(str(c) for c in coords) + ")"


_NAME_RE = re.compile(r"^\s*(-?)\s*(?:(2?)u(\d+)|([bg])(\d+),?(\d+))\s*$", re.IGNORECASE)


def parse_root(name: str, rank: int) -> RootVector:
    m = _NAME_RE.match(name)
    if not m:
        raise ValueError(f"cannot parse root name {name!r}")
    neg, two, ui, kind, i, j = m.groups()
    v = [0] * rank
    if ui is not None:
        k = int(ui)
        if not 1 <= k <= rank:
            raise ValueError(f"index out of range in {name!r}")
        v[k - 1] = 2 if two else 1
    else:
        if len(i) + len(j) > 2 and "," not in name:
            raise ValueError(f"ambiguous root name {name!r}; use b1,12 form")
        a, b = int(i), int(j)
        if not (1 <= a <= rank and 1 <= b <= rank) or a == b:
            raise ValueError(f"index out of range in {name!r}")
        v[a - 1] = 1
        v[b - 1] = -1 if kind.lower() == "b" else 1
    r = RootVector(tuple(v))
    return -r if neg else r


def _unit(n: int, i: int, c: int = 1) -> Vector:
    return tuple(c if j == i else 0 for j in range(n))


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    roots: frozenset[RootVector]
    simple_roots: tuple[RootVector, ...]

    @property
    def dim(self) -> int:
        """Dimension of the ambient coordinate space (rank+1 for A)."""
        return self.rank + 1 if self.family == "A" else self.rank

    @property
    def lattice_M(self) -> Lattice:
        return Lattice("M", self.family, self.rank)

    @property
    def lattice_N(self) -> Lattice:
        return Lattice("N", self.family, self.rank)

    @property
    def lattice_tag(self) -> str:
        return f"{self.family}{self.rank}"

    def __contains__(self, r) -> bool:
        if not isinstance(r, RootVector):
            r = RootVector(tuple(r))
        return r in self.roots

    def simple_coefficients(self, r: RootVector) -> tuple[Fraction, ...]:
        sol = solve_exact([a.coords for a in self.simple_roots], r.coords)
        if sol is None:
            raise ValueError(f"{r} is not in the span of the simple roots")
        return tuple(sol)

    @cached_property
    def _positive(self) -> tuple[RootVector, ...]:
        pos = []
        for r in self.roots:
            c = self.simple_coefficients(r)
            if all(x >= 0 for x in c):
                pos.append((sum(c), r.coords, r))
        pos.sort()
        return tuple(p[2] for p in pos)

    def height(self, r: RootVector) -> int:
        return int(sum(self.simple_coefficients(r)))

    @cached_property
    def fundamental_coweights(self) -> tuple[Vector, ...]:
        """Dual basis of the simple roots, in half-unit N coordinates.

        These generate the standard Weyl chamber, in the order of the simple
        roots.
        """
        if self.family == "A":
            raise ValueError("coweights are not modelled for family A")
        n = self.rank
        out = []
        for k in range(n):
            sol = solve_exact([[a.coords[i] for a in self.simple_roots] for i in range(n)],
                              _unit(n, k))
            v = tuple(2 * x for x in sol)
            if any(x.denominator != 1 for x in v):
                raise AssertionError("fundamental coweight not in half-unit lattice")
            out.append(tuple(int(x) for x in v))
        return tuple(out)


def build_root_system(family: str, rank: int) -> RootSystem:
    family = check_family_rank(family, rank)
    n = rank
    roots: set[RootVector] = set()
    if family == "A":
        d = n + 1
        for i, j in itertools.permutations(range(d), 2):
            v = [0] * d
            v[i], v[j] = 1, -1
            roots.add(RootVector(tuple(v)))
        simple = [RootVector(tuple(1 if k == i else -1 if k == i + 1 else 0 for k in range(d)))
                  for i in range(n)]
        return RootSystem(family, n, frozenset(roots), tuple(simple))
    for i, j in itertools.combinations(range(n), 2):
        for a, b in itertools.product((1, -1), repeat=2):
            v = [0] * n
            v[i], v[j] = a, b
            roots.add(RootVector(tuple(v)))
    if family in ("B", "C"):
        c = 1 if family == "B" else 2
        for i in range(n):
            roots.add(RootVector(_unit(n, i, c)))
            roots.add(RootVector(_unit(n, i, -c)))
    simple = [RootVector(tuple(1 if k == i else -1 if k == i + 1 else 0 for k in range(n)))
              for i in range(n - 1)]
    if family == "B":
        simple.append(RootVector(_unit(n, n - 1)))
    elif family == "C":
        simple.append(RootVector(_unit(n, n - 1, 2)))
    else:
        simple.append(RootVector(tuple(1 if k in (n - 2, n - 1) else 0 for k in range(n))))
    return RootSystem(family, n, frozenset(roots), tuple(simple))


def positive_roots(rs: RootSystem) -> tuple[RootVector, ...]:
    """Positive roots for the standard simple roots, sorted by (height, coords)."""
    return rs._positive


def _summand_key(r: RootVector):
    return tuple(-c for c in r.coords)


def a2_triples(rs: RootSystem) -> list[tuple[RootVector, RootVector, RootVector]]:
    """All (a, b, a+b) with a, b, a+b positive; each unordered pair once."""
    pos = positive_roots(rs)
    posset = set(pos)
    out = []
    for a, b in itertools.combinations(pos, 2):
        c = a + b
        if c in posset:
            a, b = sorted((a, b), key=_summand_key)
            out.append((a, b, c))
    return out


# ---------------------------------------------------------------------------
# Weyl groups

@dataclass(frozen=True)
class SignedPermutation:
    """w(1..n) with |w(i)| a permutation of 1..n."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", imgs)
        if sorted(abs(x) for x in imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a signed permutation: {imgs}")

    @property
    def rank(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        if i == 0:
            return 0
        x = self.images[abs(i) - 1]
        return x if i > 0 else -x

    def __len__(self) -> int:
        return len(self.images)

    def __iter__(self):
        return iter(self.images)

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        """Composition self o other."""
        return SignedPermutation(tuple(self(x) for x in other.images))

    def inverse(self) -> "SignedPermutation":
        inv = [0] * self.rank
        for i, x in enumerate(self.images, start=1):
            inv[abs(x) - 1] = i if x > 0 else -i
        return SignedPermutation(tuple(inv))

    @property
    def sign_product(self) -> int:
        return -1 if sum(1 for x in self.images if x < 0) % 2 else 1

    def act_vector(self, v: Sequence[int]) -> Vector:
        """u_i -> sign(w(i)) u_|w(i)|, extended linearly (same on coweights)."""
        if len(v) != self.rank:
            raise ValueError(f"rank mismatch: {len(v)} vs {self.rank}")
        out = [0] * self.rank
        for i, x in enumerate(self.images):
            out[abs(x) - 1] += (1 if x > 0 else -1) * v[i]
        return tuple(out)

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.images) + ")"


def weyl_elements(family: str, rank: int) -> Iterator[SignedPermutation]:
    """Elements of W(B_n)=W(C_n), or the even-sign subgroup W(D_n).

    For family A the symmetric group on rank+1 letters is produced (all signs
    positive).
    """
    family = check_family_rank(family, rank)
    if family == "A":
        for p in itertools.permutations(range(1, rank + 2)):
            yield SignedPermutation(p)
        return
    for p in itertools.permutations(range(1, rank + 1)):
        for signs in itertools.product((1, -1), repeat=rank):
            if family == "D" and math.prod(signs) != 1:
                continue
            yield SignedPermutation(tuple(s * x for s, x in zip(signs, p)))


def act(w: SignedPermutation, r: RootVector) -> RootVector:
    return RootVector(w.act_vector(r.coords))


def reflect(alpha: RootVector, v: Sequence[int]) -> Vector:
    """Orthogonal reflection in alpha^perp; integer-exact for B, C, D."""
    num = 2 * sum(a * x for a, x in zip(alpha.coords, v))
    q, rem = divmod(num, alpha.norm2())
    if rem:
        raise ValueError("reflection leaves the integer lattice")
    return tuple(x - q * a for x, a in zip(v, alpha.coords))
