"""Weyl-chamber fans Sigma(R) and the simplicial fans derived from them.

All cones here are simplicial, so a cone is identified with the sorted tuple
of its primitive ray generators (half-unit coordinates) and faces are subsets
of rays.  Cones of a Weyl fan are enumerated as Weyl orbits of the faces of the
standard chamber, walking the orbit with the simple reflections.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .rootsys import (Lattice, RootSystem, SignedPermutation, Vector, build_root_system,
                      check_family_rank, int_det, reflect)

SignedSubset = frozenset  # frozenset[int], nonempty, never both i and -i
Chain = tuple  # tuple[frozenset[int], ...], largest set first


def signed_subset(elements: Iterable[int], n: int | None = None) -> frozenset[int]:
    s = frozenset(int(x) for x in elements)
    if not s:
        raise ValueError("signed subsets are nonempty")
    if 0 in s:
        raise ValueError("0 is not a signed index")
    if any(-x in s for x in s):
        raise ValueError(f"{sorted(s)} contains both i and -i")
    if n is not None and any(abs(x) > n for x in s):
        raise ValueError(f"{sorted(s)} has an index above {n}")
    return s


def format_subset(b: Iterable[int]) -> str:
    return "{" + ",".join(str(x) for x in sorted(b, key=lambda x: (abs(x), -x))) + "}"


def ray_vector(b: Iterable[int], n: int) -> Vector:
    """v_B = sum of eps*v_i over eps*i in B, in half-unit coordinates."""
    v = [0] * n
    for x in b:
        v[abs(x) - 1] = 2 if x > 0 else -2
    return tuple(v)


def ray_subset(ray: Sequence[int]) -> frozenset[int]:
    """Signed support of a ray; half-sum rays map to their full-support set."""
    return frozenset((i + 1) if x > 0 else -(i + 1) for i, x in enumerate(ray) if x)


def format_vector(v: Sequence[int]) -> str:
    """Human form of a half-unit coordinate vector, e.g. 1/2(v1-v2) or v1+v3."""
    if not any(v):
        return "0"
    half = any(x % 2 for x in v)
    coeffs = list(v) if half else [x // 2 for x in v]
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        terms.append(f"{sign}{mag}v{i + 1}")
    body = "".join(terms).lstrip("+")
    return f"1/2({body})" if half else body


_TERM_RE = re.compile(r"([+-]?)(\d*)v(\d+)")


def parse_vector(text: str, n: int) -> Vector:
    """Inverse of format_vector: 'v1-v3', '1/2(v1+v2)', '-2v2' -> half-units."""
    s = text.replace(" ", "")
    half = False
    m = re.fullmatch(r"1/2\((.*)\)", s)
    if m:
        s, half = m.group(1), True
    if not s:
        raise ValueError(f"empty vector {text!r}")
    pos = 0
    v = [0] * n
    for t in _TERM_RE.finditer(s):
        if t.start() != pos or (pos > 0 and not t.group(1)):
            raise ValueError(f"cannot parse vector {text!r}")
        pos = t.end()
        i = int(t.group(3))
        if not 1 <= i <= n:
            raise ValueError(f"index v{i} out of range in {text!r}")
        c = int(t.group(2) or 1) * (-1 if t.group(1) == "-" else 1)
        v[i - 1] += c if half else 2 * c
    if pos != len(s):
        raise ValueError(f"cannot parse vector {text!r}")
    return tuple(v)


@dataclass(frozen=True)
class Cone:
    rays: tuple[Vector, ...]
    lattice: Lattice

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(sorted(set(tuple(r) for r in self.rays))))

    @property
    def dim(self) -> int:
        return len(self.rays)

    def faces(self) -> Iterator["Cone"]:
        for k in range(len(self.rays) + 1):
            for sub in itertools.combinations(self.rays, k):
                yield Cone(sub, self.lattice)

    def is_face_of(self, other: "Cone") -> bool:
        return set(self.rays) <= set(other.rays)

    def relative_interior_point(self) -> Vector:
        n = self.lattice.rank
        return tuple(sum(r[i] for r in self.rays) for i in range(n))

    def __str__(self) -> str:
        return "<" + ", ".join(format_vector(r) for r in self.rays) + ">"


class SimplicialFan:
    """A simplicial fan given by its rays and maximal cones (ray index tuples)."""

    def __init__(self, lattice: Lattice, rays: Sequence[Vector],
                 maximal: Iterable[Sequence[int]]):
        self.lattice = lattice
        self.rays: tuple[Vector, ...] = tuple(rays)
        self.ray_index = {r: i for i, r in enumerate(self.rays)}
        self._maximal = sorted({tuple(sorted(c)) for c in maximal})
        self._cones_by_dim: dict[int, list[tuple[int, ...]]] = {}
        self._cone_sets: dict[int, frozenset[tuple[int, ...]]] = {}

    @property
    def dim(self) -> int:
        return self.lattice.rank

    def cone(self, idx: Sequence[int]) -> Cone:
        return Cone(tuple(self.rays[i] for i in idx), self.lattice)

    def maximal_index_tuples(self) -> list[tuple[int, ...]]:
        return self._maximal

    def maximal_cones(self) -> list[Cone]:
        return [self.cone(c) for c in self.maximal_index_tuples()]

    def index_tuples(self, m: int) -> list[tuple[int, ...]]:
        if m not in self._cones_by_dim:
            self._cones_by_dim[m] = self._enumerate(m)
        return self._cones_by_dim[m]

    def _enumerate(self, m: int) -> list[tuple[int, ...]]:
        faces = set()
        for c in self.maximal_index_tuples():
            faces.update(itertools.combinations(c, m))
        return sorted(faces)

    def cones_of_dim(self, m: int) -> Iterator[Cone]:
        if not 0 <= m <= self.dim:
            raise ValueError(f"cone dimension {m} outside 0..{self.dim}")
        for c in self.index_tuples(m):
            yield self.cone(c)

    def count_d_m(self, m: int) -> int:
        return len(self.index_tuples(m))

    def f_vector(self) -> list[int]:
        return [self.count_d_m(m) for m in range(self.dim + 1)]

    def __contains__(self, cone: Cone) -> bool:
        try:
            idx = tuple(sorted(self.ray_index[r] for r in cone.rays))
        except KeyError:
            return False
        m = len(idx)
        if m not in self._cone_sets:
            self._cone_sets[m] = frozenset(self.index_tuples(m))
        return idx in self._cone_sets[m]

    def is_complete(self) -> bool:
        """Facet pairing plus opposite-side test across every shared facet.

        Every (n-1)-face of a maximal cone must lie in exactly two maximal
        cones, and the two apex rays must lie on opposite sides of the facet's
        hyperplane; together this makes the cones tile N_Q without overlap.
        """
        n = self.dim
        owners: dict[tuple[int, ...], list[int]] = {}
        for c in self.maximal_index_tuples():
            if len(c) != n:
                return False
            for skip in range(n):
                facet = c[:skip] + c[skip + 1:]
                owners.setdefault(facet, []).append(c[skip])
        for facet, apexes in owners.items():
            if len(apexes) != 2:
                return False
            base = [self.rays[i] for i in facet]
            d1 = int_det(base + [self.rays[apexes[0]]])
            d2 = int_det(base + [self.rays[apexes[1]]])
            if d1 == 0 or d2 == 0 or (d1 > 0) == (d2 > 0):
                return False
        return True

    def is_smooth(self, lattice: Lattice | None = None) -> bool:
        """Every maximal cone's generators form a basis of ``lattice``.

        The generators are taken as stored; measured against a lattice other
        than the fan's own they may fail to be lattice points at all, which
        counts as not smooth.
        """
        lat = lattice or self.lattice
        if lat.kind != "N" or lat.rank != self.dim:
            raise ValueError(f"cannot measure a fan in N_{self.dim} against {lat}")
        if not all(lat.is_primitive(r) for r in self.rays):
            return False
        vol = lat.covolume
        return all(abs(int_det([self.rays[i] for i in c])) == vol
                   for c in self.maximal_index_tuples())

    def validate(self) -> bool:
        """Fan axioms for these simplicial fans: full-dimensional cones whose
        relative interiors are disjoint and which cover the space."""
        return all(int_det([self.rays[i] for i in c]) != 0
                   for c in self.maximal_index_tuples()) and self.is_complete()


class WeylFan(SimplicialFan):
    """The fan of Weyl chambers of R = B_n, C_n or D_n in N(R)."""

    def __init__(self, family: str, rank: int):
        family = check_family_rank(family, rank)
        if family == "A":
            raise ValueError("Weyl fans are built for families B, C, D")
        self.family = family
        self.root_system: RootSystem = build_root_system(family, rank)
        self.simple = self.root_system.simple_roots
        chamber = self.root_system.fundamental_coweights
        rays = set()
        for g in chamber:
            rays.update(self._vector_orbit(g))
        lat = self.root_system.lattice_N
        super().__init__(lat, sorted(rays), [])
        self.chamber: tuple[int, ...] = tuple(self.ray_index[g] for g in chamber)
        self._refl = [tuple(self.ray_index[reflect(a, r)] for r in self.rays)
                      for a in self.simple]

    @property
    def rank(self) -> int:
        return self.dim

    def _vector_orbit(self, v: Vector) -> set[Vector]:
        seen = {v}
        todo = [v]
        while todo:
            x = todo.pop()
            for a in self.simple:
                y = reflect(a, x)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    def _orbit(self, start: tuple[int, ...]) -> list[tuple[int, ...]]:
        refl = self._refl
        seen = {start}
        todo = [start]
        while todo:
            c = todo.pop()
            for p in refl:
                d = tuple(sorted(p[i] for i in c))
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
        return list(seen)

    def _enumerate(self, m: int) -> list[tuple[int, ...]]:
        # each cone is a Weyl translate of exactly one face of the chamber
        out = []
        for face in itertools.combinations(self.chamber, m):
            out.extend(self._orbit(tuple(sorted(face))))
        out.sort()
        return out

    def maximal_index_tuples(self) -> list[tuple[int, ...]]:
        return self.index_tuples(self.dim)

    def reflect_vector(self, k: int, v: Sequence[int]) -> Vector:
        return reflect(self.simple[k], v)

    def locate(self, point: Sequence[int]) -> Cone:
        """The cone of the fan whose relative interior contains ``point``."""
        p = tuple(point)
        word = []
        moved = True
        while moved:
            moved = False
            for k, a in enumerate(self.simple):
                if a.pair(p) < 0:
                    p = reflect(a, p)
                    word.append(k)
                    moved = True
                    break
        gens = [self.rays[self.chamber[k]] for k, a in enumerate(self.simple) if a.pair(p) > 0]
        for k in reversed(word):
            gens = [reflect(self.simple[k], g) for g in gens]
        return Cone(tuple(gens), self.lattice)

    def weyl_translate(self, w: SignedPermutation, cone: Cone) -> Cone:
        return Cone(tuple(w.act_vector(r) for r in cone.rays), self.lattice)


_FAN_CACHE: dict[tuple[str, int], WeylFan] = {}


def weyl_chamber_fan(family: str, rank: int) -> WeylFan:
    family = check_family_rank(family, rank)
    key = (family, rank)
    if key not in _FAN_CACHE:
        _FAN_CACHE[key] = WeylFan(family, rank)
    return _FAN_CACHE[key]


def cones_of_dim(fan: SimplicialFan, m: int) -> Iterator[Cone]:
    return fan.cones_of_dim(m)


def count_d_m(fan: SimplicialFan, m: int) -> int:
    if not 0 <= m <= fan.dim:
        raise ValueError(f"cone dimension {m} outside 0..{fan.dim}")
    return fan.count_d_m(m)


def is_smooth(fan: SimplicialFan, lattice: Lattice | None = None) -> bool:
    return fan.is_smooth(lattice)


def is_complete(fan: SimplicialFan) -> bool:
    return fan.is_complete()


# ---------------------------------------------------------------------------
# chains of signed subsets <-> cones of Sigma(B_n)

def normalize_chain(chain: Iterable[Iterable[int]], n: int) -> Chain:
    """Validate a chain and return it largest-first."""
    sets = [signed_subset(b, n) for b in chain]
    sets.sort(key=len, reverse=True)
    for big, small in zip(sets, sets[1:]):
        if not small < big:
            raise ValueError("chain is not strictly nested: "
                             + " , ".join(format_subset(b) for b in sets))
    return tuple(sets)


def cone_from_chain(chain: Iterable[Iterable[int]], n: int) -> Cone:
    ch = normalize_chain(chain, n)
    return Cone(tuple(ray_vector(b, n) for b in ch), Lattice("N", "B", n))


def chain_from_cone(cone: Cone) -> Chain:
    if any(x not in (0, 2, -2) for r in cone.rays for x in r):
        raise ValueError(f"{cone} is not a cone of Sigma(B_{cone.lattice.rank})")
    return normalize_chain([ray_subset(r) for r in cone.rays], cone.lattice.rank)


def permutation_from_chain(chain: Chain, n: int) -> SignedPermutation:
    """Signed permutation of a maximal chain: {w(k)} = B^(k) minus B^(k+1)."""
    ch = normalize_chain(chain, n)
    if len(ch) != n:
        raise ValueError("only maximal chains correspond to signed permutations")
    imgs = []
    for k in range(n):
        nxt = ch[k + 1] if k + 1 < n else frozenset()
        (x,) = ch[k] - nxt
        imgs.append(x)
    return SignedPermutation(tuple(imgs))


def chain_of_permutation(w: SignedPermutation) -> Chain:
    n = w.rank
    return tuple(frozenset(w.images[k:]) for k in range(n))


# ---------------------------------------------------------------------------
# the projection Sigma(R_{n+1}) -> Sigma(R_n)

@dataclass
class FlatnessReport:
    family: str
    rank: int
    flat_compatible: bool
    witnesses: list[tuple[Vector, Cone]]
    entries: list[tuple[Cone, Cone, int]] = field(repr=False)

    @property
    def status(self) -> str:
        return "flat-compatible" if self.flat_compatible else "not-flat"


def check_fiber_flatness(family: str, rank: int) -> FlatnessReport:
    """Project every cone of Sigma(R_{rank+1}) along v_{rank+1}.

    For each cone the smallest cone of Sigma(R_rank) containing the image is
    recorded together with the image dimension; the projection is
    flat-compatible when every image is itself a cone of the target fan.
    Witnesses are rays whose image lies in the interior of a cone of
    dimension >= 2.
    """
    family = check_family_rank(family, rank)
    src = weyl_chamber_fan(family, rank + 1)
    dst = weyl_chamber_fan(family, rank)
    ray_image: dict[Vector, Cone | None] = {}
    for r in src.rays:
        p = r[:rank]
        ray_image[r] = dst.locate(p) if any(p) else None
    witnesses = [(r, c) for r, c in ray_image.items() if c is not None and c.dim > 1]
    entries = []
    ok = True
    for m in range(src.dim + 1):
        for idx in src.index_tuples(m):
            gens = [src.rays[i] for i in idx]
            proj = [g[:rank] for g in gens if any(g[:rank])]
            point = tuple(sum(g[i] for g in proj) for i in range(rank))
            carrier = dst.locate(point) if any(point) else Cone((), dst.lattice)
            hit = {ray_image[g].rays[0] for g in gens
                   if ray_image[g] is not None and ray_image[g].dim == 1}
            image_dim = _rank([list(g) for g in proj])
            compatible = (all(ray_image[g] is None or ray_image[g].dim == 1 for g in gens)
                          and hit == set(carrier.rays))
            ok = ok and compatible
            entries.append((src.cone(idx), carrier, image_dim))
    return FlatnessReport(family, rank, ok, sorted(witnesses), entries)


def _rank(rows: list[list[int]]) -> int:
    from fractions import Fraction
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        p = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[rank], m[p] = m[p], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# contraction of Sigma(C_{n+1})

def contracted_c_fan(n: int) -> SimplicialFan:
    """Fan of the universal C_n-curve: Sigma(C_{n+1}) without the rays
    eps_1 v_1 + ... + eps_n v_n.

    Each removed ray rho is the sum of the two half-sum rays
    1/2(eps v -+ v_{n+1}); the two maximal cones {h+, rho} u tau and
    {h-, rho} u tau across the facet {rho} u tau are merged into
    {h+, h-} u tau.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("contracted_c_fan needs n >= 1")
    big = weyl_chamber_fan("C", n + 1)
    removed = {r for r in big.rays if r[n] == 0 and all(x in (2, -2) for x in r[:n])}
    if len(removed) != 2 ** n:
        raise AssertionError("unexpected number of full-support rays")
    keep = [r for r in big.rays if r not in removed]
    maximal = []
    merged = set()
    for c in big.maximal_index_tuples():
        rays = [big.rays[i] for i in c]
        rho = [r for r in rays if r in removed]
        if not rho:
            maximal.append(rays)
            continue
        (rho,) = rho
        halves = [r for r in rays if r[n] != 0 and all(x % 2 for x in r)]
        if len(halves) != 1:
            raise AssertionError("cone through removed ray lacks its half-sum apex")
        h = halves[0]
        partner = tuple(h[:n]) + (-h[n],)
        tau = frozenset(r for r in rays if r not in (rho, h))
        merged.add((frozenset((h, partner)), tau))
    for pair, tau in merged:
        maximal.append(list(pair) + list(tau))
    index = {r: i for i, r in enumerate(keep)}
    return SimplicialFan(big.lattice, keep, [[index[r] for r in c] for c in maximal])
