"""Integral cones (finitely generated monoids) and rational polyhedral cones.

A `RatCone` is stored in both V- and H-representation.  Both are computed by a
brute-force double description: the extreme rays of the dual of cone(G) are the
lines cut out by linearly independent (d-1)-subsets of G inside span(G), kept
when they are one-signed on G.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, product
from math import floor
from typing import Iterable, Sequence

from .errors import ContainmentError, DimensionError, FaceError, ResourceError
from .lattice import LatticeVector
from .linalg import (
    Vec,
    dot,
    hnf,
    hnf_reduce,
    in_lattice,
    integerize,
    is_unimodular_part,
    nullspace,
    rank,
    rref,
    saturate_span,
    saturated_kernel,
)

SEARCH_LIMIT = 2_000_000


def _clean(gens: Iterable[Sequence], n: int) -> list[Vec]:
    out = set()
    for g in gens:
        if len(g) != n:
            raise DimensionError(f"expected rank {n}, got a vector of length {len(g)}")
        if any(g):
            out.add(integerize(g))
    return sorted(out)


def _dual_data(gens: Sequence[Vec], n: int) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
    """Extreme rays and lineality basis of {v : v.g >= 0 for every g}."""
    gens = _clean(gens, n)
    lin = tuple(saturated_kernel(gens, n))
    if not gens:
        return (), lin
    red, _ = rref(gens, n)
    basis = [integerize(r) for r in red]
    d = len(basis)
    lines: set[Vec] = set()
    proj = [[dot(b, g) for b in basis] for g in gens]
    for idx in combinations(range(len(gens)), d - 1):
        m = [proj[i] for i in idx]
        coeffs = nullspace(m, d)
        if len(coeffs) != 1:
            continue
        v = integerize([sum(c * b[j] for c, b in zip(coeffs[0], basis)) for j in range(n)])
        lines.add(v)
    rays = set()
    for v in lines:
        signs = [dot(v, g) for g in gens]
        if all(s >= 0 for s in signs):
            rays.add(v)
        elif all(s <= 0 for s in signs):
            rays.add(tuple(-a for a in v))
    return tuple(sorted(rays)), lin


class RatCone:
    """Closed rational polyhedral cone in Q^n with canonical V- and H-data.

    rays: primitive integer vectors orthogonal to the lineality space, sorted.
    lineality: HNF basis of the saturated lattice of the lineality space.
    halfspaces / equations: the same data for the dual cone, so that the cone
    equals {x : h.x >= 0 for h in halfspaces, e.x = 0 for e in equations}.
    """

    __slots__ = ("rank", "rays", "lineality", "halfspaces", "equations", "_key", "__dict__")

    def __init__(self, rank_: int, rays, lineality, halfspaces, equations):
        self.rank = rank_
        self.rays = tuple(rays)
        self.lineality = tuple(lineality)
        self.halfspaces = tuple(halfspaces)
        self.equations = tuple(equations)
        self._key = (rank_, self.rays, self.lineality)

    @classmethod
    def generated(cls, n: int, gens: Iterable[Sequence], lineality: Iterable[Sequence] = ()) -> "RatCone":
        gens = list(gens)
        for v in lineality:
            gens.append(tuple(v))
            gens.append(tuple(-a for a in v))
        return _generated(n, tuple(_clean(gens, n)))

    @classmethod
    def from_halfspaces(cls, n: int, ineqs: Iterable[Sequence], eqs: Iterable[Sequence] = ()) -> "RatCone":
        return cls.generated(n, ineqs, eqs).dual()

    @classmethod
    def zero(cls, n: int) -> "RatCone":
        return cls.generated(n, [])

    @classmethod
    def whole(cls, n: int) -> "RatCone":
        return cls.generated(n, [], [tuple(int(i == j) for j in range(n)) for i in range(n)])

    # identity -----------------------------------------------------------
    @property
    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, RatCone) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self) -> str:
        return f"RatCone(rays={list(self.rays)}, lineality={list(self.lineality)})"

    # basic data ----------------------------------------------------------
    def dual(self) -> "RatCone":
        return RatCone(self.rank, self.halfspaces, self.equations, self.rays, self.lineality)

    @cached_property
    def dim(self) -> int:
        return rank(list(self.rays) + list(self.lineality), self.rank)

    @property
    def is_full(self) -> bool:
        return self.dim == self.rank

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    def generators(self) -> list[Vec]:
        """Cone generators: rays plus both signs of the lineality basis."""
        return list(self.rays) + list(self.lineality) + [tuple(-a for a in v) for v in self.lineality]

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.rank:
            raise DimensionError("rank mismatch")
        return all(dot(h, x) >= 0 for h in self.halfspaces) and all(dot(e, x) == 0 for e in self.equations)

    def contains_cone(self, other: "RatCone") -> bool:
        return all(self.contains(g) for g in other.generators())

    def relint_point(self) -> Vec:
        p = [0] * self.rank
        for r in self.rays:
            p = [a + b for a, b in zip(p, r)]
        return tuple(p)

    def in_relint(self, x: Sequence) -> bool:
        return self.contains(x) and self.minimal_face_containing(x) == self

    def minimal_face_containing(self, x: Sequence) -> "RatCone":
        if not self.contains(x):
            raise ContainmentError("point is not in the cone")
        tight = [h for h in self.halfspaces if dot(h, x) == 0]
        rays = [r for r in self.rays if all(dot(h, r) == 0 for h in tight)]
        return RatCone.generated(self.rank, rays, self.lineality)

    def face_cut(self, v: Sequence) -> "RatCone":
        """The face cone ∩ v^perp for v in the dual cone."""
        if not self.dual().contains(v):
            raise FaceError("functional is not non-negative on the cone")
        rays = [r for r in self.rays if dot(v, r) == 0]
        return RatCone.generated(self.rank, rays, self.lineality)

    def is_face_of(self, other: "RatCone") -> bool:
        if self.rank != other.rank or not other.contains_cone(self):
            return False
        return other.minimal_face_containing(self.relint_point()) == self

    def intersect(self, other: "RatCone") -> "RatCone":
        return RatCone.generated(
            self.rank, list(self.halfspaces) + list(other.halfspaces), list(self.equations) + list(other.equations)
        ).dual()

    def sum(self, other: "RatCone") -> "RatCone":
        return RatCone.generated(self.rank, self.generators() + other.generators())

    def faces(self) -> list["RatCone"]:
        """All faces, from the top down, deduplicated."""
        start = frozenset(range(len(self.rays)))
        seen = {start}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for h in self.halfspaces:
                if all(dot(h, self.rays[i]) == 0 for i in cur):
                    continue
                nxt = frozenset(i for i in cur if dot(h, self.rays[i]) == 0)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        out = {RatCone.generated(self.rank, [self.rays[i] for i in s], self.lineality) for s in seen}
        return sorted(out, key=lambda c: (-c.dim, c.key))


@lru_cache(maxsize=50_000)
def _generated(n: int, gens: tuple[Vec, ...]) -> RatCone:
    hs, eqs = _dual_data(gens, n)
    rays, lin = _dual_data(list(hs) + list(eqs) + [tuple(-a for a in e) for e in eqs], n)
    return RatCone(n, rays, lin, hs, eqs)


def hull(c: "IntCone") -> RatCone:
    return c.hull


def dual(c: RatCone) -> RatCone:
    return c.dual()


class IntCone:
    """The monoid of non-negative integer combinations of finitely many lattice vectors."""

    __slots__ = ("rank", "generators", "__dict__")

    def __init__(self, rank_: int, gens: Iterable[Sequence[int]] = ()):
        gset = set()
        for g in gens:
            if len(g) != rank_:
                raise DimensionError(f"expected rank {rank_}, got a vector of length {len(g)}")
            for a in g:
                if isinstance(a, bool) or not isinstance(a, int):
                    raise TypeError("integral cone generators must be integer vectors")
            if any(g):
                gset.add(tuple(int(a) for a in g))
        self.rank = rank_
        self.generators = tuple(sorted(gset))

    def __repr__(self) -> str:
        return f"IntCone({[LatticeVector(g) for g in self.generators]})"

    @cached_property
    def hull(self) -> RatCone:
        return RatCone.generated(self.rank, self.generators)

    @cached_property
    def _structure(self) -> tuple[tuple[Vec, ...], tuple[Vec, ...], Vec]:
        """(unit group HNF basis, non-unit generators, strictly positive functional)."""
        h = self.hull
        units = [g for g in self.generators if all(dot(e, g) == 0 for e in h.halfspaces)]
        unit_basis = tuple(hnf(units, self.rank))
        rest = [g for g in self.generators if g not in units]
        w = [0] * self.rank
        for r in h.halfspaces:
            w = [a + b for a, b in zip(w, r)]
        return unit_basis, tuple(rest), tuple(w)

    @property
    def units(self) -> tuple[Vec, ...]:
        return self._structure[0]

    @cached_property
    def atoms(self) -> tuple[Vec, ...]:
        """Irreducible elements of the monoid modulo its units, as canonical coset representatives."""
        units, rest, w = self._structure
        reps = sorted({hnf_reduce(g, units) for g in rest} - {(0,) * self.rank})
        kept = list(reps)
        for g in reps:
            others = [x for x in kept if x != g]
            if _member(g, others, units, w, self.hull):
                kept = others
        return tuple(sorted(kept))

    @cached_property
    def key(self):
        return (self.rank, self.units, self.atoms)

    def __eq__(self, other):
        return isinstance(other, IntCone) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def contains(self, x: Sequence[int]) -> bool:
        units, rest, w = self._structure
        if len(x) != self.rank:
            raise DimensionError("rank mismatch")
        if not self.hull.contains(x):
            return False
        return _member(tuple(x), list(rest), units, w, self.hull)

    def hilbert_basis(self) -> list[Vec]:
        """A minimal generating set: atoms plus a basis of the unit group (both signs)."""
        return list(self.atoms) + list(self.units) + [tuple(-a for a in u) for u in self.units]

    def face_from_real(self, face: RatCone) -> "IntCone":
        return IntCone(self.rank, [g for g in self.generators if face.contains(g)])

    def contains_cone(self, other: "IntCone") -> bool:
        return all(self.contains(g) for g in other.generators)


def _member(x: Vec, gens: Sequence[Vec], units: Sequence[Vec], w: Sequence, hull_: RatCone) -> bool:
    """Bounded search for non-negative integer coefficients with x - sum in Z<units>."""
    if not gens:
        return in_lattice(x, units)
    if x in gens or in_lattice(x, units):
        return True
    gens = tuple(sorted(gens, key=lambda g: (-dot(w, g), g)))
    suffix_hulls = _suffix_hulls(len(x), gens, tuple(units))
    budget = [SEARCH_LIMIT]
    seen: set = set()

    def rec(i: int, r: Vec) -> bool:
        if in_lattice(r, units):
            return True
        if i == len(gens) or (i, r) in seen:
            return False
        seen.add((i, r))
        if not suffix_hulls[i].contains(r):
            return False
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceError("monoid membership search exceeded its bound")
        g = gens[i]
        wg = dot(w, g)
        kmax = floor(Fraction(dot(w, r)) / wg)
        for k in range(kmax, -1, -1):
            if rec(i + 1, tuple(a - k * b for a, b in zip(r, g))):
                return True
        return False

    return rec(0, tuple(x))


@lru_cache(maxsize=10_000)
def _suffix_hulls(n: int, gens: tuple, units: tuple) -> list[RatCone]:
    return [RatCone.generated(n, gens[i:], units) for i in range(len(gens))]


def span_int(gens: Iterable[Sequence[int]], rank_: int | None = None) -> IntCone:
    gens = [tuple(g) for g in gens]
    if rank_ is None:
        if not gens:
            raise DimensionError("rank required for an empty generating set")
        rank_ = len(gens[0])
    if any(len(g) != rank_ for g in gens):
        raise DimensionError("generators of mixed rank")
    return IntCone(rank_, gens)


def member_int(c: IntCone, x: Sequence[int]) -> bool:
    return c.contains(x)


# ---------------------------------------------------------------------------
# faces


@dataclass
class FaceNode:
    real: RatCone
    cone: "IntCone | None"
    dim: int
    exposed: bool
    parents: list[int] = field(default_factory=list)
    children: list[int] = field(default_factory=list)


@dataclass
class FacePoset:
    nodes: list[FaceNode]

    def __len__(self) -> int:
        return len(self.nodes)

    def reals(self) -> list[RatCone]:
        return [n.real for n in self.nodes]

    def cones(self) -> list:
        return [n.cone if n.cone is not None else n.real for n in self.nodes]

    def index(self, real: RatCone) -> int:
        for i, n in enumerate(self.nodes):
            if n.real == real:
                return i
        raise FaceError("not a face")


def _is_exposed(top: RatCone, face: RatCone) -> bool:
    p = face.relint_point()
    v = [0] * top.rank
    for h in top.halfspaces:
        if dot(h, p) == 0:
            v = [a + b for a, b in zip(v, h)]
    return top.face_cut(v) == face


def faces(c) -> FacePoset:
    """Face poset of an IntCone or RatCone, graded by dimension, with covering edges."""
    top = c.hull if isinstance(c, IntCone) else c
    reals = top.faces()
    nodes = [
        FaceNode(
            real=f,
            cone=c.face_from_real(f) if isinstance(c, IntCone) else None,
            dim=f.dim,
            exposed=_is_exposed(top, f),
        )
        for f in reals
    ]
    for i, a in enumerate(nodes):
        for j, b in enumerate(nodes):
            if b.dim == a.dim - 1 and a.real.contains_cone(b.real):
                a.children.append(j)
                b.parents.append(i)
    return FacePoset(nodes)


def exposed_faces(c) -> list:
    return [n.cone if n.cone is not None else n.real for n in faces(c).nodes if n.exposed]


def _check_sub(c: IntCone, sub: IntCone) -> None:
    if sub.rank != c.rank:
        raise DimensionError("rank mismatch")
    for g in sub.generators:
        if not c.contains(g):
            raise ContainmentError(f"{LatticeVector(g)} is not in the cone")


def min_face(c: IntCone, sub: IntCone, check: bool = True) -> IntCone:
    """Smallest face of c containing sub.  `check=False` skips the containment test."""
    if check:
        _check_sub(c, sub)
    p = [0] * c.rank
    for g in sub.generators:
        p = [a + b for a, b in zip(p, g)]
    return c.face_from_real(c.hull.minimal_face_containing(p))


def localize(c: IntCone, sub: IntCone, check: bool = True) -> IntCone:
    """The coface c - sub, which equals c - min_face(c, sub)."""
    mf = min_face(c, sub, check)
    return IntCone(c.rank, list(c.generators) + [tuple(-a for a in g) for g in mf.generators])


def minkowski(c1: IntCone, c2: IntCone, op: str = "sum") -> IntCone:
    if c1.rank != c2.rank:
        raise DimensionError("rank mismatch")
    if op == "sum":
        other = c2.generators
    elif op == "difference":
        other = [tuple(-a for a in g) for g in c2.generators]
    else:
        raise ValueError("op must be 'sum' or 'difference'")
    return IntCone(c1.rank, list(c1.generators) + list(other))


def saturate(c: IntCone) -> IntCone:
    """Lattice points of the hull, generated by a Hilbert basis."""
    h = c.hull
    n = c.rank
    zon = list(h.rays) + list(h.lineality)
    lo = [sum(min(0, z[j]) for z in zon) for j in range(n)]
    hi = [sum(max(0, z[j]) for z in zon) for j in range(n)]
    size = 1
    for a, b in zip(lo, hi):
        size *= b - a + 1
    if size > SEARCH_LIMIT:
        raise ResourceError("saturation box too large")
    lin_lattice = saturate_span(h.lineality, n)
    cand = [p for p in product(*(range(a, b + 1) for a, b in zip(lo, hi))) if any(p) and h.contains(p)]
    gens = cand + list(h.rays) + list(lin_lattice) + [tuple(-a for a in v) for v in lin_lattice]
    full = IntCone(n, gens)
    return IntCone(n, full.hilbert_basis())


@dataclass(frozen=True)
class ConeProps:
    dim: int
    is_full: bool
    is_strictly_convex: bool
    is_smooth: bool
    is_polyhedral: bool


def cone_props(c) -> ConeProps:
    h = c.hull if isinstance(c, IntCone) else c
    smooth = is_unimodular_part(list(h.rays) + list(h.lineality), h.rank)
    return ConeProps(
        dim=h.dim,
        is_full=h.is_full,
        is_strictly_convex=h.is_pointed,
        is_smooth=smooth,
        is_polyhedral=True,
    )


def is_face(c: IntCone, tau: IntCone) -> bool:
    if not c.contains_cone(tau):
        return False
    return min_face(c, tau) == tau


def dual_face(c: IntCone, face: IntCone) -> RatCone:
    """The dual face of the dual cone cut out by the face: dual(c) ∩ face^perp."""
    if not is_face(c, face):
        raise FaceError("input is not a face of the cone")
    k = [0] * c.rank
    for g in face.generators:
        k = [a + b for a, b in zip(k, g)]
    d = c.hull.dual()
    return RatCone.generated(c.rank, [r for r in d.rays if dot(r, k) == 0], d.lineality)


def is_smooth_monoid(c: IntCone) -> bool:
    """True when the monoid itself is generated by part of a lattice basis (plus its negatives)."""
    h = c.hull
    if not is_unimodular_part(list(h.rays) + list(h.lineality), c.rank):
        return False
    units = list(h.lineality) + [tuple(-a for a in v) for v in h.lineality]
    return all(c.contains(g) for g in list(h.rays) + units)
