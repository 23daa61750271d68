"""Cofans of integral cones, fans of rational cones, and the maps between them."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .cones import IntCone, RatCone, faces, localize, minkowski
from .errors import CofanAxiomError, DimensionError, MembershipError
from .lattice import DualVector, LatticeHom
from .linalg import dot


def cone_sort_key(c: RatCone):
    return (c.dim, c.rays, c.lineality)


def _points(cone) -> list:
    """Finite witness set of a cone: generators, or sampled lattice points of a predicate cone."""
    if isinstance(cone, IntCone):
        return list(cone.generators)
    return list(cone.points())


def is_coface(sigma: IntCone, rho: IntCone) -> bool:
    """True when sigma = rho - tau for some face tau of rho."""
    if sigma.rank != rho.rank or not sigma.hull.contains_cone(rho.hull):
        return False
    inside = [g for g in rho.generators if all(dot(h, g) == 0 for h in sigma.hull.halfspaces)]
    return localize(rho, IntCone(rho.rank, inside), check=False) == sigma


class Cofan:
    """A collection of integral cones keyed by canonical form, with its coface-maximal members."""

    def __init__(self, rank: int, cones: Iterable, maximal: Iterable | None = None):
        self.rank = rank
        self.cones: dict = {}
        for c in cones:
            if c.rank != rank:
                raise DimensionError("cone of the wrong rank")
            self.cones.setdefault(c.key, c)
        if maximal is None:
            self._maximal = None
        else:
            mx = {}
            for c in maximal:
                mx.setdefault(c.key, c)
                self.cones.setdefault(c.key, c)
            self._maximal = list(mx.values())

    @property
    def maximal(self) -> list:
        if self._maximal is None:
            cs = list(self.cones.values())
            self._maximal = [
                s for s in cs if not any(r is not s and isinstance(r, IntCone) and is_coface(s, r) for r in cs)
            ]
        return self._maximal

    def __len__(self) -> int:
        return len(self.cones)

    def __iter__(self):
        return iter(self.cones.values())

    def __contains__(self, c) -> bool:
        return c.key in self.cones

    def __eq__(self, other) -> bool:
        return isinstance(other, Cofan) and self.rank == other.rank and set(self.cones) == set(other.cones)

    def __hash__(self):
        return hash(frozenset(self.cones))


def generate_cofan(seeds: Iterable[IntCone]) -> Cofan:
    """Close seeds under localization at faces; reject if a pairwise sum is not a common coface.

    Checking sums on seeds suffices: cofaces of a coface are cofaces, and a sum of
    localizations is a localization of the sum.
    """
    seeds = list({s.key: s for s in seeds}.values())
    if not seeds:
        raise DimensionError("at least one seed cone is required")
    n = seeds[0].rank
    if any(s.rank != n for s in seeds):
        raise DimensionError("seeds of mixed rank")
    for a, b in combinations(seeds, 2):
        s = minkowski(a, b)
        if not is_coface(s, a) or not is_coface(s, b):
            raise CofanAxiomError(
                f"sum of {a!r} and {b!r} is not a coface of both", pair=(a, b)
            )
    cones = []
    nonmax = set()
    for s in seeds:
        for node in faces(s).nodes:
            loc = localize(s, node.cone, check=False)
            cones.append(loc)
            if loc != s:
                nonmax.add(loc.key)
    maximal = [s for s in seeds if s.key not in nonmax]
    return Cofan(n, cones, maximal)


@dataclass
class Fan:
    """A face-closed collection of rational cones with per-cone tags and free-form metadata."""

    rank: int
    cones: dict = field(default_factory=dict)
    tags: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @classmethod
    def from_cones(
        cls,
        rank: int,
        cones: Iterable[RatCone],
        tags: dict | None = None,
        metadata: dict | None = None,
        close: bool = True,
    ) -> "Fan":
        f = cls(rank, {}, {}, dict(metadata or {}))
        for c in cones:
            if c.rank != rank:
                raise DimensionError("cone of the wrong rank")
            f.cones.setdefault(c.key, c)
        if close:
            for c in list(f.cones.values()):
                for face in c.faces():
                    f.cones.setdefault(face.key, face)
        for k, t in (tags or {}).items():
            if k in f.cones:
                f.tags[k] = dict(t)
        return f

    def sorted(self) -> list[RatCone]:
        return sorted(self.cones.values(), key=cone_sort_key)

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.cones)

    def __contains__(self, c: RatCone) -> bool:
        return c.key in self.cones

    def __eq__(self, other) -> bool:
        return isinstance(other, Fan) and self.rank == other.rank and set(self.cones) == set(other.cones)

    def tag(self, c: RatCone) -> dict:
        return self.tags.get(c.key, {})

    def maximal(self) -> list[RatCone]:
        cs = self.sorted()
        return [a for a in cs if not any(b.dim > a.dim and b.contains_cone(a) for b in cs)]

    def full_cones(self) -> list[RatCone]:
        return [c for c in self.sorted() if c.is_full]

    def rays(self) -> list[RatCone]:
        return [c for c in self.sorted() if c.dim == 1]

    def face_edges(self) -> list[tuple[int, int]]:
        """(i, j) with cone j a facet of cone i, in canonical index order."""
        cs = self.sorted()
        out = []
        for i, a in enumerate(cs):
            for j, b in enumerate(cs):
                if b.dim == a.dim - 1 and a.contains_cone(b) and b.is_face_of(a):
                    out.append((i, j))
        return out

    def subfan(self, cones: Iterable[RatCone]) -> "Fan":
        sub = Fan.from_cones(self.rank, cones, metadata=self.metadata)
        sub.tags = {k: v for k, v in self.tags.items() if k in sub.cones}
        return sub


def associated_fan(c: Cofan) -> Fan:
    duals = {}
    for s in c:
        d = s.hull.dual()
        duals.setdefault(d.key, d)
    return Fan.from_cones(c.rank, duals.values())


@dataclass
class FanReport:
    ok: bool
    violations: list[str]
    checked_pairs: int = 0

    def __bool__(self) -> bool:
        return self.ok


def check_fan(f: Fan) -> FanReport:
    """Face closure and pairwise common-face intersections (checked on maximal cones)."""
    bad = []
    for c in f.sorted():
        for face in c.faces():
            if face.key not in f.cones:
                bad.append(f"face {face!r} of {c!r} is missing")
    mx = f.maximal()
    pairs = 0
    for a, b in combinations(mx, 2):
        pairs += 1
        m = a.intersect(b)
        if not (m.is_face_of(a) and m.is_face_of(b)):
            bad.append(f"{a!r} and {b!r} meet in {m!r}, which is not a common face")
    return FanReport(ok=not bad, violations=bad, checked_pairs=pairs)


def _tau_perp(sigma: IntCone, tau: RatCone) -> IntCone:
    gens = [g for g in sigma.generators if all(dot(t, g) == 0 for t in tau.generators())]
    return IntCone(sigma.rank, gens)


def lowest_coface(c: Cofan, tau: RatCone) -> IntCone:
    """The smallest cone of the cofan whose dual has tau as a face: sigma - (sigma ∩ tau^perp)."""
    for s in list(c.maximal) + list(c):
        if isinstance(s, IntCone) and tau.is_face_of(s.hull.dual()):
            return localize(s, _tau_perp(s, tau), check=False)
    raise MembershipError(f"{tau!r} is not a cone of the associated fan")


def _exposed_dual_faces(sigma) -> list[RatCone]:
    """Dual faces dual(sigma) ∩ k^perp over exposed faces kappa of sigma (k in relint kappa)."""
    d = sigma.hull.dual()
    pts = _points(sigma)
    out = {}
    for g in d.faces():
        v = g.relint_point()
        kappa = [p for p in pts if dot(v, p) == 0]
        k = [sum(p[i] for p in kappa) for i in range(sigma.rank)]
        df = RatCone.generated(sigma.rank, [r for r in d.rays if dot(r, k) == 0], d.lineality)
        out.setdefault(df.key, df)
    return list(out.values())


def dual_face_fan(c: Cofan) -> Fan:
    cones = {}
    for s in c.maximal:
        for df in _exposed_dual_faces(s):
            cones.setdefault(df.key, df)
    return Fan.from_cones(c.rank, cones.values(), close=False)


def pushforward(c: Cofan, f: LatticeHom) -> Cofan:
    if f.source_rank != c.rank:
        raise DimensionError("homomorphism source does not match the cofan lattice")
    m = f.target_rank
    imgs = []
    for s in c:
        if not isinstance(s, IntCone):
            raise TypeError("pushforward needs finitely generated cones")
        imgs.append(IntCone(m, [tuple(f(g)) for g in s.generators]))
    return Cofan(m, imgs)


def preimage(cone: RatCone, f: LatticeHom) -> RatCone:
    """f^{-1}(cone) for a linear map f given by an integer matrix."""
    mt = f.matrix
    n = f.source_rank

    def pull(h):
        return tuple(sum(h[i] * mt[i][j] for i in range(len(h))) for j in range(n))

    ineqs = [pull(h) for h in cone.halfspaces]
    eqs = [pull(e) for e in cone.equations]
    return RatCone.from_halfspaces(n, ineqs, eqs)


def pullback(fn: Fan, f: LatticeHom) -> Fan:
    if f.target_rank != fn.rank:
        raise DimensionError("homomorphism target does not match the fan lattice")
    return Fan.from_cones(f.source_rank, {preimage(c, f) for c in fn.cones.values()}, metadata=fn.metadata)


@dataclass(frozen=True)
class SupportHit:
    query: DualVector
    cone: RatCone | None
    minimal: bool
    truncated: bool = False

    @property
    def hit(self) -> bool:
        return self.cone is not None


def support_query(f: Fan, v: Sequence) -> SupportHit:
    v = DualVector(v)
    if len(v) != f.rank:
        raise DimensionError("rank mismatch")
    containing = [c for c in f.sorted() if c.contains(v)]
    truncated = bool(f.metadata.get("truncated", False))
    if not containing:
        return SupportHit(v, None, False, truncated)
    best = containing[0]
    minimal = all(c.contains_cone(best) for c in containing)
    return SupportHit(v, best, minimal, truncated)


def in_support(f: Fan, v: Sequence) -> bool:
    return any(c.contains(v) for c in f.cones.values())
