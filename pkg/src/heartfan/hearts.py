"""Heart cofans and fans of a finite category model, and the structures read off from them."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from typing import Sequence

from .category import (
    CategoryModel,
    Subcat,
    TorsionPair,
    is_torsion_pair,
    numerical_tp,
    restrict,
    semistable,
    sub_classes,
    torsion_pairs,
)
from .cones import IntCone, RatCone, dual_face, faces, is_smooth_monoid
from .errors import ChargeError, ConsistencyError, InvariantError, SupportError
from .fans import Cofan, Fan, generate_cofan, in_support
from .lattice import DualVector
from .limits import LimitRegion, region_for
from .linalg import dot, inverse, is_unimodular_part


@dataclass(frozen=True, eq=False)
class TiltedHeart:
    pair: TorsionPair
    eff: IntCone
    heart_cone: RatCone
    algebraic: bool
    label: str
    truncated: bool = False

    @property
    def objects(self) -> list[str]:
        """Indecomposables of the heart: torsion objects and shifted torsionfree objects."""
        return sorted(self.pair.torsion.ids) + sorted(f"{x}[1]" for x in self.pair.torsionfree.ids)


def _label(m: CategoryModel, tp: TorsionPair) -> str:
    if not tp.torsionfree.ids:
        return "H"
    if not tp.torsion.ids:
        return "H[1]"
    return tp.label


def _region(m: CategoryModel) -> LimitRegion | None:
    return region_for(m.metadata)


def tilt(m: CategoryModel, tp: TorsionPair) -> TiltedHeart:
    t, f = set(tp.torsion.ids), set(tp.torsionfree.ids)
    if (t | f) - set(m.classes) or not is_torsion_pair(m, t, f):
        raise InvariantError(f"not a torsion pair of {m.name}: {tp.label}")
    gens = [tuple(m.classes[x]) for x in t] + [tuple(-a for a in m.classes[x]) for x in f]
    eff = IntCone(m.rank, gens)
    cone = eff.hull.dual()
    region = _region(m)
    truncated = region is not None and region.meets(cone)
    smooth_full = eff.hull.is_full and is_smooth_monoid(eff)
    if cone.is_full != smooth_full and not truncated:
        raise ConsistencyError(
            f"heart {_label(m, tp)} of {m.name}: heart cone full={cone.is_full} but effective cone smooth+full={smooth_full}"
        )
    return TiltedHeart(tp, eff, cone, cone.is_full and smooth_full and not truncated, _label(m, tp), truncated)


@lru_cache(maxsize=64)
def tilted_hearts(m: CategoryModel) -> tuple[TiltedHeart, ...]:
    return tuple(tilt(m, tp) for tp in torsion_pairs(m))


@lru_cache(maxsize=64)
def heart_cofan(m: CategoryModel) -> Cofan:
    return generate_cofan([h.eff for h in tilted_hearts(m)])


def is_complete(f: Fan) -> bool:
    """Exact completeness test: every facet of a full cone lies in exactly two full cones."""
    full = f.full_cones()
    if not full:
        return False
    count: dict = {}
    for c in full:
        for face in c.faces():
            if face.dim == c.dim - 1:
                count[face.key] = count.get(face.key, 0) + 1
    return all(v == 2 for v in count.values())


@lru_cache(maxsize=64)
def heart_fan(m: CategoryModel) -> Fan:
    hearts = tilted_hearts(m)
    region = _region(m)
    cones = {}
    tags = {}
    for h in hearts:
        c = h.heart_cone
        cones.setdefault(c.key, c)
        tags[c.key] = {"full": c.is_full, "heart": h.label, "truncated": h.truncated}
    for s in heart_cofan(m):
        d = s.hull.dual()
        cones.setdefault(d.key, d)
    meta = {"dataset": m.name, "truncated": region is not None or m.approximate}
    if region is not None:
        meta["limit_region"] = region.to_json()
    fan = Fan.from_cones(m.rank, cones.values(), tags=tags, metadata=meta)
    for c in fan.sorted():
        fan.tags.setdefault(c.key, {"full": c.is_full})
    if region is None and not is_complete(fan):
        raise ConsistencyError(f"heart fan of length model {m.name} is not complete")
    return fan


# ---------------------------------------------------------------------------
# g-vectors


def g_vectors(c_vectors: Sequence[Sequence[int]]) -> list[tuple]:
    """Dual basis: g_j . c_i = delta_ij."""
    inv = inverse([list(c) for c in c_vectors])
    n = len(c_vectors)
    if any(a.denominator != 1 for row in inv for a in row):
        raise ConsistencyError("c-vectors do not form a lattice basis")
    return [tuple(int(inv[i][j]) for i in range(n)) for j in range(n)]


def full_subfan(fan: Fan, vectors: dict | None = None) -> Fan:
    """The subfan of full, non-truncated cones and their faces, tagged with c- and g-vectors."""
    keep = [c for c in fan.full_cones() if not fan.tag(c).get("truncated", False)]
    sub = Fan.from_cones(fan.rank, keep, metadata=dict(fan.metadata))
    for c in sub.sorted():
        sub.tags[c.key] = dict(fan.tag(c))
    for c in keep:
        if c.lineality or not is_unimodular_part(c.rays, c.rank):
            raise ConsistencyError(f"full cone {c!r} is not smooth")
        cv = (vectors or {}).get(c.key)
        if cv is None:
            cv = g_vectors(c.rays)  # the dual basis of the rays
        sub.tags[c.key]["c_vectors"] = sorted(cv)
        sub.tags[c.key]["g_vectors"] = sorted(g_vectors(cv))
    return sub


def virtual_gfan(m: CategoryModel) -> Fan:
    fan = heart_fan(m)
    vectors = {}
    for h in tilted_hearts(m):
        if h.heart_cone.is_full and not h.truncated:
            cs = list(h.eff.hull.rays)
            if len(cs) != m.rank or not is_unimodular_part(cs, m.rank):
                raise ConsistencyError(f"full heart cone of {h.label} has a non-unimodular effective cone")
            vectors[h.heart_cone.key] = cs
    return full_subfan(fan, vectors)


# ---------------------------------------------------------------------------
# stability


def stability_space(m: CategoryModel, x: str) -> RatCone:
    """All v for which x is semistable: v <= 0 on subobject classes and v(x) = 0."""
    subs = [tuple(-a for a in s) for s in sub_classes(m, x) if any(s)]
    return RatCone.from_halfspaces(m.rank, subs, [tuple(m.classes[x])])


@dataclass
class WallChamberReport:
    walls: list  # (id, RatCone, codim)
    chambers: list  # (TiltedHeart, RatCone)
    geometric_walls: list
    stability_support: dict
    truncated: bool = False
    other_spaces: list = field(default_factory=list)


def interior_point(c: RatCone, rng: random.Random) -> tuple:
    p = [0] * c.rank
    for r in c.rays:
        w = rng.randint(1, 9)
        p = [a + w * b for a, b in zip(p, r)]
    for v in c.lineality:
        w = rng.randint(-9, 9)
        p = [a + w * b for a, b in zip(p, v)]
    return tuple(p)


def walls_and_chambers(m: CategoryModel, samples: int = 200, seed: int = 0) -> WallChamberReport:
    walls, others = [], []
    for x in m.ids:
        d = stability_space(m, x)
        codim = m.rank - d.dim
        (walls if codim == 1 else others).append((x, d, codim))
    geo = {}
    for _, d, _ in walls:
        geo.setdefault(d.key, d)
    chambers = [(h, h.heart_cone) for h in tilted_hearts(m) if h.heart_cone.is_full and not h.truncated]
    rng = random.Random(seed)
    bad = 0
    for i in range(samples if chambers else 0):
        _, c = chambers[i % len(chambers)]
        p = interior_point(c, rng)
        if semistable(m, p).ids:
            bad += 1
    region = _region(m)
    return WallChamberReport(
        walls=walls,
        chambers=chambers,
        geometric_walls=sorted(geo.values(), key=lambda c: c.key),
        stability_support={"samples": samples if chambers else 0, "nonempty_semistable": bad},
        truncated=region is not None or m.approximate,
        other_spaces=others,
    )


def kernel_subcat(h: TiltedHeart, m: CategoryModel, face: RatCone) -> Subcat:
    ids = [x for x in h.pair.torsion.ids if face.contains(m.classes[x])]
    ids += [f"{x}[1]" for x in h.pair.torsionfree.ids if face.contains(m.cls(f"{x}[1]"))]
    return Subcat(frozenset(ids), "serre")


@lru_cache(maxsize=64)
def stability_fan(m: CategoryModel) -> Fan:
    cones, tags = {}, {}
    for h in tilted_hearts(m):
        for node in faces(h.eff).nodes:
            if not node.exposed:
                continue
            if not kernel_subcat(h, m, node.real).ids:
                continue
            d = dual_face(h.eff, node.cone)
            cones.setdefault(d.key, d)
            if h.truncated:
                tags.setdefault(d.key, {})["truncated"] = True
    for k in cones:
        tags.setdefault(k, {})["dual_face"] = True
    region = _region(m)
    meta = {"dataset": m.name, "truncated": region is not None or m.approximate}
    return Fan.from_cones(m.rank, cones.values(), tags=tags, metadata=meta)


@dataclass(frozen=True)
class KernelPair:
    heart: TiltedHeart
    kernel: Subcat
    witness: DualVector


def hearts_containing(m: CategoryModel, v: Sequence) -> list[TiltedHeart]:
    v = DualVector(v)
    out = [h for h in tilted_hearts(m) if h.heart_cone.contains(v)]
    ss = semistable(m, v).ids
    expected = len(torsion_pairs(restrict(m, ss))) if ss else 1
    if len(out) != expected and _region(m) is None:
        raise ConsistencyError(f"{len(out)} hearts contain {v!r} but the semistable subcategory has {expected} torsion pairs")
    return out


def distinguished_kernel_pair(m: CategoryModel, v: Sequence) -> KernelPair:
    v = DualVector(v)
    upper = numerical_tp(m, v).upper
    h = tilt(m, upper)
    kernel = Subcat(frozenset(x for x in upper.torsion.ids if dot(v, m.classes[x]) == 0), "wide")
    if not h.heart_cone.contains(v):
        raise ConsistencyError(f"{v!r} is not in the heart cone of its distinguished heart")
    if kernel.ids != semistable(m, v).ids:
        raise ConsistencyError("kernel of the distinguished heart differs from the semistable subcategory")
    for other in hearts_containing(m, v):
        if not h.pair.torsionfree.ids <= other.pair.torsionfree.ids:
            raise ConsistencyError(f"distinguished heart is not minimal: {other.label}")
    return KernelPair(h, kernel, v)


def thick_label(m: CategoryModel, v: Sequence) -> Subcat:
    """Serre generating set of the thick label: the kernel of the distinguished kernel pair."""
    v = DualVector(v)
    if not in_support(heart_fan(m), v):
        raise SupportError(f"{v!r} is outside the heart fan support")
    return distinguished_kernel_pair(m, v).kernel


# ---------------------------------------------------------------------------
# phase slices

_EXACT_PHASES = {(1, 1): Fraction(1, 4), (0, 1): Fraction(1, 2), (-1, 1): Fraction(3, 4), (-1, 0): Fraction(1)}


@dataclass(frozen=True)
class PhaseEntry:
    direction: tuple  # primitive rational direction of Z(class) in the plane
    phase: Fraction | None  # exact phase when the direction has one, else None
    subcat: Subcat
    witness: DualVector

    @property
    def phase_text(self) -> str:
        if self.phase is not None:
            return str(self.phase)
        return "arg(" + ",".join(str(a) for a in self.direction) + ")/pi"


@dataclass(frozen=True)
class PhaseSlice:
    charge: tuple
    entries: tuple
    orientation: str

    def by_phase(self) -> dict:
        return {e.phase if e.phase is not None else e.direction: e.subcat for e in self.entries}


def _direction(z: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    x, y = z
    s = max(abs(x), abs(y))
    return (x / s, y / s)


def _cross(a, b) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def parse_charge(Z) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    if len(Z) != 2:
        raise ChargeError("a charge has exactly two rows (real and imaginary parts)")
    rows = []
    for row in Z:
        vals = []
        for a in row:
            if isinstance(a, float):
                raise ChargeError("floating point charge entries are not accepted")
            vals.append(Fraction(a))
        rows.append(tuple(vals))
    if len(rows[0]) != len(rows[1]):
        raise ChargeError("charge rows have different lengths")
    return rows[0], rows[1]


def phase_slice(m: CategoryModel, Z, orientation: str = "clockwise") -> PhaseSlice:
    """Semistable subcategories of the charge slice, one per phase direction.

    For a direction d the witness functional w vanishes on d; orientation picks its sign
    (clockwise: w(i d) < 0, counterclockwise: w(i d) > 0) and v = w o Z.
    """
    if orientation not in ("clockwise", "counterclockwise"):
        raise ValueError("orientation must be clockwise or counterclockwise")
    re, im = parse_charge(Z)
    if len(re) != m.rank:
        raise ChargeError(f"charge has {len(re)} columns, lattice rank is {m.rank}")
    dirs = {}
    for x in m.ids:
        c = m.classes[x]
        z = (dot(re, c), dot(im, c))
        if not (z[1] > 0 or (z[1] == 0 and z[0] < 0)):
            raise ChargeError(f"Z({x}) = {z[0]}+{z[1]}i is not in the extended upper half-plane")
        dirs.setdefault(_direction(z), []).append(x)
    order = sorted(dirs, key=cmp_to_key(lambda a, b: -1 if _cross(a, b) > 0 else (1 if _cross(a, b) < 0 else 0)))
    entries = []
    for d in order:
        w = (d[1], -d[0]) if orientation == "clockwise" else (-d[1], d[0])
        v = DualVector(w[0] * a + w[1] * b for a, b in zip(re, im))
        ss = semistable(m, v).subcat
        if not ss.ids:
            continue
        key = (int(d[0]), int(d[1])) if d[0].denominator == 1 and d[1].denominator == 1 else None
        entries.append(PhaseEntry(d, _EXACT_PHASES.get(key), ss, v))
    return PhaseSlice((re, im), tuple(entries), orientation)
