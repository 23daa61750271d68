"""Closed-form heart fans of infinite families, truncated by depth, and their finite fixtures.

Depth semantics:
  projective_line  cones C(K_j) for |j| <= depth
  kronecker(n)     K_1..K_depth and their mirrors K'_1..K'_depth
  semisimple_Z     interval hearts K_{<=j}, K_{>j} for -depth <= j < depth
  tube_rank2       the six hearts (depth only sizes the fixture)
  elliptic_rational  rays [-p, q] with 1 <= q <= bound, |p| <= bound
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Callable

from .category import CategoryModel
from .cones import IntCone, RatCone
from .errors import SpecError
from .fans import Cofan, Fan
from .limits import LimitRay, LimitRegion

KINDS = ("projective_line", "kronecker", "tube_rank2", "semisimple_Z", "elliptic_rational")


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    depth: int = 3
    n: int = 2
    bound: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SpecError(f"unknown family {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.depth < 1:
            raise SpecError("depth must be at least 1")
        if self.kind == "kronecker" and self.n < 2:
            raise SpecError("the Kronecker family needs n >= 2 arrows")
        if self.bound is not None and self.bound < 1:
            raise SpecError("the slope bound must be at least 1")


def kronecker_sequence(n: int, length: int) -> list[int]:
    """a_0 = 0, a_1 = 1, a_{i+2} = n a_{i+1} - a_i."""
    a = [0, 1]
    while len(a) < length:
        a.append(n * a[-1] - a[-2])
    return a[:length]


def _rc(*rays) -> RatCone:
    return RatCone.generated(2, rays)


def _mirror(v):
    return (-v[1], -v[0])


# ---------------------------------------------------------------------------
# predicate cones


_RULES: dict[str, tuple[Callable[[int, int], bool], RatCone]] = {}


def _rule(kind: str, closure_gens, closure_lin=()):
    def deco(fn):
        _RULES[kind] = (fn, RatCone.generated(2, closure_gens, closure_lin))
        return fn

    return deco


@_rule("coh_P1", [(1, 0)], [(0, 1)])
def _coh(m: int, n: int) -> bool:
    return m > 0 or (m == 0 and n >= 0)


@_rule("mixed_P1", [(1, 0)], [(0, 1)])
def _mixed(m: int, n: int) -> bool:
    return m >= 0


@_rule("reversed_P1", [(1, 0)], [(0, 1)])
def _reversed(m: int, n: int) -> bool:
    return m > 0 or (m == 0 and n <= 0)


@_rule("effective_upper", [(0, 1)], [(1, 0)])
def _upper(m: int, n: int) -> bool:
    return n > 0 or (m == 0 and n == 0)


@_rule("open_quadrant", [(1, 0), (0, 1)])
def _open_quadrant(m: int, n: int) -> bool:
    return (m >= 1 and n >= 1) or (m == 0 and n == 0)


class PredicateCone:
    """A non-finitely-generated integral cone given by a membership rule and its closed hull."""

    rank = 2

    def __init__(self, kind: str, sign: int = 1):
        if kind not in _RULES:
            raise SpecError(f"unknown predicate cone {kind!r}")
        self.kind = kind
        self.sign = sign
        self._rule, base = _RULES[kind]
        self.closure = base if sign == 1 else RatCone.generated(2, [tuple(-a for a in g) for g in base.generators()])

    @property
    def hull(self) -> RatCone:
        return self.closure

    @property
    def key(self):
        return ("predicate", self.kind, self.sign)

    def contains(self, x) -> bool:
        m, n = x
        return self._rule(self.sign * m, self.sign * n)

    def negated(self) -> "PredicateCone":
        return PredicateCone(self.kind, -self.sign)

    def points(self, box: int = 4) -> list[tuple[int, int]]:
        """Non-zero members in [-box, box]^2; enough to witness every face of these rank-2 rules."""
        return [p for p in product(range(-box, box + 1), repeat=2) if any(p) and self.contains(p)]

    def __repr__(self) -> str:
        return f"PredicateCone({self.kind!r}{'' if self.sign == 1 else ', negated'})"


def predicate_cone(kind: str) -> PredicateCone:
    return PredicateCone(kind)


# ---------------------------------------------------------------------------
# family fans


def _limit_meta(rays: list[LimitRay]) -> list[dict]:
    return [r.to_json() for r in rays]


def _kronecker_cones(n: int, depth: int) -> dict[str, RatCone]:
    a = kronecker_sequence(n, depth + 2)
    cones = {
        "H": _rc((1, 0), (0, 1)),
        "H[1]": _rc((-1, 0), (0, -1)),
        "K_ssi": _rc((1, 0), (0, -1)),
    }
    for j in range(1, depth + 1):
        r1, r2 = (-a[j - 1], a[j]), (-a[j], a[j + 1])
        cones[f"K_{j}"] = _rc(r1, r2)
        cones[f"K'_{j}"] = _rc(_mirror(r1), _mirror(r2))
    return cones


def family_fan(spec: FamilySpec) -> Fan:
    kind, d = spec.kind, spec.depth
    labelled: dict[str, RatCone] = {}
    extra_tags: dict = {}
    meta: dict = {"family": {"kind": kind, "depth": d}, "truncated": True, "limit_rays": []}
    if kind == "projective_line":
        labelled["H"] = _rc((1, 0))
        labelled["H[1]"] = _rc((-1, 0))
        for j in range(-d, d + 1):
            labelled[f"K_{j}"] = _rc((-j, 1), (1 - j, 1))
        meta["limit_rays"] = [
            {"direction": ["1", "0"], "rational": True},
            {"direction": ["-1", "0"], "rational": True},
        ]
        meta["support"] = "closed upper half-plane"
    elif kind == "kronecker":
        n = spec.n
        meta["family"]["n"] = n
        labelled.update(_kronecker_cones(n, d))
        meta["sequence"] = kronecker_sequence(n, d)
        region = LimitRegion(n)
        meta["limit_rays"] = _limit_meta(list(region.rays))
        meta["limit_region"] = region.to_json()
        if n == 2:
            labelled["K_limit"] = _rc((-1, 1))
            extra_tags["K_limit"] = {"limit": True}
        else:
            meta["algebraic_data"] = list(region.algebraic_data)
    elif kind == "tube_rank2":
        labelled.update(TUBE_CONES)
        meta["truncated"] = False
    elif kind == "semisimple_Z":
        labelled["H"] = _rc((1, 0), (0, 1))
        labelled["H[1]"] = _rc((-1, 0), (0, -1))
        for j in range(-d, d):
            c = semisimple_z_heart_cone(j)
            labelled[f"K_<={j}"] = c
            labelled[f"K_>{j}"] = RatCone.generated(2, [tuple(-a for a in r) for r in c.rays])
        meta["limit_rays"] = [
            {"direction": [x, y], "rational": True} for x, y in (("-1", "0"), ("0", "1"), ("1", "0"), ("0", "-1"))
        ]
    elif kind == "elliptic_rational":
        b = spec.bound or d
        meta["family"]["bound"] = b
        labelled["H"] = _rc((1, 0))
        labelled["H[1]"] = _rc((-1, 0))
        for q in range(1, b + 1):
            for p in range(-b, b + 1):
                if gcd(p, q) == 1:
                    labelled[f"K_{p}/{q}"] = _rc((-p, q))
        meta["support"] = "dense rays in the closed upper half-plane"
    tags = {}
    for label, c in labelled.items():
        tags[c.key] = {"full": c.is_full, "heart": label, **extra_tags.get(label, {})}
    fan = Fan.from_cones(2, labelled.values(), tags=tags, metadata=meta)
    if kind == "semisimple_Z":
        for axis in ((1, 0), (0, 1), (-1, 0), (0, -1)):
            fan.tags.setdefault(_rc(axis).key, {})["dual_face"] = False
    for c in fan.sorted():
        fan.tags.setdefault(c.key, {"full": c.is_full})
    return fan


# ---------------------------------------------------------------------------
# tube of rank 2

TUBE_CONES = {
    "H": _rc((1, 0), (0, 1)),
    "K_1": _rc((-1, 1), (0, 1)),
    "K_2": _rc((-1, 0), (-1, 1)),
    "K_3": _rc((0, -1), (1, -1)),
    "K_4": _rc((1, -1), (1, 0)),
    "H[1]": _rc((-1, 0), (0, -1)),
}


def _tube_name(top: int, length: int) -> str:
    if length == 1:
        return f"S{top}"
    if length == 2:
        return "E" if top == 2 else "F"
    return f"U{top}_{length}"


def _tube_factor(top: int, pos: int) -> int:
    """Composition factor at position pos (1 = top) of the uniserial with the given top."""
    return top if pos % 2 == 1 else 3 - top


def tube_fixture(depth: int = 4) -> dict:
    """Uniserials of the rank-2 tube up to the given length, with all their sub/quotient sequences."""
    objs = [(t, length) for length in range(1, depth + 1) for t in (1, 2)]
    indecs = {}
    for t, length in objs:
        cls = [0, 0]
        for i in range(1, length + 1):
            cls[_tube_factor(t, i) - 1] += 1
        indecs[_tube_name(t, length)] = {"class": cls}
    ses = []
    for t, length in objs:
        for k in range(1, length):
            sub_top = _tube_factor(t, length - k + 1)
            ses.append(
                {"sub": [_tube_name(sub_top, k)], "mid": _tube_name(t, length), "quot": [_tube_name(t, length - k)]}
            )
    hom = []
    for (t1, l1), (t2, l2) in product(objs, objs):
        # Hom(U, V) != 0 iff some quotient of U is a submodule of V
        ok = any(
            j <= l2 and _tube_factor(t2, l2 - j + 1) == t1 for j in range(1, l1 + 1)
        )
        if ok:
            hom.append([_tube_name(t1, l1), _tube_name(t2, l2)])
    return {
        "name": f"tube2_d{depth}",
        "rank": 2,
        "simples": ["S1", "S2"],
        "indecs": indecs,
        "ses": ses,
        "hom": hom,
        "metadata": {"family": {"kind": "tube_rank2", "depth": depth}, "approximate": True},
    }


# ---------------------------------------------------------------------------
# Kronecker quiver


def _euler(n: int, x, y) -> int:
    return x[0] * y[0] + x[1] * y[1] - n * x[1] * y[0]


def kronecker_fixture(n: int = 2, depth: int = 5) -> dict:
    """Postprojectives P_1..P_{depth+1} and preinjectives I_1..I_{depth+1} of the n-Kronecker quiver.

    Each non-simple module sits in its radical sequence 0 -> P_1^a -> X -> I_1^b -> 0.
    Regular modules are left out, so the fixture is a truncation.
    """
    a = kronecker_sequence(n, depth + 3)
    m = depth + 1
    p = {f"P{i}": (a[i], a[i - 1]) for i in range(1, m + 1)}
    q = {f"I{i}": (a[i - 1], a[i]) for i in range(1, m + 1)}
    indecs = {k: {"class": list(v)} for k, v in {**p, **q}.items()}
    ses = []
    for name, (x1, x2) in {**p, **q}.items():
        if name in ("P1", "I1"):
            continue
        ses.append({"sub": [["P1", x1]], "mid": name, "quot": [["I1", x2]]})
    hom = []
    for i in range(1, m + 1):
        for k in range(1, m + 1):
            if k >= i:
                hom.append([f"P{i}", f"P{k}"])
            if k <= i:
                hom.append([f"I{i}", f"I{k}"])
            if _euler(n, p[f"P{i}"], q[f"I{k}"]) > 0:
                hom.append([f"P{i}", f"I{k}"])
    return {
        "name": f"kronecker{n}_d{depth}",
        "rank": 2,
        "simples": ["P1", "I1"],
        "indecs": indecs,
        "ses": ses,
        "hom": hom,
        "metadata": {"family": {"kind": "kronecker", "n": n, "depth": depth}, "approximate": True},
    }


# ---------------------------------------------------------------------------
# semisimple algebra with simples indexed by Z


def semisimple_z_class(i: int) -> tuple[int, int]:
    return (i + 1, 1) if i >= 0 else (1, 1 - i)


def semisimple_z_heart_cone(j: int) -> RatCone:
    """C(K_{<=j})."""
    if j < 0:
        return _rc((j, 1), (j - 1, 1))
    return _rc((-1, j + 1), (-1, j + 2))


def _int_surrogate(c: RatCone) -> IntCone:
    """A finitely generated monoid whose hull is dual(c)."""
    d = c.dual()
    return IntCone(2, list(d.rays) + list(d.lineality) + [tuple(-a for a in v) for v in d.lineality])


def semisimple_z_cofan(depth: int = 2) -> Cofan:
    """Heart cofan truncation: E(H) and E(H[1]) as predicate cones, interval hearts finitely generated."""
    h = PredicateCone("open_quadrant")
    cones: list = [h, h.negated()]
    for j in range(-depth, depth):
        c = semisimple_z_heart_cone(j)
        cones.append(_int_surrogate(c))
        cones.append(_int_surrogate(RatCone.generated(2, [tuple(-a for a in r) for r in c.rays])))
    return Cofan(2, cones, maximal=cones)


# ---------------------------------------------------------------------------
# elliptic curve


def elliptic_cofan(bound: int = 2) -> Cofan:
    """Effective cones of the slope tilts as saturated half-plane monoids with the same hulls."""
    cones = [
        IntCone(2, [(1, 0), (0, 1), (0, -1)]),
        IntCone(2, [(-1, 0), (0, 1), (0, -1)]),
    ]
    for q in range(1, bound + 1):
        for p in range(-bound, bound + 1):
            if gcd(p, q) != 1:
                continue
            # boundary line direction (q, p); a point with -p*x + q*y = 1 lies on the positive side
            x, y = _bezout_point(p, q)
            cones.append(IntCone(2, [(q, p), (-q, -p), (x, y)]))
    return Cofan(2, cones, maximal=cones)


def _bezout_point(p: int, q: int) -> tuple[int, int]:
    for x in range(-abs(q) - 1, abs(q) + 2):
        if (1 + p * x) % q == 0:
            return (x, (1 + p * x) // q)
    raise SpecError("no integer point on the unit level")  # unreachable for coprime p, q


# ---------------------------------------------------------------------------
# cross-check


@dataclass
class CrosscheckReport:
    ok: bool
    missing_in_family: list = field(default_factory=list)
    missing_in_fixture: list = field(default_factory=list)


def family_crosscheck(spec: FamilySpec, dataset: CategoryModel) -> CrosscheckReport:
    from .hearts import tilted_hearts

    fam = dataset.metadata.get("family")
    if not isinstance(fam, dict) or fam.get("kind") != spec.kind:
        raise SpecError(f"dataset {dataset.name!r} is not a fixture of the {spec.kind} family")
    if spec.kind == "kronecker" and int(fam.get("n", 2)) != spec.n:
        raise SpecError("fixture and spec have different numbers of arrows")
    built = {h.heart_cone.key: h.heart_cone for h in tilted_hearts(dataset) if h.heart_cone.is_full and not h.truncated}
    closed = {c.key: c for c in family_fan(spec).full_cones()}
    mf = [built[k] for k in sorted(set(built) - set(closed))]
    mx = [closed[k] for k in sorted(set(closed) - set(built))]
    return CrosscheckReport(ok=not mf and not mx, missing_in_family=mf, missing_in_fixture=mx)
