"""Finite presentations of length abelian categories and torsion-pair enumeration."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import AdditivityError, DatasetError
from .lattice import DualVector, LatticeVector

MULTISET_CAP = 4


@dataclass(frozen=True)
class Subcat:
    """A set of indecomposable ids with an optional closure tag."""

    ids: frozenset
    kind: str = field(default="none", compare=False)
    sums: tuple = field(default=(), compare=False)

    def __iter__(self):
        return iter(sorted(self.ids))

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, x) -> bool:
        return x in self.ids

    def __repr__(self) -> str:
        return "<" + ",".join(sorted(self.ids)) + ">"


@dataclass(frozen=True)
class TorsionPair:
    torsion: Subcat
    torsionfree: Subcat

    @property
    def label(self) -> str:
        return f"T={self.torsion!r};F={self.torsionfree!r}"


@dataclass(frozen=True)
class SES:
    sub: tuple  # ((id, multiplicity), ...)
    mid: str
    quot: tuple

    def sub_ids(self) -> set:
        return {i for i, _ in self.sub}

    def quot_ids(self) -> set:
        return {i for i, _ in self.quot}


@dataclass(eq=False)
class CategoryModel:
    name: str
    rank: int
    simples: tuple
    classes: dict  # id -> LatticeVector
    ses: tuple
    hom: frozenset
    metadata: dict = field(default_factory=dict)

    @property
    def ids(self) -> list[str]:
        return sorted(self.classes)

    def cls(self, x: str) -> LatticeVector:
        if x.endswith("[1]"):
            return -self.classes[x[:-3]]
        return self.classes[x]

    def ses_for(self, x: str) -> list[SES]:
        return self._by_mid.get(x, [])

    def __post_init__(self) -> None:
        self._by_mid: dict[str, list[SES]] = {}
        for s in self.ses:
            self._by_mid.setdefault(s.mid, []).append(s)
        self._subs = _closure(self, "sub")
        self._quots = _closure(self, "quot")

    def hom_nonzero(self, a: str, b: str) -> bool:
        return (a, b) in self.hom

    @property
    def approximate(self) -> bool:
        return bool(self.metadata.get("approximate", False))


# ---------------------------------------------------------------------------
# loading


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DatasetError(f"{where}: expected an integer, got {x!r}")
    return x


def _multiset(raw, where: str, known: set) -> tuple:
    if not isinstance(raw, list):
        raise DatasetError(f"{where}: expected a list")
    counts: dict[str, int] = {}
    for item in raw:
        if isinstance(item, str):
            i, k = item, 1
        elif isinstance(item, list) and len(item) == 2 and isinstance(item[0], str):
            i, k = item[0], _int(item[1], where)
            if k < 1:
                raise DatasetError(f"{where}: multiplicity must be positive")
        else:
            raise DatasetError(f"{where}: bad multiset entry {item!r}")
        if i not in known:
            raise DatasetError(f"{where}: dangling id {i!r}")
        counts[i] = counts.get(i, 0) + k
    if len(counts) > MULTISET_CAP:
        raise DatasetError(f"{where}: more than {MULTISET_CAP} distinct summands")
    return tuple(sorted(counts.items()))


def load_model(document) -> CategoryModel:
    """Validate and build a model from a parsed JSON document, a JSON string or a path."""
    if isinstance(document, (str, Path)) and not (isinstance(document, str) and document.lstrip().startswith("{")):
        document = json.loads(Path(document).read_text())
    elif isinstance(document, str):
        document = json.loads(document)
    if not isinstance(document, Mapping):
        raise DatasetError("dataset must be a JSON object")
    for key in ("name", "rank", "simples", "indecs", "ses", "hom"):
        if key not in document:
            raise DatasetError(f"missing field {key!r}")
    name = document["name"]
    if not isinstance(name, str):
        raise DatasetError("name must be a string")
    rank = _int(document["rank"], "rank")
    if rank < 0:
        raise DatasetError("rank must be non-negative")
    indecs = document["indecs"]
    if not isinstance(indecs, Mapping) or not indecs:
        raise DatasetError("indecs must be a non-empty object")
    classes = {}
    for i, entry in indecs.items():
        if not isinstance(entry, Mapping) or "class" not in entry:
            raise DatasetError(f"indec {i!r} needs a class")
        c = entry["class"]
        if not isinstance(c, list) or len(c) != rank:
            raise DatasetError(f"indec {i!r}: class must have {rank} integer entries")
        classes[i] = LatticeVector([_int(a, f"class of {i}") for a in c])
        if i.endswith("[1]"):
            raise DatasetError(f"id {i!r} clashes with the shift suffix")
    known = set(classes)
    simples = document["simples"]
    if not isinstance(simples, list) or any(s not in known for s in simples):
        raise DatasetError("simples must list known ids")
    ses = []
    for n, e in enumerate(document["ses"]):
        where = f"ses[{n}]"
        if not isinstance(e, Mapping) or set(e) - {"sub", "mid", "quot"} or "mid" not in e:
            raise DatasetError(f"{where}: needs exactly sub, mid, quot")
        mid = e["mid"]
        if mid not in known:
            raise DatasetError(f"{where}: dangling id {mid!r}")
        sub = _multiset(e.get("sub", []), where, known)
        quot = _multiset(e.get("quot", []), where, known)
        if not sub or not quot:
            raise DatasetError(f"{where}: both ends must be non-zero")
        if mid in simples:
            raise DatasetError(f"{where}: simple object {mid!r} cannot have a proper sub and quotient")
        total = [0] * rank
        for i, k in sub + quot:
            total = [a + k * b for a, b in zip(total, classes[i])]
        if tuple(total) != tuple(classes[mid]):
            raise AdditivityError(
                f"{where}: classes do not add up, sub+quot = {tuple(total)} but class({mid}) = {classes[mid]!r}"
            )
        ses.append(SES(sub, mid, quot))
    hom = set()
    for pr in document["hom"]:
        if not (isinstance(pr, list) and len(pr) == 2 and all(isinstance(p, str) for p in pr)):
            raise DatasetError(f"bad hom entry {pr!r}")
        for p in pr:
            if p not in known:
                raise DatasetError(f"hom: dangling id {p!r}")
        hom.add(tuple(pr))
    for i in known:
        if (i, i) not in hom:
            raise DatasetError(f"hom table is not reflexive at {i!r}")
    meta = document.get("metadata", {})
    if not isinstance(meta, Mapping):
        raise DatasetError("metadata must be an object")
    return CategoryModel(
        name=name,
        rank=rank,
        simples=tuple(simples),
        classes=classes,
        ses=tuple(ses),
        hom=frozenset(hom),
        metadata=dict(meta),
    )


def data_dir() -> Path:
    env = os.environ.get("HEARTFAN_DATA")
    if env:
        return Path(env)
    return Path(str(resources.files("heartfan") / "data"))


def dataset_path(name: str) -> Path:
    p = Path(name)
    if p.suffix == ".json" and p.exists():
        return p
    cand = data_dir() / f"{name}.json"
    if not cand.exists():
        builtin = Path(str(resources.files("heartfan") / "data")) / f"{name}.json"
        if builtin.exists():
            return builtin
        raise DatasetError(f"unknown dataset {name!r}")
    return cand


def load_dataset(name: str) -> CategoryModel:
    return load_model(dataset_path(name))


# ---------------------------------------------------------------------------
# subobjects and quotients


def _closure(m: CategoryModel, end: str) -> dict:
    """For each id, the set of (class, is_zero, is_whole) of its subobjects (or quotients)."""
    out = {x: {((0,) * m.rank, True, False), (tuple(m.classes[x]), False, True)} for x in m.classes}
    for _ in range(len(m.classes) + 2):
        changed = False
        for s in m.ses:
            parts = s.sub if end == "sub" else s.quot
            acc = {((0,) * m.rank, True)}
            for i, k in parts:
                choices = {(c, z) for c, z, _ in out[i]}
                for _ in range(k):
                    acc = {
                        (tuple(a + b for a, b in zip(c1, c2)), z1 and z2) for c1, z1 in acc for c2, z2 in choices
                    }
            for c, z in acc:
                item = (c, z, False)
                if item not in out[s.mid]:
                    out[s.mid].add(item)
                    changed = True
        if not changed:
            break
    return out


def sub_classes(m: CategoryModel, x: str) -> set:
    return {LatticeVector(c) for c, _, _ in m._subs[x]}


def quotient_classes(m: CategoryModel, x: str) -> set:
    return {LatticeVector(c) for c, _, _ in m._quots[x]}


def _val(v: Sequence[Fraction], c: Sequence[int]) -> Fraction:
    return sum((a * b for a, b in zip(v, c)), Fraction(0))


# ---------------------------------------------------------------------------
# torsion pairs


def _closure_op(m: CategoryModel, seed: set) -> set:
    t = set(seed)
    changed = True
    while changed:
        changed = False
        for s in m.ses:
            if s.mid in t:
                new = s.quot_ids() - t
                if new:
                    t |= new
                    changed = True
            elif s.sub_ids() <= t and s.quot_ids() <= t:
                t.add(s.mid)
                changed = True
    return t


def torsionfree_for(m: CategoryModel, t: Iterable[str]) -> set:
    t = set(t)
    return {x for x in m.classes if not any((a, x) in m.hom for a in t)}


def is_torsion_pair(m: CategoryModel, t: set, f: set) -> bool:
    if any((a, b) in m.hom for a in t for b in f):
        return False
    if t & f:
        return False
    for s in m.ses:
        if s.mid in t and not s.quot_ids() <= t:
            return False
        if s.sub_ids() <= t and s.quot_ids() <= t and s.mid not in t:
            return False
        if s.mid in f and not s.sub_ids() <= f:
            return False
        if s.sub_ids() <= f and s.quot_ids() <= f and s.mid not in f:
            return False
    for x in m.classes:
        if x in t or x in f:
            continue
        if not any(s.sub_ids() <= t and s.quot_ids() <= f for s in m.ses_for(x)):
            return False
    return True


def _pair_sort_key(tp: TorsionPair):
    return (len(tp.torsion), tuple(sorted(tp.torsion.ids)))


def make_pair(m: CategoryModel, t: Iterable[str]) -> TorsionPair:
    t = frozenset(t)
    f = frozenset(torsionfree_for(m, t))
    return TorsionPair(Subcat(t, "torsion"), Subcat(f, "torsionfree"))


def torsion_pairs(m: CategoryModel) -> list[TorsionPair]:
    """All torsion pairs, via NextClosure over the quotient/extension closure operator."""
    ids = m.ids
    n = len(ids)
    pos = {x: i for i, x in enumerate(ids)}
    found = []

    def accept(closed: set) -> None:
        f = torsionfree_for(m, closed)
        if is_torsion_pair(m, closed, f):
            found.append(TorsionPair(Subcat(frozenset(closed), "torsion"), Subcat(frozenset(f), "torsionfree")))

    a = _closure_op(m, set())
    accept(a)
    while len(a) < n:
        for i in range(n - 1, -1, -1):
            x = ids[i]
            if x in a:
                continue
            b = _closure_op(m, {y for y in a if pos[y] < i} | {x})
            if all(pos[y] >= i for y in b - a):
                a = b
                break
        else:
            break
        accept(a)
    return sorted(found, key=_pair_sort_key)


# ---------------------------------------------------------------------------
# numerical torsion pairs and semistability


@dataclass(frozen=True)
class NumericalPairs:
    lower: TorsionPair
    upper: TorsionPair


def numerical_tp(m: CategoryModel, v: Sequence) -> NumericalPairs:
    v = DualVector(v)
    t_strict, t_weak, f_strict, f_weak = set(), set(), set(), set()
    for x in m.classes:
        q = [(c, z) for c, z, _ in m._quots[x] if not z]
        s = [(c, z) for c, z, _ in m._subs[x] if not z]
        if all(_val(v, c) > 0 for c, _ in q):
            t_strict.add(x)
        if all(_val(v, c) >= 0 for c, _ in q):
            t_weak.add(x)
        if all(_val(v, c) < 0 for c, _ in s):
            f_strict.add(x)
        if all(_val(v, c) <= 0 for c, _ in s):
            f_weak.add(x)
    lower = TorsionPair(Subcat(frozenset(t_strict), "torsion"), Subcat(frozenset(f_weak), "torsionfree"))
    upper = TorsionPair(Subcat(frozenset(t_weak), "torsion"), Subcat(frozenset(f_strict), "torsionfree"))
    return NumericalPairs(lower, upper)


@dataclass(frozen=True)
class SemistableSet:
    subcat: Subcat
    stable: dict

    @property
    def ids(self) -> frozenset:
        return self.subcat.ids


def semistable(m: CategoryModel, v: Sequence) -> SemistableSet:
    v = DualVector(v)
    ss, stable = set(), {}
    for x in m.classes:
        if _val(v, m.classes[x]) != 0:
            continue
        if any(_val(v, c) > 0 for c, _, _ in m._subs[x]):
            continue
        ss.add(x)
        stable[x] = not any(not z and not w and _val(v, c) == 0 for c, z, w in m._subs[x])
    return SemistableSet(Subcat(frozenset(ss), "wide"), stable)


# ---------------------------------------------------------------------------
# Serre subcategories


def is_serre(m: CategoryModel, ids: set) -> bool:
    for s in m.ses:
        inside = s.sub_ids() | s.quot_ids()
        if s.mid in ids and not inside <= ids:
            return False
        if s.mid not in ids and inside <= ids:
            return False
    return True


def effective_cone(m: CategoryModel):
    from .cones import IntCone

    return IntCone(m.rank, [tuple(c) for c in m.classes.values()])


def face_subcats(m: CategoryModel) -> list:
    from .cones import faces
    from .errors import InvariantError

    out = []
    for node in faces(effective_cone(m)).nodes:
        ids = frozenset(x for x, c in m.classes.items() if node.real.contains(c))
        if not is_serre(m, set(ids)):
            raise InvariantError(f"face subcategory {sorted(ids)} is not Serre")
        out.append((node.cone, Subcat(ids, "serre")))
    return out


def null_subcat(m: CategoryModel) -> Subcat:
    """Indecomposables of class 0, plus any null direct sums recorded in the dataset metadata."""
    ids = frozenset(x for x, c in m.classes.items() if not any(c))
    sums = []
    for entry in m.metadata.get("null_sums", []):
        total = [0] * m.rank
        for x in entry:
            total = [a + b for a, b in zip(total, m.cls(x))]
        if any(total):
            raise DatasetError(f"null sum {entry} has class {tuple(total)}")
        sums.append(tuple(entry))
    return Subcat(ids, "serre", tuple(sums))


def restrict(m: CategoryModel, ids: Iterable[str]) -> CategoryModel:
    """The full subcategory on `ids`, keeping sequences that live entirely inside it."""
    keep = set(ids)
    ses = tuple(s for s in m.ses if s.mid in keep and (s.sub_ids() | s.quot_ids()) <= keep)
    mids = {s.mid for s in ses}
    return CategoryModel(
        name=f"{m.name}|restricted",
        rank=m.rank,
        simples=tuple(sorted(x for x in keep if x not in mids)),
        classes={x: m.classes[x] for x in sorted(keep)},
        ses=ses,
        hom=frozenset((a, b) for a, b in m.hom if a in keep and b in keep),
        metadata={},
    )
