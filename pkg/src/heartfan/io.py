"""JSON documents for fans and cofans, with canonical, byte-stable ordering."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .cones import IntCone, RatCone
from .errors import DatasetError
from .fans import Cofan, Fan, cone_sort_key

FORMAT = "heartfan-fan/1"


def _jsonable(x):
    """Normalize to JSON-native values so that documents compare equal after a round trip."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float):
        raise TypeError("floating point values are not serialized")
    return x


@dataclass
class ConeEntry:
    rays: list
    lineality: list
    tags: dict = field(default_factory=dict)


@dataclass
class FanDocument:
    rank: int
    cones: list
    faces: list
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "rank": self.rank,
            "cones": [{"rays": c.rays, "lineality": c.lineality, "tags": c.tags} for c in self.cones],
            "faces": self.faces,
            "metadata": self.metadata,
        }


def fan_document(fan: Fan) -> FanDocument:
    cones = fan.sorted()
    entries = [
        ConeEntry(
            rays=[list(r) for r in c.rays],
            lineality=[list(v) for v in c.lineality],
            tags=_jsonable(fan.tag(c)),
        )
        for c in cones
    ]
    return FanDocument(fan.rank, entries, [list(e) for e in fan.face_edges()], _jsonable(fan.metadata))


def serialize(doc: FanDocument) -> str:
    return json.dumps(doc.to_json(), indent=1, sort_keys=True) + "\n"


def _ints(rows, rank: int, what: str) -> list:
    out = []
    for r in rows:
        if not isinstance(r, list) or len(r) != rank or any(isinstance(a, bool) or not isinstance(a, int) for a in r):
            raise DatasetError(f"{what}: expected integer vectors of length {rank}")
        out.append(list(r))
    return out


def parse(text: str) -> FanDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DatasetError(f"not a JSON document: {e}") from e
    if not isinstance(raw, dict) or raw.get("format") != FORMAT:
        raise DatasetError(f"not a {FORMAT} document")
    rank = raw.get("rank")
    if isinstance(rank, bool) or not isinstance(rank, int) or rank < 0:
        raise DatasetError("rank must be a non-negative integer")
    cones = []
    for i, c in enumerate(raw.get("cones", [])):
        if not isinstance(c, dict):
            raise DatasetError(f"cone {i} is not an object")
        cones.append(
            ConeEntry(
                rays=_ints(c.get("rays", []), rank, f"cone {i} rays"),
                lineality=_ints(c.get("lineality", []), rank, f"cone {i} lineality"),
                tags=dict(c.get("tags", {})),
            )
        )
    faces = raw.get("faces", [])
    if not all(isinstance(e, list) and len(e) == 2 and all(isinstance(a, int) for a in e) for e in faces):
        raise DatasetError("faces must be index pairs")
    return FanDocument(rank, cones, [list(e) for e in faces], dict(raw.get("metadata", {})))


def to_fan(doc: FanDocument, close: bool = False) -> Fan:
    cones = [RatCone.generated(doc.rank, c.rays, c.lineality) for c in doc.cones]
    tags = {c.key: e.tags for c, e in zip(cones, doc.cones)}
    return Fan.from_cones(doc.rank, cones, tags=tags, metadata=doc.metadata, close=close)


def read_document(path) -> FanDocument:
    return parse(Path(path).read_text())


def cofan_document(c: Cofan) -> dict:
    maximal = {m.key for m in c.maximal}
    rows = []
    for s in c:
        entry = {"hull_rays": [list(r) for r in s.hull.rays], "hull_lineality": [list(v) for v in s.hull.lineality]}
        if isinstance(s, IntCone):
            entry["generators"] = [list(g) for g in s.hilbert_basis()]
            entry["units"] = [list(u) for u in s.units]
            entry["atoms"] = [list(a) for a in s.atoms]
        else:
            entry["predicate"] = repr(s)
        entry["maximal"] = s.key in maximal
        rows.append((cone_sort_key(s.hull), entry))
    rows.sort(key=lambda t: (t[0], json.dumps(t[1], sort_keys=True)))
    return {"format": "heartfan-cofan/1", "rank": c.rank, "cones": [e for _, e in rows]}
