from __future__ import annotations

import copy
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heartfan.category import (
    dataset_path,
    face_subcats,
    is_torsion_pair,
    load_dataset,
    load_model,
    null_subcat,
    numerical_tp,
    quotient_classes,
    semistable,
    sub_classes,
    torsion_pairs,
)
from heartfan.cones import RatCone
from heartfan.errors import AdditivityError, DatasetError

from oracles import brute_torsion_pairs, pair

DATASETS = ["a2", "semisimple2", "tube2_d4", "kronecker2_d5", "kronecker3_d5", "mixed_p1"]
A2 = load_dataset("a2")


def raw(name: str) -> dict:
    return json.loads(dataset_path(name).read_text())


def pairs_as_sets(m):
    return {(tp.torsion.ids, tp.torsionfree.ids) for tp in torsion_pairs(m)}


def rationals():
    return st.fractions(min_value=-20, max_value=20, max_denominator=7)


# --- loading --------------------------------------------------------------


def test_load_examples():
    assert len(A2.classes) == 3 and len(A2.ses) == 1
    tube = load_dataset("tube2_d4")
    assert tube.rank == 2 and tube.approximate
    assert load_model(json.dumps(raw("a2"))).ids == A2.ids


def test_additivity_failure_names_entry():
    doc = raw("a2")
    doc["indecs"]["E"]["class"] = [1, 0]
    with pytest.raises(AdditivityError, match=r"ses\[0\]"):
        load_model(doc)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d["ses"][0].update(mid="X"),
        lambda d: d["hom"].append(["S1", "X"]),
        lambda d: d["ses"][0].update(sub=["X"]),
        lambda d: d.pop("hom"),
        lambda d: d["indecs"]["S1"].update({"class": [1.0, 0]}),
        lambda d: d["hom"].remove(["E", "E"]),
        lambda d: d.update(simples=["S1", "S2", "E"]),
    ],
)
def test_schema_errors(mutate):
    doc = copy.deepcopy(raw("a2"))
    mutate(doc)
    with pytest.raises(DatasetError):
        load_model(doc)


def test_unknown_dataset():
    with pytest.raises(DatasetError):
        load_dataset("no_such_dataset")


# --- sub and quotient classes ---------------------------------------------


def test_sub_and_quotient_classes():
    assert quotient_classes(A2, "E") == {(0, 0), (1, 1), (0, 1)}
    assert sub_classes(A2, "E") == {(0, 0), (1, 1), (1, 0)}
    assert sub_classes(A2, "S1") == {(0, 0), (1, 0)}


# --- torsion pairs --------------------------------------------------------


def test_a2_torsion_pairs():
    expected = {
        (frozenset({"S1", "S2", "E"}), frozenset()),
        (frozenset({"E", "S2"}), frozenset({"S1"})),
        (frozenset({"S2"}), frozenset({"S1", "E"})),
        (frozenset(), frozenset({"S1", "S2", "E"})),
        (frozenset({"S1"}), frozenset({"S2"})),
    }
    assert pairs_as_sets(A2) == expected


@pytest.mark.parametrize("name, count", [("a2", 5), ("semisimple2", 4), ("tube2_d4", 6), ("kronecker2_d5", 14)])
def test_torsion_pair_counts(name, count):
    assert len(torsion_pairs(load_dataset(name))) == count


@pytest.mark.parametrize("name", DATASETS)
def test_torsion_pairs_match_brute_force(name):
    m = load_dataset(name)
    assert pairs_as_sets(m) == set(brute_torsion_pairs(m))


@pytest.mark.parametrize("name", DATASETS)
def test_every_object_decomposes(name):
    m = load_dataset(name)
    for tp in torsion_pairs(m):
        t, f = set(tp.torsion.ids), set(tp.torsionfree.ids)
        assert is_torsion_pair(m, t, f)
        for x in m.ids:
            assert x in t or x in f or any(s.sub_ids() <= t and s.quot_ids() <= f for s in m.ses_for(x))


@pytest.mark.parametrize("name", ["a2", "tube2_d4", "kronecker2_d5"])
def test_torsion_pairs_ignore_dataset_order(name):
    doc = raw(name)
    rng = random.Random(name)
    items = list(doc["indecs"].items())
    rng.shuffle(items)
    doc["indecs"] = dict(items)
    rng.shuffle(doc["ses"])
    rng.shuffle(doc["hom"])
    shuffled = load_model(doc)
    original = load_dataset(name)
    assert [tp.label for tp in torsion_pairs(shuffled)] == [tp.label for tp in torsion_pairs(original)]


# --- numerical torsion pairs and semistables ------------------------------


def test_numerical_tp_examples():
    np = numerical_tp(A2, (2, 1))
    assert np.lower.torsion.ids == np.upper.torsion.ids == {"S1", "S2", "E"}
    assert not np.lower.torsionfree.ids and not np.upper.torsionfree.ids
    np = numerical_tp(A2, (-1, 1))
    assert np.lower.torsion.ids == {"S2"}
    assert np.upper.torsion.ids == {"S2", "E"}
    np = numerical_tp(A2, (0, 0))
    assert not np.lower.torsion.ids
    assert np.upper.torsion.ids == {"S1", "S2", "E"}


def test_semistable_examples():
    s = semistable(A2, (-1, 1))
    assert s.ids == {"E"} and s.stable["E"]
    assert not semistable(A2, (1, -1)).ids
    s = semistable(A2, (0, 1))
    assert s.ids == {"S1"} and s.stable["S1"]


def test_semistable_by_definition():
    # v-semistable: v vanishes on the class and is non-positive on every subobject
    rng = random.Random(5)
    for name in ("a2", "tube2_d4", "kronecker2_d5"):
        m = load_dataset(name)
        for _ in range(100):
            v = (Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-4, 4)))
            expect = {
                x for x in m.ids if pair(v, m.classes[x]) == 0 and all(pair(v, c) <= 0 for c in sub_classes(m, x))
            }
            assert semistable(m, v).ids == expect


@settings(max_examples=500, deadline=None)
@given(st.sampled_from(["a2", "tube2_d4", "kronecker2_d5"]), rationals(), rationals())
def test_numerical_pairs_nest(name, a, b):
    m = load_dataset(name)
    np = numerical_tp(m, (a, b))
    assert np.lower.torsion.ids <= np.upper.torsion.ids
    assert np.upper.torsionfree.ids <= np.lower.torsionfree.ids
    assert semistable(m, (a, b)).ids == np.upper.torsion.ids & np.lower.torsionfree.ids


# --- faces and null objects -----------------------------------------------


def test_face_subcats_a2():
    got = {f.hull.key: s.ids for f, s in face_subcats(A2)}
    q = RatCone.generated(2, [(1, 0), (0, 1)])
    assert got == {
        RatCone.zero(2).key: frozenset(),
        RatCone.generated(2, [(1, 0)]).key: {"S1"},
        RatCone.generated(2, [(0, 1)]).key: {"S2"},
        q.key: {"S1", "S2", "E"},
    }


def test_face_subcats_semisimple():
    subs = sorted(sorted(s.ids) for _, s in face_subcats(load_dataset("semisimple2")))
    assert subs == [[], ["S1"], ["S1", "S2"], ["S2"]]


def test_null_objects_lie_in_every_face():
    doc = raw("a2")
    doc["indecs"]["Z"] = {"class": [0, 0]}
    doc["hom"].append(["Z", "Z"])
    m = load_model(doc)
    assert null_subcat(m).ids == {"Z"}
    assert all("Z" in s for _, s in face_subcats(m))


def test_null_subcat_examples():
    assert not null_subcat(A2).ids
    mixed = null_subcat(load_dataset("mixed_p1"))
    assert not mixed.ids
    assert mixed.sums == (("O_p", "O_q_shift"),)


def test_null_sum_must_vanish():
    doc = raw("mixed_p1")
    doc["metadata"]["null_sums"] = [["O_p"]]
    with pytest.raises(DatasetError):
        null_subcat(load_model(doc))
