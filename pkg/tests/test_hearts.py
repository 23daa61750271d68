from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product

import pytest

from heartfan.category import (
    Subcat,
    TorsionPair,
    load_dataset,
    make_pair,
    restrict,
    semistable,
    torsion_pairs,
)
from heartfan.cones import RatCone, cone_props
from heartfan.errors import ChargeError, InvariantError, SupportError
from heartfan.fans import Fan, check_fan, in_support
from heartfan.hearts import (
    distinguished_kernel_pair,
    g_vectors,
    heart_cofan,
    heart_fan,
    hearts_containing,
    interior_point,
    phase_slice,
    stability_fan,
    stability_space,
    thick_label,
    tilt,
    tilted_hearts,
    virtual_gfan,
    walls_and_chambers,
)
from heartfan.linalg import det

from oracles import pair

A2 = load_dataset("a2")
LENGTH = ["a2", "semisimple2", "tube2_d4"]
ALL = LENGTH + ["kronecker2_d5", "kronecker3_d5"]


def rc(*rays, lineality=()):
    return RatCone.generated(len(rays[0]) if rays else len(lineality[0]), rays, lineality)


def random_v(rng):
    return (Fraction(rng.randint(-60, 60), rng.randint(1, 7)), Fraction(rng.randint(-60, 60), rng.randint(1, 7)))


# --- tilting --------------------------------------------------------------


def test_tilt_a2_k1():
    h = tilt(A2, make_pair(A2, {"E", "S2"}))
    assert set(h.eff.generators) == {(1, 1), (0, 1), (-1, 0)}
    assert h.heart_cone == rc((-1, 1), (0, 1))
    assert h.algebraic
    assert h.objects == ["E", "S2", "S1[1]"]


def test_tilt_a2_standard_and_shift():
    top = tilt(A2, make_pair(A2, set(A2.ids)))
    assert top.heart_cone == rc((1, 0), (0, 1)) and top.label == "H"
    bottom = tilt(A2, make_pair(A2, set()))
    assert bottom.heart_cone == rc((-1, 0), (0, -1)) and bottom.label == "H[1]"


def test_tilt_kronecker_k2():
    k = load_dataset("kronecker2_d5")
    hearts = {frozenset(h.pair.torsionfree.ids): h for h in tilted_hearts(k)}
    assert hearts[frozenset({"P1", "P2"})].heart_cone == rc((-1, 2), (-2, 3))


def test_tilt_rejects_non_pairs():
    bad = TorsionPair(Subcat(frozenset({"E"})), Subcat(frozenset({"S1", "S2"})))
    with pytest.raises(InvariantError):
        tilt(A2, bad)
    with pytest.raises(InvariantError):
        tilt(A2, TorsionPair(Subcat(frozenset({"X"})), Subcat(frozenset())))


# --- cofans and fans ------------------------------------------------------


@pytest.mark.parametrize("name, hearts, fan", [("a2", 5, 11), ("semisimple2", 4, 9), ("tube2_d4", 6, 13)])
def test_heart_counts(name, hearts, fan):
    m = load_dataset(name)
    c = heart_cofan(m)
    assert len(tilted_hearts(m)) == hearts
    assert {h.eff for h in tilted_hearts(m)} <= set(c)
    f = heart_fan(m)
    assert len(f) == fan
    assert len(f.full_cones()) == hearts


@pytest.mark.parametrize("name", ALL)
def test_heart_fans_are_fans(name):
    assert check_fan(heart_fan(load_dataset(name))).ok


@pytest.mark.parametrize("name", ALL)
def test_full_iff_smooth_and_full(name):
    for h in tilted_hearts(load_dataset(name)):
        if h.truncated:
            continue
        p = cone_props(h.eff)
        assert h.heart_cone.is_full == (p.is_full and p.is_smooth) == h.algebraic


@pytest.mark.parametrize("name", LENGTH)
def test_shifted_heart_is_negated(name):
    m = load_dataset(name)
    top = tilt(m, make_pair(m, set(m.ids)))
    bottom = tilt(m, make_pair(m, set()))
    assert bottom.heart_cone == RatCone.generated(m.rank, [tuple(-a for a in r) for r in top.heart_cone.rays])


@pytest.mark.parametrize("name", LENGTH)
def test_distinct_hearts_have_distinct_cones(name):
    hearts = [h for h in tilted_hearts(load_dataset(name)) if h.algebraic]
    for a, b in combinations(hearts, 2):
        assert a.heart_cone != b.heart_cone


# --- g-vectors ------------------------------------------------------------


def test_gfan_a2():
    g = virtual_gfan(A2)
    assert len(g.full_cones()) == 5
    k1 = rc((-1, 1), (0, 1))
    assert g.tag(k1)["g_vectors"] == [(-1, 1), (0, 1)]
    for c in g.full_cones():
        tag = g.tag(c)
        assert abs(det([list(r) for r in tag["g_vectors"]])) == 1
        assert all(pair(gv, cv) == (1 if i == j else 0) for i, gv in enumerate(g_vectors(tag["c_vectors"])) for j, cv in enumerate(tag["c_vectors"]))
    assert check_fan(g).ok


def test_gfan_three_kronecker_rays():
    g = virtual_gfan(load_dataset("kronecker3_d5"))
    rays = {r for c in g.full_cones() for r in c.rays}
    # consecutive terms of 0, 1, 3, 8, 21, 55 give the postprojective rays
    seq = [0, 1, 3, 8, 21, 55]
    for a, b in zip(seq, seq[1:]):
        assert (-b, a) in rays or a == 0


# --- stability spaces and walls -------------------------------------------


def test_stability_space_examples():
    assert stability_space(A2, "E") == rc((-1, 1))
    assert stability_space(A2, "S1") == rc(lineality=[(0, 1)])
    assert stability_space(A2, "S2") == rc(lineality=[(1, 0)])


@pytest.mark.parametrize("name", ["a2", "tube2_d4", "kronecker2_d5"])
def test_stability_space_matches_grid(name):
    m = load_dataset(name)
    spaces = {x: stability_space(m, x) for x in m.ids}
    for v in product(range(-4, 5), repeat=2):
        ss = semistable(m, v).ids
        for x, d in spaces.items():
            assert d.contains(v) == (x in ss)


def test_walls_and_chambers_semisimple():
    r = walls_and_chambers(load_dataset("semisimple2"))
    assert len(r.chambers) == 4
    assert len(r.geometric_walls) == 2
    assert r.stability_support["nonempty_semistable"] == 0


def test_walls_and_chambers_three_kronecker():
    m = load_dataset("kronecker3_d5")
    r = walls_and_chambers(m)
    assert r.truncated
    assert {c.key for _, c in r.chambers} == {c.key for c in virtual_gfan(m).full_cones()}


# --- stability fan --------------------------------------------------------


def test_stability_fan_examples():
    f = stability_fan(A2)
    assert {c.key for c in f.sorted()} == {
        RatCone.zero(2).key,
        *(rc(r).key for r in [(1, 0), (0, 1), (-1, 0), (0, -1), (-1, 1)]),
    }
    semi = stability_fan(load_dataset("semisimple2"))
    assert {c.key for c in semi.sorted()} == {RatCone.zero(2).key, *(rc(r).key for r in [(1, 0), (0, 1), (-1, 0), (0, -1)])}


def test_stability_fan_three_kronecker_is_rational_and_flagged():
    f = stability_fan(load_dataset("kronecker3_d5"))
    assert f.metadata["truncated"]
    assert any(f.tag(c).get("truncated") for c in f.sorted())
    assert all(isinstance(a, int) for c in f.sorted() for r in c.rays for a in r)


@pytest.mark.parametrize("name", LENGTH)
def test_stability_fan_plus_chambers_is_heart_fan(name):
    m = load_dataset(name)
    sf, hf = stability_fan(m), heart_fan(m)
    chambers = [h.heart_cone for h in tilted_hearts(m) if h.heart_cone.is_full]
    rng = random.Random(name)
    for _ in range(300):
        v = random_v(rng)
        inside = in_support(sf, v) or any(c.in_relint(v) for c in chambers)
        assert inside == in_support(hf, v)
    # stability fan support is the union of the stability spaces
    for _ in range(300):
        v = random_v(rng)
        assert in_support(sf, v) == any(stability_space(m, x).contains(v) for x in m.ids)


# --- kernel pairs and hearts containing a point ---------------------------


def test_hearts_containing_examples():
    assert len(hearts_containing(A2, (-1, 1))) == 2
    (only,) = hearts_containing(A2, (2, 1))
    assert only.label == "H"
    assert len(hearts_containing(A2, (0, 0))) == 5


@pytest.mark.parametrize("name", LENGTH)
def test_hearts_containing_count_bijection(name):
    m = load_dataset(name)
    rng = random.Random(name)
    for _ in range(100):
        v = (Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3)))
        ss = semistable(m, v).ids
        expected = len(torsion_pairs(restrict(m, ss))) if ss else 1
        assert len(hearts_containing(m, v)) == expected


def test_distinguished_kernel_pair_examples():
    kp = distinguished_kernel_pair(A2, (-1, 1))
    assert kp.heart.pair.torsion.ids == {"S2", "E"} and kp.heart.pair.torsionfree.ids == {"S1"}
    assert kp.kernel.ids == {"E"}
    kp = distinguished_kernel_pair(A2, (2, 1))
    assert kp.heart.label == "H" and not kp.kernel.ids
    kp = distinguished_kernel_pair(A2, (0, 1))
    assert kp.heart.label == "H" and kp.kernel.ids == {"S1"}


@pytest.mark.parametrize("name", LENGTH)
def test_distinguished_heart_is_minimal(name):
    m = load_dataset(name)
    rng = random.Random(name)
    for _ in range(100):
        v = (Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3)))
        kp = distinguished_kernel_pair(m, v)
        assert kp.heart.heart_cone.contains(v)
        for other in hearts_containing(m, v):
            assert kp.heart.pair.torsionfree.ids <= other.pair.torsionfree.ids


def test_thick_label_examples(monkeypatch):
    assert thick_label(A2, (-1, 1)).ids == {"E"}
    assert not thick_label(A2, (2, 1)).ids
    kp = distinguished_kernel_pair(A2, (0, -1))
    assert kp.kernel.ids == {"S1"}
    assert kp.heart.pair.torsion.ids == {"S1"} and kp.heart.objects == ["S1", "S2[1]"]
    import heartfan.hearts as hearts_mod

    quadrant = Fan.from_cones(2, [rc((1, 0), (0, 1))])
    monkeypatch.setattr(hearts_mod, "heart_fan", lambda m: quadrant)
    assert not thick_label(A2, (2, 1)).ids
    with pytest.raises(SupportError):
        thick_label(A2, (-1, 1))


# --- phase slices ---------------------------------------------------------


def test_phase_slice_a2():
    ps = phase_slice(A2, [[-1, 0], [0, 1]])
    assert {p: sorted(s.ids) for p, s in ps.by_phase().items()} == {
        Fraction(1, 2): ["S2"],
        Fraction(3, 4): ["E"],
        Fraction(1): ["S1"],
    }
    other = phase_slice(A2, [[-1, 0], [0, 1]], orientation="counterclockwise")
    assert {p: sorted(s.ids) for p, s in other.by_phase().items()} == {Fraction(1, 2): ["S2"], Fraction(1): ["S1"]}


def test_phase_slice_aligned():
    assert phase_slice(A2, [[0, 0], [1, 1]]).by_phase() == {Fraction(1, 2): Subcat(frozenset(A2.ids))}
    semi = load_dataset("semisimple2")
    assert phase_slice(semi, [[-1, -1], [0, 0]]).by_phase() == {Fraction(1): Subcat(frozenset(semi.ids))}


def test_phase_slice_entries_are_semistable_at_witness():
    ps = phase_slice(load_dataset("kronecker2_d5"), [[-1, 1], [1, 1]])
    for e in ps.entries:
        assert semistable(load_dataset("kronecker2_d5"), e.witness).subcat == e.subcat
        assert thick_label(load_dataset("kronecker2_d5"), e.witness) == e.subcat


def test_phase_slice_rejects_bad_charges():
    with pytest.raises(ChargeError, match="S1"):
        phase_slice(A2, [[1, 0], [0, 1]])
    with pytest.raises(ChargeError):
        phase_slice(A2, [[0.5, 0], [0, 1]])
    with pytest.raises(ChargeError):
        phase_slice(A2, [[1, 0, 0], [0, 1, 0]])


def test_interior_point_is_interior():
    rng = random.Random(1)
    for c in heart_fan(A2).full_cones():
        for _ in range(10):
            assert c.in_relint(interior_point(c, rng))


def test_null_fixture_is_not_a_length_model():
    from heartfan.errors import ConsistencyError

    with pytest.raises(ConsistencyError):
        heart_fan(load_dataset("mixed_p1"))
