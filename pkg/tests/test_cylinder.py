import random

import pytest
from oracles import all_cube_tilings, tiling_cubes

from cyltile import gallery
from cyltile.board import enumerate_plugs, parse_disk, rectangle, spanning_tree
from cyltile.cylinder import (
    BudgetExceeded,
    TilingError,
    Tiling3D,
    concat_all,
    count_tilings,
    enumerate_tilings,
    format_tiling,
    invert,
    parse_tiling,
    sample_tiling,
    tiling_from_plug,
    vertical_tiling,
)
from cyltile.floorplan import Floor


@pytest.mark.parametrize(
    "w,h,n",
    [(2, 2, 1), (2, 2, 2), (2, 2, 3), (3, 2, 2), (3, 2, 4), (4, 2, 2), (2, 2, 4)],
)
def test_counts_match_brute_force(w, h, n):
    d = rectangle(w, h)
    ref = set(all_cube_tilings(d.squares, n))
    assert count_tilings(d, n) == len(ref)
    got = {tiling_cubes(t) for t in enumerate_tilings(d, n)}
    assert got == ref


def test_small_counts():
    assert count_tilings(rectangle(2, 2), 2) == 9
    assert count_tilings(rectangle(3, 2), 2) == 32
    assert count_tilings(rectangle(3, 2), 4) == 1845


def test_gallery_counts():
    # values frozen from the brute-force enumerator in tests/oracles.py
    assert count_tilings(gallery.example_disk("nonreg-f2"), 2) == len(
        all_cube_tilings(gallery.example_disk("nonreg-f2").squares, 2)
    )
    assert count_tilings(gallery.example_disk("nonreg-z2"), 2) == 25


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_tilings(rectangle(4, 4), 2, budget=100))


def test_every_tiling_validates():
    for t in enumerate_tilings(rectangle(3, 2), 4):
        t.validate()


def test_validation_catches_overlap():
    d = rectangle(2, 2)
    bad = Tiling3D(d, (Floor(0, ((0, 1),), 0b0110), Floor(0b0110, (), 0b1001)))
    with pytest.raises(TilingError):
        Tiling3D(d, (Floor(0, (), 0b0011), Floor(0b0011, (), 0))).validate()
    with pytest.raises(TilingError):
        bad.validate()


def test_vertical_tiling():
    d = rectangle(3, 2)
    v = vertical_tiling(d, 4)
    v.validate()
    assert v.plugs() == [0, d.full_mask, 0, d.full_mask, 0]
    with pytest.raises(TilingError):
        vertical_tiling(d, 3)


def test_concatenation_and_inversion():
    d = rectangle(3, 2)
    rng = random.Random(3)
    for _ in range(20):
        a = sample_tiling(d, 2, rng)
        b = sample_tiling(d, 4, rng)
        c = a * b
        c.validate()
        assert c.height == 6
        assert invert(invert(c)) == c
        assert invert(c) == invert(b) * invert(a)
        invert(c).validate()


def test_concat_rejects_mismatch():
    d = rectangle(3, 2)
    t = tiling_from_plug(d, enumerate_plugs(d)[5], spanning_tree(d))
    with pytest.raises(TilingError):
        t * t


def test_sampler_is_deterministic():
    d = rectangle(3, 2)
    assert sample_tiling(d, 4, 11) == sample_tiling(d, 4, 11)


def test_sampler_reaches_everything():
    d = rectangle(2, 2)
    rng = random.Random(0)
    seen = {sample_tiling(d, 2, rng).key() for _ in range(400)}
    assert len(seen) == 9


@pytest.mark.parametrize("name", ["thin3", "squrdisc-tshape", "dominodisc-thin5", "nonreg-z2"])
def test_plug_tilings(name):
    d = gallery.example_disk(name)
    tree = spanning_tree(d)
    plugs = enumerate_plugs(d)
    rng = random.Random(5)
    for p in rng.sample(plugs, min(40, len(plugs))):
        t = tiling_from_plug(d, p, tree)
        t.validate()
        assert t.start_plug == p and t.end_plug == 0
        assert t.height % 2 == 0
        for f in t.floors:
            assert all(dom in tree.edges for dom in f.fstar)


def test_empty_plug_tiling_is_empty():
    d = rectangle(3, 2)
    assert tiling_from_plug(d, 0, spanning_tree(d)).height == 0


def test_text_roundtrip():
    d = gallery.t_shape()
    for seed in range(10):
        t = sample_tiling(d, 4, seed)
        # the parsed disk is a translate, so compare floors and text
        u = parse_tiling(format_tiling(t))
        assert u.floors == t.floors and format_tiling(u) == format_tiling(t)


def test_text_roundtrip_corks():
    d = rectangle(3, 2)
    tree = spanning_tree(d)
    for p in enumerate_plugs(d)[1:]:
        t = tiling_from_plug(d, p, tree)
        u = parse_tiling(format_tiling(t))
        assert u == t


def test_text_roundtrip_parity():
    d = gallery.example_disk("nonreg-z2")
    t = sample_tiling(d, 4, 2)
    assert parse_tiling(format_tiling(t), d.parity) == t


def test_concat_all():
    d = parse_disk("##\n##\n")
    v = vertical_tiling(d, 2)
    assert concat_all(v, v, v) == vertical_tiling(d, 6)
