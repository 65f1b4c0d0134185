from math import comb

import pytest
from oracles import balanced_subsets

from cyltile.board import (
    Disk,
    DiskError,
    complement,
    components,
    enumerate_plugs,
    format_disk,
    format_plug,
    is_balanced_mask,
    is_trivial,
    parse_disk,
    parse_plug,
    plug_count,
    read_disk_file,
    rectangle,
    spanning_tree,
)
from cyltile import gallery


def test_parse_square4():
    d = parse_disk("####\n####\n####\n####\n")
    assert (len(d), d.n_white, d.n_black, d.balanced) == (16, 8, 8, True)


def test_parse_thin3():
    d = parse_disk("###\n###\n")
    assert len(d) == 6 and d.balanced
    assert d.squares == rectangle(3, 2).squares


def test_parse_tab_strip():
    d = read_disk_file("; parity: 1\n######\n.#..#.\n")
    assert len(d) == 8 and d.balanced


def test_color_convention():
    d = rectangle(2, 2)
    for i, (a, b) in enumerate(d.squares):
        assert d.is_white(i) == ((a + b) % 2 == 0)


def test_parity_flag_flips_colors():
    d0 = parse_disk("##\n")
    d1 = parse_disk("##\n", parity=1)
    assert d0.white_mask == d1.black_mask


def test_canonical_order_is_lexicographic():
    d = gallery.t_shape()
    assert list(d.squares) == sorted(d.squares)


def test_holes_rejected():
    with pytest.raises(DiskError):
        parse_disk("###\n#.#\n###\n")


def test_disconnected_rejected():
    with pytest.raises(DiskError):
        parse_disk("#.#\n")


def test_unbalanced_parses():
    d = parse_disk("###\n")
    assert not d.balanced


def test_format_roundtrip():
    d = gallery.example_disk("squrdisc-plus")
    assert parse_disk(format_disk(d), d.parity).squares == d.squares


@pytest.mark.parametrize(
    "text,expected",
    [("##\n##\n", True), ("######\n", True), ("###\n###\n", False), ("####\n####\n####\n####\n", False)],
)
def test_is_trivial(text, expected):
    assert is_trivial(parse_disk(text)) is expected


def test_plug_counts():
    assert plug_count(rectangle(4, 4)) == 12870
    assert len(enumerate_plugs(rectangle(4, 4))) == 12870
    assert len(enumerate_plugs(parse_disk("##\n"))) == 2
    assert len(enumerate_plugs(rectangle(3, 2))) == 20 == sum(comb(3, k) ** 2 for k in range(4))


@pytest.mark.parametrize("name", ["thin3", "thin4", "nonreg-z2", "nonreg-f2", "squrdisc-tshape", "dominodisc2-notch"])
def test_plugs_match_subset_scan(name):
    d = gallery.example_disk(name)
    ref = {frozenset(s) for s in balanced_subsets(d.squares, d.parity)}
    got = {frozenset(d.squares_of(p)) for p in enumerate_plugs(d)}
    assert got == ref
    w, b = d.n_white, d.n_black
    assert len(got) == sum(comb(w, k) * comb(b, k) for k in range(min(w, b) + 1))


def test_complement_involution():
    d = rectangle(3, 2)
    for p in enumerate_plugs(d):
        q = complement(d, p)
        assert complement(d, q) == p
        assert is_balanced_mask(d, q)


def test_plug_text_roundtrip():
    d = rectangle(3, 2)
    p = enumerate_plugs(d)[7]
    d2, p2 = parse_plug(format_plug(d, p))
    assert d2.squares == d.squares and p2 == p


def test_spanning_tree_square4():
    t = spanning_tree(rectangle(4, 4))
    assert len(t.edges) == 15


def test_spanning_tree_avoid():
    d = rectangle(3, 2)
    mid = d.domino((1, 0), (1, 1))
    t = spanning_tree(d, avoid=mid)
    assert len(t.edges) == 5 and mid not in t.edges
    # every square reachable through tree edges
    assert components(d, d.full_mask) == [d.full_mask]


def test_spanning_tree_avoid_disconnects():
    d = parse_disk("##\n")
    with pytest.raises(DiskError):
        spanning_tree(d, avoid=(0, 1))


def test_spanning_tree_deterministic():
    d = gallery.t_shape()
    assert spanning_tree(d).edges == spanning_tree(d).edges


def test_tree_paths_use_tree_edges():
    d = gallery.square_tail()
    t = spanning_tree(d)
    path = t.path(0, len(d) - 1)
    for a, b in zip(path, path[1:]):
        assert (min(a, b), max(a, b)) in t.edges


def test_too_many_squares():
    with pytest.raises(DiskError):
        parse_disk(("#" * 13 + "\n") * 5)


def test_from_squares_validates():
    with pytest.raises(DiskError):
        Disk.from_squares([(0, 0), (2, 0)])
