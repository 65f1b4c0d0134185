import random
from itertools import product

import pytest

from cyltile import gallery
from cyltile.board import rectangle
from cyltile.cylinder import enumerate_tilings, invert, sample_tiling, vertical_tiling
from cyltile.duplex import (
    boxed_tiling,
    build_diagram,
    commute,
    compute_RL,
    f2_projection,
    format_word,
    generators,
    phi_normal,
    phi_thin,
    raag_equal,
    raag_inverse,
    raag_normal_form,
    raag_normal_form_bfs,
    tiling_from_diagram,
)
from cyltile.flipdyn import flip_neighbors, stable_equivalent, twist


def test_RL_small():
    assert compute_RL(3) == {(0, 0)}
    r4 = {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)}
    assert compute_RL(4) == r4 == compute_RL(5)


def test_RL_brute_force():
    for L in range(3, 10):
        h = L // 2
        ref = {
            (m, n)
            for m in range(-L, L + 1)
            for n in range(-L, L + 1)
            if max(abs(m), abs(n), abs(m - n)) < h
        }
        assert compute_RL(L) == ref


def test_RL_rejects_small_L():
    with pytest.raises(ValueError):
        compute_RL(2)


def test_generators():
    assert generators(3) == [-1, 1]
    assert generators(5) == [-2, -1, 1, 2]
    assert generators(6) == [-2, -1, 1, 2]


def test_commutation_L3_is_trivial():
    assert not commute(1, -1, 3)
    assert not raag_equal(((1, 1), (-1, 1), (1, -1), (-1, -1)), (), 3)


def test_commutation_L5_L6():
    gens = generators(5)
    assert not any(commute(i, j, 5) for i in gens for j in gens if i != j)
    assert commute(1, 2, 6) and commute(-1, -2, 6) and commute(1, -1, 6)
    assert not commute(2, -2, 6) and not commute(1, -2, 6)


def _words(L, n):
    letters = [(i, e) for i in generators(L) for e in (1, -1)]
    for k in range(n + 1):
        yield from product(letters, repeat=k)


@pytest.mark.parametrize("L", [3, 4, 5])
def test_normal_form_matches_bfs_short(L):
    for w in _words(L, 4):
        assert raag_normal_form(w, L) == raag_normal_form_bfs(w, L)


def test_normal_form_inverse():
    rng = random.Random(0)
    L = 7
    letters = [(i, e) for i in generators(L) for e in (1, -1)]
    for _ in range(200):
        w = tuple(rng.choice(letters) for _ in range(rng.randrange(9)))
        assert raag_normal_form(w + raag_inverse(w), L) == ()


def test_word_format():
    assert format_word(()) == "e"
    assert format_word(((1, 1), (-2, -1))) == "a1 a-2^-1"


def test_f2_projection():
    assert f2_projection(((1, 1), (-1, 1), (1, -1)), 3) == "abA"
    assert f2_projection(((1, 1), (-1, 1), (1, -1)), 5) == ""
    assert f2_projection(((2, 1), (1, 1), (2, -1)), 5) == ""


@pytest.mark.parametrize("L", [3, 4, 5, 6, 7])
def test_boxed_tilings_map_to_generators(L):
    for i in generators(L):
        t = boxed_tiling(L, i)
        assert t.height == 2 * abs(i) + 2
        assert phi_thin(t) == ((i, 1),)


def test_boxed_inverse():
    t = boxed_tiling(5, 2)
    assert phi_normal(invert(t)) == ((2, -1),)


def test_boxed_twist():
    # the twist on thin rectangles is the sum of the windings
    assert twist(boxed_tiling(3, 1)) == twist(gallery.box_tiling(1)) == 1
    assert twist(boxed_tiling(5, 2)) == 2 * twist(boxed_tiling(5, 1))


def test_boxed_rejects_bad_index():
    with pytest.raises(ValueError):
        boxed_tiling(3, 2)
    with pytest.raises(ValueError):
        boxed_tiling(3, 0)


def test_vertical_is_trivial():
    for L in (3, 4, 5):
        assert phi_thin(vertical_tiling(rectangle(L, 2), 4)) == ()


def test_diagram_roundtrip():
    for L in (3, 4):
        for t in enumerate_tilings(rectangle(L, 2), 2):
            assert tiling_from_diagram(build_diagram(t)) == t


def test_diagram_cycles_cover():
    t = sample_tiling(rectangle(5, 2), 6, 4)
    diag = build_diagram(t)
    covered = {s for cyc in diag.cycles() for s in cyc} | set(diag.jewel_squares)
    assert len(covered) == diag.N * diag.L


def test_phi_flip_invariant_thin4_height2():
    d = rectangle(4, 2)
    for t in enumerate_tilings(d, 2):
        w = phi_normal(t)
        assert all(phi_normal(u) == w for u in flip_neighbors(t))


def test_phi_multiplicative():
    d = rectangle(5, 2)
    rng = random.Random(2)
    for _ in range(20):
        a = sample_tiling(d, 4, rng)
        b = sample_tiling(d, 2, rng)
        assert raag_equal(phi_thin(a * b), phi_thin(a) + phi_thin(b), 5)


def test_phi_of_t_inverse_t_is_trivial():
    d = rectangle(4, 2)
    t = sample_tiling(d, 4, 9)
    assert phi_normal(t * invert(t)) == ()
    assert stable_equivalent(t * invert(t), vertical_tiling(d, 2))


def test_kernel_tiling():
    # a box tiling placed in the left half of the 7x2 rectangle: twist 1, trivial word
    d = rectangle(7, 2)
    t = gallery.embed(d, gallery.box_tiling(1))
    assert twist(t) == 1
    assert f2_projection(phi_thin(t), 7) == ""


def test_boxed_commutation_L6():
    # a1 and a2 commute for L = 6; the commuting positions of the boxes matter
    t1 = boxed_tiling(6, 1, 0)
    t2 = boxed_tiling(6, 2, 1)
    assert raag_equal(phi_thin(t1 * t2), phi_thin(t2 * t1), 6)
    v = stable_equivalent(t1 * t2, t2 * t1, max_pad=0, budget=50_000)
    assert v.kind == "equivalent"
