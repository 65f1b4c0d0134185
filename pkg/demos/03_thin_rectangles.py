"""Thin rectangles [0,L] x [0,2] and their group of words.

Viewed from the side, a tiling of a thin cylinder is a diagram of cycles
around jewels (the dominoes parallel to the short side). Reading the jewels
in order, each contributes a generator a_i raised to its colour, with i its
winding number. The words live in a group where a_i and a_j commute exactly
when (i, j) lies in R_L.
"""

from cyltile.duplex import (
    boxed_tiling,
    build_diagram,
    compute_RL,
    format_diagram,
    format_word,
    phi_normal,
    raag_equal,
)
from cyltile.flipdyn import stable_equivalent

for L in (3, 4, 5, 6):
    print(f"R_{L} = {sorted(compute_RL(L))}")

t = boxed_tiling(5, 2)
print("\nboxed tiling for a_2 on [0,5] x [0,2], height", t.height)
print(format_diagram(build_diagram(t)))
print("word:", format_word(phi_normal(t)))

a, b = boxed_tiling(3, 1), boxed_tiling(3, -1)
comm = phi_normal(a * b * ~a * ~b)
print("\nL = 3: the commutator of a_1 and a_-1 reduces to", format_word(comm), "(nontrivial, the group is free)")

# at L = 6 the generators a_1 and a_2 commute, and so do the tilings
t1, t2 = boxed_tiling(6, 1, 0), boxed_tiling(6, 2, 1)
print("\nL = 6: a1 a2 == a2 a1 in the group:", raag_equal(phi_normal(t1 * t2), phi_normal(t2 * t1), 6))
v = stable_equivalent(t1 * t2, t2 * t1, max_pad=0, budget=100_000)
print(f"the tilings t1*t2 and t2*t1: {v.kind} after {v.explored} nodes")
