"""Flips, flip components and the twist.

A flip turns two parallel dominoes filling a 2x2x1 box by a quarter turn.
The twist is a flip invariant. On the 4x4 square at height 2 the flip graph
has isolated points, and two of them with equal twist become flip-connected
once two floors of vertical dominoes are added on top.
"""

from cyltile.cylinder import format_tiling, vertical_tiling
from cyltile.flipdyn import flip_components, flip_neighbors, stable_equivalent, twist, twist_histogram
from cyltile.gallery import box_tiling, example_disk, example_tiling

d = example_disk("square4")
rep = flip_components(d, 2, representatives=False)
print(f"4x4x2: {rep.total} tilings, component sizes {rep.sizes}")
print("twists of the isolated tilings:", [c["twist"] for c in rep.components if c["size"] == 1])

t1 = example_tiling("isolated-1")
t2 = example_tiling("isolated-2")
print("\nisolated-1:\n" + format_tiling(t1))
print("isolated-2:\n" + format_tiling(t2))
print("flip neighbours:", len(flip_neighbors(t1)), len(flip_neighbors(t2)), " twists:", twist(t1), twist(t2))
v = stable_equivalent(t1, t2, max_pad=2)
print(f"stable equivalence: {v.kind} at pad {v.pad} after {v.explored} nodes")

box = box_tiling(1)
print("\nthe 3x2x4 box tiling with twist 1:\n" + format_tiling(box))
print("twist of box * box:", twist(box * box), " of box * box^-1:", twist(box * ~box))
print("twist of the vertical tiling:", twist(vertical_tiling(box.disk, 4)))
print("twist histogram of 3x2x4:", twist_histogram(box.disk, 4))
