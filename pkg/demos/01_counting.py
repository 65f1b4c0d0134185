"""Counting and sampling tilings of a cylinder D x [0, N].

A tiling of the cylinder is a stack of floors. Each floor is a planar domino
tiling of D with some squares left for vertical dominoes, and those squares
(the plugs) link one floor to the next. Counting tilings is then a walk count
in the plug graph.
"""

from cyltile.board import disk_info, plug_count
from cyltile.cylinder import count_tilings, format_tiling, sample_tiling
from cyltile.floorplan import count_loops
from cyltile.gallery import example_disk

d = example_disk("square4")
print("the 4x4 square:", disk_info(d))
print("plugs:", plug_count(d), " loops at the empty plug:", count_loops(d))

for n in (1, 2, 4, 6):
    print(f"tilings of D x [0,{n}]: {count_tilings(d, n)}")

# exact uniform sampling: every tiling of the given height is equally likely
t = sample_tiling(d, 4, seed=11)
print("\na uniform random tiling of height 4, floors left to right")
print("(arrows point at the partner square; U/O are the lower/upper halves of vertical dominoes)")
print(format_tiling(t))
