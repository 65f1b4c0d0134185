"""Surjections onto the free group for disks with a cut.

When a square, a domino or a 2x2 block cuts a disk into suitable pieces,
floors using a cutting domino with the right plugs around it define a map
from tilings to words in a and b. The map is constant on flip components,
and two explicit tilings reach a and b, so the even domino group maps onto
the free group of rank two.
"""

from cyltile.cylinder import format_tiling
from cyltile.gallery import example_disk, example_names
from cyltile.homf2 import eval_hom, find_anchors, flip_sweep, format_word, single_floor_candidates, surjectivity_witnesses

for name in example_names():
    if not name.startswith(("squrdisc", "dominodisc", "nonreg")):
        continue
    d = example_disk(name)
    anchors = find_anchors(d)
    if not anchors and name == "nonreg-f2":
        # no cut applies here; a searched single-floor scheme does
        anchors = single_floor_candidates(d)[:1]
    if not anchors:
        print(f"{name}: no scheme applies")
        continue
    c = anchors[0]
    wa, wb = surjectivity_witnesses(c)
    sweep = flip_sweep(c, 2)
    print(f"{name}: {c.describe()['scheme']}, witnesses of heights {wa.tiling.height} and {wb.tiling.height},"
          f" {sweep['violations']} violations on {sweep['edges']} flip edges at height 2")

d = example_disk("dominodisc-thin3")
c = find_anchors(d)[0]
wa, wb = surjectivity_witnesses(c)
print("\nthe witness for a on the 3x2 rectangle:\n" + format_tiling(wa.tiling))
print("image of a * b * a^-1:", format_word(eval_hom(c, wa.tiling * wb.tiling * ~wa.tiling)))
