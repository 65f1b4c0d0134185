"""Named disks and tilings used across the demos and tests.

Squares use the lattice coordinates of their lower-left corner, and square
``(a, b)`` is white iff ``a + b`` is even.
"""

from __future__ import annotations

from importlib import resources

from .board import Disk, read_disk_file, rectangle
from .cylinder import Tiling3D, enumerate_tilings
from .flipdyn import twist
from .floorplan import Floor


def thin_rectangle(L: int) -> Disk:
    """``[0,L] x [0,2]``."""
    return rectangle(L, 2)


def two_tab_strip(L: int) -> Disk:
    """``[0,2L] x [0,1]`` with tabs below its second and second-to-last squares.

    Irregular but not strongly irregular; its even group is Z + Z.
    """
    sq = [(x, 0) for x in range(2 * L)] + [(1, -1), (2 * L - 2, -1)]
    return Disk.from_squares(sq)


def tab_strip_dominoes(L: int) -> tuple:
    """The two dominoes of :func:`two_tab_strip` running through its tabs."""
    d = two_tab_strip(L)
    return d.domino((1, -1), (1, 0)), d.domino((2 * L - 2, -1), (2 * L - 2, 0))


def free_strip() -> Disk:
    """``[0,4] x [0,1]`` plus the squares ``(1,-1)`` and ``(2,1)``: its even group is F2."""
    return Disk.from_squares([(0, 0), (1, 0), (2, 0), (3, 0), (1, -1), (2, 1)])


def free_strip_floor() -> Floor:
    """The one floor whose two orientations carry ``a`` and ``b`` on :func:`free_strip`."""
    d = free_strip()
    dom = d.domino((1, 0), (2, 0))
    p0 = d.mask_of([(0, 0), (2, 1)])
    p1 = d.full_mask & ~p0 & ~(1 << dom[0]) & ~(1 << dom[1])
    return Floor(p0, (dom,), p1)


def square_tail(a: int = 4) -> Disk:
    """``[0,a]^2`` with the tail ``[a, a + (a^2-4)/2] x [0,2]``; regular for even ``a >= 4``."""
    b = a * a - 4
    sq = [(x, y) for x in range(a) for y in range(a)]
    sq += [(x, y) for x in range(a, a + b // 2) for y in range(2)]
    return Disk.from_squares(sq)


def t_shape() -> Disk:
    """A square at ``(2,1)`` cutting the disk into arms of sizes 2, 2 and 5."""
    sq = [(2, 1), (0, 1), (1, 1), (3, 1), (4, 1), (2, 0), (1, -1), (2, -1), (1, -2), (2, -2)]
    return Disk.from_squares(sq)


def plus_shape() -> Disk:
    """A centre square whose removal leaves four arms of sizes 2, 2, 2 and 3."""
    sq = [(0, 0), (1, 0), (2, 0), (-1, 0), (-2, 0), (0, 1), (0, 2), (0, -1), (0, -2), (0, -3)]
    return Disk.from_squares(sq)


def notched_square() -> Disk:
    """``[0,3]^2`` minus a corner; the central 2x2 cut uses two crossed dominoes."""
    return Disk.from_squares([(x, y) for x in range(3) for y in range(3) if (x, y) != (0, 0)])


def box_tiling(twist_value: int = 1) -> Tiling3D:
    """First tiling of the ``3 x 2 x 4`` box, in canonical order, with the given twist."""
    d = rectangle(3, 2)
    for t in enumerate_tilings(d, 4):
        if twist(t) == twist_value:
            return t
    raise ValueError(f"no box tiling with twist {twist_value}")


def embed(d: Disk, t: Tiling3D, dx: int = 0, dy: int = 0) -> Tiling3D:
    """Place a cylinder tiling of a sub-disk (translated by ``(dx, dy)``) inside
    ``d``; every other column of ``d`` gets vertical dominoes."""
    if t.height % 2:
        raise ValueError("outside columns need an even height")
    src = t.disk
    idx = [d.square_index(a + dx, b + dy) for a, b in src.squares]
    inside = sum(1 << i for i in idx)
    outside = d.full_mask & ~inside

    def lift(m: int) -> int:
        out = 0
        for k, i in enumerate(idx):
            if m >> k & 1:
                out |= 1 << i
        return out

    floors = []
    for k, f in enumerate(t.floors):
        doms = tuple(sorted((min(idx[i], idx[j]), max(idx[i], idx[j])) for i, j in f.fstar))
        p0 = lift(f.p0) | (outside if k % 2 else 0)
        p1 = lift(f.p1) | (0 if k % 2 else outside)
        floors.append(Floor(p0, doms, p1))
    out = Tiling3D(d, tuple(floors))
    out.validate()
    return out


def example_names() -> list:
    """Names of the disk files shipped with the package."""
    root = resources.files("cyltile") / "data" / "disks"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".txt"))


def example_disk(name: str) -> Disk:
    root = resources.files("cyltile") / "data" / "disks"
    return read_disk_file((root / f"{name}.txt").read_text())


def tab_strip_reflection(t: Tiling3D, L: int) -> Tiling3D:
    """Reflect the dominoes over the last tab and the last two strip squares
    on the plane ``x + y = 2L - 1``.

    The reflection swaps the tab with the last strip square and fixes the
    square between them; both swapped squares only touch that square, so the
    map is a relabelling of squares.
    """
    d = t.disk
    a = d.square_index(2 * L - 2, -1)
    b = d.square_index(2 * L - 1, 0)
    perm = list(range(len(d)))
    perm[a], perm[b] = b, a

    def pm(m: int) -> int:
        return sum(1 << perm[i] for i in range(len(d)) if m >> i & 1)

    floors = []
    for f in t.floors:
        doms = tuple(sorted(tuple(sorted((perm[i], perm[j]))) for i, j in f.fstar))
        floors.append(Floor(pm(f.p0), doms, pm(f.p1)))
    out = Tiling3D(d, tuple(floors), pm(t.start_plug), pm(t.end_plug))
    out.validate()
    return out


def tab_strip_generators(L: int = 3, budget=None) -> tuple:
    """First tilings of height 6, in canonical order, with exactly two
    horizontal dominoes through the tabs and twist pair ``(Tw, Tw o reflection)``
    equal to ``(-1, 1)`` and ``(1, 1)``."""
    d = two_tab_strip(L)
    doms = set(tab_strip_dominoes(L))
    found: dict = {}
    for t in enumerate_tilings(d, 6, budget=budget):
        if sum(1 for f in t.floors for dm in f.fstar if dm in doms) != 2:
            continue
        key = (twist(t), twist(tab_strip_reflection(t, L)))
        if key in ((-1, 1), (1, 1)) and key not in found:
            found[key] = t
            if len(found) == 2:
                return found[(-1, 1)], found[(1, 1)]
    raise ValueError("generators not found")


def example_tiling(name: str) -> Tiling3D:
    """A tiling shipped as text, e.g. ``isolated-1`` and ``isolated-2``: two
    flip-isolated tilings of ``[0,4]^2 x [0,2]`` with equal twist."""
    from .cylinder import parse_tiling

    root = resources.files("cyltile") / "data" / "tilings"
    return parse_tiling((root / f"{name}.txt").read_text())
