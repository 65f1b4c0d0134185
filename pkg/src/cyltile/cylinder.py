"""3D tilings of cylinders and corks as sequences of floors."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .board import (
    MX,
    MY,
    PX,
    PY,
    Disk,
    DiskError,
    SpanningTree,
    iter_bits,
    parse_disk,
    popcount,
)
from .floorplan import Floor, FloorWithParity, floors_from, planar_tiling_region, transition_counts

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    pass


class TilingError(ValueError):
    pass


def default_budget() -> int:
    return int(os.environ.get("CYLTILE_BUDGET", DEFAULT_BUDGET))


@dataclass(frozen=True)
class Tiling3D:
    """A tiling of a cork ``D x [0, N]`` with plugs removed at both ends.

    Cylinder tilings have ``start_plug == end_plug == 0``.
    """

    disk: Disk
    floors: tuple
    start_plug: int = 0
    end_plug: int = 0

    @property
    def height(self) -> int:
        return len(self.floors)

    @property
    def is_cylinder(self) -> bool:
        return self.start_plug == 0 and self.end_plug == 0

    def plugs(self) -> list:
        """``[p_0, p_1, ..., p_N]``; the inner ones are the vertical-domino layers."""
        if not self.floors:
            return [self.start_plug]
        return [self.floors[0].p0] + [f.p1 for f in self.floors]

    def floors_with_parity(self) -> list:
        return [FloorWithParity(f, (k + 1) % 2) for k, f in enumerate(self.floors)]

    def key(self) -> tuple:
        return (self.start_plug, self.end_plug, self.floors)

    def validate(self) -> None:
        validate_floors(self.disk, self.floors, self.start_plug, self.end_plug)

    def __mul__(self, other: "Tiling3D") -> "Tiling3D":
        return concatenate(self, other)

    def __invert__(self) -> "Tiling3D":
        return invert(self)

    def __str__(self) -> str:
        return format_tiling(self)


def validate_floors(d: Disk, floors, start: int, end: int) -> None:
    full = d.full_mask
    if not floors:
        if start != end:
            raise TilingError("height-0 cork needs equal plugs")
        return
    if floors[0].p0 != start or floors[-1].p1 != end:
        raise TilingError("end plugs do not match")
    for k, f in enumerate(floors):
        if k and floors[k - 1].p1 != f.p0:
            raise TilingError(f"floors {k} and {k + 1} do not compose")
        if f.p0 & f.p1:
            raise TilingError(f"floor {k + 1}: plugs overlap")
        region = planar_tiling_region(f.fstar)
        if 2 * len(f.fstar) != popcount(region):
            raise TilingError(f"floor {k + 1}: dominoes overlap")
        for i, j in f.fstar:
            if j not in d.nb[i]:
                raise TilingError(f"floor {k + 1}: {(i, j)} is not a domino")
        if region != full & ~(f.p0 | f.p1):
            raise TilingError(f"floor {k + 1}: dominoes do not cover the residual region")
    # cube coverage, independent of the floor bookkeeping above
    n = len(d)
    N = len(floors)
    covered = [0] * N
    for k, f in enumerate(floors):
        for i, j in f.fstar:
            covered[k] |= 1 << i | 1 << j
        if k + 1 < N:
            lay = f.p1
            if covered[k] & lay:
                raise TilingError("cube covered twice")
            covered[k] |= lay
            covered[k + 1] |= lay
    for k in range(N):
        expected = full
        if k == 0:
            expected &= ~start
        if k == N - 1:
            expected &= ~end
        if covered[k] != expected:
            raise TilingError(f"floor {k + 1}: cube coverage mismatch")


class TransferTable:
    """Exact path counts in the 1-skeleton towards a fixed end plug.

    ``counts(k)[p]`` is the number of tilings of the cork of height ``k`` that
    start at ``p`` and end at ``end``. By floor reversal this equals the number
    of paths of length ``k`` from ``end`` to ``p``, which is how it is built.
    """

    def __init__(self, disk: Disk, end: int = 0):
        self.disk = disk
        self.end = end
        self._layers = [{end: 1}]

    def edges(self, p: int) -> dict:
        return transition_counts(self.disk, p)

    def counts(self, k: int) -> dict:
        while len(self._layers) <= k:
            prev = self._layers[-1]
            nxt: dict = {}
            for p, c in prev.items():
                for q, m in self.edges(p).items():
                    nxt[q] = nxt.get(q, 0) + c * m
            self._layers.append(nxt)
        return self._layers[k]

    def count(self, start: int, k: int) -> int:
        return self.counts(k).get(start, 0)


def _table(d: Disk, end: int) -> TransferTable:
    tables = d._cache.setdefault("transfer", {})
    if end not in tables:
        tables[end] = TransferTable(d, end)
    return tables[end]


def count_tilings(d: Disk, n: int, start: int = 0, end: int = 0) -> int:
    """Number of tilings of ``D x [0, n]`` (or of the cork with the given plugs)."""
    if n < 0:
        raise ValueError("height must be nonnegative")
    if len(d) > 64:
        raise DiskError("disk exceeds mask capacity")
    lo = n // 2
    left = _table(d, start).counts(n - lo)
    right = _table(d, end).counts(lo)
    if len(left) > len(right):
        left, right = right, left
    return sum(c * right.get(q, 0) for q, c in left.items())


def iter_floor_sequences(d: Disk, n: int, start: int = 0, end: int = 0) -> Iterator[tuple]:
    """Depth-first stream of floor tuples in canonical order, no dead ends."""
    table = _table(d, end)
    for k in range(n + 1):
        table.counts(k)
    acc: list = []

    def rec(p: int, remaining: int):
        if remaining == 0:
            yield tuple(acc)
            return
        layer = table.counts(remaining - 1)
        for f in floors_from(d, p):
            if layer.get(f.p1, 0):
                acc.append(f)
                yield from rec(f.p1, remaining - 1)
                acc.pop()

    if table.count(start, n):
        yield from rec(start, n)


def enumerate_tilings(
    d: Disk, n: int, budget: Optional[int] = None, start: int = 0, end: int = 0
) -> Iterator[Tiling3D]:
    if budget is None:
        budget = default_budget()
    total = count_tilings(d, n, start, end)
    if total > budget:
        raise BudgetExceeded(f"{total} tilings exceed the enumeration budget {budget}")
    for floors in iter_floor_sequences(d, n, start, end):
        yield Tiling3D(d, floors, start, end)


def sample_tiling(d: Disk, n: int, seed=None, start: int = 0, end: int = 0) -> Tiling3D:
    """Exactly uniform random tiling; ``seed`` may be an int or a ``random.Random``."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    table = _table(d, end)
    total = table.count(start, n)
    if total == 0:
        raise TilingError("no tilings exist")
    floors = []
    p = start
    for remaining in range(n, 0, -1):
        layer = table.counts(remaining - 1)
        u = rng.randrange(table.count(p, remaining))
        for f in floors_from(d, p):
            w = layer.get(f.p1, 0)
            if u < w:
                floors.append(f)
                p = f.p1
                break
            u -= w
    return Tiling3D(d, tuple(floors), start, end)


def concatenate(t1: Tiling3D, t2: Tiling3D) -> Tiling3D:
    if t1.disk != t2.disk:
        raise TilingError("different base disks")
    if t1.end_plug != t2.start_plug:
        raise TilingError("plug mismatch in concatenation")
    return Tiling3D(t1.disk, t1.floors + t2.floors, t1.start_plug, t2.end_plug)


def concat_all(*ts: Tiling3D) -> Tiling3D:
    out = ts[0]
    for t in ts[1:]:
        out = concatenate(out, t)
    return out


def invert(t: Tiling3D) -> Tiling3D:
    """Reflection in a horizontal plane."""
    return Tiling3D(t.disk, tuple(f.reversed() for f in reversed(t.floors)), t.end_plug, t.start_plug)


def vertical_tiling(d: Disk, n: int) -> Tiling3D:
    if n % 2:
        raise TilingError("the vertical tiling needs an even height")
    up = Floor(0, (), d.full_mask)
    down = Floor(d.full_mask, (), 0)
    return Tiling3D(d, (up, down) * (n // 2))


def empty_floor(d: Disk, p: int) -> Floor:
    """The floor ``(p, {}, p^-1)``."""
    return Floor(p, (), d.full_mask & ~p)


def floor_tiling(d: Disk, floor: Floor) -> Tiling3D:
    return Tiling3D(d, (floor,), floor.p0, floor.p1)


def closest_pair(d: Disk, plug: int, tree: SpanningTree) -> tuple:
    """Opposite-colour squares of ``plug`` at minimal tree distance.

    Ties go to the lexicographically smallest ``(white, black)`` pair.
    """
    whites = [i for i in iter_bits(plug) if d.color(i) == 0]
    blacks = [i for i in iter_bits(plug) if d.color(i) == 1]
    best = None
    for w in whites:
        for b in blacks:
            dist = tree.distance(w, b)
            if best is None or dist < best[0]:
                best = (dist, w, b)
    return best[1], best[2]


def tiling_from_plug(d: Disk, p: int, tree: SpanningTree) -> Tiling3D:
    """The cork tiling ``t_p`` from plug ``p`` down to the empty plug.

    Squares are removed from the plug two at a time along tree paths, which
    costs two floors per pair; every horizontal domino is a tree edge.
    """
    floors = []
    cur = p
    full = d.full_mask
    while cur:
        s, s2 = closest_pair(d, cur, tree)
        path = tree.path(s, s2)
        inner = path[1:-1]
        f_even = tuple(sorted((min(a, b), max(a, b)) for a, b in zip(inner[0::2], inner[1::2])))
        f_odd = tuple(sorted((min(a, b), max(a, b)) for a, b in zip(path[0::2], path[1::2])))
        mid = full & ~cur & ~planar_tiling_region(f_even)
        nxt = cur & ~(1 << s) & ~(1 << s2)
        floors.append(Floor(cur, f_even, mid))
        floors.append(Floor(mid, f_odd, nxt))
        cur = nxt
    t = Tiling3D(d, tuple(floors), p, 0)
    return t


# text form ---------------------------------------------------------------

_ARROW = {PX: "r", MX: "l", PY: "u", MY: "d"}
_REV = {v: k for k, v in _ARROW.items()}


def floor_chars(d: Disk, floors, start: int, end: int) -> list:
    N = len(floors)
    rows = []
    for k, f in enumerate(floors):
        ch = {}
        for i, j in f.fstar:
            di = d.nb[i].index(j)
            ch[i] = _ARROW[di]
            ch[j] = _ARROW[di ^ 1]
        for i in iter_bits(f.p0):
            ch[i] = "o" if k == 0 else "O"
        for i in iter_bits(f.p1):
            ch[i] = "x" if k == N - 1 else "U"
        rows.append(ch)
    return rows


def format_tiling(t: Tiling3D) -> str:
    """Floors drawn left to right; 'U'/'O' are lower/upper halves of vertical
    dominoes, 'o'/'x' mark squares removed by the start/end plug."""
    from .board import _grid

    d = t.disk
    grids = [_grid(d, lambda i, c=c: c[i]).splitlines() for c in floor_chars(d, t.floors, t.start_plug, t.end_plug)]
    if not grids:
        return ""
    return "\n".join(" ".join(parts) for parts in zip(*grids)) + "\n"


def parse_tiling(text: str, parity: int = 0) -> Tiling3D:
    lines = [ln for ln in text.splitlines() if ln != ""]
    if not lines:
        raise TilingError("empty tiling text")
    segments = [ln.split(" ") for ln in lines]
    N = len(segments[0])
    if any(len(s) != N for s in segments):
        raise TilingError("ragged floor layout")
    floor_texts = ["\n".join(s[k] for s in segments) + "\n" for k in range(N)]
    d = parse_disk(floor_texts[0], parity)
    from .board import parse_grid

    floors = []
    start = end = 0
    for k, ft in enumerate(floor_texts):
        cells = parse_grid(ft)
        if set(cells) != set(d.squares):
            raise TilingError(f"floor {k + 1} has a different outline")
        p0 = p1 = 0
        doms = set()
        for sq, ch in cells.items():
            i = d.index[sq]
            if ch in "oO":
                p0 |= 1 << i
            elif ch in "xU":
                p1 |= 1 << i
            elif ch in _REV:
                j = d.nb[i][_REV[ch]]
                if j < 0:
                    raise TilingError(f"square {sq} points outside the disk")
                doms.add((min(i, j), max(i, j)))
            else:
                raise TilingError(f"unexpected character {ch!r}")
        if k == 0:
            start = p0
        if k == N - 1:
            end = p1
        floors.append(Floor(p0, tuple(sorted(doms)), p1))
    t = Tiling3D(d, tuple(floors), start, end)
    t.validate()
    return t
