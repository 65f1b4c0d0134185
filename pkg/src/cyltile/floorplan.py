"""Planar tilings of a disk minus two plugs, i.e. the edges of the tiling complex.

A planar tiling is a sorted tuple of dominoes ``(i, j)``, ``i < j``, given by
square indices of the disk. A floor is the triple ``(p0, tiling, p1)``.
"""

from __future__ import annotations

from typing import Callable, Iterator, NamedTuple, Optional

from .board import MX, MY, PX, PY, Disk, DiskError, enumerate_plugs, iter_bits, popcount


class Floor(NamedTuple):
    """One slab of a 3D tiling: bottom plug, horizontal dominoes, top plug."""

    p0: int
    fstar: tuple
    p1: int

    def reversed(self) -> "Floor":
        return Floor(self.p1, self.fstar, self.p0)


class FloorWithParity(NamedTuple):
    floor: Floor
    parity: int

    def inverse(self) -> "FloorWithParity":
        return FloorWithParity(self.floor.reversed(), (self.parity + 1) % 2)


def _cache(d: Disk, name: str) -> dict:
    return d._cache.setdefault(name, {})


def _matchings(d: Disk, free: int, acc: list, visit: Callable) -> None:
    if not free:
        visit(tuple(acc))
        return
    i = (free & -free).bit_length() - 1
    rest = free & ~(1 << i)
    for j in sorted(d.nb[i]):
        if j > i and rest >> j & 1:
            acc.append((i, j))
            _matchings(d, rest & ~(1 << j), acc, visit)
            acc.pop()


def iter_matchings(d: Disk, region: int) -> Iterator[tuple]:
    """Perfect matchings of the squares in ``region``, in canonical order."""
    out: list = []
    _matchings(d, region, [], out.append)
    return iter(out)


def count_matchings(d: Disk, region: int) -> int:
    memo = _cache(d, "nmatch")
    if region in memo:
        return memo[region]
    if not region:
        return 1
    i = (region & -region).bit_length() - 1
    rest = region & ~(1 << i)
    total = 0
    for j in d.nb[i]:
        if j > i and rest >> j & 1:
            total += count_matchings(d, rest & ~(1 << j))
    memo[region] = total
    return total


def enumerate_floor_tilings(d: Disk, p0: int, p1: int) -> list:
    """All domino tilings of ``d`` minus the two plugs, canonical order."""
    if p0 & p1:
        raise DiskError("plugs overlap")
    return list(iter_matchings(d, d.full_mask & ~(p0 | p1)))


def floors_from(d: Disk, p0: int) -> list:
    """Every floor ``(p0, f, q)`` starting at plug ``p0``, sorted by ``(q, f)``.

    Each free square either goes up into ``q`` or is matched horizontally.
    """
    memo = _cache(d, "floors")
    if p0 in memo:
        return memo[p0]
    out = []

    def rec(free: int, q: int, acc: list):
        if not free:
            out.append(Floor(p0, tuple(acc), q))
            return
        i = (free & -free).bit_length() - 1
        rest = free & ~(1 << i)
        rec(rest, q | 1 << i, acc)
        for j in sorted(d.nb[i]):
            if j > i and rest >> j & 1:
                acc.append((i, j))
                rec(rest & ~(1 << j), q, acc)
                acc.pop()

    rec(d.full_mask & ~p0, 0, [])
    out = [f for f in out if popcount(f.p1 & d.white_mask) * 2 == popcount(f.p1)]
    out.sort(key=lambda f: (f.p1, f.fstar))
    memo[p0] = out
    return out


def transition_counts(d: Disk, p0: int) -> dict:
    """``{q: number of floors (p0, f, q)}`` without listing the floors.

    Memoised on the still-free squares above the current frontier.
    """
    memo = _cache(d, "trans")
    if p0 in memo:
        return memo[p0]
    n = len(d)
    sub: dict = {}

    def rec(i: int, free: int) -> dict:
        # free: bitmask of free squares with index >= i
        while i < n and not free >> i & 1:
            i += 1
        if i == n:
            return {0: 1}
        key = (i, free)
        if key in sub:
            return sub[key]
        rest = free & ~(1 << i)
        res: dict = {}
        for q, c in rec(i + 1, rest).items():
            res[q | 1 << i] = res.get(q | 1 << i, 0) + c
        for j in d.nb[i]:
            if j > i and rest >> j & 1:
                for q, c in rec(i + 1, rest & ~(1 << j)).items():
                    res[q] = res.get(q, 0) + c
        sub[key] = res
        return res

    raw = rec(0, d.full_mask & ~p0)
    w = d.white_mask
    res = {q: c for q, c in raw.items() if popcount(q & w) * 2 == popcount(q)}
    memo[p0] = res
    return res


def domino_direction(d: Disk, dom: tuple) -> int:
    """Direction code (PX or PY) from the lower to the higher index square."""
    i, j = dom
    if d.nb[i][PX] == j:
        return PX
    if d.nb[i][PY] == j:
        return PY
    raise DiskError(f"{dom} is not a domino")


def planar_flip_neighbors(d: Disk, tiling: tuple) -> list:
    """Tilings obtained by rotating one pair of parallel dominoes in a 2x2 square."""
    doms = set(tiling)
    out = []
    for i, j in tiling:
        if d.nb[i][PX] == j:
            a, b = d.nb[i][PY], d.nb[j][PY]
        else:
            a, b = d.nb[i][PX], d.nb[j][PX]
        if a >= 0 and b >= 0 and (a, b) in doms:
            new = doms - {(i, j), (a, b)}
            new |= {(min(i, a), max(i, a)), (min(j, b), max(j, b))}
            out.append(tuple(sorted(new)))
    out.sort()
    return out


def planar_tiling_region(tiling: tuple) -> int:
    m = 0
    for i, j in tiling:
        m |= 1 << i | 1 << j
    return m


def count_floor_edges(d: Disk, plugs: Optional[list] = None) -> int:
    """Number of edges of the 1-skeleton: unordered plug pairs times tilings.

    The loops at the empty plug count once each; no other plug can carry a loop.
    """
    if plugs is None:
        plugs = enumerate_plugs(d)
    ordered = sum(sum(transition_counts(d, p).values()) for p in plugs)
    loops = count_matchings(d, d.full_mask)
    return (ordered + loops) // 2


def count_loops(d: Disk) -> int:
    return count_matchings(d, d.full_mask)


_ARROW = {PX: "r", MX: "l", PY: "u", MY: "d"}


def format_planar_tiling(d: Disk, tiling: tuple, plugged: int = 0) -> str:
    """Grid text; each square shows the direction of its partner, plugs are 'o'."""
    from .board import _grid

    partner = {}
    for i, j in tiling:
        di = d.nb[i].index(j)
        partner[i] = _ARROW[di]
        partner[j] = _ARROW[di ^ 1]
    return _grid(d, lambda i: "o" if plugged >> i & 1 else partner.get(i, "?"))


def parse_planar_tiling(text: str, parity: int = 0):
    """Inverse of :func:`format_planar_tiling`; returns ``(disk, tiling, plugged)``."""
    from .board import parse_disk, parse_grid

    cells = parse_grid(text)
    d = parse_disk(text, parity)
    rev = {v: k for k, v in _ARROW.items()}
    doms = set()
    plugged = 0
    for sq, ch in cells.items():
        i = d.index[sq]
        if ch == "o":
            plugged |= 1 << i
            continue
        if ch not in rev:
            raise DiskError(f"unexpected character {ch!r}")
        j = d.nb[i][rev[ch]]
        if j < 0:
            raise DiskError(f"square {sq} points outside the disk")
        doms.add((min(i, j), max(i, j)))
    tiling = tuple(sorted(doms))
    covered = planar_tiling_region(tiling)
    if covered & plugged or covered | plugged != d.full_mask or 2 * len(tiling) != popcount(covered):
        raise DiskError("inconsistent tiling text")
    return d, tiling, plugged


__all__ = [
    "Floor",
    "FloorWithParity",
    "count_floor_edges",
    "count_loops",
    "count_matchings",
    "enumerate_floor_tilings",
    "floors_from",
    "format_planar_tiling",
    "iter_bits",
    "iter_matchings",
    "parse_planar_tiling",
    "planar_flip_neighbors",
    "transition_counts",
]
