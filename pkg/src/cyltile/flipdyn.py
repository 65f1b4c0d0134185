"""Flips, flip-connected components, the twist and bounded stable-equivalence search.

Internally a tiling is a ``bytes`` cube array: cube ``k * n + i`` is square
``i`` of floor ``k`` (0-based) and its byte says where its partner cube lies.
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .board import MX, MY, PX, PY, STEPS, Disk
from .cylinder import (
    BudgetExceeded,
    Tiling3D,
    count_tilings,
    default_budget,
    format_tiling,
    iter_floor_sequences,
    vertical_tiling,
)
from .floorplan import Floor

PZ, MZ, ABSENT = 4, 5, 6
POSITIVE = (PX, PY, PZ)


def to_cells(t: Tiling3D) -> bytes:
    d = t.disk
    n = len(d)
    N = t.height
    cells = bytearray([ABSENT]) * (n * N)
    for k, f in enumerate(t.floors):
        base = k * n
        for i, j in f.fstar:
            di = d.nb[i].index(j)
            cells[base + i] = di
            cells[base + j] = di ^ 1
        if k + 1 < N:
            m = f.p1
            i = 0
            while m:
                if m & 1:
                    cells[base + i] = PZ
                    cells[base + n + i] = MZ
                m >>= 1
                i += 1
    return bytes(cells)


def from_cells(d: Disk, cells: bytes, start: int = 0, end: int = 0) -> Tiling3D:
    n = len(d)
    N = len(cells) // n
    floors = []
    for k in range(N):
        base = k * n
        p0 = start if k == 0 else 0
        p1 = end if k == N - 1 else 0
        doms = []
        for i in range(n):
            c = cells[base + i]
            if c == PZ:
                p1 |= 1 << i
            elif c == MZ:
                p0 |= 1 << i
            elif c in (PX, PY):
                doms.append((i, d.nb[i][c]))
        floors.append(Floor(p0, tuple(sorted(doms)), p1))
    return Tiling3D(d, tuple(floors), start, end)


def _step(nb, n: int, N: int, c: int, direction: int) -> int:
    if direction == PZ:
        return c + n if c + n < n * N else -1
    if direction == MZ:
        return c - n
    k, i = divmod(c, n)
    j = nb[i][direction]
    return -1 if j < 0 else k * n + j


@dataclass(frozen=True)
class FlipMove:
    """Two parallel dominoes filling a 2x2x1 box, rotated to the other position.

    ``cubes`` are the four cubes of the box; ``before`` and ``after`` the
    direction of the dominoes. The move is in-floor when both are horizontal.
    """

    cubes: tuple
    before: int
    after: int

    @property
    def kind(self) -> str:
        return "in-floor" if PZ not in (self.before, self.after) else "cross-floor"


def flip_moves(d: Disk, cells: bytes) -> list:
    """Every available flip, each found once from its lowest corner."""
    n = len(d)
    N = len(cells) // n
    nb = d.nb
    out = []
    for c in range(len(cells)):
        a = cells[c]
        if a not in POSITIVE:
            continue
        c2 = _step(nb, n, N, c, a)
        for f in POSITIVE:
            if f == a:
                continue
            e = _step(nb, n, N, c, f)
            if e < 0 or cells[e] != a:
                continue
            e2 = _step(nb, n, N, c2, f)
            out.append(FlipMove((c, c2, e, e2), a, f))
    return out


def apply_move(cells: bytes, mv: FlipMove) -> bytes:
    c, c2, e, e2 = mv.cubes
    f = mv.after
    out = bytearray(cells)
    out[c] = f
    out[e] = f ^ 1
    out[c2] = f
    out[e2] = f ^ 1
    return bytes(out)


def cell_neighbors(d: Disk, cells: bytes) -> list:
    return [apply_move(cells, mv) for mv in flip_moves(d, cells)]


def flip_neighbors(t: Tiling3D) -> list:
    """All tilings one flip away from ``t``."""
    cells = to_cells(t)
    return [from_cells(t.disk, c, t.start_plug, t.end_plug) for c in cell_neighbors(t.disk, cells)]


# twist -------------------------------------------------------------------

_VEC = {PX: (1, 0), MX: (-1, 0), PY: (0, 1), MY: (0, -1)}


def column_sums(d: Disk, cells: bytes):
    """Raw twist numerator (times 4) and the per-column sums of domino vectors.

    The vector of a horizontal domino points from its white cube to its black
    cube; a cube's colour is its square colour shifted by the floor index.
    """
    n = len(d)
    N = len(cells) // n
    total = 0
    sums = []
    for i in range(n):
        sx = sy = 0
        col = d.color(i)
        for k in range(N):
            code = cells[k * n + i]
            v = _VEC.get(code)
            if v is None:
                continue
            vx, vy = v
            if (col + k) % 2:  # black cube: flip to point white -> black
                vx, vy = -vx, -vy
            total += vx * sy - vy * sx
            sx += vx
            sy += vy
        sums.append((sx, sy))
    return total, sums


def twist(t: Tiling3D):
    """Twist of a tiling: a quarter of the sum, over pairs of horizontal dominoes
    stacked over a common square, of the determinant of (upper, lower) vectors.

    Integer for cylinder tilings; corks may give a fraction.
    """
    return twist_cells(t.disk, to_cells(t))


def twist_cells(d: Disk, cells: bytes):
    total, _ = column_sums(d, cells)
    r = Fraction(total, 4)
    return int(r) if r.denominator == 1 else r


# components --------------------------------------------------------------


@dataclass
class ComponentReport:
    height: int
    total: int
    components: list = field(default_factory=list)  # dicts: size, twist, representative

    @property
    def isolated(self) -> int:
        return sum(1 for c in self.components if c["size"] == 1)

    @property
    def sizes(self) -> list:
        return [c["size"] for c in self.components]

    def to_json(self, **kw) -> str:
        return json.dumps(
            {"height": self.height, "total": self.total, "components": self.components, "isolated": self.isolated},
            **kw,
        )


def _find(parent: list, x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def component_index(d: Disk, n: int, budget: Optional[int] = None) -> dict:
    """Map the cube array of every tiling of ``d x [0, n]`` to the enumeration
    index of the first tiling of its flip component."""
    if budget is None:
        budget = default_budget()
    total = count_tilings(d, n)
    if total > budget:
        raise BudgetExceeded(f"{total} tilings exceed the enumeration budget {budget}")
    index: dict = {}
    for floors in iter_floor_sequences(d, n):
        index[to_cells(Tiling3D(d, floors))] = len(index)
    parent = list(range(len(index)))
    for cells, a in index.items():
        for mv in flip_moves(d, cells):
            b = index[apply_move(cells, mv)]
            ra, rb = _find(parent, a), _find(parent, b)
            if ra != rb:
                if ra < rb:
                    parent[rb] = ra
                else:
                    parent[ra] = rb
    return {cells: _find(parent, a) for cells, a in index.items()}


def flip_components(d: Disk, n: int, budget: Optional[int] = None, representatives: bool = True) -> ComponentReport:
    """Union-find over all tilings of ``d x [0, n]``.

    Components come sorted by size (descending), then twist, then the
    canonical position of their first tiling; the representative is that
    first tiling in enumeration order.
    """
    labels = component_index(d, n, budget)
    total = len(labels)
    groups: dict = {}
    first_cells: dict = {}
    for cells, r in labels.items():
        groups[r] = groups.get(r, 0) + 1
        if r not in first_cells:
            first_cells[r] = cells
    comps = []
    for r, size in groups.items():
        cells = first_cells[r]
        entry = {"size": size, "twist": _jsonable(twist_cells(d, cells))}
        if representatives:
            entry["representative"] = format_tiling(from_cells(d, cells))
        comps.append((-size, _sortable(entry["twist"]), r, entry))
    comps.sort(key=lambda x: x[:3])
    return ComponentReport(n, total, [c[3] for c in comps])


def _jsonable(x):
    return x if isinstance(x, int) else str(x)


def _sortable(x):
    return Fraction(x)


def twist_histogram(d: Disk, n: int, budget: Optional[int] = None) -> dict:
    if budget is None:
        budget = default_budget()
    total = count_tilings(d, n)
    if total > budget:
        raise BudgetExceeded(f"{total} tilings exceed the enumeration budget {budget}")
    hist: dict = {}
    for floors in iter_floor_sequences(d, n):
        tw = twist_cells(d, to_cells(Tiling3D(d, floors)))
        hist[tw] = hist.get(tw, 0) + 1
    return dict(sorted(hist.items()))


# stable equivalence ------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    kind: str  # "equivalent", "not-found" or "twist-distinct"
    pad: Optional[int] = None
    explored: int = 0

    def __bool__(self):
        return self.kind == "equivalent"


def flip_connected(d: Disk, a: bytes, b: bytes, budget: int):
    """Bidirectional BFS in the flip graph; returns (found, nodes explored)."""
    if a == b:
        return True, 1
    seen = [{a}, {b}]
    frontier = [deque([a]), deque([b])]
    explored = 2
    while frontier[0] and frontier[1]:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        other = seen[1 - side]
        for _ in range(len(frontier[side])):
            cur = frontier[side].popleft()
            for mv in flip_moves(d, cur):
                nxt = apply_move(cur, mv)
                if nxt in other:
                    return True, explored
                if nxt not in seen[side]:
                    seen[side].add(nxt)
                    frontier[side].append(nxt)
                    explored += 1
                    if explored > budget:
                        return False, explored
    return False, explored


def best_first_connected(d: Disk, a: bytes, b: bytes, budget: int):
    """Greedy search from ``a`` towards ``b``, expanding the tiling whose cube
    array differs from ``b`` in the fewest cubes first. Same return as
    :func:`flip_connected`; far faster on large components, no optimality."""
    if a == b:
        return True, 1

    def dist(x: bytes) -> int:
        return sum(1 for p, q in zip(x, b) if p != q)

    seen = {a}
    heap = [(dist(a), 0, a)]
    tick = 0
    while heap:
        _, _, cur = heapq.heappop(heap)
        for mv in flip_moves(d, cur):
            nxt = apply_move(cur, mv)
            if nxt == b:
                return True, len(seen)
            if nxt not in seen:
                seen.add(nxt)
                tick += 1
                heapq.heappush(heap, (dist(nxt), tick, nxt))
                if len(seen) > budget:
                    return False, len(seen)
    return False, len(seen)


SEARCHES = {"best-first": best_first_connected, "bfs": flip_connected}


def stable_equivalent(
    t1: Tiling3D, t2: Tiling3D, max_pad: int = 4, budget: int = 200_000, strategy: str = "best-first"
) -> Verdict:
    """Search for even paddings with ``t1 * vert`` flip-connected to ``t2 * vert``.

    Pads are tried in increasing order; ``budget`` bounds the nodes of each
    search. ``strategy`` is ``"best-first"`` or ``"bfs"``; both only ever
    answer "equivalent" with an actual flip path behind it.
    """
    search = SEARCHES[strategy]
    if t1.disk != t2.disk:
        raise ValueError("tilings live on different disks")
    if (t1.height - t2.height) % 2:
        raise ValueError("heights must have equal parity")
    d = t1.disk
    if t1.is_cylinder and t2.is_cylinder and twist(t1) != twist(t2):
        return Verdict("twist-distinct")
    explored = 0
    H = max(t1.height, t2.height)
    for pad in range(0, max_pad + 1, 2):
        a = t1 * vertical_tiling(d, H - t1.height + pad) if H - t1.height + pad else t1
        b = t2 * vertical_tiling(d, H - t2.height + pad) if H - t2.height + pad else t2
        ok, used = search(d, to_cells(a), to_cells(b), budget)
        explored += used
        if ok:
            return Verdict("equivalent", pad, explored)
    return Verdict("not-found", None, explored)


def is_isolated(t: Tiling3D) -> bool:
    return not flip_moves(t.disk, to_cells(t))
