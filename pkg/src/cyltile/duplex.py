"""Tilings of thin cylinders ``[0,L] x [0,2] x [0,N]`` seen as duplex regions.

The cylinder is rotated so that cube ``(x, y, z)`` becomes square ``(u, w) =
(z, x)`` of the diagram on duplex floor ``y``. Dominoes along the cylinder's
y-axis project to jewels; every other domino is an oriented edge
(white cube to black cube) between two diagram squares, and the edges of the
two duplex floors form disjoint cycles.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .board import PX, PY, Disk, rectangle
from .cylinder import Tiling3D, TilingError
from .flipdyn import MZ, PZ, from_cells, to_cells

# RAAG words ---------------------------------------------------------------
# A word is a tuple of letters (i, e) meaning a_i ** e, e = +1 or -1.


def max_index(L: int) -> int:
    return (L - 1) // 2


def in_RL(m: int, n: int, L: int) -> bool:
    return max(abs(m), abs(n), abs(m - n)) < L // 2


def compute_RL(L: int) -> set:
    """All pairs ``(m, n)`` with ``max(|m|, |n|, |m - n|) < floor(L/2)``."""
    if L < 3:
        raise ValueError("L must be at least 3")
    h = L // 2
    return {(m, n) for m in range(-h, h + 1) for n in range(-h, h + 1) if in_RL(m, n, L)}


def generators(L: int) -> list:
    k = max_index(L)
    return [i for i in range(-k, k + 1) if i]


def commute(i: int, j: int, L: int) -> bool:
    return i == j or in_RL(i, j, L)


def check_word(w, L: int) -> tuple:
    k = max_index(L)
    w = tuple((int(i), int(e)) for i, e in w)
    for i, e in w:
        if not (0 < abs(i) <= k) or e not in (1, -1):
            raise ValueError(f"bad letter {(i, e)} for L={L}")
    return w


def _cancel(w: list, L: int) -> bool:
    """Remove one pair ``x ... x^-1`` whose middle commutes with ``x``."""
    for a in range(len(w)):
        i, e = w[a]
        for b in range(a + 1, len(w)):
            j, f = w[b]
            if j == i and f == -e:
                del w[b]
                del w[a]
                return True
            if not commute(i, j, L):
                break
    return False


def raag_normal_form(w, L: int) -> tuple:
    """Shortlex-least word for the same element of the right-angled Artin group.

    Reduced words are those without a cancellable pair; two reduced words are
    equal in the group iff they differ by commuting swaps, so the least one is
    the greedy lexicographic linear extension of the dependence order.
    """
    w = list(check_word(w, L))
    while _cancel(w, L):
        pass
    out = []
    remaining = list(range(len(w)))
    while remaining:
        best = None
        for pos, k in enumerate(remaining):
            # available if every earlier remaining letter commutes with it
            if all(commute(w[m][0], w[k][0], L) for m in remaining[:pos]):
                if best is None or w[k] < w[remaining[best]]:
                    best = pos
        out.append(w[remaining.pop(best)])
    return tuple(out)


def raag_equal(u, v, L: int) -> bool:
    return raag_normal_form(u, L) == raag_normal_form(v, L)


def raag_inverse(w) -> tuple:
    return tuple((i, -e) for i, e in reversed(tuple(w)))


def raag_normal_form_bfs(w, L: int, limit: int = 200_000) -> tuple:
    """Oracle: shortlex minimum of the closure under free cancellation and
    swaps of adjacent commuting letters. Exponential; small words only."""
    start = check_word(w, L)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for k in range(len(cur) - 1):
            (i, e), (j, f) = cur[k], cur[k + 1]
            if i == j and e == -f:
                nxt = cur[:k] + cur[k + 2 :]
            elif commute(i, j, L):
                nxt = cur[:k] + (cur[k + 1], cur[k]) + cur[k + 2 :]
            else:
                continue
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
                if len(seen) > limit:
                    raise RuntimeError("word ball too large")
    return min(seen, key=lambda x: (len(x), x))


def format_word(w) -> str:
    if not w:
        return "e"
    return " ".join(f"a{i}" if e == 1 else f"a{i}^-1" for i, e in w)


def f2_projection(w, L: int) -> str:
    """Keep the letters of largest index: ``a_k -> a``, ``a_-k -> b``; freely reduce.

    The result uses ``'A'``/``'B'`` for inverses.
    """
    from .homf2 import free_reduce

    k = max_index(L)
    out = []
    for i, e in w:
        if abs(i) != k:
            continue
        c = "a" if i > 0 else "b"
        out.append(c if e == 1 else c.upper())
    return free_reduce("".join(out))


# diagrams ----------------------------------------------------------------


@dataclass(frozen=True)
class Jewel:
    u: int
    w: int
    color: int  # +1 white, -1 black
    wind: int


@dataclass(frozen=True)
class Diagram:
    """Diagram on ``[0,N] x [0,L]``: jewel squares and the successor of every
    other square along its cycle."""

    N: int
    L: int
    jewel_squares: frozenset
    succ: dict

    def edges(self):
        return self.succ.items()

    def winding(self, u: int, w: int) -> int:
        """Sum over cycles of the winding number around square ``(u, w)``.

        Counts signed crossings of the ray from the square's centre in the
        ``+u`` direction; counterclockwise is positive.
        """
        total = 0
        for (a, b), (c, e) in self.succ.items():
            if a == c and a > u:
                if b == w and e == w + 1:
                    total += 1
                elif b == w + 1 and e == w:
                    total -= 1
        return total

    def jewels(self) -> list:
        """Jewels in order: by column, then from top to bottom within a column."""
        winds = self._winds()
        out = [
            Jewel(u, w, 1 if (u + w) % 2 == 0 else -1, winds.get((u, w), 0))
            for u, w in self.jewel_squares
        ]
        out.sort(key=lambda j: (j.u, -j.w))
        return out

    def _winds(self) -> dict:
        # one sweep per row instead of one ray per jewel
        crossings: dict = {}
        for (a, b), (c, e) in self.succ.items():
            if a == c and abs(b - e) == 1:
                row = min(b, e)
                crossings.setdefault(row, []).append((a, 1 if e > b else -1))
        winds = {}
        for u, w in self.jewel_squares:
            winds[(u, w)] = sum(s for a, s in crossings.get(w, ()) if a > u)
        return winds

    def cycles(self) -> list:
        """Cycles as lists of squares; length-two cycles are trivial."""
        seen = set()
        out = []
        for s in sorted(self.succ):
            if s in seen:
                continue
            cyc = [s]
            seen.add(s)
            nxt = self.succ[s]
            while nxt != s:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self.succ[nxt]
            out.append(cyc)
        return out


def thin_length(d: Disk) -> int:
    xs = {a for a, _ in d.squares}
    L = len(xs)
    if d.parity != 0 or d.squares != rectangle(L, 2).squares or L < 1:
        raise TilingError("base is not a thin rectangle [0,L] x [0,2]")
    return L


def thin_disk(L: int) -> Disk:
    return rectangle(L, 2)


def build_diagram(t: Tiling3D) -> Diagram:
    d = t.disk
    L = thin_length(d)
    n = len(d)
    N = t.height
    cells = to_cells(t)
    jewels = set()
    succ = {}
    for z in range(N):
        for i, (x, y) in enumerate(d.squares):
            code = cells[z * n + i]
            if code in (PY, PY + 1):
                jewels.add((z, x))
                continue
            if (x + y + z) % 2:
                continue  # only white cubes emit their edge
            if code == PX:
                succ[(z, x)] = (z, x + 1)
            elif code == PX + 1:
                succ[(z, x)] = (z, x - 1)
            elif code == PZ:
                succ[(z, x)] = (z + 1, x)
            elif code == MZ:
                succ[(z, x)] = (z - 1, x)
            else:
                raise TilingError("diagrams need a cylinder tiling")
    return Diagram(N, L, frozenset(jewels), succ)


def tiling_from_diagram(diag: Diagram) -> Tiling3D:
    """Rebuild the tiling: the edge leaving square ``(u, w)`` lies on the duplex
    floor given by the parity of ``u + w``."""
    L, N = diag.L, diag.N
    d = thin_disk(L)
    n = len(d)
    cells = bytearray(n * N)
    for u, w in diag.jewel_squares:
        cells[u * n + d.index[(w, 0)]] = PY
        cells[u * n + d.index[(w, 1)]] = PY + 1
    for (u, w), (u2, w2) in diag.succ.items():
        y = (u + w) % 2
        a = u * n + d.index[(w, y)]
        b = u2 * n + d.index[(w2, y)]
        if u2 == u + 1:
            cells[a], cells[b] = PZ, MZ
        elif u2 == u - 1:
            cells[a], cells[b] = MZ, PZ
        elif w2 == w + 1:
            cells[a], cells[b] = PX, PX + 1
        elif w2 == w - 1:
            cells[a], cells[b] = PX + 1, PX
        else:
            raise TilingError("diagram edge is not a unit step")
    t = from_cells(d, bytes(cells))
    t.validate()
    return t


def phi_thin(t: Tiling3D) -> tuple:
    """The word ``b_1 ... b_k`` over ordered jewels, ``b = a_wind ** color``."""
    if t.height % 2:
        raise TilingError("the invariant is defined for even heights")
    diag = build_diagram(t)
    return tuple((j.wind, j.color) for j in diag.jewels() if j.wind)


def phi_normal(t: Tiling3D) -> tuple:
    return raag_normal_form(phi_thin(t), build_diagram(t).L)


def ring(cu: int, cw: int, r: int, ccw: bool = True) -> list:
    """Squares at Chebyshev distance ``r`` from ``(cu, cw)`` in cyclic order."""
    out = []
    u, w = cu + r, cw - r
    for du, dw, steps in ((0, 1, 2 * r), (-1, 0, 2 * r), (0, -1, 2 * r), (1, 0, 2 * r)):
        for _ in range(steps):
            out.append((u, w))
            u, w = u + du, w + dw
    return out if ccw else [out[0]] + out[:0:-1]


def boxed_diagram(L: int, i: int, x_offset: int = 0) -> Diagram:
    k = max_index(L)
    if i == 0 or abs(i) > k:
        raise ValueError(f"wind {i} out of range 0 < |i| <= {k}")
    m = abs(i)
    N = 2 * m + 2
    if x_offset < 0 or x_offset + 2 * m + 1 > L:
        raise ValueError("box does not fit in the rectangle")
    cu, cw = m, m + x_offset
    succ = {}
    for r in range(1, m + 1):
        cyc = ring(cu, cw, r, ccw=i > 0)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            succ[a] = b
    jewels = frozenset((u, w) for u in range(N) for w in range(L) if (u, w) not in succ)
    return Diagram(N, L, jewels, succ)


def boxed_tiling(L: int, i: int, x_offset: int = 0) -> Tiling3D:
    """Generator tiling of height ``2(|i| + 1)``: one jewel of wind ``i`` inside
    ``|i|`` concentric cycles, trivial jewels elsewhere."""
    return tiling_from_diagram(boxed_diagram(L, i, x_offset))


_ARROWS = {(1, 0): ">", (-1, 0): "<", (0, 1): "^", (0, -1): "v"}


def format_diagram(diag: Diagram) -> str:
    """Debug picture, two characters per square, ``w`` growing upwards.

    Jewels show their wind (``' .'`` when zero); other squares show the
    direction of their outgoing edge.
    """
    winds = diag._winds()
    rows = []
    for w in range(diag.L - 1, -1, -1):
        row = []
        for u in range(diag.N):
            if (u, w) in diag.jewel_squares:
                x = winds[(u, w)]
                row.append(" ." if x == 0 else f"{x:+d}"[-2:] if abs(x) < 10 else "**")
            else:
                u2, w2 = diag.succ[(u, w)]
                row.append(" " + _ARROWS[(u2 - u, w2 - w)])
        rows.append("".join(row))
    return "\n".join(rows) + "\n"
