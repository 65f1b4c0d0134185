"""Quadriculated disks, plugs and spanning trees.

Squares are addressed by their lower-left corner ``(a, b)`` and, everywhere
else in the package, by their index in the canonical (lexicographic) order of
the disk. Subsets of squares (plugs, residual regions) are plain ``int``
bitmasks over those indices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Optional, Sequence

MAX_SQUARES = 64

# direction codes shared with the 3D code: +x, -x, +y, -y
PX, MX, PY, MY = 0, 1, 2, 3
STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


class DiskError(ValueError):
    """Raised for malformed or invalid disk/plug input."""


@dataclass(frozen=True)
class Disk:
    """A simply connected union of unit squares.

    ``parity`` shifts the checkerboard: square ``(a, b)`` is white iff
    ``a + b + parity`` is even.
    """

    squares: tuple
    parity: int = 0
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "squares", tuple(sorted(set(self.squares))))
        object.__setattr__(self, "parity", self.parity % 2)
        index = {sq: i for i, sq in enumerate(self.squares)}
        nb = []
        for a, b in self.squares:
            nb.append(tuple(index.get((a + dx, b + dy), -1) for dx, dy in STEPS))
        self._cache["index"] = index
        self._cache["nb"] = tuple(nb)

    @classmethod
    def from_squares(cls, squares: Iterable, parity: int = 0, validate: bool = True) -> "Disk":
        d = cls(tuple(squares), parity)
        if validate:
            validate_disk(d)
        return d

    def __len__(self):
        return len(self.squares)

    @property
    def index(self) -> dict:
        return self._cache["index"]

    @property
    def nb(self) -> tuple:
        """``nb[i][direction]`` is the neighbouring square index or -1."""
        return self._cache["nb"]

    @property
    def full_mask(self) -> int:
        return (1 << len(self.squares)) - 1

    def color(self, i: int) -> int:
        """0 for white, 1 for black."""
        a, b = self.squares[i]
        return (a + b + self.parity) % 2

    def is_white(self, i: int) -> bool:
        return self.color(i) == 0

    @property
    def white_mask(self) -> int:
        if "white" not in self._cache:
            self._cache["white"] = sum(1 << i for i in range(len(self)) if self.color(i) == 0)
        return self._cache["white"]

    @property
    def black_mask(self) -> int:
        return self.full_mask & ~self.white_mask

    @property
    def n_white(self) -> int:
        return bin(self.white_mask).count("1")

    @property
    def n_black(self) -> int:
        return len(self) - self.n_white

    @property
    def balanced(self) -> bool:
        return self.n_white == self.n_black

    def neighbors(self, i: int) -> list:
        return sorted(j for j in self.nb[i] if j >= 0)

    def adjacency_edges(self) -> list:
        """All adjacent pairs ``(i, j)`` with ``i < j`` in canonical order."""
        return sorted((i, j) for i in range(len(self)) for j in self.nb[i] if j > i)

    def square_index(self, a: int, b: int) -> int:
        try:
            return self.index[(a, b)]
        except KeyError:
            raise DiskError(f"square ({a}, {b}) is not in the disk") from None

    def mask_of(self, squares: Iterable) -> int:
        m = 0
        for sq in squares:
            m |= 1 << self.square_index(*sq)
        return m

    def squares_of(self, mask: int) -> list:
        return [self.squares[i] for i in iter_bits(mask)]

    def domino(self, sq1, sq2) -> tuple:
        """Index pair of the domino formed by two adjacent squares."""
        i, j = sorted((self.square_index(*sq1), self.square_index(*sq2)))
        if j not in self.nb[i]:
            raise DiskError(f"squares {sq1} and {sq2} are not adjacent")
        return (i, j)

    def translate(self, dx: int, dy: int) -> "Disk":
        return Disk(tuple((a + dx, b + dy) for a, b in self.squares), (self.parity + dx + dy) % 2)


def iter_bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def is_balanced_mask(d: Disk, mask: int) -> bool:
    return popcount(mask & d.white_mask) == popcount(mask & ~d.white_mask)


def complement(d: Disk, plug: int) -> int:
    """The inverse plug ``D minus p``."""
    return d.full_mask & ~plug


def components(d: Disk, mask: int) -> list:
    """Edge-connected components of the squares in ``mask``.

    Returned as bitmasks ordered by their smallest square index.
    """
    seen = 0
    out = []
    for start in iter_bits(mask):
        if seen >> start & 1:
            continue
        comp = 1 << start
        stack = [start]
        while stack:
            i = stack.pop()
            for j in d.nb[i]:
                if j >= 0 and mask >> j & 1 and not comp >> j & 1:
                    comp |= 1 << j
                    stack.append(j)
        seen |= comp
        out.append(comp)
    return out


def validate_disk(d: Disk) -> None:
    if not d.squares:
        raise DiskError("empty disk")
    if len(components(d, d.full_mask)) != 1:
        raise DiskError("region is not edge-connected")
    xs = [a for a, _ in d.squares]
    ys = [b for _, b in d.squares]
    x0, x1, y0, y1 = min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1
    present = set(d.squares)
    outside = {(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)} - present
    start = (x0, y0)
    seen = {start}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        for dx, dy in STEPS:
            c = (x + dx, y + dy)
            if c in outside and c not in seen:
                seen.add(c)
                queue.append(c)
    if len(seen) != len(outside):
        raise DiskError("region has a hole (not simply connected)")


def parse_grid(text: str) -> dict:
    """Map of ``(a, b) -> char`` for every non-blank cell of an ASCII grid."""
    rows = text.splitlines()
    while rows and rows[-1] == "":
        rows.pop()
    R = len(rows)
    cells = {}
    for r, line in enumerate(rows):
        for c, ch in enumerate(line):
            if ch not in ". ":
                cells[(c, R - 1 - r)] = ch
    return cells


def parse_disk(text: str, parity: int = 0) -> Disk:
    """Read a disk from an ASCII grid.

    ``'#'`` (or any plug/tiling marker) is a present square, ``'.'`` or space is
    absent. Row ``r`` from the top and column ``c`` give square ``(c, R-1-r)``.

    >>> d = parse_disk("###\\n###\\n")
    >>> len(d), d.n_white, d.balanced
    (6, 3, True)
    """
    cells = parse_grid(text)
    if not cells:
        raise DiskError("empty input")
    d = Disk(tuple(cells), parity)
    if len(d) > MAX_SQUARES:
        raise DiskError(f"disk has {len(d)} squares; at most {MAX_SQUARES} supported")
    validate_disk(d)
    return d


def read_disk_file(text: str) -> Disk:
    """Disk file: an ASCII grid as for :func:`parse_disk`; lines starting with
    ``;`` are comments, and ``; parity: 1`` shifts the colouring."""
    parity = 0
    grid = []
    for line in text.splitlines():
        if line.startswith(";"):
            key, _, val = line[1:].partition(":")
            if key.strip() == "parity":
                parity = int(val) % 2
            continue
        grid.append(line)
    return parse_disk("\n".join(grid) + "\n", parity)


def load_disk(path) -> Disk:
    with open(path) as fh:
        return read_disk_file(fh.read())


def _grid(d: Disk, char_of) -> str:
    xs = [a for a, _ in d.squares]
    ys = [b for _, b in d.squares]
    lines = []
    for y in range(max(ys), min(ys) - 1, -1):
        row = []
        for x in range(min(xs), max(xs) + 1):
            i = d.index.get((x, y))
            row.append("." if i is None else char_of(i))
        lines.append("".join(row))
    return "\n".join(lines) + "\n"


def format_disk(d: Disk) -> str:
    return _grid(d, lambda i: "#")


def format_plug(d: Disk, plug: int) -> str:
    return _grid(d, lambda i: "o" if plug >> i & 1 else "#")


def parse_plug(text: str, parity: int = 0):
    """Read a plug file; returns ``(disk, mask)``. Plugged squares are ``'o'``."""
    cells = parse_grid(text)
    d = parse_disk(text, parity)
    mask = 0
    for sq, ch in cells.items():
        if ch == "o":
            mask |= 1 << d.index[sq]
        elif ch != "#":
            raise DiskError(f"unexpected character {ch!r} in plug file")
    return d, mask


def disk_info(d: Disk) -> dict:
    return {
        "squares": len(d),
        "white": d.n_white,
        "black": d.n_black,
        "balanced": d.balanced,
        "trivial": is_trivial(d),
    }


def is_trivial(d: Disk) -> bool:
    """True for a 2x2 square or a disk whose squares have at most two neighbours."""
    if len(d) == 4:
        xs = {a for a, _ in d.squares}
        ys = {b for _, b in d.squares}
        if len(xs) == 2 and len(ys) == 2:
            return True
    return all(len(d.neighbors(i)) <= 2 for i in range(len(d)))


def plug_count(d: Disk) -> int:
    w, b = d.n_white, d.n_black
    return sum(comb(w, k) * comb(b, k) for k in range(min(w, b) + 1))


def enumerate_plugs(d: Disk) -> list:
    """All balanced subsets of ``d`` as bitmasks, sorted by mask value."""
    if len(d) > MAX_SQUARES:
        raise DiskError(f"disk has {len(d)} squares; at most {MAX_SQUARES} supported")
    whites = [1 << i for i in range(len(d)) if d.color(i) == 0]
    blacks = [1 << i for i in range(len(d)) if d.color(i) == 1]
    out = []
    for k in range(min(len(whites), len(blacks)) + 1):
        wmasks = [sum(c) for c in combinations(whites, k)]
        bmasks = [sum(c) for c in combinations(blacks, k)]
        out.extend(w | b for w in wmasks for b in bmasks)
    out.sort()
    return out


@dataclass(frozen=True)
class SpanningTree:
    disk: Disk
    edges: frozenset
    parent: tuple
    depth: tuple

    def path(self, i: int, j: int) -> list:
        """Squares on the tree path from ``i`` to ``j`` (both included)."""
        left, right = [i], [j]
        a, b = i, j
        while self.depth[a] > self.depth[b]:
            a = self.parent[a]
            left.append(a)
        while self.depth[b] > self.depth[a]:
            b = self.parent[b]
            right.append(b)
        while a != b:
            a = self.parent[a]
            b = self.parent[b]
            left.append(a)
            right.append(b)
        right.pop()
        return left + right[::-1]

    def distance(self, i: int, j: int) -> int:
        return len(self.path(i, j)) - 1


def spanning_tree(d: Disk, avoid: Optional[Sequence] = None, root: int = 0) -> SpanningTree:
    """BFS spanning tree from ``root``, neighbours visited in index order.

    ``avoid`` is a domino ``(i, j)`` or a collection of dominoes whose edges
    must not be used.
    """
    banned = set()
    if avoid is not None:
        items = [avoid] if isinstance(avoid[0], int) else list(avoid)
        for i, j in items:
            if j not in d.nb[i]:
                raise DiskError(f"({i}, {j}) is not a domino of the disk")
            banned.add((min(i, j), max(i, j)))
    n = len(d)
    parent = [-1] * n
    depth = [-1] * n
    depth[root] = 0
    edges = set()
    queue = deque([root])
    while queue:
        i = queue.popleft()
        for j in d.neighbors(i):
            if depth[j] < 0 and (min(i, j), max(i, j)) not in banned:
                depth[j] = depth[i] + 1
                parent[j] = i
                edges.add((min(i, j), max(i, j)))
                queue.append(j)
    if min(depth) < 0:
        raise DiskError("removing the avoided edges disconnects the disk")
    return SpanningTree(d, frozenset(edges), tuple(parent), tuple(depth))


def rectangle(width: int, height: int, x0: int = 0, y0: int = 0) -> Disk:
    return Disk(tuple((x, y) for x in range(x0, x0 + width) for y in range(y0, y0 + height)))
