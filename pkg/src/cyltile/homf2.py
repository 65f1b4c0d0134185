"""Free-group words and floor-by-floor homomorphisms to F2 = <a, b>.

Words are strings over ``a, b, A, B`` where the capital letter is the inverse;
the empty string is the identity.

A classifier sorts floors into classes ``F_j``. Membership of ``F_j`` needs a
given domino among the horizontal dominoes and two square masks contained in
the bottom and top plugs. Odd classes are the inverses of even ones, so they
use the same domino with the masks swapped. A floor with parity maps to a
letter through a table indexed by ``(class, parity)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .board import (
    Disk,
    DiskError,
    components,
    enumerate_plugs,
    iter_bits,
    spanning_tree,
)
from .cylinder import (
    Tiling3D,
    TilingError,
    concat_all,
    empty_floor,
    floor_tiling,
    invert,
    tiling_from_plug,
)
from .floorplan import Floor, FloorWithParity

# words -------------------------------------------------------------------

_INV = {"a": "A", "b": "B", "A": "a", "B": "b"}


def free_reduce(w: str) -> str:
    out: list = []
    for c in w:
        if c not in _INV:
            raise ValueError(f"bad letter {c!r}")
        if out and out[-1] == _INV[c]:
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def word_mul(*ws: str) -> str:
    return free_reduce("".join(ws))


def word_inv(w: str) -> str:
    return "".join(_INV[c] for c in reversed(w))


def parse_word(text: str) -> str:
    """Accepts ``"e"``, ``"aB"`` or ``"a b^-1"`` style input."""
    text = text.strip()
    if text in ("", "e", "1"):
        return ""
    out = []
    for tok in text.replace("*", " ").split():
        if tok.endswith("^-1"):
            out.append(word_inv(tok[:-3]))
        else:
            out.append(tok)
    return free_reduce("".join(out))


def format_word(w: str) -> str:
    if not w:
        return "e"
    return " ".join(c if c.islower() else c.lower() + "^-1" for c in w)


# classifiers -------------------------------------------------------------

TWO_CLASS = {(0, 0): "a", (1, 0): "b", (1, 1): "A", (0, 1): "B"}
FOUR_CLASS_CROSSED = {
    (0, 0): "a", (1, 0): "b", (2, 0): "b", (3, 0): "a",
    (0, 1): "B", (1, 1): "A", (2, 1): "A", (3, 1): "B",
}
FOUR_CLASS_PARALLEL = {
    (0, 0): "a", (1, 0): "b", (2, 0): "A", (3, 0): "B",
    (0, 1): "B", (1, 1): "A", (2, 1): "b", (3, 1): "a",
}

SCHEMES = (
    "square-cut",
    "square-cut-units",
    "domino-cut-single",
    "domino-cut-double",
    "block-cut-parallel",
    "block-cut-crossed",
    "single-floor",
)


@dataclass(frozen=True)
class FloorClass:
    domino: tuple
    bottom: int  # squares the bottom plug must contain
    top: int  # squares the top plug must contain

    def inverse(self) -> "FloorClass":
        return FloorClass(self.domino, self.top, self.bottom)

    def contains(self, f: Floor) -> bool:
        return (
            self.domino in f.fstar
            and f.p0 & self.bottom == self.bottom
            and f.p1 & self.top == self.top
        )


@dataclass(frozen=True)
class FloorClassifier:
    scheme: str
    disk: Disk
    classes: tuple  # F_0, F_1, ... with F_{2k+1} the inverse of F_{2k}
    table: dict
    anchor: dict = field(default_factory=dict, compare=False)

    def classes_of(self, f: Floor) -> list:
        return [j for j, c in enumerate(self.classes) if c.contains(f)]

    def describe(self) -> dict:
        d = self.disk
        out = {"scheme": self.scheme}
        for k, v in self.anchor.items():
            out[k] = _describe_value(d, v)
        return out


def _describe_value(d: Disk, v):
    if isinstance(v, Square):
        return list(d.squares[v.i])
    if isinstance(v, tuple) and len(v) == 2 and all(isinstance(x, int) for x in v):
        return [list(d.squares[v[0]]), list(d.squares[v[1]])]
    if isinstance(v, Mask):
        return [list(sq) for sq in d.squares_of(v.m)]
    if isinstance(v, list):
        return [_describe_value(d, x) for x in v]
    return v


@dataclass(frozen=True)
class Square:
    i: int


@dataclass(frozen=True)
class Mask:
    m: int


def _pairs(classes: list) -> tuple:
    out = []
    for c in classes:
        out.extend([c, c.inverse()])
    return tuple(out)


def classify_floor(c: FloorClassifier, f: FloorWithParity) -> str:
    """Letter of a floor with parity; ``""`` (the identity) when the floor lies
    in no class or in more than one."""
    floor, parity = f
    js = c.classes_of(floor)
    if len(js) != 1:
        return ""
    return c.table[(js[0], parity % 2)]


def eval_hom(c: FloorClassifier, t: Tiling3D, allow_odd: bool = False) -> str:
    if t.disk != c.disk:
        raise DiskError("tiling and classifier live on different disks")
    if t.height % 2 and not allow_odd:
        raise TilingError("the homomorphism is defined on even heights")
    return free_reduce("".join(classify_floor(c, fp) for fp in t.floors_with_parity()))


# anchors -----------------------------------------------------------------


def _mask_color(d: Disk, mask: int, color: int) -> int:
    return mask & (d.white_mask if color == 0 else d.black_mask)


def _adjacent(d: Disk, i: int, mask: int) -> list:
    return sorted(j for j in d.nb[i] if j >= 0 and mask >> j & 1)


def _touches(d: Disk, dom: tuple, mask: int) -> bool:
    return any(_adjacent(d, i, mask) for i in dom)


def _sorted_components(d: Disk, mask: int) -> list:
    comps = components(d, mask)
    comps.sort(key=lambda m: (bin(m).count("1"), (m & -m).bit_length()))
    return comps


def _size(m: int) -> int:
    return bin(m).count("1")


def blocks(d: Disk) -> list:
    """2x2 squares of the disk as sorted index 4-tuples."""
    out = []
    for i, (a, b) in enumerate(d.squares):
        sq = [(a, b), (a + 1, b), (a, b + 1), (a + 1, b + 1)]
        if all(s in d.index for s in sq):
            out.append(tuple(sorted(d.index[s] for s in sq)))
    return out


def block_dominoes(d: Disk, blk: tuple) -> list:
    return [(i, j) for i in blk for j in blk if i < j and j in d.nb[i]]


@dataclass
class Rejection:
    scheme: str
    where: object
    reason: str


def square_cut_classifier(d: Disk, s: int, rejected: Optional[list] = None) -> Optional[FloorClassifier]:
    """Classifier for a square whose removal leaves at least three components."""
    rest = d.full_mask & ~(1 << s)
    comps = _sorted_components(d, rest)
    if len(comps) < 3:
        return None
    if _size(comps[-1]) > len(d) - 4:
        if rejected is not None:
            rejected.append(Rejection("square-cut", Square(s), f"largest component has {_size(comps[-1])} > |D|-4 squares"))
        return None
    sq = [_adjacent(d, s, c)[0] for c in comps]
    doms = [(min(s, x), max(s, x)) for x in sq]
    if len(comps) >= 4 and all(_size(c) == 1 for c in comps[:3]):
        cls = FloorClass(doms[0], 1 << sq[1], 1 << sq[2])
        scheme = "square-cut-units"
    else:
        marked = [comps[0] & ~(1 << sq[0]), comps[1]]
        if len(comps) >= 4:
            marked.append(comps[2])
        bottom = top = 0
        for k, m in enumerate(marked):
            # colours alternate from one marked component to the next
            bottom |= _mask_color(d, m, k % 2)
            top |= _mask_color(d, m, 1 - k % 2)
        cls = FloorClass(doms[0], bottom, top)
        scheme = "square-cut"
    anchor = {
        "square": Square(s),
        "components": [Mask(c) for c in comps],
        "sizes": [_size(c) for c in comps],
        "neighbours": [Square(x) for x in sq],
        "dominoes": doms,
    }
    return FloorClassifier(scheme, d, _pairs([cls]), TWO_CLASS, anchor)


def domino_cut_classifier(d: Disk, dom: tuple, rejected: Optional[list] = None) -> Optional[FloorClassifier]:
    """Classifier for a disconnecting domino lying in a 2x2 square."""
    i, j = dom
    rest = d.full_mask & ~(1 << i) & ~(1 << j)
    comps = components(d, rest)
    if len(comps) < 2:
        return None
    blks = [b for b in blocks(d) if i in b and j in b]
    if not blks:
        if rejected is not None:
            rejected.append(Rejection("domino-cut", dom, "no 2x2 square contains the domino"))
        return None
    touched = []
    for b in blks:
        other = [x for x in b if x not in dom]
        comp = next(c for c in comps if c >> other[0] & 1)
        touched.append(comp)
    limit = (len(d) - 2) / 2
    for c in set(touched):
        if _size(c) > limit:
            if rejected is not None:
                rejected.append(Rejection("domino-cut", dom, f"component of size {_size(c)} > (|D|-2)/2"))
            return None
    anchor = {"domino": dom, "components": [Mask(c) for c in comps], "sizes": [_size(c) for c in comps]}
    if len(blks) == 1:
        d0 = touched[0]
        cls = FloorClass(dom, _mask_color(d, d0, 1), _mask_color(d, d0, 0))
        anchor["marked"] = [Mask(d0)]
        return FloorClassifier("domino-cut-single", d, _pairs([cls]), TWO_CLASS, anchor)
    d1, d2 = touched
    if d1 == d2:
        if rejected is not None:
            rejected.append(Rejection("domino-cut", dom, "both 2x2 squares meet the same component"))
        return None
    if _size(d1) > _size(d2):
        d1, d2 = d2, d1
    bottom = _mask_color(d, d1, 1) | _mask_color(d, d2, 0)
    top = _mask_color(d, d1, 0) | _mask_color(d, d2, 1)
    anchor["marked"] = [Mask(d1), Mask(d2)]
    return FloorClassifier("domino-cut-double", d, _pairs([FloorClass(dom, bottom, top)]), TWO_CLASS, anchor)


def block_cut_classifiers(d: Disk, blk: tuple, rejected: Optional[list] = None) -> list:
    """Classifiers for a 2x2 square splitting the disk into two equal halves."""
    rest = d.full_mask
    for x in blk:
        rest &= ~(1 << x)
    comps = components(d, rest)
    if len(comps) != 2:
        return []
    D1, D2 = comps
    if _size(D1) != _size(D2):
        if rejected is not None:
            rejected.append(Rejection("block-cut", [Square(x) for x in blk], f"halves of sizes {_size(D1)} and {_size(D2)}"))
        return []

    def cuts_off(dom, half):
        # removing the domino leaves this half as a component of its own
        m = d.full_mask & ~(1 << dom[0]) & ~(1 << dom[1])
        return half in components(d, m)

    doms = block_dominoes(d, blk)
    c1 = [x for x in doms if _touches(d, x, D1) and cuts_off(x, D1)]
    c2 = [x for x in doms if _touches(d, x, D2) and cuts_off(x, D2)]
    out = []
    for x, y in product(c1, c2):
        if x == y:
            continue
        par = _parallel(d, x, y)
        f0 = FloorClass(x, _mask_color(d, D1, 1), _mask_color(d, D1, 0))
        # parallel dominoes see the two halves with opposite colour roles
        role = 0 if par else 1
        f2 = FloorClass(y, _mask_color(d, D2, role), _mask_color(d, D2, 1 - role))
        scheme = "block-cut-parallel" if par else "block-cut-crossed"
        table = FOUR_CLASS_PARALLEL if par else FOUR_CLASS_CROSSED
        anchor = {
            "block": [Square(x) for x in blk],
            "dominoes": [x, y],
            "components": [Mask(D1), Mask(D2)],
            "sizes": [_size(D1), _size(D2)],
        }
        out.append(FloorClassifier(scheme, d, _pairs([f0, f2]), table, anchor))
    if not out and rejected is not None:
        rejected.append(Rejection("block-cut", [Square(x) for x in blk], "no pair of disconnecting dominoes next to both halves"))
    return out


def _parallel(d: Disk, x: tuple, y: tuple) -> bool:
    from .floorplan import domino_direction

    return domino_direction(d, x) == domino_direction(d, y)


def _sq(d: Disk, idx) -> list:
    return [d.squares[i] for i in idx]


def find_anchors(d: Disk, rejected: Optional[list] = None) -> list:
    """Every classifier the cut criteria provide for ``d``.

    Pass a list as ``rejected`` to collect candidates that fail a size or
    shape condition, with the reason.
    """
    if not d.balanced:
        return []
    out = []
    for s in range(len(d)):
        c = square_cut_classifier(d, s, rejected)
        if c is not None:
            out.append(c)
    for dom in d.adjacency_edges():
        c = domino_cut_classifier(d, dom, rejected)
        if c is not None:
            out.append(c)
    for blk in blocks(d):
        out.extend(block_cut_classifiers(d, blk, rejected))
    return out


def single_floor_classifier(d: Disk, p0: int, dom: tuple, p1: int) -> FloorClassifier:
    """Classes ``{f}`` and ``{f^-1}`` for one floor ``f = (p0, {dom}, p1)``."""
    f = Floor(p0, (dom,), p1)
    from .cylinder import validate_floors

    validate_floors(d, (f,), p0, p1)
    anchor = {"bottom": Mask(p0), "domino": dom, "top": Mask(p1)}
    return FloorClassifier("single-floor", d, _pairs([FloorClass(dom, p0, p1)]), TWO_CLASS, anchor)


# witnesses ---------------------------------------------------------------


@dataclass
class Witness:
    tiling: Tiling3D
    image: str
    construction: str


def _trees(c: FloorClassifier, all_roots: bool = False) -> list:
    d = c.disk
    doms = sorted({cl.domino for cl in c.classes})
    out = []
    seen = set()
    for avoid in (doms, doms[:1], None):
        for root in range(len(d)) if all_roots else (0,):
            try:
                t = spanning_tree(d, avoid=avoid, root=root)
            except DiskError:
                break
            if t.edges not in seen:
                seen.add(t.edges)
                out.append(t)
    return out


def _class_bottoms(c: FloorClassifier, cls: FloorClass) -> list:
    """Plugs ``p0`` with ``(p0, {dom}, D - p0 - dom)`` in the class, by mask."""
    d = c.disk
    i, j = cls.domino
    out = []
    for p0 in enumerate_plugs(d):
        if p0 >> i & 1 or p0 >> j & 1:
            continue
        p1 = d.full_mask & ~p0 & ~(1 << i) & ~(1 << j)
        if cls.contains(Floor(p0, (cls.domino,), p1)):
            out.append(p0)
    return out


def _constructions(c: FloorClassifier, cls: FloorClass, p0: int, tree):
    d = c.disk
    i, j = cls.domino
    p1 = d.full_mask & ~p0 & ~(1 << i) & ~(1 << j)
    f = Floor(p0, (cls.domino,), p1)
    ft = floor_tiling(d, f)
    tp = lambda p: tiling_from_plug(d, p, tree)  # noqa: E731
    # f between a cork from the empty plug and a cork back to it
    yield "cork-floor-empty-cork", concat_all(
        invert(tp(p0)), ft, floor_tiling(d, empty_floor(d, p1)), tp(d.full_mask & ~p1)
    )
    yield "cork-inverse-floor-empty-cork", concat_all(
        invert(tp(p1)), invert(ft), floor_tiling(d, empty_floor(d, p0)), tp(d.full_mask & ~p0)
    )
    # with a connecting single-domino floor g in front of f
    for s in (i, j):
        for x in d.neighbors(s):
            if x in (i, j) or not p1 >> x & 1:
                continue
            other = j if s == i else i
            p = (p1 & ~(1 << x)) | (1 << other)
            if d.color(x) != d.color(other):
                continue
            g = Floor(p, ((min(s, x), max(s, x)),), p0)
            yield "cork-step-floor-cork", concat_all(invert(tp(p)), floor_tiling(d, g), ft, tp(p1))
        for x in d.neighbors(s):
            if x in (i, j) or not p0 >> x & 1:
                continue
            other = j if s == i else i
            p = (p0 & ~(1 << x)) | (1 << other)
            if d.color(x) != d.color(other):
                continue
            g = Floor(p, ((min(s, x), max(s, x)),), p1)
            yield "cork-step-inverse-floor-cork", concat_all(
                invert(tp(p)), floor_tiling(d, g), invert(ft), tp(p0)
            )


def surjectivity_witnesses(c: FloorClassifier, max_bottoms: int = 40) -> tuple:
    """Tilings with images ``a`` and ``b``, built from spanning-tree corks.

    Tries the constructions around a single-domino floor of each class in
    turn, over class bottoms in mask order and a family of spanning trees,
    together with their inverses; the first tiling evaluating to each letter
    wins. A letter the constructions miss falls back to
    :func:`shortest_tiling_with_image`.
    """
    found: dict = {}
    trees = _trees(c)
    for k, cls in enumerate(c.classes):
        for p0 in _class_bottoms(c, cls)[:max_bottoms]:
            for tree in trees:
                for name, t in _constructions(c, cls, p0, tree):
                    t.validate()
                    for label, u in ((name, t), ("inverse of " + name, invert(t))):
                        img = eval_hom(c, u)
                        if img in ("a", "b") and img not in found:
                            found[img] = Witness(u, img, f"{label} (class {k})")
                    if len(found) == 2:
                        return found["a"], found["b"]
    for letter in ("a", "b"):
        if letter not in found:
            t = shortest_tiling_with_image(c, letter)
            if t is not None:
                found[letter] = Witness(t, letter, "shortest closed path in the plug graph")
    if len(found) == 2:
        return found["a"], found["b"]
    raise TilingError(f"no witnesses found for scheme {c.scheme}")


def shortest_tiling_with_image(c: FloorClassifier, target: str, max_height: int = 16, max_word: int = 3):
    """Breadth-first search over (plug, reduced word so far) for a lowest
    cylinder tiling with image ``target``; words longer than ``max_word`` are
    pruned. Returns ``None`` when nothing is found up to ``max_height``."""
    from .floorplan import floors_from

    d = c.disk
    start = (0, "")
    frontier = {start: None}
    back = []  # per height: state -> (previous state, floor)
    for h in range(1, max_height + 1):
        nxt: dict = {}
        for (p, w) in frontier:
            for f in floors_from(d, p):
                w2 = free_reduce(w + classify_floor(c, FloorWithParity(f, h % 2)))
                if len(w2) > max_word:
                    continue
                key = (f.p1, w2)
                if key not in nxt:
                    nxt[key] = ((p, w), f)
        back.append(nxt)
        frontier = nxt
        if h % 2 == 0 and (0, target) in nxt:
            floors = []
            key = (0, target)
            for level in reversed(back):
                prev, f = level[key]
                floors.append(f)
                key = prev
            return Tiling3D(d, tuple(reversed(floors)))
    return None


def local_invariance(c: FloorClassifier, limit: Optional[int] = None) -> tuple:
    """Check that every flip preserves the image, window by window.

    A flip changes one floor or two consecutive floors, so it is enough to
    look at all two-floor windows between arbitrary plugs, under both
    parities. Returns ``(windows checked, violations)``; each violation is
    ``(window, flipped window, parity)``.
    """
    from .flipdyn import apply_move, flip_moves, from_cells, to_cells
    from .floorplan import floors_from

    d = c.disk
    checked = 0
    bad = []
    for p0 in enumerate_plugs(d):
        for f1 in floors_from(d, p0):
            for f2 in floors_from(d, f1.p1):
                w = Tiling3D(d, (f1, f2), p0, f2.p1)
                cells = to_cells(w)
                checked += 1
                for mv in flip_moves(d, cells):
                    u = from_cells(d, apply_move(cells, mv), p0, f2.p1)
                    for k in (0, 1):
                        lhs = free_reduce(classify_floor(c, (f1, k)) + classify_floor(c, (f2, 1 - k)))
                        g1, g2 = u.floors
                        rhs = free_reduce(classify_floor(c, (g1, k)) + classify_floor(c, (g2, 1 - k)))
                        if lhs != rhs:
                            bad.append((w, u, k))
                if limit is not None and checked >= limit:
                    return checked, bad
    return checked, bad


def flip_sweep(c: FloorClassifier, n: int, budget: Optional[int] = None) -> dict:
    """Evaluate the image on both ends of every flip edge of ``D x [0, n]``."""
    from .cylinder import BudgetExceeded, count_tilings, default_budget, iter_floor_sequences
    from .flipdyn import apply_move, flip_moves, to_cells

    d = c.disk
    if budget is None:
        budget = default_budget()
    total = count_tilings(d, n)
    if total > budget:
        raise BudgetExceeded(f"{total} tilings exceed the enumeration budget {budget}")
    # image of every tiling, keyed by its cube array; neighbours are looked up
    image: dict = {}
    for floors in iter_floor_sequences(d, n):
        t = Tiling3D(d, floors)
        image[to_cells(t)] = eval_hom(c, t, allow_odd=True)
    edges = violations = 0
    for cells, img in image.items():
        for mv in flip_moves(d, cells):
            edges += 1
            if image[apply_move(cells, mv)] != img:
                violations += 1
    return {"height": n, "tilings": total, "edges": edges, "violations": violations}


def single_floor_candidates(d: Disk) -> list:
    """Classifiers ``{f}, {f^-1}`` for every floor with one horizontal domino,
    keeping those that pass :func:`local_invariance`.

    This is a search, not a criterion: it is meant for small disks that no cut
    criterion covers.
    """
    out = []
    for p0 in enumerate_plugs(d):
        for i, j in d.adjacency_edges():
            if (p0 >> i | p0 >> j) & 1:
                continue
            p1 = d.full_mask & ~p0 & ~(1 << i) & ~(1 << j)
            if bin(p1).count("1") != bin(p0).count("1") or p1 & p0:
                continue
            try:
                c = single_floor_classifier(d, p0, (i, j), p1)
            except TilingError:
                continue
            _, bad = local_invariance(c)
            if not bad:
                out.append(c)
    return out


def _witness_ref(w: Witness) -> dict:
    from .cylinder import format_tiling

    return {"height": w.tiling.height, "construction": w.construction, "tiling": format_tiling(w.tiling)}


def irregularity_report(
    d: Disk, heights=(2, 4), budget: Optional[int] = None, witnesses: bool = True, search_single: bool = False
) -> dict:
    """Anchors, surjectivity witnesses and invariance checks for one disk.

    With ``search_single`` the single-floor search runs when no cut
    criterion applies.
    """
    from .cylinder import BudgetExceeded

    rejected: list = []
    classifiers = find_anchors(d, rejected)
    if not classifiers and search_single:
        classifiers = single_floor_candidates(d)[:1]
    report = {
        "squares": [list(sq) for sq in d.squares],
        "anchors": [],
        "rejected": [{"scheme": r.scheme, "where": _describe_value(d, r.where), "reason": r.reason} for r in rejected],
    }
    for c in classifiers:
        entry = c.describe()
        if witnesses:
            wa, wb = surjectivity_witnesses(c)
            ok = eval_hom(c, wa.tiling) == "a" and eval_hom(c, wb.tiling) == "b"
            entry["witnesses"] = {"a": _witness_ref(wa), "b": _witness_ref(wb), "ok": ok}
        checked, bad = local_invariance(c)
        inv = {"windows": checked, "window_violations": len(bad), "sweeps": []}
        for n in heights:
            try:
                inv["sweeps"].append(flip_sweep(c, n, budget))
            except BudgetExceeded as e:
                inv["sweeps"].append({"height": n, "skipped": str(e)})
        entry["invariance"] = inv
        report["anchors"].append(entry)
    return report
