"""Random walks on the free group F2 = <a, b>, and block counting in tall tilings.

Words are reduced strings over ``a``, ``b``, ``A`` (a^-1), ``B`` (b^-1).
Words are enumerated by length, then alphabetically with ``a < b < A < B``;
``nth_word(0)`` is the empty word.

All probabilities are exact ``Fraction``s. Comparisons against numbers of
the form ``A + B*sqrt(13)`` are done by squaring.
"""

from __future__ import annotations

import csv
import io
import random
from fractions import Fraction
from math import comb
from typing import Iterable, Optional

from .homf2 import free_reduce, word_inv, word_mul

LETTERS = "abAB"
_INV = {"a": "A", "A": "a", "b": "B", "B": "b"}
_RANK = {c: i for i, c in enumerate(LETTERS)}


# word order --------------------------------------------------------------


def _level_start(k: int) -> int:
    """Index of the first word of length ``k``."""
    return 0 if k == 0 else 2 * 3 ** (k - 1) - 1


def nth_word(n: int) -> str:
    if n < 0:
        raise ValueError("index must be non-negative")
    if n == 0:
        return ""
    k = 1
    while _level_start(k + 1) <= n:
        k += 1
    r = n - _level_start(k)
    # first letter: 4 choices, each followed by 3**(k-1) words
    block = 3 ** (k - 1)
    first, r = divmod(r, block)
    out = [LETTERS[first]]
    for pos in range(k - 1, 0, -1):
        block = 3 ** (pos - 1)
        c, r = divmod(r, block)
        allowed = [x for x in LETTERS if x != _INV[out[-1]]]
        out.append(allowed[c])
    return "".join(out)


def word_index(w: str) -> int:
    if free_reduce(w) != w:
        raise ValueError(f"{w!r} is not reduced")
    k = len(w)
    if k == 0:
        return 0
    r = _RANK[w[0]] * 3 ** (k - 1)
    for pos in range(1, k):
        allowed = [x for x in LETTERS if x != _INV[w[pos - 1]]]
        r += allowed.index(w[pos]) * 3 ** (k - 1 - pos)
    return _level_start(k) + r


def ball(radius: int) -> list:
    """All reduced words of length at most ``radius``, in word order."""
    out = [""]
    level = [""]
    for _ in range(radius):
        # extending each word in order by its allowed letters keeps the order
        level = [w + x for w in level for x in LETTERS if not w or x != _INV[w[-1]]]
        out.extend(level)
    return out


def _times(w: str, x: str) -> str:
    """``w * x`` for a reduced word and a single letter."""
    return w[:-1] if w and w[-1] == _INV[x] else w + x


def neighbors(v: str) -> list:
    """The four words ``va, vb, vA, vB`` (right multiplication)."""
    return [word_mul(v, x) for x in LETTERS]


# weights -----------------------------------------------------------------


def _check_s(s) -> Fraction:
    s = Fraction(s)
    if not 0 < s < Fraction(1, 8):
        raise ValueError("s must lie in (0, 1/8)")
    return s


def weight_terms(M: Iterable[str]) -> dict:
    """``w_M`` as linear forms in ``s``: word -> (constant, coefficient of s)."""
    M = set(M)
    out: dict = {}
    for v in M:
        c, k = out.get(v, (0, 0))
        out[v] = (c + 1, k - 4)
        for u in neighbors(v):
            # v = u x  for some letter x, so v contributes s to w_M(u)
            c, k = out.get(u, (0, 0))
            out[u] = (c, k + 1)
    return {v: t for v, t in out.items() if t != (0, 0)}


def symbolic_profile(M: Iterable[str]) -> list:
    """``x_M`` as a list of linear forms ``(c, k)`` meaning ``c + k*s``.

    The order is valid for every ``s`` in (0, 1/8): larger constant first,
    then larger coefficient.
    """
    terms = list(weight_terms(M).values())
    terms.sort(key=lambda t: (-t[0], -t[1]))
    return terms


def compress(profile: list) -> list:
    """Run-length form ``[(term, multiplicity), ...]`` of a profile."""
    out: list = []
    for t in profile:
        if out and out[-1][0] == t:
            out[-1] = (t, out[-1][1] + 1)
        else:
            out.append((t, 1))
    return out


def weight_profile(M: Iterable[str], s) -> tuple:
    """``(x_M, i_M, boundaries)`` with exact values at ``s``.

    ``boundaries`` counts the interior, interior-boundary and
    exterior-boundary vertices.
    """
    s = _check_s(s)
    terms = weight_terms(M)
    x = sorted((c + k * s for c, k in terms.values()), reverse=True)
    interior = sum(1 for c, k in terms.values() if c == 1 and k == 0)
    inner = sum(1 for c, k in terms.values() if c == 1 and k < 0)
    outer = sum(1 for c, k in terms.values() if c == 0)
    return x, interior, {"interior": interior, "interior_boundary": inner, "exterior_boundary": outer}


def majorizes(x, y) -> bool:
    """Prefix sums of ``x`` dominate those of ``y`` up to the shorter length."""
    sx = sy = 0
    for a, b in zip(x, y):
        sx += a
        sy += b
        if sx < sy:
            return False
    return True


def first_words(m: int) -> list:
    return [nth_word(i) for i in range(m)]


def is_connected(M) -> bool:
    M = set(M)
    if not M:
        return True
    start = next(iter(M))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in neighbors(v):
            if u in M and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(M)


def connected_sets(m: int) -> list:
    """Every connected set of ``m`` words containing ``e``, once each."""
    out = set()
    frontier = {frozenset([""])}
    for _ in range(m - 1):
        nxt = set()
        for S in frontier:
            for v in S:
                for u in neighbors(v):
                    if u not in S:
                        nxt.add(S | {u})
        frontier = nxt
    out = frontier
    return sorted(out, key=lambda S: sorted(map(word_index, S)))


# closed paths ------------------------------------------------------------


def _half_binom(k: int) -> Fraction:
    """Generalized binomial coefficient C(1/2, k)."""
    r = Fraction(1)
    for i in range(k):
        r *= (Fraction(1, 2) - i) / (i + 1)
    return r


def gamma(n: int) -> int:
    """Number of closed paths of length ``2n`` from ``e`` in the Cayley graph."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 1
    total = 1 + 2 * sum((-1) ** k * _half_binom(k) * Fraction(3, 4) ** k for k in range(1, n + 1))
    g = 16**n * total
    assert g.denominator == 1
    return int(g)


def kappa_sequence(n: int) -> list:
    """kappa(0..n): closed paths of length 2k from ``a`` avoiding ``e``."""
    kap = [1]
    for k in range(1, n + 1):
        kap.append(sum(3 * kap[m - 1] * kap[k - m] for m in range(1, k + 1)))
    return kap


def gamma_recurrence(n: int) -> list:
    """gamma(0..n) from the first-return convolution."""
    kap = kappa_sequence(n)
    g = [1]
    for k in range(1, n + 1):
        g.append(sum(4 * kap[m - 1] * g[k - m] for m in range(1, k + 1)))
    return g


def gamma_brute(n: int) -> int:
    """Count walks of length ``2n`` back to ``e`` by tracking explicit words."""
    counts = {"": 1}
    for _ in range(2 * n):
        nxt: dict = {}
        for w, c in counts.items():
            for u in neighbors(w):
                nxt[u] = nxt.get(u, 0) + c
        counts = nxt
    return counts.get("", 0)


def series_mul(f: list, g: list, order: int) -> list:
    return [sum(f[i] * g[k - i] for i in range(k + 1) if i < len(f) and k - i < len(g)) for k in range(order + 1)]


def generating_identities(order: int = 12) -> dict:
    """Residuals of ``3 q k^2 - k + 1`` and ``g - 1 - 4 q k g`` up to ``q**order``."""
    k = [Fraction(x) for x in kappa_sequence(order)]
    g = [Fraction(x) for x in gamma_recurrence(order)]
    k2 = series_mul(k, k, order)
    r1 = [(3 * k2[i - 1] if i else 0) - k[i] + (1 if i == 0 else 0) for i in range(order + 1)]
    kg = series_mul(k, g, order)
    r2 = [g[i] - (1 if i == 0 else 0) - (4 * kg[i - 1] if i else 0) for i in range(order + 1)]
    return {"kappa": r1, "gamma": r2}


# walk laws ---------------------------------------------------------------


def step_law(s) -> dict:
    s = _check_s(s)
    law = {"": 1 - 4 * s}
    for x in LETTERS:
        law[x] = s
    return law


def walk_distribution(t: int, s, y: Optional[list] = None) -> dict:
    """Exact law of ``y0 X1 y1 ... Xt yt`` (plain ``X1 ... Xt`` when ``y`` is None)."""
    s = _check_s(s)
    if y is not None and len(y) != t + 1:
        raise ValueError(f"need {t + 1} interleaving words, got {len(y)}")
    # integer weights over the common denominator q**t
    p, q = s.numerator, s.denominator
    stay = q - 4 * p
    cur = {free_reduce(y[0]) if y else "": 1}
    for i in range(1, t + 1):
        nxt: dict = {}
        yi = y[i] if y else ""
        for w, c in cur.items():
            u = word_mul(w, yi) if yi else w
            nxt[u] = nxt.get(u, 0) + c * stay
            cp = c * p
            for x in LETTERS:
                u = word_mul(w, x, yi) if yi else _times(w, x)
                nxt[u] = nxt.get(u, 0) + cp
        cur = nxt
    den = q**t
    return {w: Fraction(c, den) for w, c in cur.items()}


def probability_table(t: int, s) -> list:
    """``[P(0,t), P(1,t), ...]`` over the ball of radius ``t``."""
    dist = walk_distribution(t, s)
    zero = Fraction(0)
    return [dist.get(w, zero) for w in ball(t)]


def return_probability(t: int, s) -> Fraction:
    """P(0, t) from the closed-path expansion."""
    s = _check_s(s)
    return sum(comb(t, 2 * n) * s ** (2 * n) * (1 - 4 * s) ** (t - 2 * n) * gamma(n) for n in range(t // 2 + 1))


def decay_bound(t: int, s) -> tuple:
    """``(A, B)`` with ``(1 - s(4 - sqrt 13))**t == A + B*sqrt(13)``."""
    s = _check_s(s)
    A, B = Fraction(1), Fraction(0)
    a, b = 1 - 4 * s, s
    for _ in range(t):
        A, B = A * a + 13 * B * b, A * b + B * a
    return A, B


def le_surd(p: Fraction, A: Fraction, B: Fraction) -> bool:
    """Exact test ``p <= A + B*sqrt(13)``."""
    lhs = p - A  # need lhs <= B sqrt 13
    if B >= 0:
        return lhs <= 0 or lhs * lhs <= 13 * B * B
    return lhs <= 0 and lhs * lhs >= 13 * B * B


def decay_holds(p: Fraction, t: int, s) -> bool:
    A, B = decay_bound(t, s)
    return le_surd(p, A, B)


def interleaved_probability(y: list, t: int, s) -> dict:
    """Exact law of ``y0 X1 y1 ... Xt yt`` as word -> probability."""
    return walk_distribution(t, s, y)


def dominance_holds(y: list, t: int, s, m: int) -> bool:
    """Any ``m`` values of Q sum to at most P(0,t) + ... + P(m-1,t)."""
    Q = sorted(interleaved_probability(y, t, s).values(), reverse=True)
    P = probability_table(t, s)
    return sum(Q[:m]) <= sum(P[:m])


def random_word(rng: random.Random, max_len: int) -> str:
    n = rng.randrange(_level_start(max_len + 1))
    return nth_word(n)


# blocks ------------------------------------------------------------------


def block_slots(N: int, N0: int, M: int) -> list:
    """Start floors ``j (2M + N0) + M`` of the windows that fit below ``N``."""
    out = []
    j = 0
    while j * (2 * M + N0) + M + N0 <= N:
        out.append(j * (2 * M + N0) + M)
        j += 1
    return out


def count_blocks(t, B, M: int) -> int:
    """Number of aligned windows of ``t`` equal to a member of ``B``.

    All tilings in ``B`` share one height ``N0``. Since any subset of matching
    windows qualifies, the maximum block count is the number of matches.
    """
    B = list(B)
    if not B:
        return 0
    N0 = B[0].height
    if any(b.height != N0 for b in B):
        raise ValueError("block tilings must share one height")
    if M % 2:
        raise ValueError("M must be even")
    keys = {b.floors for b in B}
    return sum(1 for m in block_slots(t.height, N0, M) if t.floors[m : m + N0] in keys)


def block_set(classifier, witnesses=None):
    """The nine-tile set: witnesses for a and b, their inverses, the vertical
    tiling and four tilings one vertical flip away from it, at one even height."""
    from .cylinder import vertical_tiling
    from .flipdyn import flip_neighbors
    from .homf2 import surjectivity_witnesses

    if witnesses is None:
        witnesses = surjectivity_witnesses(classifier)
    wa, wb = (w.tiling for w in witnesses)
    d = classifier.disk
    N0 = max(wa.height, wb.height)
    if N0 % 2:
        N0 += 1
    pad = lambda t: t * vertical_tiling(d, N0 - t.height) if N0 > t.height else t
    wa, wb = pad(wa), pad(wb)
    vert = vertical_tiling(d, N0)
    near = [u for u in flip_neighbors(vert)]
    near.sort(key=lambda u: u.key())
    return [wa, ~wa, wb, ~wb, vert] + near[:4]


# Monte Carlo -------------------------------------------------------------


def _experiment_row(d, N: int, run_seed: int, samples: int, classifier, blocks, M: int, budget, search_budget: int) -> dict:
    from .cylinder import BudgetExceeded, sample_tiling
    from .flipdyn import component_index, stable_equivalent, to_cells, twist
    from .homf2 import eval_hom

    rng = random.Random(run_seed)
    try:
        labels = component_index(d, N, budget)
    except BudgetExceeded:
        labels = None
    exact_rate = None
    if labels is not None:
        sizes: dict = {}
        for r in labels.values():
            sizes[r] = sizes.get(r, 0) + 1
        exact_rate = Fraction(sum(v * v for v in sizes.values()), len(labels) ** 2)
    flip_eq = phi_eq = tw_eq = flip_given_tw = 0
    block_total = 0
    for _ in range(samples):
        t1 = sample_tiling(d, N, rng)
        t2 = sample_tiling(d, N, rng)
        same_tw = twist(t1) == twist(t2)
        if labels is not None:
            same = labels[to_cells(t1)] == labels[to_cells(t2)]
        else:
            same = bool(stable_equivalent(t1, t2, max_pad=0, budget=search_budget)) if same_tw else False
        flip_eq += same
        tw_eq += same_tw
        flip_given_tw += same and same_tw
        phi_eq += eval_hom(classifier, t1) == eval_hom(classifier, t2)
        block_total += count_blocks(t1, blocks, M) + count_blocks(t2, blocks, M)
    return {
        "N": N,
        "pairs": samples,
        "seed": run_seed,
        "flip_equivalent": flip_eq,
        "phi_coincident": phi_eq,
        "twist_equal": tw_eq,
        "flip_equivalent_given_twist": flip_given_tw,
        "mean_blocks": block_total / (2 * samples),
        "exact": labels is not None,
        "exact_rate": None if exact_rate is None else float(exact_rate),
    }


def theorem1_experiment(
    d,
    heights,
    samples: int,
    seed: int,
    classifier=None,
    M: int = 2,
    budget: Optional[int] = None,
    search_budget: int = 20_000,
    jobs: int = 1,
) -> list:
    """Sample pairs of independent uniform tilings and count coincidences.

    Per height: flip-equivalent pairs (exact component labels when the
    tilings can be enumerated, else a budgeted search whose misses count as
    inequivalent), pairs with equal image under the classifier, pairs with
    equal twist, flip-equivalent pairs among those, and the mean block count.
    The exact equivalence rate sum(size^2)/total^2 is included when known.
    Height ``i`` in the list uses seed ``1000 * seed + i``, so rows do not
    depend on ``jobs``.
    """
    from .homf2 import find_anchors

    if classifier is None:
        anchors = find_anchors(d)
        if not anchors:
            raise ValueError("no classifier applies to this disk")
        classifier = anchors[0]
    blocks = block_set(classifier)
    args = [(d, N, seed * 1000 + i, samples, classifier, blocks, M, budget, search_budget) for i, N in enumerate(heights)]
    if jobs > 1 and len(args) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_experiment_row, *zip(*args)))
    return [_experiment_row(*a) for a in args]


def rows_to_csv(rows: list) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]))
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()
