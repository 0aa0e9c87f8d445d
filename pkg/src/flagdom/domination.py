"""Ground-truth domination semantics and the extremal constructions.

Everything here is defined directly from first principles (set scans and
bitmask counting), so the rest of the pipeline can be checked against it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import ResourceLimitError, SizeMismatchError
from .graphs import ColoredGraph, enumerate_graphs, vertex_pairs
from .parallel import parallel_map

MAX_BLOWUP_VERTICES = 2048


def palette(g: ColoredGraph, v: int) -> frozenset[int]:
    """Set of colours on edges incident to v."""
    if not 0 <= v < g.n:
        raise SizeMismatchError(f"vertex {v} out of range for order {g.n}")
    if g.n < 2:
        raise SizeMismatchError("palette needs order >= 2")
    return frozenset(g.color(v, w) for w in range(g.n) if w != v)


@dataclass(frozen=True)
class DominationResult:
    color: int
    witness: tuple[int, ...]
    count: int
    dominated: frozenset[int]


def _color_masks(g: ColoredGraph) -> list[list[int]]:
    """masks[c][v] = bitmask of vertices joined to v by a c-edge."""
    masks = [[0] * g.n for _ in range(g.ncolors)]
    for k, (i, j) in enumerate(vertex_pairs(g.n)):
        c = g.edge_colors[k]
        masks[c][i] |= 1 << j
        masks[c][j] |= 1 << i
    return masks


def strong_dom_set(g: ColoredGraph, S, c: int) -> DominationResult:
    """Vertices with a c-edge to some member of S.

    A member of S counts only via an edge to another member; there are no
    loops, so a singleton S never dominates itself.
    """
    S = tuple(sorted(S))
    if not S:
        raise SizeMismatchError("witness set must be nonempty")
    if any(not 0 <= v < g.n for v in S):
        raise SizeMismatchError("witness set out of range")
    dominated = frozenset(
        b for b in range(g.n) if any(b != a and g.color(a, b) == c for a in S)
    )
    return DominationResult(c, S, len(dominated), dominated)


def best_strong_domination(g: ColoredGraph, t: int) -> DominationResult:
    """Best strong domination over all colours and all t-subsets.

    Ties break towards the smallest colour, then the lexicographically first
    subset.
    """
    if not 1 <= t <= g.n:
        raise SizeMismatchError("need 1 <= t <= order(g)")
    masks = _color_masks(g)
    best_count = -1
    best: tuple[int, tuple[int, ...]] | None = None
    for c in range(g.ncolors):
        mc = masks[c]
        for S in combinations(range(g.n), t):
            m = 0
            for v in S:
                m |= mc[v]
            cnt = m.bit_count()
            if cnt > best_count:
                best_count = cnt
                best = (c, S)
    c, S = best
    return strong_dom_set(g, S, c)


def is_good_set(g: ColoredGraph, S, c: int) -> bool:
    """Good set for c: two c-edges inside S, or one c-edge whose opposite
    vertex sees both non-c colours somewhere in g."""
    if g.ncolors != 3:
        raise SizeMismatchError("good sets are defined for 3 colours")
    S = tuple(sorted(S))
    if len(S) != 3:
        raise SizeMismatchError("good sets have exactly 3 vertices")
    x, y, z = S
    edges = [(x, y, z), (x, z, y), (y, z, x)]
    c_edges = sum(1 for a, b, _ in edges if g.color(a, b) == c)
    if c_edges >= 2:
        return True
    others = frozenset(range(3)) - {c}
    for a, b, opp in edges:
        if g.color(a, b) == c and others <= palette(g, opp):
            return True
    return False


def kierstead(class_sizes, ncolors: int = 3, inner_rule=None) -> ColoredGraph:
    """The extremal layered colourings.

    ncolors=3: classes V_0,V_1,V_2; an edge between V_i and V_j gets colour i
    when i == j or i = j+1 (mod 3).

    ncolors=4: classes (V_012, V_04, V_14, V_24).  Edges V_012-V_i4 get colour
    i, edges between two V_i4 classes get colour 3, edges inside V_i4 get
    colour i (or inner_rule(i, a, b) if given), and edges inside V_012 follow
    the 3-colour rule on a near-equal 3-way split.
    """
    sizes = list(class_sizes)
    if ncolors == 3:
        if len(sizes) != 3:
            raise SizeMismatchError("3-colour construction needs 3 classes")
        cls = []
        for idx, s in enumerate(sizes):
            cls.extend([idx] * s)
        n = len(cls)

        def color3(i, j):
            if i == j or i == (j + 1) % 3:
                return i
            return j

        colors = tuple(color3(cls[a], cls[b]) for a, b in vertex_pairs(n))
        return ColoredGraph(n, 3, colors)

    if ncolors == 4:
        if len(sizes) != 4:
            raise SizeMismatchError("4-colour construction needs 4 classes")
        cls = []
        for idx, s in enumerate(sizes):
            cls.extend([idx] * s)
        n = len(cls)
        # 3-way split of the first class for its internal 3-colour rule
        first = sizes[0]
        q, rem = divmod(first, 3)
        split_sizes = [q + (1 if k < rem else 0) for k in range(3)]
        sub = []
        for idx, s in enumerate(split_sizes):
            sub.extend([idx] * s)

        def color4(a, b):
            ca, cb = cls[a], cls[b]
            if ca == 0 and cb == 0:
                i, j = sub[a], sub[b]
                if i == j or i == (j + 1) % 3:
                    return i
                return j
            if ca == 0 or cb == 0:
                return max(ca, cb) - 1  # V_012 to V_i4 gets colour i
            if ca == cb:
                i = ca - 1
                if inner_rule is not None:
                    return inner_rule(i, a, b)
                return i
            return 3

        colors = tuple(color4(a, b) for a, b in vertex_pairs(n))
        return ColoredGraph(n, 4, colors)

    raise SizeMismatchError("construction defined for 3 or 4 colours")


def _edge_draw(seed: int, cls: int, i: int, j: int, k: int) -> int:
    """Deterministic uniform draw in range(k) keyed by (seed, class, edge)."""
    h = hashlib.sha256(f"{seed}:{cls}:{i}:{j}".encode()).digest()
    return int.from_bytes(h[:8], "big") % k


def blowup(g: ColoredGraph, n: int, seed: int) -> ColoredGraph:
    """Replace each vertex u by a class of n vertices.

    Between-class edges copy g; within-class edges draw uniformly from the
    palette of u, deterministically for a fixed seed.
    """
    if n < 1:
        raise SizeMismatchError("class size must be >= 1")
    big_n = g.n * n
    if big_n > MAX_BLOWUP_VERTICES:
        raise ResourceLimitError(f"blow-up would have {big_n} > {MAX_BLOWUP_VERTICES} vertices")
    if g.n == 1:
        raise SizeMismatchError("blow-up of a single vertex has an empty palette")
    palettes = [sorted(palette(g, u)) for u in range(g.n)]
    colors = []
    for a, b in vertex_pairs(big_n):
        u, i = divmod(a, n)
        v, j = divmod(b, n)
        if u != v:
            colors.append(g.color(u, v))
        else:
            pal = palettes[u]
            colors.append(pal[_edge_draw(seed, u, i, j, len(pal))])
    return ColoredGraph(big_n, g.ncolors, tuple(colors))


@dataclass(frozen=True)
class MinDominationResult:
    count: int
    fraction: Fraction
    graph: ColoredGraph
    detail: DominationResult


def exhaustive_min_domination(
    l: int, r: int, t: int, threads: int = 1
) -> MinDominationResult:
    """Minimum over all graphs of the best strong t-set domination count."""
    if r == 3 and l > 6:
        raise ResourceLimitError("exhaustive search supports l <= 6 for 3 colours")
    if r != 3 and l > 5:
        raise ResourceLimitError("exhaustive search supports l <= 5 here")
    fam = enumerate_graphs(l, r)
    subsets = list(combinations(range(l), t))

    def best_count(g: ColoredGraph) -> int:
        masks = _color_masks(g)
        best = 0
        for mc in masks:
            for S in subsets:
                m = 0
                for v in S:
                    m |= mc[v]
                cnt = m.bit_count()
                if cnt > best:
                    best = cnt
        return best

    counts = parallel_map(best_count, fam.members, threads)
    arg = min(range(len(fam.members)), key=lambda k: (counts[k], k))
    g = fam.members[arg]
    return MinDominationResult(
        counts[arg], Fraction(counts[arg], l), g, best_strong_domination(g, t)
    )
