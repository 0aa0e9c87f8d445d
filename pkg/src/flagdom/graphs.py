"""Edge-coloured complete graphs: representation, isomorphism, enumeration, density.

A graph on n vertices with r edge colours is stored as the flat tuple of its
edge colours in row-major pair order (0,1),(0,2),...,(0,n-1),(1,2),...,(n-2,n-1).
This single convention is used everywhere, including all file formats.

Isomorphism is decided by a canonical key: the lexicographically least edge
colour sequence over all vertex relabelings.  Vertex counts stay tiny (<= 7
for anything canonical), so the key is computed by scanning precomputed
permutation tables, pruned by a colour-degree invariant on the vertex placed
first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from math import comb
from operator import itemgetter

from .errors import FormatError, ResourceLimitError, SizeMismatchError

MAX_CANONICAL_ORDER = 7
SUPPORTED_COLOR_COUNTS = (2, 3, 4)


@lru_cache(maxsize=None)
def vertex_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """All pairs (i, j), i < j, in row-major order."""
    return tuple(combinations(range(n), 2))


@lru_cache(maxsize=None)
def pair_index(n: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(vertex_pairs(n))}


def edge_index(i: int, j: int, n: int) -> int:
    """Index of edge {i, j} in the row-major order for an n-vertex graph."""
    if i > j:
        i, j = j, i
    return i * n - i * (i + 1) // 2 + (j - i - 1)


@dataclass(frozen=True)
class ColoredGraph:
    """An r-edge-coloured complete graph on n >= 1 vertices."""

    n: int
    ncolors: int
    edge_colors: tuple[int, ...]

    def __post_init__(self):
        # n = 0 is permitted solely to carry the empty flag type
        if self.n < 0 or self.ncolors < 1:
            raise ValueError("need n >= 0 and ncolors >= 1")
        if len(self.edge_colors) != self.n * (self.n - 1) // 2:
            raise ValueError(
                f"expected {self.n * (self.n - 1) // 2} edge colours, "
                f"got {len(self.edge_colors)}"
            )
        if any(not 0 <= c < self.ncolors for c in self.edge_colors):
            raise ValueError("edge colour out of range")

    def color(self, i: int, j: int) -> int:
        return self.edge_colors[edge_index(i, j, self.n)]

    def subgraph(self, vertices: tuple[int, ...]) -> "ColoredGraph":
        """Induced subgraph; the given vertex order becomes 0..k-1."""
        cols = tuple(
            self.color(vertices[i], vertices[j])
            for i, j in vertex_pairs(len(vertices))
        )
        return ColoredGraph(len(vertices), self.ncolors, cols)

    def recolor(self, color_map: tuple[int, ...]) -> "ColoredGraph":
        """Apply a colour permutation (color_map[old] = new)."""
        return ColoredGraph(
            self.n, self.ncolors, tuple(color_map[c] for c in self.edge_colors)
        )

    def relabel(self, perm: tuple[int, ...]) -> "ColoredGraph":
        """Vertex relabeling: new edge (i, j) takes the colour of (perm[i], perm[j])."""
        cols = tuple(
            self.color(perm[i], perm[j]) for i, j in vertex_pairs(self.n)
        )
        return ColoredGraph(self.n, self.ncolors, cols)


@dataclass(frozen=True, order=True)
class CanonicalKey:
    """Lexicographically least edge colour sequence over all relabelings."""

    order: int
    ncolors: int
    digits: tuple[int, ...]


@dataclass
class GraphFamily:
    """All graphs of one order up to isomorphism, canonical and sorted."""

    level: int
    ncolors: int
    members: list[ColoredGraph]
    orbit_sizes: list[int] | None = field(default=None)

    def __len__(self) -> int:
        return len(self.members)

    def index(self) -> dict[tuple[int, ...], int]:
        return {g.edge_colors: k for k, g in enumerate(self.members)}


def _getter(idx: tuple[int, ...]):
    # itemgetter with one index returns a scalar; keep tuples uniform
    if len(idx) == 1:
        k = idx[0]
        return lambda s: (s[k],)
    return itemgetter(*idx)


@lru_cache(maxsize=None)
def _perm_tables(n: int):
    """Edge-index getters for every vertex permutation, grouped by perm[0]."""
    idx = pair_index(n)
    by_first: list[list] = [[] for _ in range(n)]
    for perm in permutations(range(n)):
        m = tuple(
            idx[(perm[i], perm[j])] if perm[i] < perm[j] else idx[(perm[j], perm[i])]
            for i, j in vertex_pairs(n)
        )
        by_first[perm[0]].append(_getter(m))
    return tuple(tuple(v) for v in by_first)


@lru_cache(maxsize=None)
def _incidence_getters(n: int):
    inc: list[list[int]] = [[] for _ in range(n)]
    for k, (i, j) in enumerate(vertex_pairs(n)):
        inc[i].append(k)
        inc[j].append(k)
    return tuple(_getter(tuple(v)) for v in inc)


def canonical_digits(colors: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Least relabeled edge colour tuple.

    Only vertices whose sorted incident colour vector is minimal can occupy
    position 0 of a minimising permutation (the first n-1 digits of the key
    are exactly that sorted vector), so the scan is restricted to those.
    """
    if n <= 1:
        return ()
    if n > MAX_CANONICAL_ORDER:
        raise ResourceLimitError(f"canonical form supports n <= {MAX_CANONICAL_ORDER}")
    inc = _incidence_getters(n)
    scores = [tuple(sorted(inc[v](colors))) for v in range(n)]
    lo = min(scores)
    best = None
    for v, tables in zip(range(n), _perm_tables(n)):
        if scores[v] != lo:
            continue
        for g in tables:
            cand = g(colors)
            if best is None or cand < best:
                best = cand
    return best


def canonical_form(g: ColoredGraph) -> CanonicalKey:
    """Canonical key of g; equal keys characterise isomorphic graphs."""
    return CanonicalKey(g.n, g.ncolors, canonical_digits(g.edge_colors, g.n))


def canonicalize(g: ColoredGraph) -> ColoredGraph:
    """The canonical representative of g's isomorphism class."""
    return ColoredGraph(g.n, g.ncolors, canonical_digits(g.edge_colors, g.n))


@lru_cache(maxsize=None)
def enumerate_graphs(l: int, r: int) -> GraphFamily:
    """All r-coloured complete graphs on l vertices up to isomorphism.

    Built by extension: attach one new vertex to every level-(l-1)
    representative in all r^(l-1) ways, canonicalise, deduplicate.
    """
    if r not in SUPPORTED_COLOR_COUNTS:
        raise ResourceLimitError(f"colour count must be one of {SUPPORTED_COLOR_COUNTS}")
    if not 1 <= l <= MAX_CANONICAL_ORDER:
        raise ResourceLimitError(f"enumeration supports 1 <= l <= {MAX_CANONICAL_ORDER}")
    if l == 1:
        return GraphFamily(1, r, [ColoredGraph(1, r, ())])
    prev = enumerate_graphs(l - 1, r)
    old_idx = pair_index(l - 1)
    # slot k of the child tuple is either an old edge index or an attachment slot
    slots = [
        ("o", old_idx[(i, j)]) if j < l - 1 else ("a", i)
        for i, j in vertex_pairs(l)
    ]
    seen: set[tuple[int, ...]] = set()
    for parent in prev.members:
        pc = parent.edge_colors
        for att in product(range(r), repeat=l - 1):
            colors = tuple(pc[k] if kind == "o" else att[k] for kind, k in slots)
            seen.add(canonical_digits(colors, l))
    members = [ColoredGraph(l, r, digits) for digits in sorted(seen)]
    return GraphFamily(l, r, members)


def color_permutations(r: int) -> list[tuple[int, ...]]:
    return list(permutations(range(r)))


def color_orbit_key(g: ColoredGraph) -> tuple[int, ...]:
    """Least canonical digits over all colour permutations of g."""
    return min(
        canonical_digits(g.recolor(cp).edge_colors, g.n)
        for cp in color_permutations(g.ncolors)
    )


def color_orbits(fam: GraphFamily) -> GraphFamily:
    """Collapse a family to one representative per colour-permutation orbit.

    Orbit sizes count the isomorphism classes merged into each orbit, so they
    sum to len(fam).
    """
    buckets: dict[tuple[int, ...], int] = {}
    for g in fam.members:
        key = color_orbit_key(g)
        buckets[key] = buckets.get(key, 0) + 1
    reps = sorted(buckets)
    members = [ColoredGraph(fam.level, fam.ncolors, d) for d in reps]
    sizes = [buckets[d] for d in reps]
    return GraphFamily(fam.level, fam.ncolors, members, orbit_sizes=sizes)


def density(f: ColoredGraph, g: ColoredGraph) -> Fraction:
    """Proportion of |V(f)|-subsets of g inducing a graph isomorphic to f."""
    if f.ncolors != g.ncolors:
        raise SizeMismatchError("colour counts differ")
    if f.n > g.n:
        raise SizeMismatchError("density requires order(f) <= order(g)")
    target = canonical_digits(f.edge_colors, f.n)
    hits = 0
    for vs in combinations(range(g.n), f.n):
        sub = tuple(g.color(vs[i], vs[j]) for i, j in vertex_pairs(f.n))
        if canonical_digits(sub, f.n) == target:
            hits += 1
    return Fraction(hits, comb(g.n, f.n))


def subgraph_distribution(g: ColoredGraph, l: int) -> dict[tuple[int, ...], Fraction]:
    """Densities of all l-vertex subgraph classes of g, keyed by canonical digits."""
    if l > g.n:
        raise SizeMismatchError("need l <= order(g)")
    counts: dict[tuple[int, ...], int] = {}
    for vs in combinations(range(g.n), l):
        sub = tuple(g.color(vs[i], vs[j]) for i, j in vertex_pairs(l))
        key = canonical_digits(sub, l)
        counts[key] = counts.get(key, 0) + 1
    total = comb(g.n, l)
    return {k: Fraction(v, total) for k, v in counts.items()}


# --- graph text format: `<n>:<digits>` ------------------------------------

def graph_to_line(g: ColoredGraph) -> str:
    return f"{g.n}:" + "".join(str(c) for c in g.edge_colors)


def graph_from_line(line: str, ncolors: int = 3) -> ColoredGraph:
    line = line.strip()
    head, sep, digits = line.partition(":")
    if not sep:
        raise FormatError(f"graph line {line!r} lacks ':'")
    try:
        n = int(head)
    except ValueError:
        raise FormatError(f"bad vertex count in graph line {line!r}") from None
    if not all(ch.isdigit() for ch in digits):
        raise FormatError(f"bad colour digits in graph line {line!r}")
    try:
        return ColoredGraph(n, ncolors, tuple(int(ch) for ch in digits))
    except ValueError as exc:
        raise FormatError(f"invalid graph line {line!r}: {exc}") from None


def write_family(fam: GraphFamily, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for g in fam.members:
            fh.write(graph_to_line(g) + "\n")


def read_family(path, ncolors: int = 3) -> list[ColoredGraph]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(graph_from_line(line, ncolors))
    return out


# --- the six-vertex target graph used by the density bound ----------------

# Colour classes (1-indexed vertex pairs):
#   colour 0: 14 23 35 56 62 / colour 1: 25 34 46 61 13 / colour 2: 36 45 51 12 24
TARGET_X = ColoredGraph(
    6, 3, (2, 1, 0, 2, 1, 0, 2, 1, 0, 1, 0, 2, 2, 1, 0)
)
