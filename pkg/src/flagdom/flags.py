"""Types, labeled flags, and exact expected flag densities.

A flag is a coloured complete graph whose first `labeled` vertices carry the
labels 1..s; a type is a fully labeled flag.  Types are stored as canonically
labeled representatives, and a flag belongs to a type's basis exactly when its
labeled part equals that representative verbatim.

All expectations are exact fractions with denominator

    (#injective label embeddings) x (#vertex-set choices),

averaging over every injective embedding, including those that do not induce
the type (they contribute zero).  No floating point appears in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from math import comb, perm

from .errors import FormatError, ResourceLimitError, SizeMismatchError
from .graphs import (
    ColoredGraph,
    canonical_digits,
    enumerate_graphs,
    graph_from_line,
    graph_to_line,
    pair_index,
    vertex_pairs,
)

MAX_TYPE_ORDER = 4
MAX_BASIS_ASSIGNMENTS = 200_000


@dataclass(frozen=True)
class Flag:
    """A coloured complete graph with its first `labeled` vertices labeled."""

    graph: ColoredGraph
    labeled: int

    def __post_init__(self):
        if not 0 <= self.labeled <= self.graph.n:
            raise SizeMismatchError("labeled count out of range")

    @property
    def order(self) -> int:
        return self.graph.n

    def type_colors(self) -> tuple[int, ...]:
        """Edge colours of the labeled part, in row-major order."""
        s = self.labeled
        return tuple(self.graph.color(i, j) for i, j in vertex_pairs(s))


def flag_to_line(f: Flag) -> str:
    return f"{f.labeled}|" + graph_to_line(f.graph)


def flag_from_line(line: str, ncolors: int = 3) -> Flag:
    head, sep, rest = line.strip().partition("|")
    if not sep:
        raise FormatError(f"flag line {line!r} lacks '|'")
    try:
        s = int(head)
    except ValueError:
        raise FormatError(f"bad label count in flag line {line!r}") from None
    return Flag(graph_from_line(rest, ncolors), s)


@lru_cache(maxsize=None)
def _label_perm_getters(s: int, m: int):
    """Edge-index maps for permutations fixing the labeled vertices pointwise."""
    idx = pair_index(m)
    getters = []
    for tail in permutations(range(s, m)):
        full = tuple(range(s)) + tail
        emap = tuple(
            idx[(full[i], full[j])] if full[i] < full[j] else idx[(full[j], full[i])]
            for i, j in vertex_pairs(m)
        )
        getters.append(emap)
    return tuple(getters)


def canonical_flag_digits(colors: tuple[int, ...], s: int, m: int) -> tuple[int, ...]:
    """Least edge colour tuple over relabelings of the unlabeled vertices."""
    if m - s <= 1:
        return tuple(colors)
    return min(
        tuple(colors[k] for k in emap) for emap in _label_perm_getters(s, m)
    )


def canonical_flag(f: Flag) -> Flag:
    digits = canonical_flag_digits(f.graph.edge_colors, f.labeled, f.order)
    return Flag(ColoredGraph(f.order, f.graph.ncolors, digits), f.labeled)


def enumerate_types(s: int, r: int) -> list[Flag]:
    """One canonically labeled type per isomorphism class of order s."""
    if s > MAX_TYPE_ORDER:
        raise ResourceLimitError(f"types supported up to order {MAX_TYPE_ORDER}")
    if s == 0:
        return [Flag(ColoredGraph(0, r, ()), 0)]
    return [Flag(g, s) for g in enumerate_graphs(s, r).members]


@dataclass(frozen=True)
class FlagBasis:
    """All sigma-flags of one order, label-preserving-canonical and sorted."""

    sigma: Flag
    m: int
    flags: tuple[Flag, ...]

    def __len__(self) -> int:
        return len(self.flags)

    def index(self) -> dict[tuple[int, ...], int]:
        return {f.graph.edge_colors: k for k, f in enumerate(self.flags)}


def free_pairs(s: int, m: int) -> list[tuple[int, int]]:
    """Flag edge slots not inside the labeled part, in row-major order."""
    return [(i, j) for i, j in vertex_pairs(m) if j >= s]


def enumerate_flags(sigma: Flag, m: int) -> FlagBasis:
    """All sigma-flags of order m up to label-preserving isomorphism."""
    s = sigma.labeled
    if m < s:
        raise SizeMismatchError("flag order below type order")
    r = sigma.graph.ncolors
    fp = free_pairs(s, m)
    if r ** len(fp) > MAX_BASIS_ASSIGNMENTS:
        raise ResourceLimitError("flag basis too large to enumerate directly")
    sigma_cols = sigma.type_colors()
    idx = pair_index(m)
    base = [0] * (m * (m - 1) // 2)
    for k, (i, j) in enumerate(vertex_pairs(s)):
        base[idx[(i, j)]] = sigma_cols[k]
    free_slots = [idx[p] for p in fp]
    seen: set[tuple[int, ...]] = set()
    for assignment in product(range(r), repeat=len(fp)):
        cols = list(base)
        for slot, c in zip(free_slots, assignment):
            cols[slot] = c
        seen.add(canonical_flag_digits(tuple(cols), s, m))
    flags = tuple(
        Flag(ColoredGraph(m, r, digits), s) for digits in sorted(seen)
    )
    return FlagBasis(sigma, m, flags)


class FlagCalculator:
    """Exact density engine with its own caches.

    Separate pipeline stages (builder vs. verifier) each hold their own
    instance so that verification never reads a builder cache.  The per-host
    cache is bounded; structural tables (bases, lookup dicts) persist.
    """

    _HOST_CACHE_LIMIT = 64

    def __init__(self, ncolors: int = 3):
        self.ncolors = ncolors
        self._bases: dict = {}
        self._ident: dict = {}
        self._types: dict = {}
        self._host_cache: dict = {}

    # -- structural tables ---------------------------------------------------

    def types(self, s: int) -> list[Flag]:
        if s not in self._types:
            self._types[s] = enumerate_types(s, self.ncolors)
        return self._types[s]

    def type_lookup(self, s: int) -> dict[tuple[int, ...], int]:
        key = ("lookup", s)
        if key not in self._ident:
            self._ident[key] = {
                t.type_colors(): i for i, t in enumerate(self.types(s))
            }
        return self._ident[key]

    def type_index(self, sigma: Flag) -> int:
        ti = self.type_lookup(sigma.labeled).get(sigma.type_colors())
        if ti is None:
            raise SizeMismatchError("type is not a canonical representative")
        return ti

    def basis(self, sigma: Flag, m: int) -> FlagBasis:
        key = (sigma.labeled, sigma.type_colors(), m)
        if key not in self._bases:
            self._bases[key] = enumerate_flags(sigma, m)
        return self._bases[key]

    def basis_by_index(self, s: int, ti: int, m: int) -> FlagBasis:
        return self.basis(self.types(s)[ti], m)

    def ident_table(self, s: int, ti: int, m: int) -> dict[tuple[int, ...], int]:
        """Free-edge colour tuple -> basis index, for every assignment."""
        key = (s, ti, m)
        if key not in self._ident:
            sigma = self.types(s)[ti]
            basis = self.basis(sigma, m)
            lookup = basis.index()
            fp = free_pairs(s, m)
            idx = pair_index(m)
            sigma_cols = sigma.type_colors()
            base = [0] * (m * (m - 1) // 2)
            for k, (i, j) in enumerate(vertex_pairs(s)):
                base[idx[(i, j)]] = sigma_cols[k]
            free_slots = [idx[p] for p in fp]
            table = {}
            for assignment in product(range(self.ncolors), repeat=len(fp)):
                cols = list(base)
                for slot, c in zip(free_slots, assignment):
                    cols[slot] = c
                digits = canonical_flag_digits(tuple(cols), s, m)
                table[assignment] = lookup[digits]
            self._ident[key] = table
        return self._ident[key]

    # -- host-level scans ----------------------------------------------------

    def _cache_get(self, key):
        return self._host_cache.get(key)

    def _cache_put(self, key, value):
        if len(self._host_cache) >= self._HOST_CACHE_LIMIT:
            self._host_cache.pop(next(iter(self._host_cache)))
        self._host_cache[key] = value
        return value

    def clear_host_cache(self) -> None:
        self._host_cache.clear()

    def single_counts_all(self, s: int, m: int, H: ColoredGraph):
        """Per type: (counts per basis flag, denominator) for E[p(F, theta; H)].

        counts[a] is the number of (theta, m-superset) pairs inducing basis
        flag a; the denominator is perm(n, s) * C(n - s, m - s).
        """
        key = ("s", s, m, H.edge_colors)
        cached = self._cache_get(key)
        if cached is not None:
            return cached
        n = H.n
        if m > n:
            raise SizeMismatchError("flag order exceeds host order")
        ec = H.edge_colors
        pidx = pair_index(n)
        spairs = vertex_pairs(s)
        fp = free_pairs(s, m)
        lookup = self.type_lookup(s)
        tables = {ti: self.ident_table(s, ti, m) for ti in range(len(self.types(s)))}
        out = {ti: [0] * len(self.basis_by_index(s, ti, m)) for ti in tables}
        for theta in permutations(range(n), s):
            tt = tuple(
                ec[pidx[(theta[i], theta[j])] if theta[i] < theta[j] else pidx[(theta[j], theta[i])]]
                for i, j in spairs
            )
            ti = lookup.get(tt)
            if ti is None:
                continue
            table = tables[ti]
            counts = out[ti]
            rest = [v for v in range(n) if v not in theta]
            for extras in combinations(rest, m - s):
                verts = theta + extras
                fkey = tuple(
                    ec[pidx[(verts[i], verts[j])] if verts[i] < verts[j] else pidx[(verts[j], verts[i])]]
                    for i, j in fp
                )
                counts[table[fkey]] += 1
        denom = perm(n, s) * comb(n - s, m - s)
        return self._cache_put(key, (out, denom))

    def pair_counts_all(self, s: int, m1: int, m2: int, H: ColoredGraph):
        """Per type: (dict (a, b) -> count, denominator) for E[p(F_a, F_b, theta; H)].

        Counts ordered pairs (V1, V2) of vertex sets with V1 ^ V2 = im(theta);
        the denominator is perm(n, s) * C(n-s, m1-s) * C(n-m1, m2-s).
        """
        key = ("p", s, m1, m2, H.edge_colors)
        cached = self._cache_get(key)
        if cached is not None:
            return cached
        n = H.n
        if m1 + m2 - s > n:
            raise SizeMismatchError("flag pair does not fit in the host")
        ec = H.edge_colors
        pidx = pair_index(n)
        spairs = vertex_pairs(s)
        fp1 = free_pairs(s, m1)
        fp2 = free_pairs(s, m2)
        lookup = self.type_lookup(s)
        ntypes = len(self.types(s))
        tables1 = {ti: self.ident_table(s, ti, m1) for ti in range(ntypes)}
        tables2 = {ti: self.ident_table(s, ti, m2) for ti in range(ntypes)}
        out: dict[int, dict[tuple[int, int], int]] = {ti: {} for ti in range(ntypes)}
        for theta in permutations(range(n), s):
            tt = tuple(
                ec[pidx[(theta[i], theta[j])] if theta[i] < theta[j] else pidx[(theta[j], theta[i])]]
                for i, j in spairs
            )
            ti = lookup.get(tt)
            if ti is None:
                continue
            t1 = tables1[ti]
            t2 = tables2[ti]
            counts = out[ti]
            rest = [v for v in range(n) if v not in theta]
            for extras1 in combinations(rest, m1 - s):
                verts1 = theta + extras1
                a = t1[
                    tuple(
                        ec[pidx[(verts1[i], verts1[j])] if verts1[i] < verts1[j] else pidx[(verts1[j], verts1[i])]]
                        for i, j in fp1
                    )
                ]
                taken = set(extras1)
                rem = [v for v in rest if v not in taken]
                for extras2 in combinations(rem, m2 - s):
                    verts2 = theta + extras2
                    b = t2[
                        tuple(
                            ec[pidx[(verts2[i], verts2[j])] if verts2[i] < verts2[j] else pidx[(verts2[j], verts2[i])]]
                            for i, j in fp2
                        )
                    ]
                    counts[(a, b)] = counts.get((a, b), 0) + 1
        denom = perm(n, s) * comb(n - s, m1 - s) * comb(n - m1, m2 - s)
        return self._cache_put(key, (out, denom))

    # -- single-flag conveniences ---------------------------------------------

    def avg_single_density(self, F: Flag, H: ColoredGraph) -> Fraction:
        """E over all injective label embeddings of p(F, theta; H)."""
        sigma = Flag(F.graph.subgraph(tuple(range(F.labeled))), F.labeled)
        ti = self.type_index(canonical_flag(sigma))
        basis = self.basis_by_index(F.labeled, ti, F.order)
        a = basis.index()[canonical_flag(F).graph.edge_colors]
        counts, denom = self.single_counts_all(F.labeled, F.order, H)
        return Fraction(counts[ti][a], denom)

    def avg_pair_density(self, F1: Flag, F2: Flag, H: ColoredGraph) -> Fraction:
        """E over embeddings of p(F1, F2, theta; H) (ordered pair, shared type)."""
        if F1.labeled != F2.labeled or F1.type_colors() != F2.type_colors():
            raise SizeMismatchError("flags do not share a type")
        s = F1.labeled
        sigma = Flag(F1.graph.subgraph(tuple(range(s))), s)
        ti = self.type_index(canonical_flag(sigma))
        b1 = self.basis_by_index(s, ti, F1.order).index()
        b2 = self.basis_by_index(s, ti, F2.order).index()
        a = b1[canonical_flag(F1).graph.edge_colors]
        b = b2[canonical_flag(F2).graph.edge_colors]
        counts, denom = self.pair_counts_all(s, F1.order, F2.order, H)
        return Fraction(counts[ti].get((a, b), 0), denom)

    def coefficient_matrix(self, sigma: Flag, m: int, H: ColoredGraph):
        """Symmetric matrix of E[p(F_a, F_b, theta; H)] over the (sigma, m) basis."""
        ti = self.type_index(sigma)
        dim = len(self.basis_by_index(sigma.labeled, ti, m))
        counts, denom = self.pair_counts_all(sigma.labeled, m, m, H)
        entries = counts[ti]
        mat = [[Fraction(0)] * dim for _ in range(dim)]
        for (a, b), cnt in entries.items():
            mat[a][b] = Fraction(cnt, denom)
        return mat


_default_calculator: FlagCalculator | None = None


def default_calculator(ncolors: int = 3) -> FlagCalculator:
    global _default_calculator
    if _default_calculator is None or _default_calculator.ncolors != ncolors:
        _default_calculator = FlagCalculator(ncolors)
    return _default_calculator


def avg_single_density(F: Flag, H: ColoredGraph) -> Fraction:
    return default_calculator(H.ncolors).avg_single_density(F, H)


def avg_pair_density(F1: Flag, F2: Flag, H: ColoredGraph) -> Fraction:
    return default_calculator(H.ncolors).avg_pair_density(F1, F2, H)


def coefficient_matrix(sigma: Flag, m: int, H: ColoredGraph):
    return default_calculator(H.ncolors).coefficient_matrix(sigma, m, H)
