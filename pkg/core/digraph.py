"""
Digraphs, partite structures, multipartite tournaments and competition graphs.

Neighbor sets are stored as int bitmasks (bit j of ``out[i]`` set iff i -> j),
so "do u and v share prey" is a single ``&``. Parts occupy consecutive vertex
indices in nonincreasing-size order.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import accumulate
from typing import Iterable, Iterator, Sequence

import numpy as np

from config import get_config
from core.errors import (
    InvalidDigraphError,
    InvalidSizesError,
    InvalidTournamentError,
    VertexRangeError,
)

log = logging.getLogger(__name__)


def max_vertices() -> int:
    return get_config().COMPGRAPH_MAX_N


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of `mask` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


# ─────────────────────────────────────────────────────────────────────────────
# PARTITE STRUCTURE
# ─────────────────────────────────────────────────────────────────────────────

def check_sizes(sizes: Sequence[int]) -> tuple[int, ...]:
    """Validate a partite size tuple and return it as a tuple."""
    sizes = tuple(sizes)
    if not sizes:
        raise InvalidSizesError("size tuple must be nonempty")
    for s in sizes:
        if isinstance(s, bool) or not isinstance(s, (int, np.integer)) or s < 1:
            raise InvalidSizesError(f"part sizes must be positive integers, got {sizes}")
    sizes = tuple(int(s) for s in sizes)
    if any(a < b for a, b in zip(sizes, sizes[1:])):
        raise InvalidSizesError(f"part sizes must be nonincreasing, got {sizes}")
    return sizes


@dataclass(frozen=True)
class PartiteStructure:
    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = check_sizes(self.sizes)
        object.__setattr__(self, 'sizes', sizes)
        if sum(sizes) > max_vertices():
            raise InvalidSizesError(
                f"{sum(sizes)} vertices exceeds the cap of {max_vertices()} (COMPGRAPH_MAX_N)")

    @classmethod
    def sorted_from(cls, sizes: Iterable[int]) -> PartiteStructure:
        return cls(tuple(sorted(sizes, reverse=True)))

    @property
    def n(self) -> int:
        return self.offsets[-1]

    @property
    def k(self) -> int:
        return len(self.sizes)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        return (0, *accumulate(self.sizes))

    @cached_property
    def _part_index(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.sizes) for _ in range(s))

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(((1 << s) - 1) << lo for s, lo in zip(self.sizes, self.offsets))

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def part_of(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise VertexRangeError(f"vertex {v} out of range for {self.n} vertices")
        return self._part_index[v]

    def part_range(self, i: int) -> range:
        if not 0 <= i < self.k:
            raise IndexError(f"part {i} out of range for {self.k} parts")
        return range(self.offsets[i], self.offsets[i + 1])

    def part_mask(self, i: int) -> int:
        return self.masks[i]

    def cross_mask(self, v: int) -> int:
        """Vertices outside v's part."""
        return self.full_mask & ~self.masks[self.part_of(v)]

    def parts_hit(self, mask: int) -> list[int]:
        """Indices of parts that intersect `mask`."""
        return [i for i, m in enumerate(self.masks) if m & mask]

    @property
    def arc_count(self) -> int:
        """Number of arcs of any orientation of K_{sizes}."""
        return (self.n * self.n - sum(s * s for s in self.sizes)) // 2

    def cross_pairs(self) -> Iterator[tuple[int, int]]:
        """Cross-part pairs (u, v), u < v, in lexicographic order."""
        for u in range(self.n):
            for v in iter_bits(self.cross_mask(u) >> (u + 1) << (u + 1)):
                yield u, v


# ─────────────────────────────────────────────────────────────────────────────
# DIGRAPH
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Digraph:
    """
    A digraph on vertices 0..n-1 with out-neighborhoods as bitmasks.

    Direct construction only checks shape; use the ``from_*`` constructors
    (strict by default) to reject self-loops and 2-cycles. Parsers build
    lenient digraphs so `validate` can report every defect.
    """
    n: int
    out: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise InvalidDigraphError("vertex count must be nonnegative")
        if self.n > max_vertices():
            raise InvalidDigraphError(
                f"{self.n} vertices exceeds the cap of {max_vertices()} (COMPGRAPH_MAX_N)")
        out = tuple(int(m) for m in self.out)
        object.__setattr__(self, 'out', out)
        if len(out) != self.n:
            raise InvalidDigraphError(f"expected {self.n} out-sets, got {len(out)}")
        limit = 1 << self.n
        for v, m in enumerate(out):
            if not 0 <= m < limit:
                raise InvalidDigraphError(f"out-set of vertex {v} names a vertex outside 0..{self.n - 1}")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]], strict: bool = True) -> Digraph:
        out = [0] * n
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidDigraphError(f"arc ({u},{v}) names a vertex outside 0..{n - 1}")
            out[u] |= 1 << v
        d = cls(n, tuple(out))
        if strict:
            d.check()
        return d

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]], strict: bool = True) -> Digraph:
        n = len(rows)
        out = []
        for i, row in enumerate(rows):
            if len(row) != n:
                raise InvalidDigraphError(f"row {i} has {len(row)} entries, expected {n}")
            out.append(mask_of(j for j, x in enumerate(row) if x))
        d = cls(n, tuple(out))
        if strict:
            d.check()
        return d

    def defects(self) -> list[tuple[str, tuple[int, int]]]:
        """Self-loops and 2-cycles, as ('self-loop', (v, v)) / ('2-cycle', (u, v))."""
        found = []
        for u, m in enumerate(self.out):
            if m >> u & 1:
                found.append(('self-loop', (u, u)))
            for v in iter_bits(m >> (u + 1) << (u + 1)):
                if self.out[v] >> u & 1:
                    found.append(('2-cycle', (u, v)))
        return found

    def check(self) -> None:
        defects = self.defects()
        if defects:
            kind, (u, v) = defects[0]
            raise InvalidDigraphError(f"{kind} at ({u},{v})")

    def _vertex(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise VertexRangeError(f"vertex {v} out of range for {self.n} vertices")
        return v

    @cached_property
    def inn(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for u, m in enumerate(self.out):
            for v in iter_bits(m):
                masks[v] |= 1 << u
        return tuple(masks)

    def out_neighbors(self, v: int) -> frozenset[int]:
        return frozenset(iter_bits(self.out[self._vertex(v)]))

    def in_neighbors(self, v: int) -> frozenset[int]:
        return frozenset(iter_bits(self.inn[self._vertex(v)]))

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out[self._vertex(u)] >> self._vertex(v) & 1)

    def out_degree(self, v: int) -> int:
        return self.out[self._vertex(v)].bit_count()

    def in_degree(self, v: int) -> int:
        return self.inn[self._vertex(v)].bit_count()

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u, m in enumerate(self.out):
            for v in iter_bits(m):
                yield u, v

    @property
    def arc_count(self) -> int:
        return sum(m.bit_count() for m in self.out)

    def to_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.n, self.n), dtype=np.uint8)
        for u, v in self.arcs():
            matrix[u, v] = 1
        return matrix


def out_neighbors(d: Digraph, v: int) -> frozenset[int]:
    return d.out_neighbors(v)


def in_neighbors(d: Digraph, v: int) -> frozenset[int]:
    return d.in_neighbors(v)


# ─────────────────────────────────────────────────────────────────────────────
# COMPETITION GRAPH
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CompetitionGraph:
    n: int
    adj: tuple[int, ...]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(iter_bits(self.adj[v]))

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, m in enumerate(self.adj):
            for v in iter_bits(m >> (u + 1) << (u + 1)):
                yield u, v

    @property
    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.adj) // 2

    @property
    def is_complete(self) -> bool:
        return self.edge_count == self.n * (self.n - 1) // 2


def competition_graph(d: Digraph) -> CompetitionGraph:
    out = d.out
    adj = [0] * d.n
    for u in range(d.n):
        ou = out[u]
        for v in range(u + 1, d.n):
            if ou & out[v]:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return CompetitionGraph(d.n, tuple(adj))


def first_non_competing_pair(d: Digraph) -> tuple[int, int] | None:
    """Lexicographically first pair with no common out-neighbor, or None."""
    out = d.out
    for u in range(d.n):
        ou = out[u]
        for v in range(u + 1, d.n):
            if not ou & out[v]:
                return u, v
    return None


def is_complete_competition(d: Digraph) -> bool:
    return first_non_competing_pair(d) is None


# ─────────────────────────────────────────────────────────────────────────────
# MULTIPARTITE TOURNAMENT
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Violation:
    kind: str
    pair: tuple[int, int] | None
    message: str

    def __str__(self):
        return self.message


@dataclass(frozen=True)
class MultipartiteTournament:
    d: Digraph
    parts: PartiteStructure

    @classmethod
    def checked(cls, d: Digraph, parts: PartiteStructure) -> MultipartiteTournament:
        t = cls(d, parts)
        violations = validate(t)
        if violations:
            raise InvalidTournamentError(
                f"not an orientation of K_{{{','.join(map(str, parts.sizes))}}}: {violations[0]}",
                violations)
        return t

    @classmethod
    def from_out_masks(cls, sizes: Sequence[int], out: Sequence[int]) -> MultipartiteTournament:
        parts = PartiteStructure(tuple(sizes))
        return cls.checked(Digraph(parts.n, tuple(out)), parts)

    @property
    def n(self) -> int:
        return self.d.n

    @property
    def sizes(self) -> tuple[int, ...]:
        return self.parts.sizes

    @property
    def k(self) -> int:
        return self.parts.k

    def out_neighbors(self, v: int) -> frozenset[int]:
        return self.d.out_neighbors(v)

    def in_neighbors(self, v: int) -> frozenset[int]:
        return self.d.in_neighbors(v)

    def part_of(self, v: int) -> int:
        return self.parts.part_of(v)


def validate(t: MultipartiteTournament) -> list[Violation]:
    """Every violated tournament invariant, in vertex order. Empty means valid."""
    d, parts = t.d, t.parts
    violations: list[Violation] = []
    if d.n != parts.n:
        violations.append(Violation(
            'size mismatch', None,
            f"size mismatch: digraph has {d.n} vertices, sizes {parts.sizes} sum to {parts.n}"))
        return violations

    for kind, (u, v) in d.defects():
        if kind == 'self-loop':
            violations.append(Violation(kind, (u, u), f"self-loop at {u}"))
        else:
            violations.append(Violation(kind, (u, v), f"2-cycle {{{u},{v}}}"))

    for u in range(d.n):
        pu = parts.part_of(u)
        for v in range(d.n):
            if u == v:
                continue
            if parts.part_of(v) == pu:
                if d.out[u] >> v & 1:
                    violations.append(Violation('intra-part arc', (u, v), f"intra-part arc ({u},{v})"))
            elif v > u and not (d.out[u] >> v & 1 or d.out[v] >> u & 1):
                violations.append(Violation(
                    'missing cross-part arc', (u, v), f"missing cross-part arc {{{u},{v}}}"))

    if not violations and d.arc_count != parts.arc_count:
        violations.append(Violation(
            'size mismatch', None,
            f"size mismatch: {d.arc_count} arcs, K_{parts.sizes} needs {parts.arc_count}"))
    return violations


def canonical_tournament(
    part_labels: Sequence[int], out: Sequence[int]
) -> tuple[MultipartiteTournament, list[int]]:
    """
    Renumber a tournament given by per-vertex part labels and out-masks so its
    parts are consecutive and nonincreasing in size.

    Parts are ordered by (-size, label); vertices keep their relative order
    inside a part. Returns the tournament and the old -> new vertex map.
    """
    counts: dict[int, int] = {}
    for label in part_labels:
        counts[label] = counts.get(label, 0) + 1
    order = sorted(counts, key=lambda label: (-counts[label], label))
    rank = {label: i for i, label in enumerate(order)}
    new_order = sorted(range(len(part_labels)), key=lambda v: (rank[part_labels[v]], v))
    relabel = [0] * len(part_labels)
    for new, old in enumerate(new_order):
        relabel[old] = new

    new_out = [0] * len(part_labels)
    for old, m in enumerate(out):
        new_out[relabel[old]] = mask_of(relabel[w] for w in iter_bits(m))
    sizes = tuple(counts[label] for label in order)
    return MultipartiteTournament.from_out_masks(sizes, new_out), relabel


def induced_tournament(
    t: MultipartiteTournament, keep: Iterable[int]
) -> tuple[MultipartiteTournament, list[int]]:
    """Sub-tournament on `keep` (empty parts dropped), plus the kept-vertex list in new order."""
    keep = sorted(set(keep))
    index = {v: i for i, v in enumerate(keep)}
    keep_mask = mask_of(keep)
    labels = [t.part_of(v) for v in keep]
    out = [mask_of(index[w] for w in iter_bits(t.d.out[v] & keep_mask)) for v in keep]
    sub, relabel = canonical_tournament(labels, out)
    kept = [0] * len(keep)
    for i, v in enumerate(keep):
        kept[relabel[i]] = v
    return sub, kept
