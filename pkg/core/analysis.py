"""
Necessary conditions for a complete competition graph, evaluated on concrete
tournaments (diagnostics) or on bare size tuples (counting refutations).

Per-vertex checks return ``{vertex: passed}``. A failed condition always names
something concrete: a vertex, a pair, or a count.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from core.digraph import (
    MultipartiteTournament,
    check_sizes,
    first_non_competing_pair,
    iter_bits,
)
from core.errors import EmbeddingNotFoundError, PreconditionError

log = logging.getLogger(__name__)

SPREAD2 = 'SPREAD2'
TWO_PART_2_2 = 'TWO_PART_2_2'
OUTDEG3 = 'OUTDEG3'
COUNT_BOUND = 'COUNT_BOUND'
CYCLE3 = 'CYCLE3'
SIZE1_PARTS = 'SIZE1_PARTS'
THREE_PART_SUM = 'THREE_PART_SUM'
N_LOWER_BOUND = 'N_LOWER_BOUND'
BALANCE_444 = 'BALANCE_444'
DTILDE = 'DTILDE'
BIPARTITE = 'BIPARTITE'

CONDITION_IDS = (
    SPREAD2, TWO_PART_2_2, OUTDEG3, COUNT_BOUND, CYCLE3,
    SIZE1_PARTS, THREE_PART_SUM, N_LOWER_BOUND, BALANCE_444, DTILDE,
)

# part counts for which an outdegree-3 vertex forces the seven-vertex configuration
DTILDE_PART_COUNTS = (4, 5, 6)


@dataclass(frozen=True)
class ConditionResult:
    condition: str
    status: bool | None          # None: condition does not apply to this instance
    witness: object = None
    detail: str = ''

    def to_dict(self) -> dict:
        return {"condition": self.condition, "status": _status_name(self.status),
                "witness": self.witness, "detail": self.detail}


@dataclass(frozen=True)
class ConditionReport:
    sizes: tuple[int, ...]
    results: tuple[ConditionResult, ...]
    complete: bool
    non_competing_pair: tuple[int, int] | None = None
    equal_out_pairs: tuple[tuple[int, int, int], ...] = ()

    @property
    def passed(self) -> bool:
        return all(r.status is not False for r in self.results)

    @property
    def failures(self) -> list[ConditionResult]:
        return [r for r in self.results if r.status is False]

    def get(self, condition: str) -> ConditionResult:
        for r in self.results:
            if r.condition == condition:
                return r
        raise KeyError(condition)

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "complete": self.complete,
            "non_competing_pair": list(self.non_competing_pair) if self.non_competing_pair else None,
            "passed": self.passed,
            "conditions": [r.to_dict() for r in self.results],
            "equal_out_pairs": [list(p) for p in self.equal_out_pairs],
        }


@dataclass(frozen=True)
class CountingVerdict:
    sizes: tuple[int, ...]
    refuted: bool
    arc_count: int
    outdeg3_bound: int
    fired: tuple[tuple[str, str], ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "refuted": self.refuted,
            "arc_count": self.arc_count,
            "outdeg3_bound": self.outdeg3_bound,
            "fired": [{"condition": c, "detail": d} for c, d in self.fired],
        }


@dataclass(frozen=True)
class DTildeEmbedding:
    u: int
    v: tuple[int, int, int]
    w: tuple[int, int, int]

    @property
    def vertices(self) -> tuple[int, ...]:
        return (self.u, *self.v, *self.w)

    def arcs(self) -> list[tuple[int, int]]:
        """The fifteen arcs the configuration consists of."""
        v1, v2, v3 = self.v
        w1, w2, w3 = self.w
        return [
            (self.u, v1), (self.u, v2), (self.u, v3),
            (v1, v2), (v2, v3), (v3, v1),
            (v1, w1), (v2, w1), (v2, w2), (v3, w2), (v3, w3), (v1, w3),
            (w1, v3), (w2, v1), (w3, v2),
        ]


# ─────────────────────────────────────────────────────────────────────────────
# INTERNAL HELPERS
# ─────────────────────────────────────────────────────────────────────────────

def _status_name(status: bool | None) -> str:
    if status is None:
        return 'n/a'
    return 'pass' if status else 'fail'


def _arc_count(sizes: Sequence[int]) -> int:
    n = sum(sizes)
    return (n * n - sum(s * s for s in sizes)) // 2


def _is_directed_3_cycle(out: Sequence[int], triple: Sequence[int]) -> bool:
    """Each member beats exactly one other member of the triple."""
    mask = 0
    for x in triple:
        mask |= 1 << x
    return all((out[x] & mask).bit_count() == 1 for x in triple)


def _first_failure(per_vertex: dict[int, bool]) -> int | None:
    for v, ok in per_vertex.items():
        if not ok:
            return v
    return None


def _vertex_result(condition: str, per_vertex: dict[int, bool], what: str) -> ConditionResult:
    bad = _first_failure(per_vertex)
    if bad is None:
        return ConditionResult(condition, True)
    return ConditionResult(condition, False, bad, f"vertex {bad} {what}")


# ─────────────────────────────────────────────────────────────────────────────
# PER-VERTEX CHECKS
# ─────────────────────────────────────────────────────────────────────────────

def check_spread2(t: MultipartiteTournament) -> dict[int, bool]:
    """Out-neighbors must meet at least two parts."""
    return {v: len(t.parts.parts_hit(t.d.out[v])) >= 2 for v in range(t.n)}


def check_two_part_2_2(t: MultipartiteTournament) -> dict[int, bool]:
    """
    A vertex whose out-neighbors lie in exactly two parts needs at least two
    of them in each. Vertices reaching three or more parts pass vacuously.
    """
    result = {}
    for v in range(t.n):
        out = t.d.out[v]
        hit = t.parts.parts_hit(out)
        if len(hit) == 2:
            result[v] = all((out & t.parts.masks[i]).bit_count() >= 2 for i in hit)
        else:
            result[v] = True
    return result


def check_outdeg3(t: MultipartiteTournament) -> dict[int, bool]:
    return {v: t.d.out_degree(v) >= 3 for v in range(t.n)}


def check_cycle3(t: MultipartiteTournament) -> dict[int, bool]:
    """An outdegree-3 vertex must see its out-neighbors as a directed 3-cycle."""
    result = {}
    for v in range(t.n):
        out = t.d.out[v]
        if out.bit_count() != 3:
            result[v] = True
            continue
        result[v] = _is_directed_3_cycle(t.d.out, list(iter_bits(out)))
    return result


def check_three_part_sum(t: MultipartiteTournament) -> dict[int, bool]:
    """
    For k in {4,5}: the parts holding the out-neighbors of an outdegree-3
    vertex sum to at most n - 4.
    """
    if t.k not in (4, 5):
        return {v: True for v in range(t.n)}
    result = {}
    for v in range(t.n):
        out = t.d.out[v]
        hit = t.parts.parts_hit(out)
        if out.bit_count() != 3 or len(hit) != 3:
            result[v] = True
            continue
        result[v] = sum(t.sizes[i] for i in hit) <= t.n - 4
    return result


def check_balance_444(t: MultipartiteTournament) -> dict[int, bool]:
    """In K_{4,4,4}: exactly two out-arcs (and so two in-arcs) to each other part."""
    if t.sizes != (4, 4, 4):
        raise PreconditionError(f"balance is defined for K_(4,4,4), got K_{t.sizes}")
    result = {}
    for v in range(t.n):
        own = t.part_of(v)
        result[v] = all((t.d.out[v] & t.parts.masks[j]).bit_count() == 2
                        for j in range(3) if j != own)
    return result


def is_min_indegree_normal(t: MultipartiteTournament) -> bool:
    return all(t.d.in_degree(v) >= 2 for v in range(t.n))


def equal_out_neighborhood_pairs(t: MultipartiteTournament) -> list[tuple[int, int, int]]:
    """(x, y, j) for same-part x < y whose out-sets agree on another part j."""
    pairs = []
    for i in range(t.k):
        for x, y in combinations(t.parts.part_range(i), 2):
            for j in range(t.k):
                if j == i:
                    continue
                mask = t.parts.masks[j]
                if t.d.out[x] & mask == t.d.out[y] & mask:
                    pairs.append((x, y, j))
    return pairs


# ─────────────────────────────────────────────────────────────────────────────
# SIZE-LEVEL BOUNDS
# ─────────────────────────────────────────────────────────────────────────────

def count_bound(sizes: Sequence[int]) -> tuple[int, int]:
    """(|A|, max(4n - |A|, 0)): arcs of any orientation, forced outdegree-3 vertices."""
    sizes = check_sizes(sizes)
    arcs = _arc_count(sizes)
    return arcs, max(4 * sum(sizes) - arcs, 0)


def size1_parts_ok(sizes: Sequence[int]) -> bool:
    k = len(sizes)
    return k not in (4, 5) or sum(1 for s in sizes if s == 1) <= k - 3


def min_three_part_sum(sizes: Sequence[int]) -> int:
    """Smallest total over three distinct parts (sizes sorted nonincreasing)."""
    return sum(sorted(sizes)[:3])


def check_size1_parts(t: MultipartiteTournament) -> bool:
    return size1_parts_ok(t.sizes)


def check_n_lower_bound(t: MultipartiteTournament) -> bool:
    """
    For k in {4,5,6} with an outdegree-3 vertex: n >= 9, and n >= 10 when k = 4.
    """
    if t.k not in DTILDE_PART_COUNTS:
        return True
    if not any(t.d.out_degree(v) == 3 for v in range(t.n)):
        return True
    return t.n >= (10 if t.k == 4 else 9)


def refute_by_counting(sizes: Sequence[int]) -> CountingVerdict:
    """
    Decide nonexistence from the size tuple alone, or return an inconclusive
    verdict. Every fired rule is listed with the numbers that triggered it.
    """
    sizes = check_sizes(sizes)
    k, n = len(sizes), sum(sizes)
    arcs, bound = count_bound(sizes)
    fired = []

    if k == 2:
        fired.append((BIPARTITE, "no bipartite tournament has a complete competition graph"))

    if not size1_parts_ok(sizes):
        ones = sum(1 for s in sizes if s == 1)
        fired.append((SIZE1_PARTS, f"{ones} parts of size 1 exceeds k-3 = {k - 3}"))

    if k in DTILDE_PART_COUNTS and 4 * n > arcs:
        forced = f"|A| = {arcs} < 4n = {4 * n} forces an outdegree-3 vertex"
        if n < 9:
            fired.append((COUNT_BOUND, forced))
            fired.append((N_LOWER_BOUND, f"n = {n} < 9"))
        elif k == 4 and n < 10:
            fired.append((COUNT_BOUND, forced))
            fired.append((N_LOWER_BOUND, f"k = 4 and n = {n} < 10"))
        elif k in (4, 5) and min_three_part_sum(sizes) > n - 4:
            fired.append((COUNT_BOUND, forced))
            fired.append((THREE_PART_SUM,
                          f"smallest three-part sum {min_three_part_sum(sizes)} > n-4 = {n - 4}"))

    verdict = CountingVerdict(sizes, bool(fired), arcs, bound, tuple(fired))
    log.debug("counting on K_%s: %s", sizes, 'refuted' if verdict.refuted else 'inconclusive')
    return verdict


# ─────────────────────────────────────────────────────────────────────────────
# SEVEN-VERTEX CONFIGURATION AROUND AN OUTDEGREE-3 VERTEX
# ─────────────────────────────────────────────────────────────────────────────

def dtilde_embedding(t: MultipartiteTournament, u: int) -> DTildeEmbedding:
    """
    Find u -> v1, v2, v3 with v1 -> v2 -> v3 -> v1 and distinct w1, w2, w3
    where w_i is common prey of v_i and v_{i+1} and w1 -> v3, w2 -> v1,
    w3 -> v2. v1 is the smallest out-neighbor of u; the w-triple returned is
    the lexicographically least one.
    """
    if t.d.out_degree(u) != 3:
        raise PreconditionError(f"vertex {u} has outdegree {t.d.out_degree(u)}, not 3")
    out, inn = t.d.out, t.d.inn
    triple = list(iter_bits(out[u]))
    if not _is_directed_3_cycle(out, triple):
        raise EmbeddingNotFoundError(f"out-neighbors {triple} of vertex {u} are not a directed 3-cycle")

    v1 = triple[0]
    v2 = next(x for x in triple if out[v1] >> x & 1)
    v3 = next(x for x in triple if x not in (v1, v2))
    for w1 in iter_bits(out[v1] & out[v2] & inn[v3]):
        for w2 in iter_bits(out[v2] & out[v3] & inn[v1]):
            if w2 == w1:
                continue
            for w3 in iter_bits(out[v3] & out[v1] & inn[v2]):
                if w3 not in (w1, w2):
                    return DTildeEmbedding(u, (v1, v2, v3), (w1, w2, w3))
    raise EmbeddingNotFoundError(f"no seven-vertex configuration around vertex {u}")


def check_dtilde(t: MultipartiteTournament) -> dict[int, bool]:
    result = {}
    for v in range(t.n):
        if t.d.out_degree(v) != 3:
            result[v] = True
            continue
        try:
            dtilde_embedding(t, v)
            result[v] = True
        except EmbeddingNotFoundError:
            result[v] = False
    return result


# ─────────────────────────────────────────────────────────────────────────────
# FULL REPORT
# ─────────────────────────────────────────────────────────────────────────────

def check_conditions(t: MultipartiteTournament) -> ConditionReport:
    """Evaluate every condition on `t` (assumed to be a valid tournament)."""
    pair = first_non_competing_pair(t.d)
    complete = pair is None
    results = [
        _vertex_result(SPREAD2, check_spread2(t), "has out-neighbors in fewer than two parts"),
        _vertex_result(TWO_PART_2_2, check_two_part_2_2(t),
                       "reaches exactly two parts with fewer than two out-neighbors in one"),
        _vertex_result(OUTDEG3, check_outdeg3(t), "has outdegree below 3"),
    ]

    arcs, bound = count_bound(t.sizes)
    degree3 = sum(1 for v in range(t.n) if t.d.out_degree(v) == 3)
    if degree3 >= bound:
        results.append(ConditionResult(COUNT_BOUND, True, degree3,
                                       f"{degree3} outdegree-3 vertices, at least {bound} required"))
    else:
        results.append(ConditionResult(COUNT_BOUND, False, degree3,
                                       f"only {degree3} outdegree-3 vertices, at least {bound} required"))

    results.append(_vertex_result(CYCLE3, check_cycle3(t),
                                  "has an out-triple that is not a directed 3-cycle"))

    if t.k in (4, 5):
        ones = sum(1 for s in t.sizes if s == 1)
        results.append(ConditionResult(SIZE1_PARTS, check_size1_parts(t), ones,
                                       f"{ones} parts of size 1, at most {t.k - 3} allowed"))
        results.append(_vertex_result(THREE_PART_SUM, check_three_part_sum(t),
                                      f"has out-neighbors in three parts summing above n-4 = {t.n - 4}"))
    else:
        results.append(ConditionResult(SIZE1_PARTS, None))
        results.append(ConditionResult(THREE_PART_SUM, None))

    if t.k in DTILDE_PART_COUNTS:
        need = 10 if t.k == 4 else 9
        results.append(ConditionResult(N_LOWER_BOUND, check_n_lower_bound(t), t.n,
                                       f"n = {t.n}, at least {need} needed when an outdegree-3 vertex exists"))
    else:
        results.append(ConditionResult(N_LOWER_BOUND, None))

    equal_pairs: tuple = ()
    if t.sizes == (4, 4, 4):
        results.append(_vertex_result(BALANCE_444, check_balance_444(t),
                                      "does not have two out- and two in-arcs toward each other part"))
        equal_pairs = tuple(equal_out_neighborhood_pairs(t))
    else:
        results.append(ConditionResult(BALANCE_444, None))

    if complete and t.k in DTILDE_PART_COUNTS:
        results.append(_vertex_result(DTILDE, check_dtilde(t),
                                      "has outdegree 3 but no seven-vertex configuration"))
    else:
        results.append(ConditionResult(DTILDE, None))

    report = ConditionReport(t.sizes, tuple(results), complete, pair, equal_pairs)
    log.debug("conditions on K_%s: %d failures, complete=%s", t.sizes, len(report.failures), complete)
    return report
