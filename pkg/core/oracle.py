"""
Decide, from the part sizes alone, whether some orientation of K_{n1,...,nk}
has a complete competition graph, and build one when it does.
"""
import logging
from dataclasses import dataclass
from typing import Iterator, Sequence

from config import get_config
from core.construct import lift, split_part
from core.digraph import MultipartiteTournament, check_sizes, is_complete_competition, max_vertices, validate
from core.errors import ConstructionError, InvalidSizesError
from core.witnesses import WitnessId, load_witness

log = logging.getLogger(__name__)

POSITIVE_CLAUSES = (
    'K1_SINGLE', 'K3_MAIN', 'K4_A', 'K4_B', 'K4_C',
    'K5_A', 'K5_B', 'K5_C', 'K6_A', 'K6_B', 'K6_C', 'K7PLUS',
)
NEGATIVE_CLAUSES = ('K1_NO', 'K2_NONE', 'K3_NO', 'K4_NO', 'K5_NO', 'K6_NO')

# clause -> base construction that lift() grows to the requested sizes
_BASE_WITNESS = {
    'K3_MAIN': WitnessId.A4,
    'K4_A': WitnessId.A5,
    'K4_B': WitnessId.A6,
    'K4_C': WitnessId.A7,
    'K5_A': WitnessId.A8,
    'K5_C': WitnessId.A9,
    'K6_A': WitnessId.A1,
    'K6_B': WitnessId.A2,
    'K6_C': WitnessId.A3,
    'K7PLUS': WitnessId.QR7,
}

# expected smallest vertex counts, compared against the scan in tests
MINIMAL_TOTALS = {3: 13, 4: 10, 5: 9, 6: 9}


@dataclass(frozen=True)
class OracleVerdict:
    sizes: tuple[int, ...]
    exists: bool
    clause: str

    def to_dict(self) -> dict:
        return {"sizes": list(self.sizes), "exists": self.exists, "clause": self.clause}

    def __str__(self):
        return f"{'yes' if self.exists else 'no'} clause={self.clause}"


def _clause(sizes: tuple[int, ...]) -> str:
    k = len(sizes)
    n = (0, *sizes)  # 1-based: n[1] is the largest part

    if k == 1:
        return 'K1_SINGLE' if n[1] == 1 else 'K1_NO'
    if k == 2:
        return 'K2_NONE'
    if k == 3:
        return 'K3_MAIN' if n[1] >= 5 and n[3] >= 4 else 'K3_NO'
    if k == 4:
        if n[1] >= 4 and n[3] >= 3 and n[4] == 1:
            return 'K4_A'
        if n[1] >= 4 and n[3] == 2 and n[4] == 2:
            return 'K4_B'
        if n[3] >= 3 and n[4] >= 2:
            return 'K4_C'
        return 'K4_NO'
    if k == 5:
        if n[1] == 3 and n[2] == 3 and n[3] >= 2 and n[4] == n[5] == 1:
            return 'K5_A'
        # n2 >= n3 holds by sortedness
        if n[1] >= 4 and n[3] >= 2 and n[4] == n[5] == 1:
            return 'K5_B'
        if n[4] >= 2:
            return 'K5_C'
        return 'K5_NO'
    if k == 6:
        if n[1] >= 5 and n[2] == 1:
            return 'K6_A'
        if n[1] >= 3 and n[2] >= 2 and n[3] == 1:
            return 'K6_B'
        if n[3] >= 2:
            return 'K6_C'
        return 'K6_NO'
    return 'K7PLUS'


def exists_complete_orientation(sizes: Sequence[int]) -> OracleVerdict:
    sizes = check_sizes(sizes)
    clause = _clause(sizes)
    return OracleVerdict(sizes, clause in POSITIVE_CLAUSES, clause)


def _smallest_completion(rest: int, parts_left: int | None, cap: int) -> tuple[int, ...] | None:
    """Lexicographically least nonincreasing tail summing to `rest` with entries <= cap."""
    if parts_left is None:
        return (1,) * rest if rest == 0 or cap >= 1 else None
    if rest == 0:
        return () if parts_left == 0 else None
    if parts_left <= 0 or parts_left > rest or parts_left * cap < rest:
        return None
    q, s = divmod(rest, parts_left)
    return (q + 1,) * s + (q,) * (parts_left - s)


def iter_partitions(n: int, k: int | None = None, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """
    Nonincreasing tuples of positive integers summing to `n` (exactly `k`
    entries when given), in lexicographic order.

    Each tuple is the successor of the previous one: bump the rightmost entry
    that can grow and refill the tail with its smallest completion.
    """
    if max_part is None:
        max_part = n
    current = _smallest_completion(n, k, max_part)
    while current is not None:
        yield current
        following = None
        prefix_sum = sum(current)
        for i in range(len(current) - 1, -1, -1):
            prefix_sum -= current[i]
            value = current[i] + 1
            if value > (current[i - 1] if i else max_part) or prefix_sum + value > n:
                continue
            tail = _smallest_completion(n - prefix_sum - value, None if k is None else k - i - 1, value)
            if tail is not None:
                following = (*current[:i], value, *tail)
                break
        current = following


def minimal_total(k: int) -> int | None:
    """
    Smallest n for which some k-part size tuple summing to n admits a complete
    competition graph, found by scanning the oracle. None when nothing turns
    up below MINIMAL_TOTAL_SCAN_LIMIT (the k = 2 case).
    """
    if k < 1:
        raise ValueError(f"part count must be positive, got {k}")
    limit = get_config().MINIMAL_TOTAL_SCAN_LIMIT
    for n in range(k, max(limit, k) + 1):
        for sizes in iter_partitions(n, k):
            if exists_complete_orientation(sizes).exists:
                log.debug("minimal total for k=%d is %d, first hit %s", k, n, sizes)
                return n
    return None


def _assert_witness(t: MultipartiteTournament, sizes: tuple[int, ...]) -> MultipartiteTournament:
    if t.sizes != sizes:
        raise ConstructionError(f"synthesized K_{t.sizes}, wanted K_{sizes}")
    violations = validate(t)
    if violations:
        raise ConstructionError(f"synthesized tournament for K_{sizes} is invalid: {violations[0]}")
    if not is_complete_competition(t.d):
        raise ConstructionError(f"synthesized tournament for K_{sizes} is not complete")
    return t


def base_for(clause: str) -> MultipartiteTournament:
    """The construction a positive clause's witnesses are lifted from."""
    if clause == 'K5_B':
        a6 = load_witness(WitnessId.A6)
        # K_{4,2,2,2} -> K_{4,2,2,1,1}
        return split_part(a6, a6.k - 1, (1, 1))
    return load_witness(_BASE_WITNESS[clause])


def synthesize_witness(sizes: Sequence[int]) -> MultipartiteTournament | None:
    """A validated orientation of K_{sizes} with complete competition graph, or None."""
    verdict = exists_complete_orientation(sizes)
    if not verdict.exists:
        return None
    if sum(verdict.sizes) > max_vertices():
        raise InvalidSizesError(
            f"K_{verdict.sizes} has {sum(verdict.sizes)} vertices; witnesses are capped at {max_vertices()} (COMPGRAPH_MAX_N)")
    if verdict.clause == 'K1_SINGLE':
        t = MultipartiteTournament.from_out_masks((1,), (0,))
    else:
        t = lift(base_for(verdict.clause), verdict.sizes)
    log.info("witness for K_%s via %s (%d arcs)", verdict.sizes, verdict.clause, t.d.arc_count)
    return _assert_witness(t, verdict.sizes)


def yes_set(max_sum: int, min_parts: int = 2) -> list[tuple[int, ...]]:
    """Every accepted tuple with total at most `max_sum` and at least `min_parts` parts."""
    accepted = []
    for n in range(1, max_sum + 1):
        for sizes in iter_partitions(n):
            if len(sizes) >= min_parts and exists_complete_orientation(sizes).exists:
                accepted.append(sizes)
    return accepted
