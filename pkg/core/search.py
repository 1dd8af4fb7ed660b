"""
Exhaustive search over orientations of K_{n1,...,nk}.

The DFS decides cross-part pairs in lexicographic order, trying u -> v before
v -> u, and prunes with the local necessary conditions from core.analysis.
Results are one of three statuses: a witness, exhaustion of the (pruned)
space, or inconclusive when the node budget ran out.
"""
import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, product
from multiprocessing import Pool, Value
from typing import Callable, Iterable, Sequence

import numpy as np

from config import get_config
from core.analysis import CYCLE3, OUTDEG3, SPREAD2, TWO_PART_2_2
from core.digraph import (
    Digraph,
    MultipartiteTournament,
    PartiteStructure,
    check_sizes,
    iter_bits,
)
from core.errors import SearchLimitError
from core.oracle import exists_complete_orientation, iter_partitions

log = logging.getLogger(__name__)

PAIR_FEASIBLE = 'PAIR_FEASIBLE'
SYMMETRY = 'SYMMETRY'

SEARCH_RULES = (SPREAD2, TWO_PART_2_2, OUTDEG3, CYCLE3, PAIR_FEASIBLE)

WITNESS = 'witness'
EXHAUSTED = 'exhausted'
INCONCLUSIVE = 'inconclusive'

_STOP_CHECK_INTERVAL = 1024


@dataclass(frozen=True)
class SearchConfig:
    prune: frozenset = frozenset(SEARCH_RULES)
    max_nodes: int | None = None
    workers: int = 1
    symmetry_fix: bool = False

    def __post_init__(self):
        prune = frozenset(self.prune)
        unknown = prune - set(SEARCH_RULES)
        if unknown:
            raise ValueError(f"unknown pruning rules {sorted(unknown)}; expected a subset of {list(SEARCH_RULES)}")
        object.__setattr__(self, 'prune', prune)
        if self.max_nodes is not None and self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass
class SearchOutcome:
    sizes: tuple[int, ...]
    status: str
    witness: MultipartiteTournament | None = None
    nodes_explored: int = 0
    prunes_by_rule: dict[str, int] = field(default_factory=dict)
    wall_time: float = 0.0
    symmetry_reduced: bool = False
    details: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.status == WITNESS

    def to_dict(self) -> dict:
        data = {
            "sizes": list(self.sizes),
            "status": self.status,
            "nodes_explored": self.nodes_explored,
            "prunes_by_rule": dict(sorted(self.prunes_by_rule.items())),
            "wall_time": round(self.wall_time, 3),
            "symmetry_reduced": self.symmetry_reduced,
        }
        if self.witness is not None:
            data["witness"] = {"sizes": list(self.witness.sizes),
                               "arcs": [[u, v] for u, v in self.witness.d.arcs()]}
        if self.details:
            data["details"] = self.details
        return data


class _BudgetExceeded(Exception):
    pass


class _Cancelled(Exception):
    pass


# ─────────────────────────────────────────────────────────────────────────────
# DFS ENGINE
# ─────────────────────────────────────────────────────────────────────────────

class _Engine:
    """
    Mutable search state: decided out-masks plus the still-undecided cross
    neighbors of every vertex. `out | und` is what a vertex could still prey on.
    """

    def __init__(self, parts: PartiteStructure, prune: Iterable[str], symmetry: bool = False,
                 max_nodes: int | None = None, should_stop: Callable[[], bool] | None = None):
        self.parts = parts
        self.n = parts.n
        self.pairs = list(parts.cross_pairs())
        self.masks = parts.masks
        self.out = [0] * self.n
        self.und = [parts.cross_mask(v) for v in range(self.n)]
        self.prune = frozenset(prune)
        self.symmetry = symmetry
        self.max_nodes = max_nodes
        self.should_stop = should_stop
        self.nodes = 0
        self.prunes: Counter = Counter()
        self.triples: list[int] = []
        self.choices: list[bool] = []

    # --- state changes -----------------------------------------------------

    def _apply(self, i: int, forward: bool):
        u, v = self.pairs[i]
        winner, loser = (u, v) if forward else (v, u)
        saved = (self.out[winner], self.und[u], self.und[v], len(self.triples))
        self.out[winner] |= 1 << loser
        self.und[u] &= ~(1 << v)
        self.und[v] &= ~(1 << u)
        self.choices.append(forward)
        return winner, loser, saved

    def _undo(self, i: int, winner: int, saved) -> None:
        u, v = self.pairs[i]
        self.out[winner], self.und[u], self.und[v], kept = saved
        del self.triples[kept:]
        self.choices.pop()

    # --- pruning -------------------------------------------------------------

    def _parts_hit(self, mask: int) -> int:
        return sum(1 for m in self.masks if m & mask)

    def _triple_ok(self, triple: int) -> bool:
        """No member of a would-be 3-cycle beats, or is beaten by, both others."""
        for x in iter_bits(triple):
            if (self.out[x] & triple).bit_count() > 1:
                return False
            if sum(1 for y in iter_bits(triple) if self.out[y] >> x & 1) > 1:
                return False
        return True

    def _finalized(self, w: int) -> str | None:
        o = self.out[w]
        hit = [m for m in self.masks if m & o]
        if SPREAD2 in self.prune and len(hit) < 2:
            return SPREAD2
        if TWO_PART_2_2 in self.prune and len(hit) == 2 and any((o & m).bit_count() < 2 for m in hit):
            return TWO_PART_2_2
        if OUTDEG3 in self.prune and o.bit_count() < 3:
            return OUTDEG3
        if CYCLE3 in self.prune and o.bit_count() == 3:
            if len(hit) < 3 or not self._triple_ok(o):
                return CYCLE3
            self.triples.append(o)
        return None

    def _symmetry(self, i: int) -> bool:
        """False when vertex 0's out-arcs break the canonical form."""
        u, v = self.pairs[i]
        if u != 0:
            return True
        j = self.parts.part_of(v)
        lo, hi = self.parts.offsets[j], self.parts.offsets[j + 1]
        # within a part, vertex 0 beats a prefix
        if self.out[0] >> v & 1 and v > lo and not self.out[0] >> (v - 1) & 1:
            return False
        # equal-size parts other than vertex 0's own: nonincreasing counts
        if v == hi - 1 and j >= 2 and self.parts.sizes[j] == self.parts.sizes[j - 1]:
            if (self.out[0] & self.masks[j]).bit_count() > (self.out[0] & self.masks[j - 1]).bit_count():
                return False
        return True

    def _check(self, i: int, winner: int, loser: int) -> str | None:
        if self.symmetry and not self._symmetry(i):
            return SYMMETRY
        pos = self.out[loser] | self.und[loser]
        if OUTDEG3 in self.prune and pos.bit_count() < 3:
            return OUTDEG3
        if SPREAD2 in self.prune and self._parts_hit(pos) < 2:
            return SPREAD2
        if PAIR_FEASIBLE in self.prune:
            for x in range(self.n):
                if x != loser and not pos & (self.out[x] | self.und[x]):
                    return PAIR_FEASIBLE
        for w in (winner, loser):
            if not self.und[w]:
                rule = self._finalized(w)
                if rule:
                    return rule
        if CYCLE3 in self.prune and self.triples:
            both = 1 << winner | 1 << loser
            for triple in self.triples:
                if triple & both == both and not self._triple_ok(triple):
                    return CYCLE3
        return None

    def _complete(self) -> bool:
        out = self.out
        return all(out[x] & out[y] for x, y in combinations(range(self.n), 2))

    # --- traversal -----------------------------------------------------------

    def _visit(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _BudgetExceeded
        if self.should_stop is not None and self.nodes % _STOP_CHECK_INTERVAL == 0 and self.should_stop():
            raise _Cancelled

    def _dfs(self, i: int, depth_limit: int | None = None, sink: list | None = None) -> bool:
        if depth_limit is not None and i == depth_limit:
            sink.append(tuple(self.choices))
            return False
        if i == len(self.pairs):
            return self._complete()
        for forward in (True, False):
            self._visit()
            winner, loser, saved = self._apply(i, forward)
            rule = self._check(i, winner, loser)
            if rule:
                self.prunes[rule] += 1
            elif self._dfs(i + 1, depth_limit, sink):
                return True
            self._undo(i, winner, saved)
        return False

    def run(self, prefix: Sequence[bool] = ()) -> bool:
        """Replay `prefix` (already checked when it was generated), then search below it."""
        for i, forward in enumerate(prefix):
            winner, loser, _ = self._apply(i, forward)
            if self._check(i, winner, loser):
                return False
        return self._dfs(len(prefix))

    def prefixes(self, depth: int) -> list[tuple[bool, ...]]:
        sink: list = []
        self._dfs(0, min(depth, len(self.pairs)), sink)
        return sink

    def witness(self) -> MultipartiteTournament:
        return MultipartiteTournament.from_out_masks(self.parts.sizes, self.out)


# ─────────────────────────────────────────────────────────────────────────────
# PARALLEL SUBTREES
# ─────────────────────────────────────────────────────────────────────────────

_best_index = None


def _init_worker(best) -> None:
    global _best_index
    _best_index = best


def _search_subtree(item) -> dict:
    index, sizes, prune, symmetry, max_nodes, prefix = item
    best = _best_index
    engine = _Engine(PartiteStructure(sizes), prune, symmetry, max_nodes,
                     should_stop=(lambda: best.value < index) if best is not None else None)
    status, out = EXHAUSTED, None
    try:
        if engine.run(prefix):
            status, out = WITNESS, list(engine.out)
            if best is not None:
                with best.get_lock():
                    if index < best.value:
                        best.value = index
    except _BudgetExceeded:
        status = INCONCLUSIVE
    except _Cancelled:
        status = 'cancelled'
    return {"index": index, "status": status, "out": out,
            "nodes": engine.nodes, "prunes": dict(engine.prunes)}


def _split_depth(workers: int, pair_count: int) -> int:
    depth = 0
    while (1 << depth) < 4 * workers and depth < pair_count:
        depth += 1
    return depth


def _parallel_search(parts: PartiteStructure, config: SearchConfig, outcome: SearchOutcome) -> None:
    splitter = _Engine(parts, config.prune, config.symmetry_fix)
    prefixes = splitter.prefixes(_split_depth(config.workers, len(splitter.pairs)))
    outcome.nodes_explored += splitter.nodes
    prunes = Counter(splitter.prunes)
    log.debug("split K_%s into %d subtrees for %d workers", parts.sizes, len(prefixes), config.workers)

    work_items = [(i, parts.sizes, tuple(config.prune), config.symmetry_fix, config.max_nodes, p)
                  for i, p in enumerate(prefixes)]
    if config.workers > 1 and len(work_items) > 1:
        best = Value('i', len(work_items))
        with Pool(processes=min(config.workers, len(work_items)),
                  initializer=_init_worker, initargs=(best,)) as pool:
            results = pool.map(_search_subtree, work_items)
    else:
        results = [_search_subtree(item) for item in work_items]

    winner = None
    inconclusive = False
    for result in sorted(results, key=lambda r: r["index"]):
        outcome.nodes_explored += result["nodes"]
        prunes.update(result["prunes"])
        if result["status"] == WITNESS and winner is None:
            winner = result
        elif result["status"] == INCONCLUSIVE:
            inconclusive = True
    outcome.prunes_by_rule = dict(prunes)
    if winner is not None:
        outcome.status = WITNESS
        outcome.witness = MultipartiteTournament.from_out_masks(parts.sizes, winner["out"])
    else:
        outcome.status = INCONCLUSIVE if inconclusive else EXHAUSTED


# ─────────────────────────────────────────────────────────────────────────────
# PUBLIC API
# ─────────────────────────────────────────────────────────────────────────────

def exhaustive_search(sizes: Sequence[int], config: SearchConfig | None = None) -> SearchOutcome:
    """
    Look for an orientation of K_{sizes} with complete competition graph.
    With `prune` empty this is a plain enumeration in DFS order.
    """
    sizes = check_sizes(sizes)
    config = config or SearchConfig()
    cap = get_config().SEARCH_MAX_SUM
    if sum(sizes) > cap:
        raise SearchLimitError(f"K_{sizes} has {sum(sizes)} vertices; search is capped at {cap} (SEARCH_MAX_SUM)")
    parts = PartiteStructure(sizes)
    outcome = SearchOutcome(sizes, EXHAUSTED, symmetry_reduced=config.symmetry_fix)
    log.info("search K_%s: %d cross pairs, prune=%s, workers=%d",
             sizes, parts.arc_count, ','.join(sorted(config.prune)) or 'none', config.workers)
    start = time.perf_counter()

    if config.workers > 1:
        _parallel_search(parts, config, outcome)
    else:
        engine = _Engine(parts, config.prune, config.symmetry_fix, config.max_nodes)
        try:
            if engine.run():
                outcome.status = WITNESS
                outcome.witness = engine.witness()
        except _BudgetExceeded:
            outcome.status = INCONCLUSIVE
        outcome.nodes_explored = engine.nodes
        outcome.prunes_by_rule = dict(engine.prunes)

    outcome.wall_time = time.perf_counter() - start
    log.info("search K_%s: %s after %d nodes in %.2fs %s",
             sizes, outcome.status, outcome.nodes_explored, outcome.wall_time, outcome.prunes_by_rule)
    return outcome


def enumerate_all(sizes: Sequence[int], visitor: Callable[[MultipartiteTournament], None] | None = None) -> int:
    """
    Visit every orientation of K_{sizes} once, in the DFS's branch order.
    Returns 2^|A|.
    """
    parts = PartiteStructure(check_sizes(sizes))
    cap = get_config().ENUMERATE_MAX_ARCS
    if parts.arc_count > cap:
        raise SearchLimitError(f"K_{parts.sizes} has {parts.arc_count} cross pairs; enumeration is capped at {cap}")
    count = 1 << parts.arc_count
    if visitor is None:
        return count
    pairs = list(parts.cross_pairs())
    for choice in product((True, False), repeat=len(pairs)):
        out = [0] * parts.n
        for (u, v), forward in zip(pairs, choice):
            if forward:
                out[u] |= 1 << v
            else:
                out[v] |= 1 << u
        visitor(MultipartiteTournament(Digraph(parts.n, tuple(out)), parts))
    return count


# ─────────────────────────────────────────────────────────────────────────────
# K_{4,4,4}
# ─────────────────────────────────────────────────────────────────────────────

def balanced_matrices() -> np.ndarray:
    """All 4x4 0-1 matrices with every row and column sum 2, shape (90, 4, 4)."""
    rows = [r for r in product((0, 1), repeat=4) if sum(r) == 2]
    found = [m for m in product(rows, repeat=4) if all(sum(col) == 2 for col in zip(*m))]
    return np.array(found, dtype=np.int64)


def orientation_from_balanced(m01: np.ndarray, m02: np.ndarray, m12: np.ndarray) -> MultipartiteTournament:
    """
    K_{4,4,4} from three part-pair matrices: m_ij[a, b] = 1 iff vertex a of
    part i beats vertex b of part j.
    """
    out = [0] * 12
    for (i, j), m in (((0, 1), m01), ((0, 2), m02), ((1, 2), m12)):
        for a in range(4):
            for b in range(4):
                x, y = 4 * i + a, 4 * j + b
                if m[a, b]:
                    out[x] |= 1 << y
                else:
                    out[y] |= 1 << x
    return MultipartiteTournament.from_out_masks((4, 4, 4), out)


def _share_all(*prey: np.ndarray) -> np.ndarray:
    """
    Every pair of the four vertices shares prey in at least one of the given
    prey-set stacks. Each argument broadcasts to (..., 4, m).
    """
    shared = None
    for p in prey:
        s = np.einsum('...xm,...ym->...xy', p, p) > 0
        shared = s if shared is None else shared | s
    off_diagonal = ~np.eye(4, dtype=bool)
    return (shared | ~off_diagonal).all(axis=(-2, -1))


def _meet_all(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """(i, j) -> every prey set of p[i] meets every prey set of q[j]."""
    return (np.einsum('ixm,jym->ijxy', p, q) > 0).all(axis=(-2, -1))


def completeness_table(b: np.ndarray) -> np.ndarray:
    """
    complete[i01, i02, i12]: the orientation built from b[i01], b[i02], b[i12]
    has a complete competition graph. Pairs inside a part may share prey in
    either other part; pairs across two parts only in the third.
    """
    rows = b                                 # rows[i][a]: prey of row vertex a in the column part
    cols = 1 - b.transpose(0, 2, 1)          # cols[i][c]: prey of column vertex c in the row part

    # axes below: i01, i02, i12
    part0 = _share_all(rows[:, None], rows[None, :])            # (i01, i02)
    part1 = _share_all(cols[:, None], rows[None, :])            # (i01, i12)
    part2 = _share_all(cols[:, None], cols[None, :])            # (i02, i12)
    cross01 = _meet_all(rows, rows)                             # (i02, i12): prey in part 2
    cross02 = _meet_all(rows, cols)                             # (i01, i12): prey in part 1
    cross12 = _meet_all(cols, cols)                             # (i01, i02): prey in part 0

    complete = ((part0 & cross12)[:, :, None]
                & (part1 & cross02)[:, None, :]
                & (part2 & cross01)[None, :, :])
    return complete


def refute_444() -> SearchOutcome:
    """
    Every vertex of a complete-competition orientation of K_{4,4,4} has two
    out- and two in-arcs toward each other part, so each part pair is one of
    the balanced matrices. Test all B^3 combinations.
    """
    start = time.perf_counter()
    b = balanced_matrices()
    count = len(b)
    complete = completeness_table(b)
    hits = int(complete.sum())
    candidates = complete.size

    outcome = SearchOutcome((4, 4, 4), EXHAUSTED, nodes_explored=candidates,
                            details={"balanced_matrices": count, "candidates": candidates, "complete": hits})
    if hits:
        i01, i02, i12 = np.argwhere(complete)[0]
        outcome.status = WITNESS
        outcome.witness = orientation_from_balanced(b[i01], b[i02], b[i12])
    outcome.wall_time = time.perf_counter() - start
    log.info("K_(4,4,4): %d balanced matrices, %d candidates, %d complete", count, candidates, hits)
    return outcome


# ─────────────────────────────────────────────────────────────────────────────
# GROUND TRUTH
# ─────────────────────────────────────────────────────────────────────────────

@dataclass
class CrosscheckReport:
    max_sum: int
    checked: list[tuple[tuple[int, ...], str, bool]] = field(default_factory=list)
    disagreements: list[tuple[int, ...]] = field(default_factory=list)
    inconclusive: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.inconclusive

    @property
    def found(self) -> list[tuple[int, ...]]:
        return [sizes for sizes, status, _ in self.checked if status == WITNESS]

    def to_dict(self) -> dict:
        return {
            "max_sum": self.max_sum,
            "checked": len(self.checked),
            "yes_set": [list(s) for s in self.found],
            "disagreements": [list(s) for s in self.disagreements],
            "inconclusive": [list(s) for s in self.inconclusive],
        }


def oracle_crosscheck(max_sum: int, config: SearchConfig | None = None) -> CrosscheckReport:
    """Compare search and oracle on every size tuple with k >= 2 and total <= max_sum."""
    report = CrosscheckReport(max_sum)
    for n in range(2, max_sum + 1):
        for sizes in iter_partitions(n):
            if len(sizes) < 2:
                continue
            outcome = exhaustive_search(sizes, config)
            oracle = exists_complete_orientation(sizes).exists
            report.checked.append((sizes, outcome.status, oracle))
            if outcome.status == INCONCLUSIVE:
                report.inconclusive.append(sizes)
            elif outcome.found != oracle:
                report.disagreements.append(sizes)
                log.warning("crosscheck disagreement on K_%s: search=%s oracle=%s", sizes, outcome.status, oracle)
    return report
