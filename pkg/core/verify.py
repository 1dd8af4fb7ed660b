"""
End-to-end verification run: embedded constructions, the decision table,
counting refutations, K_{4,4,4}, exhaustive refutations and construction
sweeps. `quick` finishes in minutes; `full` adds the long searches.
"""
import logging
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from core.analysis import check_conditions, refute_by_counting
from core.construct import add_clone_vertex, lift, normalize_min_indegree, split_part
from core.digraph import is_complete_competition, validate
from core.oracle import (
    MINIMAL_TOTALS,
    exists_complete_orientation,
    minimal_total,
    synthesize_witness,
    yes_set,
)
from core.search import EXHAUSTED, exhaustive_search, oracle_crosscheck, refute_444
from core.witnesses import WitnessId, load_witness, min_row_product

log = logging.getLogger(__name__)

LEVELS = ('quick', 'full')
DEFAULT_SEED = 20240917

ORACLE_CASES = {
    (4, 4, 4): 'K3_NO',
    (5, 4, 4): 'K3_MAIN',
    (3, 2, 2, 1, 1): 'K5_NO',
    (4, 1, 1, 1, 1, 1): 'K6_NO',
    (3, 3, 2, 1, 1): 'K5_A',
    (1, 1, 1, 1, 1, 1, 1): 'K7PLUS',
    (4, 4, 4, 4): 'K4_C',
    (3, 3, 2, 2): 'K4_NO',
    (3, 3, 3, 1): 'K4_NO',
}
COUNTING_REFUTED = ((3, 3, 2, 2), (3, 3, 3, 1), (2, 2, 2, 1, 1), (2, 2, 1, 1, 1, 1), (3, 1, 1, 1, 1, 1))
SEARCH_REFUTED = ((4, 1, 1, 1, 1, 1), (2, 2, 1, 1, 1, 1), (2, 2, 2, 1, 1), (3, 1, 1, 1, 1, 1), (3, 2, 2, 1, 1))
SMALL_YES_SET = [(1, 1, 1, 1, 1, 1, 1), (2, 1, 1, 1, 1, 1, 1), (1, 1, 1, 1, 1, 1, 1, 1)]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ''
    seconds: float = 0.0


@dataclass
class VerifyReport:
    level: str
    seed: int
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail,
                        "seconds": round(r.seconds, 3)} for r in self.results],
        }


# ─────────────────────────────────────────────────────────────────────────────
# INDIVIDUAL CHECKS
# ─────────────────────────────────────────────────────────────────────────────

def _witnesses() -> tuple[bool, str]:
    bad = []
    for w in WitnessId:
        t = load_witness(w)
        if min_row_product(t) < 1 or check_conditions(t).failures:
            bad.append(w.value)
    return not bad, f"failed: {bad}" if bad else f"{len(WitnessId)} constructions valid and complete"


def _oracle_table() -> tuple[bool, str]:
    wrong = [s for s, clause in ORACLE_CASES.items() if exists_complete_orientation(s).clause != clause]
    totals = {k: minimal_total(k) for k in (2, 3, 4, 5, 6, 7, 8)}
    expected = {2: None, **MINIMAL_TOTALS, 7: 7, 8: 8}
    if wrong or totals != expected:
        return False, f"clauses wrong for {wrong}; minimal totals {totals}"
    return True, f"minimal totals {totals}"


def _counting() -> tuple[bool, str]:
    missed = [s for s in COUNTING_REFUTED if not refute_by_counting(s).refuted]
    unsound = [s for s in yes_set(16) if refute_by_counting(s).refuted]
    return not (missed or unsound), f"missed {missed}, refuted accepted tuples {unsound}"


def _k444() -> tuple[bool, str]:
    outcome = refute_444()
    d = outcome.details
    ok = (outcome.status == EXHAUSTED and d["balanced_matrices"] == 90
          and d["candidates"] == 729000 and d["complete"] == 0)
    return ok, f"{d['balanced_matrices']} balanced matrices, {d['candidates']} candidates, {d['complete']} complete"


def _crosscheck(max_sum: int) -> Callable[[], tuple[bool, str]]:
    def run():
        report = oracle_crosscheck(max_sum)
        expected = {s for s in SMALL_YES_SET if sum(s) <= max_sum}
        ok = report.ok and set(report.found) == expected
        return ok, f"{len(report.checked)} tuples, yes-set {report.found}, disagreements {report.disagreements}"
    return run


def _search_refutation(sizes: tuple[int, ...]) -> Callable[[], tuple[bool, str]]:
    def run():
        outcome = exhaustive_search(sizes)
        return outcome.status == EXHAUSTED, f"{outcome.status} after {outcome.nodes_explored} nodes"
    return run


def _synthesis_sweep(max_sum: int) -> tuple[bool, str]:
    built = 0
    for sizes in yes_set(max_sum):
        t = synthesize_witness(sizes)
        if t is None or validate(t) or not is_complete_competition(t.d):
            return False, f"synthesis failed for K_{sizes}"
        built += 1
    return True, f"{built} witnesses synthesized"


def _random_constructions(seed: int, rounds: int = 200, max_sum: int = 20) -> tuple[bool, str]:
    rng = random.Random(seed)
    accepted = yes_set(max_sum, min_parts=3)
    for _ in range(rounds):
        target = rng.choice(accepted)
        t = synthesize_witness(target)
        step = rng.choice(('clone', 'lift', 'split', 'normalize'))
        if step == 'clone':
            t = add_clone_vertex(t, 0, t.part_of(0))
        elif step == 'lift':
            t = lift(t, (t.sizes[0] + 1, *t.sizes[1:], 1))
        elif step == 'split':
            part = next((i for i, s in enumerate(t.sizes) if s >= 2), None)
            if part is not None:
                t = split_part(t, part, (1, t.sizes[part] - 1))
        else:
            t = normalize_min_indegree(t)
        if not is_complete_competition(t.d):
            return False, f"{step} on K_{target} lost completeness"
    return True, f"{rounds} random constructions preserved completeness"


# ─────────────────────────────────────────────────────────────────────────────
# PUBLIC API
# ─────────────────────────────────────────────────────────────────────────────

def verify_paper(level: str = 'quick', seed: int = DEFAULT_SEED) -> VerifyReport:
    """Run the verification suite at `level` ('quick' or 'full')."""
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}; expected one of {', '.join(LEVELS)}")
    checks: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
        ("witnesses", _witnesses),
        ("oracle table", _oracle_table),
        ("counting refutations", _counting),
        ("crosscheck sum<=8", _crosscheck(8)),
        ("K_(4,4,4)", _k444),
    ]
    if level == 'full':
        checks += [(f"search K_{s}", _search_refutation(s)) for s in SEARCH_REFUTED]
        checks += [
            ("synthesis sweep sum<=14", lambda: _synthesis_sweep(14)),
            ("random constructions", lambda: _random_constructions(seed)),
        ]

    report = VerifyReport(level, seed)
    log.info("verification level=%s seed=%d: %d checks", level, seed, len(checks))
    for name, check in checks:
        start = time.perf_counter()
        passed, detail = check()
        result = CheckResult(name, passed, detail, time.perf_counter() - start)
        report.results.append(result)
        log.log(logging.INFO if passed else logging.ERROR, "%s: %s (%s, %.1fs)",
                name, 'ok' if passed else 'FAILED', detail, result.seconds)
    return report
