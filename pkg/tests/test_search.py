import pytest

from config import Config
from core.analysis import CYCLE3, OUTDEG3, SPREAD2, TWO_PART_2_2, count_bound
from core.digraph import is_complete_competition, validate
from core.errors import SearchLimitError
from core.oracle import iter_partitions
from core.search import (
    EXHAUSTED,
    INCONCLUSIVE,
    PAIR_FEASIBLE,
    SEARCH_RULES,
    SYMMETRY,
    WITNESS,
    SearchConfig,
    balanced_matrices,
    completeness_table,
    enumerate_all,
    exhaustive_search,
    oracle_crosscheck,
    orientation_from_balanced,
    refute_444,
)

SMALL_NO_TUPLES = [(1, 1, 1), (2, 1, 1), (1, 1, 1, 1), (2, 2, 1), (1, 1, 1, 1, 1)]


def test_enumerate_counts() -> None:
    assert enumerate_all((1, 1)) == 2
    assert enumerate_all((2, 1)) == 4
    assert enumerate_all((1, 1, 1, 1)) == 64


def test_enumerate_visits_every_orientation_once() -> None:
    seen = []
    assert enumerate_all((2, 1), seen.append) == 4
    assert len({t.d.out for t in seen}) == 4
    assert all(validate(t) == [] for t in seen)
    # first visit orients every pair forward
    assert seen[0].d.out == (0b100, 0b100, 0)


def test_no_small_orientation_is_complete() -> None:
    complete = []
    enumerate_all((2, 2, 2), lambda t: complete.append(t) if is_complete_competition(t.d) else None)
    assert complete == []


def test_enumerate_cap() -> None:
    with pytest.raises(SearchLimitError):
        enumerate_all((4, 4, 4))


def test_search_cap(monkeypatch) -> None:
    with pytest.raises(SearchLimitError):
        exhaustive_search((5, 5, 4))
    monkeypatch.setattr(Config, 'SEARCH_MAX_SUM', 5)
    with pytest.raises(SearchLimitError):
        exhaustive_search((2, 2, 2))


@pytest.mark.parametrize("prune", [{'COUNT_BOUND'}, {SYMMETRY}, {'spread2'}])
def test_search_config_rejects_unknown_rules(prune) -> None:
    with pytest.raises(ValueError):
        SearchConfig(prune=frozenset(prune))


def test_search_config_rejects_bad_limits() -> None:
    with pytest.raises(ValueError):
        SearchConfig(max_nodes=0)
    with pytest.raises(ValueError):
        SearchConfig(workers=0)


def test_unpruned_search_visits_the_whole_tree() -> None:
    outcome = exhaustive_search((1, 1, 1, 1), SearchConfig(prune=frozenset()))
    assert outcome.status == EXHAUSTED
    assert outcome.nodes_explored == 2 ** 7 - 2
    assert outcome.prunes_by_rule == {}


@pytest.mark.parametrize("sizes", SMALL_NO_TUPLES)
def test_every_prune_set_agrees_on_small_tuples(sizes) -> None:
    configs = [frozenset(), frozenset(SEARCH_RULES)] + [frozenset({rule}) for rule in SEARCH_RULES]
    for prune in configs:
        assert exhaustive_search(sizes, SearchConfig(prune=prune)).status == EXHAUSTED


def test_search_finds_seven_vertex_witness() -> None:
    outcome = exhaustive_search((1,) * 7)
    assert outcome.status == WITNESS
    assert outcome.found
    assert validate(outcome.witness) == []
    assert is_complete_competition(outcome.witness.d)
    assert outcome.to_dict()["witness"]["sizes"] == [1] * 7


def test_search_is_deterministic() -> None:
    first = exhaustive_search((1,) * 7)
    second = exhaustive_search((1,) * 7)
    assert first.witness == second.witness
    assert first.nodes_explored == second.nodes_explored
    assert first.prunes_by_rule == second.prunes_by_rule


def test_six_singletons_are_exhausted() -> None:
    outcome = exhaustive_search((1,) * 6)
    assert outcome.status == EXHAUSTED
    assert outcome.witness is None
    assert sum(outcome.prunes_by_rule.values()) > 0
    assert set(outcome.prunes_by_rule) <= set(SEARCH_RULES)


def test_node_budget_makes_search_inconclusive() -> None:
    outcome = exhaustive_search((1,) * 7, SearchConfig(max_nodes=5))
    assert outcome.status == INCONCLUSIVE
    assert outcome.witness is None
    assert outcome.to_dict()["status"] == INCONCLUSIVE


def test_symmetry_fix_keeps_witnesses_and_marks_outcome() -> None:
    outcome = exhaustive_search((1,) * 7, SearchConfig(symmetry_fix=True))
    assert outcome.status == WITNESS
    assert outcome.symmetry_reduced
    assert outcome.witness.d.out[0] == 0b1110
    assert exhaustive_search((1,) * 6, SearchConfig(symmetry_fix=True)).status == EXHAUSTED


def test_parallel_search_matches_sequential() -> None:
    sequential = exhaustive_search((1,) * 7)
    parallel = exhaustive_search((1,) * 7, SearchConfig(workers=2))
    assert parallel.status == WITNESS
    assert parallel.witness == sequential.witness
    assert exhaustive_search((1,) * 6, SearchConfig(workers=2)).status == EXHAUSTED


def test_balanced_matrices() -> None:
    b = balanced_matrices()
    assert b.shape == (90, 4, 4)
    assert (b.sum(axis=1) == 2).all()
    assert (b.sum(axis=2) == 2).all()
    assert len({m.tobytes() for m in b}) == 90


def test_completeness_table_agrees_with_direct_check(rng) -> None:
    b = balanced_matrices()
    table = completeness_table(b)
    assert table.shape == (90, 90, 90)
    for _ in range(40):
        i, j, l = (rng.randrange(90) for _ in range(3))
        t = orientation_from_balanced(b[i], b[j], b[l])
        assert bool(table[i, j, l]) == is_complete_competition(t.d)


def test_refute_444() -> None:
    outcome = refute_444()
    assert outcome.status == EXHAUSTED
    assert outcome.details == {"balanced_matrices": 90, "candidates": 729000, "complete": 0}
    assert outcome.to_dict()["details"]["candidates"] == 729000


def test_crosscheck_small() -> None:
    report = oracle_crosscheck(7)
    assert report.ok
    assert report.found == [(1,) * 7]
    assert report.to_dict()["checked"] == len(report.checked)


@pytest.mark.slow
def test_crosscheck_up_to_eight() -> None:
    report = oracle_crosscheck(8)
    assert report.ok
    assert report.found == [(1,) * 7, (1,) * 8, (2, 1, 1, 1, 1, 1, 1)]


@pytest.mark.slow
@pytest.mark.parametrize("sizes", [
    (2, 2, 1, 1, 1, 1),
    (3, 1, 1, 1, 1, 1),
    (2, 2, 2, 1, 1),
    (4, 1, 1, 1, 1, 1),
    (3, 2, 2, 1, 1),
])
def test_search_refutes_small_negative_tuples(sizes) -> None:
    assert exhaustive_search(sizes).status == EXHAUSTED


@pytest.mark.slow
@pytest.mark.parametrize("rule", [SPREAD2, TWO_PART_2_2, OUTDEG3, CYCLE3, PAIR_FEASIBLE])
def test_single_rule_search_finds_the_same_witness(rule) -> None:
    full = exhaustive_search((1,) * 7)
    single = exhaustive_search((1,) * 7, SearchConfig(prune=frozenset({rule})))
    assert single.witness == full.witness


@pytest.mark.slow
def test_pruning_never_changes_the_answer(monkeypatch) -> None:
    monkeypatch.setattr(Config, 'SEARCH_MAX_SUM', 17)
    checked = 0
    for n in range(2, 18):
        for sizes in iter_partitions(n):
            if len(sizes) < 2 or count_bound(sizes)[0] > 16:
                continue
            pruned = exhaustive_search(sizes)
            plain = exhaustive_search(sizes, SearchConfig(prune=frozenset()))
            assert pruned.status == plain.status, sizes
            checked += 1
    assert checked > 0


@pytest.mark.slow
@pytest.mark.parametrize("config", [
    SearchConfig(),
    SearchConfig(symmetry_fix=True),
    SearchConfig(workers=2),
])
def test_search_finds_five_part_witness(config) -> None:
    outcome = exhaustive_search((2, 2, 2, 2, 1), config)
    assert outcome.status == WITNESS
    assert outcome.witness.sizes == (2, 2, 2, 2, 1)
    assert validate(outcome.witness) == []
    assert is_complete_competition(outcome.witness.d)
    assert outcome.symmetry_reduced == config.symmetry_fix
