import pytest

from config import Config
from core.digraph import is_complete_competition, validate
from core.errors import InvalidSizesError
from core.oracle import (
    MINIMAL_TOTALS,
    NEGATIVE_CLAUSES,
    POSITIVE_CLAUSES,
    base_for,
    exists_complete_orientation,
    iter_partitions,
    minimal_total,
    synthesize_witness,
    yes_set,
)

CLAUSES = {
    (1,): 'K1_SINGLE',
    (2,): 'K1_NO',
    (7, 7): 'K2_NONE',
    (4, 4, 4): 'K3_NO',
    (5, 4, 4): 'K3_MAIN',
    (9, 4, 3): 'K3_NO',
    (4, 3, 3, 1): 'K4_A',
    (4, 2, 2, 2): 'K4_B',
    (3, 3, 3, 2): 'K4_C',
    (4, 4, 4, 4): 'K4_C',
    (3, 3, 2, 2): 'K4_NO',
    (3, 3, 3, 1): 'K4_NO',
    (3, 3, 2, 1, 1): 'K5_A',
    (4, 2, 2, 1, 1): 'K5_B',
    (2, 2, 2, 2, 1): 'K5_C',
    (3, 2, 2, 1, 1): 'K5_NO',
    (5, 1, 1, 1, 1, 1): 'K6_A',
    (3, 2, 1, 1, 1, 1): 'K6_B',
    (2, 2, 2, 1, 1, 1): 'K6_C',
    (6, 3, 2, 2, 1, 1): 'K6_C',
    (4, 1, 1, 1, 1, 1): 'K6_NO',
    (2, 2, 1, 1, 1, 1): 'K6_NO',
    (1,) * 7: 'K7PLUS',
    (1,) * 12: 'K7PLUS',
}


@pytest.mark.parametrize("sizes,clause", list(CLAUSES.items()))
def test_clause_table(sizes, clause) -> None:
    verdict = exists_complete_orientation(sizes)
    assert verdict.clause == clause
    assert verdict.exists == (clause in POSITIVE_CLAUSES)


def test_clauses_are_partitioned() -> None:
    assert not set(POSITIVE_CLAUSES) & set(NEGATIVE_CLAUSES)
    seen = {exists_complete_orientation(s).clause for n in range(1, 16) for s in iter_partitions(n)}
    assert seen == set(POSITIVE_CLAUSES) | set(NEGATIVE_CLAUSES)


def test_verdict_rendering() -> None:
    verdict = exists_complete_orientation([5, 4, 4])
    assert str(verdict) == "yes clause=K3_MAIN"
    assert verdict.to_dict() == {"sizes": [5, 4, 4], "exists": True, "clause": "K3_MAIN"}
    assert str(exists_complete_orientation((4, 4, 4))) == "no clause=K3_NO"


@pytest.mark.parametrize("sizes", [(), (3, 4), (0, 1), (2, -1)])
def test_oracle_rejects_bad_sizes(sizes) -> None:
    with pytest.raises(InvalidSizesError):
        exists_complete_orientation(sizes)


def test_iter_partitions() -> None:
    assert list(iter_partitions(4)) == [(1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,)]
    assert list(iter_partitions(5, 2)) == [(3, 2), (4, 1)]
    assert list(iter_partitions(3, 4)) == []
    assert len(list(iter_partitions(10))) == 42


def test_minimal_totals() -> None:
    for k, n in MINIMAL_TOTALS.items():
        assert minimal_total(k) == n
    assert minimal_total(1) == 1
    assert minimal_total(7) == 7
    assert minimal_total(9) == 9


def test_minimal_total_for_two_parts(monkeypatch) -> None:
    monkeypatch.setattr(Config, 'MINIMAL_TOTAL_SCAN_LIMIT', 12)
    assert minimal_total(2) is None
    with pytest.raises(ValueError):
        minimal_total(0)


def test_every_positive_clause_has_a_base() -> None:
    for clause in POSITIVE_CLAUSES:
        if clause == 'K1_SINGLE':
            continue
        base = base_for(clause)
        assert exists_complete_orientation(base.sizes).clause == clause
        assert is_complete_competition(base.d)


def test_k5b_base_is_split_from_a6() -> None:
    assert base_for('K5_B').sizes == (4, 2, 2, 1, 1)


def test_synthesize_single_vertex() -> None:
    t = synthesize_witness((1,))
    assert t.n == 1 and t.d.arc_count == 0


@pytest.mark.parametrize("sizes", [(4, 4, 4), (3, 3, 2, 2), (2, 2, 1, 1, 1, 1), (9, 9), (3,)])
def test_synthesize_returns_none_for_negative_tuples(sizes) -> None:
    assert synthesize_witness(sizes) is None


def test_synthesize_every_accepted_tuple_up_to_14() -> None:
    for sizes in yes_set(14, min_parts=1):
        t = synthesize_witness(sizes)
        assert t.sizes == sizes
        assert validate(t) == []
        assert is_complete_competition(t.d)


def test_synthesize_large_tuples() -> None:
    for sizes in [(6, 3, 2, 2, 1, 1), (8, 5, 5), (5, 4, 3, 1), (4, 4, 2, 1, 1), (2,) * 8]:
        t = synthesize_witness(sizes)
        assert t.sizes == sizes
        assert is_complete_competition(t.d)


def test_yes_set_is_closed_under_growth() -> None:
    accepted = set(yes_set(15, min_parts=3))
    for sizes in accepted:
        grown = [tuple(s + (j == i) for j, s in enumerate(sizes))
                 for i in range(len(sizes)) if i == 0 or sizes[i - 1] > sizes[i]]
        grown.append((*sizes, 1))
        for g in grown:
            assert exists_complete_orientation(g).exists, (sizes, g)


def test_yes_set_smallest_members() -> None:
    assert yes_set(8) == [(1,) * 7, (1,) * 8, (2, 1, 1, 1, 1, 1, 1)]


def test_synthesize_random_tuples_up_to_25(rng) -> None:
    accepted = yes_set(25, min_parts=3)
    for sizes in rng.sample(accepted, 200):
        t = synthesize_witness(sizes)
        assert t.sizes == sizes
        assert is_complete_competition(t.d)


def test_minimal_total_for_many_parts() -> None:
    assert minimal_total(2000) == 2000
    assert next(iter_partitions(2000, 2000)) == (1,) * 2000


def test_iter_partitions_with_a_part_cap() -> None:
    assert list(iter_partitions(6, 3, max_part=3)) == [(2, 2, 2), (3, 2, 1)]
    assert list(iter_partitions(0)) == [()]
    assert list(iter_partitions(5, max_part=2)) == [(1, 1, 1, 1, 1), (2, 1, 1, 1), (2, 2, 1)]


def test_synthesize_checks_vertex_cap_before_building(monkeypatch) -> None:
    with pytest.raises(InvalidSizesError):
        synthesize_witness((1000, 1000, 1000))
    monkeypatch.setattr(Config, 'COMPGRAPH_MAX_N', 12)
    with pytest.raises(InvalidSizesError):
        synthesize_witness((5, 4, 4))
    assert synthesize_witness((4, 4, 4)) is None
