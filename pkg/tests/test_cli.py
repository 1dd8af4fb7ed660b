import io
import json

import pytest

from cli import EXIT_INCONCLUSIVE, EXIT_IO, EXIT_NO, EXIT_OK, EXIT_USAGE, main
from core.parser import dump_dmt, parse_dmt
from core.witnesses import WitnessId, load_witness


def test_oracle_yes(capsys) -> None:
    assert main(['oracle', '5', '4', '4']) == EXIT_OK
    assert capsys.readouterr().out == "yes clause=K3_MAIN\n"


def test_oracle_no_json(capsys) -> None:
    assert main(['oracle', '--json', '4,4,4']) == EXIT_NO
    assert json.loads(capsys.readouterr().out) == {"sizes": [4, 4, 4], "exists": False, "clause": "K3_NO"}


@pytest.mark.parametrize("argv", [['oracle', '3', '4'], ['oracle', 'five'], [], ['frobnicate']])
def test_usage_errors(argv) -> None:
    assert main(argv) == EXIT_USAGE


def test_witness_dmt(capsys) -> None:
    assert main(['witness', '4', '2', '2', '1', '1']) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("# witness for K_(4, 2, 2, 1, 1)\n5 4 2 2 1 1\n")
    assert parse_dmt(out).sizes == (4, 2, 2, 1, 1)


def test_witness_json(capsys) -> None:
    assert main(['witness', '--json', '5', '4', '4']) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["sizes"] == [5, 4, 4]


def test_witness_none(capsys) -> None:
    assert main(['witness', '4', '4', '4']) == EXIT_NO
    captured = capsys.readouterr()
    assert captured.out == ''
    assert 'K3_NO' in captured.err


def test_dump_witness(capsys) -> None:
    assert main(['dump-witness', 'qr7', '--format', 'dot']) == EXIT_OK
    assert capsys.readouterr().out.startswith('digraph "D" {')
    assert main(['dump-witness', 'A4']) == EXIT_OK
    assert parse_dmt(capsys.readouterr().out) == load_witness(WitnessId.A4)
    assert main(['dump-witness', 'A10']) == EXIT_USAGE


def test_check_complete_witness(tmp_path, capsys) -> None:
    path = tmp_path / 'a4.dmt'
    path.write_text(dump_dmt(load_witness(WitnessId.A4)), encoding='utf-8')
    assert main(['check', str(path)]) == EXIT_OK
    assert 'competition graph: complete' in capsys.readouterr().out


def test_check_incomplete_from_stdin(monkeypatch, capsys) -> None:
    monkeypatch.setattr('sys.stdin', io.StringIO("2 1 1\n01\n00\n"))
    assert main(['check', '--json', '-']) == EXIT_NO
    data = json.loads(capsys.readouterr().out)
    assert data["valid"] is True
    assert data["complete"] is False
    assert data["non_competing_pair"] == [0, 1]


def test_check_invalid_tournament(tmp_path, capsys) -> None:
    path = tmp_path / 'bad.dmt'
    path.write_text("2 1 1\n00\n00\n", encoding='utf-8')
    assert main(['check', str(path)]) == EXIT_NO
    out = capsys.readouterr().out
    assert out.startswith("invalid tournament:")
    assert "missing cross-part arc {0,1}" in out


def test_check_io_errors(tmp_path, capsys) -> None:
    path = tmp_path / 'garbage.dmt'
    path.write_text("hello\n", encoding='utf-8')
    assert main(['check', str(path)]) == EXIT_IO
    assert 'line 1' in capsys.readouterr().err
    assert main(['check', str(tmp_path / 'missing.dmt')]) == EXIT_IO


def test_search_statuses(capsys) -> None:
    assert main(['search', '1', '1', '1', '1', '1', '1', '1']) == EXIT_OK
    assert capsys.readouterr().out.startswith("witness: K_(1, 1, 1, 1, 1, 1, 1)")
    assert main(['search', '1', '1', '1']) == EXIT_NO
    assert main(['search', '--max-nodes', '5', '1', '1', '1', '1', '1', '1', '1']) == EXIT_INCONCLUSIVE


def test_search_json_and_prune(capsys) -> None:
    assert main(['search', '--json', '--prune', 'outdeg3,cycle3', '1', '1', '1', '1', '1', '1']) == EXIT_NO
    data = json.loads(capsys.readouterr().out)
    assert data["status"] == "exhausted"
    assert set(data["prunes_by_rule"]) <= {"OUTDEG3", "CYCLE3"}


def test_search_rejects_unknown_rule_and_cap() -> None:
    assert main(['search', '--prune', 'BOGUS', '1', '1', '1']) == EXIT_USAGE
    assert main(['search', '5', '5', '4']) == EXIT_USAGE


def test_refute_by_counting(capsys) -> None:
    assert main(['refute', '3', '3', '2', '2']) == EXIT_NO
    out = capsys.readouterr().out
    assert out.startswith("refuted by counting: K_(3, 3, 2, 2)")
    assert 'THREE_PART_SUM' in out


def test_refute_falls_back_to_search(capsys) -> None:
    assert main(['refute', '--json', '1', '1', '1']) == EXIT_NO
    assert json.loads(capsys.readouterr().out)["method"] == "search"
    assert main(['refute', '1', '1', '1', '1', '1', '1', '1']) == EXIT_OK


def test_refute_beyond_search_cap(capsys) -> None:
    assert main(['refute', '5', '5', '5']) == EXIT_INCONCLUSIVE
    assert capsys.readouterr().out.startswith("inconclusive")


def test_verify_paper_rejects_unknown_level() -> None:
    assert main(['verify-paper', '--level', 'exhaustive']) == EXIT_USAGE


@pytest.mark.slow
def test_verify_paper_quick(capsys) -> None:
    assert main(['verify-paper', '--json']) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["passed"] is True
    assert data["level"] == "quick"


def test_check_rejects_non_utf8_input(tmp_path, capsys) -> None:
    path = tmp_path / 'latin1.dmt'
    path.write_bytes(b"2 1 1\n0\xff\n00\n")
    assert main(['check', str(path)]) == EXIT_IO
    assert 'not UTF-8' in capsys.readouterr().err
