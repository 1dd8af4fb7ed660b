import json

import pytest

from core.digraph import validate
from core.errors import FormatError, InvalidSizesError
from core.parser import (
    dump_dmt,
    dump_dot,
    dump_json,
    format_tournament,
    parse_dmt,
    parse_json,
    parse_sizes,
    parse_tournament,
    read_tournament,
    tournament_to_dict,
)
from core.witnesses import WitnessId, load_witness

SINGLE_ARC_DMT = """\
# K_{1,1}, one arc
2 1 1
01
00
"""


def test_parse_sizes_accepts_tokens_and_strings() -> None:
    assert parse_sizes(['5', '4', '4']) == (5, 4, 4)
    assert parse_sizes("5,4,4") == (5, 4, 4)
    assert parse_sizes(" 3 2, 1 ") == (3, 2, 1)


@pytest.mark.parametrize("raw", ["", "5 x", "1,2", "0", "-1", "2.5"])
def test_parse_sizes_rejects(raw) -> None:
    with pytest.raises(InvalidSizesError):
        parse_sizes(raw)


def test_parse_dmt_skips_comments_and_blank_lines() -> None:
    t = parse_dmt(SINGLE_ARC_DMT + "\n# trailing\n")
    assert t.sizes == (1, 1)
    assert t.d.out == (0b10, 0)
    assert validate(t) == []


def test_dump_dmt_writes_comment_header() -> None:
    text = dump_dmt(parse_dmt(SINGLE_ARC_DMT), comment="K_{1,1}, one arc")
    assert text == SINGLE_ARC_DMT


def test_dmt_round_trip_on_a_witness() -> None:
    t = load_witness(WitnessId.A7)
    assert parse_dmt(dump_dmt(t, comment="A7")) == t


def test_parse_dmt_is_lenient() -> None:
    t = parse_dmt("2 1 1\n01\n10\n")
    assert [v.kind for v in validate(t)] == ['2-cycle']


@pytest.mark.parametrize("text,line", [
    ("k 1 1\n01\n00\n", 1),
    ("3 1 1\n01\n00\n", 1),
    ("2 1 2\n010\n000\n000\n", 1),
    ("2 1 1\n01\n", 2),
    ("2 1 1\n0a\n00\n", 2),
    ("# note\n2 1 1\n01\n000\n", 4),
])
def test_parse_dmt_errors_carry_line_numbers(text, line) -> None:
    with pytest.raises(FormatError) as info:
        parse_dmt(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}: ")


def test_parse_dmt_empty() -> None:
    with pytest.raises(FormatError) as info:
        parse_dmt("# nothing here\n\n")
    assert info.value.line is None


def test_parse_json() -> None:
    t = parse_json('{"sizes": [1, 1], "arcs": [[0, 1]]}')
    assert t.d.out == (0b10, 0)
    assert tournament_to_dict(t) == {"sizes": [1, 1], "arcs": [[0, 1]]}
    assert json.loads(dump_json(t)) == {"sizes": [1, 1], "arcs": [[0, 1]]}


@pytest.mark.parametrize("text", [
    '{"sizes": [1, 1]}',
    '[1, 2]',
    '{"sizes": "1 1", "arcs": []}',
    '{"sizes": [1, 2], "arcs": []}',
    '{"sizes": [1, 1], "arcs": [[0, 5]]}',
    '{"sizes": [1, 1], "arcs": [[0, true]]}',
    '{"sizes": [1, 1], "arcs": {}}',
])
def test_parse_json_rejects(text) -> None:
    with pytest.raises(FormatError):
        parse_json(text)


def test_parse_json_syntax_error_has_line() -> None:
    with pytest.raises(FormatError) as info:
        parse_json('{\n"sizes": [1, 1],\n"arcs": [[0, 1]\n}')
    assert info.value.line is not None


def test_parse_tournament_dispatches_on_first_character() -> None:
    assert parse_tournament('  {"sizes": [1, 1], "arcs": [[1, 0]]}').d.out == (0, 0b01)
    assert parse_tournament(SINGLE_ARC_DMT).d.out == (0b10, 0)


def test_read_tournament(tmp_path) -> None:
    path = tmp_path / "t.dmt"
    path.write_text(SINGLE_ARC_DMT, encoding='utf-8')
    assert read_tournament(path).sizes == (1, 1)
    assert read_tournament(str(path)).d.arc_count == 1


def test_dump_dot_clusters_parts() -> None:
    text = dump_dot(parse_dmt("2 2 1\n001\n001\n000\n"))
    assert text.startswith('digraph "D" {')
    assert '  subgraph cluster_0 { label="V1"; 0 1; }' in text
    assert '  subgraph cluster_1 { label="V2"; 2; }' in text
    assert '  0 -> 2;' in text and '  1 -> 2;' in text
    assert text.endswith('}\n')


def test_format_tournament() -> None:
    t = parse_dmt(SINGLE_ARC_DMT)
    assert format_tournament(t, 'json').endswith('\n')
    assert format_tournament(t, 'dot') == dump_dot(t)
    with pytest.raises(ValueError):
        format_tournament(t, 'xml')


def test_read_tournament_rejects_non_utf8(tmp_path) -> None:
    path = tmp_path / 'latin1.dmt'
    path.write_bytes(b"2 1 1\n0\xff\n00\n")
    with pytest.raises(FormatError):
        read_tournament(path)
