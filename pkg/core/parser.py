import json
import re
from pathlib import Path
from typing import Iterable

from core.digraph import Digraph, MultipartiteTournament, PartiteStructure, check_sizes, mask_of
from core.errors import FormatError, InvalidDigraphError, InvalidSizesError

# ─────────────────────────────────────────────────────────────────────────────
# DMT text format v1
#   line 1 : k n_1 ... n_k          (nonincreasing)
#   n lines: n characters of 0/1    (char j of row i is 1 iff arc i -> j)
#   '#' starts a comment line, trailing whitespace is ignored.
# ─────────────────────────────────────────────────────────────────────────────
_HEADER = re.compile(r'^\d+(?:\s+\d+)+$')
_ROW = re.compile(r'^[01]+$')
_SIZE_TOKEN = re.compile(r'\d+')


# ─────────────────────────────────────────────────────────────────────────────
# INTERNAL HELPERS
# ─────────────────────────────────────────────────────────────────────────────

def _content_lines(text: str) -> list[tuple[int, str]]:
    """(line number, text) for every non-comment, non-blank line."""
    lines = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip()
        if not line or line.lstrip().startswith('#'):
            continue
        lines.append((number, line.strip()))
    return lines


def _parts_or_format_error(sizes, line: int | None = None) -> PartiteStructure:
    try:
        return PartiteStructure(tuple(sizes))
    except InvalidSizesError as e:
        raise FormatError(str(e), line) from None


# ─────────────────────────────────────────────────────────────────────────────
# PUBLIC API
# ─────────────────────────────────────────────────────────────────────────────

def parse_sizes(tokens: Iterable[str] | str) -> tuple[int, ...]:
    """
    Parse a size tuple from CLI tokens (`['5', '4', '4']`) or a string
    (`"5,4,4"`, `"5 4 4"`). Raises InvalidSizesError on anything else.
    """
    if isinstance(tokens, str):
        tokens = [t for t in re.split(r'[,\s]+', tokens.strip()) if t]
    sizes = []
    for token in tokens:
        token = str(token).strip()
        if not _SIZE_TOKEN.fullmatch(token):
            raise InvalidSizesError(f"part size {token!r} is not a positive integer")
        sizes.append(int(token))
    return check_sizes(sizes)


def parse_dmt(text: str) -> MultipartiteTournament:
    """
    Parse DMT v1 text into a tournament. The digraph is built leniently, so
    the result may violate tournament invariants; run `validate` on it.
    """
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty DMT input")

    header_line, header = lines[0]
    if not _HEADER.match(header):
        raise FormatError(f"header must be 'k n_1 ... n_k', got {header!r}", header_line)
    numbers = [int(x) for x in header.split()]
    k, sizes = numbers[0], numbers[1:]
    if k != len(sizes):
        raise FormatError(f"header declares k={k} but lists {len(sizes)} sizes", header_line)
    parts = _parts_or_format_error(sizes, header_line)

    rows = lines[1:]
    if len(rows) != parts.n:
        raise FormatError(f"expected {parts.n} matrix rows, found {len(rows)}",
                          rows[-1][0] if rows else header_line)
    out = []
    for number, row in rows:
        if not _ROW.match(row) or len(row) != parts.n:
            raise FormatError(f"row must be {parts.n} characters of 0/1, got {row!r}", number)
        out.append(mask_of(j for j, ch in enumerate(row) if ch == '1'))
    return MultipartiteTournament(Digraph(parts.n, tuple(out)), parts)


def dump_dmt(t: MultipartiteTournament, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(' '.join(map(str, (t.k, *t.sizes))))
    for v in range(t.n):
        lines.append(''.join('1' if t.d.out[v] >> j & 1 else '0' for j in range(t.n)))
    return '\n'.join(lines) + '\n'


def parse_json(text: str) -> MultipartiteTournament:
    """Parse `{"sizes": [...], "arcs": [[u, v], ...]}` (lenient, like parse_dmt)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e.msg}", e.lineno) from None
    if not isinstance(data, dict) or 'sizes' not in data or 'arcs' not in data:
        raise FormatError("JSON input must be an object with 'sizes' and 'arcs'")
    if not isinstance(data['sizes'], list) or not all(isinstance(s, int) for s in data['sizes']):
        raise FormatError("'sizes' must be a list of integers")
    parts = _parts_or_format_error(data['sizes'])

    arcs = data['arcs']
    if not isinstance(arcs, list):
        raise FormatError("'arcs' must be a list of [u, v] pairs")
    pairs = []
    for arc in arcs:
        if (not isinstance(arc, list) or len(arc) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in arc)):
            raise FormatError(f"arc {arc!r} is not a [u, v] pair of integers")
        pairs.append((arc[0], arc[1]))
    try:
        d = Digraph.from_arcs(parts.n, pairs, strict=False)
    except InvalidDigraphError as e:
        raise FormatError(str(e)) from None
    return MultipartiteTournament(d, parts)


def tournament_to_dict(t: MultipartiteTournament) -> dict:
    return {"sizes": list(t.sizes), "arcs": [[u, v] for u, v in t.d.arcs()]}


def dump_json(t: MultipartiteTournament) -> str:
    return json.dumps(tournament_to_dict(t))


def dump_dot(t: MultipartiteTournament, name: str = "D") -> str:
    """Graphviz DOT, one cluster per part. No layout hints beyond that."""
    lines = [f'digraph "{name}" {{', '  node [shape=circle];']
    for i in range(t.k):
        members = ' '.join(str(v) for v in t.parts.part_range(i))
        lines.append(f'  subgraph cluster_{i} {{ label="V{i + 1}"; {members}; }}')
    for u, v in t.d.arcs():
        lines.append(f'  {u} -> {v};')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def parse_tournament(text: str) -> MultipartiteTournament:
    """DMT or JSON, decided by whether the first non-blank character is '{'."""
    if text.lstrip().startswith('{'):
        return parse_json(text)
    return parse_dmt(text)


def read_tournament(path: str | Path) -> MultipartiteTournament:
    try:
        text = Path(path).read_text(encoding='utf-8')
    except UnicodeDecodeError as e:
        raise FormatError(f"{path} is not UTF-8 text (byte {e.start})") from None
    return parse_tournament(text)


def format_tournament(t: MultipartiteTournament, fmt: str = 'dmt', comment: str | None = None) -> str:
    if fmt == 'dmt':
        return dump_dmt(t, comment)
    if fmt == 'json':
        return dump_json(t) + '\n'
    if fmt == 'dot':
        return dump_dot(t)
    raise ValueError(f"unknown output format {fmt!r}; expected dmt, json or dot")
