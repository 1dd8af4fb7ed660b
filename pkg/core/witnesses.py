"""
The explicit constructions: the circulant tournament on seven vertices and
the nine adjacency matrices A1..A9, each an orientation of K_{sizes} whose
competition graph is complete.

Matrices are kept as literal 0/1 blocks (row i, column j is 1 iff i -> j)
and are validated every time they are loaded.
"""
import hashlib
import logging
from enum import Enum
from functools import lru_cache

import numpy as np

from core.digraph import (
    Digraph,
    MultipartiteTournament,
    PartiteStructure,
    first_non_competing_pair,
    mask_of,
    validate,
)
from core.errors import WitnessDataError

log = logging.getLogger(__name__)


class WitnessId(str, Enum):
    QR7 = 'QR7'
    A1 = 'A1'
    A2 = 'A2'
    A3 = 'A3'
    A4 = 'A4'
    A5 = 'A5'
    A6 = 'A6'
    A7 = 'A7'
    A8 = 'A8'
    A9 = 'A9'

    @property
    def sizes(self) -> tuple[int, ...]:
        return WITNESS_SIZES[self]

    @classmethod
    def parse(cls, name: str) -> 'WitnessId':
        try:
            return cls(name.strip().upper())
        except ValueError:
            raise ValueError(f"unknown witness {name!r}; expected one of {', '.join(w.value for w in cls)}") from None


WITNESS_SIZES = {
    WitnessId.QR7: (1, 1, 1, 1, 1, 1, 1),
    WitnessId.A1: (5, 1, 1, 1, 1, 1),
    WitnessId.A2: (3, 2, 1, 1, 1, 1),
    WitnessId.A3: (2, 2, 2, 1, 1, 1),
    WitnessId.A4: (5, 4, 4),
    WitnessId.A5: (4, 3, 3, 1),
    WitnessId.A6: (4, 2, 2, 2),
    WitnessId.A7: (3, 3, 3, 2),
    WitnessId.A8: (3, 3, 2, 1, 1),
    WitnessId.A9: (2, 2, 2, 2, 1),
}

# v_i -> v_{i+1}, v_{i+2}, v_{i+4} (mod 7): the quadratic residues mod 7
QR7_OFFSETS = (1, 2, 4)

_MATRICES = {
    WitnessId.A1: """
        0000001011
        0000001101
        0000010110
        0000010101
        0000011010
        1100001100
        0011000110
        1000100011
        0101010001
        0010111000
    """,
    WitnessId.A2: """
        000101010
        000011101
        000011011
        011000011
        100001001
        000100101
        101110000
        010011100
        100000110
    """,
    WitnessId.A3: """
        000000111
        001011010
        100010111
        110010001
        100000111
        101100100
        010100010
        000101001
        010001100
    """,
    WitnessId.A4: """
        0000001010110
        0000001101001
        0000010011001
        0000010100101
        0000010101010
        1100000001100
        0011100001100
        1010000000011
        0101100000011
        1001000110000
        0110100110000
        0111011000000
        1000111000000
    """,
    WitnessId.A5: """
        00001001001
        00000100101
        00001010110
        00000111010
        01010001100
        10100001100
        11000000011
        01100010001
        10010010001
        11001100000
        00111100010
    """,
    WitnessId.A6: """
        0000101010
        0000010110
        0000100101
        0000011001
        0101001100
        1010001100
        0110000011
        1001000011
        0011110000
        1100110000
    """,
    WitnessId.A7: """
        00010000111
        00001001011
        00010110101
        01000001110
        10100001001
        11000010010
        11011000000
        10100100010
        01001100001
        00101010100
        00010111000
    """,
    WitnessId.A8: """
        0001000111
        0000110101
        0001011010
        0100000011
        1010000110
        1000001001
        1101100000
        0011010001
        0100011100
        0010101010
    """,
    WitnessId.A9: """
        001010001
        000101001
        010000101
        100000011
        011100010
        101100100
        110110000
        111001000
        000011110
    """,
}


def matrix_block(witness: WitnessId) -> str:
    """The stored 0/1 block, rows joined by newlines, surrounding whitespace removed."""
    return '\n'.join(line.strip() for line in _MATRICES[witness].strip().splitlines())


def block_checksum(witness: WitnessId) -> str:
    return hashlib.sha256(matrix_block(witness).encode('ascii')).hexdigest()


def circulant(n: int, offsets) -> Digraph:
    return Digraph(n, tuple(mask_of((v + s) % n for s in offsets) for v in range(n)))


def _raw_witness(witness: WitnessId) -> MultipartiteTournament:
    parts = PartiteStructure(witness.sizes)
    if witness is WitnessId.QR7:
        return MultipartiteTournament(circulant(7, QR7_OFFSETS), parts)
    rows = matrix_block(witness).splitlines()
    if len(rows) != parts.n or any(len(row) != parts.n for row in rows):
        raise WitnessDataError(f"{witness.value}: matrix is not {parts.n}x{parts.n}")
    out = tuple(mask_of(j for j, ch in enumerate(row) if ch == '1') for row in rows)
    return MultipartiteTournament(Digraph(parts.n, out), parts)


@lru_cache(maxsize=None)
def load_witness(witness: WitnessId | str) -> MultipartiteTournament:
    """
    Load an embedded construction and check it: it must be a valid orientation
    of K_{sizes} and its competition graph must be complete. A failure here is
    a data defect, never a user error.
    """
    if not isinstance(witness, WitnessId):
        witness = WitnessId.parse(witness)
    t = _raw_witness(witness)
    violations = validate(t)
    if violations:
        raise WitnessDataError(f"{witness.value}: {violations[0]}")
    pair = first_non_competing_pair(t.d)
    if pair is not None:
        raise WitnessDataError(f"{witness.value}: vertices {pair[0]} and {pair[1]} share no prey")
    log.debug("loaded witness %s: K_%s, %d arcs", witness.value, witness.sizes, t.d.arc_count)
    return t


def row_products(t: MultipartiteTournament) -> np.ndarray:
    """A @ A.T for the adjacency matrix A; entry (i, j) counts common prey of i and j."""
    a = t.d.to_matrix().astype(np.int64)
    return a @ a.T


def min_row_product(t: MultipartiteTournament) -> int:
    """Smallest inner product over pairs of distinct rows (n >= 2)."""
    products = row_products(t)
    off_diagonal = products[~np.eye(t.n, dtype=bool)]
    return int(off_diagonal.min())


def all_witnesses() -> dict[WitnessId, MultipartiteTournament]:
    return {w: load_witness(w) for w in WitnessId}
