"""Bit-packed linear algebra over GF(2).

Vectors are ``numpy.uint64`` word arrays; bit ``i`` lives in word
``i // 64`` at position ``i % 64``.  Inner products reduce to a
word-wise AND followed by a popcount.

:class:`EchelonBasis` keeps an incrementally row-reduced basis in
which every row is tagged with the set of inserted vectors it is
the sum of, so a reduction to zero doubles as a decomposition.
"""

import bisect
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

WORD_BITS: int = 64

_ONE = np.uint64(1)


def word_count(n_bits: int) -> int:
    """Number of 64-bit words needed for *n_bits* bits (at least 1)."""
    return max(1, (n_bits + WORD_BITS - 1) // WORD_BITS)


def pack(indices: Iterable[int], n_bits: int) -> np.ndarray:
    """Pack a set of bit positions into a word array.

    Raises:
        ValueError: If an index is outside ``[0, n_bits)``.
    """
    words = np.zeros(word_count(n_bits), dtype=np.uint64)
    idx = np.fromiter(indices, dtype=np.int64)
    if idx.size == 0:
        return words
    if idx.min() < 0 or idx.max() >= n_bits:
        raise ValueError(f"Bit index out of range for {n_bits} bits")
    shifts = (idx % WORD_BITS).astype(np.uint64)
    np.bitwise_xor.at(words, idx // WORD_BITS, np.left_shift(_ONE, shifts))
    return words


def unpack(words: np.ndarray) -> List[int]:
    """Sorted bit positions set in *words*."""
    as_bytes = words.astype("<u8").view(np.uint8)
    return np.flatnonzero(np.unpackbits(as_bytes, bitorder="little")).tolist()


def popcount(words: np.ndarray) -> int:
    return int(np.bitwise_count(words).sum())


def has_bit(words: np.ndarray, i: int) -> bool:
    return bool((words[i // WORD_BITS] >> np.uint64(i % WORD_BITS)) & _ONE)


def leading_bit(words: np.ndarray) -> int:
    """Lowest set bit position, or ``-1`` for the zero vector."""
    nz = np.flatnonzero(words)
    if nz.size == 0:
        return -1
    w = int(words[nz[0]])
    return int(nz[0]) * WORD_BITS + ((w & -w).bit_length() - 1)


def row_parities(matrix: np.ndarray, vector: np.ndarray) -> np.ndarray:
    """GF(2) matrix-vector product: parity of ``row & vector`` per row.

    Args:
        matrix: ``(m, words)`` array of packed rows.
        vector: ``(words,)`` packed vector.

    Returns:
        ``(m,)`` array of 0/1 values.
    """
    if matrix.shape[0] == 0:
        return np.zeros(0, dtype=np.uint8)
    counts = np.bitwise_count(matrix & vector).sum(axis=1)
    return (counts & 1).astype(np.uint8)


def labels_of(combo: int) -> List[int]:
    """Indices of the set bits of a Python-int label mask."""
    out = []
    i = 0
    while combo:
        if combo & 1:
            out.append(i)
        combo >>= 1
        i += 1
    return out


class EchelonBasis:
    """Incremental echelon form with provenance tracking.

    Each stored row has a distinct pivot equal to its lowest set bit,
    so reducing a vector by the rows in increasing pivot order never
    disturbs bits already processed.

    Example:
        >>> basis = EchelonBasis(4)
        >>> basis.insert(pack([0, 1], 4), label=0)
        True
        >>> basis.solve(pack([0, 1], 4))
        [0]
    """

    def __init__(self, n_bits: int) -> None:
        self.n_bits = n_bits
        self._rows: Dict[int, np.ndarray] = {}
        self._combos: Dict[int, int] = {}
        self._pivots: List[int] = []

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(self._pivots)

    def reduce(self, vector: np.ndarray) -> Tuple[np.ndarray, int]:
        """Reduce *vector* against the basis.

        Returns:
            ``(residual, combo)`` where *combo* is the label mask of the
            inserted vectors whose sum was subtracted.
        """
        residual = np.array(vector, dtype=np.uint64, copy=True)
        combo = 0
        for pivot in self._pivots:
            if has_bit(residual, pivot):
                residual ^= self._rows[pivot]
                combo ^= self._combos[pivot]
        return residual, combo

    def insert(self, vector: np.ndarray, label: int) -> bool:
        """Add *vector* under *label*.

        Returns:
            ``True`` if the vector was independent of the basis.
        """
        residual, combo = self.reduce(vector)
        pivot = leading_bit(residual)
        if pivot < 0:
            return False
        self._rows[pivot] = residual
        self._combos[pivot] = combo ^ (1 << label)
        bisect.insort(self._pivots, pivot)
        return True

    def solve(self, vector: np.ndarray) -> Optional[List[int]]:
        """Labels of inserted vectors summing to *vector*, or ``None``."""
        residual, combo = self.reduce(vector)
        if residual.any():
            return None
        return labels_of(combo)

    def row_space_key(self) -> Tuple[Tuple[int, ...], ...]:
        """Canonical fingerprint of the row space (fully reduced rows)."""
        reduced: Dict[int, np.ndarray] = {
            p: self._rows[p].copy() for p in self._pivots
        }
        for p in reversed(self._pivots):
            for q in self._pivots:
                if q < p and has_bit(reduced[q], p):
                    reduced[q] ^= reduced[p]
        return tuple(tuple(unpack(reduced[p])) for p in self._pivots)
