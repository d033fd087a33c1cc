"""GF(2) linear algebra on int bitsets.

Vectors are Python ints read as little-endian bit vectors over a fixed
number of columns; a matrix is a list of such ints.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Tuple


def rref(rows: Iterable[int], ncols: int) -> Tuple[List[int], List[int]]:
    """Reduced row echelon form.

    Returns (pivot_cols, reduced_rows) with one reduced row per pivot,
    in pivot-column order. Zero rows are dropped.
    """
    work: List[int] = []
    pivots: List[int] = []
    for row in rows:
        for p, r in zip(pivots, work):
            if (row >> p) & 1:
                row ^= r
        if row == 0:
            continue
        col = _lowest_bit(row)
        # insert keeping pivot columns sorted
        idx = 0
        while idx < len(pivots) and pivots[idx] < col:
            idx += 1
        pivots.insert(idx, col)
        work.insert(idx, row)
        for i in range(len(work)):
            if i != idx and (work[i] >> col) & 1:
                work[i] ^= row
    return pivots, work


def rank(rows: Iterable[int], ncols: int) -> int:
    return len(rref(rows, ncols)[0])


def reduce_vector(vec: int, pivots: List[int], reduced: List[int]) -> int:
    """Reduce vec against an rref basis; result 0 iff vec is in the span."""
    for p, r in zip(pivots, reduced):
        if (vec >> p) & 1:
            vec ^= r
    return vec


def in_span(vec: int, rows: Iterable[int], ncols: int) -> bool:
    pivots, reduced = rref(rows, ncols)
    return reduce_vector(vec, pivots, reduced) == 0


def kernel_basis(rows: Iterable[int], ncols: int) -> List[int]:
    """Basis of the right kernel {x : Ax = 0} over GF(2).

    Deterministic: free columns are processed in increasing order.
    """
    pivots, reduced = rref(rows, ncols)
    pivot_set = set(pivots)
    basis: List[int] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for p, r in zip(pivots, reduced):
            if (r >> free) & 1:
                vec |= 1 << p
        basis.append(vec)
    return basis


def solve(rows: List[int], rhs: List[int], ncols: int) -> Optional[int]:
    """One solution x of the system {row·x = b}, or None if inconsistent.

    Each equation is (row, b); solved by eliminating on an augmented column.
    """
    aug = []
    for row, b in zip(rows, rhs):
        aug.append(row | (b << ncols))
    pivots, reduced = rref(aug, ncols + 1)
    x = 0
    for p, r in zip(pivots, reduced):
        if p == ncols:
            return None  # 0 = 1 row
        if (r >> ncols) & 1:
            x |= 1 << p
    return x


def _lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def popcount(x: int) -> int:
    return bin(x).count("1")
