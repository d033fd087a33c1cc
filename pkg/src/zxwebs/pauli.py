"""Sparse Pauli assignments on diagram edges.

An ``EdgePauli`` maps every edge to one of I, X, Z, Y, stored as two
frozensets of edge ids (edges with the Z bit set, edges with the X bit
set; Y means both). The same structure backs Pauli webs and faults.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple

I, X, Z, Y = "I", "X", "Z", "Y"
PAULIS = (I, X, Z, Y)


@dataclass(frozen=True)
class EdgePauli:
    zbits: FrozenSet[int] = field(default_factory=frozenset)
    xbits: FrozenSet[int] = field(default_factory=frozenset)

    @staticmethod
    def from_coloring(coloring: Mapping[int, str]) -> "EdgePauli":
        zb, xb = set(), set()
        for e, p in coloring.items():
            if p in (Z, Y):
                zb.add(e)
            if p in (X, Y):
                xb.add(e)
            if p not in PAULIS:
                raise ValueError(f"unknown Pauli {p!r}")
        return EdgePauli(frozenset(zb), frozenset(xb))

    @staticmethod
    def single(edge: int, pauli: str) -> "EdgePauli":
        return EdgePauli.from_coloring({edge: pauli})

    def at(self, edge: int) -> str:
        z = edge in self.zbits
        x = edge in self.xbits
        if z and x:
            return Y
        if z:
            return Z
        if x:
            return X
        return I

    @property
    def support(self) -> FrozenSet[int]:
        return self.zbits | self.xbits

    @property
    def weight(self) -> int:
        return len(self.support)

    def is_identity(self) -> bool:
        return not self.zbits and not self.xbits

    def coloring(self) -> Dict[int, str]:
        return {e: self.at(e) for e in sorted(self.support)}

    def __mul__(self, other: "EdgePauli") -> "EdgePauli":
        return EdgePauli(self.zbits ^ other.zbits, self.xbits ^ other.xbits)

    def restricted(self, edges: Iterable[int]) -> "EdgePauli":
        es = frozenset(edges)
        return EdgePauli(self.zbits & es, self.xbits & es)

    def relabeled(self, mapping: Mapping[int, int]) -> "EdgePauli":
        return EdgePauli(
            frozenset(mapping[e] for e in self.zbits),
            frozenset(mapping[e] for e in self.xbits),
        )

    def sort_key(self) -> Tuple:
        return tuple(sorted((e, self.at(e)) for e in self.support))

    def __str__(self) -> str:
        if self.is_identity():
            return "(identity)"
        return " ".join(f"{e}:{self.at(e)}" for e in sorted(self.support))


def symplectic(a: EdgePauli, b: EdgePauli) -> int:
    """Commutation parity: 1 if a and b anticommute, 0 otherwise."""
    return (len(a.zbits & b.xbits) + len(a.xbits & b.zbits)) % 2


def to_bitvec(p: EdgePauli, edge_order: Mapping[int, int]) -> int:
    """Pack into an int: Z bit of edge k at 2k, X bit at 2k+1."""
    v = 0
    for e in p.zbits:
        v |= 1 << (2 * edge_order[e])
    for e in p.xbits:
        v |= 1 << (2 * edge_order[e] + 1)
    return v


def from_bitvec(v: int, edges_by_index: Mapping[int, int]) -> EdgePauli:
    zb, xb = set(), set()
    k = 0
    while v >> (2 * k):
        if (v >> (2 * k)) & 1:
            zb.add(edges_by_index[k])
        if (v >> (2 * k + 1)) & 1:
            xb.add(edges_by_index[k])
        k += 1
    return EdgePauli(frozenset(zb), frozenset(xb))
