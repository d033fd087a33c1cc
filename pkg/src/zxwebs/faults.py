"""Edge-flip noise: syndromes, trivial faults, circuit distance, and the
bounded-weight fault-equivalence oracle.

A fault places a Pauli on each edge. Faults whose faulted tensor vanishes
violate a postselected check; they are *detected* events and form their
own effect class, exempt from the counterpart requirement in
``fault_equivalence`` (the decoder handles them).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import gf2
from .errors import BoundaryMismatch, TooLarge, UnsupportedPhase
from .graph import Diagram, XCOLOR, ZCOLOR
from .pauli import EdgePauli, symplectic, to_bitvec
from .tensor import (DenseTensor, equal_up_to_scalar, evaluate,
                     evaluate_with_fault, fingerprint)
from .webs import _edge_order

Fault = EdgePauli

PAULI_ORDER = ("X", "Y", "Z")


@dataclass(frozen=True)
class Syndrome:
    bits: Tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class DistanceResult:
    exact: Optional[int]  # None means "greater than max weight checked"
    max_weight_checked: int
    witness: Optional[Fault] = None
    witness_mode: str = ""  # triviality oracle that certified the witness

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def __str__(self) -> str:
        if self.is_exact:
            return f"ExactlyD({self.exact})"
        return f"GreaterThan({self.max_weight_checked})"


@dataclass(frozen=True)
class FaultEquivReport:
    holds: bool
    max_weight: int
    counterexample: Optional[Fault] = None
    side: str = ""  # "lhs" or "rhs" of the counterexample
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds


def syndrome(fault: Fault, basis: Sequence[EdgePauli]) -> Syndrome:
    """Anticommutation bit against each basis web."""
    return Syndrome(tuple(symplectic(fault, w) for w in basis))


def trivial_generators(diagram: Diagram) -> List[Fault]:
    """Pauli pushes through single spiders: a sound generating set of
    trivial faults.

    Z spider with legs L: pairs Z_e Z_f (e the first leg) and the all-legs
    X product; dual for X spiders. Self-loop legs drop out of the pair
    pattern and contribute nothing to the all-legs product parity.
    """
    gens: List[Fault] = []
    for sid in sorted(diagram.spiders):
        s = diagram.spiders[sid]
        if s.phase not in (0, 2):
            raise UnsupportedPhase(f"spider {sid} has phase {s.phase}*pi/2")
        legs = diagram.spider_legs(sid)
        uniq = sorted(set(legs))
        own = "Z" if s.color == ZCOLOR else "X"
        opp = "X" if s.color == ZCOLOR else "Z"
        simple = [e for e in uniq if legs.count(e) == 1]
        if len(simple) >= 2:
            first = simple[0]
            for e in simple[1:]:
                gens.append(EdgePauli.from_coloring({first: own, e: own}))
        allprod = {e: opp for e in simple}
        if allprod:
            gens.append(EdgePauli.from_coloring(allprod))
    # dedupe, preserve order
    seen = set()
    out = []
    for g in gens:
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


def is_trivial(diagram: Diagram, fault: Fault, mode: str = "auto",
               tol: float = 1e-9, max_arity: int = 14, max_edges: int = 96) -> bool:
    """Whether the fault leaves the diagram's map unchanged (up to scalar).

    ``group`` mode tests membership in the span of ``trivial_generators``
    (sound, possibly incomplete). ``tensor`` mode compares faulted and
    unfaulted tensors; it needs at least one boundary port to be
    meaningful, so ``auto`` falls back to group mode on closed diagrams
    and on diagrams beyond the oracle limits.
    """
    if fault.is_identity():
        return True
    if mode == "auto":
        mode = "tensor" if (0 < diagram.arity <= max_arity
                            and len(diagram.edges) <= max_edges) else "group"
    if mode == "tensor":
        if diagram.arity == 0 or diagram.arity > max_arity:
            raise TooLarge("tensor-mode triviality needs 0 < arity <= limit")
        faulted = evaluate_with_fault(diagram, fault, max_arity, max_edges)
        return equal_up_to_scalar(faulted, evaluate(diagram, max_arity, max_edges), tol)
    if mode == "group":
        order = _edge_order(diagram)
        gens = [to_bitvec(g, order) for g in trivial_generators(diagram)]
        return gf2.in_span(to_bitvec(fault, order), gens, 2 * len(order))
    raise ValueError(f"unknown mode {mode!r}")


def enumerate_faults(diagram: Diagram, weight: int) -> Iterable[Fault]:
    """All faults of the given weight, in deterministic order:
    edge-id lexicographic support, Pauli order X < Y < Z per edge."""
    edges = sorted(diagram.edges)
    for combo in itertools.combinations(edges, weight):
        for paulis in itertools.product(PAULI_ORDER, repeat=weight):
            yield EdgePauli.from_coloring(dict(zip(combo, paulis)))


def distance(diagram: Diagram, basis: Sequence[EdgePauli], max_w: int,
             triviality: str = "auto", tol: float = 1e-9,
             max_arity: int = 14, max_edges: int = 96) -> DistanceResult:
    """First undetectable, nontrivial fault by increasing weight.

    Detectability is judged against the supplied basis; triviality by
    ``is_trivial`` (tensor mode within oracle limits, group mode beyond).
    """
    order = _edge_order(diagram)
    basis_vecs = [to_bitvec(w, order) for w in basis]
    ncols = 2 * len(order)
    # symplectic partner: swap Z and X bits of each basis web
    partners = []
    for w in basis:
        partners.append(to_bitvec(EdgePauli(w.xbits, w.zbits), order))

    for w in range(1, max_w + 1):
        for fault in enumerate_faults(diagram, w):
            fv = to_bitvec(fault, order)
            if any(gf2.popcount(fv & p) % 2 for p in partners):
                continue  # detected
            mode = triviality
            if mode == "auto":
                mode = "tensor" if (0 < diagram.arity <= max_arity
                                    and len(diagram.edges) <= max_edges) else "group"
            if not is_trivial(diagram, fault, mode, tol, max_arity, max_edges):
                return DistanceResult(w, max_w, fault, mode)
    return DistanceResult(None, max_w)


def _effect_classes(diagram: Diagram, max_w: int, tol: float,
                    max_arity: int, max_edges: int) -> Dict[Tuple, int]:
    """Map tensor fingerprint -> minimum fault weight realizing it.

    Includes the empty fault at weight 0. The zero class is recorded under
    the reserved key ("zero",).
    """
    classes: Dict[Tuple, int] = {}
    for w in range(0, max_w + 1):
        if w == 0:
            faults: Iterable[Fault] = [EdgePauli()]
        else:
            faults = enumerate_faults(diagram, w)
        for f in faults:
            t = evaluate_with_fault(diagram, f, max_arity, max_edges)
            key = fingerprint(t, tol)
            if key not in classes:
                classes[key] = w
    return classes


def fault_equivalence(d1: Diagram, d2: Diagram, max_w: int, tol: float = 1e-9,
                      max_arity: int = 14, max_edges: int = 96,
                      jobs: int = 1) -> FaultEquivReport:
    """Bounded-weight fault equivalence via effect-class bucketing.

    Every fault of weight <= max_w on one side must admit a fault of no
    greater weight with the same effect (up to scalar) on the other side.
    Faults in the zero class are detected events and need no counterpart.
    """
    if list(d1.ports) and len(d1.ports) != len(d2.ports):
        raise BoundaryMismatch("boundary arities differ")
    if d1.arity != d2.arity:
        raise BoundaryMismatch("boundary arities differ")

    c1 = _effect_classes(d1, max_w, tol, max_arity, max_edges)
    c2 = _effect_classes(d2, max_w, tol, max_arity, max_edges)
    zero = ("zero",)

    def check(ca, cb, side_name, da):
        for key, wa in sorted(ca.items(), key=lambda kv: (kv[1], str(kv[0]))):
            if key == zero:
                continue
            wb = cb.get(key)
            if wb is None or wb > wa:
                witness = _find_class_witness(da, key, wa, tol, max_arity, max_edges)
                return FaultEquivReport(
                    False, max_w, witness, side_name,
                    f"effect class at weight {wa} on {side_name} has no "
                    f"counterpart of weight <= {wa}")
        return None

    bad = check(c1, c2, "lhs", d1)
    if bad:
        return bad
    bad = check(c2, c1, "rhs", d2)
    if bad:
        return bad
    return FaultEquivReport(True, max_w)


def _find_class_witness(diagram: Diagram, key: Tuple, weight: int, tol: float,
                        max_arity: int, max_edges: int) -> Optional[Fault]:
    if weight == 0:
        return EdgePauli()
    for f in enumerate_faults(diagram, weight):
        t = evaluate_with_fault(diagram, f, max_arity, max_edges)
        if fingerprint(t, tol) == key:
            return f
    return None
