"""Pauli webs: validity, GF(2) bases, restrictions, matchability, couplings.

A web assigns a Pauli to every edge. At each phase-0/pi spider it must
cover an even number of legs in the spider's own color and all or none
of the legs in the opposite color (Y counts toward both). The set of
valid webs is the kernel of a GF(2) constraint system, solved here by
bitset elimination.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import gf2
from .errors import (BoundaryMismatch, InvalidWeb, NotASubdiagram, ParseError,
                     UnsupportedPhase)
from .graph import Diagram, OpenSubdiagram, XCOLOR, ZCOLOR
from .pauli import EdgePauli, from_bitvec, to_bitvec

PauliWeb = EdgePauli


# ---------------------------------------------------------------------------
# multisets

@dataclass(frozen=True)
class WebMultiset:
    """Multiset of Pauli webs; equal webs are merged with multiplicity."""
    counts: Mapping[PauliWeb, int] = field(default_factory=dict)

    @staticmethod
    def of(items: Iterable[PauliWeb | Tuple[PauliWeb, int]]) -> "WebMultiset":
        counts: Dict[PauliWeb, int] = {}
        for item in items:
            if isinstance(item, tuple):
                web, mult = item
            else:
                web, mult = item, 1
            if mult < 1:
                raise InvalidWeb("multiplicity must be >= 1")
            counts[web] = counts.get(web, 0) + mult
        return WebMultiset(counts)

    def items(self) -> List[Tuple[PauliWeb, int]]:
        return sorted(self.counts.items(), key=lambda kv: kv[0].sort_key())

    def expanded(self) -> List[Tuple[PauliWeb, int]]:
        """(web, copy index) pairs; copy indices start at 1."""
        out = []
        for web, mult in self.items():
            out.extend((web, i) for i in range(1, mult + 1))
        return out

    def webs(self) -> List[PauliWeb]:
        return [w for w, _ in self.items()]

    @property
    def size(self) -> int:
        return sum(self.counts.values())

    def __contains__(self, web: PauliWeb) -> bool:
        return web in self.counts

    def multiplicity(self, web: PauliWeb) -> int:
        return self.counts.get(web, 0)

    def union(self, other: "WebMultiset") -> "WebMultiset":
        return WebMultiset.of(list(self.counts.items()) + list(other.counts.items()))

    def without(self, web: PauliWeb, mult: int = 1) -> "WebMultiset":
        have = self.counts.get(web, 0)
        if have < mult:
            raise InvalidWeb("removing more copies than present")
        counts = dict(self.counts)
        if have == mult:
            del counts[web]
        else:
            counts[web] = have - mult
        return WebMultiset(counts)

    def is_submultiset_of(self, other: "WebMultiset") -> bool:
        return all(other.multiplicity(w) >= m for w, m in self.counts.items())

    def __eq__(self, other) -> bool:
        return isinstance(other, WebMultiset) and dict(self.counts) == dict(other.counts)

    def __hash__(self):
        return hash(frozenset(self.counts.items()))

    def __repr__(self) -> str:
        return f"WebMultiset({self.size} items, {len(self.counts)} distinct)"


EMPTY_MULTISET = WebMultiset({})


# ---------------------------------------------------------------------------
# validity and bases

def _check_phases(diagram: Diagram) -> None:
    for sid, s in diagram.spiders.items():
        if s.phase not in (0, 2):
            raise UnsupportedPhase(
                f"spider {sid} has phase {s.phase}*pi/2; webs need phases in {{0, pi}}")


def web_valid(diagram: Diagram, web: PauliWeb) -> bool:
    """Per-spider parity and all-or-none constraints; self-loops count twice."""
    _check_phases(diagram)
    if not web.support <= set(diagram.edges):
        return False
    for sid, s in diagram.spiders.items():
        legs = diagram.spider_legs(sid)
        own = web.zbits if s.color == ZCOLOR else web.xbits
        opp = web.xbits if s.color == ZCOLOR else web.zbits
        if sum(1 for e in legs if e in own) % 2:
            return False
        opp_legs = sum(1 for e in legs if e in opp)
        if opp_legs not in (0, len(legs)):
            return False
    return True


def _edge_order(diagram: Diagram) -> Dict[int, int]:
    return {e: i for i, e in enumerate(sorted(diagram.edges))}


def _constraint_rows(diagram: Diagram, order: Dict[int, int]) -> List[int]:
    """GF(2) constraints over 2|E| variables: Z bit of edge k at 2k, X at 2k+1."""
    rows = []
    for sid in sorted(diagram.spiders):
        s = diagram.spiders[sid]
        legs = diagram.spider_legs(sid)
        own_off = 0 if s.color == ZCOLOR else 1
        opp_off = 1 - own_off
        parity = 0
        for e in set(legs):
            if legs.count(e) % 2:
                parity |= 1 << (2 * order[e] + own_off)
        rows.append(parity)
        uniq = sorted(set(legs))
        for e in uniq[1:]:
            rows.append((1 << (2 * order[uniq[0]] + opp_off)) |
                        (1 << (2 * order[e] + opp_off)))
    return rows


def web_basis(diagram: Diagram) -> List[PauliWeb]:
    """GF(2)-independent set spanning all valid webs."""
    _check_phases(diagram)
    order = _edge_order(diagram)
    by_index = {i: e for e, i in order.items()}
    rows = _constraint_rows(diagram, order)
    kernel = gf2.kernel_basis(rows, 2 * len(order))
    return [from_bitvec(v, by_index) for v in kernel]


def detecting_basis(diagram: Diagram) -> List[PauliWeb]:
    """Basis of webs coloring every boundary edge trivially."""
    _check_phases(diagram)
    order = _edge_order(diagram)
    by_index = {i: e for e, i in order.items()}
    rows = _constraint_rows(diagram, order)
    for eid in sorted(diagram.edges):
        if diagram.is_boundary_edge(eid):
            rows.append(1 << (2 * order[eid]))
            rows.append(1 << (2 * order[eid] + 1))
    kernel = gf2.kernel_basis(rows, 2 * len(order))
    return [from_bitvec(v, by_index) for v in kernel]


# ---------------------------------------------------------------------------
# boundary actions and classification

def boundary_action(diagram: Diagram, web: PauliWeb) -> Tuple[Tuple[str, str], ...]:
    """Action on the boundary as sorted (port, Pauli) pairs, identity dropped.

    Keyed by port rather than edge so actions compare across diagrams with
    the same boundary list.
    """
    out = []
    for port in diagram.ports:
        p = web.at(diagram.port_edge(port))
        if p != "I":
            out.append((port, p))
    return tuple(sorted(out))


def positional_action(diagram: Diagram, web: PauliWeb) -> Tuple[Tuple[int, str], ...]:
    """Boundary action keyed by port position (for cross-diagram couplings)."""
    out = []
    for k, port in enumerate(diagram.ports):
        p = web.at(diagram.port_edge(port))
        if p != "I":
            out.append((k, p))
    return tuple(out)


def is_detecting(diagram: Diagram, web: PauliWeb) -> bool:
    return not boundary_action(diagram, web)


def classify(diagram: Diagram, mset: WebMultiset) -> Tuple[WebMultiset, WebMultiset]:
    """Split into (stabilising, detecting) by boundary action."""
    stab, det = [], []
    for web, mult in mset.items():
        if not web_valid(diagram, web):
            raise InvalidWeb(f"invalid web in multiset: {web}")
        (det if is_detecting(diagram, web) else stab).append((web, mult))
    return WebMultiset.of(stab), WebMultiset.of(det)


def restrict(mset: WebMultiset, sub: OpenSubdiagram) -> WebMultiset:
    """Local restriction: each web's action on the subdiagram's edges.

    Trivial restrictions are dropped; equal ones accumulate multiplicity.
    """
    edges = set(sub.edge_ids)
    for e in edges:
        if e not in sub.carrier.edges:
            raise NotASubdiagram(f"edge {e} not in carrier")
    items = []
    for web, mult in mset.items():
        r = web.restricted(edges)
        if not r.is_identity():
            items.append((r, mult))
    return WebMultiset.of(items)


def is_local_detector_basis(diagram: Diagram, mset: WebMultiset) -> bool:
    """Detecting part (multiplicity flattened) is a basis of the detecting space."""
    _, det = classify(diagram, mset)
    det_webs = det.webs()
    space = detecting_basis(diagram)
    order = _edge_order(diagram)
    vecs = [to_bitvec(w, order) for w in det_webs]
    ncols = 2 * len(order)
    if gf2.rank(vecs, ncols) != len(vecs):
        return False
    return len(vecs) == len(space)  # each valid detecting web lies in the space


# ---------------------------------------------------------------------------
# matchability

@dataclass(frozen=True)
class MatchabilityReport:
    matchable: bool
    css_applicable: bool
    css_matchable: Optional[bool]  # None when not applicable
    coverage: Mapping[int, Tuple[int, int, int]]  # edge -> (total, Z, X) over detecting items
    offending_edges: Tuple[int, ...]

    def __bool__(self) -> bool:
        return self.matchable


def matchability(diagram: Diagram, mset: WebMultiset) -> MatchabilityReport:
    """Coverage counts per edge over detecting items (multiplicity counted).

    CSS matchability is evaluated only when every detecting item is
    single-colored; otherwise ``css_matchable`` is None.
    """
    _, det = classify(diagram, mset)
    coverage: Dict[int, List[int]] = {}
    single_colored = True
    for web, mult in det.items():
        if web.zbits and web.xbits:
            single_colored = False
        for e in web.support:
            c = coverage.setdefault(e, [0, 0, 0])
            c[0] += mult
            if e in web.zbits:
                c[1] += mult
            if e in web.xbits:
                c[2] += mult
    offending = tuple(sorted(e for e, c in coverage.items() if c[0] > 2))
    matchable = not offending
    css = None
    if single_colored:
        css = all(c[1] <= 2 and c[2] <= 2 for c in coverage.values())
    return MatchabilityReport(
        matchable=matchable,
        css_applicable=single_colored,
        css_matchable=css,
        coverage={e: tuple(c) for e, c in coverage.items()},
        offending_edges=offending,
    )


def coverage_counts(mset: WebMultiset) -> Dict[int, Tuple[int, int, int]]:
    """Per-edge (total, Z, X) coverage over ALL items of the multiset."""
    coverage: Dict[int, List[int]] = {}
    for web, mult in mset.items():
        for e in web.support:
            c = coverage.setdefault(e, [0, 0, 0])
            c[0] += mult
            if e in web.zbits:
                c[1] += mult
            if e in web.xbits:
                c[2] += mult
    return {e: tuple(c) for e, c in coverage.items()}


def coverage_css_ok(mset: WebMultiset) -> bool:
    """Every edge covered at most twice per color over all items."""
    return all(z <= 2 and x <= 2 for _, z, x in coverage_counts(mset).values())


# ---------------------------------------------------------------------------
# couplings

@dataclass(frozen=True)
class Coupling:
    """Bijection between the expanded stabilising items of two multisets."""
    pairs: Tuple[Tuple[Tuple[PauliWeb, int], Tuple[PauliWeb, int]], ...]

    def forward(self) -> Dict[Tuple[PauliWeb, int], Tuple[PauliWeb, int]]:
        return {a: b for a, b in self.pairs}

    def backward(self) -> Dict[Tuple[PauliWeb, int], Tuple[PauliWeb, int]]:
        return {b: a for a, b in self.pairs}

    def __len__(self) -> int:
        return len(self.pairs)

    def reversed(self) -> "Coupling":
        return Coupling(tuple((b, a) for a, b in self.pairs))


def find_coupling(dA: Diagram, msetA: WebMultiset,
                  dB: Diagram, msetB: WebMultiset) -> Optional[Coupling]:
    """Boundary-respecting coupling, or None when action counts differ.

    Deterministic: within each boundary-action class, expanded items are
    paired in canonical (sort key, copy index) order.
    """
    if len(dA.ports) != len(dB.ports):
        raise BoundaryMismatch(
            f"{len(dA.ports)} vs {len(dB.ports)} boundary ports")
    stabA, _ = classify(dA, msetA)
    stabB, _ = classify(dB, msetB)

    def by_action(d, mset):
        groups: Dict[Tuple, List[Tuple[PauliWeb, int]]] = {}
        for web, i in mset.expanded():
            groups.setdefault(positional_action(d, web), []).append((web, i))
        return groups

    ga, gb = by_action(dA, stabA), by_action(dB, stabB)
    if set(ga) != set(gb):
        return None
    pairs = []
    for action in sorted(ga):
        la, lb = ga[action], gb[action]
        if len(la) != len(lb):
            return None
        pairs.extend(zip(la, lb))
    return Coupling(tuple(pairs))


def coupling_is_boundary_respecting(dA: Diagram, dB: Diagram, c: Coupling) -> bool:
    for (wa, _), (wb, _) in c.pairs:
        if positional_action(dA, wa) != positional_action(dB, wb):
            return False
    return True


# ---------------------------------------------------------------------------
# web document format

def encode_webs(mset: WebMultiset) -> str:
    doc = {"webs": [
        {"coloring": {str(e): p for e, p in web.coloring().items()},
         "multiplicity": mult}
        for web, mult in mset.items()
    ]}
    return json.dumps(doc, indent=1)


def decode_webs(text: str) -> WebMultiset:
    try:
        doc = json.loads(text)
        items = []
        for entry in doc["webs"]:
            coloring = {int(e): str(p) for e, p in entry["coloring"].items()}
            items.append((EdgePauli.from_coloring(coloring),
                          int(entry.get("multiplicity", 1))))
        return WebMultiset.of(items)
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as e:
        raise ParseError(f"malformed web document: {e}")
