"""Open-graph representation of ZX diagrams.

A diagram is a multigraph of Z/X spiders with named boundary ports.
Edge endpoints are ``("s", spider_id)`` or ``("b", port_name)``; parallel
edges and self-loops are allowed. Diagrams are treated as immutable
values: rewrites build new ones.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import ArityMismatch, BadPhase, DanglingEdge, ParseError, PortReuse

ZCOLOR = "Z"
XCOLOR = "X"

Endpoint = Tuple[str, object]  # ("s", spider_id) or ("b", port_name)


def dual(color: str) -> str:
    return XCOLOR if color == ZCOLOR else ZCOLOR


@dataclass(frozen=True)
class Spider:
    color: str  # "Z" or "X"
    phase: int = 0  # units of pi/2, in {0, 1, 2, 3}

    def __post_init__(self):
        if self.color not in (ZCOLOR, XCOLOR):
            raise BadPhase(f"unknown color {self.color!r}")
        if self.phase not in (0, 1, 2, 3):
            raise BadPhase(f"phase {self.phase!r} not a multiple of pi/2 in [0, 2pi)")


@dataclass(frozen=True)
class Diagram:
    spiders: Mapping[int, Spider]
    edges: Mapping[int, Tuple[Endpoint, Endpoint]]
    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]

    @property
    def ports(self) -> Tuple[str, ...]:
        """All boundary ports in global order: inputs then outputs."""
        return self.inputs + self.outputs

    @property
    def arity(self) -> int:
        return len(self.inputs) + len(self.outputs)

    def degree(self, sid: int) -> int:
        d = 0
        for a, b in self.edges.values():
            if a == ("s", sid):
                d += 1
            if b == ("s", sid):
                d += 1
        return d

    def spider_edges(self, sid: int) -> List[int]:
        """Incident edge ids, sorted; self-loops listed once."""
        out = []
        for eid in sorted(self.edges):
            a, b = self.edges[eid]
            if a == ("s", sid) or b == ("s", sid):
                out.append(eid)
        return out

    def spider_legs(self, sid: int) -> List[int]:
        """Incident edge ids with self-loops listed twice (one per leg)."""
        out = []
        for eid in sorted(self.edges):
            a, b = self.edges[eid]
            if a == ("s", sid):
                out.append(eid)
            if b == ("s", sid):
                out.append(eid)
        return out

    def port_edge(self, port: str) -> int:
        for eid, (a, b) in self.edges.items():
            if a == ("b", port) or b == ("b", port):
                return eid
        raise DanglingEdge(f"port {port!r} has no edge")

    def boundary_edges(self) -> Dict[str, int]:
        """Map port -> its unique incident edge id."""
        return {p: self.port_edge(p) for p in self.ports}

    def is_boundary_edge(self, eid: int) -> bool:
        a, b = self.edges[eid]
        return a[0] == "b" or b[0] == "b"

    def other_end(self, eid: int, endpoint: Endpoint) -> Endpoint:
        a, b = self.edges[eid]
        return b if a == endpoint else a

    def neighbors(self, sid: int) -> List[Tuple[int, Endpoint]]:
        """(edge id, far endpoint) pairs for every leg of spider sid."""
        out = []
        for eid in sorted(self.edges):
            a, b = self.edges[eid]
            if a == ("s", sid):
                out.append((eid, b))
            if b == ("s", sid):
                out.append((eid, a))
        return out

    def fresh_spider_id(self) -> int:
        return max(self.spiders, default=-1) + 1

    def fresh_edge_id(self) -> int:
        return max(self.edges, default=-1) + 1

    def max_degree(self) -> int:
        return max((self.degree(s) for s in self.spiders), default=0)

    def __repr__(self) -> str:
        return (f"Diagram({len(self.spiders)} spiders, {len(self.edges)} edges, "
                f"{len(self.inputs)}->{len(self.outputs)})")


def parse_endpoint(text) -> Endpoint:
    if isinstance(text, tuple):
        return text
    if not isinstance(text, str) or ":" not in text:
        raise ParseError(f"bad endpoint {text!r}")
    kind, _, ref = text.partition(":")
    if kind == "s":
        try:
            return ("s", int(ref))
        except ValueError:
            raise ParseError(f"bad spider id in endpoint {text!r}")
    if kind == "b":
        return ("b", ref)
    raise ParseError(f"bad endpoint kind {text!r}")


def endpoint_str(ep: Endpoint) -> str:
    return f"{ep[0]}:{ep[1]}"


def build_diagram(
    spiders: Mapping[int, Spider | Tuple[str, int] | str],
    edges: Mapping[int, Tuple],
    inputs: Sequence[str] = (),
    outputs: Sequence[str] = (),
) -> Diagram:
    """Validate and construct a diagram.

    ``spiders`` values may be ``Spider``, ``(color, phase)``, or a bare
    color string (phase 0). Edge endpoints may be tuples or the string
    forms ``"s:<id>"`` / ``"b:<port>"``.
    """
    sp: Dict[int, Spider] = {}
    for sid, val in spiders.items():
        if isinstance(val, Spider):
            sp[sid] = val
        elif isinstance(val, str):
            sp[sid] = Spider(val, 0)
        else:
            color, phase = val
            sp[sid] = Spider(color, phase)
    ports = tuple(inputs) + tuple(outputs)
    if len(set(ports)) != len(ports):
        raise PortReuse("duplicate port name")
    es: Dict[int, Tuple[Endpoint, Endpoint]] = {}
    port_use: Dict[str, int] = {p: 0 for p in ports}
    for eid, (a, b) in edges.items():
        ea, eb = parse_endpoint(a), parse_endpoint(b)
        for ep in (ea, eb):
            if ep[0] == "s":
                if ep[1] not in sp:
                    raise DanglingEdge(f"edge {eid} references missing spider {ep[1]}")
            elif ep[0] == "b":
                if ep[1] not in port_use:
                    raise DanglingEdge(f"edge {eid} references undeclared port {ep[1]!r}")
                port_use[ep[1]] += 1
            else:
                raise DanglingEdge(f"edge {eid} has bad endpoint {ep!r}")
        es[eid] = (ea, eb)
    for p, n in port_use.items():
        if n != 1:
            raise PortReuse(f"port {p!r} touches {n} edges, expected 1")
    return Diagram(dict(sp), es, tuple(inputs), tuple(outputs))


def plug(d1: Diagram, d2: Diagram, port_map: Optional[Mapping[str, str]] = None) -> Diagram:
    """Compose d1 into d2 by joining d1 outputs to d2 inputs.

    ``port_map`` maps a subset of d1's outputs to distinct d2 inputs;
    by default all outputs are joined to all inputs in order.
    """
    if port_map is None:
        if len(d1.outputs) != len(d2.inputs):
            raise ArityMismatch(
                f"{len(d1.outputs)} outputs vs {len(d2.inputs)} inputs")
        port_map = dict(zip(d1.outputs, d2.inputs))
    else:
        if len(set(port_map.values())) != len(port_map):
            raise ArityMismatch("port_map is not injective")
        for a, b in port_map.items():
            if a not in d1.outputs or b not in d2.inputs:
                raise ArityMismatch(f"bad port pair {a!r} -> {b!r}")

    s_off = max(d1.spiders, default=-1) + 1
    e_off = max(d1.edges, default=-1) + 1

    # rename colliding d2 ports deterministically
    taken = set(d1.ports)
    rename: Dict[str, str] = {}
    for p in d2.ports:
        q = p
        while q in taken:
            q = q + "'"
        rename[p] = q
        taken.add(q)

    plugged_out = set(port_map)
    plugged_in = set(port_map.values())

    spiders: Dict[int, Spider] = dict(d1.spiders)
    for sid, s in d2.spiders.items():
        spiders[sid + s_off] = s

    def shift2(ep: Endpoint) -> Endpoint:
        if ep[0] == "s":
            return ("s", ep[1] + s_off)
        return ("b", rename[ep[1]])

    # Endpoints of the union graph: real endpoints, or junction markers
    # ("j", q) where q is the d2 input port of a plugged pair.
    def classify(ep: Endpoint, side: int):
        if side == 1 and ep[0] == "b" and ep[1] in plugged_out:
            return ("j", port_map[ep[1]])
        if side == 2 and ep[0] == "b" and ep[1] in plugged_in:
            return ("j", ep[1])
        return ep if side == 1 else shift2(ep)

    items: Dict[int, Tuple] = {}
    for eid, (a, b) in d1.edges.items():
        items[eid] = (classify(a, 1), classify(b, 1))
    for eid, (a, b) in d2.edges.items():
        items[eid + e_off] = (classify(a, 2), classify(b, 2))

    # each junction joins exactly two edge stubs
    stubs: Dict[str, List[Tuple[int, int]]] = {}
    for eid, ends in items.items():
        for pos, ep in enumerate(ends):
            if ep[0] == "j":
                stubs.setdefault(ep[1], []).append((eid, pos))

    edges: Dict[int, Tuple[Endpoint, Endpoint]] = {}
    visited = set()

    def walk(eid: int, pos: int):
        """Follow junctions from endpoint (eid, pos); returns the terminal
        real endpoint, or None if the chain closes into a loop."""
        cur, cpos = eid, pos
        while True:
            ep = items[cur][cpos]
            if ep[0] != "j":
                return ep
            pair = [t for t in stubs[ep[1]] if t != (cur, cpos)]
            nxt, npos = pair[0]
            if nxt in visited:
                return None  # closed wire loop
            visited.add(nxt)
            chain.append(nxt)
            cur, cpos = nxt, 1 - npos

    for eid in sorted(items):
        if eid in visited:
            continue
        a, b = items[eid]
        if a[0] != "j" and b[0] != "j":
            visited.add(eid)
            edges[eid] = (a, b)
            continue
        visited.add(eid)
        chain = [eid]
        end_a = walk(eid, 0)
        end_b = walk(eid, 1) if end_a is not None else None
        if end_a is None or end_b is None:
            continue  # closed wire loop: a scalar, dropped (no scalar tracking)
        edges[min(chain)] = (end_a, end_b)

    inputs = tuple(d1.inputs) + tuple(rename[p] for p in d2.inputs if p not in plugged_in)
    outputs = tuple(p for p in d1.outputs if p not in plugged_out) + \
        tuple(rename[p] for p in d2.outputs)
    return Diagram(spiders, edges, inputs, outputs)


def iso_equal(d1: Diagram, d2: Diagram) -> bool:
    """Color/phase-preserving isomorphism with boundary port order fixed."""
    return find_isomorphism(d1, d2) is not None


def find_isomorphism(d1: Diagram, d2: Diagram) -> Optional[Dict[int, int]]:
    """One spider mapping d1 -> d2 respecting structure, or None."""
    for m in iter_isomorphisms(d1, d2):
        return m
    return None


def iter_isomorphisms(d1: Diagram, d2: Diagram):
    """All spider bijections d1 -> d2 preserving colors, phases, and
    edge multiplicities, with the k-th port of d1 matched to the k-th
    port of d2."""
    if len(d1.inputs) != len(d2.inputs) or len(d1.outputs) != len(d2.outputs):
        return
    if len(d1.spiders) != len(d2.spiders) or len(d1.edges) != len(d2.edges):
        return

    port_pairs = list(zip(d1.ports, d2.ports))
    port_map = {p1: p2 for p1, p2 in port_pairs}

    # adjacency multisets keyed by canonical endpoint
    def adj(d: Diagram):
        table: Dict[int, Dict] = {}
        for sid in d.spiders:
            counts: Dict = {}
            for eid, far in d.neighbors(sid):
                key = far if far[0] == "s" else ("b", far[1])
                counts[key] = counts.get(key, 0) + 1
            table[sid] = counts
        return table

    adj1, adj2 = adj(d1), adj(d2)

    def sig(d: Diagram, a, sid: int):
        s = d.spiders[sid]
        ports = tuple(sorted(
            (d.ports.index(k[1]), n) for k, n in a[sid].items() if k[0] == "b"))
        selfloops = a[sid].get(("s", sid), 0)
        return (s.color, s.phase, d.degree(sid), ports, selfloops)

    sig2 = {}
    for sid in d2.spiders:
        sig2.setdefault(sig(d2, adj2, sid), []).append(sid)

    order = sorted(d1.spiders, key=lambda s: (-d1.degree(s), s))
    mapping: Dict[int, int] = {}
    used = set()

    # translate a d1 signature's port indices into the same index space
    def candidates(sid: int):
        s1 = sig(d1, adj1, sid)
        return [t for t in sig2.get(s1, []) if t not in used]

    def consistent(sid: int, tid: int) -> bool:
        for key, n in adj1[sid].items():
            if key[0] == "b":
                tkey = ("b", port_map[key[1]])
                if adj2[tid].get(tkey, 0) != n:
                    return False
            elif key[1] in mapping:
                if adj2[tid].get(("s", mapping[key[1]]), 0) != n:
                    return False
            elif key[1] == sid:
                if adj2[tid].get(("s", tid), 0) != n:
                    return False
        return True

    def backtrack(i: int):
        if i == len(order):
            yield dict(mapping)
            return
        sid = order[i]
        for tid in candidates(sid):
            if not consistent(sid, tid):
                continue
            mapping[sid] = tid
            used.add(tid)
            # forward check: mapped neighbors of sid must see tid correctly
            ok = True
            for key, n in adj1[sid].items():
                if key[0] == "s" and key[1] in mapping and key[1] != sid:
                    if adj2[mapping[key[1]]].get(("s", tid), 0) != n:
                        ok = False
                        break
            if ok:
                yield from backtrack(i + 1)
            used.discard(tid)
            del mapping[sid]

    yield from backtrack(0)


def edge_correspondence(d1: Diagram, d2: Diagram, spider_map: Dict[int, int]) -> Optional[Dict[int, int]]:
    """Extend a spider isomorphism to an edge bijection d1 -> d2.

    Parallel edges between the same endpoints are paired in id order.
    Returns None if the mapping is not consistent.
    """
    port_map = dict(zip(d1.ports, d2.ports))

    def canon(d, ep, m, pm):
        if ep[0] == "s":
            return ("s", m[ep[1]]) if m else ("s", ep[1])
        return ("b", pm[ep[1]]) if pm else ("b", ep[1])

    groups2: Dict[Tuple, List[int]] = {}
    for eid in sorted(d2.edges):
        a, b = d2.edges[eid]
        key = tuple(sorted([a, b], key=str))
        groups2.setdefault(key, []).append(eid)

    out: Dict[int, int] = {}
    used: Dict[Tuple, int] = {}
    for eid in sorted(d1.edges):
        a, b = d1.edges[eid]
        ta = canon(d1, a, spider_map, port_map)
        tb = canon(d1, b, spider_map, port_map)
        key = tuple(sorted([ta, tb], key=str))
        pool = groups2.get(key, [])
        idx = used.get(key, 0)
        if idx >= len(pool):
            return None
        out[eid] = pool[idx]
        used[key] = idx + 1
    return out


# ---------------------------------------------------------------------------
# interchange format

def encode(d: Diagram) -> str:
    doc = {
        "spiders": [
            {"id": sid, "color": s.color, "phase": s.phase}
            for sid, s in sorted(d.spiders.items())
        ],
        "edges": [
            {"id": eid, "src": endpoint_str(a), "dst": endpoint_str(b)}
            for eid, (a, b) in sorted(d.edges.items())
        ],
        "inputs": list(d.inputs),
        "outputs": list(d.outputs),
    }
    return json.dumps(doc, indent=1)


def decode(text: str) -> Diagram:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(str(e))
    if not isinstance(doc, dict):
        raise ParseError("top level is not an object")
    try:
        spiders = {
            int(s["id"]): Spider(s["color"], int(s["phase"]))
            for s in doc.get("spiders", [])
        }
        edges = {
            int(e["id"]): (e["src"], e["dst"])
            for e in doc.get("edges", [])
        }
        inputs = [str(p) for p in doc.get("inputs", [])]
        outputs = [str(p) for p in doc.get("outputs", [])]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed diagram document: {e}")
    try:
        return build_diagram(spiders, edges, inputs, outputs)
    except BadPhase:
        raise
    except (DanglingEdge, PortReuse) as e:
        raise ParseError(str(e))


def roundtrip(d: Diagram) -> Diagram:
    return decode(encode(d))


# ---------------------------------------------------------------------------
# open subdiagrams

class OpenSubdiagram:
    """A spider subset of a carrier diagram with its cut edges as boundary.

    ``cut_order`` fixes the boundary order of the induced open diagram;
    it defaults to cut-edge id order.
    """

    def __init__(self, carrier: Diagram, spider_ids: Iterable[int],
                 cut_order: Optional[Sequence[int]] = None):
        self.carrier = carrier
        self.spider_ids = frozenset(spider_ids)
        for sid in self.spider_ids:
            if sid not in carrier.spiders:
                raise DanglingEdge(f"no spider {sid} in carrier")
        cuts = self._find_cut_edges()
        if cut_order is None:
            order = tuple(sorted(cuts))
        else:
            order = tuple(cut_order)
            if sorted(order) != sorted(cuts):
                raise DanglingEdge("cut_order does not list the cut edges")
        self.cut_order = order

    def _inside(self, ep: Endpoint) -> bool:
        return ep[0] == "s" and ep[1] in self.spider_ids

    def _find_cut_edges(self) -> List[int]:
        cuts = []
        for eid, (a, b) in self.carrier.edges.items():
            ins = self._inside(a) + self._inside(b)
            if ins == 1:
                cuts.append(eid)
        return cuts

    @property
    def internal_edges(self) -> List[int]:
        out = []
        for eid, (a, b) in self.carrier.edges.items():
            if self._inside(a) and self._inside(b):
                out.append(eid)
        return sorted(out)

    @property
    def edge_ids(self) -> List[int]:
        """All edges of the open subdiagram: internal then cut."""
        return self.internal_edges + list(self.cut_order)

    def port_name(self, eid: int) -> str:
        return f"c{eid}"

    def induced(self) -> Tuple[Diagram, Dict[int, int]]:
        """The induced open diagram and a map local edge id -> carrier edge id.

        Local ids are renumbered densely; cut edges become boundary ports
        listed as inputs in ``cut_order``. Spider ids are preserved.
        """
        spiders = {sid: self.carrier.spiders[sid] for sid in self.spider_ids}
        local_edges: Dict[int, Tuple[Endpoint, Endpoint]] = {}
        emap: Dict[int, int] = {}
        nid = 0
        for eid in self.internal_edges:
            local_edges[nid] = self.carrier.edges[eid]
            emap[nid] = eid
            nid += 1
        inputs = []
        for eid in self.cut_order:
            a, b = self.carrier.edges[eid]
            inner = a if self._inside(a) else b
            pname = self.port_name(eid)
            local_edges[nid] = (inner, ("b", pname))
            emap[nid] = eid
            inputs.append(pname)
            nid += 1
        d = build_diagram(spiders, local_edges, inputs=inputs, outputs=())
        return d, emap
