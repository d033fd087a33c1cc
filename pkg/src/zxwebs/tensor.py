"""Dense linear-map evaluation of small diagrams.

Ground truth for rewrite verification: contracts per-spider tensors over
internal edges, optionally with Pauli factors inserted on edges. Output
amplitudes are indexed by boundary bitstrings in port order (inputs then
outputs), little-endian in the port list: port k is bit k of the index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import ArityMismatch, TooLarge, UnknownEdge
from .graph import Diagram, XCOLOR, ZCOLOR
from .pauli import EdgePauli

DEFAULT_MAX_ARITY = 14
DEFAULT_MAX_EDGES = 96

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_PAULI_MAT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
}


@dataclass(frozen=True)
class DenseTensor:
    boundary_arity: int
    amplitudes: np.ndarray  # shape (2**arity,)

    def __post_init__(self):
        assert self.amplitudes.shape == (2 ** self.boundary_arity,)

    def max_abs(self) -> float:
        if self.amplitudes.size == 0:
            return 0.0
        return float(np.max(np.abs(self.amplitudes)))

    def is_zero(self, tol: float = 1e-9) -> bool:
        return self.max_abs() <= tol


def spider_tensor(color: str, phase: int, degree: int) -> np.ndarray:
    """Spider semantics as a symmetric tensor with `degree` 2-dim axes."""
    t = np.zeros((2,) * degree, dtype=complex) if degree else np.zeros((), dtype=complex)
    alpha = np.exp(1j * np.pi / 2 * phase)
    if degree == 0:
        return np.array(1 + alpha, dtype=complex).reshape(())
    t[(0,) * degree] = 1
    t[(1,) * degree] = alpha
    if color == XCOLOR:
        for axis in range(degree):
            t = np.tensordot(_H, t, axes=([1], [axis]))
            t = np.moveaxis(t, 0, axis)
    return t


def evaluate(diagram: Diagram, max_arity: int = DEFAULT_MAX_ARITY,
             max_edges: int = DEFAULT_MAX_EDGES) -> DenseTensor:
    return evaluate_with_fault(diagram, EdgePauli(), max_arity, max_edges)


def evaluate_with_fault(diagram: Diagram, fault: EdgePauli,
                        max_arity: int = DEFAULT_MAX_ARITY,
                        max_edges: int = DEFAULT_MAX_EDGES) -> DenseTensor:
    """Contract the diagram with a Pauli factor inserted on each faulted edge."""
    arity = diagram.arity
    if arity > max_arity:
        raise TooLarge(f"boundary arity {arity} exceeds limit {max_arity}")
    if len(diagram.edges) > max_edges:
        raise TooLarge(f"{len(diagram.edges)} edges exceed limit {max_edges}")
    for e in fault.support:
        if e not in diagram.edges:
            raise UnknownEdge(f"fault on unknown edge {e}")

    # Axis labels: one per edge side. An unfaulted edge uses one shared
    # label; a faulted edge is split by its Pauli matrix node.
    nodes: List[Tuple[np.ndarray, List[Tuple[int, int]]]] = []  # (tensor, axis labels)
    label_of: Dict[Tuple[int, int], Tuple[int, int]] = {}  # (edge, side) -> label

    for eid in sorted(diagram.edges):
        p = fault.at(eid)
        if p == "I":
            label_of[(eid, 0)] = label_of[(eid, 1)] = (eid, 0)
        else:
            label_of[(eid, 0)] = (eid, 0)
            label_of[(eid, 1)] = (eid, 1)
            nodes.append((_PAULI_MAT[p], [(eid, 0), (eid, 1)]))

    # spider nodes
    for sid in sorted(diagram.spiders):
        s = diagram.spiders[sid]
        labels = []
        for eid in sorted(diagram.edges):
            a, b = diagram.edges[eid]
            if a == ("s", sid):
                labels.append(label_of[(eid, 0)])
            if b == ("s", sid):
                labels.append(label_of[(eid, 1)])
        nodes.append((spider_tensor(s.color, s.phase, len(labels)), labels))

    # boundary axes in port order; a port is always endpoint of one edge
    free_labels = []
    for port in diagram.ports:
        eid = diagram.port_edge(port)
        a, b = diagram.edges[eid]
        side = 0 if a == ("b", port) else 1
        free_labels.append(label_of[(eid, side)])

    result = _contract(nodes, free_labels, max_arity)
    return DenseTensor(arity, result.reshape(2 ** arity) if arity else result.reshape(1))


def _contract(nodes, free_labels, max_rank) -> np.ndarray:
    """Greedy pairwise contraction; traces self-repeated labels first."""
    free_count: Dict = {}
    for lbl in free_labels:
        free_count[lbl] = free_count.get(lbl, 0) + 1

    work = []
    for tensor, labels in nodes:
        work.append(_self_trace(tensor, list(labels), free_count))

    if not work:
        # bare wires only
        out = np.array(1, dtype=complex).reshape(())
        work = [(out, [])]

    # a wire between two boundary ports has no spider node: insert identity
    label_sources: Dict = {}
    for tensor, labels in work:
        for l in labels:
            label_sources[l] = label_sources.get(l, 0) + 1
    for lbl, n in free_count.items():
        if label_sources.get(lbl, 0) == 0:
            if n != 2:
                raise AssertionError("dangling free label")
            work.append((np.eye(2, dtype=complex), [lbl, lbl]))

    while True:
        # count label occurrences among nodes
        occ: Dict = {}
        for i, (t, labels) in enumerate(work):
            for l in labels:
                occ.setdefault(l, []).append(i)
        # contractible labels: appear on two different nodes, not free
        candidates = {}
        for l, idxs in occ.items():
            if l in free_count:
                continue
            if len(idxs) == 2 and idxs[0] != idxs[1]:
                i, j = idxs
                cost = len(set(work[i][1]) | set(work[j][1]))
                candidates.setdefault((i, j), []).append((l, cost))
        if not candidates:
            break
        # pick the pair minimizing the resulting tensor rank
        (i, j), _ = min(candidates.items(),
                        key=lambda kv: (min(c for _, c in kv[1]), kv[0]))
        ti, li = work[i]
        tj, lj = work[j]
        shared_labels = sorted(
            {l for l in li if l in lj and l not in free_count}, key=str)
        axes_i = [li.index(l) for l in shared_labels]
        axes_j = [lj.index(l) for l in shared_labels]
        new_rank = (ti.ndim - len(axes_i)) + (tj.ndim - len(axes_j))
        if new_rank > max_rank + 6:
            raise TooLarge(f"intermediate tensor rank {new_rank} too large")
        tn = np.tensordot(ti, tj, axes=(axes_i, axes_j))
        ln = [l for l in li if l not in shared_labels] + \
             [l for l in lj if l not in shared_labels]
        keep = [work[k] for k in range(len(work)) if k not in (i, j)]
        keep.append(_self_trace(tn, ln, free_count))
        work = keep

    # outer product of the remaining nodes
    tensor, labels = work[0]
    for t2, l2 in work[1:]:
        tensor = np.tensordot(tensor, t2, axes=0)
        labels = labels + l2
    # arrange to free_labels order; a label may appear twice (bare wire),
    # in which case its two axes are consumed in order
    used_axes = set()
    perm = []
    for l in free_labels:
        for idx, l2 in enumerate(labels):
            if l2 == l and idx not in used_axes:
                perm.append(idx)
                used_axes.add(idx)
                break
        else:
            raise AssertionError("free label missing")
    tensor = np.transpose(tensor, perm) if perm else tensor
    # flatten with port 0 as the least significant bit
    tensor = np.transpose(tensor, tuple(range(tensor.ndim - 1, -1, -1)))
    return tensor


def _self_trace(tensor: np.ndarray, labels: List, free_count) -> Tuple[np.ndarray, List]:
    """Trace out labels occurring twice on the same node (self-loops)."""
    while True:
        dup = None
        for idx, l in enumerate(labels):
            if l in free_count:
                continue
            if labels.count(l) == 2:
                dup = l
                break
        if dup is None:
            return tensor, labels
        i = labels.index(dup)
        j = labels.index(dup, i + 1)
        tensor = np.trace(tensor, axis1=i, axis2=j)
        labels = [l for k, l in enumerate(labels) if k not in (i, j)]


def equal_up_to_scalar(a: DenseTensor, b: DenseTensor, tol: float = 1e-9) -> bool:
    """True iff a = lam * b for some nonzero lam, or both are zero."""
    if a.boundary_arity != b.boundary_arity:
        raise ArityMismatch(f"{a.boundary_arity} != {b.boundary_arity}")
    na, nb = a.max_abs(), b.max_abs()
    if na <= tol and nb <= tol:
        return True
    if na <= tol or nb <= tol:
        return False
    k = int(np.argmax(np.abs(b.amplitudes)))
    lam = a.amplitudes[k] / b.amplitudes[k]
    if abs(lam) <= tol:
        return False
    scale = max(na, abs(lam) * nb)
    return bool(np.max(np.abs(a.amplitudes - lam * b.amplitudes)) <= tol * scale)


def fingerprint(t: DenseTensor, tol: float = 1e-9, digits: int = 9) -> Tuple:
    """Scalar-invariant equality key: normalized by the first significant
    amplitude and rounded. The zero tensor gets a reserved key."""
    amps = t.amplitudes
    mx = t.max_abs()
    if mx <= tol:
        return ("zero",)
    k = int(np.argmax(np.abs(amps) > mx * 1e-6))
    # first amplitude above a relative floor, deterministic
    idxs = np.nonzero(np.abs(amps) > mx * 1e-6)[0]
    k = int(idxs[0])
    norm = amps / amps[k]
    re = np.round(norm.real, digits) + 0.0  # normalize -0.0
    im = np.round(norm.imag, digits) + 0.0
    return tuple(float(v) for v in re) + tuple(float(v) for v in im)
