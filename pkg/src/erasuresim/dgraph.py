"""Decoding graphs and erasure-flag weight overlays.

Static graphs are built per syndrome basis by enumerating every
two-qubit Pauli fault at every gate of the window, propagating it to
detectors, and merging parallel edges by probability combination.

Erasure flags modify edge weights per shot:

* strong edges (weight exactly 0) come from the definite faults at the
  flagged gate: the leaked qubit's reset channel plus the partner's
  induced Pauli when the flag resolves the qubit, or the reset channel
  on both gate qubits when it does not;
* weak edges come from the hypothetical predecessor-gate faults a
  delayed flag implies, at per-Pauli probability (1-eta)/4 for uniform
  channels or (1-eta)/2 for the tailored two-element partner set.

Weak-edge structure and probabilities depend only on the noise-model
shape (not on p), so graph structures are cached and re-priced per p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .circuit import CompiledCircuit, compile_circuit
from .kernels import INF_WEIGHT
from .lattice import CodeLayout
from .noise import NoiseParams, PauliModel, SpatialResolution
from .signatures import Signature, SignatureCalculator


class GraphConstructionError(Exception):
    """A fault produced an impossible detector pattern (schedule/graph
    mismatch)."""


def combine_probabilities(p1: float, p2: float) -> float:
    """Probability that exactly one of two independent flips occurs."""
    return p1 * (1.0 - p2) + p2 * (1.0 - p1)


def weight_of(p: float) -> float:
    if p <= 0.0:
        return INF_WEIGHT
    if p >= 0.5:
        return 0.0
    return math.log((1.0 - p) / p)


def _xor_sigs(a: Signature, b: Signature) -> Signature:
    return Signature(
        tuple(sorted(set(a.hits_x) ^ set(b.hits_x))),
        tuple(sorted(set(a.hits_z) ^ set(b.hits_z))),
        a.log_x ^ b.log_x,
        a.log_z ^ b.log_z,
    )


class _BasisStructure:
    """Mutable edge store for one basis while building."""

    def __init__(self, cc: CompiledCircuit, isx: bool):
        self.isx = isx
        self.cc = cc
        self.rows = [ai for ai in range(cc.n_anc) if bool(cc.row_isx[ai]) == isx]
        self.brow = np.full(cc.n_anc, -1, dtype=np.int32)
        for b, ai in enumerate(self.rows):
            self.brow[ai] = b
        self.n_vert = len(self.rows) * (cc.rounds + 1)
        self.eu: List[int] = []
        self.ev: List[int] = []
        self.elog: List[int] = []
        self.counts: List[int] = []
        self.index: Dict[Tuple[int, int, int], int] = {}

    def project(self, sig: Signature) -> Optional[Tuple[int, int, int]]:
        """Map a fault signature to this basis's edge key or None."""
        hits = sig.hits_x if self.isx else sig.hits_z
        log = sig.log_x if self.isx else sig.log_z
        if not hits:
            if log:
                raise GraphConstructionError(
                    "fault flips the logical readout without firing detectors")
            return None
        verts = []
        for row, r in hits:
            b = self.brow[row]
            if b < 0:
                raise GraphConstructionError("detector hit outside basis")
            verts.append(int(b) * (self.cc.rounds + 1) + r)
        if len(verts) == 1:
            return (verts[0], -1, log)
        if len(verts) == 2:
            u, v = sorted(verts)
            return (u, v, log)
        raise GraphConstructionError(
            f"fault produced {len(verts)} detector hits in one basis")

    def ensure(self, key: Tuple[int, int, int]) -> int:
        eid = self.index.get(key)
        if eid is None:
            eid = len(self.eu)
            self.index[key] = eid
            self.eu.append(key[0])
            self.ev.append(key[1])
            self.elog.append(key[2])
            self.counts.append(0)
        return eid

    def add_fault(self, key: Tuple[int, int, int]) -> None:
        self.counts[self.ensure(key)] += 1


def _csr(n_rows: int, rows: Dict[int, list], width: int = 1):
    ptr = np.zeros(n_rows + 1, dtype=np.int32)
    flat: List = []
    for i in range(n_rows):
        for item in rows.get(i, ()):
            flat.append(item)
        ptr[i + 1] = len(flat)
    if width == 1:
        return ptr, np.array(flat, dtype=np.int32)
    eid = np.array([f[0] for f in flat], dtype=np.int32)
    pw = np.array([f[1] for f in flat], dtype=np.float64)
    return ptr, eid, pw


class GraphSet:
    """Both basis graphs plus flag tables for one noise-model shape.

    Probabilities that depend on the physical rate p are re-priced per
    call; everything structural (edges, strong/weak tables) is built
    once.
    """

    def __init__(self, layout: CodeLayout, rounds: int, spatial: SpatialResolution,
                 model: PauliModel, eta: float, halve_imperfect_weak: bool):
        self.layout = layout
        self.rounds = rounds
        self.spatial = spatial
        self.model = model
        self.eta = eta
        self.halve = halve_imperfect_weak
        self.cc = compile_circuit(layout, rounds)
        self.sc = SignatureCalculator(self.cc)
        self.bases = {"X": _BasisStructure(self.cc, True),
                      "Z": _BasisStructure(self.cc, False)}
        self._enumerate_pauli_faults()
        self._build_tables()
        self._freeze()

    # -- static fault enumeration -------------------------------------
    def _enumerate_pauli_faults(self) -> None:
        cc = self.cc
        for r in range(cc.rounds):
            for j in range(cc.n_gates):
                a = int(cc.g_anc[j])
                dq = int(cc.g_data[j])
                s = int(cc.g_slot[j])
                for k in range(1, 16):
                    sig = _xor_sigs(self.sc.signature(a, r, s, k >> 2),
                                    self.sc.signature(dq, r, s, k & 3))
                    for bs in self.bases.values():
                        key = bs.project(sig)
                        if key is not None:
                            bs.add_fault(key)

    # -- flag tables ---------------------------------------------------
    def _uniform_keys(self, q: int, r: int, pos: int, bs: _BasisStructure):
        """Edge keys of a uniform {I,X,Y,Z} channel at a location, in
        one basis.  Each present key has two contributing Paulis (the
        component and Y)."""
        keys = []
        for comp in (1, 3):
            key = bs.project(self.sc.signature(q, r, pos, comp))
            if key is not None:
                keys.append(key)
        return keys

    def _tailored_keys(self, q: int, r: int, pos: int, pi: int, bs: _BasisStructure):
        key = bs.project(self.sc.signature(q, r, pos, pi))
        return [key] if key is not None else []

    @staticmethod
    def _tail_pi(iscx: int, leaked_is_control: bool) -> int:
        return 1 if (iscx and leaked_is_control) else 3

    def _partner_strong_keys(self, c: int, r: int, pos: int, iscx: int,
                             leaked_is_control: bool, bs: _BasisStructure):
        if self.model is PauliModel.GENERAL:
            return self._uniform_keys(c, r, pos, bs)
        return self._tailored_keys(c, r, pos, self._tail_pi(iscx, leaked_is_control), bs)

    def _candidate_weak(self, f: int, r: int, j: int, bs: _BasisStructure,
                        quarter: float, half: float):
        """Weak entries for the hypothesis that qubit f leaked at its
        predecessor gate and the flag at (r, j) is one gate late."""
        cc = self.cc
        f_is_anc = f == int(cc.g_anc[j])
        if f_is_anc:
            j0, r0 = int(cc.pred_anc_j[j]), r
        else:
            j0 = int(cc.pred_data_j[j])
            r0 = r - int(cc.pred_data_dr[j])
        if j0 < 0 or r0 < 0:
            return []
        s0 = int(cc.g_slot[j0])
        iscx0 = int(cc.g_iscx[j0])
        f_ctrl0 = f == int(cc.g_anc[j0])
        c0 = int(cc.g_data[j0]) if f_ctrl0 else int(cc.g_anc[j0])
        entries = []
        pq = combine_probabilities(quarter, quarter)
        for key in self._uniform_keys(f, r0, s0, bs):
            entries.append((bs.ensure(key), pq))
        if self.model is PauliModel.GENERAL:
            for key in self._uniform_keys(c0, r0, s0, bs):
                entries.append((bs.ensure(key), pq))
        else:
            pi0 = self._tail_pi(iscx0, f_ctrl0)
            for key in self._tailored_keys(c0, r0, s0, pi0, bs):
                entries.append((bs.ensure(key), half))
        return entries

    def _build_tables(self) -> None:
        cc = self.cc
        R, G = cc.rounds, cc.n_gates
        eta = self.eta
        quarter = (1.0 - eta) / 4.0
        half = (1.0 - eta) / 2.0
        imperfect = self.spatial is SpatialResolution.IMPERFECT
        if imperfect and self.halve:
            quarter /= 2.0
            half /= 2.0
        no_weak = eta >= 1.0

        self.tables = {}
        for bname, bs in self.bases.items():
            gs_rows: Dict[int, list] = {}
            gw_rows: Dict[int, list] = {}
            ms_rows: Dict[int, list] = {}
            es_rows: Dict[int, list] = {}

            for r in range(R):
                for j in range(G):
                    a = int(cc.g_anc[j])
                    dq = int(cc.g_data[j])
                    s = int(cc.g_slot[j])
                    iscx = int(cc.g_iscx[j])
                    if imperfect:
                        strong = [bs.ensure(k) for k in
                                  self._uniform_keys(a, r, s, bs) +
                                  self._uniform_keys(dq, r, s, bs)]
                        weak = [] if no_weak else (
                            self._candidate_weak(a, r, j, bs, quarter, half) +
                            self._candidate_weak(dq, r, j, bs, quarter, half))
                        gs_rows[(r * G + j) * 2] = strong
                        gw_rows[(r * G + j) * 2] = weak
                    else:
                        for v, (f, c) in enumerate(((a, dq), (dq, a))):
                            strong = [bs.ensure(k) for k in
                                      self._uniform_keys(f, r, s, bs) +
                                      self._partner_strong_keys(c, r, s, iscx, f == a, bs)]
                            weak = [] if no_weak else self._candidate_weak(
                                f, r, j, bs, quarter, half)
                            gs_rows[(r * G + j) * 2 + v] = strong
                            gw_rows[(r * G + j) * 2 + v] = weak

            for ai in range(cc.n_anc):
                q = int(cc.row_anc[ai])
                j = int(cc.last_gate_anc[ai])
                dq = int(cc.g_data[j])
                s = int(cc.g_slot[j])
                iscx = int(cc.g_iscx[j])
                for r in range(R):
                    strong = [bs.ensure(k) for k in
                              self._partner_strong_keys(dq, r, s, iscx, True, bs)]
                    mk = bs.project(self.sc.signature(q, r, 4, 3))
                    if mk is not None:
                        strong.append(bs.ensure(mk))
                    ms_rows[ai * R + r] = strong

            for q in range(cc.n_qubits):
                if not cc.is_data[q]:
                    continue
                j = int(cc.last_gate_data[q])
                a = int(cc.g_anc[j])
                s = int(cc.g_slot[j])
                iscx = int(cc.g_iscx[j])
                strong = [bs.ensure(k) for k in
                          self._partner_strong_keys(a, R - 1, s, iscx, False, bs) +
                          self._uniform_keys(q, R, 0, bs)]
                es_rows[q] = strong

            gs_ptr, gs_eid = _csr(R * G * 2, gs_rows)
            gw_ptr, gw_eid, gw_p = _csr(R * G * 2, gw_rows, width=2)
            ms_ptr, ms_eid = _csr(cc.n_anc * R, ms_rows)
            es_ptr, es_eid = _csr(cc.n_qubits, es_rows)
            self.tables[bname] = (gs_ptr, gs_eid, gw_ptr, gw_eid, gw_p,
                                  ms_ptr, ms_eid, es_ptr, es_eid)

    # -- freezing ------------------------------------------------------
    def _freeze(self) -> None:
        self.frozen = {}
        for bname, bs in self.bases.items():
            eu = np.array(bs.eu, dtype=np.int32)
            ev = np.array(bs.ev, dtype=np.int32)
            elog = np.array(bs.elog, dtype=np.uint8)
            counts = np.array(bs.counts, dtype=np.int64)
            adj: Dict[int, list] = {}
            for e in range(len(bs.eu)):
                adj.setdefault(int(eu[e]), []).append(e)
                if ev[e] >= 0:
                    adj.setdefault(int(ev[e]), []).append(e)
            adj_ptr, adj_eid = _csr(bs.n_vert, adj)
            self.frozen[bname] = (eu, ev, elog, counts, adj_ptr, adj_eid)

    def static_probs(self, p: float, erasure_fraction: float, basis: str):
        counts = self.frozen[basis][3]
        q = p * (1.0 - erasure_fraction) / 15.0
        ep = 0.5 * (1.0 - (1.0 - 2.0 * q) ** counts)
        ew = np.where(ep > 0.0, np.log((1.0 - ep) / np.maximum(ep, 1e-300)),
                      INF_WEIGHT)
        ew = np.where(ep >= 0.5, 0.0, ew)
        return ep, ew

    def graph(self, basis: str, p: float, erasure_fraction: float) -> "DecodingGraph":
        eu, ev, elog, counts, adj_ptr, adj_eid = self.frozen[basis]
        ep, ew = self.static_probs(p, erasure_fraction, basis)
        return DecodingGraph(self, basis, eu, ev, elog, counts, ep, ew,
                             adj_ptr, adj_eid)


@dataclass
class DecodingGraph:
    """Immutable per-basis decoding graph, shareable across shots."""

    graph_set: GraphSet
    basis: str
    eu: np.ndarray
    ev: np.ndarray
    elog: np.ndarray
    fault_counts: np.ndarray
    ep: np.ndarray
    ew: np.ndarray
    adj_ptr: np.ndarray
    adj_eid: np.ndarray

    @property
    def n_vertices(self) -> int:
        return self.graph_set.bases[self.basis].n_vert

    @property
    def n_edges(self) -> int:
        return len(self.eu)

    def vertex_label(self, v: int) -> str:
        if v < 0:
            return "B"
        R1 = self.graph_set.rounds + 1
        b, r = divmod(v, R1)
        ai = self.graph_set.bases[self.basis].rows[b]
        return f"{int(self.graph_set.cc.row_anc[ai])}:{r}"

    def as_tuple(self):
        bs = self.graph_set.bases[self.basis]
        return (bs.n_vert, self.eu, self.ev, self.elog, self.ep, self.ew,
                self.adj_ptr, self.adj_eid, bs.brow)

    def tables_tuple(self):
        return self.graph_set.tables[self.basis]

    def dump(self) -> str:
        """One edge per line: endpoints, static probability,
        contributing fault count."""
        lines = []
        for e in range(self.n_edges):
            lines.append(f"{self.vertex_label(int(self.eu[e]))} "
                         f"{self.vertex_label(int(self.ev[e]))} "
                         f"{self.ep[e]:.9g} {int(self.fault_counts[e])}")
        return "\n".join(sorted(lines)) + "\n"


_GRAPH_CACHE: Dict[tuple, GraphSet] = {}


def get_graph_set(layout: CodeLayout, rounds: int, params: NoiseParams) -> GraphSet:
    key = (layout.geometry, layout.distance, rounds, params.spatial,
           params.pauli_model, params.temporal_resolution,
           params.halve_imperfect_weak)
    gs = _GRAPH_CACHE.get(key)
    if gs is None:
        gs = GraphSet(layout, rounds, params.spatial, params.pauli_model,
                      params.temporal_resolution, params.halve_imperfect_weak)
        _GRAPH_CACHE[key] = gs
    return gs


def build_static_graph(layout: CodeLayout, params: NoiseParams, rounds: int,
                       basis: str) -> DecodingGraph:
    """Enumerate all circuit faults and build one basis's weighted
    decoding graph."""
    if basis not in ("X", "Z"):
        raise ValueError("basis must be 'X' or 'Z'")
    gs = get_graph_set(layout, rounds, params)
    return gs.graph(basis, params.p, params.erasure_fraction)


@dataclass
class DynamicWeights:
    """Per-shot overlay of effective edge probabilities from flags."""

    graph: DecodingGraph
    p_eff: Dict[int, float] = field(default_factory=dict)
    strongly_erased: Set[int] = field(default_factory=set)
    weakly_erased: Set[int] = field(default_factory=set)

    def weights(self) -> np.ndarray:
        w = self.graph.ew.copy()
        for e in self.weakly_erased:
            if e not in self.strongly_erased:
                w[e] = weight_of(self.p_eff[e])
        for e in self.strongly_erased:
            w[e] = 0.0
        return w


def reweight_for_flags(graph: DecodingGraph, flags: Sequence,
                       params: NoiseParams) -> DynamicWeights:
    """Apply one shot's erasure flags to the static graph.

    Flags carry (kind, round, gate_index, qubit); gate flags with
    qubit == -1 are spatially unresolved.
    """
    gs = graph.graph_set
    cc = gs.cc
    R, G = cc.rounds, cc.n_gates
    (gs_ptr, gs_eid, gw_ptr, gw_eid, gw_p,
     ms_ptr, ms_eid, es_ptr, es_eid) = graph.tables_tuple()
    dyn = DynamicWeights(graph=graph)
    for fl in flags:
        kind = int(fl.kind)
        if kind == 0:
            r, j, q = fl.round, fl.gate_index, fl.qubit
            if not (0 <= r < R and 0 <= j < G):
                raise ValueError("flag references a gate outside the window")
            v = 1 if q == int(cc.g_data[j]) else 0
            idx = (r * G + j) * 2 + v
            for k in range(gs_ptr[idx], gs_ptr[idx + 1]):
                e = int(gs_eid[k])
                dyn.strongly_erased.add(e)
                dyn.p_eff[e] = 0.5
            for k in range(gw_ptr[idx], gw_ptr[idx + 1]):
                e = int(gw_eid[k])
                base = dyn.p_eff.get(e, float(graph.ep[e]))
                dyn.p_eff[e] = combine_probabilities(base, float(gw_p[k]))
                dyn.weakly_erased.add(e)
        elif kind == 1:
            idx = int(cc.anc_row[fl.qubit]) * R + fl.round
            for k in range(ms_ptr[idx], ms_ptr[idx + 1]):
                e = int(ms_eid[k])
                dyn.strongly_erased.add(e)
                dyn.p_eff[e] = 0.5
        else:
            idx = fl.qubit
            for k in range(es_ptr[idx], es_ptr[idx + 1]):
                e = int(es_eid[k])
                dyn.strongly_erased.add(e)
                dyn.p_eff[e] = 0.5
    # strong overrides any weak accumulation on the same edge
    for e in dyn.strongly_erased:
        dyn.p_eff[e] = 0.5
    return dyn
