"""Weighted union-find decoding.

``decode`` wraps the compiled kernel used by the Monte Carlo driver.
``ClusterState``/``grow_step``/``peel`` are a direct, readable python
implementation of the same algorithm; the two are cross-checked against
each other (and against a minimum-weight matching oracle on small
graphs) in the test suite.

Algorithm: every fired detector starts an active cluster; weight-0
(erased) edges are pre-merged.  Each step advances all frontier edges
of active clusters by the minimal remaining increment (an edge grows
from both ends when both clusters are active); fully grown edges merge
clusters, tracking syndrome parity and boundary contact.  A cluster is
inactive once its parity is even or it touches a boundary.  Corrections
are read off by leaf-first peeling of a spanning forest of each cluster.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Set

import numpy as np

from . import kernels
from .dgraph import DecodingGraph


@dataclass
class Correction:
    """Selected edge set; its syndrome equals the decoder input."""

    edges: List[int]
    logical_flip: bool
    consistent: bool = True

    def edge_set(self) -> Set[int]:
        return set(self.edges)


def decode(graph: DecodingGraph, weights: np.ndarray, syndrome: np.ndarray) -> Correction:
    """Decode one syndrome over per-shot weights (compiled path)."""
    n_vert = graph.n_vertices
    E = graph.n_edges
    cap = max(E, n_vert) + 1
    i32 = np.int32
    log, ncorr, ok = kernels.uf_decode(
        n_vert, graph.eu, graph.ev, graph.elog, graph.adj_ptr, graph.adj_eid,
        np.ascontiguousarray(weights, dtype=np.float64),
        np.ascontiguousarray(syndrome, dtype=np.uint8),
        np.zeros(n_vert, i32), np.zeros(n_vert, i32),
        np.zeros(n_vert, np.uint8), np.zeros(n_vert, np.uint8),
        np.zeros(n_vert, i32), np.zeros(E, np.float64), np.zeros(E, np.uint8),
        np.zeros(E, np.uint8), np.zeros(cap, i32), np.zeros(n_vert, i32),
        np.zeros(n_vert, i32), np.zeros(n_vert, i32), np.zeros(cap, i32),
        np.zeros(n_vert, np.uint8), np.zeros(n_vert, np.uint8),
        _corr_buf := np.zeros(max(E, 1), i32))
    return Correction(edges=list(_corr_buf[:ncorr]), logical_flip=bool(log),
                      consistent=bool(ok))


# ---------------------------------------------------------------------
# Reference implementation
# ---------------------------------------------------------------------

@dataclass
class ClusterState:
    """Union-find bookkeeping over one graph + weights + syndrome."""

    graph: DecodingGraph
    weights: np.ndarray
    syndrome: np.ndarray
    parent: np.ndarray = field(init=False)
    rank: np.ndarray = field(init=False)
    parity: np.ndarray = field(init=False)
    boundary: np.ndarray = field(init=False)
    boundary_edge: np.ndarray = field(init=False)
    remaining: np.ndarray = field(init=False)
    full: np.ndarray = field(init=False)

    def __post_init__(self):
        n = self.graph.n_vertices
        E = self.graph.n_edges
        self.parent = np.arange(n, dtype=np.int32)
        self.rank = np.zeros(n, dtype=np.int32)
        self.parity = np.asarray(self.syndrome, dtype=np.uint8).copy()
        self.boundary = np.zeros(n, dtype=np.uint8)
        self.boundary_edge = np.full(n, -1, dtype=np.int32)
        self.remaining = np.asarray(self.weights, dtype=np.float64).copy()
        self.full = np.zeros(E, dtype=np.uint8)
        for e in range(E):
            if self.remaining[e] <= 0.0:
                self._fill(e)

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return int(x)

    def _fill(self, e: int) -> None:
        self.full[e] = 1
        u, v = int(self.graph.eu[e]), int(self.graph.ev[e])
        ru = self.find(u)
        if v < 0:
            self.boundary[ru] = 1
            if self.boundary_edge[ru] < 0:
                self.boundary_edge[ru] = e
            return
        rv = self.find(v)
        if ru == rv:
            return
        # union by rank, then lower root index
        if self.rank[ru] < self.rank[rv] or \
                (self.rank[ru] == self.rank[rv] and rv < ru):
            ru, rv = rv, ru
        self.parent[rv] = ru
        if self.rank[ru] == self.rank[rv]:
            self.rank[ru] += 1
        self.parity[ru] ^= self.parity[rv]
        self.boundary[ru] |= self.boundary[rv]
        if self.boundary_edge[ru] < 0:
            self.boundary_edge[ru] = self.boundary_edge[rv]

    def active(self, root: int) -> bool:
        return bool(self.parity[root] == 1 and not self.boundary[root])

    def active_roots(self) -> Set[int]:
        return {self.find(v) for v in range(self.graph.n_vertices)
                if self.active(self.find(v))}

    def _edge_sides(self, e: int) -> int:
        sides = 0
        if self.active(self.find(int(self.graph.eu[e]))):
            sides += 1
        v = int(self.graph.ev[e])
        if v >= 0 and self.active(self.find(v)):
            sides += 1
        return sides


def grow_step(state: ClusterState) -> bool:
    """One event-driven growth step; returns False when no active
    cluster has a frontier left."""
    g = state.graph
    frontier = [(e, state._edge_sides(e)) for e in range(g.n_edges)
                if not state.full[e]]
    frontier = [(e, s) for e, s in frontier if s > 0]
    if not frontier:
        return False
    delta = min(state.remaining[e] / s for e, s in frontier)
    newly = []
    for e, s in frontier:
        state.remaining[e] -= delta * s
        if state.remaining[e] <= 0.0:
            newly.append(e)
    for e in sorted(newly):
        state._fill(e)
    return True


def peel(state: ClusterState) -> Correction:
    """Leaf-first peeling over the spanning forest of each cluster."""
    g = state.graph
    n = g.n_vertices
    pend = np.asarray(state.syndrome, dtype=np.uint8).copy()
    visited = np.zeros(n, dtype=np.uint8)
    edges: List[int] = []
    log = 0
    ok = True
    for v0 in range(n):
        if not state.syndrome[v0] or visited[v0]:
            continue
        root = state.find(v0)
        be = int(state.boundary_edge[root])
        start = int(g.eu[be]) if be >= 0 else v0
        # BFS spanning tree over full edges
        order = [start]
        pedge = {start: (-1, -1)}
        visited[start] = 1
        qi = 0
        while qi < len(order):
            x = order[qi]
            qi += 1
            for k in range(g.adj_ptr[x], g.adj_ptr[x + 1]):
                e = int(g.adj_eid[k])
                if not state.full[e]:
                    continue
                y = int(g.ev[e]) if int(g.eu[e]) == x else int(g.eu[e])
                if y < 0 or visited[y]:
                    continue
                visited[y] = 1
                pedge[y] = (e, x)
                order.append(y)
        for x in reversed(order[1:]):
            if pend[x]:
                e, px = pedge[x]
                edges.append(e)
                log ^= int(g.elog[e])
                pend[x] = 0
                pend[px] ^= 1
        if pend[start]:
            if be >= 0:
                edges.append(be)
                log ^= int(g.elog[be])
                pend[start] = 0
            else:
                ok = False
    return Correction(edges=edges, logical_flip=bool(log), consistent=ok)


def decode_reference(graph: DecodingGraph, weights: np.ndarray,
                     syndrome: np.ndarray) -> Correction:
    state = ClusterState(graph, weights, syndrome)
    while grow_step(state):
        pass
    if any(state.active(state.find(v)) for v in range(graph.n_vertices)):
        return Correction(edges=[], logical_flip=False, consistent=False)
    return peel(state)
