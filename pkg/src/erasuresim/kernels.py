"""Numba kernels: per-shot Pauli-frame simulation, flag-driven weight
overlays, weighted union-find decoding, and the parallel Monte Carlo
driver.

All kernels consume flat arrays prepared by :mod:`circuit` and
:mod:`dgraph`.  Static inputs are bundled into tuples:

* ``circ``: (rounds, G, nq, n_anc, g_anc, g_data, g_iscx, anc_row,
  row_anc, row_isx, sup_ptr, sup_dat, is_lx, is_lz, is_data)
* ``graph``: (n_vert, eu, ev, elog, ep, ew, brow)
* ``tables``: (gs_ptr, gs_eid, gw_ptr, gw_eid, gw_p, ms_ptr, ms_eid,
  es_ptr, es_eid) — strong/weak edge lookups per flag scenario.
* ``tape``: forced-fault arrays for deterministic replay (entries of -1
  fall back to random draws).

Per-shot randomness is seeded from (master_seed, shot index) with a
splitmix64 mix, so results are independent of worker count and shot
scheduling.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

# Pauli component index: 0 I, 1 X, 2 Y, 3 Z
PXBIT = np.array([0, 1, 1, 0], dtype=np.uint8)
PZBIT = np.array([0, 0, 1, 1], dtype=np.uint8)

INF_WEIGHT = 1.0e12

FLAG_GATE = 0
FLAG_MEASUREMENT = 1
FLAG_WINDOW_END = 2


@njit(cache=True, inline="always")
def _mix_seed(master, shot):
    z = np.uint64(master) + np.uint64(shot) * np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return np.int64(z & np.uint64(0x7FFFFFFF))


@njit(cache=True, inline="always")
def _apply_pauli(fx, fz, q, k):
    fx[q] ^= PXBIT[k]
    fz[q] ^= PZBIT[k]


@njit(cache=True, inline="always")
def _draw_induced(tailored, iscx, leaked_is_control, forced_val):
    """Pauli induced on the unleaked partner of a leaked qubit."""
    if forced_val >= 0:
        return forced_val
    if tailored:
        if np.random.random() < 0.5:
            return 0
        if iscx and leaked_is_control:
            return 1  # X
        return 3  # Z
    return np.random.randint(0, 4)


@njit(cache=True, inline="always")
def _draw_el(forced_val):
    if forced_val >= 0:
        return forced_val
    return np.random.randint(0, 4)


@njit(cache=True)
def sim_shot(circ, p, re_, eta, imperfect, tailored,
             forced, t_kind, t_pauli, t_leak_anc, t_ontime, t_induced,
             t_el_a, t_el_d, t_meas, t_el_end,
             fx, fz, leaked, oleak_r, oleak_j, mflip, flags):
    """Run one shot; returns (n_flags, x_readout_flip, z_readout_flip).

    ``mflip[ai, r]`` collects measurement-outcome flips for rounds
    0..R-1 plus the noiseless final data readout in column R.
    ``flags`` rows are (kind, round, gate_index, qubit, origin_round,
    origin_gate_index); qubit is -1 for spatially unresolved gate flags.
    """
    (R, G, nq, n_anc, g_anc, g_data, g_iscx, anc_row, row_anc, row_isx,
     sup_ptr, sup_dat, is_lx, is_lz, is_data) = circ

    for q in range(nq):
        fx[q] = 0
        fz[q] = 0
        leaked[q] = 0
    nf = 0
    p_leak = p * re_

    for r in range(R):
        for j in range(G):
            a = g_anc[j]
            dq = g_data[j]
            iscx = g_iscx[j]
            la0 = leaked[a]
            ld0 = leaked[dq]
            if la0 or ld0:
                # Delayed flag: the leaked participant is caught here;
                # the gate itself is replaced by identity plus the
                # induced Pauli on an unleaked partner.
                fv = t_induced[r * G + j] if forced else np.int8(-1)
                if la0:
                    if not ld0:
                        _apply_pauli(fx, fz, dq, _draw_induced(tailored, iscx, True, fv))
                    flags[nf, 0] = FLAG_GATE
                    flags[nf, 1] = r
                    flags[nf, 2] = j
                    flags[nf, 3] = -1 if imperfect else a
                    flags[nf, 4] = oleak_r[a]
                    flags[nf, 5] = oleak_j[a]
                    nf += 1
                    leaked[a] = 0
                    _apply_pauli(fx, fz, a, _draw_el(t_el_a[r * G + j] if forced else np.int8(-1)))
                    if imperfect:
                        if ld0:
                            leaked[dq] = 0
                        _apply_pauli(fx, fz, dq, _draw_el(t_el_d[r * G + j] if forced else np.int8(-1)))
                if leaked[dq]:
                    if not la0:
                        _apply_pauli(fx, fz, a, _draw_induced(tailored, iscx, False, fv))
                    flags[nf, 0] = FLAG_GATE
                    flags[nf, 1] = r
                    flags[nf, 2] = j
                    flags[nf, 3] = -1 if imperfect else dq
                    flags[nf, 4] = oleak_r[dq]
                    flags[nf, 5] = oleak_j[dq]
                    nf += 1
                    leaked[dq] = 0
                    _apply_pauli(fx, fz, dq, _draw_el(t_el_d[r * G + j] if forced else np.int8(-1)))
                    if imperfect:
                        _apply_pauli(fx, fz, a, _draw_el(t_el_a[r * G + j] if forced else np.int8(-1)))
                continue

            # No leaked participant: sample a fresh fault at this gate.
            kind = 0
            if forced:
                kind = t_kind[r * G + j]
            elif p > 0.0:
                u = np.random.random()
                if u < p_leak:
                    kind = 2
                elif u < p:
                    kind = 1

            if kind == 2:
                lq_anc = (t_leak_anc[r * G + j] != 0) if forced else (np.random.random() < 0.5)
                lq = a if lq_anc else dq
                partner = dq if lq_anc else a
                fx[lq] = 0
                fz[lq] = 0
                fv = t_induced[r * G + j] if forced else np.int8(-1)
                _apply_pauli(fx, fz, partner, _draw_induced(tailored, iscx, lq_anc, fv))
                ontime = (t_ontime[r * G + j] != 0) if forced else (np.random.random() < eta)
                if ontime:
                    flags[nf, 0] = FLAG_GATE
                    flags[nf, 1] = r
                    flags[nf, 2] = j
                    flags[nf, 3] = -1 if imperfect else lq
                    flags[nf, 4] = r
                    flags[nf, 5] = j
                    nf += 1
                    if lq_anc:
                        _apply_pauli(fx, fz, lq, _draw_el(t_el_a[r * G + j] if forced else np.int8(-1)))
                    else:
                        _apply_pauli(fx, fz, lq, _draw_el(t_el_d[r * G + j] if forced else np.int8(-1)))
                    if imperfect:
                        if lq_anc:
                            _apply_pauli(fx, fz, partner, _draw_el(t_el_d[r * G + j] if forced else np.int8(-1)))
                        else:
                            _apply_pauli(fx, fz, partner, _draw_el(t_el_a[r * G + j] if forced else np.int8(-1)))
                else:
                    leaked[lq] = 1
                    oleak_r[lq] = r
                    oleak_j[lq] = j
            else:
                # Ideal Clifford: CX (control=ancilla) or CZ.
                if iscx:
                    fx[dq] ^= fx[a]
                    fz[a] ^= fz[dq]
                else:
                    t1 = fx[a]
                    t2 = fx[dq]
                    fz[dq] ^= t1
                    fz[a] ^= t2
                if kind == 1:
                    k = t_pauli[r * G + j] if forced else np.int8(1 + np.random.randint(0, 15))
                    _apply_pauli(fx, fz, a, k >> 2)
                    _apply_pauli(fx, fz, dq, k & 3)

        # X-basis ancilla measurements; ancillas are freshly prepared
        # for the next round.
        for ai in range(n_anc):
            q = row_anc[ai]
            if leaked[q]:
                fm = t_meas[ai * R + r] if forced else np.int8(-1)
                mflip[ai, r] = fm if fm >= 0 else np.int8(np.random.randint(0, 2))
                flags[nf, 0] = FLAG_MEASUREMENT
                flags[nf, 1] = r
                flags[nf, 2] = -1
                flags[nf, 3] = q
                flags[nf, 4] = oleak_r[q]
                flags[nf, 5] = oleak_j[q]
                nf += 1
                leaked[q] = 0
            else:
                mflip[ai, r] = fz[q]
            fx[q] = 0
            fz[q] = 0

    # Data qubits still leaked at window end are flagged and reset
    # before the noiseless final readout.
    for q in range(nq):
        if leaked[q]:
            flags[nf, 0] = FLAG_WINDOW_END
            flags[nf, 1] = R
            flags[nf, 2] = -1
            flags[nf, 3] = q
            flags[nf, 4] = oleak_r[q]
            flags[nf, 5] = oleak_j[q]
            nf += 1
            leaked[q] = 0
            _apply_pauli(fx, fz, q, _draw_el(t_el_end[q] if forced else np.int8(-1)))

    # Noiseless final data readout closes the last detector layer.
    for ai in range(n_anc):
        acc = np.uint8(0)
        if row_isx[ai]:
            for s in range(sup_ptr[ai], sup_ptr[ai + 1]):
                acc ^= fz[sup_dat[s]]
        else:
            for s in range(sup_ptr[ai], sup_ptr[ai + 1]):
                acc ^= fx[sup_dat[s]]
        mflip[ai, R] = acc

    xl = np.uint8(0)
    zl = np.uint8(0)
    for q in range(nq):
        if is_lx[q]:
            xl ^= fz[q]
        if is_lz[q]:
            zl ^= fx[q]
    return nf, xl, zl


@njit(cache=True)
def seeded_sim_shot(circ, p, re_, eta, imperfect, tailored, forced, tape,
                    fx, fz, leaked, oleak_r, oleak_j, mflip, flags, seed):
    """sim_shot behind a per-shot RNG seed (seed < 0 leaves the stream)."""
    (t_kind, t_pauli, t_leak_anc, t_ontime, t_induced,
     t_el_a, t_el_d, t_meas, t_el_end) = tape
    if seed >= 0:
        np.random.seed(seed)
    return sim_shot(circ, p, re_, eta, imperfect, tailored,
                    forced, t_kind, t_pauli, t_leak_anc, t_ontime, t_induced,
                    t_el_a, t_el_d, t_meas, t_el_end,
                    fx, fz, leaked, oleak_r, oleak_j, mflip, flags)


@njit(cache=True)
def build_syndrome(mflip, brow, R, n_anc, syn):
    """Detector bits for one basis: XOR of consecutive outcome flips."""
    nfired = 0
    for ai in range(n_anc):
        b = brow[ai]
        if b < 0:
            continue
        prev = np.uint8(0)
        for r in range(R + 1):
            cur = mflip[ai, r]
            det = cur ^ prev
            syn[b * (R + 1) + r] = det
            if det:
                nfired += 1
            prev = cur
    return nfired


@njit(cache=True, inline="always")
def _combine(p1, p2):
    return p1 * (1.0 - p2) + p2 * (1.0 - p1)


@njit(cache=True)
def apply_overlay(flags, nf, G, R, anc_row, g_data,
                  gs_ptr, gs_eid, gw_ptr, gw_eid, gw_p,
                  ms_ptr, ms_eid, es_ptr, es_eid,
                  ep, ew, w, dp, smark, touched):
    """Overlay strong/weak erasure weights for one shot's flags onto a
    copy of the static weights.  ``w``/``dp``/``smark``/``touched`` are
    per-shot scratch arrays; ``w`` and ``dp`` must be copies of the
    static weights/probabilities on entry."""
    ntouch = 0
    for f in range(nf):
        kind = flags[f, 0]
        if kind == FLAG_GATE:
            r = flags[f, 1]
            j = flags[f, 2]
            q = flags[f, 3]
            v = 1 if q == g_data[j] else 0
            idx = (r * G + j) * 2 + v
            for k in range(gs_ptr[idx], gs_ptr[idx + 1]):
                e = gs_eid[k]
                if not smark[e]:
                    smark[e] = 1
                    w[e] = 0.0
            for k in range(gw_ptr[idx], gw_ptr[idx + 1]):
                e = gw_eid[k]
                dp[e] = _combine(dp[e], gw_p[k])
                touched[ntouch] = e
                ntouch += 1
        elif kind == FLAG_MEASUREMENT:
            idx = anc_row[flags[f, 3]] * R + flags[f, 1]
            for k in range(ms_ptr[idx], ms_ptr[idx + 1]):
                e = ms_eid[k]
                if not smark[e]:
                    smark[e] = 1
                    w[e] = 0.0
        else:
            idx = flags[f, 3]
            for k in range(es_ptr[idx], es_ptr[idx + 1]):
                e = es_eid[k]
                if not smark[e]:
                    smark[e] = 1
                    w[e] = 0.0
    for t in range(ntouch):
        e = touched[t]
        if not smark[e]:
            pe = dp[e]
            if pe <= 0.0:
                w[e] = INF_WEIGHT
            elif pe >= 0.5:
                w[e] = 0.0
            else:
                w[e] = np.log((1.0 - pe) / pe)


@njit(cache=True, inline="always")
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def uf_decode(n_vert, eu, ev, elog, adj_ptr, adj_eid, w, syn,
              parent, rank, par, bnd, bedge, remaining, state,
              inw, watch, queue, pedge, pvert, order, pend, chk, corr):
    """Weighted union-find decode of one syndrome.

    Returns (logical_parity, n_correction_edges, ok).  ``ok`` is false
    only on internal inconsistency (odd cluster without boundary, or
    correction syndrome mismatch) — it should never happen for valid
    inputs and is monitored by the Monte Carlo driver.

    Scratch arrays: parent/rank/par/bnd/bedge/pedge/pvert/pend/chk over
    vertices, remaining/state/inw over edges, watch/queue/order/corr
    sized to edges+vertices.
    """
    E = eu.shape[0]
    for v in range(n_vert):
        parent[v] = v
        rank[v] = 0
        par[v] = syn[v]
        bnd[v] = 0
        bedge[v] = -1
        pend[v] = syn[v]
        chk[v] = 0
        pedge[v] = -1
        pvert[v] = -1
    nwatch = 0
    for e in range(E):
        remaining[e] = w[e]
        state[e] = 0
        inw[e] = 0

    # Pre-merge fully-grown (weight-0 / strongly erased) edges.
    for e in range(E):
        if remaining[e] <= 0.0:
            state[e] = 2
            u = eu[e]
            v = ev[e]
            ru = _find(parent, u)
            if v < 0:
                bnd[ru] = 1
                if bedge[ru] < 0:
                    bedge[ru] = e
            else:
                rv = _find(parent, v)
                if ru != rv:
                    if rank[ru] < rank[rv] or (rank[ru] == rank[rv] and rv < ru):
                        ru, rv = rv, ru
                    parent[rv] = ru
                    if rank[ru] == rank[rv]:
                        rank[ru] += 1
                    par[ru] ^= par[rv]
                    bnd[ru] |= bnd[rv]
                    if bedge[ru] < 0:
                        bedge[ru] = bedge[rv]

    # Watch list: edges adjacent to fired vertices and to endpoints of
    # pre-merged edges (clusters may span weight-0 chains).
    for v in range(n_vert):
        if syn[v]:
            for k in range(adj_ptr[v], adj_ptr[v + 1]):
                e = adj_eid[k]
                if not inw[e]:
                    inw[e] = 1
                    watch[nwatch] = e
                    nwatch += 1
    for e in range(E):
        if state[e] == 2:
            for x in (eu[e], ev[e]):
                if x >= 0:
                    for k in range(adj_ptr[x], adj_ptr[x + 1]):
                        e2 = adj_eid[k]
                        if not inw[e2]:
                            inw[e2] = 1
                            watch[nwatch] = e2
                            nwatch += 1

    # Event-driven growth: all frontier edges of active clusters advance
    # by the minimal remaining increment; filled edges merge clusters.
    ok = True
    while True:
        best = INF_WEIGHT * 1.0e6
        found = False
        for t in range(nwatch):
            e = watch[t]
            if state[e] == 2:
                continue
            ru = _find(parent, eu[e])
            sides = 0
            if par[ru] == 1 and bnd[ru] == 0:
                sides += 1
            if ev[e] >= 0:
                rv = _find(parent, ev[e])
                if par[rv] == 1 and bnd[rv] == 0:
                    sides += 1
            if sides == 0:
                continue
            found = True
            d = remaining[e] / sides
            if d < best:
                best = d
        if not found:
            break
        # Advance and collect newly full edges (ties by edge order,
        # which the watch list preserves by insertion; merge order uses
        # ascending edge index for determinism).
        nfull = 0
        for t in range(nwatch):
            e = watch[t]
            if state[e] == 2:
                continue
            ru = _find(parent, eu[e])
            sides = 0
            if par[ru] == 1 and bnd[ru] == 0:
                sides += 1
            if ev[e] >= 0:
                rv = _find(parent, ev[e])
                if par[rv] == 1 and bnd[rv] == 0:
                    sides += 1
            if sides == 0:
                continue
            remaining[e] -= best * sides
            if remaining[e] <= 0.0:
                state[e] = 1  # full this step, merge below
                order[nfull] = e
                nfull += 1
        # Merge in ascending edge index.
        for i in range(nfull - 1):
            for k in range(nfull - 1 - i):
                if order[k] > order[k + 1]:
                    order[k], order[k + 1] = order[k + 1], order[k]
        for i in range(nfull):
            e = order[i]
            state[e] = 2
            u = eu[e]
            v = ev[e]
            ru = _find(parent, u)
            if v < 0:
                bnd[ru] = 1
                if bedge[ru] < 0:
                    bedge[ru] = e
            else:
                rv = _find(parent, v)
                if ru != rv:
                    if rank[ru] < rank[rv] or (rank[ru] == rank[rv] and rv < ru):
                        ru, rv = rv, ru
                    parent[rv] = ru
                    if rank[ru] == rank[rv]:
                        rank[ru] += 1
                    par[ru] ^= par[rv]
                    bnd[ru] |= bnd[rv]
                    if bedge[ru] < 0:
                        bedge[ru] = bedge[rv]
            for x in (u, v):
                if x >= 0:
                    for k in range(adj_ptr[x], adj_ptr[x + 1]):
                        e2 = adj_eid[k]
                        if not inw[e2]:
                            inw[e2] = 1
                            watch[nwatch] = e2
                            nwatch += 1

    # Verify neutrality.
    for v in range(n_vert):
        if syn[v]:
            rv = _find(parent, v)
            if par[rv] == 1 and bnd[rv] == 0:
                ok = False

    # Peel each cluster containing fired vertices: build a spanning
    # tree over full edges (rooted at a boundary attachment when the
    # cluster has one) and select edges leaf-first.
    log = np.uint8(0)
    ncorr = 0
    for v0 in range(n_vert):
        if not syn[v0]:
            continue
        if chk[v0]:
            continue
        rv = _find(parent, v0)
        start = v0
        be = bedge[rv]
        if be >= 0:
            start = eu[be]
        # BFS over full edges.
        norder = 0
        qh = 0
        qt = 0
        queue[qt] = start
        qt += 1
        chk[start] = 1
        pedge[start] = -1
        pvert[start] = -1
        while qh < qt:
            x = queue[qh]
            qh += 1
            order[norder] = x
            norder += 1
            for k in range(adj_ptr[x], adj_ptr[x + 1]):
                e = adj_eid[k]
                if state[e] != 2:
                    continue
                y = ev[e] if eu[e] == x else eu[e]
                if y < 0 or chk[y]:
                    continue
                chk[y] = 1
                pedge[y] = e
                pvert[y] = x
                queue[qt] = y
                qt += 1
        for i in range(norder - 1, 0, -1):
            x = order[i]
            if pend[x]:
                e = pedge[x]
                corr[ncorr] = e
                ncorr += 1
                log ^= elog[e]
                pend[x] = 0
                pend[pvert[x]] ^= 1
        if pend[start]:
            if be >= 0:
                corr[ncorr] = be
                ncorr += 1
                log ^= elog[be]
                pend[start] = 0
            else:
                ok = False

    # Correction-syndrome check: the selected edges must reproduce the
    # input syndrome exactly.  chk is done serving as the BFS visited
    # marker and is reused as the recomputed syndrome accumulator.
    for v in range(n_vert):
        chk[v] = 0
    for i in range(ncorr):
        e = corr[i]
        chk[eu[e]] ^= 1
        if ev[e] >= 0:
            chk[ev[e]] ^= 1
    for v in range(n_vert):
        if chk[v] != syn[v]:
            ok = False
    return log, ncorr, ok


@njit(cache=True)
def pipeline_shot(circ, graph, tables, p, re_, eta, imperfect, tailored,
                  use_x_readout, forced, tape, seed):
    """Simulate, overlay, and decode one shot; returns (fail, ok)."""
    (R, G, nq, n_anc, g_anc, g_data, g_iscx, anc_row, row_anc, row_isx,
     sup_ptr, sup_dat, is_lx, is_lz, is_data) = circ
    (n_vert, eu, ev, elog, ep, ew, adj_ptr, adj_eid, brow) = graph
    (gs_ptr, gs_eid, gw_ptr, gw_eid, gw_p,
     ms_ptr, ms_eid, es_ptr, es_eid) = tables
    (t_kind, t_pauli, t_leak_anc, t_ontime, t_induced,
     t_el_a, t_el_d, t_meas, t_el_end) = tape
    if seed >= 0:
        np.random.seed(seed)
    E = eu.shape[0]

    fx = np.zeros(nq, dtype=np.uint8)
    fz = np.zeros(nq, dtype=np.uint8)
    leaked = np.zeros(nq, dtype=np.uint8)
    oleak_r = np.zeros(nq, dtype=np.int32)
    oleak_j = np.zeros(nq, dtype=np.int32)
    mflip = np.zeros((n_anc, R + 1), dtype=np.uint8)
    flags = np.zeros((2 * R * G + n_anc * R + nq, 6), dtype=np.int32)

    nf, xl, zl = sim_shot(circ, p, re_, eta, imperfect, tailored,
                          forced, t_kind, t_pauli, t_leak_anc, t_ontime,
                          t_induced, t_el_a, t_el_d, t_meas, t_el_end,
                          fx, fz, leaked, oleak_r, oleak_j, mflip, flags)
    true_flip = xl if use_x_readout else zl

    syn = np.zeros(n_vert, dtype=np.uint8)
    nfired = build_syndrome(mflip, brow, R, n_anc, syn)
    if nfired == 0:
        return true_flip, True

    w = ew.copy()
    if nf > 0:
        dp = ep.copy()
        smark = np.zeros(E, dtype=np.uint8)
        touched = np.zeros(8 * nf + 16, dtype=np.int32)
        apply_overlay(flags, nf, G, R, anc_row, g_data,
                      gs_ptr, gs_eid, gw_ptr, gw_eid, gw_p,
                      ms_ptr, ms_eid, es_ptr, es_eid,
                      ep, ew, w, dp, smark, touched)

    parent = np.zeros(n_vert, dtype=np.int32)
    rank = np.zeros(n_vert, dtype=np.int32)
    par = np.zeros(n_vert, dtype=np.uint8)
    bnd = np.zeros(n_vert, dtype=np.uint8)
    bedge = np.zeros(n_vert, dtype=np.int32)
    remaining = np.zeros(E, dtype=np.float64)
    state = np.zeros(E, dtype=np.uint8)
    inw = np.zeros(E, dtype=np.uint8)
    cap = E if E > n_vert else n_vert
    watch = np.zeros(cap + 1, dtype=np.int32)
    queue = np.zeros(n_vert, dtype=np.int32)
    pedge = np.zeros(n_vert, dtype=np.int32)
    pvert = np.zeros(n_vert, dtype=np.int32)
    order = np.zeros(cap + 1, dtype=np.int32)
    pend = np.zeros(n_vert, dtype=np.uint8)
    chk = np.zeros(n_vert, dtype=np.uint8)
    corr = np.zeros(E, dtype=np.int32)
    log, _ncorr, ok = uf_decode(n_vert, eu, ev, elog, adj_ptr, adj_eid, w, syn,
                                parent, rank, par, bnd, bedge, remaining, state,
                                inw, watch, queue, pedge, pvert, order, pend,
                                chk, corr)
    return true_flip ^ log, ok


@njit(cache=True, parallel=True)
def mc_run(circ, graph, tables, p, re_, eta, imperfect, tailored,
           use_x_readout, shots, master_seed, empty_tape):
    """Monte Carlo over independent seeded shots; returns (failures,
    decode_inconsistencies)."""
    failures = 0
    bad = 0
    for s in prange(shots):
        seed = _mix_seed(master_seed, s)
        fail, ok = pipeline_shot(circ, graph, tables, p, re_, eta,
                                 imperfect, tailored, use_x_readout,
                                 False, empty_tape, seed)
        failures += np.int64(fail)
        if not ok:
            bad += 1
    return failures, bad
