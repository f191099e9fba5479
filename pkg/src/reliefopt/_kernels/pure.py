"""Pure numpy reference implementations of the hot kernels.

The compiled module in ``_native.pyx`` mirrors these signatures exactly;
`reliefopt._kernels` picks one backend at import time.
"""
from __future__ import annotations

import numpy as np


def evaluate_flows(open_mask, flow_in, flow_out, setup_cost, penalty, demand,
                   cost_in, cost_out, time_in, time_out, tol):
    """Return (f1, f2, f3) for the given open vector and flow tensors."""
    delivered = flow_out.sum(axis=1)                      # (M, K)
    shortage = np.clip(demand - delivered, 0.0, None)
    f1 = float(np.sum(penalty[None, :] * shortage))
    f2 = float(np.sum(cost_in * flow_in.sum(axis=0))
               + np.sum(cost_out * flow_out.sum(axis=0))
               + setup_cost @ (open_mask != 0))
    f3 = float(time_in[flow_in > tol].sum() + time_out[flow_out > tol].sum())
    return f1, f2, f3


def greedy_fill(arc_order, open_mask, admissible, demand, supply,
                cap_in, cap_out, vehicle_cap, supplier_order,
                flow_in, flow_out):
    """Saturating greedy construction of outbound flows with inbound backing.

    Outbound arcs are visited in ``arc_order`` (flat (m,j,k) indices).  Each
    admissible arc of an open center is pushed to the largest volume that the
    remaining demand, arc capacity, vehicle capacity and inbound availability
    allow.  Inbound goods are drawn from suppliers in ``supplier_order``
    (cheapest first per center), so the construction is always feasible.
    ``flow_in`` and ``flow_out`` are filled in place.
    """
    n_m, n_j, n_k = flow_out.shape
    n_i = flow_in.shape[1]
    d_left = demand.copy()
    s_left = supply.copy()
    v_left = vehicle_cap.copy()
    qcap_left = np.tile(cap_in, (n_m, 1, 1))

    for flat in arc_order:
        m, rem = divmod(int(flat), n_j * n_k)
        j, k = divmod(rem, n_k)
        if not open_mask[j] or not admissible[m, j, k]:
            continue
        room = min(d_left[m, k], cap_out[j, k], v_left[m])
        if room <= 0.0:
            continue
        avail = np.minimum(qcap_left[m, :, j], s_left[m, :]).sum()
        push = min(room, avail)
        if push <= 0.0:
            continue
        flow_out[m, j, k] += push
        d_left[m, k] -= push
        v_left[m] -= push
        need = push
        for i in supplier_order[j]:
            take = min(need, qcap_left[m, i, j], s_left[m, i])
            if take <= 0.0:
                continue
            flow_in[m, i, j] += take
            qcap_left[m, i, j] -= take
            s_left[m, i] -= take
            need -= take
            if need <= 0.0:
                break


def domination_matrix(objectives):
    """uint8 (n, n) matrix with dom[p, q] = 1 iff point p dominates point q."""
    a = objectives[:, None, :]
    b = objectives[None, :, :]
    le_all = np.all(a <= b, axis=2)
    lt_any = np.any(a < b, axis=2)
    return (le_all & lt_any).astype(np.uint8)
