# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``pure.py``."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def evaluate_flows(const unsigned char[::1] open_mask,
                   const double[:, :, ::1] flow_in,
                   const double[:, :, ::1] flow_out,
                   const double[::1] setup_cost,
                   const double[::1] penalty,
                   const double[:, ::1] demand,
                   const double[:, ::1] cost_in,
                   const double[:, ::1] cost_out,
                   const double[:, :, ::1] time_in,
                   const double[:, :, ::1] time_out,
                   double tol):
    cdef Py_ssize_t n_m = flow_in.shape[0]
    cdef Py_ssize_t n_i = flow_in.shape[1]
    cdef Py_ssize_t n_j = flow_in.shape[2]
    cdef Py_ssize_t n_k = flow_out.shape[2]
    cdef Py_ssize_t m, i, j, k
    cdef double f1 = 0.0, f2 = 0.0, f3 = 0.0
    cdef double short_, v

    for m in range(n_m):
        for k in range(n_k):
            short_ = demand[m, k]
            for j in range(n_j):
                short_ -= flow_out[m, j, k]
            if short_ > 0.0:
                f1 += penalty[k] * short_
    for j in range(n_j):
        if open_mask[j]:
            f2 += setup_cost[j]
    for m in range(n_m):
        for i in range(n_i):
            for j in range(n_j):
                v = flow_in[m, i, j]
                if v != 0.0:
                    f2 += cost_in[i, j] * v
                if v > tol:
                    f3 += time_in[m, i, j]
        for j in range(n_j):
            for k in range(n_k):
                v = flow_out[m, j, k]
                if v != 0.0:
                    f2 += cost_out[j, k] * v
                if v > tol:
                    f3 += time_out[m, j, k]
    return f1, f2, f3


def greedy_fill(const long long[::1] arc_order,
                const unsigned char[::1] open_mask,
                const unsigned char[:, :, ::1] admissible,
                const double[:, ::1] demand,
                const double[:, ::1] supply,
                const double[:, ::1] cap_in,
                const double[:, ::1] cap_out,
                const double[::1] vehicle_cap,
                const long long[:, ::1] supplier_order,
                double[:, :, ::1] flow_in,
                double[:, :, ::1] flow_out):
    cdef Py_ssize_t n_m = flow_out.shape[0]
    cdef Py_ssize_t n_j = flow_out.shape[1]
    cdef Py_ssize_t n_k = flow_out.shape[2]
    cdef Py_ssize_t n_i = flow_in.shape[1]
    cdef Py_ssize_t t, m, j, k, i, pos
    cdef long long flat
    cdef double room, avail, push, need, take

    d_left = np.array(demand, dtype=np.float64)
    s_left = np.array(supply, dtype=np.float64)
    v_left = np.array(vehicle_cap, dtype=np.float64)
    qcap = np.empty((n_m, n_i, n_j), dtype=np.float64)
    qcap[:] = np.asarray(cap_in)[None, :, :]

    cdef double[:, ::1] d_left_v = d_left
    cdef double[:, ::1] s_left_v = s_left
    cdef double[::1] v_left_v = v_left
    cdef double[:, :, ::1] qcap_v = qcap

    for t in range(arc_order.shape[0]):
        flat = arc_order[t]
        m = flat // (n_j * n_k)
        j = (flat // n_k) % n_j
        k = flat % n_k
        if not open_mask[j] or not admissible[m, j, k]:
            continue
        room = d_left_v[m, k]
        if cap_out[j, k] < room:
            room = cap_out[j, k]
        if v_left_v[m] < room:
            room = v_left_v[m]
        if room <= 0.0:
            continue
        avail = 0.0
        for i in range(n_i):
            if qcap_v[m, i, j] < s_left_v[m, i]:
                avail += qcap_v[m, i, j]
            else:
                avail += s_left_v[m, i]
        push = room if room < avail else avail
        if push <= 0.0:
            continue
        flow_out[m, j, k] += push
        d_left_v[m, k] -= push
        v_left_v[m] -= push
        need = push
        for pos in range(n_i):
            i = supplier_order[j, pos]
            take = need
            if qcap_v[m, i, j] < take:
                take = qcap_v[m, i, j]
            if s_left_v[m, i] < take:
                take = s_left_v[m, i]
            if take <= 0.0:
                continue
            flow_in[m, i, j] += take
            qcap_v[m, i, j] -= take
            s_left_v[m, i] -= take
            need -= take
            if need <= 0.0:
                break


def domination_matrix(const double[:, ::1] objectives):
    cdef Py_ssize_t n = objectives.shape[0]
    cdef Py_ssize_t d = objectives.shape[1]
    cdef Py_ssize_t p, q, c
    cdef bint le_all, lt_any
    out = np.zeros((n, n), dtype=np.uint8)
    cdef unsigned char[:, ::1] out_v = out
    for p in range(n):
        for q in range(n):
            if p == q:
                continue
            le_all = True
            lt_any = False
            for c in range(d):
                if objectives[p, c] > objectives[q, c]:
                    le_all = False
                    break
                if objectives[p, c] < objectives[q, c]:
                    lt_any = True
            if le_all and lt_any:
                out_v[p, q] = 1
    return out
