# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled mixing kernels; semantics match kernels._mix_py exactly.

The per-column update and its adjoint are plain nested loops over (k, m);
at the sizes this layer runs at (k tens, m hundreds) that beats BLAS-call
overhead and keeps both backends easy to diff against each other.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

DEGENERATE_EPS = 1e-12
cdef double _DEG_EPS = 1e-12


def mix_forward(S, V, update_cols, int max_sweeps, double tol, bint record):
    S = np.ascontiguousarray(S, dtype=np.float64)
    cdef double[:, ::1] Sv = S
    cdef double[:, :, ::1] Vv = V
    cdef cnp.int64_t[::1] cols = np.ascontiguousarray(update_cols, dtype=np.int64)

    cdef Py_ssize_t m = Sv.shape[0], N = Sv.shape[1]
    cdef Py_ssize_t B = Vv.shape[0], k = Vv.shape[1]
    if Vv.shape[2] != N:
        raise ValueError(f"S has {N} columns but V has {Vv.shape[2]}")
    cdef Py_ssize_t n_up = cols.shape[0]

    csq_arr = np.einsum("mi,mi->i", S, S)
    cdef double[::1] csq = csq_arr
    Phi_arr = np.einsum("bki,mi->bkm", np.asarray(V), S)
    Phi_arr = np.ascontiguousarray(Phi_arr)
    cdef double[:, :, ::1] Phi = Phi_arr

    trace_arr = np.zeros((B, max_sweeps + 1))
    cdef double[:, ::1] trace = trace_arr
    vprev_arr = np.zeros((B, max_sweeps, n_up, k)) if record else None
    gnorm_arr = np.zeros((B, max_sweeps, n_up)) if record else None
    cdef double[:, :, :, ::1] vprev = vprev_arr if record else None
    cdef double[:, :, ::1] gnorm = gnorm_arr if record else None
    deg_arr = np.zeros(B, dtype=np.int64)
    cdef cnp.int64_t[::1] degenerate = deg_arr

    cdef double[::1] g = np.zeros(k)
    cdef Py_ssize_t sweep, u, i, b, kk, mm
    cdef double gn, acc, sij, vn, dvk, decrease
    cdef int executed = 0

    for b in range(B):
        acc = 0.0
        for kk in range(k):
            for mm in range(m):
                acc += Phi[b, kk, mm] * Phi[b, kk, mm]
        trace[b, 0] = acc

    for sweep in range(max_sweeps):
        for u in range(n_up):
            i = cols[u]
            for b in range(B):
                gn = 0.0
                for kk in range(k):
                    acc = 0.0
                    for mm in range(m):
                        acc += Phi[b, kk, mm] * Sv[mm, i]
                    acc -= csq[i] * Vv[b, kk, i]
                    g[kk] = acc
                    gn += acc * acc
                gn = sqrt(gn)
                if record:
                    for kk in range(k):
                        vprev[b, sweep, u, kk] = Vv[b, kk, i]
                if gn <= _DEG_EPS:
                    degenerate[b] += 1
                    if record:
                        gnorm[b, sweep, u] = 0.0
                    continue
                if record:
                    gnorm[b, sweep, u] = gn
                for kk in range(k):
                    vn = -g[kk] / gn
                    dvk = vn - Vv[b, kk, i]
                    Vv[b, kk, i] = vn
                    for mm in range(m):
                        Phi[b, kk, mm] += dvk * Sv[mm, i]
        decrease = 0.0
        for b in range(B):
            acc = 0.0
            for kk in range(k):
                for mm in range(m):
                    acc += Phi[b, kk, mm] * Phi[b, kk, mm]
            trace[b, sweep + 1] = acc
            if trace[b, sweep] - acc > decrease:
                decrease = trace[b, sweep] - acc
        executed = sweep + 1
        if tol > 0 and decrease < tol:
            break

    out_trace = trace_arr[:, :executed + 1].copy()
    if record:
        vprev_arr = vprev_arr[:, :executed].copy()
        gnorm_arr = gnorm_arr[:, :executed].copy()
    return executed, out_trace, vprev_arr, gnorm_arr, deg_arr


def mix_backward(S, V, update_cols, vprev, gnorm, Vbar):
    S = np.ascontiguousarray(S, dtype=np.float64)
    cdef double[:, ::1] Sv = S
    cdef double[:, :, ::1] Vv = V
    cdef double[:, :, ::1] Vbarv = Vbar
    cdef double[:, :, :, ::1] vprevv = vprev
    cdef double[:, :, ::1] gnormv = gnorm
    cdef cnp.int64_t[::1] cols = np.ascontiguousarray(update_cols, dtype=np.int64)

    cdef Py_ssize_t m = Sv.shape[0], N = Sv.shape[1]
    cdef Py_ssize_t B = Vv.shape[0], k = Vv.shape[1]
    cdef Py_ssize_t executed = gnormv.shape[1], n_up = gnormv.shape[2]

    csq_arr = np.einsum("mi,mi->i", S, S)
    cdef double[::1] csq = csq_arr
    Phi_arr = np.ascontiguousarray(np.einsum("bki,mi->bkm", np.asarray(V), S))
    cdef double[:, :, ::1] Phi = Phi_arr
    Phibar_arr = np.zeros_like(Phi_arr)
    cdef double[:, :, ::1] Phibar = Phibar_arr
    Sbar_arr = np.zeros_like(S)
    cdef double[:, ::1] Sbar = Sbar_arr

    cdef double[::1] tmp = np.zeros(k)
    cdef double[::1] vbar_new = np.zeros(k)
    cdef double[::1] gbar = np.zeros(k)
    cdef Py_ssize_t sweep, u, i, b, kk, mm
    cdef double gn, acc, dot, dvk, coeff

    for sweep in range(executed - 1, -1, -1):
        for u in range(n_up - 1, -1, -1):
            i = cols[u]
            for b in range(B):
                gn = gnormv[b, sweep, u]
                if gn <= 0.0:
                    continue
                # Reverse Phi += dv s^T  (dv = vnew - vold).
                for kk in range(k):
                    acc = 0.0
                    for mm in range(m):
                        acc += Phibar[b, kk, mm] * Sv[mm, i]
                    tmp[kk] = acc
                    vbar_new[kk] = Vbarv[b, kk, i] + acc
                for kk in range(k):
                    dvk = Vv[b, kk, i] - vprevv[b, sweep, u, kk]
                    for mm in range(m):
                        Sbar[mm, i] += Phibar[b, kk, mm] * dvk
                        Phi[b, kk, mm] -= dvk * Sv[mm, i]
                # Reverse vnew = -g / |g|.
                dot = 0.0
                for kk in range(k):
                    dot += Vv[b, kk, i] * vbar_new[kk]
                for kk in range(k):
                    gbar[kk] = -(vbar_new[kk] - Vv[b, kk, i] * dot) / gn
                # Reverse g = Phi_before s - csq_i vold.
                coeff = 0.0
                for kk in range(k):
                    coeff += gbar[kk] * vprevv[b, sweep, u, kk]
                    for mm in range(m):
                        Phibar[b, kk, mm] += gbar[kk] * Sv[mm, i]
                        Sbar[mm, i] += Phi[b, kk, mm] * gbar[kk]
                for mm in range(m):
                    Sbar[mm, i] -= 2.0 * coeff * Sv[mm, i]
                for kk in range(k):
                    Vbarv[b, kk, i] = -tmp[kk] - csq[i] * gbar[kk]
                    Vv[b, kk, i] = vprevv[b, sweep, u, kk]
    # Reverse Phi_0 = V_0 S^T.
    Vbar += np.einsum("bkm,mi->bki", Phibar_arr, S)
    Sbar_arr += np.einsum("bkm,bki->mi", Phibar_arr, np.asarray(V))
    return Sbar_arr
