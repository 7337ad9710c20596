"""Pure-numpy mixing kernels (fallback when the compiled extension is absent).

Both backends implement the same two entry points with identical semantics:

``mix_forward``  - batched Gauss-Seidel coordinate descent on the unit-column
                   relaxation objective |S V^T|_F^2, updating the listed
                   columns in ascending order and optionally recording what
                   the reverse pass needs.
``mix_backward`` - exact reverse-mode adjoint of the recorded update
                   sequence, rolling the state back to its initial value.

Shapes: S is (m, N) with N = n+1 (column 0 is the truth direction), V is
(B, k, N).  Everything is float64 and C-contiguous.
"""

import numpy as np

# Update directions with norm at or below this are treated as degenerate:
# the column is left unchanged and the event is counted.
DEGENERATE_EPS = 1e-12


def mix_forward(S, V, update_cols, max_sweeps, tol, record):
    """Run up to ``max_sweeps`` full sweeps; V is modified in place.

    Stops early after a sweep when every sample's objective decrease over
    that sweep is below ``tol`` (tol <= 0 disables early stopping).

    Returns ``(executed, trace, vprev, gnorm, degenerate)`` where ``trace``
    has shape (B, executed+1) and, when ``record`` is true, ``vprev`` /
    ``gnorm`` hold the pre-update column values and update-direction norms
    with shapes (B, executed, n_up, k) and (B, executed, n_up).
    """
    S = np.ascontiguousarray(S, dtype=np.float64)
    m, N = S.shape
    B, k, N2 = V.shape
    if N2 != N:
        raise ValueError(f"S has {N} columns but V has {N2}")
    cols = np.asarray(update_cols, dtype=np.int64)
    n_up = cols.shape[0]

    csq = (S * S).sum(axis=0)
    Phi = np.einsum("bkn,mn->bkm", V, S)
    Phi = np.ascontiguousarray(Phi)
    Phi2 = Phi.reshape(B * k, m)

    trace = [np.einsum("bkm,bkm->b", Phi, Phi)]
    vprev = np.zeros((B, max_sweeps, n_up, k)) if record else None
    gnorm = np.zeros((B, max_sweeps, n_up)) if record else None
    degenerate = np.zeros(B, dtype=np.int64)

    executed = 0
    for sweep in range(max_sweeps):
        for u in range(n_up):
            i = cols[u]
            s = S[:, i]
            vold = V[:, :, i].copy()
            g = (Phi2 @ s).reshape(B, k) - csq[i] * vold
            gn = np.sqrt(np.einsum("bk,bk->b", g, g))
            deg = gn <= DEGENERATE_EPS
            gn_safe = np.where(deg, 1.0, gn)
            vnew = np.where(deg[:, None], vold, -g / gn_safe[:, None])
            if record:
                vprev[:, sweep, u, :] = vold
                gnorm[:, sweep, u] = np.where(deg, 0.0, gn)
            degenerate += deg
            dv = vnew - vold
            Phi2 += dv.reshape(B * k, 1) * s
            V[:, :, i] = vnew
        trace.append(np.einsum("bkm,bkm->b", Phi, Phi))
        executed = sweep + 1
        if tol > 0 and np.max(trace[-2] - trace[-1]) < tol:
            break

    trace = np.stack(trace, axis=1)
    if record:
        vprev = vprev[:, :executed]
        gnorm = gnorm[:, :executed]
    return executed, trace, vprev, gnorm, degenerate


def mix_backward(S, V, update_cols, vprev, gnorm, Vbar):
    """Adjoint of ``mix_forward`` over the recorded updates.

    ``V`` must hold the final state; it is rolled back in place to the
    initial state.  ``Vbar`` enters as dL/dV_final and is overwritten with
    dL/dV_initial.  Returns dL/dS summed over the batch, shape (m, N).
    """
    S = np.ascontiguousarray(S, dtype=np.float64)
    m, N = S.shape
    B, k, _ = V.shape
    cols = np.asarray(update_cols, dtype=np.int64)
    executed, n_up = gnorm.shape[1], gnorm.shape[2]

    csq = (S * S).sum(axis=0)
    Phi = np.ascontiguousarray(np.einsum("bkn,mn->bkm", V, S))
    Phi2 = Phi.reshape(B * k, m)
    Phibar = np.zeros_like(Phi)
    Phibar2 = Phibar.reshape(B * k, m)
    Sbar = np.zeros_like(S)

    for sweep in range(executed - 1, -1, -1):
        for u in range(n_up - 1, -1, -1):
            i = cols[u]
            s = S[:, i]
            gn = gnorm[:, sweep, u]
            live = gn > 0.0
            gn_safe = np.where(live, gn, 1.0)
            vnew = V[:, :, i].copy()
            vold = vprev[:, sweep, u, :]
            dv = vnew - vold  # zero wherever the update was degenerate
            # Reverse Phi += dv s^T.
            tmp = (Phibar2 @ s).reshape(B, k)
            vbar_new = Vbar[:, :, i] + live[:, None] * tmp
            Sbar[:, i] += np.einsum("bkm,bk->m", Phibar, dv)
            Phi2 -= dv.reshape(B * k, 1) * s
            # Reverse vnew = -g / |g|.
            dot = np.einsum("bk,bk->b", vnew, vbar_new)
            gbar = np.where(live[:, None],
                            -(vbar_new - vnew * dot[:, None]) / gn_safe[:, None],
                            0.0)
            # Reverse g = Phi_before s - csq_i vold.
            Phibar2 += gbar.reshape(B * k, 1) * s
            Sbar[:, i] += np.einsum("bkm,bk->m", Phi, gbar)
            Sbar[:, i] -= 2.0 * np.einsum("bk,bk->", gbar, vold) * s
            Vbar[:, :, i] = np.where(live[:, None], -tmp - csq[i] * gbar,
                                     Vbar[:, :, i])
            V[:, :, i] = vold
    # Reverse Phi_0 = V_0 S^T: contributions to every column of V and S.
    Vbar += np.einsum("bkm,mn->bkn", Phibar, S)
    Sbar += np.einsum("bkm,bkn->mn", Phibar, V)
    return Sbar
