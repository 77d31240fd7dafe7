"""Hot numeric kernels, each with a loop version (numba) and a numpy version.

``simplex_game`` solves the matrix-game LP on a strictly positive payoff
matrix ``P`` (m designs x n states):

    maximize  sum(x)  subject to  P.T @ x <= 1,  x >= 0

``x / sum(x)`` is the designer's optimal mixture, the dual ``y / sum(y)``
the adversary's, and ``1 / sum(x)`` the game value of ``P``. The origin is
feasible, so no phase one is needed. Pricing is Dantzig's rule, switching
to Bland's rule after a run of degenerate pivots.
"""
import numpy as np

from ._accel import BACKEND, NUMBA_AVAILABLE, maybe_njit

STATUS_OPTIMAL = 0
STATUS_ITER_LIMIT = 1
STATUS_BREAKDOWN = 2

_DEGENERATE_RUN = 25


def _simplex_game_loops(P, max_iter, eps):
    m, n = P.shape
    ncol = m + n + 1
    T = np.zeros((n + 1, ncol))
    for j in range(n):
        for i in range(m):
            T[j, i] = P[i, j]
        T[j, m + j] = 1.0
        T[j, ncol - 1] = 1.0
    for i in range(m):
        T[n, i] = -1.0
    basis = np.empty(n, dtype=np.int64)
    for j in range(n):
        basis[j] = m + j

    it = 0
    degenerate = 0
    status = STATUS_ITER_LIMIT
    while it < max_iter:
        e = -1
        if degenerate < _DEGENERATE_RUN:
            best = -eps
            for c in range(m + n):
                if T[n, c] < best:
                    best = T[n, c]
                    e = c
        else:
            for c in range(m + n):
                if T[n, c] < -eps:
                    e = c
                    break
        if e < 0:
            status = STATUS_OPTIMAL
            break
        r = -1
        best_ratio = np.inf
        for row in range(n):
            a = T[row, e]
            if a > eps:
                q = T[row, ncol - 1] / a
                if q < best_ratio or (q == best_ratio and basis[row] < basis[r]):
                    best_ratio = q
                    r = row
        if r < 0:
            status = STATUS_BREAKDOWN
            break
        if best_ratio <= eps:
            degenerate += 1
        else:
            degenerate = 0
        piv = T[r, e]
        for c in range(ncol):
            T[r, c] /= piv
        for row in range(n + 1):
            if row != r:
                f = T[row, e]
                if f != 0.0:
                    for c in range(ncol):
                        T[row, c] -= f * T[r, c]
        basis[r] = e
        it += 1

    x = np.zeros(m)
    for row in range(n):
        if basis[row] < m:
            x[basis[row]] = T[row, ncol - 1]
    y = np.empty(n)
    for j in range(n):
        y[j] = T[n, m + j]
    return x, y, it, status


def _simplex_game_numpy(P, max_iter, eps):
    m, n = P.shape
    ncol = m + n + 1
    T = np.zeros((n + 1, ncol))
    T[:n, :m] = P.T
    T[:n, m:m + n] = np.eye(n)
    T[:n, -1] = 1.0
    T[n, :m] = -1.0
    basis = np.arange(m, m + n)

    it = 0
    degenerate = 0
    status = STATUS_ITER_LIMIT
    while it < max_iter:
        obj = T[n, :m + n]
        if degenerate < _DEGENERATE_RUN:
            e = int(np.argmin(obj))
            if obj[e] >= -eps:
                status = STATUS_OPTIMAL
                break
        else:
            neg = np.flatnonzero(obj < -eps)
            if neg.size == 0:
                status = STATUS_OPTIMAL
                break
            e = int(neg[0])
        col = T[:n, e]
        rows = np.flatnonzero(col > eps)
        if rows.size == 0:
            status = STATUS_BREAKDOWN
            break
        q = T[rows, -1] / col[rows]
        qmin = q.min()
        cand = rows[q == qmin]
        r = int(cand[np.argmin(basis[cand])])
        degenerate = degenerate + 1 if qmin <= eps else 0
        T[r] /= T[r, e]
        f = T[:, e].copy()
        f[r] = 0.0
        T -= np.outer(f, T[r])
        basis[r] = e
        it += 1

    x = np.zeros(m)
    in_x = basis < m
    x[basis[in_x]] = T[:n, -1][in_x]
    y = T[n, m:m + n].copy()
    return x, y, it, status


def _roe_over_mixtures_loops(beta_row, alg_row, W):
    k, n = W.shape
    out = np.empty(k)
    for s in range(k):
        num = 0.0
        den = 0.0
        for j in range(n):
            num += W[s, j] * beta_row[j]
            den += W[s, j] * alg_row[j]
        out[s] = num / den
    return out


def _roe_over_mixtures_numpy(beta_row, alg_row, W):
    return (W @ beta_row) / (W @ alg_row)


def _eor_over_mixtures_loops(ratio_row, W):
    k, n = W.shape
    out = np.empty(k)
    for s in range(k):
        acc = 0.0
        for j in range(n):
            acc += W[s, j] * ratio_row[j]
        out[s] = acc
    return out


def _eor_over_mixtures_numpy(ratio_row, W):
    return W @ ratio_row


simplex_game_numba = maybe_njit(_simplex_game_loops)
roe_over_mixtures_numba = maybe_njit(_roe_over_mixtures_loops)
eor_over_mixtures_numba = maybe_njit(_eor_over_mixtures_loops)

KERNELS = {
    "numpy": {
        "simplex_game": _simplex_game_numpy,
        "roe_over_mixtures": _roe_over_mixtures_numpy,
        "eor_over_mixtures": _eor_over_mixtures_numpy,
    },
}
if NUMBA_AVAILABLE:
    KERNELS["numba"] = {
        "simplex_game": simplex_game_numba,
        "roe_over_mixtures": roe_over_mixtures_numba,
        "eor_over_mixtures": eor_over_mixtures_numba,
    }

simplex_game = KERNELS[BACKEND]["simplex_game"]
roe_over_mixtures = KERNELS[BACKEND]["roe_over_mixtures"]
eor_over_mixtures = KERNELS[BACKEND]["eor_over_mixtures"]
