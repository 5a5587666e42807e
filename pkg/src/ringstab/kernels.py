"""Batched matrix kernels over table-driven finite rings.

Every kernel exists twice: a loop form compiled with numba and a vectorised
numpy form. ``RINGSTAB_NUMBA=0`` selects the numpy form; both must return
identical arrays (the test suite and ``benchmarks/bench_kernels.py`` compare
them directly).

Matrices are stacked as ``(N, n, n)`` integer arrays of element codes.
``add`` and ``mul`` are the ring's ``order x order`` operation tables.
"""
import numpy as np

from ._accel import njit, use_numba


# --------------------------------------------------------------------------
# numba kernels


@njit
def _matmul_pairs_nb(A, B, add, mul):
    N, n, _ = A.shape
    C = np.empty_like(A)
    for t in range(N):
        for i in range(n):
            for j in range(n):
                acc = mul[A[t, i, 0], B[t, 0, j]]
                for k in range(1, n):
                    acc = add[acc, mul[A[t, i, k], B[t, k, j]]]
                C[t, i, j] = acc
    return C


@njit
def _matmul_outer_nb(A, G, add, mul):
    N, n, _ = A.shape
    m = G.shape[0]
    C = np.empty((N * m, n, n), dtype=A.dtype)
    for t in range(N):
        for g in range(m):
            row = t * m + g
            for i in range(n):
                for j in range(n):
                    acc = mul[A[t, i, 0], G[g, 0, j]]
                    for k in range(1, n):
                        acc = add[acc, mul[A[t, i, k], G[g, k, j]]]
                    C[row, i, j] = acc
    return C


@njit
def _encode_nb(M, order):
    N, n, _ = M.shape
    out = np.empty(N, dtype=np.int64)
    for t in range(N):
        key = 0
        for i in range(n):
            for j in range(n):
                key = key * order + M[t, i, j]
        out[t] = key
    return out


@njit
def _mul1(X, Y, add, mul, out):
    n = X.shape[0]
    for i in range(n):
        for j in range(n):
            acc = mul[X[i, 0], Y[0, j]]
            for k in range(1, n):
                acc = add[acc, mul[X[i, k], Y[k, j]]]
            out[i, j] = acc


@njit
def _same(X, Y):
    n = X.shape[0]
    for i in range(n):
        for j in range(n):
            if X[i, j] != Y[i, j]:
                return False
    return True


@njit
def _invert_nb(M, add, mul, ident):
    # Brent cycle detection on the power sequence I, M, M^2, ...
    N, n, _ = M.shape
    ok = np.zeros(N, dtype=np.bool_)
    inv = np.zeros_like(M)
    tort = np.empty((n, n), dtype=M.dtype)
    hare = np.empty((n, n), dtype=M.dtype)
    tmp = np.empty((n, n), dtype=M.dtype)
    for t in range(N):
        X = M[t]
        tort[:, :] = ident
        hare[:, :] = X
        power = 1
        lam = 1
        while not _same(tort, hare):
            if power == lam:
                tort[:, :] = hare
                power *= 2
                lam = 0
            _mul1(hare, X, add, mul, tmp)
            hare[:, :] = tmp
            lam += 1
        # X is a unit iff the sequence is purely periodic, i.e. X^lam == I
        hare[:, :] = ident
        for _ in range(lam - 1):
            _mul1(hare, X, add, mul, tmp)
            hare[:, :] = tmp
        _mul1(hare, X, add, mul, tmp)
        if _same(tmp, ident):
            ok[t] = True
            inv[t] = hare
    return ok, inv


# --------------------------------------------------------------------------
# numpy fallbacks


def _matmul_pairs_np(A, B, add, mul):
    n = A.shape[1]
    P = mul[A[:, :, :, None], B[:, None, :, :]]
    acc = P[:, :, 0, :]
    for k in range(1, n):
        acc = add[acc, P[:, :, k, :]]
    return acc.astype(A.dtype, copy=False)


def _matmul_outer_np(A, G, add, mul):
    N, n, _ = A.shape
    m = G.shape[0]
    P = mul[A[:, None, :, :, None], G[None, :, None, :, :]]
    acc = P[:, :, :, 0, :]
    for k in range(1, n):
        acc = add[acc, P[:, :, :, k, :]]
    return acc.reshape(N * m, n, n).astype(A.dtype, copy=False)


def _encode_np(M, order):
    N, n, _ = M.shape
    flat = M.reshape(N, n * n).astype(np.int64)
    key = np.zeros(N, dtype=np.int64)
    for p in range(n * n):
        key = key * order + flat[:, p]
    return key


def _invert_np(M, add, mul, ident):
    N, n, _ = M.shape
    tort = np.broadcast_to(ident, M.shape).copy()
    hare = M.copy()
    power = np.ones(N, dtype=np.int64)
    lam = np.ones(N, dtype=np.int64)
    active = ~np.all(tort == hare, axis=(1, 2))
    while active.any():
        idx = np.flatnonzero(active)
        reset = idx[power[idx] == lam[idx]]
        tort[reset] = hare[reset]
        power[reset] *= 2
        lam[reset] = 0
        hare[idx] = _matmul_pairs_np(hare[idx], M[idx], add, mul)
        lam[idx] += 1
        active[idx] = ~np.all(tort[idx] == hare[idx], axis=(1, 2))
    P = np.broadcast_to(ident, M.shape).copy()
    steps = lam - 1
    for s in range(int(steps.max(initial=0))):
        idx = np.flatnonzero(steps > s)
        P[idx] = _matmul_pairs_np(P[idx], M[idx], add, mul)
    ok = np.all(_matmul_pairs_np(P, M, add, mul) == ident, axis=(1, 2))
    P[~ok] = 0
    return ok, P


# --------------------------------------------------------------------------
# dispatch


def matmul_pairs(A, B, add, mul, accel=None):
    """Row-wise products ``A[t] @ B[t]``."""
    if A.shape[0] == 0:
        return A.copy()
    if use_numba() if accel is None else accel:
        return _matmul_pairs_nb(A, B, add, mul)
    return _matmul_pairs_np(A, B, add, mul)


def matmul_outer(A, G, add, mul, accel=None):
    """All products ``A[t] @ G[g]``, flattened in ``(t, g)`` row-major order."""
    if A.shape[0] == 0 or G.shape[0] == 0:
        return np.empty((0,) + A.shape[1:], dtype=A.dtype)
    if use_numba() if accel is None else accel:
        return _matmul_outer_nb(A, G, add, mul)
    return _matmul_outer_np(A, G, add, mul)


def encode(M, order, accel=None):
    """Canonical keys: row-major codes read as base-``order`` digits, first entry most significant."""
    if M.shape[0] == 0:
        return np.empty(0, dtype=np.int64)
    if use_numba() if accel is None else accel:
        return _encode_nb(M, order)
    return _encode_np(M, order)


def decode(keys, order, n, dtype):
    keys = np.asarray(keys, dtype=np.int64).copy()
    out = np.empty((keys.shape[0], n * n), dtype=dtype)
    for p in range(n * n - 1, -1, -1):
        out[:, p] = keys % order
        keys //= order
    return out.reshape(-1, n, n)


def invert(M, add, mul, ident, accel=None):
    """Batch unit test by the power sequence; returns ``(is_unit, inverse)``.

    Rows that are not units get an all-zero inverse.
    """
    if M.shape[0] == 0:
        return np.zeros(0, dtype=bool), M.copy()
    ident = np.ascontiguousarray(ident, dtype=M.dtype)
    if use_numba() if accel is None else accel:
        return _invert_nb(M, add, mul, ident)
    return _invert_np(M, add, mul, ident)
