"""Hot loops of the exact linear algebra over F_q.

Matrices are int64 arrays of element codes (see :mod:`eo_theta.field`).
Each kernel exists twice: a compiled scalar-loop version and a vectorised
numpy version.  Both implement the same algorithm and must agree bit for
bit; ``benchmarks/bench_kernels.py`` times them against each other.
"""
from collections import namedtuple

import numpy as np

from . import _accel
from ._accel import njit

FieldTables = namedtuple("FieldTables", "q order exp log zech neg")


def backend():
    return "numba" if _accel.USE_NUMBA else "numpy"


def set_backend(name):
    """Switch between ``"numba"`` and ``"numpy"`` at runtime."""
    if name not in ("numba", "numpy"):
        raise ValueError(name)
    _accel.USE_NUMBA = name == "numba" and _accel.HAVE_NUMBA


# ---------------------------------------------------------------- scalars

@njit
def s_mul(a, b, exp, log, order):
    if a == 0 or b == 0:
        return 0
    return exp[(log[a] + log[b]) % order]


@njit
def s_add(a, b, exp, log, zech, order):
    if a == 0:
        return b
    if b == 0:
        return a
    la = log[a]
    z = zech[(log[b] - la) % order]
    if z < 0:
        return 0
    return exp[(la + z) % order]


@njit
def s_inv(a, exp, log, order):
    return exp[(order - log[a]) % order]


# ---------------------------------------------------------- compiled path

@njit
def _rref_nb(M, exp, log, zech, neg, order):
    A = M.copy()
    rows, cols = A.shape
    pivots = np.full(min(rows, cols), -1, dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                t = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = t
        inv = s_inv(A[r, c], exp, log, order)
        for j in range(cols):
            A[r, j] = s_mul(A[r, j], inv, exp, log, order)
        for i in range(rows):
            if i != r and A[i, c] != 0:
                f = neg[A[i, c]]
                for j in range(c, cols):
                    if A[r, j] != 0:
                        A[i, j] = s_add(A[i, j], s_mul(f, A[r, j], exp, log, order), exp, log, zech, order)
        pivots[r] = c
        r += 1
    return A, pivots[:r]


@njit
def _matmul_nb(A, B, exp, log, zech, order):
    n, m = A.shape
    p = B.shape[1]
    C = np.zeros((n, p), dtype=np.int64)
    for i in range(n):
        for k in range(m):
            a = A[i, k]
            if a == 0:
                continue
            for j in range(p):
                b = B[k, j]
                if b != 0:
                    C[i, j] = s_add(C[i, j], s_mul(a, b, exp, log, order), exp, log, zech, order)
    return C


@njit
def _det_nb(M, exp, log, zech, neg, order):
    A = M.copy()
    n = A.shape[0]
    det = 1
    for c in range(n):
        piv = -1
        for i in range(c, n):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            return 0
        if piv != c:
            for j in range(n):
                t = A[c, j]
                A[c, j] = A[piv, j]
                A[piv, j] = t
            det = neg[det]
        d = A[c, c]
        det = s_mul(det, d, exp, log, order)
        inv = s_inv(d, exp, log, order)
        for i in range(c + 1, n):
            if A[i, c] != 0:
                f = neg[s_mul(A[i, c], inv, exp, log, order)]
                for j in range(c, n):
                    A[i, j] = s_add(A[i, j], s_mul(f, A[c, j], exp, log, order), exp, log, zech, order)
    return det


# ------------------------------------------------------------- numpy path

def add_np(a, b, T):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    a, b = np.broadcast_arrays(a, b)
    la = T.log[a]
    z = T.zech[(T.log[b] - la) % T.order]
    out = np.where(z < 0, 0, T.exp[(la + z) % T.order])
    out = np.where(a == 0, b, out)
    return np.where(b == 0, a, out)


def mul_np(a, b, T):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = T.exp[(T.log[a] + T.log[b]) % T.order]
    return np.where((a == 0) | (b == 0), 0, out)


def _rref_np(M, T):
    A = np.array(M, dtype=np.int64, copy=True)
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = T.exp[(T.order - T.log[A[r, c]]) % T.order]
        A[r] = mul_np(A[r], inv, T)
        f = T.neg[A[:, c]]
        f[r] = 0
        hit = np.nonzero(f)[0]
        if hit.size:
            A[hit] = add_np(A[hit], mul_np(f[hit, None], A[r][None, :], T), T)
        pivots.append(c)
        r += 1
    return A, np.array(pivots, dtype=np.int64)


def _matmul_np(A, B, T):
    n, m = A.shape
    C = np.zeros((n, B.shape[1]), dtype=np.int64)
    for k in range(m):
        C = add_np(C, mul_np(A[:, k, None], B[None, k, :], T), T)
    return C


def _det_np(M, T):
    A = np.array(M, dtype=np.int64, copy=True)
    n = A.shape[0]
    det = 1
    for c in range(n):
        nz = np.nonzero(A[c:, c])[0]
        if nz.size == 0:
            return 0
        piv = c + nz[0]
        if piv != c:
            A[[c, piv]] = A[[piv, c]]
            det = int(T.neg[det])
        d = int(A[c, c])
        det = int(mul_np(det, d, T))
        inv = T.exp[(T.order - T.log[d]) % T.order]
        f = T.neg[mul_np(A[c + 1:, c], inv, T)]
        A[c + 1:] = add_np(A[c + 1:], mul_np(f[:, None], A[c][None, :], T), T)
    return det


# ---------------------------------------------------------------- dispatch

def rref(M, T):
    """Reduced row echelon form and pivot columns."""
    M = np.ascontiguousarray(M, dtype=np.int64)
    if M.size == 0:
        return M.copy(), np.zeros(0, dtype=np.int64)
    if _accel.USE_NUMBA:
        return _rref_nb(M, T.exp, T.log, T.zech, T.neg, T.order)
    return _rref_np(M, T)


def matmul(A, B, T):
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.size == 0 or B.size == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    if _accel.USE_NUMBA:
        return _matmul_nb(A, B, T.exp, T.log, T.zech, T.order)
    return _matmul_np(A, B, T)


def det(M, T):
    M = np.ascontiguousarray(M, dtype=np.int64)
    if M.shape[0] == 0:
        return 1
    if _accel.USE_NUMBA:
        return int(_det_nb(M, T.exp, T.log, T.zech, T.neg, T.order))
    return int(_det_np(M, T))


def warmup():
    """Trigger compilation of every kernel on a tiny input."""
    from .field import GF
    T = GF(3).tables
    M = np.array([[1, 2], [0, 1]], dtype=np.int64)
    rref(M, T)
    matmul(M, M, T)
    det(M, T)
    s_add(1, 2, T.exp, T.log, T.zech, T.order)
    s_mul(1, 2, T.exp, T.log, T.order)
