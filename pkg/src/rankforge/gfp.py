"""Linear algebra over a prime field F_p on numpy integer arrays.

Besides the usual single-matrix routines this module has batched rank
kernels: ``batch_rank`` takes a stack of matrices and eliminates all of them
at once.  Over F_2 the rows are first packed into 64-bit words.
"""
from __future__ import annotations

import numpy as np


def inv_table(p: int) -> np.ndarray:
    t = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        t[a] = pow(a, p - 2, p)
    return t


def rref(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = np.array(M, dtype=np.int64) % p
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = A.shape
    inv = inv_table(p)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = A[r] * inv[A[r, c]] % p
        f = A[:, c].copy()
        f[r] = 0
        nzr = np.nonzero(f)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - np.outer(f[nzr], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])


def row_basis(M, p: int) -> np.ndarray:
    """RREF rows spanning the row space (shape (rank, cols))."""
    M = np.asarray(M, dtype=np.int64)
    if M.shape[0] == 0:
        return M.reshape(0, M.shape[1] if M.ndim == 2 else 0)
    R, piv = rref(M, p)
    return R[: len(piv)]


def nullspace(M, p: int) -> np.ndarray:
    """Basis (as rows) of {v : M v = 0}."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(M, p)
    free = [c for c in range(cols) if c not in set(piv)]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for i, fc in enumerate(free):
        out[i, fc] = 1
        for r, pc in enumerate(piv):
            out[i, pc] = (-R[r, fc]) % p
    return out


def inverse(M, p: int) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = rref(np.hstack([M % p, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise np.linalg.LinAlgError("singular matrix")
    return R[:, n:]


def solve_row(B, v, p: int):
    """Coefficients c with c @ B = v, or None.  B is (k, L) with independent rows."""
    B = np.asarray(B, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64) % p
    k = B.shape[0]
    if k == 0:
        return np.zeros(0, dtype=np.int64) if not v.any() else None
    aug = np.vstack([B, v[None, :]]).T  # columns are rows of B, then v
    R, piv = rref(aug, p)
    if k in piv:
        return None
    c = np.zeros(k, dtype=np.int64)
    for r, pc in enumerate(piv):
        c[pc] = R[r, k]
    return c


def reduce_against(R, piv, V, p: int) -> np.ndarray:
    """Reduce rows of V modulo the row space of an RREF matrix R."""
    V = np.array(V, dtype=np.int64) % p
    single = V.ndim == 1
    if single:
        V = V[None, :]
    for r, c in enumerate(piv):
        f = V[:, c].copy()
        nz = np.nonzero(f)[0]
        if nz.size:
            V[nz] = (V[nz] - np.outer(f[nz], R[r])) % p
    return V[0] if single else V


def in_rowspace(R, piv, V, p: int) -> np.ndarray:
    """Boolean per row of V: lies in the row space of RREF matrix R."""
    red = reduce_against(R, piv, V, p)
    if red.ndim == 1:
        return not red.any()
    return ~red.any(axis=1)


# --------------------------------------------------------------------------
# batched ranks


def pack_rows(M) -> np.ndarray:
    """Pack the rows of 0/1 matrices (..., rows, cols<=64) into uint64 words."""
    M = np.asarray(M)
    cols = M.shape[-1]
    if cols > 64:
        raise ValueError("at most 64 columns can be bit-packed")
    w = np.left_shift(np.uint64(1), np.arange(cols, dtype=np.uint64))
    return (M.astype(np.uint64) * w).sum(axis=-1, dtype=np.uint64)


def batch_rank_packed(rows: np.ndarray, ncols: int) -> np.ndarray:
    """Ranks of F_2 matrices given as packed rows, shape (B, r)."""
    A = np.array(rows, dtype=np.uint64)
    B, r = A.shape
    ranks = np.zeros(B, dtype=np.int64)
    used = np.zeros((B, r), dtype=bool)
    idx = np.arange(B)
    one = np.uint64(1)
    for c in range(ncols):
        bit = ((A >> np.uint64(c)) & one).astype(bool)
        cand = bit & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        pick = np.argmax(cand, axis=1)
        prow = A[idx, pick]
        prow = np.where(has, prow, np.uint64(0))
        kill = bit.copy()
        kill[idx, pick] = False
        A ^= np.where(kill & has[:, None], prow[:, None], np.uint64(0))
        used[idx[has], pick[has]] = True
        ranks += has
    return ranks


def batch_rank_modp(M: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of integer matrices (B, r, c) over F_p."""
    A = np.array(M, dtype=np.int64) % p
    B, r, c = A.shape
    inv = inv_table(p)
    ranks = np.zeros(B, dtype=np.int64)
    used = np.zeros((B, r), dtype=bool)
    idx = np.arange(B)
    for col in range(c):
        colv = A[:, :, col]
        cand = (colv != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        pick = np.argmax(cand, axis=1)
        prow = A[idx, pick] * inv[A[idx, pick, col]][:, None] % p
        prow[~has] = 0
        f = colv.copy()
        f[idx, pick] = 0
        A = (A - f[:, :, None] * prow[:, None, :]) % p
        used[idx[has], pick[has]] = True
        ranks += has
    return ranks


def batch_rank(M, p: int) -> np.ndarray:
    """Ranks over F_p of a stack of matrices of shape (B, r, c)."""
    M = np.asarray(M)
    if M.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if p == 2 and M.shape[-1] <= 64:
        return batch_rank_packed(pack_rows(M & 1), M.shape[-1])
    return batch_rank_modp(M, p)
