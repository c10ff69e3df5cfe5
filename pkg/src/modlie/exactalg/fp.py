"""Dense exact linear algebra over F_p on int64 numpy arrays.

Entries are canonical residues 0..p-1.  Nothing here uses floating point
for decisions; float64 is only used as a fast exact accumulator in
:func:`matmul_mod` when the products provably fit in 53 bits.
"""

from __future__ import annotations

import numpy as np

_EXACT_FLOAT = 2**52


def as_fp(a, p: int) -> np.ndarray:
    return np.mod(np.asarray(a, dtype=np.int64), p)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    inner = a.shape[-1]
    if inner * (p - 1) ** 2 < _EXACT_FLOAT:
        out = np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)
        return np.mod(np.rint(out).astype(np.int64), p)
    return np.mod(np.asarray(a, dtype=object) @ np.asarray(b, dtype=object), p).astype(np.int64)


def matpow_mod(a: np.ndarray, k: int, p: int) -> np.ndarray:
    n = a.shape[0]
    out = np.eye(n, dtype=np.int64)
    base = as_fp(a, p)
    while k:
        if k & 1:
            out = matmul_mod(out, base, p)
        k >>= 1
        if k:
            base = matmul_mod(base, base, p)
    return out


def rref(m, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = as_fp(m, p).copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m, p: int) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def kernel(m, p: int) -> np.ndarray:
    """Basis of the right kernel, one vector per row (shape k x cols)."""
    m = np.asarray(m)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    red, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-red[i, fc]) % p
    return basis


def solve(m, b, p: int) -> tuple[np.ndarray, np.ndarray] | None:
    """All x with m @ x = b, as (particular, kernel basis); None if inconsistent.

    The particular solution has zero in every free coordinate.
    """
    m = as_fp(m, p)
    b = as_fp(b, p).reshape(-1, 1)
    red, pivots = rref(np.hstack([m, b]), p)
    cols = m.shape[1]
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = red[i, cols]
    return x, kernel(m, p)


def row_space(vectors, p: int) -> np.ndarray:
    """Echelon basis of the span of the given row vectors."""
    v = np.asarray(vectors, dtype=np.int64)
    if v.size == 0:
        return v.reshape(0, v.shape[-1] if v.ndim == 2 else 0)
    red, pivots = rref(v, p)
    return red[: len(pivots)]


def column_space(m, p: int) -> np.ndarray:
    """Basis of the image of m, as rows."""
    return row_space(np.asarray(m).T, p)


def intersect(a, b, p: int) -> np.ndarray:
    """Basis (rows) of span(a) ∩ span(b), both given as row bases."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, a.shape[1] if a.ndim == 2 else b.shape[1]), dtype=np.int64)
    # x a = y b  <=>  [a; -b]^T (x, y) = 0
    stacked = np.vstack([a, (-b) % p]).T
    ker = kernel(stacked, p)
    if ker.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    vecs = matmul_mod(ker[:, : a.shape[0]], a, p)
    return row_space(vecs, p)


def in_span(v, basis, p: int) -> bool:
    basis = np.asarray(basis, dtype=np.int64)
    if basis.shape[0] == 0:
        return not np.any(as_fp(v, p))
    return rank(np.vstack([basis, as_fp(v, p)]), p) == rank(basis, p)
