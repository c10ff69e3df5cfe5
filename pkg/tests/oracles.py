"""Independent checks used by the acceptance suite.

Nothing here goes through the symbolic pipeline: the natural module of
sl_{n+1} is found by search and verified on every basis bracket, and
orbits are enumerated point by point.
"""

import itertools

import numpy as np

from modlie import orbits, sl2
from modlie.exactalg import fp


def natural_representation(alg):
    """x -> (n+1)x(n+1) matrix for type A_n, signs fixed by exhaustive search."""
    if alg.rs.type_label != "A":
        raise ValueError("type A only")
    n, p, N = alg.rank, alg.p, alg.rank + 1

    def unit(i, j):
        m = np.zeros((N, N), dtype=np.int64)
        m[i, j] = 1
        return m

    pos = alg.rs.positive_roots
    ends = {r: (r.index(1), len(r) - r[::-1].index(1)) for r in pos}
    for signs in itertools.product((1, -1), repeat=2 * len(pos)):
        mats = [None] * alg.dim
        for t, r in enumerate(pos):
            i, j = ends[r]
            mats[alg.index(r)] = signs[2 * t] * unit(i, j)
            mats[alg.index(tuple(-c for c in r))] = signs[2 * t + 1] * unit(j, i)
        for k in range(n):
            mats[alg.h_index(k)] = unit(k, k) - unit(k + 1, k + 1)
        if _is_homomorphism(alg, mats, N):
            return lambda x: sum((int(c) * mats[k] for k, c in enumerate(x) if c), np.zeros((N, N), dtype=np.int64)) % p
    raise AssertionError("no sign pattern gives a representation")


def _is_homomorphism(alg, mats, N):
    p = alg.p
    for a in range(alg.dim):
        for b in range(alg.dim):
            lhs = (mats[a] @ mats[b] - mats[b] @ mats[a]) % p
            rhs = sum((c * mats[k] for k, c in alg.bracket_basis(a, b)), np.zeros((N, N), dtype=np.int64)) % p
            if not np.array_equal(lhs, rhs):
                return False
    return True


def matrix_in_V(m, p):
    if fp.matpow_mod(m, m.shape[0], p).any():
        return False
    return orbits.is_in_V(tuple(sl2.jordan_block_sizes(m, p)), "A", p)


def all_points(basis, p):
    for c in itertools.product(range(p), repeat=basis.shape[0]):
        yield np.array(c, dtype=np.int64) @ basis % p if basis.shape[0] else np.zeros(basis.shape[1], dtype=np.int64)


def root_group_orbit(alg, start, roots):
    seen = {tuple(start)}
    todo = [tuple(start)]
    while todo:
        v = np.array(todo.pop())
        for r in roots:
            for t in range(1, alg.p):
                w = tuple(alg.root_group_act(r, t, v))
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
    return seen


def levi_has_type_a(rs, k):
    """Some subset of simple roots spans a Levi factor of type A_k."""
    for sub in itertools.combinations(range(rs.rank), k):
        block = [[rs.cartan_matrix[i][j] for j in sub] for i in sub]
        degs = [sum(1 for j in range(k) if j != i and block[i][j]) for i in range(k)]
        simply_laced = all(block[i][j] in (0, -1) for i in range(k) for j in range(k) if i != j)
        edges = sum(degs) // 2
        if simply_laced and edges == k - 1 and max(degs, default=0) <= 2 and _connected(block):
            return True
    return False


def _connected(block):
    k = len(block)
    if k == 0:
        return True
    seen, todo = {0}, [0]
    while todo:
        i = todo.pop()
        for j in range(k):
            if block[i][j] and j not in seen:
                seen.add(j)
                todo.append(j)
    return len(seen) == k
