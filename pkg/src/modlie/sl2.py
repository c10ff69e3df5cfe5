"""sl2-triples over F_p.

Elements are coefficient vectors in the basis of a
:class:`~modlie.chevalley.ChevalleyAlgebra`.  A triple (e, h, f) satisfies
[h,e] = 2e, [h,f] = -2f and [e,f] = h.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chevalley import ChevalleyAlgebra
from .exactalg import fp
from .rootsys import inverse_cartan_combine


@dataclass(frozen=True)
class Sl2Triple:
    e: np.ndarray
    h: np.ndarray
    f: np.ndarray


@dataclass(frozen=True)
class TauData:
    weights: tuple[int, ...]
    source_label: str = ""

    def h_element(self, alg: ChevalleyAlgebra) -> np.ndarray:
        return alg.h(inverse_cartan_combine(alg.rs, self.weights, alg.p))


def verify_triple(alg: ChevalleyAlgebra, t: Sl2Triple) -> bool:
    p = alg.p
    b = alg.bracket
    return (
        np.array_equal(b(t.h, t.e), 2 * t.e % p)
        and np.array_equal(b(t.h, t.f), -2 * t.f % p)
        and np.array_equal(b(t.e, t.f), t.h % p)
    )


def minus_two_eigenspace(alg: ChevalleyAlgebra, h) -> np.ndarray:
    """Basis (rows) of ker(ad(h) + 2I)."""
    m = (alg.ad_matrix(h) + 2 * np.eye(alg.dim, dtype=np.int64)) % alg.p
    return fp.kernel(m, alg.p)


def complete_triple(alg: ChevalleyAlgebra, e, h, subspace=None) -> Sl2Triple | None:
    """Some f with (e, h, f) a triple, or None if there is none.

    ``subspace`` (rows spanning a subspace of the algebra) restricts the
    search further, which is how the degree -2 companion of a graded
    triple is found.  When several f exist, the one with zero free
    coordinates in the row-reduced parameterisation is returned.
    """
    p = alg.p
    e = np.asarray(e, dtype=np.int64) % p
    h = np.asarray(h, dtype=np.int64) % p
    if not np.array_equal(alg.bracket(h, e), 2 * e % p):
        raise ValueError("[h, e] != 2e; (e, h) cannot start an sl2-triple")
    basis = minus_two_eigenspace(alg, h)
    if subspace is not None:
        basis = fp.intersect(basis, np.asarray(subspace, dtype=np.int64), p)
    if basis.shape[0] == 0:
        return Sl2Triple(e, h, alg.zero()) if not h.any() else None
    lhs = fp.matmul_mod(alg.ad_matrix(e), basis.T, p)
    sol = fp.solve(lhs, h, p)
    if sol is None:
        return None
    y, _ = sol
    f = fp.matmul_mod(y[None, :], basis, p)[0]
    return Sl2Triple(e, h, f)


def is_restricted(alg: ChevalleyAlgebra, x) -> bool:
    """x^[p] = 0 for nilpotent x, tested as ad(x)^p = 0."""
    return not fp.matpow_mod(alg.ad_matrix(x), alg.p, alg.p).any()


def is_nilpotent(alg: ChevalleyAlgebra, x) -> bool:
    return not fp.matpow_mod(alg.ad_matrix(x), alg.dim, alg.p).any()


def rank_p_minus_one(alg: ChevalleyAlgebra, x) -> int:
    return alg.ad_power_rank(x, alg.p - 1)


PRECEDES, EQUIVALENT, SUCCEEDS = "≺", "≈", "≻"


def compare_rank_order(alg: ChevalleyAlgebra, x, y) -> tuple[str, int, int]:
    """Compare rk ad(x)^(p-1) with rk ad(y)^(p-1); returns (symbol, rank_x, rank_y)."""
    rx, ry = rank_p_minus_one(alg, x), rank_p_minus_one(alg, y)
    sym = PRECEDES if rx < ry else SUCCEEDS if rx > ry else EQUIVALENT
    return sym, rx, ry


# --- the p-dimensional baby Verma module -----------------------------------


def baby_verma_triple(p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(E, H, F) acting on Z_0(0) in the basis v_0..v_{p-1}.

    E v_i = v_{i+1}, H v_i = 2i v_i, F v_i = -i(i-1) v_{i-1}; v_0 generates
    and E acts as one full Jordan block.
    """
    if p < 3 or p % 2 == 0:
        raise ValueError("need an odd prime")
    E = np.zeros((p, p), dtype=np.int64)
    F = np.zeros((p, p), dtype=np.int64)
    H = np.zeros((p, p), dtype=np.int64)
    for i in range(p):
        H[i, i] = 2 * i % p
        if i + 1 < p:
            E[i + 1, i] = 1
        if i >= 1:
            F[i - 1, i] = -i * (i - 1) % p
    return E, H, F


def matrix_sl2_relations(E, H, F, p: int) -> bool:
    def comm(a, b):
        return (fp.matmul_mod(a, b, p) - fp.matmul_mod(b, a, p)) % p

    return (
        np.array_equal(comm(H, E), 2 * E % p)
        and np.array_equal(comm(H, F), -2 * F % p)
        and np.array_equal(comm(E, F), H % p)
    )


def generated_submodule(mats, v, p: int) -> np.ndarray:
    """Row basis of the smallest subspace containing v and stable under mats."""
    basis = fp.row_space(np.asarray(v, dtype=np.int64)[None, :], p)
    while True:
        imgs = [fp.matmul_mod(m, basis.T, p).T for m in mats]
        new = fp.row_space(np.vstack([basis, *imgs]), p)
        if new.shape[0] == basis.shape[0]:
            return basis
        basis = new


def baby_verma_is_nonsplit(E, H, F, p: int) -> bool:
    """Z_0(0) has a unique simple submodule of codimension one with no invariant complement.

    Every nonzero submodule contains a vector killed by the nilpotent E;
    ker E is the line through v_{p-1}, whose submodule is span(v_1..v_{p-1}).
    A complement would be a trivial line, i.e. a common kernel vector of
    E, H, F outside that submodule.
    """
    ker_e = fp.kernel(E, p)
    if ker_e.shape[0] != 1:
        return False
    sub = generated_submodule([E, H, F], ker_e[0], p)
    if sub.shape[0] != p - 1:
        return False
    trivial = fp.kernel(np.vstack([E, H, F]), p)
    return all(fp.in_span(w, sub, p) for w in trivial)


def jordan_block_sizes(m, p: int) -> list[int]:
    """Jordan type of a nilpotent matrix from ranks of its powers."""
    n = m.shape[0]
    ranks = [n]
    power = np.eye(n, dtype=np.int64)
    while ranks[-1]:
        power = fp.matmul_mod(power, m, p)
        ranks.append(fp.rank(power, p))
        if len(ranks) > n + 1:
            raise ValueError("matrix is not nilpotent")
    # number of blocks of size >= k is rank(m^{k-1}) - rank(m^k)
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes = []
    for k in range(len(at_least), 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        sizes += [k] * exact
    return sizes
