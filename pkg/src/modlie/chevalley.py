"""Chevalley-basis Lie algebras over Z and their reductions mod p.

Basis order: e_alpha for the positive roots (in the root-system order),
then e_{-alpha} in the same order, then the simple coroots h_1..h_rank.
Signs of the structure constants N_{alpha,beta} are fixed by declaring
N = +(q+1) on every extraspecial pair and propagating with the standard
relations for a Chevalley basis with [e_alpha, e_{-alpha}] = h_alpha and
N_{-alpha,-beta} = -N_{alpha,beta}.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

import numpy as np

from .exactalg import fp
from .rootsys import RootSystem, Vec, add, neg, sub


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


class StructureConstants:
    """N_{alpha,beta} for every pair of roots with alpha+beta a root."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self._order = {r: i for i, r in enumerate(rs.positive_roots)}
        self._memo: dict[tuple[Vec, Vec], Fraction] = {}
        self._extraspecial: dict[Vec, tuple[Vec, Vec]] = {}
        for xi in rs.positive_roots:
            if sum(xi) == 1:
                continue
            for a in rs.positive_roots:  # already in the total order
                b = sub(xi, a)
                if sum(b) > 0 and rs.is_root(b):
                    self._extraspecial[xi] = (a, b)
                    break

    def extraspecial(self, xi: Vec) -> tuple[Vec, Vec]:
        return self._extraspecial[xi]

    def _len2(self, v: Vec) -> int:
        return self.rs.inner(v, v)

    def N(self, a: Vec, b: Vec) -> int:
        val = self._n(a, b)
        if val.denominator != 1:
            raise ArithmeticError(f"non-integral N({a},{b}) = {val}")
        return int(val)

    def _n(self, a: Vec, b: Vec) -> Fraction:
        rs = self.rs
        s = add(a, b)
        if not rs.is_root(s):
            return Fraction(0)
        key = (a, b)
        if key in self._memo:
            return self._memo[key]
        ha, hb = sum(a), sum(b)
        if ha > 0 and hb > 0:
            if self._order[a] > self._order[b]:
                val = -self._n(b, a)
            else:
                g, d = self._extraspecial[s]
                if g == a:
                    val = Fraction(rs.string_down(a, b) + 1)
                else:
                    n_gd = self._n(g, d)
                    acc = Fraction(0)
                    bg = sub(b, g)
                    if rs.is_root(bg):
                        acc += self._n(b, neg(g)) * self._n(a, neg(d)) / self._len2(bg)
                    ag = sub(a, g)
                    if rs.is_root(ag):
                        acc += self._n(neg(g), a) * self._n(b, neg(d)) / self._len2(ag)
                    val = Fraction(self._len2(s)) / n_gd * acc
        elif ha < 0 and hb < 0:
            val = -self._n(neg(a), neg(b))
        else:
            c = neg(s)  # a + b + c = 0
            if (sum(c) > 0) == (hb > 0):
                val = Fraction(self._len2(c), self._len2(a)) * self._n(b, c)
            else:
                val = Fraction(self._len2(c), self._len2(b)) * self._n(c, a)
        self._memo[key] = val
        return val


class ChevalleyAlgebra:
    """The Z-form of a simple Lie algebra in a Chevalley basis, reduced mod p."""

    def __init__(self, rs: RootSystem, p: int):
        if p == 2:
            raise ValueError("p = 2 is excluded: the sl2 relations degenerate in characteristic 2")
        if not is_prime(p):
            raise ValueError(f"p = {p} is not an odd prime")
        self.rs = rs
        self.p = p
        self.npos = len(rs.positive_roots)
        self.rank = rs.rank
        self.dim = 2 * self.npos + self.rank
        self.basis_roots: list[Vec | None] = list(rs.positive_roots) + [
            neg(r) for r in rs.positive_roots
        ] + [None] * self.rank
        self._index = {r: i for i, r in enumerate(self.basis_roots) if r is not None}
        self.sc = StructureConstants(rs)
        self._dp_cache: dict[Vec, tuple[np.ndarray, ...]] = {}
        self._table = self._build_table()
        entries = [(i, j, k, c) for (i, j), terms in self._table.items() for k, c in terms]
        arr = np.array(entries, dtype=np.int64).reshape(-1, 4)
        self._I, self._J, self._K, self._C = arr.T

    @property
    def name(self) -> str:
        return self.rs.name

    # --- basis bookkeeping -------------------------------------------------

    def index(self, root) -> int:
        return self._index[tuple(root)]

    def h_index(self, i: int) -> int:
        return 2 * self.npos + i

    def label(self, k: int) -> str:
        r = self.basis_roots[k]
        if r is None:
            return f"h{k - 2 * self.npos + 1}"
        return "e" + ("-" if sum(r) < 0 else "") + "".join(str(abs(c)) for c in r)

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def e(self, root, coeff: int = 1) -> np.ndarray:
        v = self.zero()
        v[self.index(root)] = coeff % self.p
        return v

    def h(self, coeffs) -> np.ndarray:
        """sum_i coeffs[i] h_i."""
        v = self.zero()
        v[2 * self.npos :] = np.mod(np.asarray(coeffs, dtype=np.int64), self.p)
        return v

    def element(self, terms) -> np.ndarray:
        """Element from [(coeff, root), ...]."""
        v = self.zero()
        for c, r in terms:
            v[self.index(tuple(r))] += c
        return v % self.p

    def describe(self, x) -> str:
        parts = [f"{int(c)}*{self.label(k)}" for k, c in enumerate(x) if c]
        return " + ".join(parts) if parts else "0"

    # --- structure constants over Z ----------------------------------------

    def _build_table(self) -> dict[tuple[int, int], tuple[tuple[int, int], ...]]:
        rs, sc = self.rs, self.sc
        table: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}
        nroot = 2 * self.npos
        for i in range(nroot):
            a = self.basis_roots[i]
            for j in range(nroot):
                b = self.basis_roots[j]
                s = add(a, b)
                if not any(s):
                    co = rs.coroot(a)
                    table[i, j] = tuple(
                        (self.h_index(t), c) for t, c in enumerate(co) if c
                    )
                elif rs.is_root(s):
                    table[i, j] = ((self._index[s], sc.N(a, b)),)
            for t in range(self.rank):
                k = rs.pairing(a, t)
                if k:
                    table[self.h_index(t), i] = ((i, k),)
                    table[i, self.h_index(t)] = ((i, -k),)
        return table

    def bracket_basis(self, i: int, j: int) -> tuple[tuple[int, int], ...]:
        """[b_i, b_j] over Z as ((k, c), ...)."""
        return self._table.get((i, j), ())

    def N(self, a, b) -> int:
        return self.sc.N(tuple(a), tuple(b))

    # --- arithmetic mod p --------------------------------------------------

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if x.shape != (self.dim,):
            raise ValueError(f"expected a vector of length {self.dim}, got shape {x.shape}")
        return x

    def bracket(self, x, y) -> np.ndarray:
        x, y = self._check(x), self._check(y)
        w = x[self._I] * y[self._J] * self._C
        out = np.zeros(self.dim, dtype=np.int64)
        np.add.at(out, self._K, w % self.p)
        return out % self.p

    def ad_matrix(self, x, integral: bool = False) -> np.ndarray:
        """Matrix of ad(x); column j is [x, b_j].  integral=True skips reduction."""
        x = self._check(x)
        m = np.zeros((self.dim, self.dim), dtype=np.int64)
        np.add.at(m, (self._K, self._J), x[self._I] * self._C)
        return m if integral else m % self.p

    def ad_power_rank(self, x, k: int) -> int:
        return fp.rank(fp.matpow_mod(self.ad_matrix(x), k, self.p), self.p)

    # --- root groups -------------------------------------------------------

    def divided_powers(self, root) -> list[np.ndarray]:
        """[ad(e_beta)^k / k! for k = 0, 1, ...] over Z, up to the last nonzero one."""
        return list(self._divided_powers(tuple(root)))

    def _divided_powers(self, root: Vec) -> tuple[np.ndarray, ...]:
        if root in self._dp_cache:
            return self._dp_cache[root]
        ad = self.ad_matrix(self.e(root), integral=True)
        out = [np.eye(self.dim, dtype=np.int64)]
        power = np.eye(self.dim, dtype=np.int64)
        k = 0
        while True:
            k += 1
            power = power @ ad
            if not power.any():
                break
            q, r = np.divmod(power, factorial(k))
            if r.any():
                raise ArithmeticError(f"ad(e_{root})^{k}/{k}! is not integral")
            out.append(q)
        res = tuple(out)
        self._dp_cache[root] = res
        return res

    def root_group_act(self, root, t: int, v) -> np.ndarray:
        """x_beta(t) . v = sum_k t^k (ad e_beta)^k/k! v  (mod p)."""
        v = self._check(v)
        out = self.zero()
        tk = 1
        for d in self._divided_powers(tuple(root)):
            out = (out + tk * (d % self.p) @ v) % self.p
            tk = tk * t % self.p
        return out

    # --- gradings and centralisers ------------------------------------------

    def degree(self, k: int, weights) -> int:
        r = self.basis_roots[k]
        if r is None:
            return 0
        return sum(w * c for w, c in zip(weights, r))

    def grading(self, weights) -> dict[int, list[int]]:
        """Degree -> basis indices of that graded piece."""
        pieces: dict[int, list[int]] = {}
        for k in range(self.dim):
            pieces.setdefault(self.degree(k, weights), []).append(k)
        return dict(sorted(pieces.items()))

    def centralizer(self, x) -> np.ndarray:
        """Basis (rows) of c_g(x) = ker ad(x)."""
        return fp.kernel(self.ad_matrix(x), self.p)

    def centralizer_dimension(self, x) -> int:
        return self.dim - fp.rank(self.ad_matrix(x), self.p)

    # --- Jacobi ------------------------------------------------------------

    def jacobi_basis(self, i: int, j: int, k: int) -> dict[int, int]:
        """[[b_i,b_j],b_k] + [[b_j,b_k],b_i] + [[b_k,b_i],b_j] over Z (nonzero part)."""
        out: dict[int, int] = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for m, c1 in self._table.get((a, b), ()):
                for n, c2 in self._table.get((m, c), ()):
                    out[n] = out.get(n, 0) + c1 * c2
        return {n: v for n, v in out.items() if v}


def build_algebra(rs: RootSystem, p: int) -> ChevalleyAlgebra:
    return ChevalleyAlgebra(rs, p)


def antisymmetry_violations(alg: ChevalleyAlgebra) -> list[tuple[int, int]]:
    bad = []
    for i in range(alg.dim):
        for j in range(i, alg.dim):
            a = dict(alg.bracket_basis(i, j))
            b = {k: -c for k, c in alg.bracket_basis(j, i)}
            if a != b:
                bad.append((i, j))
    return bad


def jacobi_scan(alg: ChevalleyAlgebra, triples=None) -> list[tuple[int, int, int]]:
    """Basis triples violating Jacobi over Z.

    With triples=None every i < j < k is checked; together with
    antisymmetry this covers all basis triples.
    """
    bad = []
    if triples is None:
        n = alg.dim
        triples = ((i, j, k) for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n))
    for i, j, k in triples:
        if alg.jacobi_basis(i, j, k):
            bad.append((i, j, k))
    return bad
