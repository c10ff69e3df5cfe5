"""Sparse multivariate polynomials over F_p.

``PolyFp`` is a scalar polynomial: a dict from exponent tuples to nonzero
residues.  ``PolyArray`` is a vector or matrix with polynomial entries,
stored the other way round, as a dict from exponent tuples to coefficient
arrays; products are then sums of ordinary matrix products, which keeps
ad(f)^k for families of a few variables cheap even at E8 size.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping

import numpy as np

from . import fp

Exp = tuple[int, ...]


def _add_exp(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


class PolyFp:
    __slots__ = ("p", "nvars", "terms")

    def __init__(self, p: int, nvars: int, terms: Mapping[Exp, int] | None = None):
        self.p = p
        self.nvars = nvars
        self.terms: dict[Exp, int] = {}
        for e, c in (terms or {}).items():
            c %= p
            if c:
                self.terms[tuple(e)] = c

    @classmethod
    def const(cls, p: int, nvars: int, c: int) -> PolyFp:
        return cls(p, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, p: int, nvars: int, i: int, c: int = 1) -> PolyFp:
        e = [0] * nvars
        e[i] = 1
        return cls(p, nvars, {tuple(e): c})

    def _coerce(self, other) -> PolyFp:
        if isinstance(other, PolyFp):
            return other
        return PolyFp.const(self.p, self.nvars, int(other))

    def __add__(self, other) -> PolyFp:
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return PolyFp(self.p, self.nvars, t)

    __radd__ = __add__

    def __neg__(self) -> PolyFp:
        return PolyFp(self.p, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> PolyFp:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> PolyFp:
        return self._coerce(other) - self

    def __mul__(self, other) -> PolyFp:
        other = self._coerce(other)
        t: dict[Exp, int] = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            e = _add_exp(e1, e2)
            t[e] = (t.get(e, 0) + c1 * c2) % self.p
        return PolyFp(self.p, self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> PolyFp:
        out = PolyFp.const(self.p, self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyFp):
            other = self._coerce(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def linear_part(self) -> dict[int, int]:
        out = {}
        for e, c in self.terms.items():
            if sum(e) == 1:
                out[e.index(1)] = c
        return out

    def evaluate(self, point) -> int:
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * pow(int(x), k, self.p) % self.p
            total += term
        return total % self.p

    def substitute(self, subs: Mapping[int, PolyFp]) -> PolyFp:
        """Replace variable i by subs[i]; a ring homomorphism."""
        out = PolyFp(self.p, self.nvars)
        for e, c in self.terms.items():
            term = PolyFp(self.p, self.nvars, {tuple(0 if i in subs else k for i, k in enumerate(e)): c})
            for i, k in enumerate(e):
                if k and i in subs:
                    term = term * subs[i] ** k
            out = out + term
        return out

    def to_str(self, names=None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e))):
            c = self.terms[e]
            mono = "*".join(
                names[i] + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"PolyFp({self.to_str()})"


class PolyArray:
    """Array with polynomial entries, stored as {exponent: coefficient array}."""

    __slots__ = ("p", "nvars", "shape", "terms")

    def __init__(self, p: int, nvars: int, shape: tuple[int, ...], terms=None):
        self.p = p
        self.nvars = nvars
        self.shape = tuple(shape)
        self.terms: dict[Exp, np.ndarray] = {}
        for e, a in (terms or {}).items():
            a = np.mod(np.asarray(a, dtype=np.int64), p)
            if a.shape != self.shape:
                raise ValueError(f"term shape {a.shape} != {self.shape}")
            if a.any():
                self.terms[tuple(e)] = a

    @classmethod
    def constant(cls, p: int, nvars: int, a) -> PolyArray:
        a = np.asarray(a, dtype=np.int64)
        return cls(p, nvars, a.shape, {(0,) * nvars: a})

    @classmethod
    def affine(cls, p: int, offset, directions) -> PolyArray:
        """offset + sum_i x_i directions[i]."""
        directions = list(directions)
        n = len(directions)
        offset = np.asarray(offset, dtype=np.int64)
        terms = {(0,) * n: offset}
        for i, d in enumerate(directions):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = d
        return cls(p, n, offset.shape, terms)

    def copy(self) -> PolyArray:
        return PolyArray(self.p, self.nvars, self.shape, {e: a.copy() for e, a in self.terms.items()})

    def __add__(self, other: PolyArray) -> PolyArray:
        t = {e: a.copy() for e, a in self.terms.items()}
        for e, a in other.terms.items():
            t[e] = t[e] + a if e in t else a.copy()
        return PolyArray(self.p, self.nvars, self.shape, t)

    def __sub__(self, other: PolyArray) -> PolyArray:
        return self + other.scale(-1)

    def scale(self, c: int) -> PolyArray:
        return PolyArray(self.p, self.nvars, self.shape, {e: a * c for e, a in self.terms.items()})

    def mul_poly(self, q: PolyFp) -> PolyArray:
        t: dict[Exp, np.ndarray] = {}
        for e1, a in self.terms.items():
            for e2, c in q.terms.items():
                e = _add_exp(e1, e2)
                t[e] = (t[e] + a * c) % self.p if e in t else a * c % self.p
        return PolyArray(self.p, self.nvars, self.shape, t)

    def matmul(self, other) -> PolyArray:
        """self @ other, where other is a PolyArray or a constant ndarray."""
        if not isinstance(other, PolyArray):
            other = PolyArray.constant(self.p, self.nvars, other)
        acc: dict[Exp, np.ndarray] = {}
        for e1, a in self.terms.items():
            for e2, b in other.terms.items():
                e = _add_exp(e1, e2)
                prod = fp.matmul_mod(a, b, self.p)
                acc[e] = (acc[e] + prod) % self.p if e in acc else prod
        out_shape = self.shape[:-1] + other.shape[1:]
        return PolyArray(self.p, self.nvars, out_shape, acc)

    __matmul__ = matmul

    def rmatmul_const(self, a) -> PolyArray:
        """a @ self for a constant matrix a."""
        a = np.asarray(a, dtype=np.int64)
        terms = {e: fp.matmul_mod(a, m, self.p) for e, m in self.terms.items()}
        return PolyArray(self.p, self.nvars, a.shape[:-1] + self.shape[1:], terms)

    def power(self, k: int) -> PolyArray:
        if len(self.shape) != 2 or self.shape[0] != self.shape[1]:
            raise ValueError("power needs a square matrix")
        out = PolyArray.constant(self.p, self.nvars, np.eye(self.shape[0], dtype=np.int64))
        for _ in range(k):
            out = out @ self
        return out

    def transpose(self) -> PolyArray:
        return PolyArray(self.p, self.nvars, self.shape[::-1], {e: a.T for e, a in self.terms.items()})

    @property
    def T(self) -> PolyArray:
        return self.transpose()

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def entry(self, idx) -> PolyFp:
        return PolyFp(self.p, self.nvars, {e: int(a[idx]) for e, a in self.terms.items()})

    def entries(self) -> np.ndarray:
        """Object array of PolyFp entries."""
        out = np.empty(self.shape, dtype=object)
        for idx in np.ndindex(*self.shape):
            out[idx] = self.entry(idx)
        return out

    def nonzero_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        for a in self.terms.values():
            mask |= a != 0
        return mask

    def constant_mask(self) -> np.ndarray:
        """Entries that are nonzero constants."""
        const = self.terms.get((0,) * self.nvars)
        if const is None:
            return np.zeros(self.shape, dtype=bool)
        mask = const != 0
        for e, a in self.terms.items():
            if any(e):
                mask &= a == 0
        return mask

    def constant_part(self) -> np.ndarray:
        return self.terms.get((0,) * self.nvars, np.zeros(self.shape, dtype=np.int64)).copy()

    def evaluate(self, point) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        for e, a in self.terms.items():
            c = 1
            for x, k in zip(point, e):
                if k:
                    c = c * pow(int(x), k, self.p) % self.p
            if c:
                out = (out + c * a) % self.p
        return out

    def substitute(self, subs: Mapping[int, PolyFp]) -> PolyArray:
        """Replace variable i by subs[i] in every entry."""
        out = PolyArray(self.p, self.nvars, self.shape)
        cache: dict[tuple[int, int], PolyFp] = {}
        for e, a in self.terms.items():
            kept = tuple(0 if i in subs else k for i, k in enumerate(e))
            factor = PolyFp(self.p, self.nvars, {kept: 1})
            for i, k in enumerate(e):
                if k and i in subs:
                    if (i, k) not in cache:
                        cache[i, k] = subs[i] ** k
                    factor = factor * cache[i, k]
            out = out + PolyArray(self.p, self.nvars, self.shape, {(0,) * self.nvars: a}).mul_poly(factor)
        return out

    def with_nvars(self, nvars: int) -> PolyArray:
        """Embed into a ring with more variables (appended at the end)."""
        pad = nvars - self.nvars
        return PolyArray(self.p, nvars, self.shape, {e + (0,) * pad: a for e, a in self.terms.items()})

    def vector_entries(self) -> list[PolyFp]:
        if len(self.shape) != 1:
            raise ValueError("not a vector")
        return [self.entry((i,)) for i in range(self.shape[0])]
