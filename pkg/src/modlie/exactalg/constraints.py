"""Solving the degree-one part of a polynomial system over F_p."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fp
from .poly import PolyFp


@dataclass
class LinearReduction:
    """x_i -> affine expression in the free variables, plus untouched higher-degree equations."""

    substitution: dict[int, PolyFp] = field(default_factory=dict)
    residual: list[PolyFp] = field(default_factory=list)

    @property
    def eliminated(self) -> list[int]:
        return sorted(self.substitution)


def linear_constraints(eqs, p: int, nvars: int) -> LinearReduction | None:
    """Solve every equation of degree <= 1 exactly; return None if they are inconsistent.

    Pivot variables are the lowest-indexed ones, so earlier variables are
    expressed through later free ones.  Equations of higher degree come
    back in ``residual`` with the substitution applied.
    """
    linear, rest = [], []
    for q in eqs:
        if q.is_zero():
            continue
        (linear if q.degree() <= 1 else rest).append(q)
    red = LinearReduction()
    if linear:
        a = np.zeros((len(linear), nvars + 1), dtype=np.int64)
        for r, q in enumerate(linear):
            for i, c in q.linear_part().items():
                a[r, i] = c
            a[r, nvars] = -q.constant_term() % p
        m, pivots = fp.rref(a, p)
        if nvars in pivots:
            return None
        free = [j for j in range(nvars) if j not in pivots]
        for r, pc in enumerate(pivots):
            expr = PolyFp.const(p, nvars, int(m[r, nvars]))
            for j in free:
                if m[r, j]:
                    expr = expr - PolyFp.var(p, nvars, j, int(m[r, j]))
            red.substitution[pc] = expr
    red.residual = [q.substitute(red.substitution) for q in rest]
    red.residual = [q for q in red.residual if not q.is_zero()]
    return red
