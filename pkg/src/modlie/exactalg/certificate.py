"""Rank certificates for polynomial matrices.

A certificate of size R is a choice of rows r_1..r_R and columns c_1..c_R
such that S[i][j] = M[r_i, c_j] vanishes identically for j < i and
S[i][i] is a nonzero constant.  Then every specialisation of M has rank
at least R.  Rows of M that vanish identically at all of c_1..c_R must
therefore evaluate to zero wherever the rank is at most R.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poly import PolyArray, PolyFp


@dataclass(frozen=True)
class RankCertificate:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    diagonal: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    def to_dict(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols), "diagonal": list(self.diagonal)}

    @classmethod
    def from_dict(cls, d: dict) -> RankCertificate:
        return cls(tuple(d["rows"]), tuple(d["cols"]), tuple(d["diagonal"]))


def verify_certificate(m: PolyArray, cert: RankCertificate) -> bool:
    if len(set(cert.rows)) != cert.size or len(set(cert.cols)) != cert.size:
        return False
    nz = m.nonzero_mask()
    const = m.constant_mask()
    cpart = m.constant_part()
    for i, (r, c) in enumerate(zip(cert.rows, cert.cols)):
        if not const[r, c] or int(cpart[r, c]) != cert.diagonal[i]:
            return False
        if nz[r, list(cert.cols[:i])].any():
            return False
    return True


def _greedy(nz: np.ndarray, const: np.ndarray, target: int, row_weight: np.ndarray):
    nrows, ncols = nz.shape
    cand = np.ones(nrows, dtype=bool)
    used_c = np.zeros(ncols, dtype=bool)
    rows: list[int] = []
    cols: list[int] = []
    while len(rows) < target:
        usable = const & cand[:, None] & ~used_c[None, :]
        if not usable.any():
            return None
        # rows still available after choosing column c: candidates vanishing at c
        survivors = (cand[:, None] & ~nz).sum(axis=0)
        best = None
        for r, c in zip(*np.nonzero(usable)):
            key = (-int(survivors[c]), int(row_weight[r]), int(r), int(c))
            if best is None or key < best:
                best = key
        _, _, r, c = best
        rows.append(r)
        cols.append(c)
        cand[r] = False
        cand &= ~nz[:, c]
        used_c[c] = True
    return rows, cols


def _search(nz, const, target, budget):
    """Depth-first search over the same move set as the greedy pass."""
    nrows, ncols = nz.shape
    steps = [0]

    def rec(cand, used_c, rows, cols):
        if len(rows) == target:
            return rows, cols
        steps[0] += 1
        if steps[0] > budget:
            return None
        usable = const & cand[:, None] & ~used_c[None, :]
        # a column only helps if enough candidate rows stay alive
        survivors = (cand[:, None] & ~nz).sum(axis=0)
        moves = sorted(zip(*np.nonzero(usable)), key=lambda rc: (-survivors[rc[1]], rc[0], rc[1]))
        for r, c in moves:
            nc = cand & ~nz[:, c]
            nc[r] = False
            nu = used_c.copy()
            nu[c] = True
            out = rec(nc, nu, rows + [int(r)], cols + [int(c)])
            if out is not None:
                return out
            if steps[0] > budget:
                return None
        return None

    return rec(np.ones(nrows, dtype=bool), np.zeros(ncols, dtype=bool), [], [])


def find_rank_certificate(m: PolyArray, target: int, budget: int = 20000) -> RankCertificate | None:
    """Search for a certificate of size ``target``; None if none was found."""
    if target == 0:
        return RankCertificate((), (), ())
    nz = m.nonzero_mask()
    const = m.constant_mask()
    found = _greedy(nz, const, target, nz.sum(axis=1))
    if found is None:
        found = _search(nz, const, target, budget)
    if found is None:
        return None
    rows, cols = found
    cpart = m.constant_part()
    cert = RankCertificate(
        tuple(int(r) for r in rows),
        tuple(int(c) for c in cols),
        tuple(int(cpart[r, c]) for r, c in zip(rows, cols)),
    )
    if not verify_certificate(m, cert):  # never hand back something unsound
        raise AssertionError("internal error: search produced an invalid certificate")
    return cert


def vanishing_rows(m: PolyArray, cert: RankCertificate) -> list[int]:
    nz = m.nonzero_mask()
    if cert.size == 0:
        return list(range(m.shape[0]))
    dead = ~nz[:, list(cert.cols)].any(axis=1)
    return [int(r) for r in np.nonzero(dead & nz.any(axis=1))[0]]


def vanishing_row_constraints(m: PolyArray, cert: RankCertificate) -> list[PolyFp]:
    """Entries of the rows that are identically zero on every certificate column."""
    out = []
    nz = m.nonzero_mask()
    for r in vanishing_rows(m, cert):
        for c in np.nonzero(nz[r])[0]:
            out.append(m.entry((r, int(c))))
    return out
