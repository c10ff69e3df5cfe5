"""Steps 1-3: cutting down the family of companions f for a fixed (e, h).

The family is always affine, ``offset + sum_i x_i v_i``, with the v_i
linearly independent; each variable keeps the label it was born with so
logs stay readable after eliminations.

Step 1 solves [e, f] = h.  Step 2 applies root elements x_beta(t) and
torus elements centralising e and h; a move is accepted only after
checking symbolically that it maps the family into itself and shifts one
coordinate by a nonzero constant multiple of t.  Step 3 uses a rank
certificate for ad(f)^(p-1) against R = rank ad(e)^(p-1) and forces the
entries of vanishing rows to zero, repeating until nothing changes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import sl2
from .chevalley import ChevalleyAlgebra
from .exactalg import fp
from .exactalg.certificate import (
    RankCertificate,
    find_rank_certificate,
    vanishing_row_constraints,
    vanishing_rows,
    verify_certificate,
)
from .exactalg.constraints import linear_constraints
from .exactalg.poly import PolyArray, PolyFp

UNIQUE, RESIDUAL, EMPTY = "unique", "residual", "empty"


# --- the family ---------------------------------------------------------


@dataclass
class GenericElement:
    p: int
    offset: np.ndarray
    directions: np.ndarray  # shape (n, dim)
    labels: tuple[str, ...]

    def __post_init__(self):
        self.offset = np.mod(np.asarray(self.offset, dtype=np.int64), self.p)
        dim = self.offset.shape[0]
        self.directions = np.mod(np.asarray(self.directions, dtype=np.int64), self.p).reshape(-1, dim)
        if len(self.labels) != self.directions.shape[0]:
            raise ValueError("one label per direction")
        if fp.rank(self.directions, self.p) != self.directions.shape[0]:
            raise ValueError("family directions are linearly dependent")

    @property
    def nvars(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return self.offset.shape[0]

    def coords(self) -> PolyArray:
        return PolyArray.affine(self.p, self.offset, list(self.directions))

    def evaluate(self, point) -> np.ndarray:
        point = np.asarray(point, dtype=np.int64).reshape(-1)
        return (self.offset + point @ self.directions) % self.p if self.nvars else self.offset.copy()

    def substitute(self, subs: dict[int, PolyFp]) -> GenericElement:
        """Apply x_i -> affine expression in the remaining variables."""
        for q in subs.values():
            if q.degree() > 1 or q.variables() & set(subs):
                raise ValueError("substitution must be affine in the kept variables")
        offset = self.offset.copy()
        dirs = self.directions.copy()
        for i, q in subs.items():
            offset = offset + q.constant_term() * self.directions[i]
            for j, c in q.linear_part().items():
                dirs[j] = dirs[j] + c * self.directions[i]
        keep = [j for j in range(self.nvars) if j not in subs]
        return GenericElement(self.p, offset, dirs[keep], tuple(self.labels[j] for j in keep))

    def fix_variable(self, i: int, value: int = 0) -> GenericElement:
        return self.substitute({i: PolyFp.const(self.p, self.nvars, value)})

    def to_dict(self, alg: ChevalleyAlgebra) -> dict:
        return {
            "offset": element_to_json(alg, self.offset),
            "directions": [element_to_json(alg, d) for d in self.directions],
            "labels": list(self.labels),
        }

    @classmethod
    def from_dict(cls, alg: ChevalleyAlgebra, d: dict) -> GenericElement:
        dirs = [element_from_json(alg, v) for v in d["directions"]]
        return cls(
            alg.p,
            element_from_json(alg, d["offset"]),
            np.array(dirs, dtype=np.int64).reshape(len(dirs), alg.dim),
            tuple(d["labels"]),
        )

    def same_as(self, other: GenericElement) -> bool:
        return (
            self.labels == other.labels
            and np.array_equal(self.offset, other.offset)
            and np.array_equal(self.directions, other.directions)
        )

    def describe(self, alg: ChevalleyAlgebra) -> str:
        parts = []
        for k in range(self.dim):
            coeff = PolyFp(self.p, self.nvars, {(0,) * self.nvars: int(self.offset[k])})
            for i in range(self.nvars):
                coeff = coeff + PolyFp.var(self.p, self.nvars, i, int(self.directions[i, k]))
            if not coeff.is_zero():
                s = coeff.to_str(list(self.labels))
                parts.append(f"({s})*{alg.label(k)}" if len(coeff.terms) > 1 else f"{s}*{alg.label(k)}")
        return " + ".join(parts) if parts else "0"


def element_to_json(alg: ChevalleyAlgebra, x) -> dict:
    """Basis-order independent encoding: root coefficient vectors and Cartan coordinates."""
    x = np.asarray(x) % alg.p
    roots = [[int(x[k]), list(alg.basis_roots[k])] for k in range(2 * alg.npos) if x[k]]
    return {"roots": roots, "cartan": [int(c) for c in x[2 * alg.npos :]]}


def element_from_json(alg: ChevalleyAlgebra, d) -> np.ndarray:
    v = alg.element([(c, tuple(r)) for c, r in d["roots"]])
    v[2 * alg.npos :] = np.mod(np.asarray(d["cartan"], dtype=np.int64), alg.p)
    return v


def _poly_to_json(q: PolyFp, labels) -> dict:
    return {"expr": q.to_str(list(labels)), "terms": sorted([list(e), c] for e, c in q.terms.items())}


# --- building families ----------------------------------------------------


def build_family_bad_char(alg: ChevalleyAlgebra, e, h, f=None) -> GenericElement:
    """All of ker(ad h + 2I), offset zero; ``f`` is accepted for symmetry and checked."""
    if f is not None and not sl2.verify_triple(alg, sl2.Sl2Triple(e, h, f)):
        raise ValueError("(e, h, f) is not an sl2-triple")
    basis = sl2.minus_two_eigenspace(alg, h)
    return GenericElement(alg.p, alg.zero(), basis, tuple(f"x{i + 1}" for i in range(basis.shape[0])))


def centralizer_in_degree(alg: ChevalleyAlgebra, e, weights, degree: int) -> np.ndarray:
    """Basis of c_g(e) ∩ g(degree), as rows in the full basis."""
    idx = alg.grading(weights).get(degree, [])
    if not idx:
        return np.zeros((0, alg.dim), dtype=np.int64)
    ker = fp.kernel(alg.ad_matrix(e)[:, idx], alg.p)
    out = np.zeros((ker.shape[0], alg.dim), dtype=np.int64)
    out[:, idx] = ker
    return out


def degree_minus_two_companion(alg: ChevalleyAlgebra, e, h, weights) -> np.ndarray | None:
    idx = alg.grading(weights).get(-2, [])
    sub = np.eye(alg.dim, dtype=np.int64)[idx]
    t = sl2.complete_triple(alg, e, h, subspace=sub)
    return None if t is None else t.f


def build_family_good_char(alg: ChevalleyAlgebra, e, h, fbar, tau: sl2.TauData) -> GenericElement:
    """fbar + sum over r > 0 of c_g(e) ∩ g(-2 + r p)."""
    pieces = alg.grading(tau.weights)
    top = max(pieces)
    blocks = []
    r = 1
    while -2 + r * alg.p <= top:
        blocks.append(centralizer_in_degree(alg, e, tau.weights, -2 + r * alg.p))
        r += 1
    dirs = np.vstack(blocks) if blocks else np.zeros((0, alg.dim), dtype=np.int64)
    return GenericElement(alg.p, fbar, dirs, tuple(f"x{i + 1}" for i in range(dirs.shape[0])))


# --- Step 1 ----------------------------------------------------------------


def step1(alg: ChevalleyAlgebra, e, h, fam: GenericElement):
    """Impose [e, f] = h.  Returns (family or None if empty, log entry)."""
    p = alg.p
    coords = fam.coords()
    lhs = PolyArray(p, fam.nvars, (alg.dim,), {
        ex: alg.bracket(e, a) for ex, a in coords.terms.items()
    }) - PolyArray.constant(p, fam.nvars, np.asarray(h) % p)
    eqs = [q for q in lhs.vector_entries() if not q.is_zero()]
    red = linear_constraints(eqs, p, fam.nvars)
    if red is None:
        return None, {"step": 1, "equations": len(eqs), "result": EMPTY}
    if red.residual:
        raise AssertionError("[e, f] = h is linear in the family coordinates")
    new = fam.substitute(red.substitution)
    log = {
        "step": 1,
        "equations": len(eqs),
        "substitutions": {fam.labels[i]: _poly_to_json(q, fam.labels) for i, q in sorted(red.substitution.items())},
        "live": list(new.labels),
    }
    return new, log


# --- Step 2 ----------------------------------------------------------------


def centralizes_pair(alg: ChevalleyAlgebra, root, e, h) -> bool:
    x = alg.e(tuple(root))
    return not alg.bracket(x, e).any() and not alg.bracket(x, h).any()


def _act_symbolic(alg: ChevalleyAlgebra, root, fam: GenericElement) -> PolyArray:
    """x_beta(y) . f for the family f, with y an extra last variable."""
    n = fam.nvars
    coords = fam.coords().with_nvars(n + 1)
    out = PolyArray(alg.p, n + 1, (alg.dim,))
    y = PolyFp.var(alg.p, n + 1, n)
    for k, d in enumerate(alg.divided_powers(tuple(root))):
        out = out + coords.rmatmul_const(d % alg.p).mul_poly(y ** k)
    return out


def _family_coordinates(fam: GenericElement, v: PolyArray) -> list[PolyFp] | None:
    """Write v = offset + sum_i X_i v_i with polynomial X_i, or None if v leaves the family."""
    p = fam.p
    n = v.nvars
    shifted = v - PolyArray.constant(p, n, fam.offset)
    coeffs = [dict() for _ in range(fam.nvars)]
    dT = fam.directions.T
    for ex, a in shifted.terms.items():
        if fam.nvars == 0:
            return None
        sol = fp.solve(dT, a, p)
        if sol is None:
            return None
        z, _ = sol
        for i in range(fam.nvars):
            if z[i]:
                coeffs[i][ex] = int(z[i])
    return [PolyFp(p, n, c) for c in coeffs]


@dataclass
class Move:
    kind: str  # "root" or "torus"
    root: tuple[int, ...] | None
    weights: tuple[int, ...] | None
    variable: str
    parameter: str

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "variable": self.variable, "parameter": self.parameter}
        if self.root is not None:
            d["root"] = list(self.root)
        if self.weights is not None:
            d["weights"] = list(self.weights)
        return d


def root_move(alg: ChevalleyAlgebra, e, h, fam: GenericElement, root, prefer: str | None = None):
    """Try to kill one variable with x_root(t).  Returns (family, Move) or None."""
    root = tuple(root)
    if not centralizes_pair(alg, root, e, h):
        raise ValueError(f"e_{root} does not centralise both e and h")
    if fam.nvars == 0:
        return None
    acted = _act_symbolic(alg, root, fam)
    xs = _family_coordinates(fam, acted)
    if xs is None:
        return None
    n = fam.nvars
    order = range(n)
    if prefer is not None:
        order = [fam.labels.index(prefer)] if prefer in fam.labels else []
    for i in order:
        q = xs[i]
        # q = c*y + g(x): exactly one term involving y, and it is linear with constant coefficient
        y_terms = {ex: c for ex, c in q.terms.items() if ex[n]}
        ey = tuple(int(j == n) for j in range(n + 1))
        if list(y_terms) != [ey]:
            continue
        c = y_terms[ey]
        g = PolyFp(alg.p, n + 1, {ex: v for ex, v in q.terms.items() if not ex[n]})
        t_expr = g * (-pow(c, -1, alg.p))
        t_short = PolyFp(alg.p, n, {ex[:n]: v for ex, v in t_expr.terms.items()})
        move = Move("root", root, None, fam.labels[i], t_short.to_str(list(fam.labels)))
        return fam.fix_variable(i, 0), move
    return None


def torus_fixes(alg: ChevalleyAlgebra, weights, e) -> bool:
    return all(alg.degree(k, weights) == 0 for k in np.nonzero(np.asarray(e) % alg.p)[0])


def torus_move(alg: ChevalleyAlgebra, e, fam: GenericElement, weights, variable: str):
    """Rescale by a torus element fixing e; splits the family into x = 0 and x = 1.

    Valid when the offset and every direction are homogeneous for the
    grading and the chosen direction has nonzero degree.  Returns a list of
    (family, Move) branches or None.
    """
    weights = tuple(int(w) for w in weights)
    if not torus_fixes(alg, weights, e):
        raise ValueError("torus element does not fix e")
    if variable not in fam.labels:
        return None

    def degrees(v):
        return {alg.degree(k, weights) for k in np.nonzero(v)[0]}

    if degrees(fam.offset) - {0}:
        return None
    dir_deg = []
    for d in fam.directions:
        ds = degrees(d)
        if len(ds) != 1:
            return None
        dir_deg.append(ds.pop())
    i = fam.labels.index(variable)
    if dir_deg[i] == 0:
        return None
    return [
        (fam.fix_variable(i, 0), Move("torus", None, weights, variable, "0")),
        (fam.fix_variable(i, 1), Move("torus", None, weights, variable, "1")),
    ]


def step2(alg: ChevalleyAlgebra, e, h, fam: GenericElement, generators):
    """Scripted root moves.  Each generator is a root, or a dict {"root": ..., "variable": ...}.

    Returns (family, [Move]).  Generators that cannot kill anything are
    skipped and reported with parameter "none".
    """
    moves = []
    for g in generators:
        root, prefer = (g["root"], g.get("variable")) if isinstance(g, dict) else (g, None)
        out = root_move(alg, e, h, fam, root, prefer)
        if out is None:
            moves.append(Move("root", tuple(root), None, "", "none"))
            continue
        fam, mv = out
        moves.append(mv)
    return fam, moves


def auto_generators(alg: ChevalleyAlgebra, e, h) -> list[tuple[int, ...]]:
    return [r for r in alg.basis_roots[: 2 * alg.npos] if centralizes_pair(alg, r, e, h)]


def step2_auto(alg: ChevalleyAlgebra, e, h, fam: GenericElement):
    """Greedy: keep applying the first root generator that kills a live variable."""
    gens = auto_generators(alg, e, h)
    moves = []
    progress = True
    while progress and fam.nvars:
        progress = False
        for r in gens:
            out = root_move(alg, e, h, fam, r)
            if out is not None:
                fam, mv = out
                moves.append(mv)
                progress = True
                break
    return fam, moves


# --- Step 3 ----------------------------------------------------------------


def ad_family(alg: ChevalleyAlgebra, fam: GenericElement) -> PolyArray:
    coords = fam.coords()
    return PolyArray(alg.p, fam.nvars, (alg.dim, alg.dim), {
        ex: alg.ad_matrix(a) for ex, a in coords.terms.items()
    })


def step3_matrix(alg: ChevalleyAlgebra, fam: GenericElement) -> PolyArray:
    """ad(f)^(p-1) in row convention: row i holds the coordinates of ad(f)^(p-1) b_i."""
    return ad_family(alg, fam).power(alg.p - 1).T


def _forcing_equations(entries: list[PolyFp]) -> tuple[list[PolyFp], bool]:
    """Equations usable for elimination, and whether a nonzero constant appeared."""
    out = []
    for q in entries:
        if q.is_zero():
            continue
        if q.degree() == 0:
            return [], True
        if q.degree() == 1:
            out.append(q)
        elif len(q.terms) == 1 and len(q.variables()) == 1:
            # c * x_i^k = 0 forces x_i = 0
            (i,) = q.variables()
            out.append(PolyFp.var(q.p, q.nvars, i))
    return out, False


@dataclass
class Step3Result:
    family: GenericElement | None
    R: int
    rounds: list[dict] = field(default_factory=list)
    certificate: RankCertificate | None = None
    verdict: str = RESIDUAL
    diagnostic: str = ""


def step3(alg: ChevalleyAlgebra, e, fam: GenericElement, max_rounds: int = 50) -> Step3Result:
    p = alg.p
    R = sl2.rank_p_minus_one(alg, e)
    res = Step3Result(fam, R)
    for _ in range(max_rounds):
        if fam.nvars == 0:
            res.verdict = UNIQUE
            break
        M = step3_matrix(alg, fam)
        cert = res.certificate
        if cert is None or not verify_certificate(M, cert):
            cert = find_rank_certificate(M, R)
        if cert is None:
            res.diagnostic = f"no rank certificate of size {R} found"
            break
        res.certificate = cert
        rows = vanishing_rows(M, cert)
        entries = vanishing_row_constraints(M, cert)
        eqs, contradiction = _forcing_equations(entries)
        rnd = {
            "certificate": cert.to_dict(),
            "zero_columns": int((~M.nonzero_mask().any(axis=0)).sum()),
            "vanishing_rows": rows,
        }
        if contradiction:
            rnd["result"] = EMPTY
            res.rounds.append(rnd)
            res.family, res.verdict = None, EMPTY
            return res
        red = linear_constraints(eqs, p, fam.nvars)
        if red is None:
            rnd["result"] = EMPTY
            res.rounds.append(rnd)
            res.family, res.verdict = None, EMPTY
            return res
        if not red.substitution:
            res.rounds.append(rnd)
            res.diagnostic = "vanishing rows force no further variables"
            break
        rnd["forced"] = {fam.labels[i]: _poly_to_json(q, fam.labels) for i, q in sorted(red.substitution.items())}
        res.rounds.append(rnd)
        fam = fam.substitute(red.substitution)
        res.family = fam
    else:
        res.diagnostic = "round limit reached"
    if fam.nvars == 0:
        res.verdict = UNIQUE
    res.family = fam
    return res


def nilpotency_equations(alg: ChevalleyAlgebra, fam: GenericElement) -> list[PolyFp]:
    """Distinct nonzero entries of ad(f)^p, the equations f^[p] = 0."""
    M = ad_family(alg, fam).power(alg.p)
    seen = {}
    mask = M.nonzero_mask()
    for idx in zip(*np.nonzero(mask)):
        q = M.entry(tuple(int(i) for i in idx))
        seen.setdefault(q, None)
    return list(seen)


# --- rigidity of h ----------------------------------------------------------


def verify_h_rigidity(alg: ChevalleyAlgebra, e, h, F=None, budget: int = 5000) -> dict:
    """W = c(e) ∩ c(h) ∩ im ad(e): (a) W ∩ ad(e)(F) = 0, (b) all of W is p-nilpotent."""
    p = alg.p
    if F is None:
        F = sl2.minus_two_eigenspace(alg, h)
    ade, adh = alg.ad_matrix(e), alg.ad_matrix(h)
    cent = fp.kernel(np.vstack([ade, adh]), p)
    image = fp.column_space(ade, p)
    W = fp.intersect(cent, image, p)
    eF = fp.row_space(fp.matmul_mod(ade, np.asarray(F).T, p).T, p) if len(F) else np.zeros((0, alg.dim), dtype=np.int64)
    meet = fp.intersect(W, eF, p)
    report = {"dim_W": int(W.shape[0]), "dim_W_cap_eF": int(meet.shape[0]), "intersection_zero": meet.shape[0] == 0}
    k = 1
    while p**k < alg.dim:
        k += 1
    N = p**k
    n = W.shape[0]
    if n == 0:
        report.update(p_nilpotent=True, exponent=N, status="checked")
        return report
    if comb(N + n - 1, n - 1) > budget:
        report.update(p_nilpotent=None, exponent=N, status="not checked: budget exceeded")
        return report
    gen = GenericElement(p, alg.zero(), W, tuple(f"y{i + 1}" for i in range(n)))
    P = ad_family(alg, gen).power(N)
    report.update(p_nilpotent=P.is_zero(), exponent=N, status="checked")
    return report


# --- the pipeline and its certificate ---------------------------------------


@dataclass
class MonogamyCertificate:
    group: str
    orbit: str
    p: int
    regime: str
    mode: str
    e: dict
    h: dict
    f_reference: dict
    tau: list[int] | None
    initial_family: dict
    steps: list[dict]
    verdict: str
    final_family: dict | None
    notes: list[str] = field(default_factory=list)
    step2_script: list | str | None = None

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "group": self.group,
            "orbit": self.orbit,
            "p": self.p,
            "regime": self.regime,
            "mode": self.mode,
            "step2_script": self.step2_script,
            "e": self.e,
            "h": self.h,
            "f_reference": self.f_reference,
            "tau": self.tau,
            "initial_family": self.initial_family,
            "steps": self.steps,
            "verdict": self.verdict,
            "final_family": self.final_family,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> MonogamyCertificate:
        return cls(
            d["group"], d["orbit"], d["p"], d["regime"], d["mode"], d["e"], d["h"],
            d["f_reference"], d.get("tau"), d["initial_family"], d["steps"], d["verdict"],
            d.get("final_family"), d.get("notes", []), d.get("step2_script"),
        )


@dataclass
class PipelineInput:
    """Everything run_pipeline needs, independent of the catalog file format."""

    group: str
    orbit: str
    alg: ChevalleyAlgebra
    e: np.ndarray
    h: np.ndarray | None = None
    tau: sl2.TauData | None = None
    regime: str = "bad"
    step2: list | str | None = None  # list of generators, or "auto"


def _prepare(inp: PipelineInput):
    alg = inp.alg
    e = np.asarray(inp.e, dtype=np.int64) % alg.p
    notes = []
    if inp.regime == "good":
        if inp.tau is None:
            raise ValueError("good-characteristic entries need tau weights")
        h = inp.tau.h_element(alg)
        if inp.h is not None and not np.array_equal(h, np.asarray(inp.h) % alg.p):
            raise ValueError("h from tau disagrees with the stored h")
        fbar = degree_minus_two_companion(alg, e, h, inp.tau.weights)
        if fbar is None:
            raise ValueError("no degree -2 companion for e")
        fam = build_family_good_char(alg, e, h, fbar, inp.tau)
        f_ref = fbar
    else:
        h = np.asarray(inp.h, dtype=np.int64) % alg.p if inp.h is not None else inp.tau.h_element(alg)
        t = sl2.complete_triple(alg, e, h)
        if t is None:
            raise ValueError("(e, h) has no companion f")
        f_ref = t.f
        fam = build_family_bad_char(alg, e, h, f_ref)
    if not sl2.verify_triple(alg, sl2.Sl2Triple(e, h, f_ref)):
        raise AssertionError("reference triple fails the sl2 relations")
    return e, h, f_ref, fam, notes


def _run_branch(alg, e, h, fam, script, steps, depth=0):
    """Steps 2 and 3 on one branch; returns (verdict, final family)."""
    if isinstance(script, str) and script == "auto":
        fam, moves = step2_auto(alg, e, h, fam)
        steps.append({"step": 2, "mode": "auto", "moves": [m.to_dict() for m in moves], "live": list(fam.labels)})
    else:
        moves = []
        for i, g in enumerate(script or []):
            if isinstance(g, dict) and "torus" in g:
                branches = torus_move(alg, e, fam, g["torus"], g["variable"])
                if branches is None:
                    moves.append(Move("torus", None, tuple(g["torus"]), g["variable"], "none"))
                    continue
                steps.append({"step": 2, "mode": "script", "moves": [m.to_dict() for m in moves], "live": list(fam.labels)})
                rest = script[i + 1 :]
                sub = []
                verdicts = []
                finals = []
                for bfam, mv in branches:
                    bsteps: list[dict] = []
                    v, final = _run_branch(alg, e, h, bfam, rest, bsteps, depth + 1)
                    sub.append({"move": mv.to_dict(), "steps": bsteps, "verdict": v})
                    verdicts.append(v)
                    finals.append(final)
                steps.append({"step": "branch", "branches": sub})
                live = [k for k, v in enumerate(verdicts) if v != EMPTY]
                if any(v == RESIDUAL for v in verdicts):
                    return RESIDUAL, None
                if len(live) == 1:
                    return UNIQUE, finals[live[0]]
                if not live:
                    return EMPTY, None
                return RESIDUAL, None
            fam, mvs = step2(alg, e, h, fam, [g])
            moves += mvs
        steps.append({"step": 2, "mode": "script", "moves": [m.to_dict() for m in moves], "live": list(fam.labels)})
    steps.append({"step": "family", "family": fam.to_dict(alg)})
    res = step3(alg, e, fam)
    steps.append({
        "step": 3,
        "R": res.R,
        "rounds": res.rounds,
        "verdict": res.verdict,
        "diagnostic": res.diagnostic,
        "live": list(res.family.labels) if res.family is not None else None,
    })
    return res.verdict, res.family


def run_pipeline(inp: PipelineInput, check_nilpotency_equations: bool = True) -> MonogamyCertificate:
    alg = inp.alg
    e, h, f_ref, fam, notes = _prepare(inp)
    initial = fam.to_dict(alg)
    steps: list[dict] = []
    mode = "auto" if inp.step2 == "auto" else "script"
    fam1, log = step1(alg, e, h, fam)
    steps.append(log)
    if fam1 is None:
        verdict, final = EMPTY, None
    else:
        steps.append({"step": "family", "family": fam1.to_dict(alg)})
        if fam1.nvars == 0:
            verdict, final = UNIQUE, fam1
        else:
            verdict, final = _run_branch(alg, e, h, fam1, inp.step2, steps)
        if check_nilpotency_equations and fam1.nvars and final is not None and final.nvars == 0:
            eqs = nilpotency_equations(alg, fam1) if fam1.nvars <= 8 else []
            names = fam1.labels
            # evaluate the recorded ad(f)^p = 0 equations at the final point
            point = _final_point(fam1, final)
            ok = all(q.evaluate(point) == 0 for q in eqs) if point is not None else None
            steps.append({"step": "nilpotency", "equations": len(eqs), "satisfied_at_final": ok, "variables": list(names)})
    final_dict = final.to_dict(alg) if final is not None else None
    if verdict == UNIQUE and final is not None and final.nvars == 0:
        if not np.array_equal(final.offset, f_ref):
            notes.append("final companion differs from the reference f")
        if not sl2.verify_triple(alg, sl2.Sl2Triple(e, h, final.offset)):
            raise AssertionError("final companion does not complete the triple")
    return MonogamyCertificate(
        group=inp.group,
        orbit=inp.orbit,
        p=alg.p,
        regime=inp.regime,
        mode=mode,
        e=element_to_json(alg, e),
        h=element_to_json(alg, h),
        f_reference=element_to_json(alg, f_ref),
        tau=list(inp.tau.weights) if inp.tau is not None else None,
        initial_family=initial,
        steps=steps,
        verdict=verdict,
        final_family=final_dict,
        notes=notes,
        step2_script=_script_to_json(inp.step2),
    )


def _script_to_json(script):
    if script is None or isinstance(script, str):
        return script
    out = []
    for g in script:
        if isinstance(g, dict):
            out.append({k: (list(v) if isinstance(v, (list, tuple)) else v) for k, v in g.items()})
        else:
            out.append([int(c) for c in g])
    return out


def _final_point(fam1: GenericElement, final: GenericElement):
    """Coordinates of the final point in fam1's variables, when it lies in fam1."""
    sol = fp.solve(fam1.directions.T, (final.offset - fam1.offset) % fam1.p, fam1.p)
    return None if sol is None else sol[0]


def certificate_input(cert: dict, alg: ChevalleyAlgebra) -> PipelineInput:
    """Rebuild the pipeline input recorded in a certificate document."""
    tau = sl2.TauData(tuple(cert["tau"]), cert["orbit"]) if cert.get("tau") is not None else None
    script = cert.get("step2_script")
    for s in [] if "step2_script" in cert else cert["steps"]:
        if s.get("step") == 2:
            if s["mode"] == "auto":
                script = "auto"
            else:
                script = [
                    ({"root": m["root"], "variable": m["variable"]} if m["kind"] == "root" and m["variable"]
                     else m["root"] if m["kind"] == "root"
                     else {"torus": m["weights"], "variable": m["variable"]})
                    for m in s["moves"]
                ]
            break
    return PipelineInput(
        group=cert["group"],
        orbit=cert["orbit"],
        alg=alg,
        e=element_from_json(alg, cert["e"]),
        h=element_from_json(alg, cert["h"]),
        tau=tau,
        regime=cert["regime"],
        step2=script,
    )


def replay(cert: dict) -> tuple[bool, list[str]]:
    """Re-run a certificate from scratch and compare it field by field."""
    from .chevalley import build_algebra
    from .rootsys import parse_group

    problems = []
    alg = build_algebra(parse_group(cert["group"]), cert["p"])
    inp = certificate_input(cert, alg)
    try:
        again = run_pipeline(inp).to_dict()
    except (ValueError, AssertionError) as exc:
        return False, [f"replay failed: {exc}"]
    for key in ("e", "h", "f_reference", "initial_family", "steps", "verdict", "final_family"):
        if json.loads(json.dumps(again[key])) != cert.get(key):
            problems.append(f"mismatch in {key}")
    # every recorded rank certificate must be valid for the recorded family
    for s in _walk_steps(cert["steps"]):
        if s.get("step") == "family":
            last = GenericElement.from_dict(alg, s["family"])
        if s.get("step") == 3:
            fam = last
            for rnd in s["rounds"]:
                M = step3_matrix(alg, fam)
                rc = RankCertificate.from_dict(rnd["certificate"])
                if rc.size != s["R"] or not verify_certificate(M, rc):
                    problems.append("recorded rank certificate is not valid")
                if "forced" in rnd:
                    subs = {
                        fam.labels.index(k): PolyFp(alg.p, fam.nvars, {tuple(ex): c for ex, c in v["terms"]})
                        for k, v in rnd["forced"].items()
                    }
                    fam = fam.substitute(subs)
    return not problems, problems


def _walk_steps(steps):
    for s in steps:
        if s.get("step") == "branch":
            for b in s["branches"]:
                yield from _walk_steps(b["steps"])
        else:
            yield s
