import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from modlie.exactalg import fp
from modlie.exactalg.constraints import linear_constraints
from modlie.exactalg.poly import PolyArray, PolyFp

PRIMES = [3, 5, 7, 11]


@st.composite
def matrices(draw, max_rows=7, max_cols=7):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return p, np.array(vals, dtype=np.int64).reshape(r, c)


def sympy_rank(m, p):
    return DomainMatrix([[GF(p)(int(x)) for x in row] for row in m], m.shape, GF(p)).rank()


@given(matrices())
def test_rank_matches_sympy(pm):
    p, m = pm
    assert fp.rank(m, p) == sympy_rank(m, p)


@given(matrices())
def test_kernel_is_kernel_of_full_dimension(pm):
    p, m = pm
    k = fp.kernel(m, p)
    assert k.shape[0] == m.shape[1] - fp.rank(m, p)
    if k.shape[0]:
        assert not fp.matmul_mod(m, k.T, p).any()
        assert fp.rank(k, p) == k.shape[0]


@given(matrices(), st.data())
def test_solve_finds_solutions_of_consistent_systems(pm, data):
    p, m = pm
    x = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=m.shape[1], max_size=m.shape[1])))
    b = fp.matmul_mod(m, x[:, None], p)[:, 0]
    y, k = fp.solve(m, b, p)
    assert np.array_equal(fp.matmul_mod(m, y[:, None], p)[:, 0], b)
    assert k.shape[0] == m.shape[1] - fp.rank(m, p)


def test_solve_reports_inconsistency():
    m = np.array([[1, 0], [1, 0]])
    assert fp.solve(m, np.array([0, 1]), 5) is None


@given(matrices(), matrices())
def test_intersection_lies_in_both(a, b):
    p, ma = a
    _, mb = b
    mb = mb % p
    if ma.shape[1] != mb.shape[1]:
        return
    inter = fp.intersect(ma, mb, p)
    for v in inter:
        assert fp.in_span(v, fp.row_space(ma, p), p) and fp.in_span(v, fp.row_space(mb, p), p)
    # dimension formula
    assert inter.shape[0] == fp.rank(ma, p) + fp.rank(mb, p) - fp.rank(np.vstack([ma, mb]), p)


# --- polynomials ------------------------------------------------------------


@st.composite
def polys(draw, p=5, nvars=3, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(0, 2)) for _ in range(nvars))
        terms[e] = draw(st.integers(1, p - 1))
    return PolyFp(p, nvars, terms)


points = st.lists(st.integers(0, 4), min_size=3, max_size=3)


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == PolyFp(5, 3)


@given(polys(), polys(), points)
def test_evaluation_is_a_homomorphism(a, b, pt):
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt) % 5
    assert (a + b).evaluate(pt) == (a.evaluate(pt) + b.evaluate(pt)) % 5


@given(polys(), polys(), polys(), points)
def test_substitution_commutes_with_evaluation(a, s0, s1, pt):
    subs = {0: s0, 1: s1}
    inner = [s0.evaluate(pt), s1.evaluate(pt), pt[2]]
    assert a.substitute(subs).evaluate(pt) == a.evaluate(inner)


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.integers(1, 4))
def test_matrix_power_commutes_with_evaluation(x0, x1, x2, k):
    rng = np.random.default_rng(x0 + 5 * x1 + 25 * x2)
    off = rng.integers(0, 5, size=(4, 4))
    dirs = [rng.integers(0, 5, size=(4, 4)) for _ in range(3)]
    m = PolyArray.affine(5, off, dirs)
    pt = [x0, x1, x2]
    assert np.array_equal(m.power(k).evaluate(pt), fp.matpow_mod(m.evaluate(pt), k, 5))
    assert np.array_equal(m.T.evaluate(pt), m.evaluate(pt).T)


def test_array_substitute_matches_entrywise():
    rng = np.random.default_rng(1)
    m = PolyArray.affine(7, rng.integers(0, 7, (3, 3)), [rng.integers(0, 7, (3, 3)) for _ in range(2)]).power(2)
    subs = {0: PolyFp.var(7, 2, 1, 3) + 2}
    lhs = m.substitute(subs)
    for idx in np.ndindex(3, 3):
        assert lhs.entry(idx) == m.entry(idx).substitute(subs)


def test_to_str():
    q = PolyFp.var(5, 2, 0) * PolyFp.var(5, 2, 1, 3) + 4
    assert q.to_str() == "3*x1*x2 + 4"
    assert PolyFp(5, 2).to_str() == "0"


def test_linear_constraints():
    p, n = 5, 3
    x = [PolyFp.var(p, n, i) for i in range(n)]
    red = linear_constraints([x[0] + x[2] - 1, x[1] * x[2] + x[0]], p, n)
    assert red.eliminated == [0]
    assert red.substitution[0] == 1 - x[2]
    assert red.residual == [x[1] * x[2] - x[2] + 1]
    assert linear_constraints([x[0], x[0] - 1], p, n) is None


@pytest.mark.parametrize("p", PRIMES)
def test_matpow_against_repeated_products(p):
    rng = np.random.default_rng(p)
    a = rng.integers(0, p, (6, 6))
    acc = np.eye(6, dtype=np.int64)
    for k in range(6):
        assert np.array_equal(fp.matpow_mod(a, k, p), acc)
        acc = acc @ a % p
