import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modlie import catalog, sl2
from modlie.exactalg import fp

from .conftest import algebra

RUNNABLE = [
    (g, p, o.orbit_name)
    for g, p in catalog.bundled_pairs()
    for o in catalog.bundled(g, p).entries
    if o.runnable and g in ("G2", "E7") and (g, p) != ("E7", 7)
]


@pytest.mark.parametrize("group,p,name", RUNNABLE)
def test_triple_completion_postconditions(group, p, name):
    cat = catalog.bundled(group, p)
    alg = cat.algebra()
    o = cat.get(name)
    e, h = o.e(alg), o.h(alg)
    t = sl2.complete_triple(alg, e, h)
    assert t is not None and sl2.verify_triple(alg, t)
    assert fp.in_span(t.f, sl2.minus_two_eigenspace(alg, h), p)


def test_complete_triple_rejects_bad_pairs():
    alg = algebra("G2", 5)
    e = alg.e((1, 0))
    with pytest.raises(ValueError):
        sl2.complete_triple(alg, e, alg.h((0, 1)))


@given(st.sampled_from([("A2", 5), ("B2", 5), ("G2", 7)]), st.data())
def test_completion_of_root_triples(gp, data):
    alg = algebra(*gp)
    r = data.draw(st.sampled_from(alg.rs.positive_roots))
    h = alg.h(alg.rs.coroot(r))
    t = sl2.complete_triple(alg, alg.e(r), h)
    assert sl2.verify_triple(alg, t)
    # the companion is unique in this case and equals e_{-r}
    assert np.array_equal(t.f, alg.e(tuple(-c for c in r)))


def test_graded_companion_subspace():
    alg = algebra("E7", 7)
    tau = sl2.TauData((2, -9, 2, 2, 2, 2, -5))
    e = alg.element([(1, alg.rs.simple_root(i)) for i in (0, 2, 3, 4, 5)])
    h = tau.h_element(alg)
    sub = np.array([alg.e(r) for r in alg.basis_roots[: 2 * alg.npos] if alg.degree(alg.index(r), tau.weights) == -2])
    t = sl2.complete_triple(alg, e, h, subspace=sub)
    assert sl2.verify_triple(alg, t)
    assert all(alg.degree(k, tau.weights) == -2 for k in np.nonzero(t.f)[0])


def test_restricted_and_nilpotent():
    alg = algebra("G2", 3)
    assert sl2.is_restricted(alg, alg.e((0, 1)))
    assert not sl2.is_restricted(alg, alg.element([(1, (1, 0)), (1, (0, 1))]))
    assert sl2.is_nilpotent(alg, alg.element([(1, (1, 0)), (1, (0, 1))]))
    assert not sl2.is_nilpotent(alg, alg.h((1, 0)))


def test_rank_order_symbols():
    alg = algebra("G2", 3)
    x, y = alg.e((0, 1)), alg.element([(1, (0, 1)), (1, (3, 1))])
    assert sl2.compare_rank_order(alg, x, y)[0] == sl2.PRECEDES
    assert sl2.compare_rank_order(alg, y, x)[0] == sl2.SUCCEEDS
    assert sl2.compare_rank_order(alg, x, x) == (sl2.EQUIVALENT, 1, 1)


# --- baby Verma -----------------------------------------------------------------


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_baby_verma_module(p):
    E, H, F = sl2.baby_verma_triple(p)
    assert sl2.matrix_sl2_relations(E, H, F, p)
    assert sl2.jordan_block_sizes(E, p) == [p]
    assert sl2.baby_verma_is_nonsplit(E, H, F, p)
    # v_0 generates the whole module
    v0 = np.eye(p, dtype=np.int64)[0]
    assert sl2.generated_submodule([E, H, F], v0, p).shape[0] == p


def test_split_module_is_detected():
    p = 5
    # trivial module plus the (p-1)-dimensional simple quotient: E acts with a smaller block
    E, H, F = sl2.baby_verma_triple(p)
    E2, H2, F2 = E.copy(), H.copy(), F.copy()
    E2[1, 0] = 0
    F2[0, 1] = 0
    assert sl2.matrix_sl2_relations(E2, H2, F2, p)
    assert not sl2.baby_verma_is_nonsplit(E2, H2, F2, p)


@given(st.lists(st.integers(1, 5), min_size=1, max_size=4))
def test_jordan_blocks_of_direct_sums(sizes):
    n = sum(sizes)
    m = np.zeros((n, n), dtype=np.int64)
    start = 0
    for s in sizes:
        for i in range(s - 1):
            m[start + i + 1, start + i] = 1
        start += s
    assert sl2.jordan_block_sizes(m, 7) == sorted(sizes, reverse=True)
