import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modlie.exactalg import fp
from modlie.exactalg.certificate import (
    RankCertificate,
    find_rank_certificate,
    vanishing_rows,
    verify_certificate,
)
from modlie.exactalg.poly import PolyArray


def random_affine_matrix(seed, p=5, n=6, nvars=2, density=0.35):
    rng = np.random.default_rng(seed)
    mask = lambda: rng.random((n, n)) < density  # noqa: E731
    off = rng.integers(1, p, (n, n)) * mask()
    dirs = [rng.integers(1, p, (n, n)) * mask() for _ in range(nvars)]
    return PolyArray.affine(p, off, dirs)


@settings(max_examples=60)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_certificate_soundness_under_random_evaluation(seed, target):
    p = 5
    m = random_affine_matrix(seed, p)
    cert = find_rank_certificate(m, target)
    if cert is None:
        return
    assert verify_certificate(m, cert)
    dead = vanishing_rows(m, cert)
    rng = np.random.default_rng(seed)
    for _ in range(20):  # 60 examples x 20 points >= 1000 evaluations
        pt = rng.integers(0, p, m.nvars)
        val = m.evaluate(pt)
        r = fp.rank(val, p)
        assert r >= cert.size
        if r == cert.size:
            assert not val[dead].any()


def test_certificate_rejects_tampering():
    m = PolyArray.constant(5, 1, np.array([[1, 3], [0, 2]]))
    good = RankCertificate((0, 1), (0, 1), (1, 2))
    assert verify_certificate(m, good)
    assert not verify_certificate(m, RankCertificate((1, 0), (0, 1), (0, 3)))
    assert not verify_certificate(m, RankCertificate((0, 1), (0, 1), (1, 3)))
    assert not verify_certificate(m, RankCertificate((0, 0), (0, 1), (1, 1)))


def test_non_constant_diagonal_is_not_a_certificate():
    m = PolyArray.affine(5, np.zeros((1, 1), dtype=np.int64), [np.ones((1, 1), dtype=np.int64)])
    assert find_rank_certificate(m, 1) is None
    assert find_rank_certificate(m, 0).size == 0


def test_round_trip():
    c = RankCertificate((3, 1), (0, 2), (1, 4))
    assert RankCertificate.from_dict(c.to_dict()) == c


@pytest.mark.parametrize("seed", range(5))
def test_search_reaches_generic_rank_of_constant_matrices(seed):
    rng = np.random.default_rng(seed)
    a = np.triu(rng.integers(1, 7, (5, 5)))
    m = PolyArray.constant(7, 0, a[rng.permutation(5)][:, rng.permutation(5)])
    cert = find_rank_certificate(m, 5)
    assert cert is not None and cert.size == 5
