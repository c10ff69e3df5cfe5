import copy
import json

import numpy as np
import pytest

from modlie import catalog, monogamy as mg, sl2
from modlie.exactalg.poly import PolyFp

from .conftest import algebra


def g2(p):
    cat = catalog.bundled("G2", p)
    return cat, cat.algebra()


def test_generic_element_substitution_matches_evaluation():
    alg = algebra("G2", 5)
    rng = np.random.default_rng(0)
    fam = mg.GenericElement(5, rng.integers(0, 5, alg.dim), np.eye(alg.dim, dtype=np.int64)[:3], ("x1", "x2", "x3"))
    subs = {0: PolyFp.var(5, 3, 2, 2) + 1}
    new = fam.substitute(subs)
    for z in range(5):
        for y in range(5):
            assert np.array_equal(new.evaluate([y, z]), fam.evaluate([(2 * z + 1) % 5, y, z]))
    assert new.labels == ("x2", "x3")
    with pytest.raises(ValueError):
        mg.GenericElement(5, alg.zero(), np.array([alg.e((1, 0)), 2 * alg.e((1, 0))]), ("a", "b"))


def test_family_json_round_trip():
    cat, alg = g2(3)
    o = cat.get("A1")
    fam = mg.build_family_bad_char(alg, o.e(alg), o.h(alg))
    again = mg.GenericElement.from_dict(alg, json.loads(json.dumps(fam.to_dict(alg))))
    assert again.same_as(fam)


def test_bad_char_family_is_f_plus_eigenspace():
    cat, alg = g2(3)
    o = cat.get("A1")
    e, h = o.e(alg), o.h(alg)
    fam = mg.build_family_bad_char(alg, e, h)
    assert fam.nvars == sl2.minus_two_eigenspace(alg, h).shape[0] == 5
    fam1, log = mg.step1(alg, e, h, fam)
    rng = np.random.default_rng(3)
    for _ in range(20):
        f = fam1.evaluate(rng.integers(0, 3, fam1.nvars))
        assert np.array_equal(alg.bracket(e, f), h)


def test_root_move_requires_centraliser():
    cat, alg = g2(3)
    o = cat.get("~A1")
    e, h = o.e(alg), o.h(alg)
    fam = mg.build_family_bad_char(alg, e, h)
    with pytest.raises(ValueError):
        mg.root_move(alg, e, h, fam, (0, 1))


def test_root_move_stays_in_the_orbit():
    cat, alg = g2(3)
    o = cat.get("~A1")
    e, h = o.e(alg), o.h(alg)
    fam, _ = mg.step1(alg, e, h, mg.build_family_bad_char(alg, e, h))
    out = mg.root_move(alg, e, h, fam, (3, 1))
    assert out is not None
    new, move = out
    assert new.nvars == fam.nvars - 1 and move.kind == "root"
    # every point of the old family is conjugate to a point of the new one
    x = alg.e((3, 1))
    assert not alg.bracket(x, e).any() and not alg.bracket(x, h).any()
    rng = np.random.default_rng(0)
    for _ in range(10):
        f = fam.evaluate(rng.integers(0, 3, fam.nvars))
        hits = [t for t in range(3) if mg._final_point(new, mg.GenericElement(3, alg.root_group_act((3, 1), t, f), np.zeros((0, alg.dim)), ())) is not None]
        assert hits


def test_torus_move_branches():
    cat, alg = g2(5)
    o = cat.get("~A1")
    c = mg.run_pipeline(o.pipeline_input(alg, [{"torus": [0, 1], "variable": "x1"}]))
    assert c.verdict == mg.UNIQUE
    branch = next(s for s in c.steps if s["step"] == "branch")
    assert [b["verdict"] for b in branch["branches"]] == [mg.UNIQUE, mg.EMPTY]
    assert mg.replay(c.to_dict()) == (True, [])
    with pytest.raises(ValueError):
        mg.torus_move(alg, o.e(alg), mg.build_family_bad_char(alg, o.e(alg), o.h(alg)), (1, 0), "x1")


@pytest.mark.parametrize("p,name,mode", [(3, "A1", None), (3, "~A1", None), (3, "~A1", "auto"), (5, "G2(a1)", None), (5, "~A1", None)])
def test_pipeline_unique_and_replayable(p, name, mode):
    cat, alg = g2(p)
    c = mg.run_pipeline(cat.get(name).pipeline_input(alg, mode))
    assert c.verdict == mg.UNIQUE
    d = json.loads(c.to_json())
    assert mg.MonogamyCertificate.from_dict(d).to_dict() == d
    assert mg.replay(d) == (True, [])


def test_replay_detects_tampering():
    cat, alg = g2(3)
    d = mg.run_pipeline(cat.get("A1").pipeline_input(alg)).to_dict()
    bad = copy.deepcopy(d)
    bad["verdict"] = mg.RESIDUAL
    assert not mg.replay(bad)[0]
    bad = copy.deepcopy(d)
    step3 = next(s for s in bad["steps"] if s["step"] == 3)
    step3["rounds"][0]["certificate"]["diagonal"] = [2]
    ok, problems = mg.replay(bad)
    assert not ok and any("rank certificate" in q for q in problems)


def test_step3_without_any_moves_still_pins_a1():
    cat, alg = g2(3)
    o = cat.get("A1")
    e, h = o.e(alg), o.h(alg)
    fam, _ = mg.step1(alg, e, h, mg.build_family_bad_char(alg, e, h))
    res = mg.step3(alg, e, fam)
    assert res.verdict == mg.UNIQUE and res.R == 1
    assert np.array_equal(res.family.offset, sl2.complete_triple(alg, e, h).f)


def test_h_rigidity_report():
    cat, alg = g2(3)
    o = cat.get("A1")
    rep = mg.verify_h_rigidity(alg, o.e(alg), o.h(alg))
    assert rep["intersection_zero"] and rep["p_nilpotent"]


def test_good_char_family_degrees():
    alg = algebra("E7", 7)
    o = catalog.bundled("E7", 7).get("(A5)^(2)")
    e, tau = o.e(alg), o.tau_weights
    h = tau.h_element(alg)
    fbar = mg.degree_minus_two_companion(alg, e, h, tau.weights)
    fam = mg.build_family_good_char(alg, e, h, fbar, tau)
    assert fam.nvars == 6
    for d in fam.directions:
        degs = {alg.degree(k, tau.weights) for k in np.nonzero(d)[0]}
        assert len(degs) == 1 and (degs.pop() + 2) % 7 == 0
        assert not alg.bracket(e, d).any()


def test_missing_tau_is_an_error():
    alg = algebra("G2", 5)
    inp = mg.PipelineInput("G2", "x", alg, alg.e((0, 1)), regime="good", step2=[])
    with pytest.raises(ValueError):
        mg.run_pipeline(inp)
