import json

import pytest

from modlie import catalog, sl2
from modlie.orbits import is_valid


def write(tmp_path, doc):
    path = tmp_path / "cat.json"
    path.write_text(json.dumps(doc))
    return path


def g2_doc():
    return json.loads((catalog.data_dir() / "g2_p3.json").read_text())


def test_bundled_entries_named_examples():
    cat = catalog.bundled("G2", 3)
    alg = cat.algebra()
    assert cat.get("A1").representative == ((1, (0, 1)),)
    e7 = catalog.bundled("E7", 3).get("(A1^3)^(1)")
    assert [r for _, r in e7.representative] == [(0, 1, 0, 0, 0, 0, 0), (0, 0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 0, 0, 1)]
    for o in cat.entries:
        assert sl2.is_nilpotent(alg, o.e(alg))


@pytest.mark.parametrize("group,p", catalog.bundled_pairs())
def test_in_v_entries_are_restricted(group, p):
    cat = catalog.bundled(group, p)
    alg = cat.algebra()
    for o in cat.entries:
        if o.expected_in_V:
            assert sl2.is_restricted(alg, o.e(alg)), o.orbit_name


def test_loader_rejects_non_nilpotent(tmp_path):
    doc = g2_doc()
    doc["orbits"][1]["rep"] = [[1, [0, 1]], [1, [0, -1]]]
    with pytest.raises(catalog.CatalogError, match="A1"):
        catalog.load_catalog(write(tmp_path, doc))


def test_loader_rejects_inconsistent_h(tmp_path):
    doc = g2_doc()
    doc["orbits"][1]["h"] = [1, 0]
    with pytest.raises(catalog.CatalogError, match=r"A1: \[h, e\]"):
        catalog.load_catalog(write(tmp_path, doc))


def test_loader_rejects_wrong_tau(tmp_path):
    doc = json.loads((catalog.data_dir() / "g2_p5.json").read_text())
    doc["orbits"][1]["tau"] = [1, 1]
    with pytest.raises(catalog.CatalogError, match="A1"):
        catalog.load_catalog(write(tmp_path, doc))


def test_loader_rejects_false_in_v_flag(tmp_path):
    doc = g2_doc()
    doc["orbits"][-1]["in_V"] = True
    with pytest.raises(catalog.CatalogError, match="G2: marked in V"):
        catalog.load_catalog(write(tmp_path, doc))


def test_loader_rejects_schema_and_regime(tmp_path):
    doc = g2_doc()
    doc["schema"] = 2
    with pytest.raises(catalog.CatalogError):
        catalog.load_catalog(write(tmp_path, doc))
    doc = g2_doc()
    doc["orbits"][0]["regime"] = "odd"
    with pytest.raises(catalog.CatalogError, match="regime"):
        catalog.load_catalog(write(tmp_path, doc))


def test_unknown_orbit_and_pair():
    with pytest.raises(KeyError):
        catalog.bundled("G2", 3).get("E8")
    with pytest.raises(catalog.CatalogError):
        catalog.bundled("F4", 3)


@pytest.mark.parametrize("group,p,orbit", [
    ("G2", 5, "G2(a1)"), ("E6", 11, "E6(a1)"), ("E7", 19, "E7"), ("E7", 101, "E7"),
    ("E8", 7, "E8(a7)"), ("F4", 5, "F4(a3)"), ("G2", 3, "(~A1)_(3)"),
])
def test_v_top_lookup(group, p, orbit):
    assert catalog.v_top_orbit(group, p) == orbit


def test_v_top_unknown():
    with pytest.raises(catalog.CatalogError):
        catalog.v_top_orbit("E7", 2)
    with pytest.raises(catalog.CatalogError):
        catalog.v_top_orbit("A3", 5)


def test_g2_p3_hasse_diagram():
    nodes, edges = catalog.g2_p3_hasse()
    assert len(nodes) == 6 and len(edges) == 6
    lower = {b for _, b in edges}
    upper = {a for a, _ in edges}
    assert [n for n in nodes if n not in upper] == ["0"]
    assert {b for a, b in edges if a == "(~A1)_(3)"} == {"~A1", "A1"}
    assert set(catalog.bundled("G2", 3).names()) == set(nodes)
    assert lower | upper == set(nodes)


def test_e8_p5_d8_partitions_are_d_partitions():
    rows = catalog.e8_p5_d8_partitions()
    assert all(sum(lam) == 16 and is_valid("D", lam) for _, lam in rows)


def test_nonsmooth_normalisers_is_opaque_reference_data():
    ex = catalog.smooth_normaliser_exclusions()
    assert ex["G2", 3] == ["G2(a1)"]
    assert len(ex["E8", 3]) == 12
