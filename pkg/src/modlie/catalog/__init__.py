"""Bundled orbit data and the loader that re-verifies it.

Orbit files hold one (group, p) each.  The schema is described in
``docs/catalog_schema.md``; in short::

    {"schema": 1, "group": "G2", "p": 3,
     "orbits": [{"name": "A1", "rep": [[1, [0, 1]]], "tau": null, "h": [0, 1],
                 "regime": "bad", "step2": [], "in_V": true}, ...]}

Roots are always given by coefficient vectors over the simple roots, so
the files do not depend on how the algebra orders its basis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .. import sl2
from ..chevalley import ChevalleyAlgebra, build_algebra
from ..rootsys import parse_group

SCHEMA_VERSION = 1
REGIMES = ("bad", "good")


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class OrbitEntry:
    group_label: str
    p: int
    orbit_name: str
    representative: tuple[tuple[int, tuple[int, ...]], ...]
    tau_weights: sl2.TauData | None
    regime: str
    step2_script: list | str | None
    expected_in_V: bool
    h_coeffs: tuple[int, ...] | None = None
    note: str = ""

    def e(self, alg: ChevalleyAlgebra) -> np.ndarray:
        return alg.element(self.representative)

    def h(self, alg: ChevalleyAlgebra) -> np.ndarray | None:
        if self.tau_weights is not None:
            return self.tau_weights.h_element(alg)
        if self.h_coeffs is not None:
            return alg.h(self.h_coeffs)
        return None

    @property
    def runnable(self) -> bool:
        """True when the entry carries what the monogamy pipeline needs."""
        return self.step2_script is not None and (self.tau_weights is not None or self.h_coeffs is not None)

    def pipeline_input(self, alg: ChevalleyAlgebra, step2=None):
        from ..monogamy import PipelineInput

        if not self.runnable:
            raise CatalogError(f"{self.group_label} p={self.p} {self.orbit_name}: entry has no pipeline data")
        return PipelineInput(
            group=self.group_label,
            orbit=self.orbit_name,
            alg=alg,
            e=self.e(alg),
            h=alg.h(self.h_coeffs) if self.h_coeffs is not None else None,
            tau=self.tau_weights,
            regime=self.regime,
            step2=self.step2_script if step2 is None else step2,
        )


@dataclass
class Catalog:
    group_label: str
    p: int
    entries: list[OrbitEntry] = field(default_factory=list)

    def names(self) -> list[str]:
        return [o.orbit_name for o in self.entries]

    def get(self, name: str) -> OrbitEntry:
        for o in self.entries:
            if o.orbit_name == name:
                return o
        raise KeyError(f"no orbit {name!r} in the {self.group_label} p={self.p} catalog; known: {self.names()}")

    def algebra(self) -> ChevalleyAlgebra:
        return _algebra(self.group_label, self.p)


@lru_cache(maxsize=None)
def _algebra(group: str, p: int) -> ChevalleyAlgebra:
    return build_algebra(parse_group(group), p)


def _parse_entry(group: str, p: int, raw: dict) -> OrbitEntry:
    name = raw.get("name")
    if not isinstance(name, str):
        raise CatalogError(f"{group} p={p}: orbit without a name")
    try:
        rep = tuple((int(c), tuple(int(x) for x in r)) for c, r in raw["rep"])
        tau = raw.get("tau")
        h = raw.get("h")
        entry = OrbitEntry(
            group_label=group,
            p=p,
            orbit_name=name,
            representative=rep,
            tau_weights=sl2.TauData(tuple(int(w) for w in tau), name) if tau is not None else None,
            regime=raw["regime"],
            step2_script=raw.get("step2"),
            expected_in_V=bool(raw["in_V"]),
            h_coeffs=tuple(int(c) for c in h) if h is not None else None,
            note=raw.get("note", ""),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CatalogError(f"{group} p={p} {name}: malformed entry ({exc})") from exc
    if entry.regime not in REGIMES:
        raise CatalogError(f"{group} p={p} {name}: unknown regime {entry.regime!r}")
    return entry


def validate_entry(alg: ChevalleyAlgebra, o: OrbitEntry) -> None:
    """Raise CatalogError naming the entry if any invariant fails."""
    where = f"{o.group_label} p={o.p} {o.orbit_name}"
    try:
        e = o.e(alg)
    except KeyError as exc:
        raise CatalogError(f"{where}: representative uses a non-root {exc}") from exc
    if not sl2.is_nilpotent(alg, e):
        raise CatalogError(f"{where}: representative is not nilpotent")
    if o.expected_in_V and not sl2.is_restricted(alg, e):
        raise CatalogError(f"{where}: marked in V but ad(e)^p != 0")
    if o.tau_weights is not None:
        if len(o.tau_weights.weights) != alg.rs.rank:
            raise CatalogError(f"{where}: tau has the wrong length")
        degs = {alg.degree(k, o.tau_weights.weights) for k in np.nonzero(e)[0]}
        if degs - {2}:
            raise CatalogError(f"{where}: e is not in degree 2 for tau (degrees {sorted(degs)})")
    h = o.h(alg)
    if h is not None:
        if o.tau_weights is not None and o.h_coeffs is not None and not np.array_equal(h, alg.h(o.h_coeffs)):
            raise CatalogError(f"{where}: stored h disagrees with tau")
        if not np.array_equal(alg.bracket(h, e), 2 * e % alg.p):
            raise CatalogError(f"{where}: [h, e] != 2e")
    if o.step2_script is not None and h is None:
        raise CatalogError(f"{where}: a step2 script needs tau or h")


def parse_catalog(doc: dict, validate: bool = True) -> Catalog:
    if doc.get("schema") != SCHEMA_VERSION:
        raise CatalogError(f"unsupported catalog schema {doc.get('schema')!r}")
    group, p = doc["group"], int(doc["p"])
    cat = Catalog(group, p, [_parse_entry(group, p, raw) for raw in doc["orbits"]])
    if len(set(cat.names())) != len(cat.entries):
        raise CatalogError(f"{group} p={p}: duplicate orbit names")
    if validate:
        alg = cat.algebra()
        for o in cat.entries:
            validate_entry(alg, o)
    return cat


def load_catalog(path) -> Catalog:
    """Read and validate one catalog file; a bad entry rejects the whole file."""
    with open(path, encoding="utf-8") as fh:
        return parse_catalog(json.load(fh))


def _data(name: str) -> dict:
    return json.loads(resources.files(__name__).joinpath("data", name).read_text(encoding="utf-8"))


def data_dir() -> Path:
    return Path(str(resources.files(__name__).joinpath("data")))


def bundled_pairs() -> list[tuple[str, int]]:
    out = []
    for f in sorted(data_dir().glob("*_p*.json")):
        if f.stem.count("_") == 1:
            g, p = f.stem.split("_p")
            out.append((g.upper(), int(p)))
    return out


@lru_cache(maxsize=None)
def bundled(group: str, p: int) -> Catalog:
    path = data_dir() / f"{group.lower()}_p{p}.json"
    if not path.exists():
        raise CatalogError(f"no bundled catalog for {group} p={p}")
    return load_catalog(path)


# --- reference tables --------------------------------------------------------


@dataclass(frozen=True)
class VTopRow:
    group: str
    p_text: str
    p_min: int
    p_max: int | None
    orbit: str
    latex: str

    def covers(self, p: int) -> bool:
        return p >= self.p_min and (self.p_max is None or p <= self.p_max)


def v_top_table() -> list[VTopRow]:
    return [VTopRow(r["group"], r["p"], r["p_min"], r["p_max"], r["orbit"], r["latex"]) for r in _data("v_top.json")["rows"]]


def v_top_orbit(group: str, p: int) -> str:
    group = group.upper()
    for row in v_top_table():
        if row.group == group and row.covers(p):
            return row.orbit
    raise CatalogError(f"no V-top entry for ({group}, {p})")


def e8_p5_d8_partitions() -> list[tuple[str, tuple[int, ...]]]:
    from ..orbits import parse_parts

    return [(r["orbit"], parse_parts(r["partition"])) for r in _data("e8_p5_d8_partitions.json")["rows"]]


def smooth_normaliser_exclusions() -> dict[tuple[str, int], list[str]]:
    """Classes with non-smooth normaliser; carried as reference data, never computed."""
    return {(r["group"], r["p"]): list(r["classes"]) for r in _data("nonsmooth_normalisers.json")["rows"]}


def g2_p3_hasse() -> tuple[list[str], list[tuple[str, str]]]:
    d = _data("g2_p3_hasse.json")
    return list(d["nodes"]), [tuple(e) for e in d["edges"]]
