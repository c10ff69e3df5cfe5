"""Nilpotent orbits of the classical groups as partitions.

Family A: all partitions of m.  B and D (orthogonal): even parts occur
with even multiplicity.  C (symplectic): odd parts occur with even
multiplicity.  In family D a very even partition (all parts even, each
with even multiplicity) labels two orbits, tagged "I" and "II".
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import accumulate

FAMILIES = ("A", "B", "C", "D")


def partitions(m: int, largest: int | None = None):
    """Partitions of m as weakly decreasing tuples, in reverse lexicographic order."""
    if largest is None:
        largest = m
    if m == 0:
        yield ()
        return
    for first in range(min(m, largest), 0, -1):
        for rest in partitions(m - first, first):
            yield (first,) + rest


def is_very_even(parts) -> bool:
    c = Counter(parts)
    return bool(parts) and all(k % 2 == 0 and v % 2 == 0 for k, v in c.items())


def is_valid(family: str, parts) -> bool:
    c = Counter(parts)
    if family == "A":
        return True
    if family in ("B", "D"):
        return all(v % 2 == 0 for k, v in c.items() if k % 2 == 0)
    if family == "C":
        return all(v % 2 == 0 for k, v in c.items() if k % 2 == 1)
    raise ValueError(f"unknown family {family!r}")


def format_parts(parts) -> str:
    """(5,4,4,1,1,1) -> '5,4^2,1^3'."""
    out = []
    for k, grp in _runs(parts):
        out.append(f"{k}^{grp}" if grp > 1 else str(k))
    return ",".join(out)


def _runs(parts):
    i = 0
    while i < len(parts):
        j = i
        while j < len(parts) and parts[j] == parts[i]:
            j += 1
        yield parts[i], j - i
        i = j


def parse_parts(text: str) -> tuple[int, ...]:
    """'5,4^2,1^3' or '(5,4^2,1^3)' -> (5,4,4,1,1,1)."""
    text = text.strip().strip("()").replace(" ", "")
    parts: list[int] = []
    for tok in filter(None, text.split(",")):
        base, _, mult = tok.partition("^")
        parts += [int(base)] * int(mult or 1)
    return tuple(sorted(parts, reverse=True))


@dataclass(frozen=True, order=True)
class PartitionOrbit:
    family: str
    m: int
    parts: tuple[int, ...]
    tag: str = ""

    def __post_init__(self):
        if sum(self.parts) != self.m:
            raise ValueError(f"parts {self.parts} do not sum to {self.m}")
        if list(self.parts) != sorted(self.parts, reverse=True):
            raise ValueError("parts must be weakly decreasing")
        if not is_valid(self.family, self.parts):
            raise ValueError(f"{self.parts} is not a valid {self.family}-partition")
        if self.tag and not (self.family == "D" and is_very_even(self.parts)):
            raise ValueError("only very even D-partitions carry a tag")

    @property
    def label(self) -> str:
        s = f"({format_parts(self.parts)})"
        return f"{s}_{self.tag}" if self.tag else s

    def __str__(self) -> str:
        return self.label


def valid_partitions(family: str, m: int) -> list[PartitionOrbit]:
    family = family.upper()
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    out = []
    for lam in partitions(m):
        if not is_valid(family, lam):
            continue
        if family == "D" and is_very_even(lam):
            out += [PartitionOrbit(family, m, lam, "I"), PartitionOrbit(family, m, lam, "II")]
        else:
            out.append(PartitionOrbit(family, m, lam))
    return out


def dominates(lam, mu) -> bool:
    """True iff every prefix sum of lam is at least that of mu."""
    lam, mu = tuple(lam), tuple(mu)
    if sum(lam) != sum(mu):
        raise ValueError("dominance needs partitions of the same integer")
    n = max(len(lam), len(mu))
    a = list(accumulate(lam + (0,) * (n - len(lam))))
    b = list(accumulate(mu + (0,) * (n - len(mu))))
    return all(x >= y for x, y in zip(a, b))


@dataclass
class HasseDiagram:
    nodes: list[PartitionOrbit]
    edges: list[tuple[PartitionOrbit, PartitionOrbit]]  # (upper, lower) covers

    def to_dot(self, name: str = "hasse") -> str:
        return dot_graph(name, [n.label for n in self.nodes], [(a.label, b.label) for a, b in self.edges])


def dot_graph(name: str, nodes, edges) -> str:
    def q(s):
        return '"' + str(s).replace('"', r"\"") + '"'

    lines = [f"digraph {q(name)} {{", "  rankdir=TB;"]
    lines += [f"  {q(n)};" for n in nodes]
    lines += [f"  {q(a)} -> {q(b)};" for a, b in edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def _covers(parts_list):
    """Covering pairs of dominance on the given partitions."""
    below = {
        a: [b for b in parts_list if b != a and dominates(a, b)] for a in parts_list
    }
    out = []
    for a in parts_list:
        for b in below[a]:
            if not any(c != b and b in below[c] for c in below[a]):
                out.append((a, b))
    return out


def hasse_diagram(family: str, m: int, split_d: bool = True) -> HasseDiagram:
    """Covers of dominance on valid partitions; in family D, very even nodes are doubled.

    An edge between two very even partitions becomes I -> I and II -> II.
    With split_d=False the D diagram keeps one untagged node per partition.
    """
    family = family.upper()
    plain = [lam for lam in partitions(m) if is_valid(family, lam)]
    covers = _covers(plain)

    def copies(lam):
        if family == "D" and split_d and is_very_even(lam):
            return [PartitionOrbit(family, m, lam, "I"), PartitionOrbit(family, m, lam, "II")]
        return [PartitionOrbit(family, m, lam)]

    nodes = [n for lam in plain for n in copies(lam)]
    edges = []
    for a, b in covers:
        ca, cb = copies(a), copies(b)
        if len(ca) == 2 and len(cb) == 2:
            edges += [(ca[0], cb[0]), (ca[1], cb[1])]
        else:
            edges += [(x, y) for x in ca for y in cb]
    return HasseDiagram(nodes, edges)


def is_restricted(parts, p: int) -> bool:
    return max(parts, default=0) <= p


def is_in_V(parts, family: str, p: int) -> bool:
    """Restricted, and not regular in a Levi with a factor of type A_{p-1}."""
    if not is_restricted(parts, p):
        return False
    n = list(parts).count(p)
    return n == 0 if family.upper() in ("A", "C") else n <= 1


def v_top_partition(family: str, m: int, p: int) -> PartitionOrbit:
    """The partition whose orbit closure is V, following the classical case table."""
    family = family.upper()
    if family == "B" and m % 2 == 0 or family in ("C", "D") and m % 2 == 1:
        raise ValueError(f"m = {m} has the wrong parity for family {family}")
    q = p - 1
    if family in ("A", "C"):
        a, r = divmod(m, q)
        parts = [q] * a + [r]
    elif family == "B":
        if m <= p:
            parts = [m]
        else:
            a, r = divmod(m - p, q)
            if r > 0:
                parts = [p] + [q] * a + [r - 1, 1] if a % 2 == 0 else [p] + [q] * (a - 1) + [p - 2, r + 1]
            else:
                parts = [p] + [q] * a if a % 2 == 0 else [p] + [q] * (a - 1) + [p - 2, 1]
    elif family == "D":
        if m <= p:
            parts = [m - 1, 1]
        else:
            a, r = divmod(m - p, q)
            parts = [p] + [q] * a + [r] if a % 2 == 0 else [p] + [q] * (a - 1) + [p - 2, r, 1]
    else:
        raise ValueError(f"unknown family {family!r}")
    lam = tuple(sorted((x for x in parts if x > 0), reverse=True))
    return PartitionOrbit(family, m, lam)


def v_top_brute_force(family: str, m: int, p: int) -> list[tuple[int, ...]]:
    """Maximal elements under dominance among valid partitions in V (oracle)."""
    cands = [lam for lam in partitions(m) if is_valid(family, lam) and is_in_V(lam, family, p)]
    return [a for a in cands if not any(b != a and dominates(b, a) for b in cands)]
