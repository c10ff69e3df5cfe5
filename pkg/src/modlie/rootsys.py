"""Root systems of the simple types in Bourbaki numbering.

Roots are integer coefficient vectors over the simple roots.  The Cartan
matrix is stored as ``cartan_matrix[i][j] = <alpha_j, alpha_i^vee>``, so that
for ``h = sum_i c_i h_i`` and a root ``beta = sum_j b_j alpha_j`` one has
``[h, e_beta] = (sum_ij c_i * cartan_matrix[i][j] * b_j) e_beta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

Vec = tuple[int, ...]

_KNOWN_COUNTS = {
    "G": lambda n: 6,
    "F": lambda n: 24,
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
}


def _check_type(type_label: str, rank: int) -> None:
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 3,
        "D": rank >= 4,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }.get(type_label)
    if not ok:
        raise ValueError(f"no simple root system of type {type_label}{rank}")


def _gram_matrix(t: str, n: int) -> list[list[int]]:
    """Inner products (alpha_i, alpha_j), short roots of squared length 2."""
    g = [[0] * n for _ in range(n)]

    def link(i: int, j: int, v: int) -> None:
        g[i][j] = g[j][i] = v

    if t in "ADE":
        for i in range(n):
            g[i][i] = 2
        if t == "A":
            for i in range(n - 1):
                link(i, i + 1, -1)
        elif t == "D":
            for i in range(n - 2):
                link(i, i + 1, -1)
            link(n - 3, n - 1, -1)
        else:
            # 1-3-4-5-6-7-8 with the branch node 2 attached to 4
            link(0, 2, -1)
            link(1, 3, -1)
            for i in range(2, n - 1):
                link(i, i + 1, -1)
    elif t == "B":
        for i in range(n - 1):
            g[i][i] = 4
        g[n - 1][n - 1] = 2
        for i in range(n - 1):
            link(i, i + 1, -2)
    elif t == "C":
        for i in range(n - 1):
            g[i][i] = 2
        g[n - 1][n - 1] = 4
        for i in range(n - 2):
            link(i, i + 1, -1)
        link(n - 2, n - 1, -2)
    elif t == "F":
        g[0][0] = g[1][1] = 4
        g[2][2] = g[3][3] = 2
        link(0, 1, -2)
        link(1, 2, -2)
        link(2, 3, -1)
    elif t == "G":
        g[0][0] = 2
        g[1][1] = 6
        link(0, 1, -3)
    return g


@dataclass(frozen=True)
class Root:
    coeffs: Vec

    @property
    def height(self) -> int:
        return sum(self.coeffs)

    @property
    def sign(self) -> int:
        return 1 if self.height > 0 else -1

    def __neg__(self) -> Root:
        return Root(tuple(-c for c in self.coeffs))

    def __str__(self) -> str:
        body = "".join(str(abs(c)) for c in self.coeffs)
        return ("-" if self.sign < 0 else "") + body


@dataclass(frozen=True)
class RootSystem:
    type_label: str
    rank: int
    cartan_matrix: tuple[tuple[int, ...], ...] = field(repr=False)
    gram: tuple[tuple[int, ...], ...] = field(repr=False)
    positive_roots: tuple[Vec, ...] = field(repr=False)

    @property
    def name(self) -> str:
        return f"{self.type_label}{self.rank}"

    @property
    def coxeter_number(self) -> int:
        return max(sum(r) for r in self.positive_roots) + 1

    @property
    def highest_root(self) -> Vec:
        return max(self.positive_roots, key=sum)

    @cached_property
    def roots(self) -> tuple[Vec, ...]:
        return self.positive_roots + tuple(neg(r) for r in self.positive_roots)

    @cached_property
    def root_set(self) -> frozenset[Vec]:
        return frozenset(self.roots)

    def is_root(self, v: Vec) -> bool:
        return tuple(v) in self.root_set

    def inner(self, a: Vec, b: Vec) -> int:
        g = self.gram
        n = self.rank
        return sum(a[i] * g[i][j] * b[j] for i in range(n) for j in range(n) if a[i] and b[j])

    def pairing(self, beta: Vec, i: int) -> int:
        """<beta, alpha_i^vee>."""
        row = self.cartan_matrix[i]
        return sum(row[j] * beta[j] for j in range(self.rank))

    def coroot(self, alpha: Vec) -> Vec:
        """Coefficients of alpha^vee in the simple coroots h_1..h_rank."""
        a2 = self.inner(alpha, alpha)
        out = []
        for j, c in enumerate(alpha):
            num = c * self.gram[j][j]
            if num % a2:
                raise ArithmeticError("non-integral coroot")  # cannot happen for a root
            out.append(num // a2)
        return tuple(out)

    def reflect(self, beta: Vec, i: int) -> Vec:
        k = self.pairing(beta, i)
        return tuple(b - k * (j == i) for j, b in enumerate(beta))

    def string_down(self, alpha: Vec, beta: Vec) -> int:
        """Largest q with beta - q*alpha a root."""
        q = 0
        while self.is_root(sub(beta, mul(q + 1, alpha))):
            q += 1
        return q

    def simple_root(self, i: int) -> Vec:
        return tuple(int(j == i) for j in range(self.rank))


def neg(v: Vec) -> Vec:
    return tuple(-x for x in v)


def add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def mul(k: int, a: Vec) -> Vec:
    return tuple(k * x for x in a)


def root_order_key(r: Vec) -> tuple:
    """Total order on positive roots: height, then reverse-lexicographic.

    With this key alpha_1 precedes alpha_2, and (1,1,0) precedes (0,1,1).
    """
    return (sum(r), tuple(-c for c in r))


def build_root_system(type_label: str, rank: int) -> RootSystem:
    type_label = type_label.upper()
    _check_type(type_label, rank)
    gram = _gram_matrix(type_label, rank)
    cartan = tuple(
        tuple(2 * gram[i][j] // gram[i][i] for j in range(rank)) for i in range(rank)
    )
    simple = [tuple(int(j == i) for j in range(rank)) for i in range(rank)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(rank):
                k = sum(cartan[i][j] * beta[j] for j in range(rank))
                if k == 0:
                    continue
                gamma = tuple(b - k * (j == i) for j, b in enumerate(beta))
                if gamma not in seen:
                    seen.add(gamma)
                    nxt.append(gamma)
        frontier = nxt
    positive = sorted((r for r in seen if sum(r) > 0), key=root_order_key)
    rs = RootSystem(
        type_label=type_label,
        rank=rank,
        cartan_matrix=cartan,
        gram=tuple(tuple(r) for r in gram),
        positive_roots=tuple(positive),
    )
    expected = _KNOWN_COUNTS[type_label](rank)
    if len(positive) != expected:
        raise AssertionError(f"{rs.name}: found {len(positive)} positive roots, expected {expected}")
    return rs


def parse_group(label: str) -> RootSystem:
    """'E7' -> build_root_system('E', 7)."""
    label = label.strip()
    try:
        return build_root_system(label[0], int(label[1:]))
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad group label {label!r}: {exc}") from None


def solve_rational(a: list[list[int]], b: list[int]) -> list[Fraction]:
    """Solve a square nonsingular integer system exactly."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def inverse_cartan_combine(rs: RootSystem, weights, p: int) -> Vec:
    """Coroot coefficients c (mod p) of h = sum c_i h_i with [h, e_{alpha_j}] = weights[j] e_{alpha_j}.

    The solve happens over Q and must be integral; the E7 Cartan
    determinant is 2, so intermediate values are half-integers.
    """
    weights = [int(w) for w in weights]
    if len(weights) != rs.rank:
        raise ValueError(f"expected {rs.rank} weights, got {len(weights)}")
    at = [[rs.cartan_matrix[i][j] for i in range(rs.rank)] for j in range(rs.rank)]
    sol = solve_rational(at, weights)
    if any(x.denominator != 1 for x in sol):
        raise ValueError(f"weights {weights} do not come from a coroot combination: {sol}")
    return tuple(int(x) % p for x in sol)
