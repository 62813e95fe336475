"""Generalized Paley graphs over prime fields and closed-form K4 counts.

Adjacency rows are Python ints used as bitsets, so common neighbourhoods are a
single ``&`` and counting is ``int.bit_count``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import isprime
from sympy.ntheory import primitive_root
from sympy.solvers.diophantine.diophantine import cornacchia

from .charsums import CharacterTable, HyperDatum, hp
from .qseries import GRID, EtaQuotientSpec, eta_quotient_expand


class PaleyError(ValueError):
    pass


@dataclass(frozen=True)
class PaleyGraph:
    q: int
    k: int
    residues: int
    adjacency: tuple[int, ...]

    def neighbours(self, v: int) -> list[int]:
        return _bits(self.adjacency[v])

    @property
    def degree(self) -> int:
        return self.residues.bit_count()

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adjacency) // 2

    def has_edge(self, a: int, b: int) -> bool:
        return bool(self.adjacency[a] >> b & 1)


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def build_graph(q: int, k: int) -> PaleyGraph:
    """G_k(q) for a prime q; a ~ b iff a - b is a nonzero k-th power."""
    if not isprime(q):
        raise PaleyError(f"q = {q} must be prime (prime powers are not supported)")
    if k < 2:
        raise PaleyError("k must be at least 2")
    modulus = k if q == 2 else 2 * k
    if (q - 1) % modulus:
        raise PaleyError(f"q = {q} is not 1 mod {modulus}; G_{k}({q}) would be directed")
    g = primitive_root(q)
    S = 0
    x, gk = 1, pow(g, k, q)
    for _ in range((q - 1) // k):
        S |= 1 << x
        x = x * gk % q
    full = (1 << q) - 1
    # row v is S rotated left by v inside q bits
    rows = tuple(((S << v) | (S >> (q - v))) & full for v in range(q))
    return PaleyGraph(q, k, S, rows)


def count_k3(g: PaleyGraph) -> int:
    total = 0
    for a in range(g.q):
        higher = g.adjacency[a] >> (a + 1) << (a + 1)
        for b in _bits(higher):
            total += (g.adjacency[b] & higher).bit_count()
    return total // 2


def count_k4(g: PaleyGraph) -> int:
    """Cliques a < b < c < d: per edge, the common neighbourhood above b, then
    for each c in it the popcount of its neighbours there above c."""
    adj = g.adjacency
    total = 0
    for a in range(g.q):
        up_a = adj[a] >> (a + 1) << (a + 1)
        for b in _bits(up_a):
            common = adj[b] & up_a
            common = common >> (b + 1) << (b + 1)
            for c in _bits(common):
                total += ((adj[c] & common) >> (c + 1)).bit_count()
    return total


def count_k4_naive(g: PaleyGraph) -> int:
    """O(q^4) enumeration; the oracle for count_k4."""
    e = g.has_edge
    return sum(1 for a, b, c, d in itertools.combinations(range(g.q), 4)
               if e(a, b) and e(a, c) and e(a, d) and e(b, c) and e(b, d) and e(c, d))


# -----------------------------------------------------------------------------
# quadratic forms


def two_squares_even_y(p: int) -> tuple[int, int]:
    """p = x^2 + y^2 with y even, x, y >= 0."""
    if p % 4 != 1 or not isprime(p):
        raise PaleyError(f"p = {p} must be a prime 1 mod 4")
    x, y = next(iter(cornacchia(1, 1, p)))
    return (y, x) if x % 2 == 0 else (x, y)


def epsh_k4(p: int) -> int:
    """K4(G_2(p)) = p(p-1)((p-9)^2 - 4y^2) / (2^9 * 3)."""
    _, y = two_squares_even_y(p)
    num = p * (p - 1) * ((p - 9) ** 2 - 4 * y * y)
    val = Fraction(num, 2 ** 9 * 3)
    if val.denominator != 1 or val < 0:
        raise ArithmeticError(f"formula gave {val} at p = {p}")
    return int(val)


@dataclass(frozen=True)
class QuadRep43:
    q: int
    c: int
    d: int

    def __post_init__(self):
        if 4 * self.q != self.c ** 2 + 3 * self.d ** 2:
            raise ValueError(f"4*{self.q} != {self.c}^2 + 3*{self.d}^2")


def cornacchia_43(q: int) -> QuadRep43:
    """The representation 4q = c^2 + 3d^2 with c = 1 (3), d = 0 (3), d >= 0.

    q = x^2 + 3y^2 gives pi = x + y*sqrt(-3) in Z[omega] of norm q; the six unit
    multiples a + b*omega of pi give 4q = (2a - b)^2 + 3b^2, and exactly one
    of them (up to the sign of b) meets the congruences.
    """
    if not isprime(q) or q % 3 != 1:
        raise PaleyError(f"q = {q} must be a prime 1 mod 3")
    x, y = next(iter(cornacchia(1, 3, q)))
    a, b = x + y, 2 * y
    found = set()
    for _ in range(3):
        for s in (1, -1):
            c, d = s * (2 * a - b), abs(s * b)
            if c % 3 == 1 and d % 3 == 0 and c % q:
                found.add((c, d))
        a, b = -b, a - b  # multiply by omega
    if len(found) != 1:
        raise ArithmeticError(f"normalisation not unique at q = {q}: {sorted(found)}")
    c, d = found.pop()
    return QuadRep43(q, c, d)


def cornacchia_43_search(q: int) -> list[QuadRep43]:
    """Every normalised representation, by exhaustive search over c."""
    out = []
    top = math.isqrt(4 * q)
    for c in range(-top, top + 1):
        rest = 4 * q - c * c
        if rest % 3 == 0 and c % 3 == 1 and c % q:
            d = math.isqrt(rest // 3)
            if 3 * d * d == rest and d % 3 == 0:
                out.append(QuadRep43(q, c, d))
    return out


def prime_power_c(p: int, r: int) -> int:
    """c = -2(-p)^(r/2) for p = 2 (mod 3); formula only, never brute-forced."""
    if p % 3 != 2 or r % 2:
        raise PaleyError("requires p = 2 (mod 3) and r even")
    return -2 * (-p) ** (r // 2)


def k4_g3_formula(q: int, rep: QuadRep43 | int, H: int) -> Fraction:
    """q(q-1)/(2^3 3^7) [q^2 + 5q(c-11) + 10c^2 - 85c + 316 + 12H]."""
    c = rep.c if isinstance(rep, QuadRep43) else int(rep)
    bracket = q * q + 5 * q * (c - 11) + 10 * c * c - 85 * c + 316 + 12 * H
    return Fraction(q * (q - 1) * bracket, 2 ** 3 * 3 ** 7)


def cor74_k4(p: int, a2: int, a3: int) -> Fraction:
    """p(p-1)/(2^3 3^7) [p^2 + (85-5p)a2 + 10a2^2 + 12a3 - 55p + 316]."""
    bracket = p * p + (85 - 5 * p) * a2 + 10 * a2 * a2 + 12 * a3 - 55 * p + 316
    return Fraction(p * (p - 1) * bracket, 2 ** 3 * 3 ** 7)


# -----------------------------------------------------------------------------
# coefficient sources


F27_2 = EtaQuotientSpec(((3, 2), (9, 2)))


@lru_cache(maxsize=4)
def _weight2_series(order_q: int):
    return eta_quotient_expand(F27_2, GRID * order_q)


def a_p_weight2(p: int) -> int:
    """a_p of eta(3t)^2 eta(9t)^2, the weight-two newform of level 27."""
    n = max(256, 1 << (p + 1).bit_length())
    return int(_weight2_series(n).coeff_q(p))


def a_p_weight3(p: int) -> int:
    """a_p of the completed level-27 weight-three eigenform."""
    from .modforms import ap_coefficient, build_family, eigenform_complete

    order = max(650, p + 2)
    eig = eigenform_complete(build_family(2, order))
    val = ap_coefficient(eig, p)
    if not val.is_integer():
        raise ArithmeticError(f"a_{p} = {val} is not an integer")
    return int(val.to_rational())


def hp_dm33(p: int) -> int:
    """H_p(HD_DM(3,3); 1) as an integer."""
    v = hp(HyperDatum.dm(3, 3), 1, CharacterTable(p)).value
    if not v.is_integer():
        raise ArithmeticError(f"H_{p}(DM(3,3)) = {v} is not an integer")
    return int(v.to_rational())


@dataclass
class PaleyReport:
    q: int
    k: int
    k3: int
    k4: int
    formula_k4: int | None
    c: int | None = None
    d: int | None = None
    H: int | None = None
    a2: int | None = None
    a3: int | None = None
    agree: bool = True

    def to_json(self) -> dict:
        keys = ("q", "k", "k3", "k4", "formula_k4", "c", "d", "H", "agree")
        return {key: getattr(self, key) for key in keys}


def _as_int(x: Fraction) -> int | None:
    return int(x) if x.denominator == 1 else None


def triple_oracle(p: int, k: int) -> PaleyReport:
    """Brute-force count against the closed forms for G_2(p) or G_3(p)."""
    g = build_graph(p, k)
    k3, k4 = count_k3(g), count_k4(g)
    if k == 2:
        f = epsh_k4(p)
        return PaleyReport(p, k, k3, k4, f, agree=(f == k4))
    if k != 3:
        raise PaleyError("closed forms exist only for k = 2 and k = 3")
    rep = cornacchia_43(p)
    H = hp_dm33(p)
    a2, a3 = a_p_weight2(p), a_p_weight3(p)
    f72 = k4_g3_formula(p, rep, H)
    f74 = cor74_k4(p, a2, a3)
    ok = (f72 == k4 and f74 == k4 and rep.c == -a2 and H == a3)
    return PaleyReport(p, k, k3, k4, _as_int(f72), rep.c, rep.d, H, a2, a3, ok)
