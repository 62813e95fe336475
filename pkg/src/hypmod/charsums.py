"""Multiplicative characters of F_p, Gauss and Jacobi sums, and the H_p character sum.

Ideal convention
----------------
For a prime p let ``L = gcd(12, p - 1)`` and let ``rho`` be the smallest residue of
exact order L.  The prime ideal above p with ``zeta_L = rho (mod P)`` is ideal
choice ``j = 1``; choice ``j`` is its image under ``zeta -> zeta^j``.  With this
rule every exact value is independent of the primitive root stored in the
:class:`CharacterTable`, and values for ideal ``j`` are ``cyc_galois(value_1, j)``.

Every character, the trivial one included, is taken to vanish at 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import mpmath
import numpy as np
from sympy import isprime, primitive_root

from .algebra import CyclotomicElem, cyc_round

__all__ = [
    "CharacterTable",
    "HyperDatum",
    "HpValue",
    "HpPrecisionError",
    "iota",
    "gauss_sum",
    "gauss_table",
    "jacobi_sum",
    "hp",
    "p_func",
    "psi_twist",
    "truncated_f",
    "truncated_f_report",
]

RESIDUAL_FACTOR = 1e-6
ESCALATION_DPS = (32, 64)


def _lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


class CharacterTable:
    """Discrete logarithms for F_p^x relative to a primitive root ``g``."""

    def __init__(self, p: int, g: int | None = None):
        if not isprime(p) or p < 3:
            raise ValueError(f"{p} is not an odd prime")
        if g is None:
            g = int(primitive_root(p))
        n = p - 1
        powers = np.empty(n, dtype=np.int64)
        x = 1
        for k in range(n):
            powers[k] = x
            x = x * g % p
        if x != 1 or len(set(powers.tolist())) != n:
            raise ValueError(f"{g} is not a primitive root mod {p}")
        dlog = np.full(p, -1, dtype=np.int64)
        dlog[powers] = np.arange(n, dtype=np.int64)
        self.p = p
        self.g = g
        self.n = n
        self.powers = powers
        self.dlog = dlog
        self.L = math.gcd(12, n)
        self._rho_unit = self._ideal_unit()

    def _ideal_unit(self) -> int:
        """u with rho = g^(u (p-1)/L), rho the smallest residue of exact order L."""
        L, n = self.L, self.n
        for x in range(2, self.p):
            d = int(self.dlog[x])
            if (d * L) % n == 0 and math.gcd(d * L // n, L) == 1:
                return d * L // n
        raise AssertionError("no element of exact order L")

    @property
    def rho(self) -> int:
        return int(self.powers[self._rho_unit * self.n // self.L])

    def twist(self, j: int = 1, M: int | None = None) -> int:
        """Exponent s with gcd(s, p-1) = 1 so that omega_s(x) = exp(2 pi i s dlog(x)/(p-1))
        realises ideal choice j (read modulo M)."""
        L = self.L
        M = L if M is None else M
        if L % M:
            raise ValueError(f"M = {M} does not divide gcd(12, p - 1) = {L}")
        if math.gcd(j, M) != 1:
            raise ValueError(f"ideal choice {j} is not a unit mod {M}")
        jl = j % M
        while math.gcd(jl, L) != 1:
            jl += M
        target = jl * pow(self._rho_unit, -1, L) % L
        s = target or L
        while math.gcd(s, self.n) != 1:
            s += L
        return s

    def lift_ideal(self, j: int, M: int) -> int:
        """Smallest unit mod 12 that reduces to j mod M."""
        jl = j % M
        while math.gcd(jl, 12) != 1:
            jl += M
        return jl % 12

    @cached_property
    def _zeta_p_powers(self) -> np.ndarray:
        k = np.arange(self.p, dtype=np.float64)
        return np.exp(2j * np.pi * k / self.p)

    @cached_property
    def gauss_fft(self) -> np.ndarray:
        """G[m] = g(omega^m) for omega(x) = exp(2 pi i dlog(x)/(p-1)), all m at once."""
        x = self._zeta_p_powers[self.powers]
        return self.n * np.fft.ifft(x)

    def __repr__(self):
        return f"CharacterTable(p={self.p}, g={self.g})"


def _check_M(table: CharacterTable, M: int):
    if table.n % M:
        raise ValueError(f"M = {M} does not divide p - 1 = {table.n}")
    if 12 % M:
        raise ValueError(f"M = {M} does not divide 12; values are not in Q(zeta_12)")


def _zeta12_exponent(table: CharacterTable, a, dl, s: int) -> np.ndarray | int:
    """Exponent e with iota(a)(x) = zeta_12^e, for dlog values ``dl`` and twist s."""
    a = Fraction(a)
    twelve_a = a * 12
    if twelve_a.denominator != 1:
        raise ValueError(f"denominator of {a} does not divide 12")
    return (int(twelve_a) * s * dl) % 12


def iota(table: CharacterTable, a, x: int, j: int = 1) -> CyclotomicElem:
    """The residue-symbol character iota(a)(x) for a = i/M, exact in Z[zeta_12]."""
    a = Fraction(a)
    M = a.denominator
    _check_M(table, M)
    x %= table.p
    if x == 0:
        raise ValueError("iota is undefined at 0")
    s = table.twist(j, M)
    e = _zeta12_exponent(table, a, int(table.dlog[x]), s)
    return CyclotomicElem.zeta(int(e))


def gauss_sum(table: CharacterTable, m: int, dps: int = 30):
    """g(omega^m) = sum_x omega^m(x) zeta_p^x by direct summation at ``dps`` digits.

    The modulus check |g|^2 = p (m != 0) escalates the precision once if it fails.
    """
    if not 0 <= m < table.n:
        raise ValueError("character index out of range")
    for prec in (dps, 2 * dps):
        with mpmath.workdps(prec + 10):
            n, p = table.n, table.p
            terms = [mpmath.expjpi(mpmath.mpf(2 * m * k) / n + mpmath.mpf(2 * int(table.powers[k])) / p)
                     for k in range(n)]
            val = mpmath.fsum(terms)
            if m == 0 or abs(abs(val) ** 2 - p) < mpmath.mpf(10) ** (-prec + 2) * p:
                return +val
    raise ArithmeticError(f"Gauss sum accuracy check failed at p={table.p}, m={m}")


def gauss_table(table: CharacterTable, dps: int | None = None):
    """All Gauss sums: a numpy complex array (dps None) or a list of mpc values."""
    if dps is None:
        return table.gauss_fft
    with mpmath.workdps(dps + 10):
        n, p = table.n, table.p
        zp = [mpmath.expjpi(mpmath.mpf(2 * int(x)) / p) for x in table.powers]
        zn = [mpmath.expjpi(mpmath.mpf(2 * k) / n) for k in range(n)]
        out = []
        for m in range(n):
            out.append(mpmath.fsum(zn[(m * k) % n] * zp[k] for k in range(n)))
        return out


def jacobi_sum(table: CharacterTable, a, b, j: int = 1) -> CyclotomicElem:
    """J(iota(a), iota(b)) = sum_x iota(a)(x) iota(b)(1 - x), exactly."""
    a, b = Fraction(a), Fraction(b)
    M = _lcm(a.denominator, b.denominator)
    _check_M(table, M)
    s = table.twist(j, M)
    p = table.p
    xs = np.arange(2, p, dtype=np.int64)
    e = (_zeta12_exponent(table, a, table.dlog[xs], s)
         + _zeta12_exponent(table, b, table.dlog[(1 - xs) % p], s)) % 12
    counts = np.bincount(e, minlength=12)
    return sum((CyclotomicElem.zeta(k) * int(c) for k, c in enumerate(counts) if c),
               CyclotomicElem())


# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class HyperDatum:
    """A hypergeometric datum {alpha, beta} with b_1 = 1."""

    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]

    def __post_init__(self):
        alpha = tuple(Fraction(x) for x in self.alpha)
        beta = tuple(Fraction(x) for x in self.beta)
        if len(alpha) != len(beta):
            raise ValueError("alpha and beta must have equal length")
        if beta[0] != 1:
            raise ValueError("b_1 must be 1")
        for a in alpha:
            for b in beta:
                if (a - b).denominator == 1:
                    raise ValueError(f"datum is not primitive: {a} - {b} is an integer")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @classmethod
    def k3(cls, r) -> HyperDatum:
        return cls((Fraction(1, 3), Fraction(2, 3), Fraction(r)), (1, 1, 1))

    @classmethod
    def dm(cls, u: int, v: int) -> HyperDatum:
        return cls((Fraction(1, u), Fraction(1, v), Fraction(v - 1, v)), (1, 1, 1))

    @property
    def M(self) -> int:
        return _lcm(*(x.denominator for x in self.alpha + self.beta))

    @property
    def gamma(self) -> Fraction:
        return -1 + sum(self.beta) - sum(self.alpha)

    def __str__(self):
        fmt = lambda xs: "[" + ",".join(str(x) for x in xs) + "]"
        return f"{{{fmt(self.alpha)},{fmt(self.beta)}}}"


@dataclass
class HpValue:
    datum: HyperDatum
    p: int
    ideal_choice: int
    value: CyclotomicElem
    residual: float
    precision_used: int
    verified: bool = True
    lam: Fraction = field(default_factory=lambda: Fraction(1))

    def to_json(self) -> dict:
        return {
            "datum": str(self.datum),
            "p": self.p,
            "j": self.ideal_choice,
            "coords": [str(c) for c in self.value.quadratic_coords()],
            "residual": self.residual,
            "precision": self.precision_used,
            "verified": self.verified,
        }


class HpPrecisionError(ArithmeticError):
    """Raised when H_p cannot be certified even at the highest precision."""


def _hp_complex(datum: HyperDatum, lam: Fraction, table: CharacterTable, s: int, G):
    """The defining k-sum of H_p with omega replaced by omega^s, Gauss sums from G."""
    n, p = table.n, table.p
    A = [int(a * n) for a in datum.alpha]
    B = [int(b * n) for b in datum.beta]
    sign = -1 if len(A) % 2 else 1
    y = (sign * lam.numerator * pow(lam.denominator, -1, p)) % p
    if y == 0:
        raise ValueError("lambda must be nonzero mod p")
    dly = int(table.dlog[y])
    if isinstance(G, np.ndarray):
        k = np.arange(n)
        Gs = lambda idx: G[(s * idx) % n]
        acc = np.ones(n, dtype=np.complex128)
        for a, b in zip(A, B):
            acc *= Gs(k + a) * Gs(-k - b) / (Gs(np.array(a)) * Gs(np.array(-b)))
        acc *= np.exp(2j * np.pi * ((s * k * dly) % n) / n)
        total = complex(math.fsum(acc.real), math.fsum(acc.imag))
        return total / (1 - p)
    terms = []
    for k in range(n):
        t = mpmath.expjpi(mpmath.mpf(2 * ((s * k * dly) % n)) / n)
        for a, b in zip(A, B):
            t *= G[(s * (k + a)) % n] * G[(s * (-k - b)) % n] / (G[(s * a) % n] * G[(s * -b) % n])
        terms.append(t)
    return mpmath.fsum(terms) / (1 - p)


def hp(datum: HyperDatum, lam, table: CharacterTable, ideal_choice: int = 1) -> HpValue:
    """H_p(datum; lam) at the prime ideal ``ideal_choice``, rounded into Z[zeta_12]/2."""
    lam = Fraction(lam)
    M = datum.M
    p = table.p
    if table.n % M:
        raise ValueError(f"p = {p} is not 1 mod {M}")
    _check_M(table, M)
    j = ideal_choice
    j_conj = (5 * table.lift_ideal(j, M)) % 12
    s = table.twist(j, M)
    s_conj = table.twist(j_conj, M)
    # value and its sigma_5 image determine all four coordinates
    threshold = RESIDUAL_FACTOR * p
    attempts = [(None, 16)] + [(d, d) for d in ESCALATION_DPS]
    last = None
    for dps, digits in attempts:
        G = gauss_table(table, dps)
        if dps is None:
            z = _hp_complex(datum, lam, table, s, G)
            w = _hp_complex(datum, lam, table, s_conj, G)
            elem, res = cyc_round(z, 2, conjugate=w)
        else:
            with mpmath.workdps(dps + 10):
                z = _hp_complex(datum, lam, table, s, G)
                w = _hp_complex(datum, lam, table, s_conj, G)
                elem, res = cyc_round(z, 2, conjugate=w)
        last = HpValue(datum, p, j, elem, res, digits, res < threshold, lam)
        if last.verified:
            return last
    raise HpPrecisionError(f"H_p residual {last.residual:.3g} above {threshold:.3g} at p={p}")


def p_func(datum: HyperDatum, lam, table: CharacterTable, ideal_choice: int = 1) -> CyclotomicElem:
    """prod_{i>=2} J(iota(a_i), iota(b_i - a_i)) * H_p; depends on the order of alpha."""
    val = hp(datum, lam, table, ideal_choice).value
    for a, b in zip(datum.alpha[1:], datum.beta[1:]):
        val = val * jacobi_sum(table, a, b - a, ideal_choice)
    return val


def psi_twist(u: int, table: CharacterTable, ideal_choice: int = 1) -> CyclotomicElem:
    """iota(1/u)(-1/27)."""
    if table.n % u:
        raise ValueError(f"p = {table.p} is not 1 mod {u}")
    p = table.p
    x = (-pow(27, -1, p)) % p
    return iota(table, Fraction(1, u), x, ideal_choice)


# -----------------------------------------------------------------------------
# truncated series mod p^2


def _split_p(x: Fraction, p: int) -> tuple[int, Fraction]:
    """x = p^v * u with u a p-adic unit."""
    if x == 0:
        return 10**9, Fraction(0)
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, Fraction(num, den)


def truncated_f(datum: HyperDatum, p: int) -> int:
    """sum_{k<p} prod (a_j)_k / prod (b_j)_k reduced mod p^2."""
    mod = p * p
    total = 0
    val, unit = 0, 1  # current term = p^val * unit (unit mod p^2)
    for k in range(p):
        if k:
            for a in datum.alpha:
                v, u = _split_p(a + k - 1, p)
                if v >= 10**9:
                    return total
                val += v
                unit = unit * u.numerator * pow(u.denominator, -1, mod) % mod
            for b in datum.beta:
                v, u = _split_p(b + k - 1, p)
                if v > 0:
                    raise ZeroDivisionError(f"(b)_k is not invertible mod {p} at k = {k}")
                val -= v
                unit = unit * u.denominator * pow(u.numerator, -1, mod) % mod
        if val < 0:
            raise ZeroDivisionError("non-invertible denominator")
        if val < 2:
            total = (total + unit * p ** val) % mod
    return total


def truncated_f_report(datum: HyperDatum, table: CharacterTable) -> dict:
    """Compare truncated_f with psi * H_p modulo p^2 (informational only)."""
    p = table.p
    tf = truncated_f(datum, p)
    h = hp(datum, 1, table)
    out = {"p": p, "datum": str(datum), "truncated_f": tf}
    if h.value.is_integer():
        u = datum.alpha[0].denominator
        psi = psi_twist(u, table).to_rational() if table.n % u == 0 else 1
        target = int(psi * h.value.to_rational()) % (p * p)
        diff = (tf - target) % (p * p)
        v = 0
        while diff and diff % p == 0 and v < 2:
            diff //= p
            v += 1
        out.update({"psi_hp_mod_p2": target, "valuation_of_difference": 2 if diff == 0 else v})
    return out
