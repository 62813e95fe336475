"""Exact arithmetic in Q(zeta_12) and in the multiquadratic field Q(i, sqrt3, sqrt5).

Both element types are immutable and hashable.  They interoperate with ``int``
and ``fractions.Fraction`` on either side of the usual operators, which lets the
q-series engine treat them as ordinary coefficient rings.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from numbers import Rational

import mpmath

__all__ = [
    "CyclotomicElem",
    "RadicalFieldElem",
    "cyc_mul",
    "cyc_round",
    "cyc_galois",
]

_UNITS_MOD_12 = (1, 5, 7, 11)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _fmt_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class CyclotomicElem:
    """Element c0 + c1*z + c2*z^2 + c3*z^3 of Q(z), z = exp(pi*i/6).

    Multiplication reduces with z^4 = z^2 - 1.
    """

    __slots__ = ("coords",)

    def __init__(self, coords=(0, 0, 0, 0)):
        coords = tuple(_frac(c) for c in coords)
        if len(coords) != 4:
            raise ValueError("a CyclotomicElem needs exactly four coordinates")
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicElem is immutable")

    # constructors ---------------------------------------------------------
    @classmethod
    def from_rational(cls, x) -> CyclotomicElem:
        return cls((x, 0, 0, 0))

    @classmethod
    def zeta(cls, e: int = 1, m: int = 12) -> CyclotomicElem:
        """zeta_m ** e for m dividing 12, embedded through zeta_m = zeta_12^(12/m)."""
        if 12 % m:
            raise ValueError(f"zeta_{m} is not in Q(zeta_12)")
        return _ZETA_POWERS[(e * (12 // m)) % 12]

    @classmethod
    def from_quadratic_basis(cls, a1, a2, a3, a4) -> CyclotomicElem:
        """Build a1 + a2*sqrt(-1) + a3*sqrt(3) + a4*sqrt(-3)."""
        a1, a2, a3, a4 = map(_frac, (a1, a2, a3, a4))
        return cls((a1 - a4, 2 * a3, 2 * a4, a2 - a3))

    # views ------------------------------------------------------------------
    def quadratic_coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Coordinates in the basis {1, sqrt(-1), sqrt(3), sqrt(-3)}."""
        c0, c1, c2, c3 = self.coords
        return (c0 + c2 / 2, c1 / 2 + c3, c1 / 2, c2 / 2)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def is_integer(self) -> bool:
        return self.is_rational() and self.coords[0].denominator == 1

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def in_subring(self, m: int) -> bool:
        """True iff self lies in Z[zeta_m] (m in 1, 2, 3, 4, 6, 12)."""
        if 12 % m:
            raise ValueError(f"Q(zeta_{m}) is not a subfield of Q(zeta_12)")
        if not self.is_integral():
            return False
        _, a2, a3, a4 = self.quadratic_coords()
        if m in (1, 2):
            return a2 == a3 == a4 == 0
        if m in (3, 6):
            return a2 == a3 == 0
        if m == 4:
            return a3 == a4 == 0
        return True

    def embed(self, dps: int | None = None):
        """Complex value under z -> exp(pi*i/6); an mpc when ``dps`` is given, else complex."""
        if dps is None:
            z = complex(0.8660254037844386, 0.5)
            acc = 0j
            for c in reversed(self.coords):
                acc = acc * z + float(c)
            return acc
        with mpmath.workdps(dps):
            z = mpmath.expjpi(mpmath.mpf(1) / 6)
            acc = mpmath.mpc(0)
            for c in reversed(self.coords):
                acc = acc * z + mpmath.mpf(c.numerator) / c.denominator
            return +acc

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CyclotomicElem):
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicElem.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicElem(a + b for a, b in zip(self.coords, other.coords))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElem(-c for c in self.coords)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicElem(c * other for c in self.coords)
        if not isinstance(other, CyclotomicElem):
            return NotImplemented
        a, b = self.coords, other.coords
        prod = [Fraction(0)] * 7
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        # z^6 = -1, z^5 = z^3 - z, z^4 = z^2 - 1
        c6, c5, c4 = prod[6], prod[5], prod[4]
        return CyclotomicElem((
            prod[0] - c6 - c4,
            prod[1] - c5,
            prod[2] + c4,
            prod[3] + c5,
        ))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result, base = _ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def galois(self, j: int) -> CyclotomicElem:
        """Apply z -> z^j, j a unit mod 12."""
        if j % 12 not in _UNITS_MOD_12:
            raise ValueError(f"j = {j} is not a unit mod 12")
        return reduce(
            lambda acc, kc: acc + CyclotomicElem.zeta(kc[0] * j) * kc[1],
            enumerate(self.coords),
            _ZERO,
        )

    def conjugate(self) -> CyclotomicElem:
        return self.galois(11)

    # comparison / display ---------------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coords == other.coords

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    @classmethod
    def parse(cls, text: str) -> CyclotomicElem:
        """Inverse of ``str``: terms like ``3/2``, ``-z``, ``2*z^3`` joined by + and -."""
        body = text.replace(" ", "")
        if not body:
            raise ValueError("empty cyclotomic literal")
        if body[0] not in "+-":
            body = "+" + body
        coords = [Fraction(0)] * 4
        pos = 0
        term = re.compile(r"([+-])(\d+(?:/\d+)?)?(?:(?<=\d)\*)?(z(?:\^([0-3]))?)?")
        while pos < len(body):
            m = term.match(body, pos)
            if not m or m.end() == pos or not (m.group(2) or m.group(3)):
                raise ValueError(f"cannot parse {text!r} at position {pos}")
            c = Fraction(m.group(2) or 1) * (-1 if m.group(1) == "-" else 1)
            k = 0 if not m.group(3) else int(m.group(4) or 1)
            coords[k] += c
            pos = m.end()
        return cls(coords)

    def __repr__(self):
        return f"CyclotomicElem({', '.join(_fmt_rational(c) for c in self.coords)})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coords):
            if not c:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = _fmt_rational(abs(c)) + (f"*{mono}" if mono else "")
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        s = "".join(f" {sg} {b}" for sg, b in terms).strip()
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


_ZERO = CyclotomicElem()
_ONE = CyclotomicElem((1, 0, 0, 0))


def _zeta_powers():
    z = CyclotomicElem((0, 1, 0, 0))
    powers = [_ONE]
    for _ in range(11):
        powers.append(powers[-1] * z)
    return tuple(powers)


_ZETA_POWERS = _zeta_powers()


def cyc_mul(a: CyclotomicElem, b: CyclotomicElem) -> CyclotomicElem:
    return a * b


def cyc_galois(a: CyclotomicElem, j: int) -> CyclotomicElem:
    return a.galois(j)


def cyc_round(z, denominator_bound: int = 2, conjugate=None):
    """Round a numerical value to the lattice (1/denominator_bound) * Z^4 in the
    basis {1, sqrt(-1), sqrt(3), sqrt(-3)}.

    A single complex number only pins down the coordinates when the value is known
    to lie in Q(sqrt(-3)); that is what happens when ``conjugate`` is omitted.
    Passing ``conjugate`` (the value under the embedding z -> exp(5*pi*i/6)) recovers
    all four coordinates.

    Returns ``(element, residual)`` where residual is the largest distance between
    the input values and the corresponding embeddings of the rounded element.
    """
    if denominator_bound not in (1, 2):
        raise ValueError("denominator_bound must be 1 or 2")
    with mpmath.workdps(40):
        z = mpmath.mpc(z)
        s3 = mpmath.sqrt(3)
        if conjugate is None:
            raw = (z.real, 0, 0, z.imag / s3)
        else:
            w = mpmath.mpc(conjugate)
            raw = ((z.real + w.real) / 2, (z.imag + w.imag) / 2,
                   (z.real - w.real) / (2 * s3), (z.imag - w.imag) / (2 * s3))
        coords = [Fraction(int(mpmath.nint(x * denominator_bound)), denominator_bound)
                  for x in raw]
        elem = CyclotomicElem.from_quadratic_basis(*coords)
        residual = abs(z - elem.embed(40))
        if conjugate is not None:
            residual = max(residual, abs(w - elem.galois(5).embed(40)))
        return elem, float(residual)


# -----------------------------------------------------------------------------
# Q(sqrt(-1), sqrt(3), sqrt(5))

_GEN_SQUARES = (-1, 3, 5)  # basis bit k <-> generator with this square
_GEN_NAMES = ("i", "sqrt3", "sqrt5")


def _basis_product(a: int, b: int) -> tuple[int, int]:
    """e_a * e_b = factor * e_(a^b) for bitmask-indexed basis monomials."""
    factor = 1
    common = a & b
    for k, sq in enumerate(_GEN_SQUARES):
        if common >> k & 1:
            factor *= sq
    return factor, a ^ b


_MUL_TABLE = {(a, b): _basis_product(a, b) for a in range(8) for b in range(8)}


class RadicalFieldElem:
    """Element of Q(sqrt(-1), sqrt(3), sqrt(5)).

    ``coords[mask]`` multiplies the product of the generators whose bits are set in
    ``mask`` (bit 0: sqrt(-1), bit 1: sqrt(3), bit 2: sqrt(5)).  The complex
    embedding uses sqrt(-1) = +i and positive real sqrt(3), sqrt(5), so that
    sqrt(-3) = +i*sqrt(3) and sqrt(-15) = +i*sqrt(15).
    """

    __slots__ = ("coords",)

    def __init__(self, coords=(0,) * 8):
        coords = tuple(_frac(c) for c in coords)
        if len(coords) != 8:
            raise ValueError("a RadicalFieldElem needs exactly eight coordinates")
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("RadicalFieldElem is immutable")

    @classmethod
    def from_rational(cls, x) -> RadicalFieldElem:
        return cls((x,) + (0,) * 7)

    @classmethod
    def sqrt(cls, n: int) -> RadicalFieldElem:
        """Principal square root of an integer whose squarefree part divides -15."""
        if n == 0:
            return cls()
        sign = -1 if n < 0 else 1
        m = abs(n)
        mask, scale = 0, 1
        for bit, p in ((1, 3), (2, 5)):
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            scale *= p ** (e // 2)
            if e % 2:
                mask |= 1 << bit
        root = int(round(m ** 0.5))
        if root * root != m:
            raise ValueError(f"sqrt({n}) is not in Q(i, sqrt3, sqrt5)")
        scale *= root
        if sign < 0:
            mask |= 1
        coords = [0] * 8
        coords[mask] = scale
        return cls(coords)

    @classmethod
    def parse(cls, text: str) -> RadicalFieldElem:
        """Parse strings such as ``3*sqrt(5)``, ``-3*sqrt(-15)``, ``9i`` or ``1/2``."""
        s = text.replace(" ", "").replace("√", "sqrt")
        if not s:
            raise ValueError("empty expression")
        # split into signed terms at +/- outside parentheses
        terms, depth, start = [], 0, 0
        for k, ch in enumerate(s):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch in "+-" and depth == 0 and k > start:
                terms.append(s[start:k])
                start = k
        terms.append(s[start:])
        total = cls()
        for term_text in terms:
            sign = -1 if term_text.startswith("-") else 1
            body = term_text.lstrip("+-")
            term = cls.from_rational(sign)
            for factor in body.split("*"):
                m = re.fullmatch(r"sqrt\((-?\d+)\)", factor)
                if m:
                    term = term * cls.sqrt(int(m.group(1)))
                elif factor == "i":
                    term = term * cls.sqrt(-1)
                elif re.fullmatch(r"\d+(/\d+)?i", factor):
                    term = term * Fraction(factor[:-1]) * cls.sqrt(-1)
                elif re.fullmatch(r"\d+(/\d+)?", factor):
                    term = term * Fraction(factor)
                else:
                    raise ValueError(f"cannot parse factor {factor!r} in {text!r}")
            total = total + term
        return total

    def _coerce(self, other):
        if isinstance(other, RadicalFieldElem):
            return other
        if isinstance(other, (int, Fraction)):
            return RadicalFieldElem.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RadicalFieldElem(a + b for a, b in zip(self.coords, other.coords))

    __radd__ = __add__

    def __neg__(self):
        return RadicalFieldElem(-c for c in self.coords)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RadicalFieldElem(c * other for c in self.coords)
        if not isinstance(other, RadicalFieldElem):
            return NotImplemented
        out = [Fraction(0)] * 8
        for a, x in enumerate(self.coords):
            if x:
                for b, y in enumerate(other.coords):
                    if y:
                        f, c = _MUL_TABLE[a, b]
                        out[c] += f * x * y
        return RadicalFieldElem(out)

    __rmul__ = __mul__

    def automorphism(self, flips: int) -> RadicalFieldElem:
        """Negate the generators whose bits are set in ``flips``."""
        return RadicalFieldElem(
            -c if bin(mask & flips).count("1") % 2 else c
            for mask, c in enumerate(self.coords)
        )

    def norm(self) -> Fraction:
        prod = self
        for flips in range(1, 8):
            prod = prod * self.automorphism(flips)
        return prod.to_rational()

    def inverse(self) -> RadicalFieldElem:
        if not self:
            raise ZeroDivisionError("inverse of zero")
        others = RadicalFieldElem.from_rational(1)
        for flips in range(1, 8):
            others = others * self.automorphism(flips)
        return others * (1 / (others * self).to_rational())

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, RadicalFieldElem):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return RadicalFieldElem.from_rational(other) * self.inverse()

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def is_integer(self) -> bool:
        return self.is_rational() and self.coords[0].denominator == 1

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def embed(self, dps: int | None = None):
        if dps is None:
            gens = (1j, 3 ** 0.5, 5 ** 0.5)
            acc = 0j
            for mask, c in enumerate(self.coords):
                if c:
                    v = float(c)
                    for k in range(3):
                        if mask >> k & 1:
                            v *= gens[k]
                    acc += v
            return acc
        with mpmath.workdps(dps):
            gens = (mpmath.mpc(0, 1), mpmath.sqrt(3), mpmath.sqrt(5))
            acc = mpmath.mpc(0)
            for mask, c in enumerate(self.coords):
                if c:
                    v = mpmath.mpf(c.numerator) / c.denominator
                    for k in range(3):
                        if mask >> k & 1:
                            v *= gens[k]
                    acc += v
            return +acc

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coords == other.coords

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        return f"RadicalFieldElem({str(self)!r})"

    def __str__(self):
        parts = []
        for mask, c in enumerate(self.coords):
            if not c:
                continue
            # fold i into the radicand: i*sqrt3 -> sqrt(-3)
            rad = 1
            for k in (1, 2):
                if mask >> k & 1:
                    rad *= _GEN_SQUARES[k]
            if mask & 1:
                rad = -rad
            coef = _fmt_rational(abs(c))
            if rad == 1:
                body = coef
            else:
                radical = f"sqrt({rad})"
                body = radical if abs(c) == 1 else f"{coef}*{radical}"
            parts.append(("-" if c < 0 else "+", body))
        if not parts:
            return "0"
        s = " ".join(f"{sg} {b}" for sg, b in parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]
