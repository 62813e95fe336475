"""Numerical side: eta values, L(f,1), the 3P2 periods and the transformation checks.

Everything runs in mpmath at ``AnalyticConfig.dps`` digits.  Each check is a
two-route computation and returns a :class:`CheckResult`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .algebra import RadicalFieldElem
from .qseries import GRID, EtaQuotientSpec, eta_quotient_expand

__all__ = [
    "AnalyticConfig",
    "CheckResult",
    "eta_numeric",
    "eta_product_numeric",
    "lvalue_at_1",
    "hyp2f1_cubic",
    "f3p2",
    "f3f2_integral",
    "f3f2_series",
    "period_lvalue_check",
    "eigenform_lvalue_check",
    "kummer_check",
    "al_check",
    "al_kmr_check",
    "borwein_numeric_check",
    "theta_numeric",
    "eigenform_lvalue",
    "analytic_suite",
]


@dataclass(frozen=True)
class AnalyticConfig:
    """Numerical settings.  ``dps`` defaults to ``target_digits + 10``."""

    target_digits: int = 12
    quadrature: str = "tanh-sinh"
    quad_degree: int = 8
    series_cutoff: int | None = None
    extra_digits: int = 10

    @property
    def dps(self) -> int:
        return self.target_digits + self.extra_digits


DEFAULT = AnalyticConfig()


@dataclass
class CheckResult:
    check_id: str
    inputs: dict
    lhs: complex
    rhs: complex
    rel_error: float
    digits: int
    tolerance: float = 1e-8

    @property
    def ok(self) -> bool:
        return self.rel_error <= self.tolerance

    def to_json(self) -> dict:
        c = lambda z: [float(mpmath.re(z)), float(mpmath.im(z))]
        return {"check_id": self.check_id, "inputs": self.inputs, "lhs": c(self.lhs),
                "rhs": c(self.rhs), "rel_error": self.rel_error, "digits": self.digits,
                "tolerance": self.tolerance, "ok": self.ok}


def _rel(lhs, rhs) -> float:
    scale = max(abs(lhs), abs(rhs))
    return float(abs(lhs - rhs) / scale) if scale else float(abs(lhs - rhs))


def _mpq(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


# -----------------------------------------------------------------------------
# eta


def _eta_series(tau):
    """q^(1/24) sum_k (-1)^k q^(k(3k-1)/2), summed until terms drop below eps."""
    q = mpmath.expjpi(2 * tau)
    eps = mpmath.eps * 2
    total = mpmath.mpc(1)
    k = 1
    aq = abs(q)
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        if aq ** e1 < eps:
            break
        sign = -1 if k % 2 else 1
        total += sign * (q ** e1 + q ** e2)
        k += 1
    return mpmath.expjpi(tau / 12) * total


def eta_numeric(tau, config: AnalyticConfig = DEFAULT, flip: bool = True):
    """Dedekind eta at tau.  With ``flip`` the point is first moved into the standard
    fundamental domain using eta(tau + 1) = e^(pi i/12) eta(tau) and
    eta(-1/tau) = sqrt(tau/i) eta(tau)."""
    with mpmath.workdps(config.dps):
        tau = mpmath.mpc(tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half plane")
        if not flip:
            return +_eta_series(tau)
        factor = mpmath.mpc(1)
        for _ in range(10_000):
            n = mpmath.nint(tau.real)
            if n:
                tau -= n
                factor *= mpmath.expjpi(n / 12)
            if abs(tau) < 1 - mpmath.mpf(10) ** (-config.dps // 2):
                # eta(tau) = eta(-1/tau) / sqrt(tau/i)
                factor /= mpmath.sqrt(tau / mpmath.j)
                tau = -1 / tau
            else:
                break
        return +(factor * _eta_series(tau))


def eta_product_numeric(spec: EtaQuotientSpec, tau, config: AnalyticConfig = DEFAULT):
    with mpmath.workdps(config.dps):
        out = mpmath.mpc(1)
        for d, r in spec.flat():
            out *= eta_numeric(d * mpmath.mpc(tau), config) ** r
        return out


# -----------------------------------------------------------------------------
# L(f, 1)


def _complex_coeff(c):
    if isinstance(c, RadicalFieldElem):
        return c.embed(mpmath.mp.dps)
    if isinstance(c, Fraction):
        return _mpq(c)
    return mpmath.mpc(c)


def lvalue_at_1(terms, level: int, config: AnalyticConfig = DEFAULT, series=None,
                n_max: int | None = None):
    """L(f, 1) = 2 pi int_0^oo f(iy) dy for f = sum_i const_i * eta_quotient_i.

    ``terms`` is a list of ``(constant, EtaQuotientSpec)``.  The integral is split at
    y0 = 1/sqrt(level): above y0 it is summed termwise from the q-expansion, below
    y0 the eta products are integrated numerically.
    """
    with mpmath.workdps(config.dps):
        y0 = 1 / mpmath.sqrt(level)
        if n_max is None:
            n_max = config.series_cutoff or int(
                (config.dps + 5) * math.log(10) / (2 * math.pi * float(y0))) + 20
        if series is None:
            series = None
            for c, spec in terms:
                s = eta_quotient_expand(spec, GRID * (n_max + 1)) * c
                series = s if series is None else series + s
        if series.order < GRID * (n_max + 1):
            raise ValueError(f"series stops at q^{series.order // GRID}, need q^{n_max}")
        upper = mpmath.mpc(0)
        for n in range(1, n_max + 1):
            a = series.coeff_q(n)
            if a:
                upper += _complex_coeff(a) * mpmath.exp(-2 * mpmath.pi * n * y0) / n
        consts = [(_complex_coeff(c), spec) for c, spec in terms]

        def f(y):
            if y == 0:
                return mpmath.mpc(0)
            tau = mpmath.mpc(0, y)
            return mpmath.fsum(c * eta_product_numeric(spec, tau, config) for c, spec in consts)

        lower = mpmath.quad(f, [0, y0], method=config.quadrature, maxdegree=config.quad_degree)
        return +(upper + 2 * mpmath.pi * lower)


# -----------------------------------------------------------------------------
# 2F1(1/3, 2/3; 1; t) and the 3P2 period


@lru_cache(maxsize=8)
def _cubic_2f1_tables(dps: int, terms: int):
    with mpmath.workdps(dps):
        a, b = mpmath.mpf(1) / 3, mpmath.mpf(2) / 3
        c = [mpmath.mpf(1)]
        for n in range(1, terms):
            c.append(c[-1] * (a + n - 1) * (b + n - 1) / (n * n))
        d = [c[n] * (2 * mpmath.digamma(n + 1) - mpmath.digamma(a + n) - mpmath.digamma(b + n))
             for n in range(terms)]
        return c, d


def hyp2f1_cubic(t, config: AnalyticConfig = DEFAULT):
    """2F1(1/3, 2/3; 1; t) for |t| <= 1/2 or |1 - t| <= 1/2.

    Power series near 0; near 1 the logarithmic expansion of the c = a + b case,
    which converges geometrically in 1 - t.
    """
    with mpmath.workdps(config.dps):
        t = mpmath.mpmathify(t)
        terms = int(config.dps * math.log2(10)) + 20
        c, d = _cubic_2f1_tables(config.dps, terms)
        if abs(t) <= 0.5:
            return mpmath.polyval(c[::-1], t)
        return _hyp2f1_cubic_near1(1 - t, config)


def _hyp2f1_cubic_near1(u, config: AnalyticConfig = DEFAULT):
    # 2F1(1/3, 2/3; 1; 1 - u), |u| <= 1/2, u != 0
    with mpmath.workdps(config.dps):
        u = mpmath.mpmathify(u)
        if abs(u) > 0.5 or u == 0:
            raise ValueError(f"t = {1 - u} is outside the supported region")
        terms = int(config.dps * math.log2(10)) + 20
        c, d = _cubic_2f1_tables(config.dps, terms)
        s = mpmath.polyval(d[::-1], u) - mpmath.log(u) * mpmath.polyval(c[::-1], u)
        return s * mpmath.sqrt(3) / (2 * mpmath.pi)


def _beta_quad(f, alpha, beta, config: AnalyticConfig = DEFAULT, f_near1=None):
    """int_0^1 t^(alpha-1) (1-t)^(beta-1) f(t) dt for f smooth up to log terms.

    Substituting t = u^(1/alpha) on [0, 1/2] and 1 - t = v^(1/beta) on [1/2, 1]
    absorbs both power singularities into the measure. f_near1(w) = f(1 - w)
    may be supplied to avoid cancellation when w is tiny.
    """
    if f_near1 is None:
        f_near1 = lambda w: f(1 - w)
    half = mpmath.mpf(1) / 2
    kw = dict(method=config.quadrature, maxdegree=config.quad_degree)

    def left(u):
        t = u ** (1 / alpha)
        return (1 - t) ** (beta - 1) * f(t)

    def right(v):
        w = v ** (1 / beta)
        if w == 0:
            return mpmath.mpf(0)
        return (1 - w) ** (alpha - 1) * f_near1(w)

    a = mpmath.quad(left, [0, half ** alpha], **kw) / alpha
    b = mpmath.quad(right, [0, half ** beta], **kw) / beta
    return a + b


def f3p2(r, config: AnalyticConfig = DEFAULT):
    """3P2(HD_K3(r,1); 1) = (2 pi/sqrt 3) int_0^1 t^(r-1) (1-t)^(-r) 2F1(1/3,2/3;1;t) dt."""
    r = Fraction(r)
    if not 0 < r < 1:
        raise ValueError("r must lie strictly between 0 and 1 (the Euler integral diverges)")
    with mpmath.workdps(config.dps):
        rr = _mpq(r)
        val = _beta_quad(lambda t: hyp2f1_cubic(t, config), rr, 1 - rr, config,
                         f_near1=lambda w: _hyp2f1_cubic_near1(w, config))
        return +(2 * mpmath.pi / mpmath.sqrt(3) * val)


def f3f2_integral(r, config: AnalyticConfig = DEFAULT):
    """3F2(1/3,2/3,r;1,1;1) from the period: divide by (2 sqrt3/3) pi B(r,1-r)."""
    with mpmath.workdps(config.dps):
        rr = _mpq(Fraction(r))
        beta = mpmath.pi / mpmath.sinpi(rr)
        return f3p2(r, config) / (2 * mpmath.sqrt(3) / 3 * mpmath.pi * beta)


def f3f2_series(r, config: AnalyticConfig = DEFAULT):
    """3F2(1/3,2/3,r;1,1;1) by direct summation with Levin acceleration.

    The terms decay only like k^(r-2), so plain partial sums are useless; the
    Levin u-transform on the Gamma-function form of the k-th term handles
    the algebraic tail.
    """
    with mpmath.workdps(config.dps + 10):
        a, b, c = mpmath.mpf(1) / 3, mpmath.mpf(2) / 3, _mpq(Fraction(r))
        norm = mpmath.gamma(a) * mpmath.gamma(b) * mpmath.gamma(c)
        tk = lambda x: mpmath.exp(mpmath.loggamma(x + a) + mpmath.loggamma(x + b)
                                  + mpmath.loggamma(x + c) - 3 * mpmath.loggamma(x + 1)) / norm
        val = mpmath.nsum(tk, [0, mpmath.inf], method="levin")
    return +val


# -----------------------------------------------------------------------------
# identity checks


def _k3_member_form(r: Fraction):
    # local import: modforms depends on qseries only, analytic sits above both
    from .modforms import minimal_level, n_k3

    N = n_k3(r)
    spec = EtaQuotientSpec.k3(r, N)
    return N, spec, minimal_level(spec).level


def period_lvalue_check(r, config: AnalyticConfig = DEFAULT) -> CheckResult:
    """3P2(r) = 2 * 3^(3r - 1/2) * N * pi * L(K3(r,1)(N tau), 1)."""
    r = Fraction(r)
    N, spec, level = _k3_member_form(r)
    with mpmath.workdps(config.dps):
        lhs = f3p2(r, config)
        L = lvalue_at_1([(1, spec)], level, config)
        rhs = 2 * mpmath.power(3, 3 * _mpq(r) - mpmath.mpf(1) / 2) * N * mpmath.pi * L
        return CheckResult("period_lvalue", {"r": str(r)}, lhs, rhs, _rel(lhs, rhs), config.target_digits)


def eigenform_lvalue(family_id: int, config: AnalyticConfig):
    from .modforms import build_family, eigenform_complete

    fam = build_family(family_id)
    eig = eigenform_complete(fam)
    terms = [(c, EtaQuotientSpec.k3(r, fam.scale)) for r, c in eig.constants]
    return lvalue_at_1(terms, fam.level, config, series=eig.series)


def eigenform_lvalue_check(config: AnalyticConfig = DEFAULT) -> list[CheckResult]:
    """The five L-value identities for the completed eigenforms."""
    out = []
    with mpmath.workdps(config.dps):
        pi, s3, s5, i = mpmath.pi, mpmath.sqrt(3), mpmath.sqrt(5), mpmath.j
        P = {j: f3p2(Fraction(j, 12), config) for j in (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11)}
        rows = [
            (1, 12 * pi, P[6]),
            (2, 2 * mpmath.power(3, 1.5) * pi, P[4] + i * P[8]),
            (3, 8 * mpmath.root(3, 4) * pi, P[3]),
            (4, 12 * pi, P[2] + i * P[10]),
            (5, 8 * mpmath.power(3, mpmath.mpf(5) / 4) * pi,
             s3 * (P[1] + s5 * P[5]) - i * s3 * (s5 * P[7] + P[11])),
        ]
        for fid, const, rhs in rows:
            lhs = const * eigenform_lvalue(fid, config)
            out.append(CheckResult(f"eigen_lvalue.{fid}", {"family": fid}, lhs, rhs,
                                   _rel(lhs, rhs), config.target_digits))
        lhs, rhs = P[3], P[9] / s3
        out.append(CheckResult("eigen_lvalue.3b", {"family": 3}, lhs, rhs, _rel(lhs, rhs),
                               config.target_digits))
    return out


def _euler_3f2(a1, a2, c, s):
    """3F2(a1, a2, c; 1, s; 1) via its Euler integral, using mpmath's own 2F1."""
    e = 1 - a1 - a2
    if e < 0:
        # Euler: 2F1(a1,a2;1;t) = (1-t)^e 2F1(1-a1,1-a2;1;t); fold (1-t)^e into the weight
        val = _beta_quad(lambda t: mpmath.hyp2f1(1 - a1, 1 - a2, 1, t), c, s - c + e)
    else:
        val = _beta_quad(lambda t: mpmath.hyp2f1(a1, a2, 1, t), c, s - c)
    return val / mpmath.beta(c, s - c)


def kummer_check(r, j: int, config: AnalyticConfig = DEFAULT) -> CheckResult:
    """3F2(1/3,2/3,r;1,1;1) = G * 3F2(j/3, j/3, 1-r; 1, (3+j)/3 - r; 1)."""
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    r = Fraction(r)
    with mpmath.workdps(config.dps):
        rr = _mpq(r)
        lhs = f3f2_integral(r, config)
        s = mpmath.mpf(3 + j) / 3 - rr
        g = mpmath.gamma(1 - rr) / (mpmath.gamma(mpmath.mpf(3 - j) / 3) * mpmath.gamma(s))
        rhs = g * _euler_3f2(mpmath.mpf(j) / 3, mpmath.mpf(j) / 3, 1 - rr, s)
        return CheckResult("kummer", {"r": str(r), "j": j}, lhs, rhs, _rel(lhs, rhs),
                           config.target_digits)


def al_check(r, tau, config: AnalyticConfig = DEFAULT) -> CheckResult:
    """K3(r,1)(-1/(3 tau)) = 3^(9/2 - 6r) i tau^3 K3(1-r,1)(tau)."""
    r = Fraction(r)
    with mpmath.workdps(config.dps):
        tau = mpmath.mpc(tau)
        lhs = eta_product_numeric(EtaQuotientSpec.k3(r), -1 / (3 * tau), config)
        rhs = (mpmath.power(3, mpmath.mpf(9) / 2 - 6 * _mpq(r)) * mpmath.j * tau ** 3
               * eta_product_numeric(EtaQuotientSpec.k3(1 - r), tau, config))
        return CheckResult("atkin_lehner", {"r": str(r), "tau": [float(tau.real), float(tau.imag)]},
                           lhs, rhs, _rel(lhs, rhs), config.target_digits)


def al_kmr_check(r, tau, config: AnalyticConfig = DEFAULT) -> CheckResult:
    """K3kmr(r)(-1/(3 tau)) = 3^(1/2 - 6r) i tau^3 eta(tau)^(5+12r) eta(3tau)^(1-12r)."""
    r = Fraction(r)
    t = int(12 * r)
    with mpmath.workdps(config.dps):
        tau = mpmath.mpc(tau)
        lhs = eta_product_numeric(EtaQuotientSpec.k3_kmr(r), -1 / (3 * tau), config)
        other = EtaQuotientSpec(((1, 5 + t), (3, 1 - t)))
        rhs = (mpmath.power(3, mpmath.mpf(1) / 2 - 6 * _mpq(r)) * mpmath.j * tau ** 3
               * eta_product_numeric(other, tau, config))
        return CheckResult("atkin_lehner_kmr", {"r": str(r), "tau": [float(tau.real), float(tau.imag)]},
                           lhs, rhs, _rel(lhs, rhs), config.target_digits)


def theta_numeric(kind: str, tau, config: AnalyticConfig = DEFAULT):
    """a(tau) or c(tau) by direct lattice summation."""
    with mpmath.workdps(config.dps):
        tau = mpmath.mpc(tau)
        q = mpmath.expjpi(2 * tau)
        aq = abs(q)
        shift = mpmath.mpf(1) / 3 if kind == "c" else 0
        # Q(n,m) >= 3/4 n^2 bounds the window
        K = int(config.dps * math.log(10) / -math.log(float(aq))) + 2
        R = int(math.isqrt(4 * K // 3 + 1)) + 2
        total = mpmath.mpc(0)
        for n in range(-R, R + 1):
            for m in range(-R, R + 1):
                x, y = n + shift, m + shift
                Q = x * x + x * y + y * y
                if Q <= K + 1:
                    total += mpmath.expjpi(2 * tau * Q)
        return total


def borwein_numeric_check(tau, config: AnalyticConfig = DEFAULT) -> CheckResult:
    """2F1(1/3,2/3;1;t3(tau)) = a(tau) with t3 = (c/a)^3, all numerically."""
    with mpmath.workdps(config.dps):
        tau = mpmath.mpc(tau)
        a = theta_numeric("a", tau, config)
        c = theta_numeric("c", tau, config)
        t3 = (c / a) ** 3
        if abs(t3) > 0.5 and abs(1 - t3) > 0.5:
            raise ValueError(f"t3({tau}) = {t3} is outside the 2F1 evaluation region")
        lhs = hyp2f1_cubic(t3, config)
        return CheckResult("borwein", {"tau": [float(tau.real), float(tau.imag)]}, lhs, a,
                           _rel(lhs, a), config.target_digits)


# -----------------------------------------------------------------------------
# the full battery

S3 = tuple(Fraction(j, 12) for j in range(1, 12))
KUMMER_GRID = tuple((Fraction(r), j) for r in ("1/12", "1/2", "5/6") for j in (1, 2))
AL_POINTS = ((Fraction(1, 2), 1j / math.sqrt(3)), (Fraction(1, 3), 0.2 + 0.9j), (Fraction(2, 3), 1j))
BORWEIN_POINTS = (1j, 2j, 0.3 + 0.8j)


def analytic_suite(config: AnalyticConfig = DEFAULT) -> list[CheckResult]:
    out = [period_lvalue_check(r, config) for r in S3]
    out += eigenform_lvalue_check(config)
    out += [kummer_check(r, j, config) for r, j in KUMMER_GRID]
    for r, tau in AL_POINTS:
        out.append(al_check(r, tau, config))
        out.append(al_kmr_check(r, tau, config))
    out += [borwein_numeric_check(tau, config) for tau in BORWEIN_POINTS]
    return out
