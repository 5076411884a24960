"""Special functions and polynomial families.

Each evaluator here is computed by a route that does not go through the
identity it is later checked against:

* Bernoulli numbers come from their defining recurrence, Euler numbers from
  inverting the cosh series, Stirling numbers from the triangle recurrence;
  all three tables are built in exact integer/rational arithmetic.
* The Hurwitz zeta function is continued by Euler-Maclaurin summation whose
  correction coefficients come from a separate (Akiyama-Tanigawa) Bernoulli
  generator, so zeta at the negative integers is not read off a Bernoulli
  polynomial.
* The alternating Hurwitz zeta and Euler's L-function are differences of
  Hurwitz zeta values with the s = 1 poles cancelled analytically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import DomainError, NoConvergence, PoleError
from .numerics import (
    QuadratureConfig,
    SeriesConfig,
    as_complex,
    gamma,
    integrate_halfline,
    sum_series,
)

__all__ = [
    "ZetaConfig",
    "bernoulli_numbers",
    "bernoulli_poly",
    "bernoulli_poly_coeffs",
    "euler_numbers",
    "euler_poly",
    "euler_poly_coeffs",
    "stirling2_row",
    "hurwitz_zeta",
    "hurwitz_zeta_neg_int",
    "alt_hurwitz_eta",
    "euler_L",
    "exp_poly",
    "exp_poly_coeffs",
    "exp_poly_dobinski",
    "exp_poly_mellin_factor",
    "hermite",
    "parabolic_cylinder_int",
    "parabolic_cylinder_neg",
]


# ---------------------------------------------------------------------------
# Coefficient tables


@lru_cache(maxsize=None)
def _bernoulli_exact(n_max: int) -> tuple[Fraction, ...]:
    # sum_{k=0}^{n} C(n+1, k) B_k = 0 for n >= 1, B_0 = 1
    b = [Fraction(1)]
    for n in range(1, n_max + 1):
        acc = sum(comb(n + 1, k) * b[k] for k in range(n))
        b.append(-acc / (n + 1))
    return tuple(b)


def bernoulli_numbers(N: int) -> tuple[float, ...]:
    """B_0, ..., B_N (with B_1 = -1/2), correctly rounded to binary64."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    return tuple(float(x) for x in _bernoulli_exact(N))


def bernoulli_poly_coeffs(n: int) -> tuple[float, ...]:
    """Ascending coefficients of B_n(z) = sum_k C(n, k) B_k z^(n-k)."""
    b = _bernoulli_exact(n)
    return tuple(float(comb(n, n - j) * b[n - j]) for j in range(n + 1))


def bernoulli_poly(n: int, z) -> complex:
    """Bernoulli polynomial B_n(z)."""
    if n < 0:
        raise DomainError("degree must be nonnegative")
    return _horner(bernoulli_poly_coeffs(n), as_complex(z))


@lru_cache(maxsize=None)
def _euler_exact(n_max: int) -> tuple[int, ...]:
    # coefficients of 1/cosh x: sum_{j} C(n, 2j) E_{n-2j} = [n == 0]
    e = [1]
    for n in range(1, n_max + 1):
        if n % 2:
            e.append(0)
            continue
        acc = sum(comb(n, 2 * j) * e[n - 2 * j] for j in range(1, n // 2 + 1))
        e.append(-acc)
    return tuple(e)


def euler_numbers(N: int) -> tuple[float, ...]:
    """Euler numbers E_0, ..., E_N from 1/cosh x = sum E_n x^n / n!."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    return tuple(float(x) for x in _euler_exact(N))


@lru_cache(maxsize=None)
def _euler_poly_exact(n: int) -> tuple[Fraction, ...]:
    # E_n(z) = sum_k C(n,k) E_k / 2^k (z - 1/2)^(n-k), expanded in powers of z
    e = _euler_exact(n)
    half = Fraction(1, 2)
    out = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        if e[k] == 0:
            continue
        ck = comb(n, k) * Fraction(e[k], 2**k)
        m = n - k
        for j in range(m + 1):
            out[j] += ck * comb(m, j) * (-half) ** (m - j)
    return tuple(out)


def euler_poly_coeffs(n: int) -> tuple[float, ...]:
    """Ascending coefficients of the Euler polynomial E_n(z)."""
    return tuple(float(c) for c in _euler_poly_exact(n))


def euler_poly(n: int, z) -> complex:
    """Euler polynomial E_n(z), evaluated in powers of (z - 1/2)."""
    if n < 0:
        raise DomainError("degree must be nonnegative")
    w = as_complex(z) - 0.5
    e = _euler_exact(n)
    coeffs = [comb(n, k) * e[k] / 2.0**k for k in range(n + 1)]
    # coeffs[k] multiplies w^(n-k)
    return _horner(coeffs[::-1], w)


@lru_cache(maxsize=None)
def stirling2_row(n: int) -> tuple[int, ...]:
    """Stirling numbers of the second kind S(n, 0..n)."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    row = (1,)
    for m in range(1, n + 1):
        prev = row + (0,)
        row = tuple((k * prev[k] if k else 0) + (prev[k - 1] if k else 0) for k in range(m + 1))
    return row


def _horner(coeffs, z: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


# ---------------------------------------------------------------------------
# Hurwitz zeta by Euler-Maclaurin

_EM_MAX_ORDER = 60


@lru_cache(maxsize=None)
def _em_ratios() -> tuple[float, ...]:
    """B_{2j} / (2j)! for j = 0.._EM_MAX_ORDER + 1, via Akiyama-Tanigawa."""
    size = 2 * _EM_MAX_ORDER + 3
    a = [Fraction(0)] * (size + 1)
    bern = []
    for m in range(size + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        bern.append(a[0])  # this variant yields B_1 = +1/2; only even indices are used
    return tuple(float(bern[2 * j] / math.factorial(2 * j)) for j in range(_EM_MAX_ORDER + 2))


@dataclass(frozen=True)
class ZetaConfig:
    """Euler-Maclaurin parameters.

    ``em_terms`` is the length N of the direct sum; None picks the smallest N
    for which the first omitted correction term falls below ``target``.
    ``em_order`` is the number M of Bernoulli corrections; for Re(s) < 0 it is
    raised so that the expansion terminates exactly at negative integers.
    """

    em_terms: int | None = None
    em_order: int = 12
    pole_guard: float = 1e-8
    target: float = 1e-17

    def __post_init__(self):
        if self.em_terms is not None and self.em_terms < 1:
            raise ValueError("em_terms must be positive")
        if not 1 <= self.em_order <= _EM_MAX_ORDER:
            raise ValueError(f"em_order must lie in 1..{_EM_MAX_ORDER}")
        if not self.pole_guard > 0:
            raise ValueError("pole_guard must be positive")


def _em_plan(s: complex, zs: list[complex], cfg: ZetaConfig) -> tuple[int, int]:
    order = cfg.em_order
    if s.real < 0:
        order = min(_EM_MAX_ORDER, max(order, math.ceil((1.0 - s.real) / 2.0) + 1))
    if cfg.em_terms is not None:
        return cfg.em_terms, order
    # first omitted term ~ |B_{2M+2}/(2M+2)!| |(s)_{2M+1}| w^(-Re s - 2M - 1)
    poch = 1.0
    for j in range(2 * order + 1):
        poch *= abs(s + j)
    size = abs(_em_ratios()[order + 1]) * poch
    if size == 0.0:
        need = 0.0
    else:
        need = (size / cfg.target) ** (1.0 / (2 * order + 1))
    low = min(z.real for z in zs)
    return max(0, math.ceil(need - low)), order


def _em_regular(s: complex, z: complex, n_terms: int, order: int) -> tuple[complex, complex]:
    """Euler-Maclaurin sum without the pole term; also returns w = z + N."""
    acc = 0j
    for k in range(n_terms):
        acc += (z + k) ** (-s)
    w = z + n_terms
    logw = cmath.log(w)
    w_s = cmath.exp(-s * logw)
    acc += 0.5 * w_s
    ratios = _em_ratios()
    poch = s
    power = w_s / w
    inv_w2 = 1.0 / (w * w)
    for j in range(1, order + 1):
        acc += ratios[j] * poch * power
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        power *= inv_w2
        if poch == 0:
            break
    return acc, w


def _check_z(z: complex) -> None:
    if not z.real > 0:
        raise DomainError(f"need Re(z) > 0, got z = {z}")


def hurwitz_zeta(s, z, cfg: ZetaConfig | None = None) -> complex:
    """Hurwitz zeta function zeta(s, z) for Re(z) > 0, continued to s != 1.

    >>> round(hurwitz_zeta(2, 1).real, 10)
    1.6449340668
    """
    cfg = cfg or ZetaConfig()
    s = as_complex(s)
    z = as_complex(z)
    _check_z(z)
    if abs(s - 1.0) <= cfg.pole_guard:
        raise PoleError(f"zeta(s, z) has a pole at s = 1; got s = {s}")
    n_terms, order = _em_plan(s, [z], cfg)
    regular, w = _em_regular(s, z, n_terms, order)
    return regular + cmath.exp((1.0 - s) * cmath.log(w)) / (s - 1.0)


def hurwitz_zeta_neg_int(n: int, z) -> complex:
    """zeta(-n, z) = -B_{n+1}(z) / (n+1), the closed form at nonpositive integers."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    return -bernoulli_poly(n + 1, z) / (n + 1)


def _expm1_over(u: complex) -> complex:
    # (e^u - 1) / u, entire, equal to 1 at u = 0
    if abs(u) < 0.5:
        acc = 0j
        term = 1.0 + 0j
        for k in range(1, 30):
            acc += term
            term *= u / (k + 1)
            if abs(term) < 1e-18 * abs(acc):
                break
        return acc
    return (cmath.exp(u) - 1.0) / u


def _zeta_difference(s: complex, a: complex, b: complex, cfg: ZetaConfig) -> complex:
    """zeta(s, a) - zeta(s, b); entire in s because the poles at s = 1 cancel."""
    n_terms, order = _em_plan(s, [a, b], cfg)
    ra, wa = _em_regular(s, a, n_terms, order)
    rb, wb = _em_regular(s, b, n_terms, order)
    eps = s - 1.0
    la = cmath.log(wa)
    lb = cmath.log(wb)
    # (wa^(1-s) - wb^(1-s)) / (s - 1), written without dividing by s - 1
    pole = lb * _expm1_over(-eps * lb) - la * _expm1_over(-eps * la)
    return ra - rb + pole


def alt_hurwitz_eta(s, z, cfg: ZetaConfig | None = None) -> complex:
    """Alternating Hurwitz zeta eta(s, z) = sum (-1)^n (n+z)^(-s), entire in s.

    Evaluated as 2^(-s) [zeta(s, z/2) - zeta(s, (z+1)/2)].
    """
    cfg = cfg or ZetaConfig()
    s = as_complex(s)
    z = as_complex(z)
    _check_z(z)
    return 2.0 ** (-s) * _zeta_difference(s, z / 2.0, (z + 1.0) / 2.0, cfg)


def euler_L(s, cfg: ZetaConfig | None = None) -> complex:
    """Euler's L-function sum (-1)^n (2n+1)^(-s) (Dirichlet beta), entire in s."""
    cfg = cfg or ZetaConfig()
    s = as_complex(s)
    return 4.0 ** (-s) * _zeta_difference(s, 0.25 + 0j, 0.75 + 0j, cfg)


# ---------------------------------------------------------------------------
# Exponential (Touchard) polynomials


def exp_poly_coeffs(n: int) -> tuple[float, ...]:
    """Ascending coefficients S(n, k) of phi_n(z)."""
    return tuple(float(c) for c in stirling2_row(n))


def exp_poly(n: int, z) -> complex:
    """Exponential polynomial phi_n(z) = sum_k S(n, k) z^k; phi_n(1) is the n-th Bell number."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    return _horner(stirling2_row(n), as_complex(z))


def exp_poly_dobinski(lam: float, z: float, cfg: SeriesConfig | None = None) -> float:
    """Dobinski-type series e^(-z) sum_k k^lam z^k / k!, with 0^0 = 1 and 0^lam = 0.

    Defined for real lam >= 0 and z > 0; integer lam = n reproduces phi_n(z).
    """
    if not lam >= 0 or not math.isfinite(lam):
        raise DomainError(f"need real lam >= 0, got {lam!r}")
    if not z > 0 or not math.isfinite(z):
        raise DomainError(f"need real z > 0, got {z!r}")
    weight = [1.0]  # z^k / k!, extended lazily

    def term(k: int) -> float:
        if k == 0:
            return 1.0 if lam == 0 else 0.0
        while len(weight) <= k:
            weight.append(weight[-1] * z / len(weight))
        return float(k) ** lam * weight[k]

    res = sum_series(term, cfg)
    if not res.converged:
        raise NoConvergence(f"Dobinski series did not converge for lam={lam}, z={z}", res)
    return math.exp(-z) * res.value.real


def exp_poly_mellin_factor(s, z: float, cfg: SeriesConfig | None = None) -> complex:
    """f(s, z) = e^(-z) sum_{k>=1} z^k k^(-s) / k!, entire in s.

    Gamma(s) f(s, z) is the Mellin transform of e^(z(e^(-x) - 1)) - e^(-z) for
    Re(s) > 0. At s = -n it equals phi_n(z) for n >= 1 and 1 - e^(-z) at n = 0.
    """
    s = as_complex(s)
    if not z > 0 or not math.isfinite(z):
        raise DomainError(f"need real z > 0, got {z!r}")
    weight = [1.0]

    def term(j: int) -> complex:
        k = j + 1
        while len(weight) <= k:
            weight.append(weight[-1] * z / len(weight))
        return cmath.exp(-s * math.log(k)) * weight[k]

    res = sum_series(term, cfg)
    if not res.converged:
        raise NoConvergence(f"series for f(s, z) did not converge at s={s}, z={z}", res)
    return math.exp(-z) * res.value


# ---------------------------------------------------------------------------
# Hermite polynomials and parabolic cylinder functions


def hermite(n: int, z) -> complex:
    """Physicists' Hermite polynomial H_n(z) by the three-term recurrence."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    z = as_complex(z)
    h_prev, h = 1.0 + 0j, 2.0 * z
    if n == 0:
        return h_prev
    for k in range(1, n):
        h_prev, h = h, 2.0 * z * h - 2.0 * k * h_prev
    return h


def parabolic_cylinder_int(n: int, x: float) -> float:
    """D_n(x) for integer n >= 0 from D_{k+1} = x D_k - k D_{k-1}."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    d_prev = math.exp(-0.25 * x * x)
    if n == 0:
        return d_prev
    d = x * d_prev
    for k in range(1, n):
        d_prev, d = d, x * d - k * d_prev
    return d


def parabolic_cylinder_neg(s, x: float, cfg: QuadratureConfig | None = None) -> complex:
    """D_{-s}(x) for Re(s) > 0 from its Laplace-type integral representation.

    D_{-s}(x) = exp(-x^2/4) / Gamma(s) * int_0^inf t^(s-1) exp(-x t - t^2/2) dt
    """
    s = as_complex(s)
    if not s.real > 0:
        raise DomainError(f"integral representation needs Re(s) > 0, got s = {s}")
    x = float(x)
    sr, si = s.real - 1.0, s.imag

    def integrand(t: float) -> complex:
        lt = math.log(t)
        mag = math.exp(sr * lt - x * t - 0.5 * t * t)
        if si == 0.0:
            return mag
        return mag * complex(math.cos(si * lt), math.sin(si * lt))

    res = integrate_halfline(integrand, cfg)
    return math.exp(-0.25 * x * x) * res.value / gamma(s)
