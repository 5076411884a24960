"""Forward and inverse Mellin transforms and residue-series summation.

The inverse transform is taken along a truncated vertical line a + it,
|t| <= T. When the transform has the form G(s) = Gamma(s) f(s) with f bounded
on the line, the discarded tails are bounded with the Stirling-type decay of
|Gamma(a + it)|, and `choose_truncation` picks T from that bound.

Closing the contour to the left turns the same integral into the residue
series sum_n c_n f(-n) x^n; `residue_series` evaluates it for c_n the Gamma
residues (-1)^n / n!.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, NoConvergence, NonFiniteTerm
from .numerics import (
    QuadratureConfig,
    SeriesConfig,
    ValueWithError,
    as_complex,
    gamma,
    gamma_residue,
    integrate_finite,
    integrate_halfline,
    sum_series,
)

__all__ = [
    "VerticalLine",
    "ResidueSeriesSpec",
    "mellin_forward",
    "choose_truncation",
    "estimate_sup",
    "line_for_gamma_kernel",
    "mellin_inverse",
    "invert_gamma_kernel",
    "residue_series",
    "residue_series_general",
    "master_theorem_lhs",
    "master_theorem_sides",
    "master_theorem_check",
]

DEFAULT_ABSCISSA = 0.5
T_MAX = 1e4

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class VerticalLine:
    """Inversion contour a + it, truncated to |t| <= T."""

    a: float = DEFAULT_ABSCISSA
    T: float = 20.0

    def __post_init__(self):
        if not math.isfinite(self.a):
            raise DomainError("abscissa must be finite")
        if not (self.T > 0 and math.isfinite(self.T)):
            raise DomainError("truncation height must be positive and finite")


@dataclass(frozen=True)
class ResidueSeriesSpec:
    """Residues c_n, the multiplier f (evaluated at s = -n) and the point x > 0."""

    residues: Callable[[int], complex]
    f: Callable[[complex], complex]
    x: float

    def __post_init__(self):
        if not self.x > 0:
            raise DomainError(f"need x > 0, got {self.x!r}")


def _power(x: float, s: complex) -> complex:
    # x**s for x > 0 on the principal branch
    if s.imag == 0.0:
        return complex(x**s.real)
    return cmath.exp(s * math.log(x))


def mellin_forward(
    g: Callable[[float], complex],
    s,
    cfg: QuadratureConfig | None = None,
) -> ValueWithError:
    """Mellin transform G(s) = int_0^inf x^(s-1) g(x) dx by half-line quadrature."""
    s = as_complex(s)
    if s.real <= 0:
        warnings.warn(
            f"Re(s) = {s.real} <= 0: the Mellin integral usually diverges at 0", RuntimeWarning, stacklevel=2
        )
    sm1 = s - 1.0
    return integrate_halfline(lambda x: _power(x, sm1) * g(x), cfg)


def _tail_bound(a: float, T: float) -> float:
    # int_T^inf sqrt(2 pi) t^(a-1/2) e^(-pi t/2) dt <= sqrt(2 pi) T^(a-1/2) e^(-pi T/2) / (pi/2 - p/T)
    p = max(0.0, a - 0.5)
    rate = 0.5 * math.pi - p / T
    if rate <= 0:
        return math.inf
    return _SQRT_2PI * T ** (a - 0.5) * math.exp(-0.5 * math.pi * T) / rate


def choose_truncation(line_a: float, sup_f: float, tol: float) -> float:
    """Smallest height T with 2 * sup_f * (tail of the Gamma line bound beyond T) < tol.

    T is searched on the doubling grid 1, 2, 4, ... and then bisected.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    if sup_f < 0:
        raise DomainError("sup_f must be nonnegative")

    def ok(T: float) -> bool:
        return 2.0 * sup_f * _tail_bound(line_a, T) < tol

    hi = 1.0
    if ok(hi):
        return hi
    while not ok(hi):
        hi *= 2.0
        if hi > T_MAX:
            raise DomainError(f"no truncation height up to {T_MAX:g} meets tol={tol:g}")
    lo = hi / 2.0
    while hi - lo > 1e-6 * hi:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def estimate_sup(f: Callable[[complex], complex], a: float = DEFAULT_ABSCISSA, T0: float = 10.0,
                 safety: float = 10.0, samples: int = 201) -> float:
    """Heuristic bound for |f(a + it)|: the sampled maximum on |t| <= T0 times ``safety``."""
    peak = 0.0
    for k in range(samples):
        t = -T0 + 2.0 * T0 * k / (samples - 1)
        peak = max(peak, abs(f(complex(a, t))))
    return safety * peak


def line_for_gamma_kernel(f: Callable[[complex], complex], a: float = DEFAULT_ABSCISSA,
                          tol: float = 1e-10, sup_f: float | None = None) -> tuple[VerticalLine, float]:
    """Inversion line for G = Gamma * f, with T from the truncation bound. Returns (line, sup_f)."""
    if sup_f is None:
        sup_f = estimate_sup(f, a)
    return VerticalLine(a, choose_truncation(a, sup_f, tol)), sup_f


def mellin_inverse(
    G: Callable[[complex], complex],
    x: float,
    line: VerticalLine,
    cfg: QuadratureConfig | None = None,
    *,
    sup_f: float | None = None,
) -> ValueWithError:
    """(1 / 2 pi i) int over a + it, |t| <= T, of x^(-s) G(s) ds.

    If ``sup_f`` is given, G is taken to be Gamma(s) f(s) with |f| <= sup_f on the
    line, and the bound on the discarded tails is added to the error estimate.
    """
    if not x > 0:
        raise DomainError(f"need x > 0, got {x!r}")
    a, T = line.a, line.T
    logx = math.log(x)

    def integrand(t: float) -> complex:
        s = complex(a, t)
        return cmath.exp(-s * logx) * G(s)

    res = integrate_finite(integrand, -T, T, cfg)
    value = res.value / (2.0 * math.pi)
    err = res.error_estimate / (2.0 * math.pi)
    if sup_f is not None:
        err += x ** (-a) * 2.0 * sup_f * _tail_bound(a, T) / (2.0 * math.pi)
    return ValueWithError(value, err, res.evaluations, res.converged)


def invert_gamma_kernel(
    f: Callable[[complex], complex],
    x: float,
    a: float = DEFAULT_ABSCISSA,
    tol: float = 1e-10,
    cfg: QuadratureConfig | None = None,
    sup_f: float | None = None,
) -> ValueWithError:
    """Inverse Mellin transform of Gamma(s) f(s) on a line chosen by `line_for_gamma_kernel`."""
    line, sup = line_for_gamma_kernel(f, a, tol, sup_f)
    return mellin_inverse(lambda s: gamma(s) * f(s), x, line, cfg, sup_f=sup)


def residue_series_general(spec: ResidueSeriesSpec, cfg: SeriesConfig | None = None) -> ValueWithError:
    """sum_n c_n f(-n) x^n."""
    x = spec.x

    def term(n: int) -> complex:
        return spec.residues(n) * _checked(spec.f, n) * x**n

    res = sum_series(term, cfg)
    if not res.converged:
        raise NoConvergence(f"residue series did not converge at x={x}", res)
    return res


def residue_series(f: Callable[[complex], complex], x: float, cfg: SeriesConfig | None = None) -> ValueWithError:
    """sum_n ((-1)^n / n!) f(-n) x^n, the residue expansion of Gamma(s) f(s)."""
    if not x > 0:
        raise DomainError(f"need x > 0, got {x!r}")
    weights = [1.0]  # x^n / n!, kept as a running product so neither factor overflows

    def term(n: int) -> complex:
        while len(weights) <= n:
            weights.append(weights[-1] * x / len(weights))
        sign = -1.0 if n % 2 else 1.0
        return sign * weights[n] * _checked(f, n)

    res = sum_series(term, cfg)
    if not res.converged:
        raise NoConvergence(f"residue series did not converge at x={x}", res)
    return res


def _checked(f, n: int) -> complex:
    v = complex(f(complex(-n, 0.0)))
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise NonFiniteTerm(f"f(-{n}) = {v}")
    return v


# ---------------------------------------------------------------------------
# Ramanujan's Master Theorem

# candidate switch points, largest first; the series must be well conditioned there
_SWITCH_GRID = (16.0, 8.0, 4.0, 2.0, 1.0, 0.5, 0.25, 0.125)
_MAX_CONDITION = 1e5
_PROFILE_RTOL = 1e-9


class _Ramanujan:
    """Pointwise evaluator of F(x) = sum_n f(n) (-x)^n / n! with cached coefficients."""

    def __init__(self, f, scfg: SeriesConfig):
        self.f = f
        self.scfg = scfg
        self.coef: list[complex] = []
        self.inv_fact = 1.0

    def _a(self, n: int) -> complex:
        while len(self.coef) <= n:
            k = len(self.coef)
            if k:
                self.inv_fact /= k
            fk = complex(self.f(complex(k, 0.0)))
            self.coef.append(fk * self.inv_fact)
        return self.coef[n]

    def sum(self, x: float) -> tuple[ValueWithError, float]:
        absum = 0.0

        def term(n: int) -> complex:
            nonlocal absum
            t = self._a(n) * (-x) ** n
            absum += abs(t)
            return t

        return sum_series(term, self.scfg), absum

    def __call__(self, x: float) -> complex:
        res, _ = self.sum(x)
        if not res.converged:
            raise NoConvergence(f"Ramanujan series did not converge at x={x}", res)
        return res.value


def _well_conditioned(F: _Ramanujan, x: float) -> bool:
    try:
        res, absum = F.sum(x)
    except (NonFiniteTerm, OverflowError):
        return False
    if not res.converged or res.evaluations > 400:
        return False
    return absum <= _MAX_CONDITION * max(abs(res.value), 1e-300)


def master_theorem_lhs(
    f: Callable[[complex], complex],
    s,
    cfg: QuadratureConfig | None = None,
    scfg: SeriesConfig | None = None,
    *,
    profile: Callable[[float], complex] | None = None,
) -> ValueWithError:
    """int_0^inf x^(s-1) F(x) dx with F(x) = sum_n f(n) (-x)^n / n! summed pointwise.

    The series is used on [0, X], X being the largest grid point at which it
    converges without heavy cancellation. Beyond X the integral needs
    ``profile``, a closed form of F (its analytic continuation), which is
    checked against the series on [X/2, X] before use. Without a profile the
    integral stops at X and the dropped tail, estimated as X^Re(s) |F(X)|, is
    added to the error estimate.
    """
    s = as_complex(s)
    if not 0 < s.real < 1:
        raise DomainError(f"need 0 < Re(s) < 1, got s = {s}")
    scfg = scfg or SeriesConfig()
    F = _Ramanujan(f, scfg)
    X = next((x for x in _SWITCH_GRID if _well_conditioned(F, x)), None)
    if X is None:
        raise NoConvergence("Ramanujan series is ill conditioned even at x = 1/8")

    # int_0^X x^(s-1) F(x) dx with x = X e^(-u)
    head = integrate_halfline(lambda u: cmath.exp(-u * s) * F(X * math.exp(-u)), cfg)
    Xs = _power(X, s)
    value = Xs * head.value
    err = abs(Xs) * head.error_estimate
    evals = head.evaluations

    if profile is None:
        return ValueWithError(value, err + X**s.real * abs(F(X)), evals)
    for frac in (0.5, 0.75, 1.0):
        xs = frac * X
        ser, ref = F(xs), complex(profile(xs))
        if abs(ser - ref) > _PROFILE_RTOL * max(abs(ser), abs(ref), 1e-300):
            raise DomainError(f"profile disagrees with the series at x={xs}: {ref} vs {ser}")
    sm1 = s - 1.0
    tail = integrate_halfline(lambda y: _power(X + y, sm1) * profile(X + y), cfg)
    return ValueWithError(value + tail.value, err + tail.error_estimate, evals + tail.evaluations)


def master_theorem_sides(
    f: Callable[[complex], complex],
    s,
    cfg: QuadratureConfig | None = None,
    scfg: SeriesConfig | None = None,
    *,
    profile: Callable[[float], complex] | None = None,
) -> tuple[ValueWithError, complex]:
    """(left side, right side) of Ramanujan's Master Theorem; the right side is f(-s) Gamma(s)."""
    lhs = master_theorem_lhs(f, s, cfg, scfg, profile=profile)
    s = as_complex(s)
    return lhs, complex(f(-s)) * gamma(s)


def master_theorem_check(
    f: Callable[[complex], complex],
    s,
    cfg: QuadratureConfig | None = None,
    scfg: SeriesConfig | None = None,
    *,
    profile: Callable[[float], complex] | None = None,
) -> float:
    """Absolute residual |int_0^inf x^(s-1) sum f(n)(-x)^n/n! dx - f(-s) Gamma(s)|."""
    lhs, rhs = master_theorem_sides(f, s, cfg, scfg, profile=profile)
    return abs(lhs.value - rhs)
