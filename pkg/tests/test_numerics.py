import cmath
import math
import random

import mpmath
import pytest

from mellinkit.errors import DomainError, NoConvergence, NonFiniteIntegrand, NonFiniteTerm, PoleError
from mellinkit.numerics import (
    QuadratureConfig,
    SeriesConfig,
    gamma,
    gamma_line_bound,
    gamma_residue,
    integrate_finite,
    integrate_halfline,
    log_gamma,
    pochhammer,
    sum_series,
)

from conftest import rel_err


def _sample_s(rng, avoid_integers=False):
    while True:
        s = complex(rng.uniform(-20, 20), rng.uniform(-20, 20))
        if abs(s) > 20:
            continue
        if s.real <= 0.5 and abs(s.imag) < 0.1 and abs(s.real - round(s.real)) < 0.1 and round(s.real) <= 0:
            continue
        if avoid_integers and abs(s.imag) < 0.1 and abs(s.real - round(s.real)) < 0.1:
            continue
        return s


class TestGammaValues:
    @pytest.mark.parametrize("s, expected", [(1, 1.0), (5, 24.0), (0.5, math.sqrt(math.pi))])
    def test_examples(self, s, expected):
        assert rel_err(gamma(s), expected) <= 1e-15

    def test_factorials_exact(self):
        for n in range(1, 25):
            assert gamma(n) == float(math.factorial(n - 1))

    def test_against_mpmath(self, rng):
        worst = 0.0
        for _ in range(300):
            s = _sample_s(rng)
            s = s * (50 / 20) if abs(s * 2.5) <= 50 else s
            worst = max(worst, rel_err(gamma(s), complex(mpmath.gamma(mpmath.mpc(s.real, s.imag)))))
        assert worst <= 1e-12

    def test_pole_guard(self):
        for n in range(0, 6):
            with pytest.raises(PoleError):
                gamma(-n)
            with pytest.raises(PoleError):
                gamma(-n + 5e-10)
        gamma(-3 + 1e-8)  # outside the guard

    @pytest.mark.parametrize("bad", [math.nan, math.inf, complex(0, math.inf)])
    def test_non_finite_rejected(self, bad):
        with pytest.raises(DomainError):
            gamma(bad)


class TestGammaInvariants:
    def test_recurrence(self):
        rng = random.Random(11)
        for _ in range(1000):
            s = _sample_s(rng)
            g1 = gamma(s + 1)
            assert abs(g1 - s * gamma(s)) <= 1e-11 * abs(g1)

    def test_reflection(self):
        rng = random.Random(12)
        for _ in range(1000):
            s = _sample_s(rng, avoid_integers=True)
            lhs = gamma(s) * gamma(1 - s)
            rhs = math.pi / cmath.sin(math.pi * s)
            assert rel_err(lhs, rhs) <= 1e-10

    @pytest.mark.parametrize("n", range(11))
    def test_residue_limit(self, n):
        eps = 1e-8
        s = -n + eps
        assert abs((s + n) * gamma(s) - gamma_residue(n)) <= 1e-6

    def test_log_gamma_consistent(self, rng):
        for _ in range(200):
            s = _sample_s(rng)
            assert rel_err(cmath.exp(log_gamma(s)), gamma(s)) <= 1e-11

    @pytest.mark.parametrize("s, expected", [(1, 0.0), (2, 0.0), (5, math.log(24))])
    def test_log_gamma_examples(self, s, expected):
        assert abs(log_gamma(s) - expected) <= 1e-14


class TestResidueAndBound:
    @pytest.mark.parametrize("n, expected", [(0, 1.0), (1, -1.0), (2, 0.5), (5, -1 / 120)])
    def test_gamma_residue(self, n, expected):
        assert gamma_residue(n) == expected

    def test_gamma_residue_large_n_no_overflow(self):
        assert gamma_residue(200) == 0.0 or abs(gamma_residue(200)) < 1e-300

    @pytest.mark.parametrize("t", [10.0, 20.0])
    def test_bound_examples(self, t):
        # sqrt(2 pi) e^(-pi t / 2) evaluated in extended precision
        mpmath.mp.dps = 30
        expected = float(mpmath.sqrt(2 * mpmath.pi) * mpmath.exp(-mpmath.pi * t / 2))
        mpmath.mp.dps = 15
        assert rel_err(gamma_line_bound(0.5, t), expected) <= 1e-13

    def test_bound_rejects_zero(self):
        with pytest.raises(DomainError):
            gamma_line_bound(0.5, 0.0)

    @pytest.mark.parametrize("a", [0.25, 0.5, 0.75])
    def test_bound_asymptotics(self, a):
        for k in range(31):
            t = 30.0 + k
            ratio = gamma_line_bound(a, t) / abs(cmath.exp(log_gamma(complex(a, t))))
            assert 0.99 <= ratio <= 1.01

    def test_bound_monotone(self):
        vals = [gamma_line_bound(0.75, 1.0 + 0.5 * k) for k in range(40)]
        assert all(x > y for x, y in zip(vals, vals[1:]))


@pytest.mark.parametrize("s, k, expected", [(3, 0, 1), (2, 3, 24), (-1, 2, 0)])
def test_pochhammer(s, k, expected):
    assert pochhammer(s, k) == expected


class TestQuadrature:
    def test_finite_examples(self):
        r = integrate_finite(lambda x: 1.0, 0.0, 1.0)
        assert abs(r.value - 1) <= 1e-14 and r.error_estimate <= 1e-14
        assert abs(integrate_finite(lambda x: x, 0.0, 2.0).value - 2) <= 1e-14
        r = integrate_finite(lambda x: math.exp(-x), 0.0, 10.0)
        assert abs(r.value - (1 - math.exp(-10))) <= 1e-13

    def test_finite_error_is_honest(self):
        cfg = QuadratureConfig(abs_tol=1e-13, rel_tol=1e-13)
        r = integrate_finite(lambda x: math.sqrt(x), 0.0, 1.0, cfg)
        assert abs(r.value - 2 / 3) <= max(r.error_estimate, 1e-15)

    def test_finite_non_finite(self):
        with pytest.raises(NonFiniteIntegrand):
            integrate_finite(lambda x: math.nan, 0.0, 1.0)

    def test_halfline_examples(self):
        assert abs(integrate_halfline(lambda x: math.exp(-x)).value - 1) <= 1e-12
        r = integrate_halfline(lambda x: x**-0.5 * math.exp(-x))
        assert rel_err(r.value, math.sqrt(math.pi)) <= 1e-12
        r = integrate_halfline(lambda x: 1 / ((1 + x) * math.sqrt(x)))
        assert rel_err(r.value, math.pi) <= 1e-10

    @pytest.mark.parametrize("s", [0.3, 0.5, 0.9, 1.5, 2.5])
    def test_halfline_gamma(self, s):
        r = integrate_halfline(lambda x: x ** (s - 1) * math.exp(-x))
        assert rel_err(r.value, gamma(s)) <= 1e-9

    def test_halfline_stall_reports_partial(self):
        cfg = QuadratureConfig(abs_tol=0.0, rel_tol=1e-16, max_refinements=1)
        with pytest.raises(NoConvergence) as info:
            integrate_halfline(lambda x: math.cos(x) * math.exp(-0.01 * x), cfg)
        assert info.value.partial is not None

    def test_config_validation(self):
        with pytest.raises(ValueError):
            QuadratureConfig(abs_tol=0.0, rel_tol=0.0)
        with pytest.raises(ValueError):
            SeriesConfig(max_terms=1, consecutive_small=2)


class TestSeries:
    def test_zero(self):
        assert sum_series(lambda n: 0.0).value == 0

    def test_geometric(self):
        cfg = SeriesConfig()
        r = sum_series(lambda n: 0.5**n, cfg)
        assert rel_err(r.value, 2.0) <= cfg.rel_tol

    def test_exponential(self):
        r = sum_series(lambda n: (-1) ** n / math.factorial(n))
        assert abs(r.value - math.exp(-1)) <= 1e-14

    def test_divergent_flags_non_convergence(self):
        r = sum_series(lambda n: 1.0, SeriesConfig(max_terms=50))
        assert not r.converged and r.error_estimate == math.inf

    def test_non_finite_term(self):
        with pytest.raises(NonFiniteTerm):
            sum_series(lambda n: math.inf if n == 3 else 1.0 / (n + 1) ** 2)
