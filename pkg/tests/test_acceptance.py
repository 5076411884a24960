"""Acceptance criteria, one test each. Every test prints a PASS/FAIL line and
the lines are repeated in the terminal summary."""

import cmath
import math
import random
import subprocess
import sys
import time

import pytest

from mellinkit import harness, special
from mellinkit.dsl import parse_expr, to_source
from mellinkit.errors import ParseError
from mellinkit.harness import Lcg64, get_identity
from mellinkit.mellin import invert_gamma_kernel, master_theorem_check, mellin_forward, residue_series
from mellinkit.numerics import gamma, gamma_residue
from mellinkit.special import (
    alt_hurwitz_eta,
    euler_L,
    euler_poly,
    exp_poly,
    exp_poly_dobinski,
    exp_poly_mellin_factor,
    hermite,
    hurwitz_zeta,
    hurwitz_zeta_neg_int,
    parabolic_cylinder_int,
    parabolic_cylinder_neg,
)

from conftest import rel_err

RESULTS = []


def verdict(number, title, ok, detail, elapsed, budget):
    in_time = elapsed < budget
    line = (f"{'PASS' if ok and in_time else 'FAIL'} criterion {number:2d}: {title} | {detail} | "
            f"{elapsed:.3f}s (budget {budget:g}s)")
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert in_time, line


def worst(pairs):
    return max(rel_err(a, b) for a, b in pairs)


def test_criterion_01_zeta_zero():
    t0 = time.perf_counter()
    err = abs(hurwitz_zeta(0, 1) + 0.5)
    verdict(1, "zeta(0) = -1/2", err <= 1e-10, f"abs err {err:.2e} (tol 1e-10)", time.perf_counter() - t0, 0.1)


def test_criterion_02_zeta_zero_z():
    t0 = time.perf_counter()
    g = Lcg64(2)
    zs = [0.1 + 4.9 * g.uniform() for _ in range(50)]
    err = worst((hurwitz_zeta(0, z), 0.5 - z) for z in zs)
    verdict(2, "zeta(0, z) = 1/2 - z", err <= 1e-9, f"max rel err {err:.2e} over 50 z (tol 1e-9)",
            time.perf_counter() - t0, 1.0)


def _call_set(fn, *args):
    for f in vars(special).values():
        if hasattr(f, "cache_clear"):
            f.cache_clear()
    seen = set()

    def profiler(frame, event, arg):
        name = frame.f_globals.get("__name__", "")
        if event == "call" and name.startswith("mellinkit.") and name != "mellinkit.numerics":
            seen.add((name, frame.f_code.co_name, frame.f_code.co_firstlineno))

    sys.setprofile(profiler)
    try:
        fn(*args)
    finally:
        sys.setprofile(None)
    return seen


def test_criterion_03_i2a():
    t0 = time.perf_counter()
    g = Lcg64(3)
    pairs = []
    for n in range(21):
        for _ in range(20):
            z = 0.1 + 4.9 * g.uniform()
            pairs.append((hurwitz_zeta(-n, z), hurwitz_zeta_neg_int(n, z)))
    err = worst(pairs)
    shared = _call_set(hurwitz_zeta, -7, 1.3) & _call_set(hurwitz_zeta_neg_int, 7, 1.3)
    elapsed = time.perf_counter() - t0
    verdict(3, "I2a zeta(-n, z) = -B_{n+1}(z)/(n+1)", err <= 1e-8 and not shared,
            f"max rel err {err:.2e} over 420 pairs (tol 1e-8); shared code above numerics: {sorted(shared) or 'none'}",
            elapsed, 5.0)


def test_criterion_04_i2b():
    t0 = time.perf_counter()
    spec = get_identity("I2b")
    pairs = [(spec.lhs(t=t, z=z), spec.rhs(t=t, z=z)) for t in (-5, -1, 0, 1, 5) for z in (0.5, 1, 2)]
    err = worst(pairs)
    verdict(4, "I2b forward transform = zeta(s, z) Gamma(s)", err <= 1e-6,
            f"max rel err {err:.2e} over 15 points (tol 1e-6)", time.perf_counter() - t0, 10.0)


def test_criterion_05_i3():
    t0 = time.perf_counter()
    g = Lcg64(5)
    pairs = []
    for n in range(21):
        for _ in range(20):
            z = 0.1 + 4.9 * g.uniform()
            pairs.append((alt_hurwitz_eta(-n, z), 0.5 * euler_poly(n, z)))
    err = worst(pairs)
    verdict(5, "I3 eta(-n, z) = E_n(z)/2", err <= 1e-8, f"max rel err {err:.2e} over 420 pairs (tol 1e-8)",
            time.perf_counter() - t0, 5.0)


def test_criterion_06_i4():
    t0 = time.perf_counter()
    from mellinkit.special import euler_numbers

    e = euler_numbers(16)
    err = worst((euler_L(-2 * n), 0.5 * e[2 * n]) for n in range(9))
    spots = worst([(euler_L(0), 0.5), (euler_L(-2), -0.5), (euler_L(-4), 2.5)])
    verdict(6, "I4 L(-2n) = E_2n/2", err <= 1e-8 and spots <= 1e-8,
            f"max rel err {err:.2e} (tol 1e-8); spot values rel err {spots:.2e}", time.perf_counter() - t0, 1.0)


def test_criterion_07_i5():
    t0 = time.perf_counter()
    err = worst((exp_poly_dobinski(n, z), exp_poly(n, z)) for n in range(13) for z in (0.5, 1, 2, 4))
    bell = [1, 1, 2, 5, 15, 52, 203, 877]
    bell_err = max(max(rel_err(exp_poly(n, 1), b), rel_err(exp_poly_dobinski(n, 1), b)) for n, b in enumerate(bell))
    verdict(7, "I5 Dobinski = exponential polynomial", err <= 1e-8 and bell_err <= 1e-10,
            f"max rel err {err:.2e} (tol 1e-8); Bell numbers rel err {bell_err:.2e} (tol 1e-10)",
            time.perf_counter() - t0, 2.0)


def test_criterion_08_i6():
    t0 = time.perf_counter()
    grid = [-3 + 0.25 * k for k in range(25)]
    pairs = [(hermite(n, z), 2 ** (n / 2) * math.exp(z * z / 2) * parabolic_cylinder_int(n, math.sqrt(2) * z))
             for n in range(16) for z in grid]
    closed = worst(pairs)
    # transform leg exactly as stated: Mellin of e^(2xz - x^2) against D_{-s}(+sqrt(2) z)
    s = 0.5
    legs = []
    for z in (0.0, 0.5, 1.0):
        lhs = mellin_forward(lambda x: math.exp(2 * x * z - x * x), s).value
        rhs = cmath.exp(z * z / 2) * 2 ** (-s / 2) * parabolic_cylinder_neg(s, math.sqrt(2) * z) * gamma(s)
        legs.append((z, rel_err(lhs, rhs)))
    transform = max(e for _, e in legs)
    detail = (f"closed-form max rel err {closed:.2e} (tol 1e-8); transform rel err by z: "
              + ", ".join(f"z={z:g}: {e:.2e}" for z, e in legs) + " (tol 1e-6)")
    verdict(8, "I6 Hermite = parabolic cylinder, plus transform", closed <= 1e-8 and transform <= 1e-6,
            detail, time.perf_counter() - t0, 10.0)


def test_criterion_09_master_theorem():
    t0 = time.perf_counter()
    # f listed by f(-s): 1, Gamma(1-s) and 1/(1-s); the series uses f(n) = 1, n!, 1/(n+1)
    cases = {
        "1": (lambda q: 1.0, lambda x: math.exp(-x)),
        "Gamma(s+1)": (lambda q: gamma(q + 1), lambda x: 1 / (1 + x)),
        "1/(1-s) at -s": (lambda q: 1 / (q + 1), lambda x: -math.expm1(-x) / x),
    }
    res = max(master_theorem_check(f, s, profile=p) for f, p in cases.values() for s in (0.3, 0.5, 0.7))
    verdict(9, "Master Theorem residual", res <= 1e-7, f"max residual {res:.2e} over 9 cases (tol 1e-7)",
            time.perf_counter() - t0, 10.0)


def _neg(s):
    return int(round(-s.real))


def test_criterion_10_residue_vs_inverse():
    t0 = time.perf_counter()
    kernels = {
        "zeta": (lambda z: lambda s: hurwitz_zeta_neg_int(_neg(s), z), lambda z: lambda s: hurwitz_zeta(s, z)),
        "eta": (lambda z: lambda s: 0.5 * euler_poly(_neg(s), z), lambda z: lambda s: alt_hurwitz_eta(s, z)),
        "touchard": (lambda z: lambda s: exp_poly(_neg(s), z) - (math.exp(-z) if _neg(s) == 0 else 0.0),
                     lambda z: lambda s: exp_poly_mellin_factor(s, z)),
    }
    diff = 0.0
    for at_neg, on_line in kernels.values():
        for z in (0.5, 1.0, 2.0):
            for x in (0.25, 0.5, 1.0):
                a = residue_series(at_neg(z), x).value
                b = invert_gamma_kernel(on_line(z), x).value
                diff = max(diff, abs(a - b))
    gam = max(abs(invert_gamma_kernel(lambda s: 1.0, x).value - math.exp(-x)) for x in (0.5, 1.0, 2.0))
    verdict(10, "residue series = inverse Mellin", diff <= 1e-6 and gam <= 1e-7,
            f"max |series - inverse| {diff:.2e} (tol 1e-6); inverse Gamma vs e^-x {gam:.2e} (tol 1e-7)",
            time.perf_counter() - t0, 15.0)


def test_criterion_11_gamma_suite():
    t0 = time.perf_counter()
    rng = random.Random(11)
    rec = refl = 0.0
    count = 0
    while count < 1000:
        s = complex(rng.uniform(-20, 20), rng.uniform(-20, 20))
        if abs(s) > 20 or (abs(s.imag) < 0.1 and abs(s.real - round(s.real)) < 0.1):
            continue
        count += 1
        g1 = gamma(s + 1)
        rec = max(rec, abs(g1 - s * gamma(s)) / abs(g1))
        refl = max(refl, rel_err(gamma(s) * gamma(1 - s), math.pi / cmath.sin(math.pi * s)))
    resid = max(abs((1e-8) * gamma(-n + 1e-8) - gamma_residue(n)) for n in range(11))
    verdict(11, "Gamma recurrence, reflection, residues", rec <= 1e-11 and refl <= 1e-10 and resid <= 1e-6,
            f"recurrence {rec:.2e} (tol 1e-11); reflection {refl:.2e} (tol 1e-10); residues {resid:.2e} (tol 1e-6)",
            time.perf_counter() - t0, 2.0)


def test_criterion_12_determinism():
    t0 = time.perf_counter()
    argv = [sys.executable, "-m", "mellinkit", "verify", "--samples", "25", "--seed", "7", "--format", "json"]
    a = subprocess.run(argv, capture_output=True)
    b = subprocess.run(argv, capture_output=True)
    same = a.stdout == b.stdout and len(a.stdout) > 0
    verdict(12, "verify output byte-identical", same,
            f"{len(a.stdout)} bytes, identical={same}, exit codes {a.returncode}/{b.returncode}",
            time.perf_counter() - t0, 30.0)


def test_criterion_13_dsl():
    from test_dsl import OPS, LEVEL, random_tree
    from mellinkit.dsl import Binary, Neg, Variable

    t0 = time.perf_counter()
    a, b, c = Variable("a"), Variable("b"), Variable("c")
    prec_ok = True
    for op1 in OPS:
        for op2 in OPS:
            right = LEVEL[op2] > LEVEL[op1] or op1 == op2 == "^"
            want = Binary(op1, a, Binary(op2, b, c)) if right else Binary(op2, Binary(op1, a, b), c)
            prec_ok &= parse_expr(f"a{op1}b{op2}c") == want
        lead = Neg(Binary("^", a, b)) if op1 == "^" else Binary(op1, Neg(a), b)
        prec_ok &= parse_expr(f"-a{op1}b") == lead
    positions_ok = True
    for source, pos in (("2 @ 3", 2), ("(1+", 3), ("1/(1+x", 6), ("1 2", 2), ("foo(1)", 0), ("zeta(1)", 0)):
        try:
            parse_expr(source)
            positions_ok = False
        except ParseError as exc:
            positions_ok &= exc.position == pos
    rng = random.Random(500)
    trips = sum(parse_expr(to_source(t)) == t for t in (random_tree(rng, rng.randint(0, 6)) for _ in range(500)))
    verdict(13, "DSL precedence, error positions, round trip", prec_ok and positions_ok and trips == 500,
            f"precedence {prec_ok}, positions {positions_ok}, round trips {trips}/500", time.perf_counter() - t0, 1.0)
