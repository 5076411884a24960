"""Registry of the classical identities and a deterministic checker for them.

Each identity pairs two evaluators computed by independent routes; only the
numerics core (Gamma, quadrature, series summation) may be shared. Samples are
drawn from a 64-bit LCG so reports are reproducible byte for byte.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

from .errors import UnknownIdentity
from .mellin import invert_gamma_kernel, master_theorem_lhs, mellin_forward, residue_series
from .numerics import gamma
from .special import (
    alt_hurwitz_eta,
    euler_L,
    euler_numbers,
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

__all__ = [
    "Lcg64",
    "IntRange",
    "Interval",
    "Choice",
    "IdentitySpec",
    "CheckResult",
    "Report",
    "list_identities",
    "get_identity",
    "resolve_identities",
    "check",
    "run_identity",
    "run_all",
    "CLOSED_FORM_RTOL",
    "QUADRATURE_RTOL",
]

CLOSED_FORM_RTOL = 1e-8
QUADRATURE_RTOL = 1e-6
DEFAULT_ATOL = 1e-12

_MASK64 = (1 << 64) - 1


class Lcg64:
    """state' = state * 6364136223846793005 + 1442695040888963407 (mod 2^64)."""

    MULTIPLIER = 6364136223846793005
    INCREMENT = 1442695040888963407

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state * self.MULTIPLIER + self.INCREMENT) & _MASK64
        return self.state

    def uniform(self) -> float:
        """Uniform on [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class IntRange:
    lo: int
    hi: int

    def sample(self, rng: Lcg64) -> int:
        return min(self.hi, self.lo + int(rng.uniform() * (self.hi - self.lo + 1)))


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    open_lo: bool = False

    def sample(self, rng: Lcg64) -> float:
        u = rng.uniform()
        if self.open_lo:
            return self.hi - u * (self.hi - self.lo)
        return self.lo + u * (self.hi - self.lo)


@dataclass(frozen=True)
class Choice:
    values: tuple

    def sample(self, rng: Lcg64):
        return self.values[min(len(self.values) - 1, int(rng.uniform() * len(self.values)))]


Domain = Union[IntRange, Interval, Choice]


@dataclass(frozen=True)
class IdentitySpec:
    id: str
    description: str
    domain: tuple[tuple[str, Domain], ...]
    lhs: Callable[..., complex]
    rhs: Callable[..., complex]
    tol_abs: float
    tol_rel: float

    def sample(self, rng: Lcg64) -> dict:
        return {name: dom.sample(rng) for name, dom in self.domain}


@dataclass(frozen=True)
class CheckResult:
    id: str
    params: dict
    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    passed: bool
    note: str = ""

    def sort_key(self):
        return (self.id, tuple(sorted(self.params.items())))

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "params": dict(self.params),
            "lhs": _complex_json(self.lhs),
            "rhs": _complex_json(self.rhs),
            "abs_err": _float_json(self.abs_err),
            "rel_err": _float_json(self.rel_err),
            "pass": self.passed,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "CheckResult":
        return cls(
            id=d["id"],
            params=dict(d["params"]),
            lhs=_complex_from(d["lhs"]),
            rhs=_complex_from(d["rhs"]),
            abs_err=_float_from(d["abs_err"]),
            rel_err=_float_from(d["rel_err"]),
            passed=bool(d["pass"]),
            note=d.get("note", ""),
        )


@dataclass
class Report:
    seed: int
    results: list[CheckResult] = field(default_factory=list)
    wall_time: float = field(default=0.0, compare=False)

    @property
    def n_pass(self) -> int:
        return sum(r.passed for r in self.results)

    @property
    def n_fail(self) -> int:
        return len(self.results) - self.n_pass

    def to_dict(self, timing: bool = False) -> dict:
        """JSON-ready dict. ``wall_time_s`` is null unless ``timing`` is set, so
        identical runs serialize identically."""
        return {
            "seed": self.seed,
            "n_pass": self.n_pass,
            "n_fail": self.n_fail,
            "wall_time_s": self.wall_time if timing else None,
            "results": [r.to_dict() for r in self.results],
        }

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2, allow_nan=False)

    @classmethod
    def from_dict(cls, d: Mapping) -> "Report":
        return cls(
            seed=d["seed"],
            results=[CheckResult.from_dict(r) for r in d["results"]],
            wall_time=d.get("wall_time_s") or 0.0,
        )


def _float_json(x: float):
    return x if math.isfinite(x) else None


def _float_from(x) -> float:
    return math.inf if x is None else float(x)


def _complex_json(z: complex):
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return None
    return {"re": z.real, "im": z.imag}


def _complex_from(d) -> complex:
    if d is None:
        return complex(math.nan, math.nan)
    return complex(d["re"], d["im"])


# ---------------------------------------------------------------------------
# Kernels for the transform checks, written to stay accurate at both ends of (0, inf)


def _bernoulli_kernel(t: float, z: float) -> float:
    """e^(t(1-z)) / (e^t - 1) - 1/t."""
    if t < 0.5:
        # numerator t e^(t(1-z)) - expm1(t) = sum_{k>=2} t^k ((1-z)^(k-1)/(k-1)! - 1/k!)
        acc = 0.0
        p = 1.0 - z  # (1-z)^(k-1)/(k-1)! at k = 2
        q = 0.5  # 1/k!
        tk = 1.0  # t^(k-2)
        for k in range(2, 60):
            term = tk * (p - q)
            acc += term
            if abs(term) < 1e-18 * abs(acc) and k > 4:
                break
            p *= (1.0 - z) / k
            q /= k + 1
            tk *= t
        return acc * (t / math.expm1(t)) if t > 0 else acc
    return math.exp(-t * z) / -math.expm1(-t) - 1.0 / t


def _euler_kernel(t: float, z: float) -> float:
    """e^(t(1-z)) / (e^t + 1)."""
    return math.exp(-t * z) / (1.0 + math.exp(-t))


def _sech(x: float) -> float:
    e = math.exp(-x)
    return 2.0 * e / (1.0 + e * e)


def _touchard_kernel(x: float, z: float) -> float:
    """e^(z(e^(-x) - 1)) - e^(-z)."""
    return math.exp(-z) * math.expm1(z * math.exp(-x))


def _hermite_kernel(x: float, z: float) -> float:
    """e^(-2xz - x^2)."""
    return math.exp(-x * (2.0 * z + x))


def _bernoulli_g(x: float, z: float) -> float:
    return _bernoulli_kernel(x, z)


# Master-theorem test functions f(s) with the closed forms of their series
# sum_n f(n) (-x)^n / n!, used past the radius where pointwise summation is reliable.
MASTER_FUNCTIONS: dict[str, tuple[Callable[[complex], complex], Callable[[float], float]]] = {
    "1": (lambda q: 1.0 + 0j, lambda x: math.exp(-x)),
    "gamma(s+1)": (lambda q: gamma(q + 1.0), lambda x: 1.0 / (1.0 + x)),
    "1/(s+1)": (lambda q: 1.0 / (q + 1.0), lambda x: -math.expm1(-x) / x),
}


def _line(t: float) -> complex:
    return complex(0.5, t)


def _i1_lhs(f: str, s: float) -> complex:
    fn, profile = MASTER_FUNCTIONS[f]
    return master_theorem_lhs(fn, s, profile=profile).value


def _i1_rhs(f: str, s: float) -> complex:
    return MASTER_FUNCTIONS[f][0](complex(-s)) * gamma(s)


def _forward(kernel, z, t):
    return mellin_forward(lambda x: kernel(x, z), _line(t)).value


def _registry() -> tuple[IdentitySpec, ...]:
    C, Q, A = CLOSED_FORM_RTOL, QUADRATURE_RTOL, DEFAULT_ATOL
    z_pos = Interval(0.1, 5.0)
    t_line = Interval(-5.0, 5.0)
    x_small = Interval(0.25, 1.0)
    specs = [
        IdentitySpec(
            "I1",
            "Ramanujan master theorem: Mellin transform of sum f(n)(-x)^n/n! equals f(-s) Gamma(s)",
            (("f", Choice(tuple(MASTER_FUNCTIONS))), ("s", Interval(0.25, 0.75))),
            _i1_lhs,
            _i1_rhs,
            A,
            Q,
        ),
        IdentitySpec(
            "I2a",
            "zeta(-n, z) by Euler-Maclaurin equals -B_{n+1}(z)/(n+1)",
            (("n", IntRange(0, 20)), ("z", z_pos)),
            lambda n, z: hurwitz_zeta(-n, z),
            lambda n, z: hurwitz_zeta_neg_int(n, z),
            A,
            C,
        ),
        IdentitySpec(
            "I2b",
            "int t^(s-1) (e^(t(1-z))/(e^t-1) - 1/t) dt equals zeta(s, z) Gamma(s) on Re s = 1/2",
            (("t", t_line), ("z", z_pos)),
            lambda t, z: _forward(_bernoulli_kernel, z, t),
            lambda t, z: hurwitz_zeta(_line(t), z) * gamma(_line(t)),
            A,
            Q,
        ),
        IdentitySpec(
            "I2c",
            "residue series sum (-1)^n/n! zeta(-n, z) x^n equals e^(x(1-z))/(e^x-1) - 1/x",
            (("x", Interval(0.1, 2.0)), ("z", z_pos)),
            lambda x, z: residue_series(lambda s: hurwitz_zeta(s, z), x).value,
            lambda x, z: _bernoulli_g(x, z),
            A,
            Q,
        ),
        IdentitySpec(
            "I3a",
            "eta(-n, z) equals E_n(z)/2",
            (("n", IntRange(0, 20)), ("z", z_pos)),
            lambda n, z: alt_hurwitz_eta(-n, z),
            lambda n, z: 0.5 * euler_poly(n, z),
            A,
            C,
        ),
        IdentitySpec(
            "I3b",
            "int t^(s-1) e^(t(1-z))/(e^t+1) dt equals eta(s, z) Gamma(s) on Re s = 1/2",
            (("t", t_line), ("z", z_pos)),
            lambda t, z: _forward(_euler_kernel, z, t),
            lambda t, z: alt_hurwitz_eta(_line(t), z) * gamma(_line(t)),
            A,
            Q,
        ),
        IdentitySpec(
            "I4a",
            "L(-2n) equals E_{2n}/2",
            (("n", IntRange(0, 8)),),
            lambda n: euler_L(-2 * n),
            lambda n: 0.5 * euler_numbers(2 * n)[2 * n],
            A,
            C,
        ),
        IdentitySpec(
            "I4b",
            "int x^(s-1)/cosh x dx equals 2 Gamma(s) L(s) on Re s = 1/2",
            (("t", t_line),),
            lambda t: mellin_forward(_sech, _line(t)).value,
            lambda t: 2.0 * gamma(_line(t)) * euler_L(_line(t)),
            A,
            Q,
        ),
        IdentitySpec(
            "I5a",
            "Dobinski series e^(-z) sum k^n z^k/k! equals phi_n(z)",
            (("n", IntRange(0, 12)), ("z", Interval(0.0, 4.0, open_lo=True))),
            lambda n, z: exp_poly_dobinski(n, z),
            lambda n, z: exp_poly(n, z),
            A,
            C,
        ),
        IdentitySpec(
            "I5b",
            "int x^(s-1) (e^(z(e^(-x)-1)) - e^(-z)) dx equals Gamma(s) f(s, z) on Re s = 1/2",
            (("t", t_line), ("z", Interval(0.0, 4.0, open_lo=True))),
            lambda t, z: _forward(_touchard_kernel, z, t),
            lambda t, z: gamma(_line(t)) * exp_poly_mellin_factor(_line(t), z),
            A,
            Q,
        ),
        IdentitySpec(
            "I6a",
            "H_n(z) equals 2^(n/2) e^(z^2/2) D_n(sqrt(2) z)",
            (("n", IntRange(0, 15)), ("z", Interval(-3.0, 3.0))),
            lambda n, z: hermite(n, z),
            lambda n, z: 2.0 ** (0.5 * n) * math.exp(0.5 * z * z) * parabolic_cylinder_int(n, math.sqrt(2.0) * z),
            A,
            C,
        ),
        IdentitySpec(
            "I6b",
            "int x^(s-1) e^(-2xz-x^2) dx equals e^(z^2/2) 2^(-s/2) D_{-s}(sqrt(2) z) Gamma(s) on Re s = 1/2",
            (("t", t_line), ("z", Interval(-3.0, 3.0))),
            lambda t, z: _forward(_hermite_kernel, z, t),
            lambda t, z: (
                math.exp(0.5 * z * z) * 2.0 ** (-0.5 * _line(t))
                * parabolic_cylinder_neg(_line(t), math.sqrt(2.0) * z) * gamma(_line(t))
            ),
            A,
            Q,
        ),
        IdentitySpec(
            "P1",
            "inverse Mellin transform of Gamma(s) on Re s = 1/2 equals e^(-x)",
            (("x", Interval(0.25, 2.0)),),
            lambda x: invert_gamma_kernel(lambda s: 1.0, x).value,
            lambda x: math.exp(-x),
            A,
            Q,
        ),
        IdentitySpec(
            "P2",
            "residue series of zeta(s, z) Gamma(s) equals its inverse Mellin transform",
            (("x", x_small), ("z", z_pos)),
            lambda x, z: residue_series(lambda s: hurwitz_zeta_neg_int(_neg_index(s), z), x).value,
            lambda x, z: invert_gamma_kernel(lambda s: hurwitz_zeta(s, z), x).value,
            A,
            Q,
        ),
        IdentitySpec(
            "P3",
            "residue series of eta(s, z) Gamma(s) equals its inverse Mellin transform",
            (("x", x_small), ("z", z_pos)),
            lambda x, z: residue_series(lambda s: 0.5 * euler_poly(_neg_index(s), z), x).value,
            lambda x, z: invert_gamma_kernel(lambda s: alt_hurwitz_eta(s, z), x).value,
            A,
            Q,
        ),
        IdentitySpec(
            "P4",
            "residue series of L(s) Gamma(s) equals its inverse Mellin transform",
            (("x", x_small),),
            lambda x: residue_series(lambda s: 0.5 * _euler_number(_neg_index(s)), x).value,
            lambda x: invert_gamma_kernel(euler_L, x).value,
            A,
            Q,
        ),
        IdentitySpec(
            "P5",
            "residue series of Gamma(s) f(s, z) equals its inverse Mellin transform",
            (("x", x_small), ("z", Interval(0.0, 4.0, open_lo=True))),
            lambda x, z: residue_series(lambda s: _touchard_at(_neg_index(s), z), x).value,
            lambda x, z: invert_gamma_kernel(lambda s: exp_poly_mellin_factor(s, z), x).value,
            A,
            Q,
        ),
    ]
    return tuple(specs)


def _neg_index(s: complex) -> int:
    return int(round(-s.real))


def _euler_number(n: int) -> float:
    return euler_numbers(n)[n]


def _touchard_at(n: int, z: float) -> complex:
    # f(-n, z): phi_n(z) from Stirling numbers, except the k = 0 term is absent at n = 0
    return exp_poly(n, z) - (math.exp(-z) if n == 0 else 0.0)


_REGISTRY = _registry()
_BY_ID = {spec.id: spec for spec in _REGISTRY}


def list_identities() -> list[IdentitySpec]:
    return list(_REGISTRY)


def get_identity(identity: str) -> IdentitySpec:
    try:
        return _BY_ID[identity]
    except KeyError:
        raise UnknownIdentity(identity) from None


def resolve_identities(identity: str) -> list[IdentitySpec]:
    """Specs for an exact id, or for a group id such as "I4" (all of I4a, I4b, ...)."""
    if identity in _BY_ID:
        return [_BY_ID[identity]]
    group = [s for s in _REGISTRY if s.id[:-1] == identity and s.id[-1].isalpha()]
    if not group:
        raise UnknownIdentity(identity)
    return group


def check(spec: IdentitySpec, params: Mapping, tol_override: float | None = None, *,
          tol_abs: float | None = None, tol_rel: float | None = None) -> CheckResult:
    """Evaluate one parameter tuple. Evaluator exceptions become failing results.

    ``tol_override`` replaces both tolerances; ``tol_abs``/``tol_rel`` replace one each
    and take precedence over it.
    """
    tol_abs = _pick(tol_abs, tol_override, spec.tol_abs)
    tol_rel = _pick(tol_rel, tol_override, spec.tol_rel)
    params = dict(params)
    try:
        lhs = complex(spec.lhs(**params))
        rhs = complex(spec.rhs(**params))
    except Exception as exc:  # noqa: BLE001 - recorded, never raised
        nan = complex(math.nan, math.nan)
        return CheckResult(spec.id, params, nan, nan, math.inf, math.inf, False, f"{type(exc).__name__}: {exc}")
    abs_err = abs(lhs - rhs)
    rel_err = abs_err / max(abs(lhs), abs(rhs), 1e-300)
    passed = math.isfinite(abs_err) and (abs_err <= tol_abs or rel_err <= tol_rel)
    return CheckResult(spec.id, params, lhs, rhs, abs_err, rel_err, passed)


def _pick(*values):
    return next(v for v in values if v is not None)


def _run(specs: Sequence[IdentitySpec], n_samples: int, seed: int, tol_override, tols) -> Report:
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    start = time.perf_counter()
    results = []
    for spec in specs:
        rng = Lcg64(seed)
        for _ in range(n_samples):
            results.append(check(spec, spec.sample(rng), tol_override, **tols))
    results.sort(key=CheckResult.sort_key)
    return Report(seed=seed, results=results, wall_time=time.perf_counter() - start)


def run_identity(identity: str, n_samples: int, seed: int, tol_override: float | None = None, *,
                 tol_abs: float | None = None, tol_rel: float | None = None) -> Report:
    """Check ``n_samples`` seeded parameter draws of one identity (or identity group)."""
    tols = {"tol_abs": tol_abs, "tol_rel": tol_rel}
    return _run(resolve_identities(identity), n_samples, seed, tol_override, tols)


def run_all(n_samples: int, seed: int, tol_override: float | None = None,
            registry: Sequence[IdentitySpec] | None = None, *,
            tol_abs: float | None = None, tol_rel: float | None = None) -> Report:
    """Check every registered identity (or the given ``registry``)."""
    tols = {"tol_abs": tol_abs, "tol_rel": tol_rel}
    return _run(_REGISTRY if registry is None else registry, n_samples, seed, tol_override, tols)
