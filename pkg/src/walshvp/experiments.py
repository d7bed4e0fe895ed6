"""Numerical verification suite: kernel lemma checks, approximation
error vs modulus-of-continuity tables, and Lipschitz rate regression.

All randomness flows through a splitmix-style 64-bit generator so every
table is reproducible from its recorded seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .dyadic import (
    INF,
    SampledFunction,
    _pairwise_total,
    abs_values,
    check_resolution,
    interval_indicator,
    lp_norm,
    modulus_of_continuity,
)
from .walsh_system import Spectrum, fwht_forward, fwht_inverse, walsh_signs
from .kernels import (
    _dirichlet_int,
    _paley_int,
    decompose_vp_kernel,
    dirichlet_via_recursion,
    fejer,
    kernel_norm_sweep,
    vp_kernel,
)
from .weights import WeightScheme, build_scheme, validate
from .means import PATH_CONVOLUTION, dyadic_convolve_naive, vp_mean

# Explicit constant for non-increasing block weights summing to one.
CASE_B_BOUND = Fraction(47, 30)

# Sharp uniform bound on the Fejer kernel L1 norms.
FEJER_SHARP_BOUND = Fraction(17, 15)

MODULUS_FLOOR = 1e-13
ERROR_FLOOR = 1e-10
DEFAULT_SLACK = 1e-9

FLAG_INCONSISTENT = "inconsistent"

STANDARD_SUITE_SPECS = (
    "abs_power:0.5",
    "abs_power:1.0",
    "indicator:2",
    "walsh_poly:1,0.5,0,-0.25,0,0,0.125,0,0,0,0,0.0625",
    "step_mix",
)

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Tiny deterministic 64-bit generator (splitmix64 increments)."""

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randint(self, bound: int) -> int:
        return self.next_u64() % bound

    def uniform(self) -> float:
        """Uniform in [-1, 1)."""
        return (self.next_u64() >> 11) * 2.0**-52 - 1.0

    def uniforms(self, count: int) -> np.ndarray:
        return np.array([self.uniform() for _ in range(count)])


def random_bounded(seed: int, resolution: int) -> SampledFunction:
    rng = SplitMix64(seed)
    return SampledFunction(resolution, rng.uniforms(1 << resolution))


def step_mix(seed: int, resolution: int, rank: int = 4) -> SampledFunction:
    """Random function constant on rank-`rank` cells."""
    rank = min(rank, resolution)
    rng = SplitMix64(seed)
    cells = rng.uniforms(1 << rank)
    idx = np.arange(1 << resolution, dtype=np.int64)
    return SampledFunction(resolution, cells[idx & ((1 << rank) - 1)])


def abs_power(alpha: float, resolution: int) -> SampledFunction:
    """f(x) = |x|^alpha with the dyadic absolute value."""
    if alpha <= 0:
        raise ValueError(f"abs_power needs alpha > 0, got {alpha}")
    return SampledFunction(resolution, abs_values(resolution) ** alpha)


def walsh_poly(coefficients: Sequence[float], resolution: int) -> SampledFunction:
    coeffs = np.zeros(1 << resolution)
    vals = np.asarray(coefficients, dtype=np.float64)
    if vals.size > coeffs.size:
        raise ValueError("polynomial order exceeds resolution")
    coeffs[: vals.size] = vals
    return fwht_inverse(Spectrum(resolution, coeffs))


def make_function(spec: str, resolution: int, seed: int = 0) -> SampledFunction:
    """Build a library function from a spec string.

    Forms: abs_power:<alpha>, indicator:<rank>, walsh_poly:<c0,c1,...>,
    random, step_mix.
    """
    check_resolution(resolution)
    name, _, arg = spec.partition(":")
    if name == "abs_power":
        return abs_power(float(arg), resolution)
    if name == "indicator":
        return interval_indicator(int(arg), resolution)
    if name == "walsh_poly":
        return walsh_poly([float(c) for c in arg.split(",")], resolution)
    if name == "random":
        return random_bounded(seed, resolution)
    if name == "step_mix":
        return step_mix(seed, resolution)
    raise ValueError(f"unknown function spec {spec!r}")


def standard_suite(resolution: int, seed: int = 0) -> List[Tuple[str, SampledFunction]]:
    return [(spec, make_function(spec, resolution, seed)) for spec in STANDARD_SUITE_SPECS]


def random_rational_scheme(n: int, rng: SplitMix64, sort: Optional[str] = None) -> WeightScheme:
    """Random non-negative rational weights on the block, summing to one."""
    raw = [rng.randint(100) for _ in range(1 << n)]
    if not any(raw):
        raw[0] = 1
    if sort == "nonincreasing":
        raw.sort(reverse=True)
    elif sort == "nondecreasing":
        raw.sort()
    total = sum(raw)
    exact = tuple(Fraction(a, total) for a in raw)
    return WeightScheme(n, [float(t) for t in exact], exact=exact, label="random")


@dataclass(frozen=True)
class ApproxRecord:
    """One table row: approximation error of the block mean against the
    modulus of continuity at the matching dyadic scale."""

    block_exponent: int
    p: float
    error: float
    modulus: float
    ratio: float
    bound: float  # nan when no explicit constant is asserted
    bound_ok: bool
    flag: str = ""


def approximation_error(
    f: SampledFunction,
    scheme: WeightScheme,
    p,
    bound_constant: Union[str, float, None] = "auto",
    slack: float = DEFAULT_SLACK,
) -> ApproxRecord:
    """Compute ||mean(f) - f||_p, omega_p(f, 2^-n), and their ratio.

    With bound_constant="auto" the 47/30 constant is asserted exactly
    when the scheme qualifies for the non-increasing case; a float
    asserts that constant; None asserts nothing.
    """
    n = scheme.block_exponent
    if bound_constant == "auto":
        bound_constant = float(CASE_B_BOUND) if validate(scheme).case_b_ok else None
    mean = vp_mean(f, scheme, PATH_CONVOLUTION).function
    error = lp_norm(mean - f, p)
    modulus = modulus_of_continuity(f, n, p)
    flag = ""
    if modulus < MODULUS_FLOOR:
        # Zero modulus forces a block polynomial, where the mean must
        # reproduce f; anything else is an inconsistency, not a ratio.
        if error < ERROR_FLOOR:
            ratio = 0.0
            bound_ok = True
        else:
            ratio = math.inf
            bound_ok = False
            flag = FLAG_INCONSISTENT
    else:
        ratio = error / modulus
        bound_ok = True if bound_constant is None else error <= bound_constant * modulus + slack
    return ApproxRecord(
        block_exponent=n,
        p=float(p),
        error=error,
        modulus=modulus,
        ratio=ratio,
        bound=math.nan if bound_constant is None else float(bound_constant),
        bound_ok=bound_ok,
        flag=flag,
    )


SchemeFactory = Union[str, Callable[[int], WeightScheme]]


def _scheme_for(factory: SchemeFactory, n: int, alpha=None) -> WeightScheme:
    if callable(factory):
        return factory(n)
    return build_scheme(factory, n, alpha=alpha)


def ratio_sweep(
    f: SampledFunction,
    scheme_factory: SchemeFactory,
    n_values: Iterable[int],
    p_values: Iterable,
    alpha=None,
    bound_constant: Union[str, float, None] = "auto",
    slack: float = DEFAULT_SLACK,
) -> List[ApproxRecord]:
    """One ApproxRecord per (n, p), rebuilding the scheme at each block."""
    records = []
    for n in n_values:
        scheme = _scheme_for(scheme_factory, n, alpha)
        for p in p_values:
            records.append(
                approximation_error(f, scheme, p, bound_constant=bound_constant, slack=slack)
            )
    return records


def sweep_ok(records: Iterable[ApproxRecord]) -> bool:
    return all(r.bound_ok and not r.flag for r in records)


@dataclass(frozen=True)
class RateFit:
    """Least-squares fit of log2(error) against the block exponent."""

    alpha_hat: float
    c_hat: float
    n_used: tuple
    excluded: tuple


def lipschitz_rate(
    f: SampledFunction,
    scheme_factory: SchemeFactory,
    p,
    n_values: Sequence[int],
    alpha=None,
) -> RateFit:
    """Estimate the approximation order: error ~ c * 2^(-n * alpha_hat).

    Zero-error blocks are excluded from the regression and reported; at
    least 3 usable points are required.
    """
    usable_n, logs, excluded = [], [], []
    for n in n_values:
        scheme = _scheme_for(scheme_factory, n, alpha)
        mean = vp_mean(f, scheme, PATH_CONVOLUTION).function
        error = lp_norm(mean - f, p)
        if error > MODULUS_FLOOR:
            usable_n.append(n)
            logs.append(math.log2(error))
        else:
            excluded.append(n)
    if len(usable_n) < 3:
        raise ValueError(
            f"degenerate fit: only {len(usable_n)} usable points "
            f"(zero-error blocks: {excluded})"
        )
    slope, intercept = np.polyfit(usable_n, logs, 1)
    return RateFit(
        alpha_hat=-float(slope),
        c_hat=2.0 ** float(intercept),
        n_used=tuple(usable_n),
        excluded=tuple(excluded),
    )


def verify_translate_difference_bound(
    f: SampledFunction, g: SampledFunction, n: int, p, slack: float = 1e-10
) -> Tuple[float, float, bool]:
    """Check || int r_n(t) g(t) (f(.+t) - f(.)) dmu(t) ||_p against
    (1/2) ||g||_1 omega_p(f, 2^-n) by exact quadrature over all t.

    g must have its spectrum supported below 2^n.
    """
    f._check_same(g)
    if not 0 < n < f.resolution:
        raise ValueError(f"need 0 < n < {f.resolution}, got {n}")
    gc = fwht_forward(g).coeffs
    scale = max(1.0, float(np.max(np.abs(g.values))))
    if np.max(np.abs(gc[1 << n :])) > 1e-12 * scale:
        raise ValueError(f"g has spectral mass at or above 2^{n}")
    idx = np.arange(f.size, dtype=np.int64)
    r_n = 1.0 - 2.0 * ((idx >> n) & 1)
    rg = SampledFunction(f.resolution, r_n * g.values)
    mean_rg = _pairwise_total(rg.values) * 2.0**-f.resolution
    inner = dyadic_convolve_naive(f, rg) - f * mean_rg
    lhs = lp_norm(inner, p)
    rhs = 0.5 * lp_norm(g, 1) * modulus_of_continuity(f, n, p)
    return lhs, rhs, lhs <= rhs + slack


@dataclass(frozen=True)
class LemmaResult:
    name: str
    instances: int
    worst_margin: float
    passed: bool
    detail: str = ""


def _check_dirichlet_closed_form(resolution: int) -> LemmaResult:
    worst = 0
    for m in range(resolution + 1):
        direct = _dirichlet_int(1 << m, resolution)
        worst = max(worst, int(np.max(np.abs(direct - _paley_int(m, resolution)))))
    return LemmaResult("dirichlet-closed-form", resolution + 1, float(worst), worst == 0)


def _check_dirichlet_recursion(resolution: int) -> LemmaResult:
    size = 1 << resolution
    worst = 0
    running = np.zeros(size, dtype=np.int64)
    for n in range(size + 1):
        rec = dirichlet_via_recursion(n, resolution).exact_numer
        worst = max(worst, int(np.max(np.abs(rec - running))))
        if n < size:
            running = running + walsh_signs(n, resolution)
    return LemmaResult("dirichlet-recursion", size + 1, float(worst), worst == 0)


def _check_fejer_bounds(resolution: int) -> Tuple[LemmaResult, LemmaResult]:
    n_max = 1 << (resolution - 1)
    _, k_norms = kernel_norm_sweep(n_max, resolution)
    best_i = max(range(len(k_norms)), key=lambda i: k_norms[i])
    peak = k_norms[best_i]
    detail = f"max={float(peak):.12g}@n={best_i + 1}"
    uniform = LemmaResult(
        "fejer-l1-uniform-bound", n_max, float(2 - peak), peak <= 2, detail
    )
    sharp = LemmaResult(
        "fejer-l1-sharp-bound",
        n_max,
        float(FEJER_SHARP_BOUND - peak),
        peak <= FEJER_SHARP_BOUND + Fraction(1, 10**9),
        detail,
    )
    return uniform, sharp


def _check_translate_difference(resolution: int, seed: int, count: int) -> LemmaResult:
    rng = SplitMix64(seed)
    p_cycle = (1.0, 2.0, INF)
    worst = math.inf
    passed = True
    for i in range(count):
        n = 1 + rng.randint(resolution - 1)
        p = p_cycle[i % 3]
        f = SampledFunction(resolution, rng.uniforms(1 << resolution))
        if i % 2 == 0:
            coeffs = np.zeros(1 << resolution)
            coeffs[: 1 << n] = rng.uniforms(1 << n)
            g = fwht_inverse(Spectrum(resolution, coeffs))
        else:
            k = 1 + rng.randint(1 << n)
            g = fejer(k, resolution)
        lhs, rhs, ok = verify_translate_difference_bound(f, g, n, p)
        worst = min(worst, rhs - lhs)
        passed = passed and ok
    return LemmaResult("translate-difference-bound", count, float(worst), passed)


def _decomposition_deviation(scheme: WeightScheme, resolution: int) -> Fraction:
    kernel = vp_kernel(scheme, resolution, exact=True)
    parts = decompose_vp_kernel(scheme, resolution, exact=True).components
    worst = Fraction(0)
    for j in range(kernel.size):
        total = sum(part.exact_value(j) for part in parts)
        worst = max(worst, abs(total - kernel.exact_value(j)))
    return worst


def _check_decomposition(resolution: int, seed: int, random_schemes: int) -> LemmaResult:
    rng = SplitMix64(seed)
    n_cap = min(6, resolution - 1)
    instances = 0
    worst = Fraction(0)
    for n in range(1, n_cap + 1):
        for family, alpha in (
            ("uniform", None),
            ("linear_up", None),
            ("linear_down", None),
            ("cesaro", 2),
        ):
            worst = max(
                worst,
                _decomposition_deviation(build_scheme(family, n, alpha=alpha), resolution),
            )
            instances += 1
    for _ in range(random_schemes):
        n = 1 + rng.randint(n_cap)
        worst = max(worst, _decomposition_deviation(random_rational_scheme(n, rng), resolution))
        instances += 1
    return LemmaResult("vp-kernel-decomposition", instances, float(worst), worst == 0)


def verify_all_lemmas(
    resolution: int,
    seed: int = 2024,
    translate_count: int = 200,
    random_schemes: int = 25,
) -> List[LemmaResult]:
    """Run every kernel-identity and kernel-bound check at one resolution."""
    check_resolution(resolution)
    if resolution < 4:
        raise ValueError("lemma verification needs resolution >= 4")
    uniform, sharp = _check_fejer_bounds(resolution)
    return [
        _check_dirichlet_closed_form(resolution),
        _check_dirichlet_recursion(resolution),
        uniform,
        sharp,
        _check_translate_difference(resolution, seed, translate_count),
        _check_decomposition(resolution, seed + 1, random_schemes),
    ]


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _fmt_p(p: float) -> str:
    return "inf" if p == INF else format(p, ".12g")


APPROX_HEADER = "n,p,error,modulus,ratio,bound,bound_ok"
LEMMA_HEADER = "lemma,instances,worst_margin,pass"


def approx_csv_rows(records: Iterable[ApproxRecord]) -> List[str]:
    rows = [APPROX_HEADER]
    for r in records:
        rows.append(
            ",".join(
                [
                    str(r.block_exponent),
                    _fmt_p(r.p),
                    _fmt(r.error),
                    _fmt(r.modulus),
                    _fmt(r.ratio),
                    _fmt(r.bound),
                    "true" if r.bound_ok else "false",
                ]
            )
        )
    return rows


def approx_json_rows(records: Iterable[ApproxRecord]) -> List[dict]:
    return [
        {
            "n": r.block_exponent,
            "p": _fmt_p(r.p),
            "error": r.error,
            "modulus": r.modulus,
            "ratio": None if math.isinf(r.ratio) else r.ratio,
            "bound": None if math.isnan(r.bound) else r.bound,
            "bound_ok": r.bound_ok,
            "flag": r.flag,
        }
        for r in records
    ]


def lemma_csv_rows(results: Iterable[LemmaResult]) -> List[str]:
    rows = [LEMMA_HEADER]
    for r in results:
        rows.append(
            ",".join(
                [r.name, str(r.instances), _fmt(r.worst_margin), "true" if r.passed else "false"]
            )
        )
    return rows


def lemma_json_rows(results: Iterable[LemmaResult]) -> List[dict]:
    return [
        {
            "lemma": r.name,
            "instances": r.instances,
            "worst_margin": r.worst_margin,
            "pass": r.passed,
            "detail": r.detail,
        }
        for r in results
    ]
