"""Block weight sequences {t_k : 2^n <= k <= 2^(n+1)-1} and their
validation against the hypotheses of the error bounds: weights sum
to one (condition 1), and either non-decreasing with a last weight of
size O(1/(2^(n+1)-1)) (case a) or non-increasing (case b)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

NONDECREASING = "nondecreasing"
NONINCREASING = "nonincreasing"
BOTH = "both"
NONE = "none"

DEFAULT_CASE_A_CAP = 4.0

_SUM_TOL = 1e-12
_MONO_TOL = 1e-12

FAMILIES = ("uniform", "linear_up", "linear_down", "cesaro", "custom")


@dataclass(frozen=True)
class WeightScheme:
    """Weights over the dyadic block [2^n, 2^(n+1)-1].

    weights[i] is the weight of index k = 2^n + i.  When every weight is
    an exact rational, `exact` carries the Fractions and enables the
    exact kernel path downstream.
    """

    block_exponent: int
    weights: np.ndarray
    exact: Optional[tuple] = None
    label: str = ""

    def __post_init__(self):
        n = self.block_exponent
        if n < 1:
            raise ValueError(f"block exponent must be >= 1, got {n}")
        arr = np.asarray(self.weights, dtype=np.float64)
        if arr.shape != (1 << n,):
            raise ValueError(
                f"expected {1 << n} weights for block exponent {n}, "
                f"got shape {arr.shape}"
            )
        if np.any(arr < 0):
            raise ValueError("weights must be non-negative")
        object.__setattr__(self, "weights", arr)
        if self.exact is not None:
            ex = tuple(Fraction(t) for t in self.exact)
            if len(ex) != arr.size:
                raise ValueError("exact weights length mismatch")
            for q, v in zip(ex, arr):
                if q < 0:
                    raise ValueError("weights must be non-negative")
                if abs(float(q) - v) > 1e-14 * max(1.0, abs(v)):
                    raise ValueError("exact and float weights disagree")
            object.__setattr__(self, "exact", ex)

    @property
    def block_start(self) -> int:
        return 1 << self.block_exponent

    @property
    def block_end(self) -> int:
        return (1 << (self.block_exponent + 1)) - 1

    @property
    def block_size(self) -> int:
        return 1 << self.block_exponent

    def _offset(self, k: int) -> int:
        if not self.block_start <= k <= self.block_end:
            raise ValueError(
                f"index {k} outside block [{self.block_start}, {self.block_end}]"
            )
        return k - self.block_start

    def weight(self, k: int) -> float:
        return float(self.weights[self._offset(k)])

    def exact_weight(self, k: int) -> Fraction:
        if self.exact is None:
            raise ValueError("scheme has no exact rational weights")
        return self.exact[self._offset(k)]


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking a scheme against the error-bound hypotheses."""

    total: float
    sum_ok: bool
    monotonicity: str
    c2_constant: float
    case_a_ok: bool
    case_b_ok: bool


def _normalize_exact(raw: Sequence[Fraction], n: int, label: str) -> WeightScheme:
    total = sum(raw)
    if total == 0:
        raise ValueError("weights sum to zero; cannot normalize")
    exact = tuple(Fraction(t) / total for t in raw)
    return WeightScheme(n, [float(t) for t in exact], exact=exact, label=label)


def _binomial_ratio_weights(alpha: Fraction, count: int) -> list:
    # A^(alpha-1)_m = binom(m + alpha - 1, m), assigned to the block
    # index with m counting down from count-1 to 0.
    coeffs = [Fraction(1)]
    beta = alpha - 1
    for m in range(1, count):
        coeffs.append(coeffs[-1] * (beta + m) / m)
    return list(reversed(coeffs))


def build_scheme(
    family: str,
    n: int,
    alpha=None,
    path: Optional[str] = None,
    normalize: bool = True,
) -> WeightScheme:
    """Construct a weight scheme for block exponent n.

    Families: uniform, linear_up, linear_down, cesaro (requires alpha >
    -1; alpha = 1 reproduces uniform, alpha = 2 gives the decreasing
    tail weights), custom (requires path to a `k,t` CSV file).
    """
    if n < 1:
        raise ValueError(f"block exponent must be >= 1, got {n}")
    count = 1 << n
    if family == "uniform":
        return _normalize_exact([Fraction(1)] * count, n, "uniform")
    if family == "linear_up":
        return _normalize_exact([Fraction(i + 1) for i in range(count)], n, "linear_up")
    if family == "linear_down":
        return _normalize_exact(
            [Fraction(count - i) for i in range(count)], n, "linear_down"
        )
    if family == "cesaro":
        if alpha is None:
            raise ValueError("cesaro family requires alpha")
        alpha_q = Fraction(alpha).limit_denominator(10**9)
        if alpha_q <= -1:
            raise ValueError(f"cesaro alpha must exceed -1, got {alpha}")
        raw = _binomial_ratio_weights(alpha_q, count)
        if any(t < 0 for t in raw):
            raise ValueError(f"cesaro alpha {alpha} produces negative weights")
        return _normalize_exact(raw, n, f"cesaro:{alpha}")
    if family == "custom":
        if path is None:
            raise ValueError("custom family requires a file path")
        return load_weight_file(path, n=n, normalize=normalize)
    raise ValueError(f"unknown weight family {family!r}; choose from {FAMILIES}")


def _parse_weight_token(token: str) -> Fraction:
    token = token.strip()
    if "/" in token:
        num, den = token.split("/")
        return Fraction(int(num), int(den))
    return Fraction(token)


def load_weight_file(path: str, n: Optional[int] = None, normalize: bool = False) -> WeightScheme:
    """Read a `k,t` CSV; t tokens are decimals or p/q rationals."""
    rows = {}
    with open(path) as fh:
        header = fh.readline().strip()
        if header.replace(" ", "") != "k,t":
            raise ValueError(f"weight file must start with 'k,t' header, got {header!r}")
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            k_tok, t_tok = line.split(",")
            k = int(k_tok)
            if k in rows:
                raise ValueError(f"duplicate weight index {k}")
            rows[k] = _parse_weight_token(t_tok)
    if not rows:
        raise ValueError("weight file contains no rows")
    start = min(rows)
    inferred = start.bit_length() - 1
    if start != 1 << inferred or n is not None and inferred != n:
        raise ValueError(
            f"weight indices must cover a dyadic block; file starts at {start}"
            + (f", expected block exponent {n}" if n is not None else "")
        )
    count = 1 << inferred
    missing = [start + i for i in range(count) if start + i not in rows]
    if missing or len(rows) != count:
        raise ValueError(f"weight file must cover [{start}, {start + count - 1}]")
    raw = [rows[start + i] for i in range(count)]
    if any(t < 0 for t in raw):
        raise ValueError("weights must be non-negative")
    if normalize:
        return _normalize_exact(raw, inferred, f"custom:{path}")
    return WeightScheme(
        inferred, [float(t) for t in raw], exact=tuple(raw), label=f"custom:{path}"
    )


def _monotonicity(w: WeightScheme) -> str:
    if w.exact is not None:
        diffs = [b - a for a, b in zip(w.exact, w.exact[1:])]
        nondec = all(d >= 0 for d in diffs)
        noninc = all(d <= 0 for d in diffs)
    else:
        diffs = np.diff(w.weights)
        tol = _MONO_TOL * max(1.0, float(np.max(w.weights)))
        nondec = bool(np.all(diffs >= -tol))
        noninc = bool(np.all(diffs <= tol))
    if nondec and noninc:
        return BOTH
    if nondec:
        return NONDECREASING
    if noninc:
        return NONINCREASING
    return NONE


def validate(w: WeightScheme, case_a_cap: float = DEFAULT_CASE_A_CAP) -> ValidationReport:
    """Check condition (1), detect monotonicity, and report the exact
    constant t_last * (2^(n+1) - 1) behind condition (2).

    Case a needs a non-decreasing sequence and c2 <= case_a_cap; case b
    needs non-increasing only.  Ties qualify for both classes.
    """
    if w.exact is not None:
        total_exact = sum(w.exact, Fraction(0))
        total = float(total_exact)
        sum_ok = total_exact == 1
        c2 = float(w.exact[-1] * w.block_end)
    else:
        total = float(np.sum(w.weights))
        sum_ok = abs(total - 1.0) <= _SUM_TOL
        c2 = float(w.weights[-1]) * w.block_end
    mono = _monotonicity(w)
    case_a = mono in (NONDECREASING, BOTH) and c2 <= case_a_cap
    case_b = mono in (NONINCREASING, BOTH)
    return ValidationReport(
        total=total,
        sum_ok=sum_ok,
        monotonicity=mono,
        c2_constant=c2,
        case_a_ok=case_a,
        case_b_ok=case_b,
    )


def delta(w: WeightScheme, k: int):
    """Forward difference t_k - t_(k+1), with t = 0 past the block end."""
    off = w._offset(k)
    if w.exact is not None:
        nxt = w.exact[off + 1] if off + 1 < w.block_size else Fraction(0)
        return w.exact[off] - nxt
    nxt = float(w.weights[off + 1]) if off + 1 < w.block_size else 0.0
    return float(w.weights[off]) - nxt
