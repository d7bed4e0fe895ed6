"""Finite-resolution model of the dyadic (Walsh) group.

At resolution N the group is {0, ..., 2^N - 1} with XOR as the group
operation; coordinate x_i of a point is bit i of its index (LSB first).
Functions are constant on the rank-N dyadic cells and stored as 2^N
samples.  All integrals use a deterministic pairwise-tree reduction.
"""

from __future__ import annotations

import math
import os

import numpy as np

INF = math.inf

DEFAULT_MAX_RESOLUTION = 24

_HEADER_PREFIX = "N="


def max_resolution() -> int:
    """Resolution cap; override with the WALSHVP_MAX_N environment variable."""
    env = os.environ.get("WALSHVP_MAX_N")
    if env is not None:
        return int(env)
    return DEFAULT_MAX_RESOLUTION


def check_resolution(resolution: int) -> int:
    cap = max_resolution()
    if not isinstance(resolution, (int, np.integer)) or isinstance(resolution, bool):
        raise TypeError(f"resolution must be an integer, got {resolution!r}")
    if not 1 <= resolution <= cap:
        raise ValueError(f"resolution must be in [1, {cap}], got {resolution}")
    return int(resolution)


def _check_point(index: int, resolution: int) -> int:
    if not 0 <= index < (1 << resolution):
        raise ValueError(
            f"point index {index} out of range for resolution {resolution}"
        )
    return int(index)


class SampledFunction:
    """Real-valued function on the group, constant on rank-N cells.

    values[j] is the value on the cell of the point with index j.
    Instances are treated as immutable; operations return new objects.
    """

    __slots__ = ("resolution", "values")

    def __init__(self, resolution: int, values) -> None:
        resolution = check_resolution(resolution)
        arr = np.asarray(values, dtype=np.float64)
        if arr.shape != (1 << resolution,):
            raise ValueError(
                f"expected {1 << resolution} samples for resolution "
                f"{resolution}, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "resolution", resolution)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("SampledFunction is immutable")

    @property
    def size(self) -> int:
        return 1 << self.resolution

    def _check_same(self, other: "SampledFunction") -> None:
        if self.resolution != other.resolution:
            raise ValueError(
                f"resolution mismatch: {self.resolution} vs {other.resolution}"
            )

    def __add__(self, other):
        if isinstance(other, SampledFunction):
            self._check_same(other)
            return SampledFunction(self.resolution, self.values + other.values)
        return SampledFunction(self.resolution, self.values + float(other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, SampledFunction):
            self._check_same(other)
            return SampledFunction(self.resolution, self.values - other.values)
        return SampledFunction(self.resolution, self.values - float(other))

    def __mul__(self, other):
        if isinstance(other, SampledFunction):
            self._check_same(other)
            return SampledFunction(self.resolution, self.values * other.values)
        return SampledFunction(self.resolution, self.values * float(other))

    __rmul__ = __mul__

    def __neg__(self):
        return SampledFunction(self.resolution, -self.values)

    def __repr__(self):
        return f"SampledFunction(N={self.resolution}, size={self.size})"


def constant(value: float, resolution: int) -> SampledFunction:
    return SampledFunction(resolution, np.full(1 << resolution, float(value)))


def group_add(a: int, b: int, resolution: int) -> int:
    """Group operation: coordinate-wise addition mod 2, i.e. XOR of indices."""
    check_resolution(resolution)
    return _check_point(a, resolution) ^ _check_point(b, resolution)


def abs_value(a: int, resolution: int) -> float:
    """|x| = sum_i x_i / 2^(i+1) truncated to the retained coordinates."""
    check_resolution(resolution)
    _check_point(a, resolution)
    total = 0.0
    for i in range(resolution):
        if (a >> i) & 1:
            total += 2.0 ** -(i + 1)
    return total


def abs_values(resolution: int) -> np.ndarray:
    """|x| for every point index at once."""
    check_resolution(resolution)
    idx = np.arange(1 << resolution, dtype=np.int64)
    total = np.zeros(idx.size)
    for i in range(resolution):
        total += ((idx >> i) & 1) * 2.0 ** -(i + 1)
    return total


def _pairwise_total(values: np.ndarray) -> float:
    # Deterministic pairwise-tree reduction; length is always a power of 2.
    a = np.asarray(values, dtype=np.float64)
    while a.size > 1:
        a = a[0::2] + a[1::2]
    return float(a[0])


def integrate(f: SampledFunction) -> float:
    """Integral against the normalized Haar measure."""
    return _pairwise_total(f.values) * 2.0**-f.resolution


def _check_exponent(p) -> float:
    p = float(p)
    if not (p >= 1.0):
        raise ValueError(f"L_p exponent must be >= 1 or inf, got {p}")
    return p


def _lp_of_values(values: np.ndarray, p: float, resolution: int) -> float:
    if p == INF:
        return float(np.max(np.abs(values)))
    total = _pairwise_total(np.abs(values) ** p) * 2.0**-resolution
    return total ** (1.0 / p)


def lp_norm(f: SampledFunction, p) -> float:
    """L_p norm; p may be any real >= 1 or math.inf (sup norm)."""
    return _lp_of_values(f.values, _check_exponent(p), f.resolution)


def translate(f: SampledFunction, t: int) -> SampledFunction:
    """f(. + t); a permutation of the samples since + is XOR."""
    _check_point(t, f.resolution)
    if t == 0:
        return f
    idx = np.arange(f.size, dtype=np.int64)
    return SampledFunction(f.resolution, f.values[idx ^ t])


def interval_indicator(n: int, resolution: int) -> SampledFunction:
    """Indicator of the dyadic interval I_n (first n coordinates zero)."""
    check_resolution(resolution)
    if not 0 <= n <= resolution:
        raise ValueError(f"interval rank {n} out of range [0, {resolution}]")
    values = np.zeros(1 << resolution)
    values[:: 1 << n] = 1.0
    return SampledFunction(resolution, values)


def _modulus_l2(f: SampledFunction, n: int) -> float:
    # ||f(.+t) - f||_2^2 = 2 * (sum_m fhat(m)^2 - sum_m fhat(m)^2 w_m(t)),
    # so one unnormalized transform of the squared spectrum gives the
    # distance for every t simultaneously.
    from .walsh_system import fwht_forward, hadamard_transform

    g = fwht_forward(f).coeffs ** 2
    total = _pairwise_total(g)
    per_t = 2.0 * (total - hadamard_transform(g))
    step = 1 << n
    worst = float(np.max(per_t[::step]))
    return math.sqrt(max(worst, 0.0))


def modulus_of_continuity(
    f: SampledFunction, n: int, p, brute_force: bool = False
) -> float:
    """omega_p(f, 2^-n): sup over |t| < 2^-n of ||f(.+t) - f||_p.

    At finite resolution the ball {|t| < 2^-n} is exactly the interval
    I_n, i.e. the indices divisible by 2^n, so the supremum is a finite
    maximum.  For p = 2 a spectral identity evaluates all translates at
    once; pass brute_force=True to force the direct loop.
    """
    p = _check_exponent(p)
    if not 0 <= n <= f.resolution:
        raise ValueError(f"modulus rank {n} out of range [0, {f.resolution}]")
    if p == 2.0 and not brute_force:
        return _modulus_l2(f, n)
    step = 1 << n
    idx = np.arange(f.size, dtype=np.int64)
    best = 0.0
    for t in range(0, f.size, step):
        diff = f.values[idx ^ t] - f.values
        best = max(best, _lp_of_values(diff, p, f.resolution))
    return best


def round_delta_to_grid(delta: float, resolution: int) -> int:
    """Round a width delta down to the dyadic grid; returns the rank n with
    2^-n <= delta (clamped to [0, N])."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    n = 0
    while n < resolution and 2.0**-n > delta:
        n += 1
    return n


def write_function(f: SampledFunction, stream) -> None:
    """Plain-text exchange form: `N=<int>` then one sample per line."""
    stream.write(f"{_HEADER_PREFIX}{f.resolution}\n")
    for v in f.values:
        stream.write(format(v, ".17g") + "\n")


def read_function(stream) -> SampledFunction:
    header = stream.readline().strip()
    if not header.startswith(_HEADER_PREFIX):
        raise ValueError(f"expected '{_HEADER_PREFIX}<int>' header, got {header!r}")
    resolution = int(header[len(_HEADER_PREFIX):])
    count = 1 << check_resolution(resolution)
    values = []
    for _ in range(count):
        line = stream.readline()
        if not line:
            raise ValueError("truncated sample list")
        values.append(float(line))
    return SampledFunction(resolution, values)
