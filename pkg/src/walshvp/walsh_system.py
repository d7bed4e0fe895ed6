"""Walsh-Paley system and the fast Walsh-Hadamard transform.

The LSB-first bit map makes w_n(x) = (-1)^popcount(n AND j) for point
index j, and the natural-order butterfly then produces coefficients in
Paley order directly.  The forward transform carries the 2^-N Haar
normalization; the inverse is unnormalized.
"""

from __future__ import annotations

import numpy as np

from .dyadic import SampledFunction, check_resolution

_SPECTRUM_HEADER = "SPECTRUM"


class Spectrum:
    """Walsh-Fourier coefficients in Paley order; coeffs[n] = fhat(n)."""

    __slots__ = ("resolution", "coeffs")

    def __init__(self, resolution: int, coeffs) -> None:
        resolution = check_resolution(resolution)
        arr = np.asarray(coeffs, dtype=np.float64)
        if arr.shape != (1 << resolution,):
            raise ValueError(
                f"expected {1 << resolution} coefficients, got shape {arr.shape}"
            )
        object.__setattr__(self, "resolution", resolution)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Spectrum is immutable")

    @property
    def size(self) -> int:
        return 1 << self.resolution

    def __repr__(self):
        return f"Spectrum(N={self.resolution}, size={self.size})"


def bit_parity(values: np.ndarray) -> np.ndarray:
    """Parity of popcount, vectorized by xor-folding (indices < 2^32)."""
    v = np.array(values, dtype=np.int64)
    for shift in (16, 8, 4, 2, 1):
        v ^= v >> shift
    return v & 1


def rademacher(k: int, resolution: int) -> SampledFunction:
    """r_k(x) = (-1)^x_k, the sign of coordinate k."""
    check_resolution(resolution)
    if not 0 <= k < resolution:
        raise ValueError(f"Rademacher index {k} out of range [0, {resolution})")
    idx = np.arange(1 << resolution, dtype=np.int64)
    return SampledFunction(resolution, 1.0 - 2.0 * ((idx >> k) & 1))


def walsh_signs(n: int, resolution: int) -> np.ndarray:
    """w_n as a +-1 integer vector."""
    check_resolution(resolution)
    if not 0 <= n < (1 << resolution):
        raise ValueError(
            f"Walsh index {n} not representable at resolution {resolution}"
        )
    idx = np.arange(1 << resolution, dtype=np.int64)
    return 1 - 2 * bit_parity(n & idx)


def walsh(n: int, resolution: int) -> SampledFunction:
    """Walsh-Paley function w_n, the product of Rademacher functions
    selected by the binary digits of n."""
    return SampledFunction(resolution, walsh_signs(n, resolution).astype(np.float64))


def order_of(n: int) -> int:
    """Order |n|: the position of the highest set binary digit."""
    if n < 1:
        raise ValueError(f"order is defined for n >= 1, got {n}")
    return int(n).bit_length() - 1


def hadamard_transform(values) -> np.ndarray:
    """Unnormalized Hadamard butterfly, y[n] = sum_j (-1)^popcount(n&j) x[j].

    Self-inverse up to the factor 2^N; O(N 2^N) operations.
    """
    a = np.array(values, dtype=np.float64)
    n = a.size
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < n:
        a = a.reshape(-1, 2 * h)
        left = a[:, :h].copy()
        right = a[:, h:].copy()
        a[:, :h] = left + right
        a[:, h:] = left - right
        h *= 2
    return a.reshape(n)


def fwht_forward(f: SampledFunction) -> Spectrum:
    """Walsh-Fourier coefficients fhat(n) = integral of f w_n d(mu)."""
    return Spectrum(f.resolution, hadamard_transform(f.values) * 2.0**-f.resolution)


def fwht_inverse(s: Spectrum) -> SampledFunction:
    """Synthesis sum_n coeffs[n] w_n; inverse of fwht_forward."""
    return SampledFunction(s.resolution, hadamard_transform(s.coeffs))


def fourier_coefficients_naive(f: SampledFunction) -> np.ndarray:
    """O(4^N) double-loop coefficient formula; oracle for the fast path."""
    size = f.size
    idx = np.arange(size, dtype=np.int64)
    signs = 1.0 - 2.0 * bit_parity(idx[:, None] & idx[None, :])
    return signs @ f.values * 2.0**-f.resolution


def partial_sum(f: SampledFunction, n: int) -> SampledFunction:
    """S_n(f): synthesis of the coefficients below n; S_0 = 0."""
    if not 0 <= n <= f.size:
        raise ValueError(
            f"partial sum order {n} exceeds representable range [0, {f.size}]"
        )
    spec = fwht_forward(f)
    truncated = np.zeros(f.size)
    truncated[:n] = spec.coeffs[:n]
    return fwht_inverse(Spectrum(f.resolution, truncated))


def write_spectrum(s: Spectrum, stream) -> None:
    """Text exchange form: `SPECTRUM`, `N=<int>`, then one coefficient
    per line in Paley order."""
    stream.write(_SPECTRUM_HEADER + "\n")
    stream.write(f"N={s.resolution}\n")
    for c in s.coeffs:
        stream.write(format(c, ".17g") + "\n")


def read_spectrum(stream) -> Spectrum:
    header = stream.readline().strip()
    if header != _SPECTRUM_HEADER:
        raise ValueError(f"expected '{_SPECTRUM_HEADER}' header, got {header!r}")
    line = stream.readline().strip()
    if not line.startswith("N="):
        raise ValueError(f"expected 'N=<int>' line, got {line!r}")
    resolution = check_resolution(int(line[2:]))
    coeffs = []
    for _ in range(1 << resolution):
        row = stream.readline()
        if not row:
            raise ValueError("truncated coefficient list")
        coeffs.append(float(row))
    return Spectrum(resolution, coeffs)
