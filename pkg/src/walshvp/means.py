"""Matrix-transform de la Vallee Poussin means and dyadic convolution.

The mean over a dyadic block is computed by two independent routes: the
default convolves against the block kernel through the spectral
factorization (fhat * Khat, no extra scaling with this package's
normalization), and the verification route accumulates weighted partial
sums term by term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dyadic import SampledFunction
from .walsh_system import Spectrum, fwht_forward, hadamard_transform
from .weights import WeightScheme
from .kernels import vp_kernel

PATH_CONVOLUTION = "convolution"
PATH_PARTIAL_SUMS = "partial_sums"


@dataclass(frozen=True)
class MeanResult:
    function: SampledFunction
    path: str
    block: tuple


def dyadic_convolve(f: SampledFunction, kernel: SampledFunction) -> SampledFunction:
    """(f * K)(x) = integral of f(u) K(u + x) d(mu)(u).

    Spectral route: the coefficients of the convolution are the products
    of the coefficients, so transform both, multiply, synthesize.
    """
    f._check_same(kernel)
    fc = fwht_forward(f).coeffs
    kc = fwht_forward(kernel).coeffs
    return SampledFunction(f.resolution, hadamard_transform(fc * kc))


def dyadic_convolve_naive(f: SampledFunction, kernel: SampledFunction) -> SampledFunction:
    """Direct O(4^N) quadrature over all translates; spectral oracle."""
    f._check_same(kernel)
    idx = np.arange(f.size, dtype=np.int64)
    table = kernel.values[idx[:, None] ^ idx[None, :]]
    return SampledFunction(f.resolution, table @ f.values * 2.0**-f.resolution)


def general_vp_mean(f: SampledFunction, t, m: int, n: int) -> SampledFunction:
    """sum_{k=m}^{n} t[k-m] S_k(f) for a general index range 1 <= m <= n."""
    t = np.asarray(t, dtype=np.float64)
    if not 1 <= m <= n < f.size:
        raise ValueError(f"need 1 <= m <= n < {f.size}, got ({m}, {n})")
    if t.shape != (n - m + 1,):
        raise ValueError(f"expected {n - m + 1} weights, got shape {t.shape}")
    coeffs = fwht_forward(f).coeffs
    acc = np.zeros(f.size)
    truncated = np.zeros(f.size)
    for k in range(m, n + 1):
        truncated[:] = 0.0
        truncated[:k] = coeffs[:k]
        acc += t[k - m] * hadamard_transform(truncated)
    return SampledFunction(f.resolution, acc)


def vp_mean(f: SampledFunction, w: WeightScheme, path: str = PATH_CONVOLUTION) -> MeanResult:
    """Block mean sum_k t_k S_k(f) over k in [2^n, 2^(n+1)-1]."""
    if w.block_exponent + 1 > f.resolution:
        raise ValueError(
            f"block [{w.block_start}, {w.block_end}] exceeds resolution {f.resolution}"
        )
    block = (w.block_start, w.block_end)
    if path == PATH_CONVOLUTION:
        kernel = vp_kernel(w, f.resolution, exact=False)
        return MeanResult(dyadic_convolve(f, kernel), path, block)
    if path == PATH_PARTIAL_SUMS:
        result = general_vp_mean(f, w.weights, w.block_start, w.block_end)
        return MeanResult(result, path, block)
    raise ValueError(f"unknown path {path!r}")
