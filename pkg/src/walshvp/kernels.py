"""Dirichlet, Fejer, and matrix-transform de la Vallee Poussin kernels.

Dirichlet kernels have exact integer samples; Fejer and VP kernels carry
exact integer numerators over a common denominator whenever possible, so
the kernel identities (the closed form of D at powers of two, the
recursive splitting of D, and the three-part VP decomposition) can be
checked with zero error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .dyadic import SampledFunction, check_resolution, _pairwise_total
from .walsh_system import hadamard_transform, walsh_signs
from .weights import WeightScheme

# Exact accumulations switch to arbitrary precision above this bound.
_INT64_SAFE = 1 << 62


class KernelFunction(SampledFunction):
    """SampledFunction with a kind tag and an optional exact rational
    value path (integer numerators over one positive denominator)."""

    __slots__ = ("kind", "exact_numer", "exact_denom")

    def __init__(self, resolution, values, kind="", exact_numer=None, exact_denom=1):
        super().__init__(resolution, values)
        if exact_numer is not None:
            exact_numer = np.asarray(exact_numer)
            if exact_numer.shape != self.values.shape:
                raise ValueError("exact numerators shape mismatch")
            if exact_denom < 1:
                raise ValueError("exact denominator must be positive")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "exact_numer", exact_numer)
        object.__setattr__(self, "exact_denom", int(exact_denom))

    @property
    def is_exact(self) -> bool:
        return self.exact_numer is not None

    def exact_value(self, j: int) -> Fraction:
        if not self.is_exact:
            raise ValueError("kernel has no exact value path")
        return Fraction(int(self.exact_numer[j]), self.exact_denom)


@dataclass(frozen=True)
class KernelDecomposition:
    """Three-part split of a block VP kernel: a multiple of the
    power-of-two Dirichlet kernel, a signed sum of weight differences
    against Fejer kernels, and a signed boundary Fejer term."""

    block_exponent: int
    components: tuple

    def total(self) -> SampledFunction:
        first, second, third = self.components
        return first + second + third


def _check_order(n: int, resolution: int) -> int:
    check_resolution(resolution)
    if not 0 <= n <= (1 << resolution):
        raise ValueError(
            f"kernel order {n} not representable at resolution {resolution}"
        )
    return int(n)


def _paley_int(m: int, resolution: int) -> np.ndarray:
    # Closed form at powers of two: 2^m on I_m, zero elsewhere.
    values = np.zeros(1 << resolution, dtype=np.int64)
    values[:: 1 << m] = 1 << m
    return values


def _dirichlet_int(n: int, resolution: int) -> np.ndarray:
    acc = np.zeros(1 << resolution, dtype=np.int64)
    for k in range(n):
        acc += walsh_signs(k, resolution)
    return acc


def dirichlet(n: int, resolution: int) -> KernelFunction:
    """D_n: sum of the first n Walsh functions (D_0 = 0), exact integers."""
    n = _check_order(n, resolution)
    numer = _dirichlet_int(n, resolution)
    return KernelFunction(
        resolution,
        numer.astype(np.float64),
        kind=f"dirichlet:{n}",
        exact_numer=numer,
    )


def _dirichlet_rec_int(n: int, resolution: int) -> np.ndarray:
    if n == 0:
        return np.zeros(1 << resolution, dtype=np.int64)
    m = n.bit_length() - 1
    values = _paley_int(m, resolution)
    j = n - (1 << m)
    if j:
        idx = np.arange(1 << resolution, dtype=np.int64)
        r_m = 1 - 2 * ((idx >> m) & 1)
        values = values + r_m * _dirichlet_rec_int(j, resolution)
    return values


def dirichlet_via_recursion(n: int, resolution: int) -> KernelFunction:
    """D_n built by binary splitting: peel the top power of two with the
    closed form and recurse on the remainder behind a Rademacher sign."""
    n = _check_order(n, resolution)
    numer = _dirichlet_rec_int(n, resolution)
    return KernelFunction(
        resolution,
        numer.astype(np.float64),
        kind=f"dirichlet-rec:{n}",
        exact_numer=numer,
    )


def fejer(n: int, resolution: int) -> KernelFunction:
    """K_n = (1/n) sum_{k=1}^{n} D_k; exact numerators over denominator n."""
    n = _check_order(n, resolution)
    if n < 1:
        raise ValueError(f"Fejer kernel needs n >= 1, got {n}")
    running = np.zeros(1 << resolution, dtype=np.int64)
    numer = np.zeros(1 << resolution, dtype=np.int64)
    for k in range(n):
        running += walsh_signs(k, resolution)  # running == D_{k+1}
        numer += running
    return KernelFunction(
        resolution,
        numer.astype(np.float64) / n,
        kind=f"fejer:{n}",
        exact_numer=numer,
        exact_denom=n,
    )


def kernel_l1_norm(kernel: KernelFunction):
    """L1 norm; an exact Fraction when the exact value path is present."""
    if getattr(kernel, "exact_numer", None) is not None:
        total = int(np.sum(np.abs(kernel.exact_numer)))
        return Fraction(total, kernel.exact_denom * kernel.size)
    return _pairwise_total(np.abs(kernel.values)) * 2.0**-kernel.resolution


def kernel_norm_sweep(n_max: int, resolution: int):
    """Exact L1 norms of D_n and K_n for n = 1..n_max in one pass.

    Returns (dirichlet_norms, fejer_norms) as lists of Fractions.
    Incremental integer accumulation keeps the sweep O(n_max 2^N).
    """
    _check_order(n_max, resolution)
    if n_max < 1:
        raise ValueError("sweep needs n_max >= 1")
    size = 1 << resolution
    running = np.zeros(size, dtype=np.int64)
    cumulative = np.zeros(size, dtype=np.int64)
    d_norms = []
    k_norms = []
    for n in range(1, n_max + 1):
        running += walsh_signs(n - 1, resolution)
        cumulative += running
        d_norms.append(Fraction(int(np.sum(np.abs(running))), size))
        k_norms.append(Fraction(int(np.sum(np.abs(cumulative))), n * size))
    return d_norms, k_norms


def fejer_norm_extremum(n_max: int, resolution: int):
    """(max L1 norm of K_n, argmax n) over 1 <= n <= n_max, exact."""
    _, k_norms = kernel_norm_sweep(n_max, resolution)
    best = max(range(len(k_norms)), key=lambda i: k_norms[i])
    return k_norms[best], best + 1


def _exact_block(w: WeightScheme):
    # Common-denominator integer weights a_k with t_k = a_k / L.
    denom = math.lcm(*(t.denominator for t in w.exact))
    numer = [int(t * denom) for t in w.exact]
    return numer, denom


def _check_block(w: WeightScheme, resolution: int) -> None:
    check_resolution(resolution)
    if w.block_exponent + 1 > resolution:
        raise ValueError(
            f"block [{w.block_start}, {w.block_end}] exceeds resolution {resolution}"
        )


def _use_exact(w: WeightScheme, resolution: int, exact: Optional[bool]) -> bool:
    if exact is None:
        return w.exact is not None and w.block_size * (1 << resolution) <= 1 << 22
    if exact and w.exact is None:
        raise ValueError("exact kernel path requires rational weights")
    return exact


def vp_kernel(w: WeightScheme, resolution: int, exact: Optional[bool] = None) -> KernelFunction:
    """Block de la Vallee Poussin kernel sum_k t_k D_k, k over
    [2^n, 2^(n+1)-1].

    The float path synthesizes the kernel from its coefficients (the
    coefficient at frequency m is the tail sum of the weights above m);
    the exact path accumulates integer Dirichlet samples over the
    weights' common denominator.
    """
    _check_block(w, resolution)
    n = w.block_exponent
    size = 1 << resolution
    if _use_exact(w, resolution, exact):
        a, denom = _exact_block(w)
        bound = max(a) * (1 << (2 * n + 2)) * w.block_size
        dtype = np.int64 if bound < _INT64_SAFE else object
        numer = np.zeros(size, dtype=dtype)
        d = _paley_int(n, resolution).astype(dtype, copy=True)
        for i, k in enumerate(range(w.block_start, w.block_end + 1)):
            numer += a[i] * d
            if i + 1 < w.block_size:
                d += walsh_signs(k, resolution)
        return KernelFunction(
            resolution,
            np.array([int(v) for v in numer], dtype=np.float64) / denom
            if dtype is object
            else numer.astype(np.float64) / denom,
            kind=f"vp:{n}",
            exact_numer=numer,
            exact_denom=denom,
        )
    coeffs = np.zeros(size)
    total = float(np.sum(w.weights))
    coeffs[: w.block_start] = total
    # Tail sums inside the block: coefficient at 2^n + i is the weight
    # mass strictly above that frequency.
    tails = np.concatenate([np.cumsum(w.weights[::-1])[::-1][1:], [0.0]])
    coeffs[w.block_start : w.block_end + 1] = tails
    return KernelFunction(resolution, hadamard_transform(coeffs), kind=f"vp:{n}")


def decompose_vp_kernel(
    w: WeightScheme, resolution: int, exact: Optional[bool] = None
) -> KernelDecomposition:
    """Split the block VP kernel into three parts whose sum reproduces it:

      part 1: (sum of the weights) * D_{2^n};
      part 2: r_n * sum_{k=1}^{2^n - 2} (t_{2^n+k} - t_{2^n+k+1}) * k * K_k;
      part 3: r_n * t_last * (2^n - 1) * K_{2^n - 1}.

    The identity follows from the Dirichlet splitting plus summation by
    parts, and holds exactly in rational arithmetic.
    """
    _check_block(w, resolution)
    n = w.block_exponent
    size = 1 << resolution
    if w.block_size < 2:
        raise ValueError("decomposition needs a block of size >= 2")
    idx = np.arange(size, dtype=np.int64)
    r_n = 1 - 2 * ((idx >> n) & 1)
    if _use_exact(w, resolution, exact):
        a, denom = _exact_block(w)
        bound = max(a) * (1 << (3 * n + 2))
        dtype = np.int64 if bound < _INT64_SAFE else object
        first = (sum(a) * _paley_int(n, resolution)).astype(dtype, copy=False)
        # cumulative[k] = sum_{j=1}^{k} D_j = k * K_k, built incrementally
        second = np.zeros(size, dtype=dtype)
        running = np.zeros(size, dtype=dtype)
        cumulative = np.zeros(size, dtype=dtype)
        for k in range(1, w.block_size - 1):
            running += walsh_signs(k - 1, resolution)  # running == D_k
            cumulative += running
            second += (a[k] - a[k + 1]) * cumulative
        # finish cumulative up to k = 2^n - 1 for the boundary term
        for k in range(max(1, w.block_size - 1), w.block_size):
            running += walsh_signs(k - 1, resolution)
            cumulative += running
        second = r_n * second
        third = r_n * (a[-1] * cumulative)

        def _pack(numer, tag):
            if dtype is object:
                values = np.array([int(v) for v in numer], dtype=np.float64) / denom
            else:
                values = numer.astype(np.float64) / denom
            return KernelFunction(
                resolution, values, kind=tag, exact_numer=numer, exact_denom=denom
            )

        parts = (
            _pack(first, f"vp-part1:{n}"),
            _pack(second, f"vp-part2:{n}"),
            _pack(third, f"vp-part3:{n}"),
        )
        return KernelDecomposition(n, parts)
    t = w.weights
    first = float(np.sum(t)) * _paley_int(n, resolution).astype(np.float64)
    second = np.zeros(size)
    running = np.zeros(size)
    cumulative = np.zeros(size)
    for k in range(1, w.block_size - 1):
        running += walsh_signs(k - 1, resolution)
        cumulative += running
        second += (t[k] - t[k + 1]) * cumulative
    for k in range(max(1, w.block_size - 1), w.block_size):
        running += walsh_signs(k - 1, resolution)
        cumulative += running
    parts = (
        KernelFunction(resolution, first, kind=f"vp-part1:{n}"),
        KernelFunction(resolution, r_n * second, kind=f"vp-part2:{n}"),
        KernelFunction(resolution, r_n * (t[-1] * cumulative), kind=f"vp-part3:{n}"),
    )
    return KernelDecomposition(n, parts)


def abel_transform(seq):
    """Summation-by-parts data for a coefficient sequence a_1..a_n.

    Returns (differences, boundary) where differences[k-1] = a_k -
    a_(k+1) with the zero-padding convention a_(n+1) = 0, and boundary =
    a_n.  With that padding, sum_k a_k D_k = sum_k differences[k-1] * k
    * K_k.
    """
    arr = np.asarray(seq, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("abel_transform needs a non-empty sequence")
    padded = np.concatenate([arr, [0.0]])
    return padded[:-1] - padded[1:], float(arr[-1])
