from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walshvp.dyadic import integrate, interval_indicator
from walshvp.kernels import (
    abel_transform,
    decompose_vp_kernel,
    dirichlet,
    dirichlet_via_recursion,
    fejer,
    fejer_norm_extremum,
    kernel_l1_norm,
    kernel_norm_sweep,
    vp_kernel,
)
from walshvp.walsh_system import walsh
from walshvp.weights import WeightScheme, build_scheme
from walshvp.experiments import SplitMix64, random_rational_scheme


def naive_vp_kernel(scheme, resolution):
    acc = np.zeros(1 << resolution)
    for k in range(scheme.block_start, scheme.block_end + 1):
        acc += scheme.weight(k) * dirichlet(k, resolution).values
    return acc


class TestDirichlet:
    def test_paley_closed_form(self):
        # D_{2^n} is 2^n on I_n and zero elsewhere
        for n in range(4):
            d = dirichlet(1 << n, 3)
            expected = (1 << n) * interval_indicator(n, 3).values
            assert np.array_equal(d.values, expected)

    def test_d0_is_zero(self):
        assert np.all(dirichlet(0, 3).values == 0.0)

    def test_d3_samples(self):
        assert dirichlet(3, 2).values.tolist() == [3.0, 1.0, 1.0, -1.0]

    def test_integral_one(self):
        for n in range(1, 17):
            assert integrate(dirichlet(n, 4)) == 1.0

    def test_order_too_large(self):
        with pytest.raises(ValueError):
            dirichlet(17, 4)


class TestDirichletRecursion:
    def test_power_of_two_base_case(self):
        for k in range(5):
            a = dirichlet_via_recursion(1 << k, 5)
            b = dirichlet(1 << k, 5)
            assert np.array_equal(a.exact_numer, b.exact_numer)

    def test_five_equals_direct(self):
        a = dirichlet_via_recursion(5, 3)
        b = dirichlet(5, 3)
        assert np.array_equal(a.exact_numer, b.exact_numer)

    def test_exhaustive_equivalence(self):
        N = 6
        for n in range(1 << N):
            assert np.array_equal(
                dirichlet_via_recursion(n, N).exact_numer,
                dirichlet(n, N).exact_numer,
            )


class TestFejer:
    def test_k1_is_constant_one(self):
        assert np.all(fejer(1, 3).values == 1.0)

    def test_k2_at_n1(self):
        k2 = fejer(2, 1)
        assert k2.values.tolist() == [1.5, 0.5]
        assert k2.exact_value(0) == Fraction(3, 2)

    def test_k2_l1_norm_is_one(self):
        assert kernel_l1_norm(fejer(2, 3)) == 1

    def test_integral_one(self):
        for n in (1, 3, 7, 12):
            assert integrate(fejer(n, 4)) == pytest.approx(1.0, abs=1e-14)

    def test_norm_sweep_matches_individual(self):
        d_norms, k_norms = kernel_norm_sweep(12, 4)
        for n in range(1, 13):
            assert k_norms[n - 1] == kernel_l1_norm(fejer(n, 4))
            assert d_norms[n - 1] == kernel_l1_norm(dirichlet(n, 4))

    def test_norm_bounds_small_sweep(self):
        _, k_norms = kernel_norm_sweep(1 << 7, 8)
        peak = max(k_norms)
        assert peak <= 2
        assert peak <= Fraction(17, 15)

    def test_extremum_reporting(self):
        peak, argmax = fejer_norm_extremum(1 << 7, 8)
        _, k_norms = kernel_norm_sweep(1 << 7, 8)
        assert peak == max(k_norms)
        assert k_norms[argmax - 1] == peak


class TestVpKernel:
    def test_uniform_integrates_to_one(self):
        scheme = build_scheme("uniform", 3)
        kernel = vp_kernel(scheme, 6)
        assert integrate(kernel) == pytest.approx(1.0, abs=1e-12)

    def test_single_pair_block(self):
        # n=1 block {2,3} with weights (1/2, 1/2) equals (D_2 + D_3)/2
        scheme = build_scheme("uniform", 1)
        kernel = vp_kernel(scheme, 3, exact=True)
        expected = (dirichlet(2, 3).values + dirichlet(3, 3).values) / 2
        assert np.array_equal(kernel.values, expected)

    def test_matches_naive_oracle(self):
        rng = SplitMix64(5)
        for n in (1, 2, 3):
            scheme = random_rational_scheme(n, rng)
            fast = vp_kernel(scheme, 6, exact=False)
            assert np.max(np.abs(fast.values - naive_vp_kernel(scheme, 6))) < 1e-11

    def test_exact_matches_float(self):
        scheme = build_scheme("linear_down", 3)
        a = vp_kernel(scheme, 6, exact=True)
        b = vp_kernel(scheme, 6, exact=False)
        assert np.max(np.abs(a.values - b.values)) < 1e-11

    def test_block_exceeds_resolution(self):
        with pytest.raises(ValueError):
            vp_kernel(build_scheme("uniform", 4), 4)

    def test_exact_requires_rationals(self):
        scheme = WeightScheme(2, [0.3, 0.3, 0.2, 0.2])
        with pytest.raises(ValueError):
            vp_kernel(scheme, 5, exact=True)


class TestDecomposition:
    def test_uniform_middle_component_vanishes(self):
        dec = decompose_vp_kernel(build_scheme("uniform", 3), 6, exact=True)
        assert np.all(dec.components[1].values == 0.0)

    def test_pair_block_identity(self):
        dec = decompose_vp_kernel(build_scheme("uniform", 1), 3, exact=True)
        kernel = vp_kernel(build_scheme("uniform", 1), 3, exact=True)
        assert np.array_equal(dec.total().values, kernel.values)

    def test_random_schemes_exact_identity(self):
        rng = SplitMix64(6)
        for _ in range(10):
            n = 1 + rng.randint(3)
            scheme = random_rational_scheme(n, rng, sort="nonincreasing")
            dec = decompose_vp_kernel(scheme, 6, exact=True)
            kernel = vp_kernel(scheme, 6, exact=True)
            for j in range(kernel.size):
                total = sum(c.exact_value(j) for c in dec.components)
                assert total == kernel.exact_value(j)

    def test_float_weights_fall_back(self):
        scheme = WeightScheme(2, [0.4, 0.3, 0.2, 0.1])
        dec = decompose_vp_kernel(scheme, 5)
        expected = naive_vp_kernel(scheme, 5)
        assert np.max(np.abs(dec.total().values - expected)) < 1e-12


class TestAbelTransform:
    def test_constant_sequence(self):
        diffs, boundary = abel_transform([2.0, 2.0, 2.0])
        assert diffs.tolist() == [0.0, 0.0, 2.0]
        assert boundary == 2.0

    def test_singleton(self):
        diffs, boundary = abel_transform([1.5])
        assert diffs.tolist() == [1.5] and boundary == 1.5

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            abel_transform([])

    @given(st.lists(st.floats(-2, 2), min_size=1, max_size=7))
    @settings(max_examples=25, deadline=None)
    def test_summation_by_parts_identity(self, seq):
        # sum_k a_k D_k == sum_k (a_k - a_{k+1}) k K_k with a padded zero
        N = 4
        diffs, _ = abel_transform(seq)
        direct = np.zeros(1 << N)
        parts = np.zeros(1 << N)
        for k, a_k in enumerate(seq, start=1):
            direct += a_k * dirichlet(k, N).values
            parts += diffs[k - 1] * k * fejer(k, N).values
        assert np.max(np.abs(direct - parts)) < 1e-10
