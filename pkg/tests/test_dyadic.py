import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walshvp import dyadic
from walshvp.dyadic import (
    INF,
    SampledFunction,
    abs_value,
    abs_values,
    group_add,
    integrate,
    interval_indicator,
    lp_norm,
    modulus_of_continuity,
    read_function,
    translate,
    write_function,
)
from walshvp.walsh_system import rademacher, walsh


def rand_fn(seed, resolution):
    rng = np.random.default_rng(seed)
    return SampledFunction(resolution, rng.uniform(-1, 1, 1 << resolution))


class TestGroup:
    def test_null_element(self):
        assert group_add(0, 5, 3) == 5

    def test_self_inverse(self):
        assert group_add(5, 5, 3) == 0

    def test_xor(self):
        assert group_add(3, 5, 3) == 6

    def test_group_axioms_exhaustive(self):
        # associativity/commutativity over the whole group at N=4
        size = 16
        for a in range(size):
            for b in range(size):
                ab = group_add(a, b, 4)
                assert ab == group_add(b, a, 4)
                for c in range(0, size, 5):
                    assert group_add(ab, c, 4) == group_add(a, group_add(b, c, 4), 4)

    def test_resolution_mismatch(self):
        with pytest.raises(ValueError):
            group_add(9, 1, 3)


class TestAbsValue:
    def test_zero(self):
        assert abs_value(0, 4) == 0.0

    def test_first_coordinate(self):
        assert abs_value(1, 4) == 0.5

    def test_all_ones_n3(self):
        # 1/2 + 1/4 + 1/8
        assert abs_value(7, 3) == 0.875

    def test_range_and_involution(self):
        for j in range(16):
            v = abs_value(j, 4)
            assert 0.0 <= v <= 1 - 2.0**-4
            assert abs_value(group_add(j, j, 4), 4) == 0.0

    def test_vectorized_matches_scalar(self):
        vals = abs_values(5)
        assert vals.tolist() == [abs_value(j, 5) for j in range(32)]


class TestIntegrate:
    def test_constant_one(self):
        assert integrate(dyadic.constant(1.0, 6)) == 1.0

    def test_rademacher_mean_zero(self):
        for n in (2, 5):
            assert integrate(rademacher(0, n)) == 0.0

    def test_dirichlet_power_of_two(self):
        # D_4 at N=3: 4 on I_2 (two cells of measure 1/8 each)
        from walshvp.kernels import dirichlet

        assert integrate(dirichlet(4, 3)) == 1.0


class TestLpNorm:
    def test_walsh_l2_unit(self):
        for n in (0, 3, 7):
            assert lp_norm(walsh(n, 3), 2) == pytest.approx(1.0, abs=1e-14)

    def test_rademacher_l1(self):
        assert lp_norm(rademacher(0, 4), 1) == 1.0

    def test_dirichlet2_l1(self):
        from walshvp.kernels import dirichlet

        assert lp_norm(dirichlet(2, 4), 1) == pytest.approx(1.0, abs=1e-15)

    def test_invalid_exponent(self):
        with pytest.raises(ValueError):
            lp_norm(dyadic.constant(1.0, 2), 0.5)

    @given(st.integers(0, 2**31), st.sampled_from([1.0, 2.0, INF]))
    @settings(max_examples=30, deadline=None)
    def test_triangle_inequality(self, seed, p):
        f = rand_fn(seed, 5)
        g = rand_fn(seed + 1, 5)
        lhs = lp_norm(f + g, p)
        rhs = lp_norm(f, p) + lp_norm(g, p)
        assert lhs <= rhs * (1 + 1e-12)


class TestTranslate:
    def test_null_translation(self):
        f = rand_fn(0, 5)
        assert np.array_equal(translate(f, 0).values, f.values)

    def test_involution(self):
        f = rand_fn(1, 5)
        assert np.array_equal(translate(translate(f, 13), 13).values, f.values)

    def test_character_property(self):
        # w_n(x + t) = w_n(t) w_n(x), brute force over all t
        for n in (1, 5, 11):
            w = walsh(n, 4)
            for t in range(16):
                expected = w.values[t] * w.values
                assert np.array_equal(translate(w, t).values, expected)

    def test_norm_preserved(self):
        f = rand_fn(2, 6)
        for p in (1.0, 2.0, INF):
            assert lp_norm(translate(f, 37), p) == lp_norm(f, p)


class TestModulus:
    def test_rademacher_fine_scale(self):
        assert modulus_of_continuity(rademacher(0, 4), 1, INF) == 0.0

    def test_rademacher_coarse_scale(self):
        for p in (1.0, 2.0, INF):
            assert modulus_of_continuity(rademacher(0, 4), 0, p) == pytest.approx(
                2.0, abs=1e-14
            )

    def test_abs_value_sup_modulus(self):
        N = 7
        f = SampledFunction(N, abs_values(N))
        for n in (1, 3, 5):
            assert modulus_of_continuity(f, n, INF) == pytest.approx(
                2.0**-n - 2.0**-N, abs=1e-15
            )

    def test_l2_fast_path_matches_brute_force(self):
        f = rand_fn(3, 7)
        for n in range(8):
            fast = modulus_of_continuity(f, n, 2)
            brute = modulus_of_continuity(f, n, 2, brute_force=True)
            assert fast == pytest.approx(brute, abs=1e-12)

    def test_vanishes_at_full_rank(self):
        f = rand_fn(4, 6)
        for p in (1.0, 2.0, INF):
            assert modulus_of_continuity(f, 6, p) == 0.0

    def test_nonincreasing_in_n(self):
        f = rand_fn(5, 6)
        for p in (1.0, 2.0, INF):
            vals = [modulus_of_continuity(f, n, p) for n in range(7)]
            assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_bounded_by_twice_norm(self):
        f = rand_fn(6, 6)
        for p in (1.0, 2.0, INF):
            assert modulus_of_continuity(f, 0, p) <= 2 * lp_norm(f, p) + 1e-12

    def test_rank_out_of_range(self):
        with pytest.raises(ValueError):
            modulus_of_continuity(rand_fn(0, 4), 5, 1)


class TestIntervalIndicator:
    def test_rank_zero_is_constant_one(self):
        assert np.all(interval_indicator(0, 4).values == 1.0)

    def test_full_rank_single_cell(self):
        f = interval_indicator(4, 4)
        assert f.values[0] == 1.0 and np.sum(f.values) == 1.0

    def test_measure(self):
        for n in range(5):
            assert integrate(interval_indicator(n, 4)) == 2.0**-n


class TestRoundingAndIO:
    def test_delta_rounded_to_grid(self):
        assert dyadic.round_delta_to_grid(1.0, 6) == 0
        assert dyadic.round_delta_to_grid(0.3, 6) == 2
        assert dyadic.round_delta_to_grid(1e-9, 6) == 6

    def test_text_roundtrip(self):
        f = rand_fn(7, 4)
        buf = io.StringIO()
        write_function(f, buf)
        buf.seek(0)
        g = read_function(buf)
        assert g.resolution == 4
        assert np.array_equal(g.values, f.values)

    def test_bad_header(self):
        with pytest.raises(ValueError):
            read_function(io.StringIO("bogus\n"))


class TestValidation:
    def test_resolution_cap(self, monkeypatch):
        monkeypatch.setenv("WALSHVP_MAX_N", "6")
        with pytest.raises(ValueError):
            dyadic.check_resolution(7)
        assert dyadic.check_resolution(6) == 6

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            SampledFunction(2, [1.0, math.nan, 0.0, 0.0])

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            SampledFunction(3, [0.0] * 7)

    def test_immutability(self):
        f = dyadic.constant(0.0, 2)
        with pytest.raises(AttributeError):
            f.resolution = 5
