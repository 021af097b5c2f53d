import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from strategies import counts_lists, table_of, tables
from tdndiv import (
    EmptyTable,
    Mode,
    SubsampleSpec,
    UndefinedForSingleton,
    brillouin_h,
    e_var,
    from_counts,
    mcintosh_e,
    shannon_h,
    shannon_j,
    simpson_lambda,
    suite,
)
from tdndiv.metrics import e_var_from_abundances

AB = from_counts([("a", 2), ("b", 1)])
UNIFORM4 = from_counts([(k, 2) for k in "abcd"])


class TestShannon:
    def test_uniform(self):
        assert shannon_h(UNIFORM4) == pytest.approx(math.log(4), rel=1e-14)

    def test_two(self):
        # -(2/3)ln(2/3) - (1/3)ln(1/3)
        assert shannon_h(AB) == pytest.approx(0.636514, abs=5e-7)
        assert shannon_h(AB) == pytest.approx(oracles.shannon([2, 1]), rel=1e-14)

    def test_single(self):
        assert shannon_h(from_counts([("a", 17)])) == 0.0

    def test_truncated_total(self):
        t = from_counts([("a", 10)])
        assert shannon_h(t, 55) == pytest.approx(-(10 / 55) * math.log(10 / 55), rel=1e-14)

    def test_total_smaller_than_table_rejected(self):
        with pytest.raises(ValueError):
            shannon_h(AB, 2)

    def test_permutation_invariance_large(self):
        rng = random.Random(3)
        counts = [rng.randint(1, 5000) for _ in range(150_000)]
        shuffled = counts[:]
        rng.shuffle(shuffled)
        a = shannon_h(from_counts((f"x{i}", c) for i, c in enumerate(counts)))
        b = shannon_h(from_counts((f"y{i}", c) for i, c in enumerate(shuffled)))
        assert abs(a - b) <= 1e-12 * a


class TestPielou:
    def test_uniform(self):
        assert shannon_j(from_counts([(str(i), 3) for i in range(9)])) == pytest.approx(1, rel=1e-14)

    def test_two(self):
        assert shannon_j(AB) == pytest.approx(0.918296, abs=5e-7)

    def test_singleton(self):
        with pytest.raises(UndefinedForSingleton):
            shannon_j(from_counts([("a", 4)]))


class TestBrillouin:
    @pytest.mark.parametrize(
        "counts, expected",
        [([2, 1], math.log(3) / 3), ([1, 1], math.log(2) / 2), ([7], 0.0), ([1], 0.0)],
    )
    def test_values(self, counts, expected):
        assert brillouin_h(table_of(counts)) == pytest.approx(expected, rel=1e-13, abs=1e-15)

    def test_exact_factorial_oracle(self):
        rng = random.Random(11)
        for _ in range(200):
            counts = [rng.randint(1, 20) for _ in range(rng.randint(1, 6))]
            if sum(counts) > 20:
                continue
            assert brillouin_h(table_of(counts)) == pytest.approx(oracles.brillouin(counts), rel=1e-12, abs=1e-15)

    def test_large_counts_finite(self):
        t = table_of([10**9, 3 * 10**8, 5])
        assert 0 < brillouin_h(t) <= shannon_h(t)


class TestSimpson:
    def test_values(self):
        assert simpson_lambda(UNIFORM4) == 0.25
        assert simpson_lambda(AB) == pytest.approx(5 / 9, rel=1e-15)
        assert simpson_lambda(from_counts([("a", 9)])) == 1.0

    @given(counts_lists(max_size=6, max_count=8))
    def test_equals_collision_probability(self, counts):
        exact = oracles.simpson_by_enumeration(counts)
        assert exact == oracles.simpson(counts)
        assert simpson_lambda(table_of(counts)) == float(exact)

    def test_truncated_total(self):
        assert simpson_lambda(from_counts([("a", 10)]), 55) == float(Fraction(100, 3025))


class TestMcIntosh:
    def test_values(self):
        assert mcintosh_e(UNIFORM4) == pytest.approx(1, rel=1e-14)
        assert mcintosh_e(AB) == pytest.approx((3 - math.sqrt(5)) / (3 - 3 / math.sqrt(2)), rel=1e-14)
        assert mcintosh_e(AB) == pytest.approx(0.86940, abs=1e-5)

    def test_singleton(self):
        with pytest.raises(UndefinedForSingleton):
            mcintosh_e(from_counts([("a", 4)]))


class TestEvar:
    def test_uniform(self):
        assert e_var(UNIFORM4) == 1.0

    def test_one_two_four(self):
        t = from_counts([("a", 1), ("b", 2), ("c", 4)])
        assert e_var(t) == pytest.approx(oracles.e_var([1, 2, 4]), rel=1e-13)
        assert e_var(t) == pytest.approx(0.8027, abs=5e-5)

    def test_scaled_counts_identical(self):
        assert e_var(from_counts([("a", 10), ("b", 20), ("c", 40)])) == e_var(from_counts([("a", 1), ("b", 2), ("c", 4)]))

    @given(counts_lists(max_size=40, max_count=10**6))
    def test_count_and_proportion_forms_identical(self, counts):
        n = sum(counts)
        from_props = e_var_from_abundances(Fraction(c, n) for c in counts)
        assert e_var(table_of(counts)) == from_props

    def test_rejects_empty_and_nonpositive(self):
        with pytest.raises(EmptyTable):
            e_var_from_abundances([])
        with pytest.raises(ValueError):
            e_var_from_abundances([1, 0])


class TestProperties:
    @given(tables(), st.sampled_from([2, 10, 1000]))
    def test_scale_invariance(self, t, k):
        scaled = from_counts((cid, k * c) for cid, c in t.items())
        assert shannon_h(scaled) == pytest.approx(shannon_h(t), abs=1e-12)
        assert simpson_lambda(scaled) == pytest.approx(simpson_lambda(t), abs=1e-12)
        assert e_var(scaled) == pytest.approx(e_var(t), abs=1e-12)
        if t.richness > 1:
            assert shannon_j(scaled) == pytest.approx(shannon_j(t), abs=1e-12)
            assert mcintosh_e(scaled) == pytest.approx(mcintosh_e(t), abs=1e-12)

    @given(tables())
    def test_bounds(self, t):
        r = t.richness
        h = shannon_h(t)
        assert 0 <= h <= math.log(r) * (1 + 1e-12)
        lam = simpson_lambda(t)
        assert 1 / r * (1 - 1e-12) <= lam <= 1
        assert 0 < e_var(t) <= 1
        if r > 1:
            assert -1e-12 <= shannon_j(t) <= 1 + 1e-12
        assert brillouin_h(t) <= h

    @given(counts_lists(max_size=10, max_count=20))
    def test_oracle_equivalence(self, counts):
        t = table_of(counts)
        assert shannon_h(t) == pytest.approx(oracles.shannon(counts), rel=1e-10, abs=1e-15)
        assert brillouin_h(t) == pytest.approx(oracles.brillouin(counts), rel=1e-10, abs=1e-15)
        assert simpson_lambda(t) == float(oracles.simpson(counts))
        assert e_var(t) == pytest.approx(oracles.e_var(counts), rel=1e-10)
        if len(counts) > 1:
            assert shannon_j(t) == pytest.approx(oracles.pielou(counts), rel=1e-10, abs=1e-15)
            assert mcintosh_e(t) == pytest.approx(oracles.mcintosh(counts), rel=1e-10)

    @given(st.integers(2, 50), st.integers(1, 100))
    def test_uniform_extremes(self, r, c):
        t = table_of([c] * r)
        assert shannon_h(t) == pytest.approx(math.log(r), rel=1e-12)
        assert simpson_lambda(t) == pytest.approx(1 / r, rel=1e-12)
        assert shannon_j(t) == pytest.approx(1, rel=1e-12)
        assert mcintosh_e(t) == pytest.approx(1, rel=1e-12)
        assert e_var(t) == 1.0


class TestSuite:
    def test_uniform_full(self):
        s = suite(UNIFORM4)
        assert s.shannon_h == pytest.approx(1.386294, abs=5e-7)
        assert s.shannon_j == pytest.approx(1, rel=1e-14)
        assert s.simpson_lambda == 0.25
        assert s.mcintosh_e == pytest.approx(1, rel=1e-14)
        assert s.e_var == 1.0
        assert s.brillouin_h == pytest.approx(oracles.brillouin([2, 2, 2, 2]), rel=1e-13)
        assert s.simpson_lambda_e4 == 2500.0

    def test_decile_truncated(self):
        t = from_counts((f"c{i}", 11 - i) for i in range(1, 11))
        s = suite(t, SubsampleSpec("0.1"))
        p = 10 / 55
        assert s.shannon_h == pytest.approx(-p * math.log(p), rel=1e-14)
        assert s.simpson_lambda == pytest.approx(p * p, rel=1e-15)
        assert s.shannon_j is None and s.mcintosh_e is None
        assert s.e_var == 1.0
        assert s.brillouin_h == 0.0

    def test_full_modes_agree(self):
        t = table_of([9, 4, 4, 1, 1, 1])
        assert suite(t, SubsampleSpec(1, Mode.TRUNCATED)) == suite(t, SubsampleSpec(1, Mode.RENORMALIZED))

    def test_renormalized_raises_lambda(self):
        t = table_of([50, 30, 10, 5, 3, 1, 1, 1, 1, 1])
        trunc = suite(t, SubsampleSpec("0.2", Mode.TRUNCATED))
        renorm = suite(t, SubsampleSpec("0.2", Mode.RENORMALIZED))
        full = suite(t)
        assert trunc.simpson_lambda < full.simpson_lambda < renorm.simpson_lambda
        assert trunc.brillouin_h == renorm.brillouin_h
        assert trunc.e_var == renorm.e_var

    def test_as_dict_keys(self):
        assert set(suite(AB).as_dict()) == {
            "shannon_h", "shannon_j", "brillouin_h", "simpson_lambda", "mcintosh_e", "e_var",
        }
