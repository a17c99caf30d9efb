from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from negdep import (
    LogConcaveWeights,
    RankSequence,
    abc_law,
    convolve,
    is_log_concave,
    is_ulc,
    point_mass,
    product_bernoulli,
    rank_sequence,
    seq_algebra,
    uniform,
)
from negdep.models import binomial_rank_sequence, field_sensitive_cna_measure
from negdep.sequences import random_log_concave, random_ulc

import oracles

half = Fraction(1, 2)
seeds = st.integers(0, 2**32 - 1)


class TestLogConcave:
    def test_examples(self):
        assert is_log_concave([1, 2, 2, 1])
        v = is_log_concave([1, 1, 2])
        assert not v and v.index == 1
        assert not is_log_concave([1, 0, 1])

    def test_leading_and_trailing_zeros_allowed(self):
        assert is_log_concave([0, 0, 1, 3, 1, 0])

    @given(st.lists(st.integers(0, 9), min_size=1, max_size=8))
    def test_matches_oracle(self, s):
        assert bool(is_log_concave(s)) == oracles.log_concave_ok(s)

    @given(seeds)
    def test_random_generator_is_log_concave(self, seed):
        assert is_log_concave(random_log_concave(np.random.default_rng(seed), 7))


class TestUlc:
    def test_binomial_is_ulc_with_equality(self):
        r = binomial_rank_sequence(5, Fraction(1, 3))
        assert r.is_ulc()
        q = r.q
        assert all(q[k] ** 2 == q[k - 1] * q[k + 1] for k in range(1, 5))

    def test_flat_three(self):
        assert not is_ulc([Fraction(1, 3)] * 3)

    def test_product_of_bernoullis(self):
        mu = product_bernoulli([Fraction(1, 5), Fraction(2, 3), half, Fraction(1, 7)])
        assert rank_sequence(mu).is_ulc()

    @given(seeds, st.integers(1, 8))
    def test_ulc_implies_log_concave(self, seed, n):
        r = random_ulc(np.random.default_rng(seed), n)
        assert r.is_ulc() and r.is_log_concave()

    @given(st.lists(st.integers(0, 9), min_size=2, max_size=7).filter(any))
    def test_matches_oracle(self, a):
        assert bool(is_ulc(a)) == oracles.ulc_ok(a)


class TestAlgebra:
    def test_examples(self):
        assert convolve([1, 1], [1, 1]) == [1, 2, 1]
        assert seq_algebra("reverse", [1, 2, 3]) == [3, 2, 1]
        assert seq_algebra("pointwise", [1, 2], [3, 4]) == [3, 8]

    def test_unknown_op(self):
        with pytest.raises(ValueError):
            seq_algebra("shuffle", [1])

    @given(seeds, st.integers(1, 6), st.integers(1, 6))
    def test_preserves_log_concavity(self, seed, m, k):
        rng = np.random.default_rng(seed)
        s, t = random_log_concave(rng, m), random_log_concave(rng, k)
        assert is_log_concave(convolve(s, t))
        assert is_log_concave(seq_algebra("reverse", s))
        u = random_log_concave(rng, m)
        p = seq_algebra("pointwise", s, u)
        if any(p):
            assert is_log_concave(p)

    @given(seeds, st.integers(1, 4), st.integers(1, 4))
    def test_ulc_convolution(self, seed, n1, n2):
        rng = np.random.default_rng(seed)
        assert is_ulc(convolve(random_ulc(rng, n1).a, random_ulc(rng, n2).a))

    def test_two_by_two_ulc_convolution(self):
        a = RankSequence((Fraction(1, 4), half, Fraction(1, 4)))
        b = RankSequence((Fraction(1, 6), Fraction(1, 2), Fraction(1, 3)))
        assert is_ulc(convolve(a.a, b.a), 4)


class TestRankSequence:
    def test_top_point_mass(self):
        assert list(rank_sequence(point_mass("111")).a) == [0, 0, 0, 1]

    def test_worked_example(self):
        assert list(rank_sequence(field_sensitive_cna_measure(0)).a) == [Fraction(v, 57) for v in (16, 28, 12, 1)]

    def test_fair_coins_binomial(self):
        assert rank_sequence(uniform(4)).a == binomial_rank_sequence(4, half).a

    def test_must_be_normalized(self):
        with pytest.raises(ValueError):
            RankSequence((half, half, half))


class TestLogConcaveWeights:
    def test_rejects_holes(self):
        with pytest.raises(ValueError):
            LogConcaveWeights((1, 0, 1))

    def test_force(self):
        assert LogConcaveWeights((1, 0, 1), force=True).q == (1, 0, 1)


def _binomial_row(n):
    return [comb(n, k) for k in range(n + 1)]


class TestAbcLaw:
    def test_constant_c_is_independent(self):
        v = abc_law([1, 1], [1, 1], [1, 1, 1]).verdicts()
        assert v["X↓Y"] and v["Y↓X"]

    def test_x_increases_with_sum(self):
        assert abc_law([1, 1], [1, 2, 1], [1, 1, 1, 1]).verdicts()["X↑(X+Y)"]

    def test_cover_with_log_concave_sequences(self):
        law = abc_law([1, 3, 3, 1], [2, 3, 1], [1, 2, 2, 1, 1, 1])
        assert law.sum_covers()

    @given(seeds, st.integers(1, 5), st.integers(1, 5))
    def test_all_monotonicity_statements(self, seed, la, lb):
        rng = np.random.default_rng(seed)
        a = random_log_concave(rng, la, zero_ends=False)
        b = random_log_concave(rng, lb, zero_ends=False)
        c = random_log_concave(rng, la + lb - 1, zero_ends=False)
        assert all(abc_law(a, b, c).verdicts().values())

    def test_non_log_concave_c_can_break_negative_dependence(self):
        v = abc_law([1, 1], [1, 1], [1, 0, 1]).verdicts()
        assert not v["X↓Y"]
