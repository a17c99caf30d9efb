import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from negdep import (
    ExternalField,
    apply_field,
    bernoulli,
    condition,
    from_atoms,
    point_mass,
    product,
    product_bernoulli,
    project,
    rank_rescale,
    rank_sequence,
    relabel,
    stir,
    stir_continuous,
    symmetrize,
    truncate,
    uniform,
)
from negdep.models import field_sensitive_cna_measure, na_without_nlc_measure
from negdep.ops import exchangeable
from negdep.properties import check_ulc, stochastic_dominates
from negdep.sequences import convolve, random_ulc

import oracles
from conftest import positive_fractions, rational_measures

half = Fraction(1, 2)


class TestProject:
    def test_marginal_of_product(self):
        assert project(product_bernoulli([half, half]), [0]) == bernoulli(half)

    def test_worked_example_pair(self):
        # variables 2,3 of the three-variable example; atoms summed in pairs
        nu = project(field_sensitive_cna_measure(0), [1, 2])
        assert nu.weights.tolist() == [Fraction(v, 57) for v in (28, 12, 12, 5)]

    @given(rational_measures())
    def test_identity(self, mu):
        assert project(mu, range(mu.n)) == mu

    @given(rational_measures(min_n=2), st.data())
    def test_matches_oracle(self, mu, data):
        keep = sorted(data.draw(st.sets(st.integers(0, mu.n - 1), min_size=1)))
        ref = oracles.marginal(oracles.from_package(mu), keep)
        assert project(mu, keep).weights.tolist() == oracles.to_weights(ref, len(keep))

    def test_empty_keep_rejected(self):
        with pytest.raises(ValueError):
            project(uniform(2), [])


class TestCondition:
    def test_worked_example_first_variable(self):
        nu = condition(field_sensitive_cna_measure(0), {0: 1}, drop=True)
        assert nu.weights.tolist() == [Fraction(v, 21) for v in (12, 4, 4, 1)]

    def test_pattern_form(self):
        nu = condition(uniform(2), "*0")
        assert nu.atoms() == {"00": half, "10": half}

    def test_second_example_second_variable(self):
        eps = Fraction(1, 20)
        nu = condition(na_without_nlc_measure(eps), {1: 1}, drop=True)
        ref = [1, 10 * eps, 10 * eps, eps]  # X1X3 = 00, 01, 10, 11
        total = sum(ref)
        assert nu.atom("00") == ref[0] / total
        assert nu.atom("01") == ref[1] / total
        assert nu.atom("10") == ref[2] / total
        assert nu.atom("11") == ref[3] / total

    def test_zero_probability(self):
        with pytest.raises(ZeroDivisionError):
            condition(point_mass("00"), {0: 1})

    @given(rational_measures(min_n=2), st.data())
    def test_matches_oracle(self, mu, data):
        j = data.draw(st.integers(0, mu.n - 1))
        v = data.draw(st.integers(0, 1))
        ref = oracles.conditional(oracles.from_package(mu), {j: v})
        if ref is None:
            return
        assert condition(mu, {j: v}).weights.tolist() == oracles.to_weights(ref, mu.n)


class TestProduct:
    def test_two_bernoullis(self):
        p, q = Fraction(1, 3), Fraction(1, 5)
        mu = product(bernoulli(p), bernoulli(q))
        assert mu.atom("00") == (1 - p) * (1 - q)
        assert mu.atom("01") == (1 - p) * q
        assert mu.atom("10") == p * (1 - q)
        assert mu.atom("11") == p * q

    def test_point_mass_appends_coordinate(self):
        mu = from_atoms({"10": 1, "01": 2})
        nu = product(mu, point_mass("1"))
        assert nu.atoms() == {"101": Fraction(1, 3), "011": Fraction(2, 3)}

    def test_rank_sequence_convolves(self):
        r = rank_sequence(product(bernoulli(half), bernoulli(half)))
        assert list(r.a) == [Fraction(1, 4), half, Fraction(1, 4)]

    @given(rational_measures(max_n=2), rational_measures(max_n=2))
    def test_rank_convolution_property(self, mu, nu):
        assert list(rank_sequence(product(mu, nu)).a) == convolve(rank_sequence(mu).a, rank_sequence(nu).a)


class TestRelabel:
    @given(rational_measures(), st.data())
    def test_inverse(self, mu, data):
        perm = data.draw(st.permutations(range(mu.n)))
        inv = [perm.index(i) for i in range(mu.n)]
        assert relabel(relabel(mu, perm), inv) == mu

    def test_swap_product(self):
        mu = product_bernoulli([Fraction(1, 3), Fraction(3, 4)])
        assert relabel(mu, [1, 0]).means() == [Fraction(3, 4), Fraction(1, 3)]

    def test_not_a_permutation(self):
        with pytest.raises(ValueError):
            relabel(uniform(2), [0, 0])


class TestField:
    def test_odds_doubling(self):
        assert apply_field(bernoulli(half), [2]) == bernoulli(Fraction(2, 3))

    def test_all_ones(self):
        mu = field_sensitive_cna_measure(half)
        assert apply_field(mu, [1, 1, 1]) == mu

    def test_example_field_makes_positive_correlation(self):
        nu = apply_field(field_sensitive_cna_measure(half), [Fraction(2, 5), 1, 1])
        assert nu.covariance(1, 2) > 0

    def test_limits_condition(self):
        mu = field_sensitive_cna_measure(0)
        assert apply_field(mu, ExternalField([math.inf, 1, 1])) == condition(mu, {0: 1})

    @given(rational_measures(), st.data())
    def test_against_definition(self, mu, data):
        W = [data.draw(positive_fractions()) for _ in range(mu.n)]
        d = oracles.from_package(mu)
        ref = oracles.normalize({x: v * math.prod(w**b for w, b in zip(W, x)) for x, v in d.items()})
        assert apply_field(mu, W).weights.tolist() == oracles.to_weights(ref, mu.n)

    @given(rational_measures(max_n=2), rational_measures(max_n=2), st.data())
    def test_commutes_with_product(self, mu, nu, data):
        W1 = [data.draw(positive_fractions()) for _ in range(mu.n)]
        W2 = [data.draw(positive_fractions()) for _ in range(nu.n)]
        assert apply_field(product(mu, nu), W1 + W2) == product(apply_field(mu, W1), apply_field(nu, W2))

    @given(rational_measures(min_n=2), st.data())
    def test_projection_then_field_normal_form(self, mu, data):
        keep = sorted(data.draw(st.sets(st.integers(0, mu.n - 1), min_size=1)))
        W = [data.draw(positive_fractions()) for _ in keep]
        full = [1] * mu.n
        for j, w in zip(keep, W):
            full[j] = w
        assert apply_field(project(mu, keep), W) == project(apply_field(mu, full), keep)


class TestSymmetrize:
    def test_point_mass(self):
        assert symmetrize(point_mass("10")).atoms() == {"10": half, "01": half}

    def test_worked_example(self):
        r = rank_sequence(symmetrize(field_sensitive_cna_measure(0)))
        assert list(r.a) == [Fraction(v, 57) for v in (16, 28, 12, 1)]

    @given(rational_measures())
    def test_preserves_rank_sequence_and_fixed_point(self, mu):
        s = symmetrize(mu)
        assert rank_sequence(s).a == rank_sequence(mu).a
        assert symmetrize(s) == s


class TestStir:
    def test_zero_and_full(self):
        mu = from_atoms({"100": 1, "011": 3})
        assert stir(mu, [((0, 1), 0)]) == mu
        assert stir(mu, [((0, 1), 1)]) == from_atoms({"010": 1, "101": 3})

    def test_half(self):
        assert stir(point_mass("10"), [((0, 1), half)]).atoms() == {"10": half, "01": half}

    @given(rational_measures(min_n=2))
    def test_preserves_rank_sequence(self, mu):
        assert rank_sequence(stir(mu, [((0, 1), Fraction(1, 3))])).a == rank_sequence(mu).a

    def test_continuous_two_sites(self):
        for t in (0.1, 1.0, 7.0):
            nu = stir_continuous(point_mass("10"), {(0, 1): 1.0}, t)
            assert abs(nu.atom("10") - (1 + math.exp(-2 * t)) / 2) < 1e-12


class TestTruncateAndRescale:
    def test_truncate_uniform(self):
        assert truncate(uniform(2), 1, 1).atoms() == {"10": half, "01": half}

    def test_full_band(self):
        mu = field_sensitive_cna_measure(half)
        assert truncate(mu, 0, 3) == mu

    def test_rank_two_of_fair_coins(self):
        nu = truncate(uniform(3), 2, 2)
        assert set(nu.atoms().values()) == {Fraction(1, 3)} and len(nu.atoms()) == 3

    def test_rescale_identity_and_indicator(self):
        mu = field_sensitive_cna_measure(half)
        assert rank_rescale(mu, [1, 1, 1, 1]) == mu
        assert rank_rescale(mu, [0, 1, 1, 0]) == truncate(mu, 1, 2)

    def test_rescale_geometric_is_uniform_field(self):
        assert rank_rescale(uniform(3), [1, 2, 4, 8]) == product_bernoulli([Fraction(2, 3)] * 3)

    def test_rescale_rejects_non_log_concave(self):
        with pytest.raises(ValueError):
            rank_rescale(uniform(2), [1, 0, 1])

    @given(rational_measures(), st.data())
    def test_rescale_commutes_with_uniform_field(self, mu, data):
        w = data.draw(positive_fractions())
        q = [Fraction(1), *[Fraction(2)] * mu.n]  # log-concave: 1, 2, 2, ...
        assert rank_rescale(apply_field(mu, [w] * mu.n), q) == apply_field(rank_rescale(mu, q), [w] * mu.n)


class TestExchangeableIdentities:
    def test_field_on_prefix_stays_ulc(self, rng):
        for _ in range(30):
            n = int(rng.integers(3, 6))
            mu = exchangeable(random_ulc(rng, n).a)
            k = int(rng.integers(1, n))
            W = [Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 5))) for _ in range(k)] + [1] * (n - k)
            nu = project(apply_field(mu, W), range(k, n))
            assert symmetrize(nu) == nu
            assert check_ulc(nu).holds

    def test_rank_conditionals_increase_after_field(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 5))
            mu = exchangeable(random_ulc(rng, n, zero_ends=False).a)
            W = [Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 5))) for _ in range(n)]
            nu = apply_field(mu, W)
            for k in range(n):
                assert stochastic_dominates(truncate(nu, k + 1, k + 1), truncate(nu, k, k)).holds
