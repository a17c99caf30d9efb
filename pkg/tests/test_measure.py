import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from negdep import FLOAT, RATIONAL, BinaryMeasure, ExternalField, bernoulli, from_atoms, point_mass, product_bernoulli, uniform
from negdep.measure import BackendError, from_tensor, to_tensor

from conftest import rational_measures


class TestConstruction:
    def test_rational_must_sum_to_one(self):
        with pytest.raises(ValueError):
            BinaryMeasure([Fraction(1, 2), Fraction(1, 3)])

    def test_normalize(self):
        mu = BinaryMeasure([1, 3], normalize=True)
        assert mu.weights.tolist() == [Fraction(1, 4), Fraction(3, 4)]
        assert mu.backend == RATIONAL

    def test_float_backend_inferred(self):
        mu = BinaryMeasure([0.25, 0.75])
        assert mu.backend == FLOAT and not mu.exact

    def test_length_must_be_power_of_two(self):
        with pytest.raises(ValueError):
            BinaryMeasure([1, 1, 1], normalize=True)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            BinaryMeasure([2, -1])

    def test_empty_support_rejected(self):
        with pytest.raises(ValueError):
            BinaryMeasure([0, 0], normalize=True)

    def test_unknown_backend(self):
        with pytest.raises(BackendError):
            BinaryMeasure([1], backend="decimal")

    def test_immutable(self):
        mu = uniform(2)
        with pytest.raises(ValueError):
            mu.weights[0] = 0

    def test_from_atoms_and_strings(self):
        mu = from_atoms({"10": 1, "01": 1})
        assert mu.atom("10") == Fraction(1, 2)
        assert mu.atoms() == {"10": Fraction(1, 2), "01": Fraction(1, 2)}

    def test_point_mass(self):
        mu = point_mass("101")
        assert mu.support() == [0b101]

    def test_product_bernoulli_bit_order(self):
        mu = product_bernoulli([Fraction(1, 3), Fraction(1, 2)])
        assert mu.atom("10") == Fraction(1, 3) * Fraction(1, 2)
        assert mu.means() == [Fraction(1, 3), Fraction(1, 2)]

    def test_bernoulli(self):
        assert bernoulli(Fraction(1, 5)).weights.tolist() == [Fraction(4, 5), Fraction(1, 5)]


class TestQueries:
    def test_covariance_of_product_is_zero(self):
        mu = product_bernoulli([Fraction(1, 3), Fraction(2, 7), Fraction(1, 2)])
        assert all(mu.covariance(i, j) == 0 for i in range(3) for j in range(3) if i != j)

    def test_prob_with_callable(self):
        mu = uniform(3)
        assert mu.prob(lambda x: x & 1) == Fraction(1, 2)

    def test_tv_distance(self):
        assert point_mass("0").tv_distance(point_mass("1")) == 1

    @given(rational_measures(max_n=4))
    def test_tensor_round_trip(self, mu):
        t = to_tensor(mu.weights, mu.n)
        assert np.array_equal(from_tensor(t, mu.n), mu.weights)

    @given(rational_measures())
    def test_tensor_axis_is_variable(self, mu):
        t = mu.tensor()
        for j in range(mu.n):
            axes = tuple(i for i in range(mu.n) if i != j)
            marg = t.sum(axis=axes) if axes else t
            assert marg[1] == mu.means()[j]

    @given(rational_measures())
    def test_float_rational_round_trip(self, mu):
        assert mu.to_float().to_rational().allclose(mu)


class TestExternalField:
    def test_limits(self):
        W = ExternalField([0, 1, math.inf, Fraction(2)])
        assert W.limits == {0: 0, 2: 1}
        assert W.finite == {1: 1, 3: 2}
        assert W.exact

    def test_string_inf(self):
        assert ExternalField(["inf", "1/2"]).values == (math.inf, Fraction(1, 2))

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            ExternalField([-1])

    def test_conditioning(self):
        assert ExternalField.conditioning(3, {1: 1}).values == (1, math.inf, 1)
