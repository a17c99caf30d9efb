from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negdep import (
    RankError,
    apply_field,
    check_association,
    check_bkrna,
    check_cna,
    check_jnrd,
    check_lattice,
    check_nc,
    check_ulc,
    check_upset_edge_correlation,
    condition,
    conditional_rank_monotone,
    from_weights,
    point_mass,
    product_bernoulli,
    stochastic_covers,
    stochastic_dominates,
    uniform,
)
from negdep.lattice import EventSet, box_product, enumerate_upsets
from negdep.models import (
    complete_graph,
    exchangeable_measure,
    field_sensitive_cna_measure,
    five_point_measure,
    na_without_nlc_measure,
    random_tree,
    spanning_tree_measure,
    tree_class_measure,
)
from negdep.sequences import random_rank_sequence, random_ulc

import oracles
from conftest import rational_measures

half = Fraction(1, 2)
PRODUCT = product_bernoulli([Fraction(1, 3), half, Fraction(4, 5)])
TRIANGLE = spanning_tree_measure(complete_graph(3))


def _hnlc(mu):
    return check_lattice(mu, "negative", hereditary=True)


class TestAgainstOracles:
    @given(rational_measures(max_n=3))
    def test_nlc(self, mu):
        assert check_lattice(mu, "negative").holds == oracles.lattice_ok(oracles.from_package(mu), mu.n, "negative")

    @given(rational_measures(max_n=3))
    def test_plc(self, mu):
        assert check_lattice(mu, "positive").holds == oracles.lattice_ok(oracles.from_package(mu), mu.n, "positive")

    @given(rational_measures(max_n=3))
    def test_hnlc(self, mu):
        assert _hnlc(mu).holds == oracles.hnlc_ok(oracles.from_package(mu), mu.n)

    @given(rational_measures(min_n=2, max_n=3))
    def test_na(self, mu):
        assert check_association(mu).holds == oracles.association_ok(oracles.from_package(mu), mu.n)

    @given(rational_measures(min_n=2, max_n=3))
    def test_pa_disjoint(self, mu):
        got = check_association(mu, "positive", disjoint_only=True).holds
        assert got == oracles.association_ok(oracles.from_package(mu), mu.n, "positive", True)

    @settings(max_examples=25)
    @given(rational_measures(min_n=2, max_n=3))
    def test_pa_full(self, mu):
        got = check_association(mu, "positive", disjoint_only=False).holds
        assert got == oracles.association_ok(oracles.from_package(mu), mu.n, "positive", False)

    @given(rational_measures(min_n=2, max_n=3))
    def test_cna(self, mu):
        assert check_cna(mu).holds == oracles.cna_ok(oracles.from_package(mu), mu.n)

    @given(rational_measures(min_n=2, max_n=3))
    def test_jnrd(self, mu):
        assert check_jnrd(mu).holds == oracles.jnrd_ok(oracles.from_package(mu), mu.n)

    @given(rational_measures(min_n=2, max_n=4))
    def test_nc(self, mu):
        assert check_nc(mu).holds == oracles.nc_ok(oracles.from_package(mu), mu.n)

    @given(rational_measures(max_n=4))
    def test_ulc(self, mu):
        d = oracles.from_package(mu)
        assert check_ulc(mu).holds == oracles.ulc_ok(oracles.rank_law(d, mu.n))

    @given(rational_measures(max_n=3), rational_measures(max_n=3))
    def test_dominates(self, mu, nu):
        if mu.n != nu.n:
            return
        ref = oracles.dominates(oracles.from_package(mu), oracles.from_package(nu), mu.n)
        assert stochastic_dominates(mu, nu, mode="enumerate").holds == ref
        assert stochastic_dominates(mu, nu, mode="flow").holds == ref

    @given(rational_measures(max_n=3), rational_measures(max_n=3))
    def test_covers(self, mu, nu):
        if mu.n != nu.n:
            return
        ref = oracles.covers(oracles.from_package(mu), oracles.from_package(nu), mu.n)
        assert stochastic_covers(mu, nu).holds == ref

    @settings(max_examples=15)
    @given(rational_measures(min_n=2, max_n=2, zeros=True))
    def test_bkr_all_events(self, mu):
        d = oracles.from_package(mu)
        ok = True
        for a in range(16):
            for b in range(16):
                A, B = EventSet(2, a), EventSet(2, b)
                box = box_product(A, B)
                lhs = sum(mu.weights[x] for x in box)
                if lhs > sum(mu.weights[x] for x in A) * sum(mu.weights[x] for x in B):
                    ok = False
        assert check_bkrna(mu, "all_events").holds == ok
        assert sum(d.values()) == 1


class TestHierarchy:
    @given(rational_measures(min_n=2, max_n=3))
    def test_proved_arrows(self, mu):
        cna, jnrd, hnlc, na = check_cna(mu), check_jnrd(mu), _hnlc(mu), check_association(mu)
        if cna.holds:
            assert jnrd.holds and na.holds
        if jnrd.holds:
            assert hnlc.holds

    @given(rational_measures(min_n=2, max_n=2))
    def test_na_is_nc_on_two_variables(self, mu):
        assert check_association(mu).holds == check_nc(mu).holds

    @given(rational_measures(max_n=3), rational_measures(max_n=3))
    def test_covers_implies_dominates(self, mu, nu):
        if mu.n == nu.n and stochastic_covers(mu, nu).holds:
            assert stochastic_dominates(mu, nu).holds


class TestLattice:
    def test_second_example_witness_has_x2_on(self):
        r = check_lattice(na_without_nlc_measure(Fraction(1, 200)), "negative")
        assert r.fails
        w = r.witness
        for c in (w["x"], w["y"], w["join"], w["meet"]):
            assert c[1] == "1"
        assert w["join_meet_product"] > w["pair_product"]

    def test_product_holds_both_signs(self):
        assert check_lattice(PRODUCT, "negative").holds
        assert check_lattice(PRODUCT, "positive").holds

    def test_first_example_hereditary(self):
        assert _hnlc(field_sensitive_cna_measure(half)).holds

    def test_float_tolerance(self):
        assert check_lattice(PRODUCT.to_float(), "negative").holds

    def test_size_limit(self):
        with pytest.raises(RankError):
            check_lattice(uniform(11), "negative", hereditary=True)


class TestAssociation:
    def test_second_example(self):
        for eps in (Fraction(1, 200), Fraction(1, 100), Fraction(1, 20)):
            assert check_association(na_without_nlc_measure(eps)).holds

    def test_triangle_tree(self):
        assert check_association(TRIANGLE).holds

    def test_product(self):
        assert check_association(PRODUCT).holds
        assert check_association(PRODUCT, "positive", disjoint_only=False).holds

    def test_witness_is_positive_covariance(self):
        mu = from_weights([1, 0, 0, 1])
        r = check_association(mu)
        w = r.witness
        assert r.fails and w["P(F and G)"] > w["P(F)"] * w["P(G)"]

    def test_five_point_is_not_negatively_associated(self):
        mu = five_point_measure()
        assert mu.covariance(0, 1) > 0
        assert check_association(mu).fails


class TestCnaJnrd:
    @pytest.mark.parametrize("eps", [0, Fraction(2, 5), Fraction(4, 5)])
    def test_first_example_cna(self, eps):
        assert check_cna(field_sensitive_cna_measure(eps)).holds

    def test_first_example_cna_fails_above_threshold(self):
        assert check_cna(field_sensitive_cna_measure(Fraction(81, 100))).fails

    def test_first_example_jnrd(self):
        assert check_jnrd(field_sensitive_cna_measure(half)).holds

    def test_second_example_small_eps(self):
        mu = na_without_nlc_measure(Fraction(1, 200))
        assert check_cna(mu).fails and check_jnrd(mu).fails

    def test_class_s_trees(self, rng):
        for _ in range(10):
            mu = tree_class_measure(random_tree(rng, int(rng.integers(2, 5))))
            assert check_jnrd(mu).holds

    def test_product(self):
        assert check_cna(PRODUCT).holds and check_jnrd(PRODUCT).holds

    def test_exchangeable_equivalence(self, rng):
        for _ in range(40):
            n = int(rng.integers(2, 5))
            seq = random_ulc(rng, n) if rng.random() < 0.5 else random_rank_sequence(rng, n)
            mu = exchangeable_measure(seq)
            u = check_ulc(mu).holds
            assert u == _hnlc(mu).holds == check_cna(mu).holds == check_jnrd(mu).holds


class TestNc:
    def test_triangle(self):
        assert check_nc(TRIANGLE).holds
        assert TRIANGLE.covariance(0, 1) == Fraction(1, 3) - Fraction(4, 9)

    def test_field_example_fails_on_pair(self):
        r = check_nc(apply_field(field_sensitive_cna_measure(half), [Fraction(2, 5), 1, 1]))
        assert r.fails and r.witness["pair"] == [1, 2]
        assert r.witness["covariance"] > 0

    def test_needs_two_variables(self):
        with pytest.raises(ValueError):
            check_nc(uniform(1))


class TestOrders:
    def test_top_point_mass_dominates(self):
        top = point_mass("111")
        assert stochastic_dominates(top, field_sensitive_cna_measure(half)).holds

    def test_five_point(self):
        mu = five_point_measure()
        lo, hi = condition(mu, {2: 0}, drop=True), condition(mu, {2: 1}, drop=True)
        assert stochastic_dominates(lo, hi).holds
        r = stochastic_covers(lo, hi)
        assert r.fails and r.witness["mu_mass"] > r.witness["nu_mass"]

    def test_self_cover(self):
        mu = field_sensitive_cna_measure(half)
        assert stochastic_covers(mu, mu).holds

    def test_dominance_witness_upset(self):
        r = stochastic_dominates(point_mass("00"), point_mass("11"))
        assert r.fails and r.witness["nu"] > r.witness["mu"]

    def test_flow_mode_beyond_enumeration(self):
        mu = product_bernoulli([Fraction(2, 3)] * 7)
        nu = product_bernoulli([Fraction(1, 3)] * 7)
        assert stochastic_dominates(mu, nu).holds
        assert stochastic_dominates(nu, mu).fails

    def test_rank_monotone(self, rng):
        assert conditional_rank_monotone(PRODUCT).holds
        for _ in range(5):
            assert conditional_rank_monotone(exchangeable_measure(random_ulc(rng, 4))).holds
            assert conditional_rank_monotone(tree_class_measure(random_tree(rng, 4))).holds


class TestEdgeCorrelationAndBox:
    def test_triangle_and_product(self):
        assert check_upset_edge_correlation(TRIANGLE).holds
        assert check_upset_edge_correlation(PRODUCT).holds

    def test_first_example(self):
        assert check_upset_edge_correlation(field_sensitive_cna_measure(0)).holds

    def test_edge_correlation_oracle(self):
        mu = from_weights([0, 3, 0, 0, 0, 0, 5, 0])
        d = oracles.from_package(mu)
        expected = True
        for U in oracles.all_upsets(3):
            pu = oracles.prob(d, lambda x: x in U)
            if not any(oracles.prob(d, lambda x: x in U and x[e]) >= pu * oracles.prob(d, lambda x: x[e]) for e in range(3)):
                expected = False
        assert check_upset_edge_correlation(mu).holds == expected

    def test_bkr_product_and_point_mass(self):
        assert check_bkrna(product_bernoulli([half, half]), "all_events").holds
        assert check_bkrna(point_mass("101"), "all_events").holds

    def test_bkr_triangle_upsets(self):
        assert check_bkrna(TRIANGLE, "upsets_only").holds

    def test_bkr_upsets_vs_pairwise_box(self):
        mu = from_weights([1, 2, 2, 0, 3, 1, 0, 1])
        fam = enumerate_upsets(3)
        ok = all(
            sum(mu.weights[x] for x in box_product(a, b)) <= mu.prob(a.indicator()) * mu.prob(b.indicator())
            for a in fam
            for b in fam
        )
        assert check_bkrna(mu, "upsets_only").holds == ok

    def test_size_limits(self):
        with pytest.raises(RankError):
            check_bkrna(uniform(4), "all_events")
        with pytest.raises(ValueError):
            check_bkrna(uniform(2), "sometimes")

    def test_float_and_rational_agree_away_from_ties(self):
        for w in np.random.default_rng(3).integers(1, 9, size=(20, 8)):
            mu = from_weights([int(v) for v in w])
            assert check_cna(mu).verdict == check_cna(mu.to_float()).verdict
