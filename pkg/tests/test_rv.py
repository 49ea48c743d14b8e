import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teamscore.errors import (
    InvalidAlpha,
    InvalidParams,
    LengthMismatch,
    MassExceedsOne,
    NegativeValue,
    NonPositiveMass,
)
from teamscore.rv import (
    WeightedBernoulli,
    as_weighted_bernoulli,
    conditional_quantile_score,
    deterministic,
    expectation,
    make_rv,
    potential_score,
    split_top_quantile,
)


@st.composite
def rvs(draw, max_support=5):
    n = draw(st.integers(1, max_support))
    values = draw(st.lists(st.floats(0.01, 100), min_size=n, max_size=n))
    weights = draw(st.lists(st.floats(0.01, 1), min_size=n, max_size=n))
    total = draw(st.floats(0.05, 1))
    masses = [w / sum(weights) * total for w in weights]
    return make_rv(values, masses)


@st.composite
def kh(draw):
    k = draw(st.integers(1, 12))
    return k, draw(st.integers(1, k))


class TestMakeRV:
    def test_sorts_and_keeps_residual(self):
        rv = make_rv([1, 2], [0.3, 0.3])
        assert rv.values == (2, 1)
        assert rv.masses == (0.3, 0.3)
        assert rv.residual == pytest.approx(0.4)

    def test_merges_duplicates(self):
        rv = make_rv([2, 2], [0.2, 0.2])
        assert rv.values == (2,)
        assert rv.masses == (pytest.approx(0.4),)

    def test_zero_value_goes_to_residual(self):
        rv = make_rv([0, 3], [0.5, 0.25])
        assert rv.values == (3,)
        assert rv.residual == pytest.approx(0.75)

    @pytest.mark.parametrize("values, masses, err", [
        ([1], [1.5], MassExceedsOne),
        ([1, 2], [0.1], LengthMismatch),
        ([-1], [0.5], NegativeValue),
        ([1], [0.0], NonPositiveMass),
        ([1], [-0.1], NonPositiveMass),
        ([float("nan")], [0.5], NegativeValue),
    ])
    def test_validation(self, values, masses, err):
        with pytest.raises(err):
            make_rv(values, masses)

    def test_cum_masses_clamped(self):
        rv = make_rv([3, 2, 1], [0.5, 0.3, 0.2 + 1e-13])
        assert rv.cum_masses[-1] <= 1.0


class TestExpectation:
    def test_single_atom(self):
        assert expectation(make_rv([1], [0.5])) == 0.5

    def test_two_atoms(self):
        assert expectation(make_rv([2, 1], [0.25, 0.25])) == 0.75

    def test_deterministic(self):
        assert expectation(deterministic(3.7)) == 3.7


class TestPotentialScore:
    @pytest.mark.parametrize("k, h", [(1, 1), (5, 2), (7, 3)])
    def test_deterministic(self, k, h):
        assert potential_score(deterministic(2.5), k, h) == pytest.approx(2.5, abs=1e-12)

    def test_fair_coin_pair(self):
        assert potential_score(make_rv([1], [0.5]), 2, 1) == pytest.approx(0.75, abs=1e-12)

    def test_monte_carlo_oracle(self):
        # max of two independent copies of (2 w.p. 1/2, 1 w.p. 1/2), 1e7 paired samples
        rng = np.random.default_rng(20240611)
        draws = rng.choice([2.0, 1.0], size=(10**7, 2)).max(axis=1)
        mean, se = draws.mean(), draws.std(ddof=1) / math.sqrt(draws.size)
        got = potential_score(make_rv([2, 1], [0.5, 0.5]), 2, 1)
        assert abs(got - mean) <= 3 * se
        assert got == pytest.approx(1.75, abs=1e-12)

    def test_h_equals_k_is_expectation(self):
        rv = make_rv([4, 2, 1], [0.1, 0.3, 0.2])
        assert potential_score(rv, 3, 3) == pytest.approx(expectation(rv), abs=1e-12)

    def test_fractional_copies_between_integers(self):
        rv = make_rv([4, 1], [0.2, 0.3])
        assert potential_score(rv, 2, 1) < potential_score(rv, 5, 2) < potential_score(rv, 3, 1)

    @pytest.mark.parametrize("k, h", [(2, 3), (0, 0), (3, 0)])
    def test_invalid_params(self, k, h):
        with pytest.raises(InvalidParams):
            potential_score(deterministic(1), k, h)

    @settings(max_examples=200, deadline=None)
    @given(rvs(), kh())
    def test_between_mean_and_max(self, rv, params):
        k, h = params
        f = potential_score(rv, k, h)
        assert expectation(rv) - 1e-9 <= f <= rv.max_value + 1e-9


class TestSplitTopQuantile:
    def test_boundary_atom_split(self):
        s = split_top_quantile(make_rv([2, 1], [0.5, 0.5]), 0.25)
        assert s.top.values == (2,)
        assert s.top.masses == (pytest.approx(0.25),)
        assert s.tail.values == (2, 1)
        assert s.tail.masses == pytest.approx((0.25, 0.5))

    def test_exact_boundary(self):
        s = split_top_quantile(make_rv([3, 2, 1], [0.1, 0.1, 0.1]), 0.2)
        assert s.top.values == (3, 2)
        assert s.top.masses == pytest.approx((0.1, 0.1))
        assert s.tail.values == (1,)

    def test_top_reaches_into_residual(self):
        s = split_top_quantile(make_rv([5], [0.1]), 0.3)
        assert s.top.values == (5,)
        assert s.top_zero_mass == pytest.approx(0.2)
        assert s.top_mass == pytest.approx(0.3)
        assert s.tail.values == ()

    @pytest.mark.parametrize("alpha", [1.5, 0.0, 1.0, -0.1])
    def test_invalid_alpha(self, alpha):
        with pytest.raises(InvalidAlpha):
            split_top_quantile(deterministic(1), alpha)

    @settings(max_examples=200, deadline=None)
    @given(rvs(), st.floats(0.001, 0.999))
    def test_masses_partition(self, rv, alpha):
        s = split_top_quantile(rv, alpha)
        assert s.top_mass == pytest.approx(alpha, abs=1e-12)
        assert s.top.total_mass + s.tail.total_mass == pytest.approx(rv.total_mass, abs=1e-12)
        assert expectation(s.top) + expectation(s.tail) == pytest.approx(expectation(rv), abs=1e-9)
        if s.tail.values:
            assert min(s.top.values or (math.inf,)) >= s.tail.max_value


class TestConditionalScore:
    def test_deterministic(self):
        assert conditional_quantile_score(deterministic(3), 4, 1) == pytest.approx(3)

    def test_top_quartile(self):
        assert conditional_quantile_score(make_rv([2, 1], [0.5, 0.5]), 4, 1) == pytest.approx(2)

    def test_split_atom(self):
        # (0.1*4 + 0.4*2) / 0.5
        got = conditional_quantile_score(make_rv([4, 2], [0.1, 0.9]), 2, 1)
        assert got == pytest.approx(2.4, abs=1e-12)

    def test_h_equals_k(self):
        rv = make_rv([4, 2], [0.1, 0.5])
        assert conditional_quantile_score(rv, 3, 3) == pytest.approx(expectation(rv))

    @settings(max_examples=200, deadline=None)
    @given(rvs(), kh())
    def test_at_least_mean(self, rv, params):
        k, h = params
        assert conditional_quantile_score(rv, k, h) >= expectation(rv) - 1e-9


class TestWeightedBernoulli:
    def test_mean_and_round_trip(self):
        wb = WeightedBernoulli(0.25, 4.0)
        assert wb.mean == 1.0
        back = as_weighted_bernoulli(wb.to_rv())
        assert back == wb

    def test_two_atoms_is_not_bernoulli(self):
        assert as_weighted_bernoulli(make_rv([2, 1], [0.2, 0.2])) is None
