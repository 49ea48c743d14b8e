import numpy as np
import pytest

from oracles import expected_max_enumeration, top_h_enumeration
from teamscore.analysis import random_pool, random_wb_pool
from teamscore.errors import IndexOutOfRange, InvalidH, InvalidParams, UnknownCandidate
from teamscore.rv import Candidate, WeightedBernoulli, deterministic, expectation, make_rv
from teamscore.team_value import (
    DependentEnsemble,
    TeamInstance,
    expected_max_wb,
    g_h_dependent,
    g_h_enumerate,
    g_h_exact,
    g_h_monte_carlo,
    omega_h_pointwise,
    product_ensemble,
)

COIN = make_rv([1], [0.5])


class TestExact:
    def test_two_coins_h1(self):
        assert g_h_exact([COIN, COIN], 1) == pytest.approx(0.75, abs=1e-15)

    def test_two_coins_h2_is_sum_of_means(self):
        assert g_h_exact([COIN, COIN], 2) == pytest.approx(1.0, abs=1e-15)

    def test_empty_team(self):
        assert g_h_exact([], 3) == 0.0

    def test_h_above_team_size(self):
        rvs = [make_rv([3, 1], [0.2, 0.5]), deterministic(2)]
        assert g_h_exact(rvs, 5) == pytest.approx(sum(map(expectation, rvs)))

    def test_deterministic_pool(self):
        assert g_h_exact([deterministic(c) for c in (3, 1, 2)], 2) == pytest.approx(5)

    def test_invalid_h(self):
        with pytest.raises(InvalidH):
            g_h_exact([COIN], 0)

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_product_space_enumeration(self, seed):
        rng = np.random.default_rng(seed)
        pool = random_pool(rng, 3, max_support=3)
        rvs = [c.rv for c in pool]
        for h in (1, 2, 3):
            want = top_h_enumeration(rvs, h)
            assert g_h_exact(rvs, h) == pytest.approx(want, abs=1e-12)
            assert g_h_enumerate(rvs, h) == pytest.approx(want, abs=1e-12)

    def test_accepts_candidates(self):
        pool = [Candidate("a", COIN), Candidate("b", COIN)]
        assert g_h_exact(pool, 1) == pytest.approx(0.75)

    def test_monotone_in_team_and_h(self):
        rng = np.random.default_rng(7)
        rvs = [c.rv for c in random_pool(rng, 6)]
        for h in (1, 2, 3):
            vals = [g_h_exact(rvs[:m], h) for m in range(7)]
            assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
        assert g_h_exact(rvs, 1) <= g_h_exact(rvs, 2) <= g_h_exact(rvs, 3)


class TestMonteCarlo:
    def test_deterministic_pool_is_exact(self):
        rvs = [deterministic(c) for c in (5.0, 4.0, 3.0)]
        mean, se = g_h_monte_carlo(rvs, 2, 1000, seed=3)
        assert mean == 9.0
        assert se == 0.0

    def test_two_coins(self):
        mean, se = g_h_monte_carlo([COIN, COIN], 1, 10**6, seed=0)
        assert abs(mean - 0.75) <= 3 * se

    def test_reproducible(self):
        rvs = [make_rv([3, 1], [0.3, 0.3]), COIN]
        assert g_h_monte_carlo(rvs, 1, 200_000, 11) == g_h_monte_carlo(rvs, 1, 200_000, 11)
        assert g_h_monte_carlo(rvs, 1, 200_000, 11) != g_h_monte_carlo(rvs, 1, 200_000, 12)

    def test_bad_samples(self):
        with pytest.raises(InvalidParams):
            g_h_monte_carlo([COIN], 1, 0, 0)


class TestExpectedMaxWB:
    def test_two_variable(self):
        got = expected_max_wb([WeightedBernoulli(0.5, 2), WeightedBernoulli(0.5, 1)])
        assert got == pytest.approx(1.25, abs=1e-15)

    def test_sure_thing(self):
        assert expected_max_wb([WeightedBernoulli(1.0, 3)]) == 3

    def test_empty(self):
        assert expected_max_wb([]) == 0

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_enumeration_and_g1(self, seed):
        pool = [wb for _, wb in random_wb_pool(np.random.default_rng(seed), 6)]
        want = expected_max_enumeration(pool)
        assert expected_max_wb(pool) == pytest.approx(want, abs=1e-12)
        assert g_h_exact([wb.to_rv() for wb in pool], 1) == pytest.approx(want, abs=1e-12)


class TestDependent:
    def test_single_outcome(self):
        ens = DependentEnsemble(((1.0, {"a": 3, "b": 2, "c": 1}),), ("a", "b", "c"))
        assert g_h_dependent(ens, ["a", "b", "c"], 2) == 5
        assert omega_h_pointwise(ens, ["a", "b", "c"], 2, 0) == 5

    def test_product_of_coins_matches_exact(self):
        ens = product_ensemble([Candidate("a", COIN), Candidate("b", COIN)])
        assert len(ens) == 4
        assert g_h_dependent(ens, ["a", "b"], 1) == pytest.approx(0.75)

    @pytest.mark.parametrize("seed", range(10))
    def test_product_ensemble_matches_exact(self, seed):
        pool = random_pool(np.random.default_rng(seed), 4, max_support=3)
        ens = product_ensemble(pool)
        ids = [c.id for c in pool]
        for h in (1, 2):
            assert g_h_dependent(ens, ids[:3], h) == pytest.approx(
                g_h_exact([c.rv for c in pool[:3]], h), abs=1e-12)

    def test_pointwise(self):
        ens = DependentEnsemble(((0.5, {"a": 5, "b": 4, "c": 3}), (0.5, {"a": 0, "b": 0, "c": 0})),
                                ("a", "b", "c"))
        assert omega_h_pointwise(ens, ["a", "b", "c"], 2, 0) == 9
        assert omega_h_pointwise(ens, [], 2, 0) == 0

    def test_errors(self):
        ens = product_ensemble([Candidate("a", COIN)])
        with pytest.raises(UnknownCandidate):
            g_h_dependent(ens, ["zz"], 1)
        with pytest.raises(IndexOutOfRange):
            omega_h_pointwise(ens, ["a"], 1, 5)
        with pytest.raises(InvalidParams):
            DependentEnsemble(((0.4, {"a": 1}),), ("a",))
        with pytest.raises(InvalidParams):
            DependentEnsemble(((1.0, {}),), ("a",))


class TestTeamInstance:
    def test_validation(self):
        pool = (Candidate("a", COIN), Candidate("b", COIN))
        with pytest.raises(InvalidParams):
            TeamInstance(pool, 1, 2)
        with pytest.raises(InvalidParams):
            TeamInstance((Candidate("a", COIN), Candidate("a", COIN)), 2, 1)

    def test_value_and_size(self):
        inst = TeamInstance((Candidate("a", COIN), Candidate("b", COIN)), 5, 1)
        assert inst.team_size == 2
        assert inst.value(["a", "b"]) == pytest.approx(0.75)
        with pytest.raises(UnknownCandidate):
            inst.value(["q"])
