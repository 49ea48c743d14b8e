"""Randomized and exhaustive checks of the structural claims behind test-score selection.

Every check returns a violation count (or a report carrying one); zero is
the pass condition. Inequalities are compared with an absolute slack of
``TOL``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, InvalidParams
from .rv import (
    Candidate,
    DiscreteRV,
    WeightedBernoulli,
    expectation,
    make_rv,
    potential_score,
    split_top_quantile,
)
from .selection import (
    brute_force_optimal,
    greedy_hill_climb,
    method_bound,
    select_by_test,
)
from .team_value import (
    DependentEnsemble,
    TeamInstance,
    expected_max_wb,
    g_h_exact,
    omega_h_pointwise,
)

TOL = 1e-9
SHORTFALL = 1 - math.exp(-0.5)
TEST_METHODS = ("canonical", "potential", "conditional", "greedy")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def random_rv(rng: np.random.Generator, max_support: int = 5, max_value: float = 10.0,
              mass_range: tuple[float, float] = (0.2, 1.0)) -> DiscreteRV:
    """Support size uniform on 1..max_support, values uniform(0, max_value),
    Dirichlet(1) masses scaled to a total drawn uniformly from ``mass_range``."""
    m = int(rng.integers(1, max_support + 1))
    values = rng.uniform(0, max_value, m)
    masses = rng.dirichlet(np.ones(m)) * rng.uniform(*mass_range)
    return make_rv(values, masses)


def random_pool(rng: np.random.Generator, n: int, **kwargs) -> list[Candidate]:
    width = len(str(n - 1))
    return [Candidate(f"c{i:0{width}d}", random_rv(rng, **kwargs)) for i in range(n)]


def random_wb_pool(rng: np.random.Generator, n: int,
                   max_value: float = 10.0) -> list[tuple[str, WeightedBernoulli]]:
    width = len(str(n - 1))
    return [(f"w{i:0{width}d}", WeightedBernoulli(float(rng.random()), float(rng.uniform(0, max_value))))
            for i in range(n)]


# --- submodularity -----------------------------------------------------------------

SetFunction = Callable[[Sequence[str], int], float]


def edge_count_function(edges: Sequence[tuple[str, str]]) -> SetFunction:
    """Induced edge count, ignoring the outcome; supermodular, used as a detector control."""
    edge_set = {frozenset(e) for e in edges}

    def count(team, outcome_index):
        return sum(1 for a, b in combinations(team, 2) if frozenset((a, b)) in edge_set)
    return count


def triangle_control() -> tuple[DependentEnsemble, SetFunction]:
    ids = ("a", "b", "c")
    ens = DependentEnsemble(((1.0, {i: 0.0 for i in ids}),), ids)
    return ens, edge_count_function([("a", "b"), ("b", "c"), ("a", "c")])


def _sample_chain(rng, ids: Sequence[str]):
    """Random (A, y, x) with y, x distinct and outside A."""
    order = list(rng.permutation(len(ids)))
    y, x = ids[order[0]], ids[order[1]]
    rest = [ids[i] for i in order[2:]]
    a = [i for i in rest if rng.random() < 0.5]
    return a, y, x


def check_pointwise_submodularity(ensemble: DependentEnsemble, h: int, trials: int, seed: int,
                                  set_fn: Optional[SetFunction] = None) -> int:
    """Sampled diminishing-returns checks of the top-h sum at single outcomes.

    With S = A + {y} and x outside S, counts trials where
    f(S + x) - f(S) > f(A + x) - f(A) + TOL.
    """
    if set_fn is None:
        set_fn = lambda team, w: omega_h_pointwise(ensemble, team, h, w)  # noqa: E731
    ids = ensemble.candidate_ids
    if len(ids) < 2:
        return 0
    rng = np.random.default_rng(seed)
    violations = 0
    for _ in range(trials):
        w = int(rng.integers(len(ensemble)))
        a, y, x = _sample_chain(rng, ids)
        s = a + [y]
        gain_s = set_fn(s + [x], w) - set_fn(s, w)
        gain_a = set_fn(a + [x], w) - set_fn(a, w)
        if gain_s > gain_a + TOL:
            violations += 1
    return violations


def check_submodularity_expectation(pool: Sequence[Candidate], h: int, trials: int,
                                    seed: int) -> int:
    """The same sampled inequality with g_h of an independent pool."""
    if len(pool) < 2:
        return 0
    rng = np.random.default_rng(seed)
    lookup = {c.id: c.rv for c in pool}
    value = lambda team: g_h_exact([lookup[i] for i in team], h)  # noqa: E731
    violations = 0
    for _ in range(trials):
        a, y, x = _sample_chain(rng, list(lookup))
        s = a + [y]
        if value(s + [x]) - value(s) > value(a + [x]) - value(a) + TOL:
            violations += 1
    return violations


# --- lemma and theorem bounds ---------------------------------------------------------

@dataclass
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    holds: bool
    applicable: bool = True


def _le(name: str, lhs: float, rhs: float) -> BoundCheck:
    return BoundCheck(name, lhs, rhs, lhs <= rhs + TOL)


def check_increasing_functions(exponents: Sequence[float] = (1, 2, 10, 100)) -> int:
    """(1-x)^a - (1-ax) and (1 - ax/2) - (1-x)^a must not decrease on [0, 1/(2a)]."""
    violations = 0
    for a in exponents:
        xs = np.arange(0, 33) / (64 * a)
        first = (1 - xs) ** a - (1 - a * xs)
        second = (1 - a * xs / 2) - (1 - xs) ** a
        for f in (first, second):
            violations += int(np.sum(np.diff(f) < -1e-12))
    return violations


def verify_lemma_bounds(rv: DiscreteRV, k: int, h: int) -> list[BoundCheck]:
    alpha = h / (2 * k)
    f = potential_score(rv, k, h)
    split = split_top_quantile(rv, alpha)
    checks = [
        _le("top_quantile_transform", SHORTFALL * f, potential_score(split.top, k, h)),
        _le("conditional_top_mean", expectation(split.top) / alpha, 4 * f),
    ]
    tail_max = split.tail.max_value
    checks.append(_le("tail_values", tail_max, f / SHORTFALL))
    mean = expectation(rv)
    rare = rv.total_mass <= alpha + 1e-15
    lower = _le("rare_mass_lower", (h / k) * f, mean)
    upper = _le("rare_mass_upper", mean, (2 * h / k) * f)
    for c in (lower, upper):
        c.applicable = rare
        c.holds = c.holds or not rare
    return checks + [lower, upper]


def verify_theorem_bounds(pool: Sequence[DiscreteRV], k: int, h: int) -> list[BoundCheck]:
    """Upper and lower bounds on g_h of k variables from their potential scores."""
    rvs = [c.rv if isinstance(c, Candidate) else c for c in pool]
    if len(rvs) != k:
        raise InvalidParams(f"pool must hold exactly k={k} variables")
    scores = [potential_score(rv, k, h) for rv in rvs]
    g = g_h_exact(rvs, h)
    c_max, c_min = max(scores), min(scores)
    return [
        _le("upper", g, 2 * h * c_max + h * c_max / SHORTFALL),
        _le("lower", 2 * h * c_min * SHORTFALL**2, g),
    ]


# --- approximation-ratio experiments ----------------------------------------------------

@dataclass
class RatioExperimentConfig:
    trials: int = 500
    n: int = 10
    k: int = 4
    h: int = 2
    max_support: int = 5
    max_value: float = 10.0
    mass_range: tuple[float, float] = (0.2, 1.0)
    seed: int = 1
    budget: int = 10**6

    def __post_init__(self):
        if not self.n >= self.k >= self.h >= 1:
            raise InvalidParams("need n >= k >= h >= 1")
        if math.comb(self.n, self.k) > self.budget:
            raise BudgetExceeded(f"C({self.n}, {self.k}) exceeds budget {self.budget}")


@dataclass
class MethodSummary:
    max_ratio: float
    mean_ratio: float
    bound: float
    violations: int


@dataclass
class RatioExperimentResult:
    config: RatioExperimentConfig
    summaries: dict[str, MethodSummary]
    rows: list[dict] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(s.violations for s in self.summaries.values())

    def to_dict(self) -> dict:
        return {"config": asdict(self.config),
                "summaries": {m: asdict(s) for m, s in self.summaries.items()}}


def method_ratios(instance: TeamInstance, optimal: Optional[float] = None,
                  methods: Sequence[str] = TEST_METHODS) -> dict:
    """Run each selection method on ``instance`` and attach the exhaustive optimum."""
    if optimal is None:
        optimal = brute_force_optimal(instance).team_value
    out = {}
    for m in methods:
        report = greedy_hill_climb(instance) if m == "greedy" else select_by_test(instance, m)
        out[m] = report.with_optimum(optimal)
    return out


def ratio_experiment(config: RatioExperimentConfig) -> RatioExperimentResult:
    rows = []
    ratios: dict[str, list[float]] = {m: [] for m in TEST_METHODS}
    counts = dict.fromkeys(TEST_METHODS, 0)
    for trial in range(config.trials):
        rng = trial_rng(config.seed, trial)
        pool = random_pool(rng, config.n, max_support=config.max_support,
                           max_value=config.max_value, mass_range=config.mass_range)
        instance = TeamInstance(tuple(pool), config.k, config.h)
        optimal = brute_force_optimal(instance, budget=config.budget).team_value
        for m, rep in method_ratios(instance, optimal).items():
            bad = not (1 - TOL <= rep.ratio <= rep.bound + TOL)
            counts[m] += bad
            ratios[m].append(rep.ratio)
            rows.append({"trial": trial, "method": m, "team_value": rep.team_value,
                         "optimal_value": optimal, "ratio": rep.ratio,
                         "bound": rep.bound, "violation": int(bad)})
    summaries = {
        m: MethodSummary(max(r), float(np.mean(r)), method_bound(m, config.k, config.h), counts[m])
        for m, r in ratios.items() if r
    }
    return RatioExperimentResult(config, summaries, rows)


# --- hill-climbing optimality ---------------------------------------------------------

def greedy_condition_violations(pool: Sequence[tuple[str, object]], k: int,
                                value_fn: Optional[Callable[[list], float]] = None,
                                budget: int = 10**5) -> list[tuple[int, tuple[str, ...]]]:
    """Exchange-condition failures along the greedy trajectory.

    For each step t with greedy set S_t and next pick x, every nonempty Z
    outside S_t with |S_t + Z| <= k must admit some z in Z such that
    f(S_t + x + Z - z) >= f(S_t + Z). Returns the failing (t, Z) pairs.
    ``pool`` holds (id, item) pairs; ``value_fn`` maps a list of items to a
    value and defaults to the weighted Bernoulli expected maximum.
    """
    if value_fn is None:
        value_fn = expected_max_wb
    n = len(pool)
    k = min(k, n)
    work = sum(math.comb(n - t, r) for t in range(k) for r in range(1, k - t + 1))
    if work > budget:
        raise BudgetExceeded(f"{work} exchange sets exceeds budget {budget}")
    items = dict(pool)
    ids = sorted(items)
    f = lambda team: value_fn([items[i] for i in team])  # noqa: E731

    chosen: list[str] = []
    failures = []
    for t in range(k):
        rest = [i for i in ids if i not in chosen]
        base = f(chosen)
        x, best = None, -math.inf
        for i in rest:
            gain = f(chosen + [i]) - base
            if gain > best + 1e-12:
                x, best = i, gain
        for r in range(1, k - t + 1):
            for z_set in combinations(rest, r):
                target = f(chosen + list(z_set))
                swapped = max(f(chosen + [x] + [w for w in z_set if w != z]) for z in z_set)
                if swapped < target - TOL:
                    failures.append((t, z_set))
        chosen.append(x)
    return failures


def check_greedy_condition(pool, k: int, value_fn=None, budget: int = 10**5) -> bool:
    return not greedy_condition_violations(pool, k, value_fn, budget)


def check_swap_lemmas(samples: int, seed: int, max_context: int = 4) -> dict[str, int]:
    """Randomized checks of the two weighted Bernoulli exchange lemmas.

    ``large_value``: if x_X >= x_Y and E(X) >= E(Y), then swapping Y for X in
    any context never lowers the expected maximum.
    ``extension``: if x_X >= x_Y and X beats Y in some context, X still beats
    Y after adding variables whose values are at most x_Y. Contexts are
    resampled until the hypothesis holds.
    """
    rng = np.random.default_rng(seed)

    def draw(hi=10.0):
        return WeightedBernoulli(float(rng.random()), float(rng.uniform(0, hi)))

    def ordered_pair():
        a, b = draw(), draw()
        return (a, b) if a.x >= b.x else (b, a)

    counts = {"large_value": 0, "extension": 0}
    for _ in range(samples):
        x, y = ordered_pair()
        while x.mean < y.mean:
            x, y = ordered_pair()
        ctx = [draw() for _ in range(int(rng.integers(0, max_context + 1)))]
        if expected_max_wb([x, *ctx]) < expected_max_wb([y, *ctx]) - TOL:
            counts["large_value"] += 1

        while True:
            x, y = ordered_pair()
            ctx = [draw() for _ in range(int(rng.integers(0, max_context + 1)))]
            if expected_max_wb([x, *ctx]) >= expected_max_wb([y, *ctx]):
                break
        extra = [draw(y.x) for _ in range(int(rng.integers(1, max_context + 1)))]
        if expected_max_wb([x, *ctx, *extra]) < expected_max_wb([y, *ctx, *extra]) - TOL:
            counts["extension"] += 1
    return counts
