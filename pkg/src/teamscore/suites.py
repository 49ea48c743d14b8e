"""Seeded verification suites behind ``teamscore verify``."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import analysis
from .analysis import (
    RatioExperimentConfig,
    check_greedy_condition,
    check_increasing_functions,
    check_pointwise_submodularity,
    check_submodularity_expectation,
    check_swap_lemmas,
    random_pool,
    random_rv,
    random_wb_pool,
    ratio_experiment,
    triangle_control,
    trial_rng,
    verify_lemma_bounds,
    verify_theorem_bounds,
)
from .errors import InvalidParams
from .selection import wb_brute_force, wb_greedy
from .team_value import product_ensemble

SUITES = ("lemmas", "theorems", "submodular", "ratios", "wb", "swaps", "condition")


@dataclass
class SuiteResult:
    suite: str
    seed: int
    trials: int
    violations: int
    details: dict = field(default_factory=dict)
    # the raw experiment for the ratios suite (CSV rows and figure)
    experiment: Optional[object] = None
    bound_points: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "trials": self.trials,
                "violations": self.violations, "passed": self.passed,
                "details": self.details}


def _random_kh(rng, max_k: int) -> tuple[int, int]:
    k = int(rng.integers(1, max_k + 1))
    return k, int(rng.integers(1, k + 1))


def _maybe_rare(rng, k: int, h: int):
    # half the draws keep all mass inside the top h/2k quantile
    if rng.random() < 0.5:
        return random_rv(rng, mass_range=(1e-6, h / (2 * k)))
    return random_rv(rng)


def lemmas(seed: int, trials: int) -> SuiteResult:
    counts: dict[str, int] = {}
    applicable: dict[str, int] = {}
    for t in range(trials):
        rng = trial_rng(seed, t)
        k, h = _random_kh(rng, 12)
        for c in verify_lemma_bounds(_maybe_rare(rng, k, h), k, h):
            counts[c.name] = counts.get(c.name, 0) + (not c.holds)
            applicable[c.name] = applicable.get(c.name, 0) + c.applicable
    counts["increasing_functions"] = check_increasing_functions()
    return SuiteResult("lemmas", seed, trials, sum(counts.values()),
                       {"violations": counts, "applicable": applicable})


def theorems(seed: int, trials: int) -> SuiteResult:
    counts = {"upper": 0, "lower": 0}
    points = []
    for t in range(trials):
        rng = trial_rng(seed, t)
        k, h = _random_kh(rng, 8)
        pool = [_maybe_rare(rng, k, h) for _ in range(k)]
        checks = verify_theorem_bounds(pool, k, h)
        for c in checks:
            counts[c.name] += not c.holds
        upper, lower = checks
        points.append((h, lower.lhs, upper.lhs, upper.rhs))
    return SuiteResult("theorems", seed, trials, sum(counts.values()),
                       {"violations": counts}, bound_points=points)


def submodular(seed: int, trials: int, control: bool = False, groups: int = 10) -> SuiteResult:
    per_group = max(1, trials // groups)
    pointwise = expected = 0
    for g in range(groups):
        rng = trial_rng(seed, g)
        h = int(rng.integers(1, 4))
        pool = random_pool(rng, int(rng.integers(3, 6)), max_support=3)
        pointwise += check_pointwise_submodularity(product_ensemble(pool), h, per_group,
                                                   seed + 7919 * g)
        pool = random_pool(rng, int(rng.integers(3, 8)))
        expected += check_submodularity_expectation(pool, h, per_group, seed + 104729 * g)
    details = {"pointwise": pointwise, "expectation": expected,
               "checks_per_kind": per_group * groups}
    violations = pointwise + expected
    if control:
        ens, edges = triangle_control()
        ctl = check_pointwise_submodularity(ens, 1, per_group * groups, seed, set_fn=edges)
        details["supermodular_control"] = ctl
        violations += ctl
    return SuiteResult("submodular", seed, trials, violations, details)


def ratios(seed: int, trials: int, n: int = 10, k: int = 4, h: int = 2,
           budget: int = 10**6) -> SuiteResult:
    result = ratio_experiment(RatioExperimentConfig(trials=trials, n=n, k=k, h=h,
                                                    seed=seed, budget=budget))
    return SuiteResult("ratios", seed, trials, result.violations, result.to_dict(),
                       experiment=result)


def wb(seed: int, trials: int, max_n: int = 10, max_k: int = 5) -> SuiteResult:
    mismatches = 0
    worst = 0.0
    for t in range(trials):
        rng = trial_rng(seed, t)
        n = int(rng.integers(1, max_n + 1))
        k = int(rng.integers(1, min(max_k, n) + 1))
        pool = random_wb_pool(rng, n)
        gap = abs(wb_greedy(pool, k, oracle_budget=0).team_value - wb_brute_force(pool, k).team_value)
        worst = max(worst, gap)
        mismatches += gap > analysis.TOL
    return SuiteResult("wb", seed, trials, mismatches, {"max_abs_gap": worst})


def swaps(seed: int, trials: int) -> SuiteResult:
    counts = check_swap_lemmas(trials, seed)
    return SuiteResult("swaps", seed, trials, sum(counts.values()), {"violations": counts})


def condition(seed: int, trials: int, max_n: int = 8, max_k: int = 4) -> SuiteResult:
    failures = 0
    for t in range(trials):
        rng = trial_rng(seed, t)
        n = int(rng.integers(1, max_n + 1))
        k = int(rng.integers(1, min(max_k, n) + 1))
        failures += not check_greedy_condition(random_wb_pool(rng, n), k)
    return SuiteResult("condition", seed, trials, failures,
                       {"scope": f"Z with |S_t + Z| <= k, n <= {max_n}, k <= {max_k}"})


def run_suite(name: str, seed: int, trials: int, **options) -> SuiteResult:
    runners = {"lemmas": lemmas, "theorems": theorems, "submodular": submodular,
               "ratios": ratios, "wb": wb, "swaps": swaps, "condition": condition}
    if name not in runners:
        raise InvalidParams(f"unknown suite {name!r}")
    if trials < 1:
        raise InvalidParams("trials must be >= 1")
    return runners[name](seed, trials, **options)


DEFAULT_TRIALS = {"lemmas": 10**4, "theorems": 10**3, "submodular": 10**4, "ratios": 500,
                  "wb": 500, "swaps": 10**5, "condition": 200}
