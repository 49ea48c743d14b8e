"""Team selection: top-k by test score, hill-climbing, and exhaustive search."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Callable, Optional, Sequence

from .errors import BudgetExceeded, InvalidParams
from .rv import SCORERS, Candidate, WeightedBernoulli
from .team_value import TeamInstance, expected_max_wb, g_h_exact

DEFAULT_BUDGET = 10**6
TIE_TOL = 1e-9
METHODS = ("canonical", "potential", "conditional", "greedy", "brute_force", "wb_greedy")

_SHORTFALL = 1 - math.exp(-0.5)


def lambda_bound() -> float:
    return (2 * _SHORTFALL + 1) / _SHORTFALL**3


def mu_bound() -> float:
    return 16.0


def canonical_bound(k: int, h: int) -> float:
    return k / h


def greedy_bound() -> float:
    """Worst optimal/greedy ratio for monotone submodular objectives."""
    return 1 / (1 - 1 / math.e)


def method_bound(method: str, k: int, h: int) -> float:
    bounds = {
        "canonical": canonical_bound(k, h),
        "potential": lambda_bound(),
        "conditional": mu_bound(),
        "greedy": greedy_bound(),
        "brute_force": 1.0,
        "wb_greedy": 1.0,
    }
    if method not in bounds:
        raise InvalidParams(f"unknown method {method!r}")
    return bounds[method]


def approximation_ratio(optimal: float, achieved: float) -> float:
    if optimal == 0 and achieved == 0:
        return 1.0
    if achieved == 0:
        return math.inf
    return optimal / achieved


@dataclass
class SelectionReport:
    team: list[str]
    team_value: float
    method: str
    bound: Optional[float] = None
    optimal_value: Optional[float] = None
    ratio: Optional[float] = None

    def with_optimum(self, optimal_value: float) -> "SelectionReport":
        self.optimal_value = optimal_value
        self.ratio = approximation_ratio(optimal_value, self.team_value)
        return self

    def to_dict(self) -> dict:
        return asdict(self)


def rank_top_k(ids: Sequence[str], scores: Sequence[float], k: int,
               tie_break: str = "by_id",
               objective: Optional[Callable[[list[str]], float]] = None) -> list[str]:
    """The ``k`` highest-scoring ids.

    ``by_id`` resolves equal scores by ascending id. ``pessimal`` keeps every
    id scoring strictly above the k-th score and fills the remaining slots
    from the tied block with whichever choice minimizes ``objective``.
    """
    order = sorted(range(len(ids)), key=lambda i: (-scores[i], ids[i]))
    if k >= len(ids):
        return [ids[i] for i in order]
    if tie_break == "by_id":
        return [ids[i] for i in order[:k]]
    if tie_break != "pessimal":
        raise InvalidParams(f"unknown tie_break {tie_break!r}")
    if objective is None:
        raise InvalidParams("pessimal tie-breaking needs an objective")
    cutoff = scores[order[k - 1]]
    above = [ids[i] for i in order if scores[i] > cutoff]
    tied = [ids[i] for i in order if scores[i] == cutoff]
    best, best_val = None, math.inf
    for fill in combinations(tied, k - len(above)):
        val = objective(above + list(fill))
        if val < best_val:
            best, best_val = above + list(fill), val
    return best


def select_top_k_by_score(instance: TeamInstance, scorer: Callable[[Candidate], float],
                          tie_break: str = "by_id",
                          objective: Optional[Callable[[list[str]], float]] = None) -> list[str]:
    ids = [c.id for c in instance.pool]
    scores = [scorer(c) for c in instance.pool]
    if objective is None and tie_break == "pessimal":
        objective = instance.value
    return rank_top_k(ids, scores, instance.k, tie_break, objective)


def scorer_for(method: str, k: int, h: int) -> Callable[[Candidate], float]:
    """Candidate -> score for one of the named tests (canonical, potential, conditional)."""
    try:
        fn = SCORERS[method]
    except KeyError:
        raise InvalidParams(f"unknown test {method!r}") from None
    return lambda c: fn(c.rv, k, h)


def select_by_test(instance: TeamInstance, method: str) -> SelectionReport:
    team = select_top_k_by_score(instance, scorer_for(method, instance.k, instance.h))
    return SelectionReport(team, instance.value(team), method,
                           bound=method_bound(method, instance.k, instance.h))


def _check_budget(n: int, r: int, budget: int) -> None:
    if math.comb(n, r) > budget:
        raise BudgetExceeded(f"C({n}, {r}) = {math.comb(n, r)} subsets exceeds budget {budget}")


def brute_force_optimal(instance: TeamInstance, budget: int = DEFAULT_BUDGET,
                        value_fn: Optional[Callable[[list[Candidate]], float]] = None
                        ) -> SelectionReport:
    """Exhaustive maximization over all teams of size min(k, n).

    Among teams within TIE_TOL of each other the lexicographically least id
    tuple wins.
    """
    if value_fn is None:
        value_fn = lambda team: g_h_exact([c.rv for c in team], instance.h)  # noqa: E731
    pool = sorted(instance.pool, key=lambda c: c.id)
    size = instance.team_size
    _check_budget(len(pool), size, budget)
    best, best_val = None, -math.inf
    for team in combinations(pool, size):
        val = value_fn(list(team))
        if val > best_val + TIE_TOL:
            best, best_val = team, val
    report = SelectionReport([c.id for c in best], best_val, "brute_force", bound=1.0)
    return report.with_optimum(best_val)


def _greedy(items: Sequence, k: int, key: Callable, value_fn: Callable) -> list:
    remaining = sorted(items, key=key)
    team: list = []
    current = value_fn(team)
    for _ in range(min(k, len(remaining))):
        best, best_gain = None, -math.inf
        for item in remaining:
            gain = value_fn(team + [item]) - current
            if gain > best_gain + 1e-12:
                best, best_gain = item, gain
        team.append(best)
        remaining.remove(best)
        current += best_gain
    return team


def greedy_hill_climb(instance: TeamInstance,
                      value_fn: Optional[Callable[[list[Candidate]], float]] = None
                      ) -> SelectionReport:
    """Start empty and add the candidate of largest marginal gain ``k`` times."""
    if value_fn is None:
        value_fn = lambda team: g_h_exact([c.rv for c in team], instance.h)  # noqa: E731
    team = _greedy(instance.pool, instance.k, lambda c: c.id, value_fn)
    return SelectionReport([c.id for c in team], value_fn(team), "greedy",
                           bound=greedy_bound())


def wb_greedy(pool: Sequence[tuple[str, WeightedBernoulli]], k: int,
              oracle_budget: int = 10**4) -> SelectionReport:
    """Hill-climbing on the expected maximum of weighted Bernoulli candidates.

    When C(n, k) is within ``oracle_budget`` the report also carries the
    exhaustive optimum.
    """
    if k < 1:
        raise InvalidParams("k must be >= 1")
    value = lambda team: expected_max_wb(wb for _, wb in team)  # noqa: E731
    team = _greedy(list(pool), k, lambda item: item[0], value)
    report = SelectionReport([i for i, _ in team], value(team), "wb_greedy", bound=1.0)
    size = min(k, len(pool))
    if math.comb(len(pool), size) <= oracle_budget:
        best = max((value(list(t)) for t in combinations(pool, size)), default=0.0)
        report.with_optimum(best)
    return report


def wb_brute_force(pool: Sequence[tuple[str, WeightedBernoulli]], k: int,
                   budget: int = DEFAULT_BUDGET) -> SelectionReport:
    ordered = sorted(pool, key=lambda item: item[0])
    size = min(k, len(ordered))
    _check_budget(len(ordered), size, budget)
    best, best_val = (), -math.inf
    for team in combinations(ordered, size):
        val = expected_max_wb(wb for _, wb in team)
        if val > best_val + TIE_TOL:
            best, best_val = team, val
    return SelectionReport([i for i, _ in best], best_val, "brute_force",
                           bound=1.0).with_optimum(best_val)
