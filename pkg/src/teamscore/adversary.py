"""Adversarial instances: where test scores fail, and the Set Cover reduction."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, NamedTuple, Sequence

from .errors import BudgetExceeded, EmptyUniverse, InvalidParams
from .rv import Candidate, deterministic, make_rv
from .selection import rank_top_k
from .team_value import DependentEnsemble, TeamInstance, g_h_dependent

COUNTEREXAMPLE_EPSILON = 1e-6
COVER_ENUM_LIMIT = 20


def canonical_tightness_instance(k: int, h: int, n: float, epsilon: float) -> TeamInstance:
    """k sure-thing candidates worth 1+epsilon against k long shots worth n w.p. 1/n."""
    if n < 2 or epsilon <= 0:
        raise InvalidParams("need n >= 2 and epsilon > 0")
    if not 1 <= h <= k:
        raise InvalidParams(f"need 1 <= h <= k, got k={k}, h={h}")
    width = len(str(k))
    pool = [Candidate(f"det{i:0{width}d}", deterministic(1 + epsilon)) for i in range(1, k + 1)]
    pool += [Candidate(f"risky{i:0{width}d}", make_rv([n], [1 / n])) for i in range(1, k + 1)]
    return TeamInstance(tuple(pool), k, h)


def hill_climb_counterexample() -> TeamInstance:
    """Three candidates on which greedy expected-max selection is suboptimal for k=2."""
    pool = (
        Candidate("X", make_rv([9 / 5, 6 / 5], [1 / 3, 1 / 3])),
        Candidate("Y", deterministic(1 + COUNTEREXAMPLE_EPSILON)),
        Candidate("Z", make_rv([3 / 2], [2 / 3])),
    )
    return TeamInstance(pool, 2, 1)


class AdversaryOutcome(NamedTuple):
    fooling_pool: list
    selected_value: int
    optimal_value: int


@dataclass(frozen=True)
class SetSystemCandidate:
    id: str
    elements: frozenset[int]


def coverage(sets: Sequence[SetSystemCandidate]) -> int:
    covered: set[int] = set()
    for s in sets:
        covered |= s.elements
    return len(covered)


def _pessimal_vs_optimal(items: Sequence, ids: list[str], scores: list[float], k: int,
                         objective: Callable[[list], int]) -> tuple[int, int]:
    lookup = dict(zip(ids, items))
    as_items = lambda chosen: [lookup[i] for i in chosen]  # noqa: E731
    chosen = rank_top_k(ids, scores, k, "pessimal", lambda c: objective(as_items(c)))
    selected = objective(as_items(chosen))
    optimal = max(objective(list(team)) for team in combinations(items, k))
    return selected, optimal


def cardinality_adversary(test: Callable[[SetSystemCandidate], float], k: int) -> AdversaryOutcome:
    """Fooling pool of 2k sets on which ``test``'s top k cover only k+1 elements.

    Interval i holds the k+1 subsets of size k of {(i-1)(k+1)+1, ..., i(k+1)},
    listed by dropped element. Either some early interval has k "bad" later
    intervals, or a later interval is good for all of the first k.
    """
    if k < 2:
        raise InvalidParams("k must be >= 2")
    n_families = k * k + k + 1
    ranked = []
    for i in range(1, n_families + 1):
        interval = range((i - 1) * (k + 1) + 1, i * (k + 1) + 1)
        members = [SetSystemCandidate(f"U{i}-{e}", frozenset(interval) - {e}) for e in interval]
        scored = [(float(test(m)), pos, m) for pos, m in enumerate(members)]
        ranked.append([(s, m) for s, _, m in sorted(scored, key=lambda t: t[:2])])

    pool = None
    for i in range(k):
        bad = [j for j in range(k, n_families) if ranked[j][0][0] <= ranked[i][1][0]]
        if len(bad) >= k:
            pool = ranked[i][1:] + [ranked[j][0] for j in bad[:k]]
            break
    if pool is None:
        good = next(j for j in range(k, n_families)
                    if all(ranked[j][0][0] > ranked[i][1][0] for i in range(k)))
        pool = [ranked[i][0] for i in range(k)] + ranked[good][:k]

    sets = [m for _, m in pool]
    selected, optimal = _pessimal_vs_optimal(sets, [m.id for m in sets],
                                             [s for s, _ in pool], k, coverage)
    return AdversaryOutcome(sets, selected, optimal)


@dataclass(frozen=True)
class CliqueWorld:
    """``num_cliques`` disjoint copies of K_{k+1} and nothing else."""

    num_cliques: int
    k: int

    def __post_init__(self):
        if self.k < 1 or self.num_cliques < 1:
            raise InvalidParams("need k >= 1 and num_cliques >= 1")

    @staticmethod
    def vertex_id(clique: int, index: int) -> str:
        return f"K{clique}v{index}"

    @staticmethod
    def clique_of(vertex: str) -> int:
        return int(vertex[1:].split("v")[0])

    def vertices(self, clique: int) -> list[str]:
        return [self.vertex_id(clique, i) for i in range(1, self.k + 2)]

    def degree(self, vertex: str) -> int:
        return self.k

    def edges(self) -> list[tuple[str, str]]:
        return [pair for j in range(1, self.num_cliques + 1)
                for pair in combinations(self.vertices(j), 2)]

    @classmethod
    def induced_edges(cls, vertices: Sequence[str]) -> int:
        return sum(1 for a, b in combinations(vertices, 2)
                   if cls.clique_of(a) == cls.clique_of(b))


def clique_adversary(test: Callable[[str], float], k: int) -> AdversaryOutcome:
    """Fooling 2k-vertex set on which ``test``'s top k induce no edges."""
    if k < 2:
        raise InvalidParams("k must be >= 2")
    world = CliqueWorld(k * k + k + 1, k)
    ranked = []
    for j in range(1, world.num_cliques + 1):
        scored = [(float(test(v)), pos, v) for pos, v in enumerate(world.vertices(j))]
        ranked.append([(s, v) for s, _, v in sorted(scored, key=lambda t: t[:2])])

    pool = None
    for i in range(k):
        bad = [j for j in range(k, world.num_cliques) if ranked[j][k][0] >= ranked[i][k - 1][0]]
        if len(bad) >= k:
            pool = ranked[i][:k] + [ranked[j][k] for j in bad[:k]]
            break
    if pool is None:
        good = next(j for j in range(k, world.num_cliques)
                    if all(ranked[j][k][0] < ranked[i][k - 1][0] for i in range(k)))
        pool = [ranked[i][k] for i in range(k)] + ranked[good][:k]

    vertices = [v for _, v in pool]
    selected, optimal = _pessimal_vs_optimal(vertices, vertices, [s for s, _ in pool], k,
                                             CliqueWorld.induced_edges)
    return AdversaryOutcome(vertices, selected, optimal)


@dataclass(frozen=True)
class SetCoverInstance:
    universe: frozenset[int]
    subsets: tuple[frozenset[int], ...]
    k: int

    def __post_init__(self):
        universe = frozenset(self.universe)
        subsets = tuple(frozenset(s) for s in self.subsets)
        for s in subsets:
            if not s <= universe:
                raise InvalidParams(f"subset {sorted(s)} is not inside the universe")
        if self.k < 0:
            raise InvalidParams("k must be nonnegative")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "subsets", subsets)

    @property
    def ids(self) -> list[str]:
        return [f"S{i}" for i in range(1, len(self.subsets) + 1)]


def setcover_to_ensemble(inst: SetCoverInstance) -> DependentEnsemble:
    """Uniform measure on the universe; candidate i is the indicator of subset i."""
    if not inst.universe:
        raise EmptyUniverse("universe is empty")
    p = 1 / len(inst.universe)
    outcomes = tuple(
        (p, {sid: float(u in s) for sid, s in zip(inst.ids, inst.subsets)})
        for u in sorted(inst.universe)
    )
    return DependentEnsemble(outcomes, tuple(inst.ids))


def cover_decision(inst: SetCoverInstance, limit: int = COVER_ENUM_LIMIT) -> bool:
    """True iff at most k of the subsets cover the universe (direct enumeration)."""
    if len(inst.subsets) > limit:
        raise BudgetExceeded(f"{len(inst.subsets)} subsets exceeds enumeration limit {limit}")
    for r in range(min(inst.k, len(inst.subsets)) + 1):
        for combo in combinations(inst.subsets, r):
            if frozenset().union(*combo) == inst.universe:
                return True
    return False


def best_expected_max_team(inst: SetCoverInstance,
                           limit: int = COVER_ENUM_LIMIT) -> tuple[list[str], float]:
    """Best team of at most k indicators by expected maximum on the reduction ensemble."""
    if len(inst.subsets) > limit:
        raise BudgetExceeded(f"{len(inst.subsets)} subsets exceeds enumeration limit {limit}")
    ens = setcover_to_ensemble(inst)
    best: tuple[list[str], float] = ([], 0.0)
    for r in range(1, min(inst.k, len(inst.subsets)) + 1):
        for team in combinations(inst.ids, r):
            val = g_h_dependent(ens, team, 1)
            if val > best[1] + 1e-12:
                best = (list(team), val)
    return best


def random_setcover_instance(rng, max_universe: int = 10, max_subsets: int = 12) -> SetCoverInstance:
    """Random instance on universe {1..u}; ``rng`` is a numpy Generator."""
    u = int(rng.integers(1, max_universe + 1))
    m = int(rng.integers(1, max_subsets + 1))
    density = rng.uniform(0.1, 0.6)
    subsets = [frozenset(int(e) for e in range(1, u + 1) if rng.random() < density)
               for _ in range(m)]
    k = int(rng.integers(1, max(2, min(m, u) + 1)))
    return SetCoverInstance(frozenset(range(1, u + 1)), tuple(subsets), k)


def parse_setcover(text: str) -> SetCoverInstance:
    """Parse the text format: ``|U| k`` on the first line, then one subset per line.

    The universe is {1, ..., |U|}; a blank line is an empty subset.
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise InvalidParams("empty Set Cover file")
    head = lines[0].split()
    if len(head) != 2:
        raise InvalidParams("first line must be '<universe size> <k>'")
    size, k = int(head[0]), int(head[1])
    if size < 0:
        raise InvalidParams("universe size must be nonnegative")
    subsets = [frozenset(int(tok) for tok in line.split()) for line in lines[1:]]
    return SetCoverInstance(frozenset(range(1, size + 1)), tuple(subsets), k)


def format_setcover(inst: SetCoverInstance) -> str:
    if inst.universe != frozenset(range(1, len(inst.universe) + 1)):
        raise InvalidParams("text format needs universe {1..|U|}")
    rows = [f"{len(inst.universe)} {inst.k}"]
    rows += [" ".join(str(e) for e in sorted(s)) for s in inst.subsets]
    return "\n".join(rows) + "\n"


def _digest(text: str) -> float:
    return int(hashlib.sha256(text.encode()).hexdigest()[:12], 16) / 16**12


# named deterministic tests, keyed by CLI name; vertex tests are built per k
SET_TESTS: dict[str, Callable[[SetSystemCandidate], float]] = {
    "constant": lambda s: 1.0,
    "cardinality": lambda s: float(len(s.elements)),
    "element_sum": lambda s: float(sum(s.elements)),
    "neg_min_element": lambda s: -float(min(s.elements)),
    "hashed": lambda s: _digest(",".join(map(str, sorted(s.elements)))),
}


def vertex_tests(k: int) -> dict[str, Callable[[str], float]]:
    world = CliqueWorld(k * k + k + 1, k)
    return {
        "constant": lambda v: 0.0,
        "degree": lambda v: float(world.degree(v)),
        "index": lambda v: float(v.split("v")[1]),
        "clique": lambda v: float(CliqueWorld.clique_of(v)),
        "hashed": _digest,
    }
