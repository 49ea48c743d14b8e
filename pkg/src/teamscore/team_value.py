"""Team performance: expected sum of the h largest realized values.

Independent pools are evaluated exactly by threshold decomposition,

    E[top-h sum] = sum_j (v_j - v_{j+1}) * E[min(N_j, h)],

where v_1 > v_2 > ... are the distinct support values of the pool,
v_{m+1} = 0, and N_j counts the variables that reach at least v_j. Each
N_j is Poisson binomial; its law truncated at h comes from a small DP.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import IndexOutOfRange, InvalidH, InvalidParams, UnknownCandidate
from .rv import Candidate, DiscreteRV, WeightedBernoulli

# samples per independent random stream in the Monte Carlo estimator
MC_BLOCK = 1 << 16


def _check_h(h: int) -> None:
    if h < 1:
        raise InvalidH(f"h must be >= 1, got {h}")


def _rvs(pool) -> list[DiscreteRV]:
    return [c.rv if isinstance(c, Candidate) else c for c in pool]


def g_h_exact(rvs: Sequence[DiscreteRV], h: int) -> float:
    _check_h(h)
    rvs = [rv for rv in _rvs(rvs) if len(rv)]
    if not rvs:
        return 0.0
    levels = np.unique(np.concatenate([rv.values for rv in rvs]))[::-1]
    gaps = levels - np.append(levels[1:], 0.0)
    cap = min(h, len(rvs))
    # dist[j, c] = P(min(N_j, cap) = c)
    dist = np.zeros((len(levels), cap + 1))
    dist[:, 0] = 1.0
    for rv in rvs:
        # P(X >= v_j) for every level
        idx = np.searchsorted(-np.asarray(rv.values), -levels, side="right")
        cum = np.concatenate(([0.0], rv.cum_masses))
        p = cum[idx][:, None]
        shifted = dist * p
        dist = dist * (1.0 - p)
        dist[:, 1:] += shifted[:, :-1]
        dist[:, cap] += shifted[:, cap]
    expected_min = dist @ np.arange(cap + 1)
    return float(np.dot(gaps, expected_min))


def g_h_enumerate(rvs: Sequence[DiscreteRV], h: int) -> float:
    """Brute-force expectation over the full product space of outcomes."""
    _check_h(h)
    atoms = []
    for rv in _rvs(rvs):
        a = list(zip(rv.values, rv.masses))
        if rv.residual > 0:
            a.append((0.0, rv.residual))
        atoms.append(a)
    total = []
    for outcome in product(*atoms):
        prob = math.prod(p for _, p in outcome)
        top = sorted((x for x, _ in outcome), reverse=True)[:h]
        total.append(prob * sum(top))
    return math.fsum(total)


def _sample_block(rvs: Sequence[DiscreteRV], h: int, size: int, rng) -> np.ndarray:
    u = rng.random((size, len(rvs)))
    draws = np.zeros((size, len(rvs)))
    for i, rv in enumerate(rvs):
        if not len(rv):
            continue
        support = np.append(rv.values, 0.0)
        # u < q_1 maps to x_1, q_1 <= u < q_2 to x_2, ..., the rest to 0
        draws[:, i] = support[np.searchsorted(rv.cum_masses, u[:, i], side="right")]
    if h >= len(rvs):
        return draws.sum(axis=1)
    top = np.partition(draws, len(rvs) - h, axis=1)[:, len(rvs) - h:]
    return top.sum(axis=1)


def g_h_monte_carlo(rvs: Sequence[DiscreteRV], h: int, samples: int, seed: int):
    """Sample-mean estimate of g_h with its standard error.

    Sample i is drawn from the stream keyed by (seed, i // MC_BLOCK), so the
    estimate depends only on ``seed`` and ``samples``.
    """
    _check_h(h)
    if samples < 1:
        raise InvalidParams("samples must be >= 1")
    rvs = _rvs(rvs)
    if not rvs:
        return 0.0, 0.0
    chunks = []
    for block, start in enumerate(range(0, samples, MC_BLOCK)):
        ss = np.random.SeedSequence(seed, spawn_key=(block,))
        rng = np.random.Generator(np.random.Philox(ss))
        chunks.append(_sample_block(rvs, h, min(MC_BLOCK, samples - start), rng))
    s = np.concatenate(chunks)
    # shift by the first draw so constant samples give an exact mean and zero spread
    d = s - s[0]
    mean = float(s[0] + d.mean())
    if samples == 1:
        return mean, 0.0
    sd = float(np.std(d, ddof=1))
    return mean, sd / math.sqrt(samples)


def expected_max_wb(wbs: Iterable[WeightedBernoulli]) -> float:
    """Expected maximum of independent weighted Bernoulli variables."""
    total = 0.0
    survive = 1.0
    for wb in sorted(wbs, key=lambda w: -w.x):
        total += survive * wb.p * wb.x
        survive *= 1.0 - wb.p
    return total


@dataclass(frozen=True)
class DependentEnsemble:
    """Finite sample space with an explicit value for every candidate at every outcome."""

    outcomes: tuple[tuple[float, Mapping[str, float]], ...]
    candidate_ids: tuple[str, ...]

    def __post_init__(self):
        outcomes = tuple((float(p), dict(a)) for p, a in self.outcomes)
        ids = tuple(self.candidate_ids)
        if len(set(ids)) != len(ids):
            raise InvalidParams("candidate ids must be unique")
        if any(not p > 0 for p, _ in outcomes):
            raise InvalidParams("outcome probabilities must be positive")
        if abs(math.fsum(p for p, _ in outcomes) - 1.0) > 1e-9:
            raise InvalidParams("outcome probabilities must sum to 1")
        for _, a in outcomes:
            missing = set(ids) - set(a)
            if missing:
                raise InvalidParams(f"outcome lacks values for {sorted(missing)}")
            if any(a[i] < 0 for i in ids):
                raise InvalidParams("assigned values must be nonnegative")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "candidate_ids", ids)

    def __len__(self):
        return len(self.outcomes)


def product_ensemble(candidates: Sequence[Candidate]) -> DependentEnsemble:
    """Explicit product space of independent candidates."""
    ids = [c.id for c in candidates]
    atoms = []
    for c in candidates:
        a = list(zip(c.rv.values, c.rv.masses))
        if c.rv.residual > 0:
            a.append((0.0, c.rv.residual))
        atoms.append(a)
    outcomes = []
    for combo in product(*atoms):
        prob = math.prod(p for _, p in combo)
        if prob > 0:
            outcomes.append((prob, {i: x for i, (x, _) in zip(ids, combo)}))
    # renormalize away the rounding in products of masses
    z = math.fsum(p for p, _ in outcomes)
    return DependentEnsemble(tuple((p / z, a) for p, a in outcomes), tuple(ids))


def _check_team(ensemble: DependentEnsemble, team: Sequence[str]) -> None:
    known = set(ensemble.candidate_ids)
    for t in team:
        if t not in known:
            raise UnknownCandidate(t)


def _top_h_sum(values: Iterable[float], h: int) -> float:
    return sum(sorted(values, reverse=True)[:h])


def omega_h_pointwise(ensemble: DependentEnsemble, team: Sequence[str], h: int,
                      outcome_index: int) -> float:
    """Top-h sum of the team's values at a single outcome."""
    _check_h(h)
    _check_team(ensemble, team)
    if not 0 <= outcome_index < len(ensemble):
        raise IndexOutOfRange(f"outcome {outcome_index} out of range")
    assignment = ensemble.outcomes[outcome_index][1]
    return _top_h_sum((assignment[t] for t in team), h)


def g_h_dependent(ensemble: DependentEnsemble, team: Sequence[str], h: int) -> float:
    _check_h(h)
    _check_team(ensemble, team)
    return math.fsum(p * _top_h_sum((a[t] for t in team), h)
                     for p, a in ensemble.outcomes)


@dataclass(frozen=True)
class TeamInstance:
    """Candidate pool with team size ``k`` and number of counted values ``h``."""

    pool: tuple[Candidate, ...]
    k: int
    h: int

    def __post_init__(self):
        pool = tuple(self.pool)
        if not 1 <= self.h <= self.k:
            raise InvalidParams(f"need 1 <= h <= k, got k={self.k}, h={self.h}")
        ids = [c.id for c in pool]
        if len(set(ids)) != len(ids):
            raise InvalidParams("candidate ids must be unique within a pool")
        object.__setattr__(self, "pool", pool)

    @property
    def team_size(self) -> int:
        return min(self.k, len(self.pool))

    def by_id(self) -> dict[str, Candidate]:
        return {c.id: c for c in self.pool}

    def value(self, team_ids: Sequence[str]) -> float:
        lookup = self.by_id()
        missing = [i for i in team_ids if i not in lookup]
        if missing:
            raise UnknownCandidate(missing[0])
        return g_h_exact([lookup[i].rv for i in team_ids], self.h)
