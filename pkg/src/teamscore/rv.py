"""Nonnegative discrete random variables and single-candidate test scores.

A variable is stored as strictly decreasing positive support values with
their probability masses; whatever mass is left over sits at zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import (
    InvalidAlpha,
    InvalidParams,
    LengthMismatch,
    MassExceedsOne,
    NegativeValue,
    NonPositiveMass,
)

MASS_TOL = 1e-12
# cumulative masses this close to a quantile boundary are treated as on it
_SNAP = 1e-15


@dataclass(frozen=True)
class DiscreteRV:
    values: tuple[float, ...] = ()
    masses: tuple[float, ...] = ()
    cum_masses: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        masses = tuple(float(p) for p in self.masses)
        if len(values) != len(masses):
            raise LengthMismatch(f"{len(values)} values but {len(masses)} masses")
        if any(not v > 0 for v in values):
            raise NegativeValue("support values must be strictly positive")
        if any(a <= b for a, b in zip(values, values[1:])):
            raise InvalidParams("support values must be strictly decreasing")
        if any(not p > 0 for p in masses):
            raise NonPositiveMass("masses must be strictly positive")
        cum = []
        q = 0.0
        for p in masses:
            q += p
            cum.append(q)
        if q > 1 + MASS_TOL:
            raise MassExceedsOne(f"total mass {q!r} exceeds 1")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "cum_masses", tuple(min(c, 1.0) for c in cum))

    @property
    def total_mass(self) -> float:
        return self.cum_masses[-1] if self.cum_masses else 0.0

    @property
    def residual(self) -> float:
        """Probability mass sitting at zero."""
        return max(0.0, 1.0 - self.total_mass)

    @property
    def max_value(self) -> float:
        return self.values[0] if self.values else 0.0

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class WeightedBernoulli:
    """Takes value ``x`` with probability ``p`` and 0 otherwise."""

    p: float
    x: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise InvalidParams(f"p must lie in [0, 1], got {self.p!r}")
        if not self.x >= 0.0:
            raise NegativeValue(f"x must be nonnegative, got {self.x!r}")

    @property
    def mean(self) -> float:
        return self.p * self.x

    def to_rv(self) -> DiscreteRV:
        if self.p == 0 or self.x == 0:
            return DiscreteRV()
        return DiscreteRV((self.x,), (self.p,))


def as_weighted_bernoulli(rv: DiscreteRV) -> Optional[WeightedBernoulli]:
    """Return ``rv`` as a weighted Bernoulli pair, or None if it has two or more atoms."""
    if len(rv) == 0:
        return WeightedBernoulli(0.0, 0.0)
    if len(rv) == 1:
        return WeightedBernoulli(min(rv.masses[0], 1.0), rv.values[0])
    return None


@dataclass(frozen=True)
class Candidate:
    id: str
    rv: DiscreteRV


@dataclass(frozen=True)
class QuantileSplit:
    """Top-``alpha`` part of a variable and the remainder.

    ``top`` and ``tail`` are both standalone variables; the zero atom is
    implicit in each. ``top_zero_mass`` is the share of the top quantile
    that falls on the value 0 (nonzero only when the variable's positive
    mass is below ``alpha``).
    """

    top: DiscreteRV
    tail: DiscreteRV
    alpha: float
    top_zero_mass: float = 0.0

    @property
    def top_mass(self) -> float:
        return self.top.total_mass + self.top_zero_mass


def make_rv(values: Sequence[float], masses: Sequence[float]) -> DiscreteRV:
    """Canonicalize raw (value, mass) pairs into a :class:`DiscreteRV`.

    Duplicate values are merged, zero values are folded into the residual
    mass, and the support is sorted in decreasing order.
    """
    if len(values) != len(masses):
        raise LengthMismatch(f"{len(values)} values but {len(masses)} masses")
    merged: dict[float, float] = {}
    total = 0.0
    for v, p in zip(values, masses):
        v, p = float(v), float(p)
        if math.isnan(v) or v < 0:
            raise NegativeValue(f"negative value {v!r}")
        if math.isnan(p) or p <= 0:
            raise NonPositiveMass(f"non-positive mass {p!r}")
        total += p
        if v > 0:
            merged[v] = merged.get(v, 0.0) + p
    if total > 1 + MASS_TOL:
        raise MassExceedsOne(f"total mass {total!r} exceeds 1")
    support = sorted(merged, reverse=True)
    return DiscreteRV(tuple(support), tuple(merged[v] for v in support))


def deterministic(c: float) -> DiscreteRV:
    return make_rv([c], [1.0])


def expectation(rv: DiscreteRV) -> float:
    """Mean of ``rv``; this is the canonical test score."""
    return math.fsum(p * x for p, x in zip(rv.masses, rv.values))


def _check_kh(k: int, h: int) -> None:
    if h < 1 or k < h:
        raise InvalidParams(f"need 1 <= h <= k, got k={k}, h={h}")


def potential_score(rv: DiscreteRV, k: int, h: int) -> float:
    """Expected maximum of ``k/h`` independent copies of ``rv``.

    Evaluated in closed form, so ``k/h`` may be any real number >= 1.
    """
    _check_kh(k, h)
    if k == h:
        # one copy: same summation as the expectation, so rankings agree exactly
        return expectation(rv)
    a = k / h
    total = 0.0
    prev = 1.0
    for q, x in zip(rv.cum_masses, rv.values):
        cur = max(0.0, 1.0 - q) ** a
        total += (prev - cur) * x
        prev = cur
    return total


def split_top_quantile(rv: DiscreteRV, alpha: float) -> QuantileSplit:
    """Split ``rv`` into the mass-``alpha`` block of its highest values and the rest.

    An atom straddling the boundary is divided between the two parts.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(f"alpha must lie in (0, 1), got {alpha!r}")
    top_v, top_p, tail_v, tail_p = [], [], [], []
    q_prev = 0.0
    for x, p, q in zip(rv.values, rv.masses, rv.cum_masses):
        if q_prev >= alpha - _SNAP:
            tail_v.append(x)
            tail_p.append(p)
        elif q <= alpha + _SNAP:
            top_v.append(x)
            top_p.append(p)
        else:
            top_v.append(x)
            top_p.append(alpha - q_prev)
            tail_v.append(x)
            tail_p.append(q - alpha)
        q_prev = q
    top_zero = max(0.0, alpha - rv.total_mass)
    return QuantileSplit(
        top=DiscreteRV(tuple(top_v), tuple(top_p)),
        tail=DiscreteRV(tuple(tail_v), tuple(tail_p)),
        alpha=alpha,
        top_zero_mass=top_zero,
    )


def conditional_quantile_score(rv: DiscreteRV, k: int, h: int) -> float:
    """E(X | X lands in its top h/k quantile)."""
    _check_kh(k, h)
    if h == k:
        return expectation(rv)
    alpha = h / k
    return expectation(split_top_quantile(rv, alpha).top) / alpha


SCORERS = {
    "canonical": lambda rv, k, h: expectation(rv),
    "potential": potential_score,
    "conditional": conditional_quantile_score,
}
