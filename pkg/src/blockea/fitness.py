"""Benchmark fitness functions and diversity metrics.

Objective calls increment the supplied evaluation counter by exactly one;
there is no fitness caching, because exported benchmarking data is indexed
by evaluation count and caching would silently change the curves.
Diversity metrics are not objective evaluations and never count.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ea import Individual, LengthMismatch, Population


class FitnessError(ValueError):
    pass


class BadGap(FitnessError):
    pass


class TooSmall(FitnessError):
    pass


@dataclass
class EvalCounter:
    """Number of objective evaluations in the current run; reset only at run start."""

    count: int = 0

    def bump(self) -> None:
        self.count += 1


def onemax(x: Individual, counter: EvalCounter | None = None) -> float:
    if counter is not None:
        counter.bump()
    return float(sum(x.bits))


def leading_ones(x: Individual, counter: EvalCounter | None = None) -> float:
    if counter is not None:
        counter.bump()
    run = 0
    for b in x.bits:
        if b != 1:
            break
        run += 1
    return float(run)


def jump(x: Individual, k: int, counter: EvalCounter | None = None) -> float:
    """Jump with gap k: OneMax shifted by k outside the deceptive gap
    of width k just below the optimum; the optimum k + n only at all-ones.
    """
    n = x.n
    if not 1 <= k <= n:
        raise BadGap(f"gap must be in [1, {n}], got {k}")
    if counter is not None:
        counter.bump()
    ones = sum(x.bits)
    if ones <= n - k or ones == n:
        return float(k + ones)
    return float(n - ones)


def diversity_mean_hamming(pop: Population) -> float:
    """Mean pairwise Hamming distance over all unordered member pairs."""
    m = len(pop)
    if m < 2:
        raise TooSmall(f"diversity needs at least 2 members, got {m}")
    lengths = {ind.n for ind in pop}
    if len(lengths) > 1:
        raise LengthMismatch(f"members have mixed lengths: {sorted(lengths)}")
    total = 0
    members = pop.members
    for i in range(m):
        for j in range(i + 1, m):
            total += sum(a != b for a, b in zip(members[i].bits, members[j].bits))
    return total / (m * (m - 1) / 2)
