"""Individuals, populations, and the variation/selection operators.

All operators are pure: inputs are never modified and the output depends
only on the arguments plus the state of the supplied random source.
Fitness is maximized everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .rng import RandomSource


class EaError(ValueError):
    """Base class for operator contract violations."""


class BadLength(EaError):
    pass


class BadCharacter(EaError):
    pass


class LengthMismatch(EaError):
    pass


class BadProbability(EaError):
    pass


class BadCount(EaError):
    pass


class EmptyPopulation(EaError):
    pass


class AllZeroFitness(EaError):
    pass


class NegativeFitness(EaError):
    pass


@dataclass(frozen=True)
class Individual:
    """Fixed-length bit string."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise BadCharacter(f"bits must be 0/1, got {self.bits!r}")

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def text(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Population:
    """Ordered sequence of individuals; order matters for sort/truncate."""

    members: tuple[Individual, ...] = ()

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


FitnessFn = Callable[[Individual], float]


def init_individual_random(n: int, rng: RandomSource) -> Individual:
    if n < 1:
        raise BadLength(f"individual length must be >= 1, got {n}")
    return Individual(tuple(rng.next_below(2) for _ in range(n)))


def init_individual_explicit(text: str) -> Individual:
    if not text:
        raise BadCharacter("bit text must be nonempty")
    if any(c not in "01" for c in text):
        raise BadCharacter(f"bit text may only contain 0/1, got {text!r}")
    return Individual(tuple(int(c) for c in text))


def init_population_random(size: int, n: int, rng: RandomSource) -> Population:
    if size < 0:
        raise BadCount(f"population size must be >= 0, got {size}")
    return Population(tuple(init_individual_random(n, rng) for _ in range(size)))


def _check_same_length(a: Individual, b: Individual) -> int:
    if a.n != b.n:
        raise LengthMismatch(f"parent lengths differ: {a.n} vs {b.n}")
    return a.n


def one_point_crossover(a: Individual, b: Individual, rng: RandomSource) -> Individual:
    n = _check_same_length(a, b)
    if n < 2:
        raise BadLength(f"one-point crossover needs length >= 2, got {n}")
    cut = 1 + rng.next_below(n - 1)
    return Individual(a.bits[:cut] + b.bits[cut:])


def two_point_crossover(a: Individual, b: Individual, rng: RandomSource) -> Individual:
    n = _check_same_length(a, b)
    if n < 3:
        raise BadLength(f"two-point crossover needs length >= 3, got {n}")
    # uniform over pairs 1 <= c1 < c2 <= n-1
    c1 = 1 + rng.next_below(n - 1)
    c2 = 1 + rng.next_below(n - 1)
    while c2 == c1:
        c2 = 1 + rng.next_below(n - 1)
    if c1 > c2:
        c1, c2 = c2, c1
    return Individual(a.bits[:c1] + b.bits[c1:c2] + a.bits[c2:])


def uniform_crossover(a: Individual, b: Individual, rng: RandomSource) -> Individual:
    _check_same_length(a, b)
    return Individual(
        tuple(ab if rng.next_below(2) == 0 else bb for ab, bb in zip(a.bits, b.bits))
    )


def mutate_per_bit(ind: Individual, p: float, rng: RandomSource) -> Individual:
    if not 0.0 <= p <= 1.0:
        raise BadProbability(f"mutation probability must be in [0, 1], got {p}")
    return Individual(tuple(b ^ 1 if rng.next_float() < p else b for b in ind.bits))


def mutate_k_bits(ind: Individual, k: int, rng: RandomSource) -> Individual:
    n = ind.n
    if not 0 <= k <= n:
        raise BadCount(f"flip count must be in [0, {n}], got {k}")
    # partial Fisher-Yates draw of k distinct positions
    positions = list(range(n))
    bits = list(ind.bits)
    for i in range(k):
        j = i + rng.next_below(n - i)
        positions[i], positions[j] = positions[j], positions[i]
        bits[positions[i]] ^= 1
    return Individual(tuple(bits))


def select_uniform(pop: Population, rng: RandomSource) -> Individual:
    if len(pop) == 0:
        raise EmptyPopulation("cannot select from an empty population")
    return pop.members[rng.next_below(len(pop))]


def select_fitness_proportionate(
    pop: Population, f: FitnessFn, rng: RandomSource
) -> Individual:
    if len(pop) == 0:
        raise EmptyPopulation("cannot select from an empty population")
    weights = [float(f(m)) for m in pop.members]
    if any(w < 0 for w in weights):
        # rejected rather than silently shifted: shifting changes the distribution
        raise NegativeFitness(
            "fitness-proportionate selection requires non-negative fitness"
        )
    total = sum(weights)
    if total <= 0.0:
        raise AllZeroFitness("all fitness values are zero; distribution undefined")
    # inverse CDF over the exact draw to stay stream-portable
    x = rng.next_float() * total
    acc = 0.0
    for member, w in zip(pop.members, weights):
        acc += w
        if x < acc:
            return member
    return pop.members[-1]


def best_of(pop: Population, f: FitnessFn) -> Individual:
    if len(pop) == 0:
        raise EmptyPopulation("cannot take the best of an empty population")
    best = pop.members[0]
    best_f = float(f(best))
    for member in pop.members[1:]:
        v = float(f(member))
        if v > best_f:
            best, best_f = member, v
    return best


def merge(a: Population, b: Population) -> Population:
    return Population(a.members + b.members)


def add_individual(pop: Population, ind: Individual) -> Population:
    return Population(pop.members + (ind,))


def sort_by_fitness(pop: Population, f: FitnessFn) -> Population:
    decorated = [(float(f(m)), i, m) for i, m in enumerate(pop.members)]
    decorated.sort(key=lambda t: (-t[0], t[1]))
    return Population(tuple(m for _, _, m in decorated))


def take_first(pop: Population, k: int) -> Population:
    if not 0 <= k <= len(pop):
        raise BadCount(f"take count must be in [0, {len(pop)}], got {k}")
    return Population(pop.members[:k])
