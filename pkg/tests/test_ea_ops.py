"""Variation and selection operators against enumeration oracles and
their stated sampling distributions."""

import itertools
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from blockea import ea
from blockea.rng import RandomSource


class ScriptedRng:
    """Stand-in random source returning queued raw draws, for forcing
    specific cuts and choices in enumeration oracles."""

    def __init__(self, below=(), floats=()):
        self.below = list(below)
        self.floats = list(floats)

    def next_below(self, bound):
        v = self.below.pop(0)
        assert 0 <= v < bound
        return v

    def next_float(self):
        return self.floats.pop(0)


def bits(text):
    return ea.init_individual_explicit(text)


st_bits = st.text(alphabet="01", min_size=1, max_size=24)


# ---- initialisation -------------------------------------------------


def test_init_random_frequencies():
    rng = RandomSource(1)
    ones = sum(ea.init_individual_random(1, rng).bits[0] for _ in range(10_000))
    assert abs(ones / 10_000 - 0.5) < 0.02


def test_init_random_fixed_seed_regression():
    # determinism oracle: frozen after the first run with seed 42
    rng = RandomSource(42)
    assert ea.init_individual_random(20, rng).text == "11000010101001001110"


def test_init_random_bad_length():
    with pytest.raises(ea.BadLength):
        ea.init_individual_random(0, RandomSource(1))


def test_init_explicit():
    assert ea.init_individual_explicit("101").bits == (1, 0, 1)
    with pytest.raises(ea.BadCharacter):
        ea.init_individual_explicit("")
    with pytest.raises(ea.BadCharacter):
        ea.init_individual_explicit("10a")


# ---- crossover -------------------------------------------------------


def test_one_point_forced_cut():
    # cut = 1 + draw; draw 1 forces cut 2
    child = ea.one_point_crossover(bits("1111"), bits("0000"), ScriptedRng([1]))
    assert child.text == "1100"


def test_one_point_all_cuts_prefix_suffix():
    a, b = bits("1111"), bits("0000")
    for draw in range(3):
        child = ea.one_point_crossover(a, b, ScriptedRng([draw]))
        cut = 1 + draw
        assert child.text == "1" * cut + "0" * (4 - cut)


@given(st_bits.filter(lambda s: len(s) >= 2))
def test_one_point_identical_parents(text):
    a = bits(text)
    child = ea.one_point_crossover(a, a, RandomSource(7))
    assert child == a


def test_one_point_length_mismatch():
    with pytest.raises(ea.LengthMismatch):
        ea.one_point_crossover(bits("1111"), bits("00000"), RandomSource(1))
    with pytest.raises(ea.BadLength):
        ea.one_point_crossover(bits("1"), bits("0"), RandomSource(1))


def test_two_point_forced_cuts():
    # draws 0 then 2 force (c1, c2) = (1, 3)
    child = ea.two_point_crossover(bits("1111"), bits("0000"), ScriptedRng([0, 2]))
    assert child.text == "1001"


def test_two_point_exhaustive_segments():
    a, b = bits("1111"), bits("0000")
    n = 4
    for d1, d2 in itertools.permutations(range(n - 1), 2):
        child = ea.two_point_crossover(a, b, ScriptedRng([d1, d2]))
        c1, c2 = sorted((1 + d1, 1 + d2))
        for i in range(n):
            expected = b.bits[i] if c1 <= i < c2 else a.bits[i]
            assert child.bits[i] == expected


@given(st_bits.filter(lambda s: len(s) >= 3))
def test_two_point_identical_parents(text):
    a = bits(text)
    assert ea.two_point_crossover(a, a, RandomSource(3)) == a


def test_uniform_child_bits_from_parents():
    rng = RandomSource(5)
    a, b = bits("110010"), bits("011100")
    for _ in range(50):
        child = ea.uniform_crossover(a, b, rng)
        assert all(c in (x, y) for c, x, y in zip(child.bits, a.bits, b.bits))


def test_uniform_ones_count_stat():
    rng = RandomSource(6)
    a, b = bits("1" * 100), bits("0" * 100)
    total = sum(sum(ea.uniform_crossover(a, b, rng).bits) for _ in range(10_000))
    assert abs(total / 10_000 - 50) < 1.5


# ---- mutation --------------------------------------------------------


def test_mutate_per_bit_extremes():
    rng = RandomSource(2)
    ind = bits("10110")
    assert ea.mutate_per_bit(ind, 0.0, rng) == ind
    assert ea.mutate_per_bit(ind, 1.0, rng).text == "01001"
    with pytest.raises(ea.BadProbability):
        ea.mutate_per_bit(ind, 1.5, rng)


def test_mutate_per_bit_flip_count_mean():
    rng = RandomSource(9)
    ind = ea.Individual(tuple([0] * 100))
    n_trials = 100_000
    flips = 0
    for _ in range(n_trials):
        flips += sum(ea.mutate_per_bit(ind, 0.01, rng).bits)
    assert abs(flips / n_trials - 1.0) < 0.05


def test_mutate_per_bit_chi_square_binomial():
    # flip-count distribution vs Binomial(20, 0.05) at 1e5 samples
    rng = RandomSource(13)
    ind = ea.Individual(tuple([0] * 20))
    counts = {}
    n_trials = 100_000
    for _ in range(n_trials):
        k = sum(ea.mutate_per_bit(ind, 0.05, rng).bits)
        counts[k] = counts.get(k, 0) + 1
    observed, expected = [], []
    tail_obs = tail_exp = 0.0
    for k in range(21):
        e = stats.binom.pmf(k, 20, 0.05) * n_trials
        if e < 5:
            tail_obs += counts.get(k, 0)
            tail_exp += e
        else:
            observed.append(counts.get(k, 0))
            expected.append(e)
    observed.append(tail_obs)
    expected.append(tail_exp)
    scale = sum(observed) / sum(expected)
    result = stats.chisquare(observed, [e * scale for e in expected])
    assert result.pvalue > 0.001


def test_mutate_k_bits_extremes():
    rng = RandomSource(4)
    ind = bits("10110")
    assert ea.mutate_k_bits(ind, 0, rng) == ind
    assert ea.mutate_k_bits(ind, 5, rng).text == "01001"
    with pytest.raises(ea.BadCount):
        ea.mutate_k_bits(ind, 6, rng)


def test_mutate_k_bits_exact_count():
    rng = RandomSource(5)
    ind = ea.Individual(tuple([0] * 12))
    for k in range(13):
        assert sum(ea.mutate_k_bits(ind, k, rng).bits) == k


def test_mutate_k_bits_pair_frequencies():
    rng = RandomSource(17)
    ind = ea.Individual(tuple([0] * 4))
    counts = {}
    n_trials = 100_000
    for _ in range(n_trials):
        flipped = tuple(
            i for i, b in enumerate(ea.mutate_k_bits(ind, 2, rng).bits) if b
        )
        counts[flipped] = counts.get(flipped, 0) + 1
    assert len(counts) == 6
    for pair, count in counts.items():
        assert abs(count / n_trials - 1 / 6) < 0.01, pair


# ---- selection -------------------------------------------------------


def test_select_uniform():
    rng = RandomSource(3)
    single = ea.Population((bits("101"),))
    assert ea.select_uniform(single, rng) == bits("101")
    with pytest.raises(ea.EmptyPopulation):
        ea.select_uniform(ea.Population(), rng)

    members = [bits("0001"), bits("0010"), bits("0100"), bits("1000")]
    pop = ea.Population(tuple(members))
    counts = {m: 0 for m in members}
    n_draws = 100_000
    for _ in range(n_draws):
        counts[ea.select_uniform(pop, rng)] += 1
    for count in counts.values():
        assert abs(count / n_draws - 0.25) < 0.01


def test_select_proportionate_distribution():
    rng = RandomSource(21)
    pop = ea.Population((bits("1"), bits("111")))
    counts = [0, 0]
    n_draws = 100_000
    for _ in range(n_draws):
        # fitness (1, 3) via onemax-style count of ones
        chosen = ea.select_fitness_proportionate(
            pop, lambda ind: float(sum(ind.bits)), rng
        )
        counts[0 if chosen.n == 1 else 1] += 1
    assert abs(counts[0] / n_draws - 0.25) < 0.01
    assert abs(counts[1] / n_draws - 0.75) < 0.01


def test_select_proportionate_equal_fitness_is_uniform():
    rng = RandomSource(23)
    pop = ea.Population((bits("01"), bits("10"), bits("11")))
    counts = {m: 0 for m in pop.members}
    for _ in range(30_000):
        counts[ea.select_fitness_proportionate(pop, lambda i: 2.0, rng)] += 1
    for count in counts.values():
        assert abs(count / 30_000 - 1 / 3) < 0.02


def test_select_proportionate_errors():
    rng = RandomSource(1)
    with pytest.raises(ea.EmptyPopulation):
        ea.select_fitness_proportionate(ea.Population(), lambda i: 1.0, rng)
    pop = ea.Population((bits("0"), bits("0")))
    with pytest.raises(ea.AllZeroFitness):
        ea.select_fitness_proportionate(pop, lambda i: 0.0, rng)
    with pytest.raises(ea.NegativeFitness):
        ea.select_fitness_proportionate(pop, lambda i: -1.0, rng)


def test_best_of():
    onemax = lambda ind: float(sum(ind.bits))
    single = ea.Population((bits("01"),))
    assert ea.best_of(single, onemax) == bits("01")
    with pytest.raises(ea.EmptyPopulation):
        ea.best_of(ea.Population(), onemax)

    # ties break to the first occurrence: fitness (3, 7, 7) -> index 1
    pop = ea.Population((bits("0111"), bits("1111111"), bits("1110111")))
    fitness = {pop.members[0]: 3.0, pop.members[1]: 7.0, pop.members[2]: 7.0}
    assert ea.best_of(pop, lambda i: fitness[i]) == pop.members[1]


def test_best_of_matches_scan_oracle():
    rng = RandomSource(31)
    onemax = lambda ind: float(sum(ind.bits))
    for _ in range(20):
        pop = ea.init_population_random(10, 16, rng)
        best = ea.best_of(pop, onemax)
        assert onemax(best) == max(onemax(m) for m in pop.members)
        first = next(m for m in pop.members if onemax(m) == onemax(best))
        assert best == first


# ---- population plumbing --------------------------------------------


def test_merge():
    empty = ea.Population()
    p = ea.Population((bits("1"), bits("0")))
    assert ea.merge(empty, p) == p
    q = ea.Population((bits("1"),))
    merged = ea.merge(p, q)
    assert len(merged) == len(p) + len(q)
    assert merged.members == p.members + q.members


def test_sort_stability():
    onemax = lambda ind: float(sum(ind.bits))
    a, b_, c, d = bits("1000"), bits("0110"), bits("1100"), bits("0111")
    pop = ea.Population((a, b_, c, d))  # fitness 1, 2, 2, 3
    ordered = ea.sort_by_fitness(pop, onemax)
    assert ordered.members == (d, b_, c, a)


@given(st.lists(st_bits.map(bits), max_size=12))
@settings(max_examples=50)
def test_sort_is_permutation_and_descending(members):
    onemax = lambda ind: float(sum(ind.bits))
    pop = ea.Population(tuple(members))
    ordered = ea.sort_by_fitness(pop, onemax)
    assert Counter(ordered.members) == Counter(pop.members)
    values = [onemax(m) for m in ordered.members]
    assert values == sorted(values, reverse=True)


def test_take_first():
    pop = ea.Population((bits("1"), bits("0"), bits("1")))
    assert ea.take_first(pop, 0) == ea.Population()
    assert ea.take_first(pop, 3) == pop
    assert ea.take_first(pop, 2).members == pop.members[:2]
    with pytest.raises(ea.BadCount):
        ea.take_first(pop, 4)


def test_mu_plus_lambda_truncation_matches_oracle():
    rng = RandomSource(37)
    onemax = lambda ind: float(sum(ind.bits))
    parents = ea.init_population_random(10, 12, rng)
    offspring = ea.init_population_random(10, 12, rng)
    merged = ea.merge(parents, offspring)
    survivors = ea.take_first(ea.sort_by_fitness(merged, onemax), 10)
    oracle = sorted((onemax(m) for m in merged.members), reverse=True)[:10]
    assert [onemax(m) for m in survivors.members] == oracle


def test_operators_do_not_mutate_inputs():
    rng = RandomSource(41)
    a, b_ = bits("1111"), bits("0000")
    before = (a.bits, b_.bits)
    ea.one_point_crossover(a, b_, rng)
    ea.uniform_crossover(a, b_, rng)
    ea.mutate_per_bit(a, 0.5, rng)
    ea.mutate_k_bits(a, 2, rng)
    assert (a.bits, b_.bits) == before
