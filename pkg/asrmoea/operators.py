"""Genetic operators: initialization, mating selection, crossover and
mutation.

Every operator takes an explicit random source. Where per-individual
reproducibility matters (`init_population`, `mutate`), the caller passes one
independent stream per individual (see :py:func:`asrmoea.utils.derive_rng`).
"""
from .audio import AMPLITUDE_RANGE, AudioClip, clamp
from .core import Individual, NSGA2
from .exceptions import ShapeMismatchError
from .utils import (assert_value, dataclass_from_dict, derive_rng,
                    STREAM_INIT)
from collections import namedtuple
from dataclasses import dataclass, asdict, field
import numpy as np

SAME_RANK = 'same_rank'
INVERSE_RANK = 'inverse_rank'
ROULETTE = 'roulette'
SCHEMES = (SAME_RANK, INVERSE_RANK, ROULETTE)

MAX_REDRAWS = 10

MatingPair = namedtuple('MatingPair', ['parent_a', 'parent_b'])


@dataclass
class SelectionConfig(object):
    """Mating and survival selection parameters.

    Parameters
    ----------
    scheme_mix : sequence of 3 floats, optional
        Shares of mating pairs drawn by same-rank, inverse-rank and roulette
        selection (MOGA). Non-negative, summing to 1. Default: 1/3 each.
    tournament_size : int, optional (default 2)
        Tournament size for NSGA-II mating selection.
    elite_count : int, optional (default 1)
        Number of best parents NSGA-II carries over unchanged.
    """
    scheme_mix: tuple = field(default=(1 / 3, 1 / 3, 1 / 3))
    tournament_size: int = 2
    elite_count: int = 1

    def __post_init__(self):
        mix = assert_value(self.scheme_mix,
                           lambda x: tuple(float(v) for v in x),
                           lambda x: len(x) == len(SCHEMES) and
                           all(v >= 0 for v in x) and abs(sum(x) - 1) < 1e-9,
                           'scheme_mix')
        self.scheme_mix = mix
        assert_value(self.tournament_size, None,
                     lambda x: int(x) == x and x >= 2, 'tournament_size')
        assert_value(self.elite_count, None,
                     lambda x: int(x) == x and x >= 0, 'elite_count')

    def to_dict(self):
        d = asdict(self)
        d['scheme_mix'] = list(self.scheme_mix)
        return d

    @classmethod
    def from_dict(cls, d):
        return dataclass_from_dict(cls, d)


@dataclass
class MutationConfig(object):
    """Gaussian mutation parameters.

    Parameters
    ----------
    prob_m : float, optional (default 0.005)
        Per-gene mutation probability.
    sigma : float, optional (default 0.005)
        Standard deviation of the added noise, in genome units.
    """
    prob_m: float = 0.005
    sigma: float = 0.005

    def __post_init__(self):
        self.prob_m = assert_value(self.prob_m, float,
                                   lambda x: 0 <= x <= 1, 'prob_m')
        self.sigma = assert_value(self.sigma, float, lambda x: x >= 0,
                                  'sigma')

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return dataclass_from_dict(cls, d)


def _genes(original):
    if isinstance(original, AudioClip):
        return original.samples
    return np.asarray(original, dtype=np.float64).reshape(-1)


def init_population(original, size, noise_amplitude, rng,
                    bounds=AMPLITUDE_RANGE):
    """Create the initial population around the original signal.

    Each genome is ``clamp(original + u)`` with `u` drawn element-wise
    uniformly from [-noise_amplitude, +noise_amplitude].

    Parameters
    ----------
    original : AudioClip or array-like of float
    size : int
        Number of individuals, positive.
    noise_amplitude : float
        Non-negative.
    rng : numpy.random.Generator or int
        A generator is used for all draws in turn. An integer is a seed
        from which one independent stream per individual is derived.
    bounds : tuple of float, optional (default (-1, 1))

    Returns
    -------
    list of Individual
        Unevaluated.
    """
    if size <= 0:
        raise ValueError("Population size must be positive, got {}"
                         .format(size))
    if noise_amplitude < 0:
        raise ValueError("noise_amplitude must be non-negative")
    genes = _genes(original)
    population = []
    for i in range(size):
        stream = (rng if isinstance(rng, np.random.Generator)
                  else derive_rng(rng, 0, STREAM_INIT, i))
        noise = stream.uniform(-noise_amplitude, noise_amplitude, genes.size)
        population.append(Individual(clamp(genes + noise, *bounds)))
    return population


def _pairs_from_lists(pop, l1, l2):
    return [MatingPair(pop[a], pop[b]) for a, b in zip(l1, l2) if a != b]


def same_rank_selection(pop, rng=None):
    """Pair members holding the same rank under each of two objectives.

    Members are sorted best-first by objective 1 into `l1` and best-first
    by objective 2 into `l2` (stable sorts); ``(l1[r], l2[r])`` is paired
    for every rank `r`. Self-pairs are dropped.

    Parameters
    ----------
    pop : RankedPopulation
    rng : ignored
        Accepted for a uniform selection interface.

    Returns
    -------
    list of MatingPair
    """
    f = pop.objectives
    if len(pop) == 0:
        return []
    l1 = np.argsort(f[:, 0], kind='mergesort')
    l2 = np.argsort(f[:, 1], kind='mergesort')
    return _pairs_from_lists(pop, l1, l2)


def inverse_rank_selection(pop, rng=None):
    """Pair the r-th best member by objective 1 with the r-th worst member
    by objective 2. Self-pairs are dropped.

    Returns
    -------
    list of MatingPair
    """
    f = pop.objectives
    if len(pop) == 0:
        return []
    l1 = np.argsort(f[:, 0], kind='mergesort')
    l2 = np.argsort(-f[:, 1], kind='mergesort')
    return _pairs_from_lists(pop, l1, l2)


def roulette_probabilities(fitness):
    """Selection probabilities ``p_i = f_i / sum(f)`` for positive fitness
    scores."""
    f = np.asarray(fitness, dtype=np.float64)
    if f.size == 0 or np.any(f <= 0):
        raise ValueError("Roulette selection needs positive fitness scores")
    p = f / f.sum()
    # renormalize so that the probabilities sum to one exactly
    p[-1] = 1.0 - p[:-1].sum()
    return p


def roulette_wheel(fitness, size, rng):
    """Draw `size` member positions with probability proportional to
    `fitness`."""
    p = roulette_probabilities(fitness)
    return rng.choice(len(p), size=size, p=p)


def scalar_fitness(pop):
    """Roulette fitness of ranked members: ``1 / (1 + dominance_count)``."""
    return 1.0 / (1.0 + pop.dominance_count)


def _draw_distinct(draw, first):
    for _ in range(MAX_REDRAWS):
        second = draw()
        if second != first:
            return second
    return None


def roulette_selection(pop, pair_count, rng):
    """Draw mating pairs by roulette wheel over dominance counts.

    Each parent is drawn independently with probability proportional to
    ``1 / (1 + dominance_count)``. A self-pair is redrawn a bounded number
    of times and skipped if it persists.

    Returns
    -------
    list of MatingPair
        At most `pair_count` pairs.
    """
    n = len(pop)
    if n < 2 or pair_count <= 0:
        return []
    p = roulette_probabilities(scalar_fitness(pop))

    def draw():
        return int(rng.choice(n, p=p))

    pairs = []
    for _ in range(pair_count):
        a = draw()
        b = _draw_distinct(draw, a)
        if b is not None:
            pairs.append(MatingPair(pop[a], pop[b]))
    return pairs


def tournament_winner(pop, contestants):
    """The best of `contestants`: lower front index, then larger crowding,
    then earlier position."""
    contestants = np.asarray(contestants)
    keys = np.lexsort((contestants,
                       -pop.crowding[contestants],
                       pop.front_index[contestants]))
    return int(contestants[keys[0]])


def nsga2_mating_selection(pop, pair_count, tournament_size, rng):
    """Draw mating pairs by tournaments on (front index, crowding distance).

    Parameters
    ----------
    pop : RankedPopulation
        Ranked by :py:func:`asrmoea.core.fast_nondominated_sort`.
    pair_count : int
    tournament_size : int
        Contestants are drawn uniformly without replacement (with
        replacement if the population is smaller than the tournament).
    rng : numpy.random.Generator

    Returns
    -------
    list of MatingPair
    """
    n = len(pop)
    if n < 2 or pair_count <= 0:
        return []
    replace = n < tournament_size

    def draw():
        return tournament_winner(
            pop, rng.choice(n, size=tournament_size, replace=replace))

    pairs = []
    for _ in range(pair_count):
        a = draw()
        b = _draw_distinct(draw, a)
        if b is not None:
            pairs.append(MatingPair(pop[a], pop[b]))
    return pairs


def scheme_quotas(mix, pair_count):
    """Split `pair_count` among the selection schemes in proportion to
    `mix` (largest remainder)."""
    raw = np.asarray(mix, dtype=np.float64) * pair_count
    quotas = np.floor(raw).astype(int)
    shortfall = pair_count - quotas.sum()
    for i in np.argsort(-(raw - quotas), kind='mergesort')[:shortfall]:
        quotas[i] += 1
    return quotas.tolist()


def moga_mating_selection(pop, pair_count, mix, rng):
    """Build a MOGA mating pool from the ensemble of three schemes.

    Same-rank and inverse-rank selection contribute their pairs in rank
    order up to their quota; roulette selection fills its own quota plus
    whatever the rank-based schemes could not supply.

    Returns
    -------
    list of MatingPair
    """
    same_q, inverse_q, _ = scheme_quotas(mix, pair_count)
    pairs = same_rank_selection(pop, rng)[:same_q]
    pairs += inverse_rank_selection(pop, rng)[:inverse_q]
    roulette_q = pair_count - len(pairs)
    pairs += roulette_selection(pop, roulette_q, rng)
    return pairs


def mating_selection(pop, pair_count, selection, rng):
    """Dispatch to the mating selection of the population's algorithm."""
    if pop.algorithm == NSGA2:
        return nsga2_mating_selection(pop, pair_count,
                                      selection.tournament_size, rng)
    return moga_mating_selection(pop, pair_count, selection.scheme_mix, rng)


def crossover(pair, bounds=AMPLITUDE_RANGE):
    """Arithmetic recombination producing three children.

    The children are ``(p1 + p2) / 2``, ``(2 p1 + p2) / 3`` and
    ``(p1 + 2 p2) / 3``, clamped to `bounds`. Each lies between the parents
    gene by gene.

    Raises
    ------
    ShapeMismatchError
        If the parents' genomes differ in length.

    Returns
    -------
    tuple of 3 Individual
        Unevaluated.
    """
    p1 = pair.parent_a.genome
    p2 = pair.parent_b.genome
    if p1.shape != p2.shape:
        raise ShapeMismatchError("Parents have genomes of lengths {} and {}"
                                 .format(p1.size, p2.size))
    delta = p2 - p1
    return (Individual(clamp(p1 + delta / 2, *bounds)),
            Individual(clamp(p1 + delta / 3, *bounds)),
            Individual(clamp(p1 + 2 * delta / 3, *bounds)))


def mutate(individual, cfg, rng, bounds=AMPLITUDE_RANGE):
    """Add Gaussian noise to randomly chosen genes.

    Each gene is independently, with probability `cfg.prob_m`, shifted by
    a draw from N(0, cfg.sigma); the result is clamped to `bounds`.

    Returns
    -------
    Individual
        A new, unevaluated individual.
    """
    genome = np.array(individual.genome)
    if cfg.prob_m > 0 and cfg.sigma > 0:
        hit = np.nonzero(rng.random(genome.size) < cfg.prob_m)[0]
        genome[hit] += rng.normal(0.0, cfg.sigma, hit.size)
        genome = clamp(genome, *bounds)
    return Individual(genome)
