"""Algorithm-agnostic evolutionary loop.

Only mating selection and survivor ranking depend on the algorithm (MOGA or
NSGA-II); initialization, crossover, mutation, evaluation, convergence
detection and the final pick are shared.
"""
from .audio import AMPLITUDE_RANGE
from .core import (ALGORITHMS, NSGA2, rank, fast_nondominated_sort,
                   dominance_count_rank)
from .operators import (MutationConfig, SelectionConfig, crossover, mutate,
                        mating_selection)
from .utils import (assert_value, dataclass_from_dict, derive_rng,
                    STREAM_MATING, STREAM_MUTATION, STREAM_FINAL)
from dataclasses import dataclass, field, fields
import logging

log = logging.getLogger(__name__)

MAX_SEED = 2 ** 64 - 1


@dataclass
class EvolutionConfig(object):
    """Parameters of the evolutionary loop.

    Parameters
    ----------
    algorithm : {``'nsga2'``, ``'moga'``}, optional (default ``'nsga2'``)
    population_size : int, optional (default 100)
        Size of the initial population.
    survivor_count : int, optional (default 30)
        Number of members carried into every later generation.
    max_iters : int, optional (default 50)
        Maximum number of generations after the initial one.
    mutation : MutationConfig or dict, optional
    selection : SelectionConfig or dict, optional
    seed : int, optional (default 0)
        Base of every random stream of the run (0 .. 2**64-1).
    parallelism : int, optional (default 1)
        Maximum number of concurrent fitness evaluations.
    stop_on_convergence : bool, optional (default True)
        Stop as soon as the non-dominated genomes repeat across two
        successive generations.

    Raises
    ------
    ConfigError
    """
    algorithm: str = NSGA2
    population_size: int = 100
    survivor_count: int = 30
    max_iters: int = 50
    mutation: MutationConfig = field(default_factory=MutationConfig)
    selection: SelectionConfig = field(default_factory=SelectionConfig)
    seed: int = 0
    parallelism: int = 1
    stop_on_convergence: bool = True

    def __post_init__(self):
        if not isinstance(self.mutation, MutationConfig):
            self.mutation = MutationConfig.from_dict(self.mutation)
        if not isinstance(self.selection, SelectionConfig):
            self.selection = SelectionConfig.from_dict(self.selection)
        assert_value(self.algorithm, None, lambda x: x in ALGORITHMS,
                     'algorithm')
        assert_value(self.population_size, None,
                     lambda x: int(x) == x and x > 0, 'population_size')
        assert_value(self.survivor_count, None,
                     lambda x: int(x) == x and 0 < x <= self.population_size,
                     'survivor_count')
        assert_value(self.max_iters, None, lambda x: int(x) == x and x >= 1,
                     'max_iters')
        assert_value(self.selection.elite_count, None,
                     lambda x: x <= self.survivor_count, 'elite_count')
        assert_value(self.seed, None,
                     lambda x: int(x) == x and 0 <= x <= MAX_SEED, 'seed')
        assert_value(self.parallelism, None,
                     lambda x: int(x) == x and x >= 1, 'parallelism')

    @property
    def elite_count(self):
        return self.selection.elite_count

    def to_dict(self):
        d = {}
        for f in fields(self):
            value = getattr(self, f.name)
            d[f.name] = value.to_dict() if hasattr(value, 'to_dict') else value
        return d

    @classmethod
    def from_dict(cls, d):
        return dataclass_from_dict(cls, d)


class Problem(object):
    """Interface between the evolutionary loop and what is being optimized.

    Subclasses define how the initial population is drawn and how
    individuals are evaluated.

    Attributes
    ----------
    bounds : tuple of float
        Every genome value is kept within these bounds by the operators.
    """
    bounds = AMPLITUDE_RANGE

    def initial_population(self, size, seed):
        """Return `size` unevaluated individuals.

        Random draws for the i-th individual must come from a stream derived
        from `seed` and `i` only.
        """
        raise NotImplementedError

    def evaluate(self, individuals):
        """Set the objectives of every unevaluated member of `individuals`
        in place."""
        raise NotImplementedError


class EvolutionResult(object):
    """Outcome of :py:func:`evolve`.

    Attributes
    ----------
    best : Individual
        Seeded uniform pick among the final non-dominated members.
    population : RankedPopulation
        The final generation.
    generations : int
        Number of generations evaluated, the initial one included.
    converged : bool
        True if the run stopped because the non-dominated set repeated.
    """
    def __init__(self, best, population, generations, converged):
        self.best = best
        self.population = population
        self.generations = generations
        self.converged = converged

    def __repr__(self):
        return ("EvolutionResult(generations={}, converged={}, best={!r})"
                .format(self.generations, self.converged, self.best))


def front_signature(ranked):
    """Set of genome hashes of the non-dominated members."""
    return frozenset(ranked[i].genome_hash for i in ranked.front0)


def select_survivors(parents, children, config):
    """Form the next generation from ranked parents and evaluated children.

    NSGA-II carries the `elite_count` best parents over unchanged and fills
    the remaining places from the other parents and the children by front
    index and crowding distance. MOGA truncates parents and children
    together by dominance count, ties going to the smaller first
    objective.

    Returns
    -------
    list of Individual
        ``min(survivor_count, len(parents) + len(children))`` members.
    """
    n = config.survivor_count
    if parents.algorithm == NSGA2:
        k = min(config.elite_count, n, len(parents))
        order = parents.order()
        elites = [parents[i] for i in order[:k]]
        rest = [parents[i] for i in order[k:]] + list(children)
        if not rest or n == k:
            return elites
        return elites + fast_nondominated_sort(rest).best(n - k)
    pool = list(parents) + list(children)
    return dominance_count_rank(pool).best(n)


def evolve(problem, config, callback=None):
    """Run the evolutionary loop on `problem`.

    Generation 0 is the evaluated initial population. Every following
    generation builds a mating pool from the current members, produces
    three children per pair by crossover, mutates every child, evaluates
    the children and selects the survivors. The loop stops after
    `config.max_iters` generations, or earlier when the genomes of the
    non-dominated members are identical in two successive generations.

    Parameters
    ----------
    problem : Problem
    config : EvolutionConfig
    callback : callable, optional
        Called as ``callback(generation, ranked_population)`` once per
        generation, after ranking.

    Returns
    -------
    EvolutionResult
    """
    algorithm = config.algorithm
    seed = config.seed
    population = problem.initial_population(config.population_size, seed)
    problem.evaluate(population)
    ranked = rank(population, algorithm)
    if callback is not None:
        callback(0, ranked)
    signature = front_signature(ranked)
    converged = False
    generation = 0

    for generation in range(1, config.max_iters + 1):
        rng = derive_rng(seed, generation, STREAM_MATING)
        pairs = mating_selection(ranked, len(ranked), config.selection, rng)
        children = []
        for pair in pairs:
            children.extend(crossover(pair, problem.bounds))
        children = [
            mutate(child, config.mutation,
                   derive_rng(seed, generation, STREAM_MUTATION, i),
                   problem.bounds)
            for i, child in enumerate(children)]
        problem.evaluate(children)

        ranked = rank(select_survivors(ranked, children, config), algorithm)
        log.debug("generation %d: %d pairs, %d members, %d non-dominated",
                  generation, len(pairs), len(ranked), len(ranked.front0))
        if callback is not None:
            callback(generation, ranked)

        previous, signature = signature, front_signature(ranked)
        if config.stop_on_convergence and signature == previous:
            converged = True
            log.info("converged at generation %d", generation)
            break

    front = ranked.front0
    pick = derive_rng(seed, generation, STREAM_FINAL).integers(len(front))
    best = ranked[int(front[pick])]
    return EvolutionResult(best, ranked, generation + 1, converged)
