"""Synthetic problems with known Pareto fronts for checking the engine."""
from .core import Individual
from .evolution import Problem
from .utils import derive_rng, STREAM_INIT
import numpy as np


def schaffer(x):
    """Schaffer's two-objective function ``(x**2, (x - 2)**2)``.

    The Pareto set is ``0 <= x <= 2``.
    """
    x = float(x)
    return x ** 2, (x - 2) ** 2


def schaffer_front_gap(f1, f2):
    """Distance in the second objective between ``(f1, f2)`` and the
    Schaffer front ``f2 = (sqrt(f1) - 2)**2``."""
    return abs(f2 - (np.sqrt(f1) - 2) ** 2)


class SchafferProblem(Problem):
    """Schaffer's function on a scalar genome.

    Parameters
    ----------
    bounds : tuple of float, optional (default (-10, 10))
        Operators keep the genome within these bounds.
    init_range : tuple of float, optional (default (-4, 6))
        Initial genomes are drawn uniformly from this interval.

    Attributes
    ----------
    evaluations : int
        Number of objective evaluations so far.
    """
    def __init__(self, bounds=(-10.0, 10.0), init_range=(-4.0, 6.0)):
        if not bounds[0] <= init_range[0] < init_range[1] <= bounds[1]:
            raise ValueError("init_range {} must lie within bounds {}"
                             .format(init_range, bounds))
        self.bounds = tuple(bounds)
        self.init_range = tuple(init_range)
        self.evaluations = 0

    def initial_population(self, size, seed):
        return [Individual([derive_rng(seed, 0, STREAM_INIT, i)
                            .uniform(*self.init_range)])
                for i in range(size)]

    def evaluate(self, individuals):
        for individual in individuals:
            if not individual.evaluated:
                individual.objectives = schaffer(individual.genome[0])
                self.evaluations += 1
