"""Algorithm-agnostic multi-objective machinery.

All objectives are minimized. An objective to be maximized (e.g. the text
dissimilarity of an un-targeted attack) is stored negated.
"""
from .exceptions import ShapeMismatchError, UnevaluatedIndividualError
from .utils import genome_hash
import numpy as np

NSGA2 = 'nsga2'
MOGA = 'moga'
ALGORITHMS = (MOGA, NSGA2)


def as_objectives(values):
    """Validate and convert objective values to an ObjectiveVector.

    Raises
    ------
    ValueError
        If the vector is empty or contains non-finite values.

    Returns
    -------
    numpy.ndarray of float64, read-only
    """
    v = np.array(values, dtype=np.float64).reshape(-1)
    if v.size == 0:
        raise ValueError("Objective vector cannot be empty")
    if not np.all(np.isfinite(v)):
        raise ValueError("Objective values must be finite, got {}"
                         .format(v.tolist()))
    v.setflags(write=False)
    return v


class Individual(object):
    """Candidate solution: a genome with cached evaluation results.

    Parameters
    ----------
    genome : array-like of float
    objectives : array-like of float, optional
        ObjectiveVector in minimization orientation.
    transcript : Transcript, optional
        Oracle output cached at evaluation.

    Attributes
    ----------
    genome : numpy.ndarray (read-only)
    objectives : numpy.ndarray or None
    transcript : Transcript or None
    evaluated : bool
    genome_hash : str
        Content hash of the genome.
    """
    __slots__ = ('_genome', '_objectives', 'transcript', '_hash')

    def __init__(self, genome, objectives=None, transcript=None):
        g = np.array(genome, dtype=np.float64).reshape(-1)
        g.setflags(write=False)
        self._genome = g
        self._objectives = None
        self._hash = None
        self.transcript = transcript
        if objectives is not None:
            self.objectives = objectives

    @property
    def genome(self):
        return self._genome

    @property
    def objectives(self):
        return self._objectives

    @objectives.setter
    def objectives(self, values):
        self._objectives = None if values is None else as_objectives(values)

    @property
    def evaluated(self):
        return self._objectives is not None

    @property
    def genome_hash(self):
        if self._hash is None:
            self._hash = genome_hash(self._genome)
        return self._hash

    def __len__(self):
        return len(self._genome)

    def __repr__(self):
        if self.evaluated:
            return "Individual({} genes, objectives={})".format(
                len(self), self._objectives.tolist())
        return "Individual({} genes, unevaluated)".format(len(self))


def dominates(a, b):
    """Check if objective vector `a` dominates `b`.

    `a` dominates `b` when it is no worse in every objective and strictly
    better in at least one. Equal vectors do not dominate each other.

    Raises
    ------
    ShapeMismatchError
        If the vectors have different lengths.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeMismatchError("Cannot compare objective vectors of "
                                 "lengths {} and {}".format(a.size, b.size))
    return bool(np.all(a <= b) and np.any(a < b))


def dominance_matrix(objectives):
    """Pairwise dominance of the rows of an (N, M) objective matrix.

    Returns
    -------
    numpy.ndarray of bool, shape (N, N)
        Element ``[i, j]`` is True iff row `i` dominates row `j`.
    """
    f = np.asarray(objectives, dtype=np.float64)
    no_worse = np.all(f[:, None, :] <= f[None, :, :], axis=2)
    better = np.any(f[:, None, :] < f[None, :, :], axis=2)
    return no_worse & better


def objective_matrix(pop):
    """Stack the objective vectors of evaluated individuals.

    Raises
    ------
    UnevaluatedIndividualError
        If any member has no objectives.
    ShapeMismatchError
        If the members have different numbers of objectives.
    """
    rows = []
    for i, ind in enumerate(pop):
        if not ind.evaluated:
            raise UnevaluatedIndividualError(
                "Member {} has not been evaluated".format(i))
        rows.append(ind.objectives)
    if not rows:
        return np.empty((0, 0))
    if len({len(r) for r in rows}) > 1:
        raise ShapeMismatchError("Members have different numbers of "
                                 "objectives")
    return np.vstack(rows)


def crowding_distance(front):
    """NSGA-II crowding distance of the members of a single front.

    Larger distance means a sparser neighborhood. Per objective, the front
    is sorted; boundary members get infinity and every interior member
    gains ``(next - prev) / (max - min)``. An objective whose values are
    all equal contributes nothing. Fronts of one or two members are all
    boundary.

    Parameters
    ----------
    front : array-like of shape (K, M)

    Raises
    ------
    ValueError
        If the front is empty.

    Returns
    -------
    numpy.ndarray of float64, shape (K,)
    """
    f = np.asarray(front, dtype=np.float64)
    if f.ndim == 1:
        f = f.reshape(-1, 1)
    k = f.shape[0]
    if k == 0:
        raise ValueError("Crowding distance of an empty front is undefined")
    distance = np.zeros(k)
    if k <= 2:
        distance[:] = np.inf
        return distance
    for m in range(f.shape[1]):
        order = np.argsort(f[:, m], kind='mergesort')
        values = f[order, m]
        span = values[-1] - values[0]
        if span == 0:
            continue
        distance[order[0]] = np.inf
        distance[order[-1]] = np.inf
        distance[order[1:-1]] += (values[2:] - values[:-2]) / span
    return distance


class RankedPopulation(object):
    """Population annotated with the results of ranking.

    Produced by :py:func:`fast_nondominated_sort` (front index and crowding
    distance per member) or :py:func:`dominance_count_rank` (number of
    dominators per member).

    Attributes
    ----------
    members : list of Individual
    objectives : numpy.ndarray of shape (N, M)
    algorithm : {``'nsga2'``, ``'moga'``}
    front_index : numpy.ndarray of int or None
    crowding : numpy.ndarray of float or None
    dominance_count : numpy.ndarray of int
        Always available; for NSGA-II it is computed as a by-product.
    fronts : list of numpy.ndarray or None
        Member positions per front, NSGA-II only.
    """
    def __init__(self, members, objectives, algorithm, dominance_count,
                 front_index=None, crowding=None, fronts=None):
        self.members = list(members)
        self.objectives = objectives
        self.algorithm = algorithm
        self.dominance_count = dominance_count
        self.front_index = front_index
        self.crowding = crowding
        self.fronts = fronts

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, item):
        return self.members[item]

    @property
    def front0(self):
        """Positions of the non-dominated members, in input order."""
        if self.front_index is not None:
            return np.nonzero(self.front_index == 0)[0]
        return np.nonzero(self.dominance_count == 0)[0]

    def order(self):
        """Positions of the members from best to worst.

        NSGA-II: lower front index, then larger crowding distance.
        MOGA: lower dominance count, then smaller first objective.
        Remaining ties keep input order.
        """
        positions = np.arange(len(self.members))
        if self.algorithm == NSGA2:
            crowding = (self.crowding if self.crowding is not None
                        else np.zeros(len(self.members)))
            return np.lexsort((positions, -crowding, self.front_index))
        return np.lexsort((positions, self.objectives[:, 0],
                           self.dominance_count))

    def best(self, count):
        """The `count` best members, best first."""
        return [self.members[i] for i in self.order()[:count]]

    def __repr__(self):
        return "RankedPopulation({} members, {}, {} non-dominated)".format(
            len(self), self.algorithm, len(self.front0))


def fast_nondominated_sort(pop, with_crowding=True):
    """Partition a population into non-dominated fronts.

    Front 0 holds the members no other member dominates; front k+1 holds
    the members that become non-dominated once fronts 0..k are removed.

    Parameters
    ----------
    pop : sequence of Individual
        Every member must be evaluated.
    with_crowding : bool, optional (default True)
        Also compute the crowding distance within each front.

    Raises
    ------
    UnevaluatedIndividualError

    Returns
    -------
    RankedPopulation
    """
    f = objective_matrix(pop)
    n = len(pop)
    dom = dominance_matrix(f) if n else np.zeros((0, 0), dtype=bool)
    dominated_by = dom.sum(axis=0).astype(int)
    remaining = dominated_by.copy()
    front_index = np.full(n, -1, dtype=int)
    fronts = []
    while n and np.any(front_index < 0):
        current = np.nonzero((remaining == 0) & (front_index < 0))[0]
        front_index[current] = len(fronts)
        fronts.append(current)
        remaining -= dom[current].sum(axis=0)
    crowding = None
    if with_crowding:
        crowding = np.zeros(n)
        for front in fronts:
            crowding[front] = crowding_distance(f[front])
    return RankedPopulation(pop, f, NSGA2, dominated_by,
                            front_index=front_index, crowding=crowding,
                            fronts=fronts)


def dominance_count_rank(pop):
    """Rank members by the number of other members dominating them.

    A count of 0 marks a non-dominated member; lower counts are fitter.

    Raises
    ------
    UnevaluatedIndividualError

    Returns
    -------
    RankedPopulation
    """
    f = objective_matrix(pop)
    if len(pop) == 0:
        return RankedPopulation(pop, f, MOGA, np.zeros(0, dtype=int))
    counts = dominance_matrix(f).sum(axis=0).astype(int)
    return RankedPopulation(pop, f, MOGA, counts)


def rank(pop, algorithm):
    """Rank `pop` the way `algorithm` ranks survivors."""
    if algorithm == NSGA2:
        return fast_nondominated_sort(pop)
    if algorithm == MOGA:
        return dominance_count_rank(pop)
    raise ValueError("Unknown algorithm {!r}".format(algorithm))
