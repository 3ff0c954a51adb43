"""Black-box adversarial attack on a speech recognizer.

Each individual is a candidate waveform with one gene per sample. Two
objectives are minimized: the MFCC distance to the original audio, and a
transcript term. In an un-targeted attack the transcript term is the
negated word edit distance to the original transcript. In a targeted
attack it is the edit distance to the target phrase.
"""
from .audio import AudioClip, AMPLITUDE_RANGE, ATTACK_SAMPLE_RATE
from .evolution import EvolutionConfig, Problem, evolve
from .exceptions import (ConfigError, OracleError, ShapeMismatchError,
                         WavFormatError)
from .features import MfccConfig, compute_mfcc, mfcc_distance
from .operators import init_population
from .oracles import CachedTranscriber, Oracle, make_oracle
from .text import Transcript, normalize, word_edit_distance
from .utils import assert_value, genome_hash, is_string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
import json
import logging

log = logging.getLogger(__name__)

UNTARGETED = 'untargeted'
TARGETED = 'targeted'
MODES = (UNTARGETED, TARGETED)


def as_transcript(x):
    """Transcript from raw text or a token sequence; None stays None."""
    if x is None or isinstance(x, Transcript):
        return x
    if is_string(x):
        return normalize(x)
    return Transcript(x)


@dataclass
class AttackConfig(EvolutionConfig):
    """Configuration of one adversarial attack.

    Extends :py:class:`.EvolutionConfig` with

    Parameters
    ----------
    mode : {``'untargeted'``, ``'targeted'``}, optional
        (default ``'untargeted'``)
    target_text : Transcript or str, optional
        Required for, and only allowed in, the targeted mode.
    init_noise_amplitude : float, optional (default 0.01)
        Half-width of the uniform noise added to the original to build the
        initial population.
    mfcc : MfccConfig or dict, optional

    Raises
    ------
    ConfigError
    """
    mode: str = UNTARGETED
    target_text: Transcript = None
    init_noise_amplitude: float = 0.01
    mfcc: MfccConfig = field(default_factory=MfccConfig)

    def __post_init__(self):
        super(AttackConfig, self).__post_init__()
        if not isinstance(self.mfcc, MfccConfig):
            self.mfcc = MfccConfig.from_dict(self.mfcc)
        assert_value(self.mode, None, lambda x: x in MODES, 'mode')
        self.target_text = as_transcript(self.target_text)
        if self.mode == TARGETED and not self.target_text:
            raise ConfigError("Targeted attack needs a non-empty target_text")
        if self.mode == UNTARGETED and self.target_text is not None:
            raise ConfigError("target_text is only allowed in targeted mode")
        self.init_noise_amplitude = assert_value(
            self.init_noise_amplitude, float, lambda x: x >= 0,
            'init_noise_amplitude')

    def to_dict(self):
        d = super(AttackConfig, self).to_dict()
        if self.target_text is not None:
            d['target_text'] = self.target_text.text
        return d


@dataclass
class GenerationRecord(object):
    """Snapshot of one generation, written as one line of the run history.

    Attributes
    ----------
    generation : int
    objectives : list of list of float
        Objective vectors of all members, in population order.
    front0 : list of bool
        Membership of each member in the non-dominated set.
    best_transcript : str
        Transcript of the best-ranked member.
    best_objectives : list of float
    oracle_calls : int
        Cumulative number of real oracle invocations.
    """
    generation: int
    objectives: list
    front0: list
    best_transcript: str
    best_objectives: list
    oracle_calls: int

    @classmethod
    def from_population(cls, generation, ranked, oracle_calls):
        flags = [False] * len(ranked)
        for i in ranked.front0:
            flags[i] = True
        best = ranked[int(ranked.order()[0])]
        return cls(generation=generation,
                   objectives=ranked.objectives.tolist(),
                   front0=flags,
                   best_transcript=best.transcript.text,
                   best_objectives=best.objectives.tolist(),
                   oracle_calls=oracle_calls)

    def to_dict(self):
        d = {'type': 'generation'}
        d.update(asdict(self))
        return d


class HistoryWriter(object):
    """Append-only JSON-lines run log, flushed after every record."""
    def __init__(self, path):
        self.path = path
        self._file = None

    def __enter__(self):
        if self.path is not None:
            self._file = open(self.path, 'w', encoding='utf-8')
        return self

    def __exit__(self, *exc):
        if self._file is not None:
            self._file.close()
            self._file = None

    def write(self, obj):
        if self._file is None:
            return
        self._file.write(json.dumps(obj, sort_keys=True) + '\n')
        self._file.flush()


def as_transcriber(binding):
    """Wrap a binding, dict or Oracle into a CachedTranscriber."""
    if isinstance(binding, CachedTranscriber):
        return binding
    if isinstance(binding, Oracle):
        return CachedTranscriber(binding)
    return CachedTranscriber(make_oracle(binding))


def evaluate_fitness(individual, original, original_transcript, cfg, binding,
                     original_features=None, index=None):
    """Compute and store the objectives of one candidate.

    Parameters
    ----------
    individual : Individual
    original : AudioClip
    original_transcript : Transcript
    cfg : AttackConfig
    binding : TranscriberBinding, Oracle or CachedTranscriber
    original_features : MfccMatrix, optional
        MFCC matrix of `original`, computed if omitted.
    index : int, optional
        Position of the individual, reported on oracle failure.

    Raises
    ------
    ShapeMismatchError
        If the genome and the original differ in length.
    OracleError

    Returns
    -------
    numpy.ndarray
        ``(mfcc distance, -edit distance to original)`` or
        ``(mfcc distance, edit distance to target)``.
    """
    if len(individual) != len(original):
        raise ShapeMismatchError("Genome of {} genes for an original of {} "
                                 "samples".format(len(individual),
                                                  len(original)))
    transcriber = as_transcriber(binding)
    clip = AudioClip(individual.genome, original.sample_rate)
    transcript = transcriber.transcribe(clip, key=individual.genome_hash,
                                        index=index)
    if original_features is None:
        original_features = compute_mfcc(original, cfg.mfcc)
    acoustic = mfcc_distance(original_features, compute_mfcc(clip, cfg.mfcc))
    if cfg.mode == UNTARGETED:
        textual = -float(word_edit_distance(original_transcript, transcript))
    else:
        textual = float(word_edit_distance(cfg.target_text, transcript))
    individual.transcript = transcript
    individual.objectives = (acoustic, textual)
    return individual.objectives


class AdversarialProblem(Problem):
    """The attack as an optimization problem for :py:func:`.evolve`.

    Evaluation results are kept per genome hash, so a genome seen before
    (crossover of equal parents, surviving elites) is neither transcribed
    nor featurized again. Distinct new genomes of a batch are evaluated
    concurrently up to `cfg.parallelism`.
    """
    bounds = AMPLITUDE_RANGE

    def __init__(self, original, original_transcript, cfg, transcriber):
        self.original = original
        self.original_transcript = original_transcript
        self.cfg = cfg
        self.transcriber = transcriber
        self.original_features = compute_mfcc(original, cfg.mfcc)
        self._results = {}

    def initial_population(self, size, seed):
        return init_population(self.original, size,
                               self.cfg.init_noise_amplitude, seed,
                               self.bounds)

    def _evaluate_one(self, item):
        index, individual = item
        evaluate_fitness(individual, self.original, self.original_transcript,
                         self.cfg, self.transcriber, self.original_features,
                         index)
        return individual.objectives, individual.transcript

    def evaluate(self, individuals):
        pending = {}
        for i, individual in enumerate(individuals):
            if individual.evaluated:
                continue
            key = individual.genome_hash
            if key not in self._results and key not in pending:
                pending[key] = (i, individual)
        items = list(pending.values())
        if self.cfg.parallelism > 1 and len(items) > 1:
            with ThreadPoolExecutor(self.cfg.parallelism) as executor:
                results = list(executor.map(self._evaluate_one, items))
        else:
            results = [self._evaluate_one(item) for item in items]
        self._results.update(zip(pending.keys(), results))
        for individual in individuals:
            if not individual.evaluated:
                objectives, transcript = self._results[individual.genome_hash]
                individual.objectives = objectives
                individual.transcript = transcript


class AttackResult(object):
    """Outcome of :py:func:`run_attack`.

    Attributes
    ----------
    best : Individual
    history : list of GenerationRecord
    original_transcript : Transcript
    converged : bool
    oracle_calls : int
    """
    def __init__(self, best, history, original_transcript, converged,
                 oracle_calls):
        self.best = best
        self.history = history
        self.original_transcript = original_transcript
        self.converged = converged
        self.oracle_calls = oracle_calls

    def best_clip(self, sample_rate=ATTACK_SAMPLE_RATE):
        return AudioClip(self.best.genome, sample_rate)

    def __repr__(self):
        return "AttackResult({} generations, best={!r})".format(
            len(self.history), self.best)


def run_attack(original, cfg, binding, history_path=None):
    """Evolve an adversarial version of `original`.

    Parameters
    ----------
    original : AudioClip
        16 kHz audio.
    cfg : AttackConfig
    binding : TranscriberBinding, dict, Oracle or CachedTranscriber
    history_path : str or path-like, optional
        File receiving one JSON object per generation and a final summary
        object. Records are flushed as they are produced, so the file holds
        the partial history if the run aborts.

    Raises
    ------
    WavFormatError
        If `original` is not 16 kHz audio.
    OracleError
        If the oracle keeps failing for an individual.

    Returns
    -------
    AttackResult
    """
    if original.sample_rate != ATTACK_SAMPLE_RATE:
        raise WavFormatError("Attacks need {} Hz audio, got {} Hz".format(
            ATTACK_SAMPLE_RATE, original.sample_rate))
    transcriber = as_transcriber(binding)
    history = []
    with HistoryWriter(history_path) as writer:
        original_transcript = transcriber.transcribe(
            original, key=genome_hash(original.samples))
        log.info("attacking %.2f s clip (%s), original transcript %r",
                 original.duration, cfg.mode, original_transcript.text)
        problem = AdversarialProblem(original, original_transcript, cfg,
                                     transcriber)

        def record(generation, ranked):
            rec = GenerationRecord.from_population(generation, ranked,
                                                   transcriber.calls)
            history.append(rec)
            writer.write(rec.to_dict())

        summary = {'type': 'summary',
                   'original_transcript': original_transcript.text,
                   'config': cfg.to_dict()}
        try:
            result = evolve(problem, cfg, callback=record)
        except OracleError as e:
            summary.update(status='aborted', error=str(e),
                           generations=len(history),
                           oracle_calls=transcriber.calls)
            writer.write(summary)
            log.error("attack aborted after %d generation(s): %s",
                      len(history), e)
            raise
        best = result.best
        summary.update(status='completed',
                       generations=result.generations,
                       converged=result.converged,
                       best_objectives=best.objectives.tolist(),
                       best_transcript=best.transcript.text,
                       oracle_calls=transcriber.calls)
        writer.write(summary)
    log.info("attack finished after %d generation(s): best %r -> %r",
             result.generations, best.objectives.tolist(),
             best.transcript.text)
    return AttackResult(best, history, original_transcript, result.converged,
                        transcriber.calls)


def pareto_snapshot(pop):
    """Objective vectors of the non-dominated members, sorted by the first
    objective (ties by the second).

    Parameters
    ----------
    pop : RankedPopulation

    Returns
    -------
    list of numpy.ndarray
    """
    front = pop.objectives[pop.front0]
    order = sorted(range(len(front)), key=lambda i: tuple(front[i]))
    return [front[i] for i in order]
