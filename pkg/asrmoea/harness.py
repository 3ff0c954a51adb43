"""Batch attacks, evaluation reports and transfer experiments."""
from .attack import AttackConfig, run_attack, TARGETED, UNTARGETED
from .audio import ATTACK_SAMPLE_RATE, load_wav, save_wav
from .exceptions import ConfigError, NoEligibleTargetError, ZeroVarianceError
from .features import correlation_coefficient
from .oracles import (CachedTranscriber, TranscriberBinding, make_oracle,
                      TOY)
from .text import normalize, word_edit_distance, wer_ratio
from .utils import (derive_rng, derive_seed, genome_hash, is_dict,
                    STREAM_SAMPLE, STREAM_TARGET)
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import json
import logging
import numpy as np
import os
import pandas as pd
import warnings

log = logging.getLogger(__name__)

MANIFEST_FILE = 'manifest.json'
MIN_TARGET_LENGTH = 2

OK = 'ok'
FAILED = 'failed'


class RunSettings(object):
    """Parsed run configuration file.

    Parameters
    ----------
    params : dict
        AttackConfig fields as read from the file.
    binding : TranscriberBinding
    target_corpus : str, optional
        Phrase file from which targets are drawn per sample when the
        configuration is targeted and names no explicit target.
    """
    def __init__(self, params, binding, target_corpus=None):
        self.params = dict(params)
        self.binding = binding
        self.target_corpus = target_corpus

    @property
    def mode(self):
        return self.params.get('mode', UNTARGETED)

    @property
    def seed(self):
        return int(self.params.get('seed', 0))

    @property
    def draws_targets(self):
        return (self.mode == TARGETED and
                self.params.get('target_text') is None)

    def attack_config(self, **overrides):
        """Build the AttackConfig of one run, `overrides` replacing file
        values."""
        return AttackConfig.from_dict(dict(self.params, **overrides))

    def validate(self):
        """Check every value of the file.

        Raises
        ------
        ConfigError
        """
        if self.draws_targets:
            if self.target_corpus is None:
                raise ConfigError("Targeted configuration needs either "
                                  "target_text or target_corpus")
            # the target is drawn per sample; check the rest untargeted
            self.attack_config(mode=UNTARGETED, target_text=None)
        else:
            self.attack_config()
            if self.target_corpus is not None:
                warnings.warn("target_corpus is ignored: the configuration "
                              "is {} or names a target_text"
                              .format(self.mode))

    def __repr__(self):
        return "RunSettings({!r}, {!r})".format(self.params, self.binding)


def read_json(path, what='JSON file'):
    try:
        with open(path, encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError("{} {} is not valid JSON: {}".format(what, path, e))


def load_config(path):
    """Read a run configuration file.

    The file is a JSON object holding the AttackConfig fields (with nested
    ``mutation``, ``selection`` and ``mfcc`` objects), an ``oracle`` object
    describing the transcriber, and optionally ``target_corpus``. A relative
    corpus path is taken relative to the configuration file.

    Raises
    ------
    ConfigError
    OSError
        If the file cannot be read.

    Returns
    -------
    RunSettings
    """
    doc = read_json(path, 'Configuration')
    if not is_dict(doc):
        raise ConfigError("Configuration {} must be a JSON object"
                          .format(path))
    params = dict(doc)
    if 'oracle' not in params:
        raise ConfigError("Configuration {} has no 'oracle' object"
                          .format(path))
    binding = TranscriberBinding.from_dict(params.pop('oracle'))
    corpus = params.pop('target_corpus', None)
    if corpus is not None and not os.path.isabs(corpus):
        corpus = os.path.join(os.path.dirname(os.path.abspath(path)), corpus)
    settings = RunSettings(params, binding, corpus)
    settings.validate()
    return settings


def parse_binding(arg):
    """Interpret a command-line oracle argument.

    `arg` is either ``'toy'``, an inline JSON object, or the path of a JSON
    file holding a binding object or a whole run configuration (whose
    ``oracle`` member is then used).

    Returns
    -------
    TranscriberBinding
    """
    if isinstance(arg, TranscriberBinding):
        return arg
    if arg == TOY:
        return TranscriberBinding(TOY)
    if arg.lstrip().startswith('{'):
        try:
            doc = json.loads(arg)
        except json.JSONDecodeError as e:
            raise ConfigError("Invalid inline oracle binding: {}".format(e))
    else:
        doc = read_json(arg, 'Oracle binding')
    if is_dict(doc) and 'oracle' in doc:
        doc = doc['oracle']
    return TranscriberBinding.from_dict(doc)


@dataclass
class TargetTextSpec(object):
    """Where and how long a target phrase is drawn.

    Parameters
    ----------
    corpus_path : str
        Plain text file, one phrase per line.
    n : int
        Word length of the original transcript; admissible target lengths
        are 2 .. n+1.
    """
    corpus_path: str
    n: int

    @property
    def admissible_lengths(self):
        return range(MIN_TARGET_LENGTH, self.n + 2)


def load_corpus(path):
    """Normalized non-empty phrases of a corpus file, in file order."""
    with open(path, encoding='utf-8') as f:
        phrases = [normalize(line) for line in f]
    return [p for p in phrases if p]


def generate_target(spec, rng):
    """Draw a target phrase for a targeted attack.

    A length is drawn uniformly among the admissible lengths which occur in
    the corpus, then a phrase uniformly among the corpus phrases of that
    length.

    Parameters
    ----------
    spec : TargetTextSpec
    rng : numpy.random.Generator

    Raises
    ------
    NoEligibleTargetError
        If no corpus phrase has an admissible length.

    Returns
    -------
    Transcript
    """
    by_length = defaultdict(list)
    for phrase in load_corpus(spec.corpus_path):
        if len(phrase) in spec.admissible_lengths:
            by_length[len(phrase)].append(phrase)
    if not by_length:
        raise NoEligibleTargetError(
            "{} has no phrase of {} to {} words".format(
                spec.corpus_path, MIN_TARGET_LENGTH, spec.n + 1))
    lengths = sorted(by_length)
    chosen = by_length[lengths[rng.integers(len(lengths))]]
    return chosen[rng.integers(len(chosen))]


def waveform_cc(a, b):
    """Correlation of two clips; identical constant clips correlate fully
    and other constant pairs give NaN."""
    try:
        return correlation_coefficient(a, b)
    except ZeroVarianceError:
        if np.array_equal(a.samples, b.samples):
            return 1.0
        return float('nan')


class Report(object):
    """Per-row results with aggregate means computed from the rows.

    Attributes
    ----------
    entries : pandas.DataFrame
    """
    columns = ()
    numeric = ()
    labels = {}

    def __init__(self, entries=None):
        if entries is None:
            entries = []
        df = pd.DataFrame(list(entries), columns=list(self.columns))
        for column in self.numeric:
            df[column] = pd.to_numeric(df[column], errors='coerce')
        self.entries = df

    def __len__(self):
        return len(self.entries)

    @property
    def failures(self):
        return int((self.entries['status'] != OK).sum())

    def summary(self):
        """Counts and the means of the numeric columns over successful rows
        (NaN where no row has a value)."""
        ok = self.entries[self.entries['status'] == OK]
        d = {'rows': len(self.entries), 'failed': self.failures}
        for column, label in self.labels.items():
            mean = ok[column].mean() if len(ok) else float('nan')
            d[label] = None if pd.isna(mean) else float(mean)
        return d

    def records(self):
        rows = self.entries.to_dict(orient='records')
        return [{k: (None if _is_missing(v) else v) for k, v in row.items()}
                for row in rows]

    def to_json(self, path):
        doc = {'entries': self.records(), 'summary': self.summary()}
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(doc, f, indent=2, default=_json_default)

    @classmethod
    def from_json(cls, path):
        doc = read_json(path, cls.__name__)
        if not is_dict(doc) or 'entries' not in doc:
            raise ConfigError("{} is not a {}".format(path, cls.__name__))
        return cls(doc['entries'])

    def __repr__(self):
        return "{}({} rows, {} failed)".format(type(self).__name__,
                                                len(self), self.failures)


def _is_missing(v):
    return v is None or (isinstance(v, float) and np.isnan(v))


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError("Cannot serialize {!r}".format(obj))


class RunManifest(Report):
    """Outcome of a batch attack, one row per input sample.

    ====================== ==============================================
    Column                 Meaning
    ====================== ==============================================
    input                  path of the original WAV
    original_transcript    oracle transcript of the original
    mode                   'untargeted' or 'targeted'
    target_text            target phrase (targeted runs)
    output                 path of the adversarial WAV
    history                path of the JSON-lines run history
    adversarial_transcript oracle transcript of the adversarial sample
    objective_acoustic     final MFCC distance
    objective_text         final transcript objective
    distance_to_original   word edit distance between the transcripts
    wer                    distance_to_original / reference length
    distance_to_target     word edit distance to the target
    cc                     waveform correlation with the original
    generations            generations evaluated
    seed                   seed of the run
    status                 'ok' or 'failed'
    error                  failure message
    ====================== ==============================================
    """
    columns = ('input', 'original_transcript', 'mode', 'target_text',
               'output', 'history', 'adversarial_transcript',
               'objective_acoustic', 'objective_text', 'distance_to_original',
               'wer', 'distance_to_target', 'cc', 'generations', 'seed',
               'status', 'error')
    numeric = ('objective_acoustic', 'objective_text', 'distance_to_original',
               'wer', 'distance_to_target', 'cc', 'generations')
    labels = {'distance_to_original': 'mean_edit_distance',
              'wer': 'mean_wer',
              'distance_to_target': 'mean_distance_to_target',
              'cc': 'mean_cc'}


class EvaluationReport(Report):
    """Transcription quality of (original, adversarial) pairs.

    Columns: original, adversarial, reference, transcript, edit_distance,
    wer, cc, status, error.
    """
    columns = ('original', 'adversarial', 'reference', 'transcript',
               'edit_distance', 'wer', 'cc', 'status', 'error')
    numeric = ('edit_distance', 'wer', 'cc')
    labels = {'edit_distance': 'mean_edit_distance',
              'wer': 'mean_wer',
              'cc': 'mean_cc'}


def list_inputs(path):
    """A single WAV file, or the WAV files of a directory in name order."""
    if os.path.isdir(path):
        names = sorted(n for n in os.listdir(path)
                       if n.lower().endswith('.wav'))
        return [os.path.join(path, n) for n in names]
    if not os.path.exists(path):
        raise FileNotFoundError("No such input: {}".format(path))
    return [path]


def attack_sample(index, path, settings, out_dir):
    """Attack one input file; return its manifest row."""
    stem = os.path.splitext(os.path.basename(path))[0]
    seed = derive_seed(settings.seed, STREAM_SAMPLE, index)
    row = {'input': path, 'mode': settings.mode, 'seed': seed,
           'status': FAILED}
    try:
        original = load_wav(path, ATTACK_SAMPLE_RATE)
        transcriber = CachedTranscriber(make_oracle(settings.binding))
        original_transcript = transcriber.transcribe(
            original, key=genome_hash(original.samples))
        row['original_transcript'] = original_transcript.text
        overrides = {'seed': seed}
        if settings.draws_targets:
            spec = TargetTextSpec(settings.target_corpus,
                                  len(original_transcript))
            target = generate_target(
                spec, derive_rng(settings.seed, STREAM_TARGET, index))
            overrides['target_text'] = target
        cfg = settings.attack_config(**overrides)
        if cfg.target_text is not None:
            row['target_text'] = cfg.target_text.text

        row['output'] = os.path.join(out_dir, stem + '.adv.wav')
        row['history'] = os.path.join(out_dir, stem + '.history.jsonl')
        result = run_attack(original, cfg, transcriber, row['history'])
        adversarial = result.best_clip(original.sample_rate)
        save_wav(adversarial, row['output'])

        transcript = result.best.transcript
        row.update(
            adversarial_transcript=transcript.text,
            objective_acoustic=float(result.best.objectives[0]),
            objective_text=float(result.best.objectives[1]),
            distance_to_original=word_edit_distance(original_transcript,
                                                    transcript),
            wer=wer_ratio(original_transcript, transcript),
            cc=waveform_cc(original, adversarial),
            generations=len(result.history),
            status=OK)
        if cfg.mode == TARGETED:
            row['distance_to_target'] = word_edit_distance(cfg.target_text,
                                                           transcript)
    except Exception as e:
        row['error'] = "{}: {}".format(type(e).__name__, e)
        log.warning("attack on %s failed: %s", path, row['error'])
    return row


def attack_command(config_path, input_path, out_dir, jobs=1):
    """Attack every input sample and write the manifest.

    Each sample gets its own seed derived from the configured seed and the
    sample's position in the input list, so results do not depend on
    `jobs`. A failing sample is recorded in the manifest and the others
    continue.

    Parameters
    ----------
    config_path : str
    input_path : str
        A WAV file or a directory of WAV files.
    out_dir : str
        Receives the adversarial WAVs, run histories and ``manifest.json``.
    jobs : int, optional (default 1)
        Number of samples attacked concurrently.

    Raises
    ------
    ConfigError
    OSError

    Returns
    -------
    RunManifest
    """
    settings = load_config(config_path)
    inputs = list_inputs(input_path)
    os.makedirs(out_dir, exist_ok=True)
    if not inputs:
        warnings.warn("No WAV files found in {}".format(input_path))
    log.info("attacking %d sample(s) with %s", len(inputs), settings.binding)

    def attack_one(item):
        index, path = item
        return attack_sample(index, path, settings, out_dir)

    if jobs > 1 and len(inputs) > 1:
        with ThreadPoolExecutor(jobs) as executor:
            rows = list(executor.map(attack_one, enumerate(inputs)))
    else:
        rows = [attack_one(item) for item in enumerate(inputs)]
    manifest = RunManifest(rows)
    manifest.to_json(os.path.join(out_dir, MANIFEST_FILE))
    return manifest


def load_pairs(source):
    """Rows of (original, adversarial, reference) to evaluate.

    `source` is a RunManifest, the path of a manifest JSON file, or the
    path of a CSV file with ``original``, ``adversarial`` and ``reference``
    columns. Failed manifest rows are left out.

    Returns
    -------
    pandas.DataFrame
    """
    if isinstance(source, RunManifest):
        manifest = source
    elif str(source).lower().endswith('.csv'):
        pairs = pd.read_csv(source, dtype=str, keep_default_na=False)
        missing = {'original', 'adversarial', 'reference'} - set(pairs)
        if missing:
            raise ConfigError("{} lacks column(s) {}".format(
                source, ", ".join(sorted(missing))))
        return pairs[['original', 'adversarial', 'reference']]
    else:
        manifest = RunManifest.from_json(source)
    done = manifest.entries[manifest.entries['status'] == OK]
    return pd.DataFrame({'original': done['input'],
                         'adversarial': done['output'],
                         'reference': done['original_transcript'].fillna('')}
                        ).reset_index(drop=True)


def evaluate_pair(pair, transcriber, baseline=False):
    row = {'original': pair.original, 'adversarial': pair.adversarial,
           'reference': pair.reference, 'status': FAILED}
    try:
        original = load_wav(pair.original)
        adversarial = load_wav(pair.adversarial)
        clip = original if baseline else adversarial
        transcript = transcriber.transcribe(clip,
                                            key=genome_hash(clip.samples))
        row.update(transcript=transcript.text,
                   edit_distance=word_edit_distance(pair.reference,
                                                    transcript),
                   wer=wer_ratio(pair.reference, transcript),
                   status=OK)
        if len(original) != len(adversarial):
            row['error'] = "length mismatch: {} and {} samples".format(
                len(original), len(adversarial))
            log.warning("%s: %s, no CC computed", pair.adversarial,
                        row['error'])
        else:
            row['cc'] = waveform_cc(original, adversarial)
    except Exception as e:
        row['error'] = "{}: {}".format(type(e).__name__, e)
        log.warning("evaluation of %s failed: %s", pair.adversarial,
                    row['error'])
    return row


def evaluate_command(source, binding, baseline=False):
    """Transcribe adversarial samples and compare them with references.

    Parameters
    ----------
    source : RunManifest or str
        See :py:func:`load_pairs`.
    binding : TranscriberBinding, dict or str
        See :py:func:`parse_binding`.
    baseline : bool, optional (default False)
        Transcribe the originals instead of the adversarial samples.

    Returns
    -------
    EvaluationReport
        Edit distances and normalized WERs against the references, and the
        waveform CC of each pair (NaN for pairs of different lengths).
    """
    if is_dict(binding):
        binding = TranscriberBinding.from_dict(binding)
    binding = parse_binding(binding)
    pairs = load_pairs(source)
    transcriber = CachedTranscriber(make_oracle(binding))
    rows = [evaluate_pair(pair, transcriber, baseline)
            for pair in pairs.itertuples(index=False)]
    report = EvaluationReport(rows)
    log.info("evaluated %d pair(s) with %s: %s", len(report), binding,
             report.summary())
    return report


def transfer_command(manifest, binding):
    """Test adversarial samples made against one recognizer on another.

    Every adversarial WAV of `manifest` is transcribed with `binding` and
    compared with the original transcript recorded in the manifest.

    Returns
    -------
    EvaluationReport
    """
    return evaluate_command(manifest, binding)
