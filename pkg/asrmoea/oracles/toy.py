"""Deterministic toy recognizer for hermetic runs.

The clip is cut into non-overlapping 100 ms windows (a trailing partial
window is ignored). The RMS energy of each window falls into one of four
bins; runs of equal bins are collapsed and every non-silent run becomes one
word, looked up by (bin, length bucket) in a vocabulary table.

A vocabulary table is plain text with one ``bin length_bucket word`` entry
per line; blank lines and lines starting with ``#`` are skipped::

    # bin bucket word
    1 0 the
    3 1 got
"""
from .oraclebase import Oracle
from ..exceptions import ConfigError
from ..text import Transcript
import numpy as np
import itertools

WINDOW_SECONDS = 0.1
DEFAULT_BIN_EDGES = (0.02, 0.1, 0.3)
BINS = (1, 2, 3)
LENGTH_BUCKETS = (0, 1, 2)

DEFAULT_VOCABULARY = {
    (1, 0): 'the', (1, 1): 'of', (1, 2): 'are',
    (2, 0): 'one', (2, 1): 'money', (2, 2): 'locking',
    (3, 0): 'go', (3, 1): 'got', (3, 2): 'blocking',
}


def length_bucket(run_length):
    """1 window -> 0, 2-3 windows -> 1, 4 or more -> 2."""
    if run_length <= 1:
        return 0
    if run_length <= 3:
        return 1
    return 2


def window_rms(clip):
    """RMS energy of each complete 100 ms window of `clip`."""
    width = int(round(clip.sample_rate * WINDOW_SECONDS))
    count = len(clip) // width
    if count == 0:
        return np.zeros(0)
    windows = clip.samples[:count * width].reshape(count, width)
    return np.sqrt(np.mean(windows ** 2, axis=1))


def energy_bins(clip, bin_edges=DEFAULT_BIN_EDGES):
    """Energy bin (0 = silence .. 3) of each window of `clip`."""
    return np.digitize(window_rms(clip), bin_edges)


def toy_asr(clip, vocab=None, bin_edges=DEFAULT_BIN_EDGES):
    """Transcribe `clip` with the toy recognizer.

    Parameters
    ----------
    clip : AudioClip
    vocab : dict, optional
        Maps ``(bin, length_bucket)`` to a word; defaults to
        `DEFAULT_VOCABULARY`.
    bin_edges : sequence of 3 floats, optional
        RMS thresholds; a window with RMS below the first edge is silent.

    Returns
    -------
    Transcript

    Examples
    --------
    >>> toy_asr(AudioClip(np.zeros(16000), 16000))
    Transcript('')
    """
    if vocab is None:
        vocab = DEFAULT_VOCABULARY
    words = []
    for b, run in itertools.groupby(energy_bins(clip, bin_edges)):
        if b == 0:
            continue
        words.append(vocab[(int(b), length_bucket(len(list(run))))])
    return Transcript(words)


def load_vocabulary(path):
    """Read a toy vocabulary table.

    Raises
    ------
    ConfigError
        If a line is malformed or the table does not cover every
        (bin, length bucket) combination.

    Returns
    -------
    dict
    """
    vocab = {}
    with open(path, encoding='utf-8') as f:
        for number, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            parts = line.split()
            try:
                b, bucket, word = int(parts[0]), int(parts[1]), parts[2]
            except (IndexError, ValueError):
                raise ConfigError("{}:{}: expected 'bin length_bucket word', "
                                  "got {!r}".format(path, number, line))
            if len(parts) != 3 or b not in BINS or bucket not in LENGTH_BUCKETS:
                raise ConfigError("{}:{}: invalid entry {!r}"
                                  .format(path, number, line))
            vocab[(b, bucket)] = word.lower()
    missing = set(itertools.product(BINS, LENGTH_BUCKETS)) - set(vocab)
    if missing:
        raise ConfigError("{}: no words for {}".format(path, sorted(missing)))
    return vocab


class ToyOracle(Oracle):
    """Oracle wrapping :py:func:`toy_asr`."""
    def __init__(self, binding):
        super(ToyOracle, self).__init__(binding)
        if binding.vocabulary is not None:
            self.vocab = load_vocabulary(binding.vocabulary)
        else:
            self.vocab = DEFAULT_VOCABULARY
        self.bin_edges = (binding.bin_edges if binding.bin_edges is not None
                          else DEFAULT_BIN_EDGES)

    def raw_transcribe(self, clip):
        return toy_asr(clip, self.vocab, self.bin_edges).text
