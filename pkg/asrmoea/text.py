"""Word-level edit distance for transcript comparison and WER reporting."""
from .utils import is_string
import Levenshtein
import re

_WHITESPACE = re.compile(r"\s+")
_DISALLOWED = re.compile(r"[^a-z0-9' ]")


class Transcript(tuple):
    """Normalized transcript: an immutable sequence of lowercase word tokens.

    Use :py:func:`normalize` to build a transcript from raw recognizer output;
    the constructor only checks that the tokens are already normalized.

    Parameters
    ----------
    words : iterable of str, optional

    Raises
    ------
    ValueError
        If a token is empty, contains whitespace or uppercase characters.

    Attributes
    ----------
    text : str
        The tokens joined with single spaces.
    """
    def __new__(cls, words=()):
        words = tuple(words)
        for w in words:
            if not is_string(w) or not w or w != w.lower() or \
                    _WHITESPACE.search(w):
                raise ValueError("Invalid transcript token {!r}".format(w))
        return super(Transcript, cls).__new__(cls, words)

    @property
    def text(self):
        return " ".join(self)

    def __repr__(self):
        return "Transcript({!r})".format(self.text)


def normalize(raw):
    """Turn raw recognizer output into a Transcript.

    The text is lowercased, characters other than ``a-z``, ``0-9``,
    apostrophes and spaces are removed, apostrophes are dropped and
    whitespace is collapsed.

    Examples
    --------
    >>> normalize("I've got to GO.")
    Transcript('ive got to go')
    """
    if raw is None:
        return Transcript()
    text = _WHITESPACE.sub(" ", raw.lower())
    text = _DISALLOWED.sub("", text).replace("'", "")
    return Transcript(text.split())


def _tokens(x):
    if isinstance(x, Transcript):
        return x
    if is_string(x):
        return normalize(x)
    return tuple(x)


def word_edit_distance(a, b):
    """Levenshtein distance over word tokens with unit costs.

    Parameters
    ----------
    a, b : Transcript, str or sequence of tokens
        Strings are normalized first.

    Returns
    -------
    int
        Minimum number of word insertions, deletions and substitutions
        turning `a` into `b`.
    """
    return Levenshtein.distance(_tokens(a), _tokens(b))


def wer(reference, hypothesis):
    """Word edit count between a reference and a hypothesis.

    This is the unnormalized figure reported as the raw WER; see
    :py:func:`wer_ratio` for the normalized rate.

    Returns
    -------
    float
    """
    return float(word_edit_distance(reference, hypothesis))


def wer_ratio(reference, hypothesis):
    """Word error rate normalized by the reference length.

    Returns
    -------
    float
        ``word_edit_distance / len(reference)``, or NaN if the reference
        is empty.
    """
    reference = _tokens(reference)
    if not reference:
        return float('nan')
    return word_edit_distance(reference, hypothesis) / len(reference)
