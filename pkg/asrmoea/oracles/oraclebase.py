from ..audio import AudioClip
from ..exceptions import ConfigError, OracleError
from ..text import normalize
from ..utils import assert_value, is_dict
from dataclasses import dataclass, field
import logging
import threading
import time

log = logging.getLogger(__name__)

SUBPROCESS = 'subprocess'
HTTP = 'http'
TOY = 'toy'
KINDS = (SUBPROCESS, HTTP, TOY)

INPUT_PLACEHOLDER = '{input}'
DEFAULT_TIMEOUT = 60.0
DEFAULT_ATTEMPTS = 3
DEFAULT_BACKOFF = 0.5


@dataclass(frozen=True)
class TranscriberBinding(object):
    """Description of the black-box transcriber.

    Parameters
    ----------
    kind : {``'subprocess'``, ``'http'``, ``'toy'``}
    command : str, optional
        Subprocess only. Command line template containing the ``{input}``
        placeholder exactly once; the path of a temporary WAV file is
        substituted for it.
    url : str, optional
        HTTP only. Endpoint receiving the WAV bytes by POST.
    timeout : float, optional (default 60)
        Seconds allowed for one subprocess run or HTTP request.
    vocabulary : str, optional
        Toy only. Path to a vocabulary table; the built-in table is used
        if omitted.
    bin_edges : sequence of 3 floats, optional
        Toy only. RMS thresholds of the energy bins.

    Raises
    ------
    ConfigError
    """
    kind: str
    command: str = None
    url: str = None
    timeout: float = DEFAULT_TIMEOUT
    vocabulary: str = None
    bin_edges: tuple = None

    def __post_init__(self):
        assert_value(self.kind, None, lambda x: x in KINDS, 'oracle kind')
        assert_value(self.timeout, float, lambda x: x > 0, 'timeout')
        if self.kind == SUBPROCESS:
            assert_value(self.command, None,
                         lambda x: isinstance(x, str) and
                         x.count(INPUT_PLACEHOLDER) == 1,
                         'command')
        if self.kind == HTTP:
            assert_value(self.url, None,
                         lambda x: isinstance(x, str) and
                         x.startswith(('http://', 'https://')),
                         'url')
        if self.bin_edges is not None:
            edges = assert_value(self.bin_edges,
                                 lambda x: tuple(float(v) for v in x),
                                 lambda x: len(x) == 3 and
                                 0 < x[0] < x[1] < x[2],
                                 'bin_edges')
            object.__setattr__(self, 'bin_edges', edges)

    def to_dict(self):
        d = {'kind': self.kind}
        for key in ('command', 'url', 'vocabulary'):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        if self.kind != TOY:
            d['timeout'] = self.timeout
        if self.bin_edges is not None:
            d['bin_edges'] = list(self.bin_edges)
        return d

    @classmethod
    def from_dict(cls, d):
        if not is_dict(d) or 'kind' not in d:
            raise ConfigError("Oracle binding must be an object with a "
                              "'kind' member, got {!r}".format(d))
        known = {'kind', 'command', 'url', 'timeout', 'vocabulary',
                 'bin_edges'}
        unknown = set(d) - known
        if unknown:
            raise ConfigError("Unknown oracle keys: {}".format(
                ", ".join(sorted(unknown))))
        return cls(**d)


class Oracle(object):
    """Template for transcribers behind the black-box boundary.

    Subclasses override `raw_transcribe`, which receives an AudioClip and
    returns whatever text the recognizer produced. Only that text is ever
    looked at: no scores, no internals.

    Parameters
    ----------
    binding : TranscriberBinding
    """
    def __init__(self, binding):
        self.binding = binding

    def raw_transcribe(self, clip):
        raise NotImplementedError

    def transcribe(self, clip):
        """Transcribe `clip` and normalize the output.

        Returns
        -------
        Transcript
        """
        if not isinstance(clip, AudioClip):
            raise TypeError("Expected AudioClip, got {}".format(type(clip)))
        return normalize(self.raw_transcribe(clip))

    def __repr__(self):
        return "{}({!r})".format(type(self).__name__, self.binding)


class CachedTranscriber(object):
    """Oracle front end used inside a run.

    Transcripts are cached by genome content hash, so identical genomes
    reach the oracle once. A failing call is retried with exponential
    backoff; after the last attempt the failure is raised as
    :py:class:`.OracleError` naming the individual.

    Parameters
    ----------
    oracle : Oracle
    attempts : int, optional (default 3)
    backoff : float, optional (default 0.5)
        Seconds to wait before the second attempt; doubled afterwards.

    Attributes
    ----------
    calls : int
        Number of successful oracle invocations (cache misses).
    """
    def __init__(self, oracle, attempts=DEFAULT_ATTEMPTS,
                 backoff=DEFAULT_BACKOFF):
        self.oracle = oracle
        self.attempts = attempts
        self.backoff = backoff
        self.calls = 0
        self._cache = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._cache)

    def __contains__(self, key):
        with self._lock:
            return key in self._cache

    def transcribe(self, clip, key=None, index=None):
        """Transcribe `clip`, consulting the cache under `key`.

        Parameters
        ----------
        clip : AudioClip
        key : str, optional
            Content hash of the clip's samples; no caching if omitted.
        index : int, optional
            Position of the individual, reported on failure.

        Raises
        ------
        OracleError

        Returns
        -------
        Transcript
        """
        if key is not None:
            with self._lock:
                if key in self._cache:
                    return self._cache[key]
        error = None
        delay = self.backoff
        for attempt in range(1, self.attempts + 1):
            try:
                transcript = self.oracle.transcribe(clip)
            except (OracleError, OSError, ValueError) as e:
                error = e
                log.warning("oracle call for individual %s failed "
                            "(attempt %d of %d): %s",
                            index, attempt, self.attempts, e)
                if attempt < self.attempts and delay > 0:
                    time.sleep(delay)
                    delay *= 2
                continue
            with self._lock:
                self.calls += 1
                if key is not None:
                    self._cache.setdefault(key, transcript)
            return transcript
        raise OracleError(str(error), index=index, attempts=self.attempts)


def make_oracle(binding):
    """Instantiate the oracle described by `binding`.

    Parameters
    ----------
    binding : TranscriberBinding or dict

    Returns
    -------
    Oracle
    """
    if not isinstance(binding, TranscriberBinding):
        binding = TranscriberBinding.from_dict(binding)
    if binding.kind == TOY:
        from .toy import ToyOracle
        return ToyOracle(binding)
    from .external import SubprocessOracle, HttpOracle
    if binding.kind == SUBPROCESS:
        return SubprocessOracle(binding)
    return HttpOracle(binding)


def transcribe(clip, binding):
    """Transcribe a single clip with the oracle described by `binding`.

    Returns
    -------
    Transcript
    """
    return make_oracle(binding).transcribe(clip)
