from .exceptions import WavFormatError, ShapeMismatchError
import numpy as np
from scipy.io import wavfile
import io
import os

AMPLITUDE_RANGE = (-1.0, 1.0)
ATTACK_SAMPLE_RATE = 16000

# Load divides by 32768 so that -32768 maps inside [-1, 1];
# save multiplies by 32767 so that +1.0 never overflows.
_LOAD_SCALE = 32768.0
_SAVE_SCALE = 32767.0
_PCM_MIN = -32768
_PCM_MAX = 32767


def clamp(samples, low=AMPLITUDE_RANGE[0], high=AMPLITUDE_RANGE[1]):
    """Limit every element of `samples` to [`low`, `high`].

    Parameters
    ----------
    samples : array-like of float
    low : float, optional (default -1.0)
    high : float, optional (default 1.0)

    Returns
    -------
    numpy.ndarray of float64
        Same length and order as `samples`.
    """
    return np.clip(np.asarray(samples, dtype=np.float64), low, high)


class AudioClip(object):
    """Mono waveform with amplitudes normalized to [-1, 1].

    AudioClip is the genome substrate of an attack: every sample is one gene.
    The sample array is read-only; operations return new clips.

    Parameters
    ----------
    samples : array-like of float
        Amplitudes in [-1.0, 1.0]. Must not be empty.
    sample_rate : int
        Samples per second, positive.

    Raises
    ------
    ValueError
        If `samples` is empty, contains amplitudes outside [-1, 1] or
        non-finite values, or if `sample_rate` is not a positive integer.

    Attributes
    ----------
    samples : numpy.ndarray of float64
    sample_rate : int
    duration : float
        In seconds.
    """
    def __init__(self, samples, sample_rate):
        data = np.array(samples, dtype=np.float64).reshape(-1)
        if data.size == 0:
            raise ValueError("AudioClip cannot be empty")
        if not np.all(np.isfinite(data)):
            raise ValueError("AudioClip amplitudes must be finite")
        if data.min() < AMPLITUDE_RANGE[0] or data.max() > AMPLITUDE_RANGE[1]:
            raise ValueError("AudioClip amplitudes must lie in [-1, 1], "
                             "got [{}, {}]".format(data.min(), data.max()))
        if int(sample_rate) != sample_rate or sample_rate <= 0:
            raise ValueError("Invalid sample_rate={!r}".format(sample_rate))
        data.setflags(write=False)
        self._samples = data
        self._sample_rate = int(sample_rate)

    @property
    def samples(self):
        return self._samples

    @property
    def sample_rate(self):
        return self._sample_rate

    @property
    def duration(self):
        return len(self._samples) / self._sample_rate

    def __len__(self):
        return len(self._samples)

    def with_samples(self, samples):
        """Return a clip with the same sample rate and new (clamped) samples."""
        return AudioClip(clamp(samples), self._sample_rate)

    def __eq__(self, other):
        if not isinstance(other, AudioClip):
            return NotImplemented
        return (self._sample_rate == other._sample_rate and
                np.array_equal(self._samples, other._samples))

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    __hash__ = None

    def __repr__(self):
        return "AudioClip({} samples @ {} Hz)".format(len(self),
                                                     self._sample_rate)


def load_wav(path, expected_rate=None):
    """Read a 16-bit PCM mono WAV file.

    Parameters
    ----------
    path : str or path-like
    expected_rate : int, optional
        If given, the file's sample rate must be equal to it. The loader
        never resamples.

    Raises
    ------
    FileNotFoundError
        If there is no file at `path`.
    WavFormatError
        If the file is not RIFF/WAVE, is not PCM, is not 16-bit, has more
        than one channel, has no samples, or has an unexpected sample rate.

    Returns
    -------
    AudioClip
        Amplitudes are the raw 16-bit values divided by 32768.
    """
    if not os.path.exists(path):
        raise FileNotFoundError("No such WAV file: {}".format(path))
    try:
        rate, data = wavfile.read(path)
    except ValueError as e:
        raise WavFormatError("{}: unsupported encoding ({})".format(path, e))
    if data.ndim > 1 and data.shape[1] != 1:
        raise WavFormatError("{}: expected mono, got {} channels"
                             .format(path, data.shape[1]))
    if np.issubdtype(data.dtype, np.floating):
        raise WavFormatError("{}: expected PCM, got IEEE float encoding"
                             .format(path))
    if data.dtype != np.int16:
        raise WavFormatError("{}: expected 16-bit samples, got {}-bit"
                             .format(path, 8 * data.dtype.itemsize))
    if data.size == 0:
        raise WavFormatError("{}: no samples".format(path))
    if expected_rate is not None and rate != expected_rate:
        raise WavFormatError("{}: expected sample rate {} Hz, got {} Hz"
                             .format(path, expected_rate, rate))
    return AudioClip(data.reshape(-1).astype(np.float64) / _LOAD_SCALE, rate)


def quantize(samples):
    """Convert amplitudes to 16-bit PCM values.

    Each amplitude becomes ``round(a * 32767)`` clamped to [-32768, 32767].
    """
    scaled = np.round(np.asarray(samples, dtype=np.float64) * _SAVE_SCALE)
    return np.clip(scaled, _PCM_MIN, _PCM_MAX).astype(np.int16)


def save_wav(clip, path):
    """Write `clip` as a 16-bit PCM mono WAV file with a 44-byte header.

    Parameters
    ----------
    clip : AudioClip
    path : str or path-like or a writable binary file object

    Raises
    ------
    OSError
        If `path` cannot be written.
    """
    wavfile.write(path, clip.sample_rate, quantize(clip.samples))


def wav_bytes(clip):
    """Return the bytes of the WAV file that `save_wav` would write."""
    buffer = io.BytesIO()
    save_wav(clip, buffer)
    return buffer.getvalue()


def check_same_length(a, b, what='clips'):
    if len(a) != len(b):
        raise ShapeMismatchError("Cannot compare {} of different lengths: "
                                 "{} and {}".format(what, len(a), len(b)))
