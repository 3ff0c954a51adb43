"""Acoustic similarity signals: MFCC matrices, their Euclidean distance and
the waveform correlation coefficient."""
from .audio import AudioClip, check_same_length
from .exceptions import (ClipTooShortError, ShapeMismatchError,
                         ZeroVarianceError)
from .utils import assert_value, dataclass_from_dict
from dataclasses import dataclass, asdict
from functools import lru_cache
from numpy.lib.stride_tricks import sliding_window_view
from scipy.fft import dct
import numpy as np

_LOG_FLOOR = np.finfo(np.float64).eps


def hz_to_mel(hz):
    """HTK mel scale."""
    return 2595.0 * np.log10(1.0 + np.asarray(hz, dtype=np.float64) / 700.0)


def mel_to_hz(mel):
    return 700.0 * (10.0 ** (np.asarray(mel, dtype=np.float64) / 2595.0) - 1.0)


@dataclass(frozen=True)
class MfccConfig(object):
    """Parameters of the MFCC front end.

    Parameters
    ----------
    window_length : float, optional (default 0.025)
        Analysis window duration in seconds.
    hop_length : float, optional (default 0.010)
        Stride between windows in seconds.
    num_filters : int, optional (default 26)
        Number of triangular mel filters.
    num_coefficients : int, optional (default 13)
        Cepstral coefficients kept per frame.
    fft_size : int, optional (default 512)
    sample_rate : int, optional (default 16000)
        The rate clips are expected to have.
    pre_emphasis : float, optional (default 0.97)
        Zero disables the pre-emphasis filter.

    Raises
    ------
    ConfigError
        If a value is out of range or the parameters are inconsistent.
    """
    window_length: float = 0.025
    hop_length: float = 0.010
    num_filters: int = 26
    num_coefficients: int = 13
    fft_size: int = 512
    sample_rate: int = 16000
    pre_emphasis: float = 0.97

    def __post_init__(self):
        assert_value(self.hop_length, float, lambda x: x > 0, 'hop_length')
        assert_value(self.window_length, float,
                     lambda x: x >= self.hop_length, 'window_length')
        assert_value(self.num_filters, None,
                     lambda x: int(x) == x and x > 0, 'num_filters')
        assert_value(self.num_coefficients, None,
                     lambda x: int(x) == x and 0 < x <= self.num_filters,
                     'num_coefficients')
        assert_value(self.sample_rate, None,
                     lambda x: int(x) == x and x > 0, 'sample_rate')
        assert_value(self.fft_size, None,
                     lambda x: int(x) == x and x >= self.window_samples,
                     'fft_size')
        assert_value(self.pre_emphasis, float, lambda x: 0 <= x < 1,
                     'pre_emphasis')

    @property
    def window_samples(self):
        return int(round(self.window_length * self.sample_rate))

    @property
    def hop_samples(self):
        return max(1, int(round(self.hop_length * self.sample_rate)))

    def frame_count(self, num_samples):
        """Number of frames for a clip of `num_samples` samples (0 if the
        clip is shorter than one window)."""
        if num_samples < self.window_samples:
            return 0
        return (num_samples - self.window_samples) // self.hop_samples + 1

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return dataclass_from_dict(cls, d)


@lru_cache(maxsize=16)
def mel_filterbank(cfg):
    """Triangular filters on the HTK mel scale.

    Returns
    -------
    numpy.ndarray of shape (num_filters, fft_size // 2 + 1)
    """
    n_bins = cfg.fft_size // 2 + 1
    mel_points = np.linspace(hz_to_mel(0.0), hz_to_mel(cfg.sample_rate / 2.0),
                             cfg.num_filters + 2)
    bins = np.floor((cfg.fft_size + 1) * mel_to_hz(mel_points) /
                    cfg.sample_rate).astype(int)
    bins = np.minimum(bins, n_bins - 1)
    fb = np.zeros((cfg.num_filters, n_bins))
    for j in range(cfg.num_filters):
        left, center, right = bins[j], bins[j + 1], bins[j + 2]
        for i in range(left, center):
            fb[j, i] = (i - left) / (center - left)
        for i in range(center, right):
            fb[j, i] = (right - i) / (right - center)
    fb.setflags(write=False)
    return fb


class MfccMatrix(object):
    """Per-frame cepstral coefficients of a clip.

    Parameters
    ----------
    frames : array-like of shape (frame_count, coeff_count)

    Attributes
    ----------
    frames : numpy.ndarray (read-only)
    frame_count : int
    coeff_count : int
    shape : tuple
    """
    def __init__(self, frames):
        data = np.array(frames, dtype=np.float64)
        if data.ndim != 2:
            raise ShapeMismatchError("MFCC frames must be a 2-D array, "
                                     "got {} dimension(s)".format(data.ndim))
        data.setflags(write=False)
        self._frames = data

    @property
    def frames(self):
        return self._frames

    @property
    def frame_count(self):
        return self._frames.shape[0]

    @property
    def coeff_count(self):
        return self._frames.shape[1]

    @property
    def shape(self):
        return self._frames.shape

    def __repr__(self):
        return "MfccMatrix({} frames x {} coefficients)".format(
            self.frame_count, self.coeff_count)


def compute_mfcc(clip, cfg=None):
    """Compute the MFCC matrix of a clip.

    The pipeline is pre-emphasis, framing, Hann window, magnitude FFT,
    mel filterbank, log and DCT-II, of which `cfg.num_coefficients` are kept.
    Frames are taken without padding, so
    ``frame_count = (len(clip) - window) // hop + 1``.

    Parameters
    ----------
    clip : AudioClip
    cfg : MfccConfig, optional
        Defaults to ``MfccConfig()``.

    Raises
    ------
    ValueError
        If the clip's sample rate differs from `cfg.sample_rate`.
    ClipTooShortError
        If the clip is shorter than one window.

    Returns
    -------
    MfccMatrix
    """
    if cfg is None:
        cfg = MfccConfig()
    if clip.sample_rate != cfg.sample_rate:
        raise ValueError("Clip sample rate {} Hz does not match MFCC "
                         "configuration ({} Hz)".format(clip.sample_rate,
                                                        cfg.sample_rate))
    n_frames = cfg.frame_count(len(clip))
    if n_frames == 0:
        raise ClipTooShortError("Clip of {} samples is shorter than one "
                                "window ({} samples)".format(
                                    len(clip), cfg.window_samples))
    x = clip.samples
    emphasized = np.empty_like(x)
    emphasized[0] = x[0]
    emphasized[1:] = x[1:] - cfg.pre_emphasis * x[:-1]

    frames = sliding_window_view(emphasized, cfg.window_samples)
    frames = frames[::cfg.hop_samples][:n_frames]
    frames = frames * np.hanning(cfg.window_samples)

    magnitude = np.abs(np.fft.rfft(frames, n=cfg.fft_size, axis=1))
    energies = magnitude.dot(mel_filterbank(cfg).T)
    log_energies = np.log(np.maximum(energies, _LOG_FLOOR))
    coefficients = dct(log_energies, type=2, axis=1, norm='ortho')
    return MfccMatrix(coefficients[:, :cfg.num_coefficients])


def mfcc_distance(a, b):
    """Euclidean distance between two MFCC matrices over all elements.

    Raises
    ------
    ShapeMismatchError
        If the matrices differ in frame count or coefficient count.
    """
    if a.shape != b.shape:
        raise ShapeMismatchError("MFCC shapes differ: {} and {}"
                                 .format(a.shape, b.shape))
    return float(np.linalg.norm(a.frames - b.frames))


def correlation_coefficient(a, b):
    """Pearson correlation of two waveforms.

    Parameters
    ----------
    a, b : AudioClip or array-like of float
        Must have equal lengths.

    Raises
    ------
    ShapeMismatchError
        If the lengths differ.
    ZeroVarianceError
        If either signal is constant.

    Returns
    -------
    float in [-1, 1]
    """
    x = a.samples if isinstance(a, AudioClip) else np.asarray(a, dtype=float)
    y = b.samples if isinstance(b, AudioClip) else np.asarray(b, dtype=float)
    check_same_length(x, y, 'waveforms')
    x = x - x.mean()
    y = y - y.mean()
    sx = np.sqrt(np.dot(x, x))
    sy = np.sqrt(np.dot(y, y))
    if sx == 0 or sy == 0:
        raise ZeroVarianceError("Correlation is undefined for a constant "
                                "signal")
    return float(np.clip(np.dot(x, y) / (sx * sy), -1.0, 1.0))
