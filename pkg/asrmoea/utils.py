from dataclasses import fields
import hashlib
import numpy as np

from collections.abc import Mapping

from .exceptions import ConfigError


# Purposes of derived random streams; part of the spawn key so that streams
# for different purposes never coincide.
STREAM_INIT = 0
STREAM_MATING = 1
STREAM_MUTATION = 2
STREAM_FINAL = 3
STREAM_SAMPLE = 4
STREAM_TARGET = 5


def is_string(obj):
    return isinstance(obj, str)


def is_dict(obj):
    return isinstance(obj, Mapping)


def assert_value(x, value_render_function, value_test_function,
                 title='Parameter'):
    """Convert and check a configuration value.

    Parameters
    ----------
    x : object
    value_render_function : callable or None
        Applied to `x` before the check (e.g. `int`).
    value_test_function : callable or None
        Predicate the rendered value must satisfy.
    title : str, optional
        Name of the parameter used in the error message.

    Raises
    ------
    ConfigError
        If rendering fails or the predicate returns False.

    Returns
    -------
    The rendered value.
    """
    if value_render_function is not None:
        try:
            x = value_render_function(x)
        except (TypeError, ValueError):
            raise ConfigError("Got invalid {} = {!r}".format(title, x))
    if value_test_function is not None and not value_test_function(x):
        raise ConfigError("Got invalid {} = {!r}".format(title, x))
    return x


def derive_rng(seed, *key):
    """Return an independent random generator for a spawn key.

    The same `seed` and `key` always give the same stream, whatever the
    order in which streams are requested.

    Parameters
    ----------
    seed : int
        Base seed of the run (non-negative, up to 64 bits).
    *key : int
        Spawn key, e.g. ``(generation, STREAM_MUTATION, index)``.

    Returns
    -------
    numpy.random.Generator
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)


def derive_seed(seed, *key):
    """Derive a 64-bit integer seed from a base seed and a spawn key."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def genome_hash(genome):
    """Content hash of a genome, independent of array object identity."""
    data = np.ascontiguousarray(genome, dtype=np.float64)
    return hashlib.sha1(data.tobytes()).hexdigest()


def dataclass_from_dict(cls, d):
    """Build a configuration dataclass from a JSON-like mapping.

    Raises
    ------
    ConfigError
        If `d` is not a mapping or contains keys `cls` does not declare.
    """
    if d is None:
        return cls()
    if not is_dict(d):
        raise ConfigError("Expected an object for {}, got {!r}"
                          .format(cls.__name__, d))
    known = {f.name for f in fields(cls)}
    unknown = set(d) - known
    if unknown:
        raise ConfigError("Unknown {} keys: {}".format(
            cls.__name__, ", ".join(sorted(unknown))))
    return cls(**d)
