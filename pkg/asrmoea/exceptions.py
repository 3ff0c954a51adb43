class WavFormatError(ValueError):
    """Raise on an attempt to load a WAV file whose encoding, channel count 
    or bit depth is not supported. The message names the offending property."""
    pass


class ClipTooShortError(ValueError):
    """Raise on an attempt to extract features from a clip shorter than 
    one analysis window."""
    pass


class ShapeMismatchError(ValueError):
    """Raise when two objects that must be aligned element by element 
    (objective vectors, genomes, feature matrices, waveforms) differ in 
    length or shape."""
    pass


class ZeroVarianceError(ValueError):
    """Raise on an attempt to correlate a signal which has zero variance."""
    pass


class UnevaluatedIndividualError(ValueError):
    """Raise on an attempt to rank or compare an individual whose objectives 
    have not been computed yet."""
    pass


class OracleError(RuntimeError):
    """Raise when the transcriber fails to produce a transcript.
    
    Parameters
    ----------
    message : str
    index : int, optional
        Position of the failing individual in the batch being evaluated.
    attempts : int, optional
        Number of attempts made before giving up.
    """
    def __init__(self, message, index=None, attempts=None):
        super(OracleError, self).__init__(message)
        self.index = index
        self.attempts = attempts

    def __str__(self):
        text = super(OracleError, self).__str__()
        if self.index is not None:
            text = "individual {}: {}".format(self.index, text)
        if self.attempts is not None:
            text = "{} (after {} attempt(s))".format(text, self.attempts)
        return text


class ConfigError(ValueError):
    """Raise on an invalid configuration value or a malformed configuration 
    file."""
    pass


class NoEligibleTargetError(LookupError):
    """Raise when a target corpus contains no phrase of an admissible 
    length."""
    pass
