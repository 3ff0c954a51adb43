from .oraclebase import (TranscriberBinding, Oracle, CachedTranscriber,
                         make_oracle, transcribe, SUBPROCESS, HTTP, TOY)
from .toy import (ToyOracle, toy_asr, load_vocabulary, DEFAULT_VOCABULARY,
                  DEFAULT_BIN_EDGES)
from .external import SubprocessOracle, HttpOracle
