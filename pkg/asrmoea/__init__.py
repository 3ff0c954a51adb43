"""
asrmoea generates adversarial audio against black-box speech recognizers
with multi-objective evolutionary algorithms (MOGA and NSGA-II).
"""
from .audio import AudioClip, load_wav, save_wav, clamp
from .features import (MfccConfig, compute_mfcc, mfcc_distance,
                       correlation_coefficient)
from .text import Transcript, normalize, word_edit_distance, wer, wer_ratio
from .core import (Individual, RankedPopulation, dominates,
                   fast_nondominated_sort, crowding_distance,
                   dominance_count_rank)
from .operators import (SelectionConfig, MutationConfig, init_population,
                        crossover, mutate)
from .evolution import EvolutionConfig, Problem, evolve
from .oracles import TranscriberBinding, transcribe, toy_asr
from .attack import (AttackConfig, evaluate_fitness, run_attack,
                     pareto_snapshot)
from .harness import (RunManifest, EvaluationReport, TargetTextSpec,
                      generate_target, attack_command, evaluate_command,
                      transfer_command)
from .exceptions import (WavFormatError,
                         ClipTooShortError,
                         ShapeMismatchError,
                         ZeroVarianceError,
                         UnevaluatedIndividualError,
                         OracleError,
                         ConfigError,
                         NoEligibleTargetError)

import os

PKG_ROOT_DIR = os.path.dirname(os.path.abspath(__file__))

def read_from(path):
    with open(os.path.join(PKG_ROOT_DIR, path)) as f:
        return f.read().strip()

__version__ = read_from('VERSION.txt')
