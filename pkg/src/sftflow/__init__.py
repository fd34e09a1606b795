"""Ergodic Markov measures of prescribed entropy for suspension flows over
subshifts of finite type.

The pipeline: Perron-Frobenius eigendata -> Parry measure -> entropy
interpolation -> higher-block recoding -> constant-roof chain splitting ->
intermediate-value solve of the Abramov ratio.
"""

__version__ = "0.1.0"

from .block_recode import (
    BlockRecode,
    build_recode,
    decode_word,
    encode_word,
    lift_roof,
    pushforward_chain,
)
from .entropy_path import (
    EntropyPath,
    build_path,
    path_entropy,
    path_matrix,
    path_measure,
    solve_entropy,
)
from .markov import (
    MarkovChain,
    cylinder_measure,
    entropy,
    is_ergodic,
    parry_measure,
    stationary_of,
    validate_chain,
)
from .oracle import (
    SampleRun,
    brute_force_cylinder_diff,
    empirical_entropy,
    empirical_roof_integral,
    sample_path,
)
from .perron import PerronData, perron_data, top_entropy
from .roof_flatten import (
    FlattenModel,
    build_flatten,
    descend_measure,
    flatten_decode,
    flatten_encode,
    rationalize_roof,
)
from .sft import (
    Cylinder,
    Sft,
    Word,
    admissible_words,
    full_shift,
    is_admissible,
    is_aperiodic,
    is_irreducible,
    new_sft,
    word_count,
)
from .suspension import (
    RoofFn,
    Suspension,
    abramov_entropy,
    block_length_for_window,
    constant_roof,
    flow_top_entropy_bounds,
    new_roof,
    pad_roof,
    roof_from_values,
    roof_integral,
)
from .synthesis import SynthesisReport, evaluate_cylinder_on_source, synthesize
