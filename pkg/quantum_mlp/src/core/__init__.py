from .activations import sigmoid, sigmoid_prime, softplus, log_sigmoid
from .batch import as_batch, check_binary
from .enumeration import enumerate_states, state_index
from .exceptions import (QuantumMlpError, ShapeMismatchError, EnumerationLimitError,
                         IdxFormatError, SamplerError, ExperimentError, ConfigError)
from .optimizer import AdamConfig, AdamState, AdamOptimizer, adam_update
from .params import (NetworkParameters, GradientSet, PARAMETER_NAMES, save_parameters,
                     load_parameters, parameters_to_bytes, parameters_from_bytes)
from .rng import make_rng, draw_seed, derive_seed, trial_seed
from .trace import TrainingTrace, TRACE_COLUMNS, WEIGHT_BOUND, warn_weight_bound


__all__ = [
    "sigmoid", "sigmoid_prime", "softplus", "log_sigmoid", "as_batch", "check_binary",
    "enumerate_states", "state_index",
    "QuantumMlpError", "ShapeMismatchError", "EnumerationLimitError", "IdxFormatError",
    "SamplerError", "ExperimentError", "ConfigError",
    "AdamConfig", "AdamState", "AdamOptimizer", "adam_update",
    "NetworkParameters", "GradientSet", "PARAMETER_NAMES", "save_parameters", "load_parameters",
    "parameters_to_bytes", "parameters_from_bytes",
    "make_rng", "draw_seed", "derive_seed", "trial_seed",
    "TrainingTrace", "TRACE_COLUMNS", "WEIGHT_BOUND", "warn_weight_bound",
]
