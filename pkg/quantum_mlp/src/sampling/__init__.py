from .config import SamplerConfig
from .bqm import Bqm, build_conditional_bqm, save_bqm, load_bqm, format_coefficient
from .ising import (IsingModel, ClampEntry, ClampReport, bqm_to_ising, ising_to_bqm,
                    clamp_to_hardware, ising_boltzmann, spin_states, H_RANGE, J_RANGE)
from .samplers import (SampleSet, Sampler, ExactSampler, GibbsSampler, SimAnnealSampler,
                       SAMPLERS, get_sampler, gibbs_transition_matrix)
from .temperature import estimate_effective_beta, flip_costs

__all__ = [
    "SamplerConfig",
    "Bqm", "build_conditional_bqm", "save_bqm", "load_bqm", "format_coefficient",
    "IsingModel", "ClampEntry", "ClampReport", "bqm_to_ising", "ising_to_bqm",
    "clamp_to_hardware", "ising_boltzmann", "spin_states", "H_RANGE", "J_RANGE",
    "SampleSet", "Sampler", "ExactSampler", "GibbsSampler", "SimAnnealSampler",
    "SAMPLERS", "get_sampler", "gibbs_transition_matrix",
    "estimate_effective_beta", "flip_costs",
]
