from .model import (EbmModel, ConditionalDistribution, DEFAULT_ENUMERATION_LIMIT, energy,
                    hidden_fields, exact_conditional, log_conditional_y, conditional_log_likelihood,
                    mean_conditional_log_likelihood, output_marginals, conditional_predict,
                    ebm_accuracy)
from .gradient import (positive_phase, negative_phase, exact_negative_phase, grad_conditional_ll,
                       ESTIMATORS)
from .training import train_ebm

__all__ = [
    "EbmModel", "ConditionalDistribution", "DEFAULT_ENUMERATION_LIMIT", "energy", "hidden_fields",
    "exact_conditional", "log_conditional_y", "conditional_log_likelihood",
    "mean_conditional_log_likelihood", "output_marginals", "conditional_predict", "ebm_accuracy",
    "positive_phase", "negative_phase", "exact_negative_phase", "grad_conditional_ll", "ESTIMATORS",
    "train_ebm",
]
