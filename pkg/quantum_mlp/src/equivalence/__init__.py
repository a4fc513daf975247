from .metrics import (transfer_weights, bernoulli_kl, symmetrized_kl, gradient_discrepancy,
                      fit_scaling_exponent, FIRST_ORDER_GROUPS)
from .experiment import (EquivalenceReport, run_equivalence_experiment, EQUIVALENCE_COLUMNS,
                         SCHEMA_VERSION)

__all__ = [
    "transfer_weights", "bernoulli_kl", "symmetrized_kl", "gradient_discrepancy",
    "fit_scaling_exponent", "FIRST_ORDER_GROUPS",
    "EquivalenceReport", "run_equivalence_experiment", "EQUIVALENCE_COLUMNS", "SCHEMA_VERSION",
]
