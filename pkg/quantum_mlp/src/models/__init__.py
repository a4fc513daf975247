from .dim_trial import DimTrial
from .fact_training_step import FactTrainingStep


__all__ = [
    "DimTrial", "FactTrainingStep"
]
