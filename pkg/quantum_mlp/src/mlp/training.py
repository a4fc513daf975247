import logging
from typing import Optional

from ..core.optimizer import AdamConfig, AdamOptimizer
from ..core.rng import make_rng
from ..core.trace import TrainingTrace, warn_weight_bound
from ..etl.transform import Dataset, iterate_batches
from .model import MlpModel, accuracy, batch_loss, grad_backprop

logger = logging.getLogger(__name__)


def train_mlp(model: MlpModel, train: Dataset, test: Dataset, optimizer: AdamConfig,
              steps: int, batch_size: int, seed: Optional[int] = None,
              track: str = "classical1") -> TrainingTrace:
    """Huấn luyện MLP bằng lan truyền ngược + ADAM (nhánh Classical-1).

    Mô hình được cập nhật tại chỗ. Trace có bước 0 (trước khi cập nhật) và các bước 1..steps;
    train_loss là cross-entropy trung bình trên toàn tập train.
    """
    if len(train) == 0:
        raise ValueError("Tập train rỗng")
    rng = make_rng(seed)
    adam = AdamOptimizer(optimizer)
    trace = TrainingTrace(track=track, seed=seed)
    trace.record(0, batch_loss(model, train.inputs, train.targets), accuracy(model, test),
                 max_abs_weight=model.max_abs_weight())
    warned = warn_weight_bound(model.max_abs_weight(), 0)

    batches = iterate_batches(train, batch_size, rng)
    for step in range(1, steps + 1):
        X, Y = next(batches)
        adam.minimize_step(model, grad_backprop(model, X, Y))
        trace.record(step, batch_loss(model, train.inputs, train.targets), accuracy(model, test),
                     max_abs_weight=model.max_abs_weight())
        warned = warn_weight_bound(model.max_abs_weight(), step, warned)
        logger.debug(f"MLP bước {step}: {trace.records[-1]}")
    return trace
