import logging
from typing import TYPE_CHECKING, Optional

from ..core.optimizer import AdamConfig, AdamOptimizer
from ..core.rng import draw_seed, make_rng
from ..core.trace import TrainingTrace, warn_weight_bound
from ..etl.transform import Dataset, iterate_batches
from ..mlp.model import MlpModel, accuracy, batch_loss
from ..sampling.config import SamplerConfig
from .gradient import grad_conditional_ll
from .model import EbmModel, mean_conditional_log_likelihood

if TYPE_CHECKING:
    from ..sampling.samplers import Sampler

logger = logging.getLogger(__name__)


def _record(trace: TrainingTrace, step: int, model: EbmModel, train: Dataset, test: Dataset) -> None:
    # Độ chính xác đo trên MLP nhận trọng số từ EBM
    mlp = MlpModel.from_parameters(model)
    trace.record(
        step,
        train_loss=batch_loss(mlp, train.inputs, train.targets),
        test_accuracy=accuracy(mlp, test),
        ebm_loglik_estimate=mean_conditional_log_likelihood(model, train.inputs, train.targets),
        max_abs_weight=model.max_abs_weight(),
    )


def train_ebm(model: EbmModel, train: Dataset, test: Dataset, sampler: Optional["Sampler"],
              optimizer: AdamConfig, steps: int, batch_size: int,
              sampler_config: Optional[SamplerConfig] = None, seed: Optional[int] = None,
              estimator: str = "recompute", track: str = "classical2") -> TrainingTrace:
    """Huấn luyện EBM theo log-hợp lý điều kiện, pha âm lấy từ sampler.

    Gradient hướng tăng được đổi dấu trước khi đưa vào ADAM. Mỗi bước rút một seed
    gốc từ bộ sinh của lượt chạy, điểm dữ liệu thứ i dùng seed gốc ⊕ i.
    sampler=None dùng pha âm chính xác (chỉ hợp lý khi M nhỏ).
    Cảnh báo một lần nếu max|W| chạm 1.

    Returns:
        TrainingTrace với bước 0 và các bước 1..steps.
    """
    if len(train) == 0:
        raise ValueError("Tập train rỗng")
    sampler_config = sampler_config or SamplerConfig()
    rng = make_rng(seed)
    adam = AdamOptimizer(optimizer)
    trace = TrainingTrace(track=track, seed=seed)
    _record(trace, 0, model, train, test)
    warned = warn_weight_bound(model.max_abs_weight(), 0)

    batches = iterate_batches(train, batch_size, rng)
    for step in range(1, steps + 1):
        X, Y = next(batches)
        base_seed = draw_seed(rng)
        ascent = grad_conditional_ll(model, X, Y, sampler=sampler, config=sampler_config,
                                     base_seed=base_seed, estimator=estimator)
        adam.maximize_step(model, ascent)
        _record(trace, step, model, train, test)
        warned = warn_weight_bound(model.max_abs_weight(), step, warned)
        logger.debug(f"EBM bước {step}: {trace.records[-1]}")
    logger.info(f"Hoàn tất {steps} bước EBM ({track}), độ chính xác test cuối: {trace.accuracies[-1]:.4f}")
    return trace
