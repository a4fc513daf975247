"""Huấn luyện song song MLP (lan truyền ngược) và EBM (lấy mẫu) rồi đánh giá chéo.

Hai mô hình khởi tạo giống hệt nhau và dùng chung dãy batch. Tại mỗi bước, mỗi
mô hình được đánh giá bằng trọng số của chính nó và của mô hình còn lại.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..core.optimizer import AdamConfig, AdamOptimizer
from ..core.params import NetworkParameters
from ..core.rng import draw_seed, make_rng
from ..core.trace import TrainingTrace, warn_weight_bound
from ..ebm.gradient import grad_conditional_ll
from ..ebm.model import EbmModel, ebm_accuracy, mean_conditional_log_likelihood
from ..etl.transform import Dataset, iterate_batches
from ..mlp.model import MlpModel, accuracy, batch_loss, forward, grad_backprop
from ..sampling.config import SamplerConfig
from .metrics import symmetrized_kl, transfer_weights

if TYPE_CHECKING:
    from ..sampling.samplers import Sampler

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

# Thứ tự cột của file CSV
EQUIVALENCE_COLUMNS = [
    "step",
    "mlp_loss",                 # cross-entropy train, trọng số MLP
    "mlp_loss_ebm_weights",     # cross-entropy train, trọng số kế thừa từ EBM
    "ebm_loglik",               # log P(y|x) train, trọng số EBM
    "ebm_loglik_mlp_weights",   # log P(y|x) train, trọng số kế thừa từ MLP
    "acc_mlp_mlp_weights",      # quyết định MLP, trọng số MLP
    "acc_mlp_ebm_weights",      # quyết định MLP, trọng số EBM
    "acc_ebm_ebm_weights",      # quyết định EBM argmax P(y|x), trọng số EBM
    "acc_ebm_mlp_weights",      # quyết định EBM, trọng số MLP
    "kl_nats",                  # KL đối xứng giữa hai đầu ra MLP trên tập test
]


@dataclass(eq=False)
class EquivalenceReport:
    seed: Optional[int] = None
    settings: Dict[str, Any] = field(default_factory=dict)
    rows: List[Dict[str, float]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def series(self, column: str) -> np.ndarray:
        return np.array([row[column] for row in self.rows], dtype=np.float64)

    def add_row(self, step: int, mlp: MlpModel, ebm: EbmModel, train: Dataset, test: Dataset) -> None:
        ebm_as_mlp = transfer_weights(ebm)
        mlp_as_ebm = transfer_weights(mlp)
        self.rows.append({
            "step": int(step),
            "mlp_loss": batch_loss(mlp, train.inputs, train.targets),
            "mlp_loss_ebm_weights": batch_loss(ebm_as_mlp, train.inputs, train.targets),
            "ebm_loglik": mean_conditional_log_likelihood(ebm, train.inputs, train.targets),
            "ebm_loglik_mlp_weights": mean_conditional_log_likelihood(mlp_as_ebm, train.inputs, train.targets),
            "acc_mlp_mlp_weights": accuracy(mlp, test),
            "acc_mlp_ebm_weights": accuracy(ebm_as_mlp, test),
            "acc_ebm_ebm_weights": ebm_accuracy(ebm, test),
            "acc_ebm_mlp_weights": ebm_accuracy(mlp_as_ebm, test),
            "kl_nats": symmetrized_kl(forward(mlp, test.inputs), forward(ebm_as_mlp, test.inputs)),
        })

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=EQUIVALENCE_COLUMNS)

    def to_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.10g")
        return path

    def to_json(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "seed": self.seed,
            "settings": self.settings,
            "columns": EQUIVALENCE_COLUMNS,
            "series": {column: self.series(column).tolist() for column in EQUIVALENCE_COLUMNS},
        }
        path.write_text(json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8")
        return path

    @classmethod
    def from_json(cls, path) -> "EquivalenceReport":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if payload.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"Không hỗ trợ schema_version {payload.get('schema_version')}")
        series = payload["series"]
        rows = [dict(zip(series, values)) for values in zip(*series.values())]
        for row in rows:
            row["step"] = int(row["step"])
        return cls(seed=payload.get("seed"), settings=payload.get("settings", {}), rows=rows)

    def to_trace(self) -> TrainingTrace:
        """Trace chuẩn cho nhánh equivalence: mô hình EBM đánh giá qua MLP."""
        trace = TrainingTrace(track="equivalence", seed=self.seed)
        for row in self.rows:
            trace.record(row["step"], train_loss=row["mlp_loss_ebm_weights"],
                         test_accuracy=row["acc_mlp_ebm_weights"],
                         ebm_loglik_estimate=row["ebm_loglik"], kl_nats=row["kl_nats"])
        return trace


def run_equivalence_experiment(train: Dataset, test: Dataset, n_hidden: int, optimizer: AdamConfig,
                               steps: int, batch_size: int, seed: Optional[int] = None,
                               sampler: Optional["Sampler"] = None,
                               sampler_config: Optional[SamplerConfig] = None,
                               init_std: float = 0.01, n_outputs: int = 1,
                               estimator: str = "recompute") -> EquivalenceReport:
    """Chạy thí nghiệm tương đương.

    Args:
        train, test: dữ liệu nhị phân.
        n_hidden: số nút ẩn K (N lấy từ dữ liệu).
        optimizer: cấu hình ADAM, dùng chung cho hai mô hình.
        steps, batch_size: số bước cập nhật và kích thước batch.
        seed: seed gốc cho khởi tạo, dãy batch và sampler.
        sampler: sampler cho pha âm của EBM; None dùng kỳ vọng chính xác.
        sampler_config: cấu hình sampler.
        init_std: độ lệch chuẩn khởi tạo Gaussian cho trọng số.

    Returns:
        EquivalenceReport có steps + 1 dòng (bước 0 trước khi cập nhật).
    """
    if len(train) == 0:
        raise ValueError("Tập train rỗng")
    rng = make_rng(seed)
    init = NetworkParameters.gaussian(train.n_inputs, n_hidden, n_outputs, std=init_std, rng=rng)
    mlp = MlpModel.from_parameters(init)
    ebm = EbmModel.from_parameters(init)
    batches = iterate_batches(train, batch_size, make_rng(draw_seed(rng)))
    sample_rng = make_rng(draw_seed(rng))
    sampler_config = sampler_config or SamplerConfig()
    mlp_opt, ebm_opt = AdamOptimizer(optimizer), AdamOptimizer(optimizer)

    report = EquivalenceReport(seed=seed, settings={
        "n_inputs": train.n_inputs, "n_hidden": n_hidden, "n_outputs": n_outputs,
        "learning_rate": optimizer.learning_rate, "batch_size": batch_size, "steps": steps,
        "sampler": getattr(sampler, "name", "exact"), "reads": sampler_config.reads,
        "init_std": init_std, "train_size": len(train), "test_size": len(test),
    })
    report.add_row(0, mlp, ebm, train, test)
    warned = warn_weight_bound(max(mlp.max_abs_weight(), ebm.max_abs_weight()), 0)
    for step in range(1, steps + 1):
        X, Y = next(batches)
        mlp_opt.minimize_step(mlp, grad_backprop(mlp, X, Y))
        ascent = grad_conditional_ll(ebm, X, Y, sampler=sampler, config=sampler_config,
                                     base_seed=draw_seed(sample_rng), estimator=estimator)
        ebm_opt.maximize_step(ebm, ascent)
        report.add_row(step, mlp, ebm, train, test)
        warned = warn_weight_bound(max(mlp.max_abs_weight(), ebm.max_abs_weight()), step, warned)
        logger.debug(f"Tương đương bước {step}: {report.rows[-1]}")
    logger.info(f"Hoàn tất thí nghiệm tương đương {steps} bước, KL cuối {report.rows[-1]['kl_nats']:.4g} nats")
    return report
