import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

# Thứ tự cột cố định của trace_<trial>.csv
TRACE_COLUMNS = ["step", "train_loss", "ebm_loglik_estimate", "test_accuracy", "kl_nats", "max_abs_weight"]

# Phép chia cho β_eff giả định mọi |W| < 1
WEIGHT_BOUND = 1.0


def warn_weight_bound(max_abs_weight: float, step: int, warned: bool = False,
                      bound: float = WEIGHT_BOUND) -> bool:
    """Cảnh báo lần đầu max|W| chạm ngưỡng. Trả về True nếu đã cảnh báo (trước đó hoặc lần này)."""
    if warned or not max_abs_weight >= bound:
        return warned
    logger.warning(f"⚠️ max|W| = {max_abs_weight:.4g} >= {bound:g} tại bước {step}, trọng số không còn nhỏ")
    return True


@dataclass(eq=False)
class TrainingTrace:
    """Nhật ký theo từng bước huấn luyện (bước 0 là đánh giá trước khi cập nhật)."""

    track: str
    seed: Optional[int] = None
    records: List[Dict[str, Any]] = field(default_factory=list)

    def record(self, step: int, train_loss: float, test_accuracy: float,
               ebm_loglik_estimate: float = np.nan, kl_nats: float = np.nan,
               max_abs_weight: float = np.nan) -> None:
        self.records.append({
            "step": int(step),
            "train_loss": float(train_loss),
            "ebm_loglik_estimate": float(ebm_loglik_estimate),
            "test_accuracy": float(test_accuracy),
            "kl_nats": float(kl_nats),
            "max_abs_weight": float(max_abs_weight),
        })

    def __len__(self) -> int:
        return len(self.records)

    @property
    def steps(self) -> List[int]:
        return [r["step"] for r in self.records]

    @property
    def accuracies(self) -> np.ndarray:
        return np.array([r["test_accuracy"] for r in self.records], dtype=np.float64)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.records, columns=TRACE_COLUMNS)

    def to_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame = self.to_frame()
        frame.insert(0, "seed", self.seed)
        frame.insert(0, "track", self.track)
        frame.to_csv(path, index=False, float_format="%.10g")
        return path

    @classmethod
    def from_csv(cls, path) -> "TrainingTrace":
        frame = pd.read_csv(path)
        track = str(frame["track"].iloc[0]) if "track" in frame and len(frame) else "unknown"
        seed = int(frame["seed"].iloc[0]) if "seed" in frame and len(frame) and pd.notna(frame["seed"].iloc[0]) else None
        trace = cls(track=track, seed=seed)
        for row in frame[TRACE_COLUMNS].to_dict(orient="records"):
            trace.record(**row)
        return trace
