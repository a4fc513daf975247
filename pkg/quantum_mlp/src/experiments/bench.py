"""Đo thời gian chạy theo số nút vào (1 nút ẩn), phiên bản cổ điển.

Hai tác vụ trên một batch cố định:
    mlp_forward   lan truyền xuôi MLP N×1×1
    gibbs_sweep   một lượt Gibbs theo khối (ẩn | vào rồi vào | ẩn) của máy N×1
Mỗi kích thước lấy trung vị của `repeats` lần đo.
"""
import logging
import time
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
import pandas as pd

from ..core.activations import sigmoid
from ..core.rng import make_rng
from ..mlp.model import MlpModel, forward

logger = logging.getLogger(__name__)

BENCH_COLUMNS = ["workload", "size", "median_seconds", "repeats", "batch"]


def median_runtime(fn: Callable[[], object], repeats: int) -> float:
    fn()  # khởi động
    timings = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        timings.append(time.perf_counter() - start)
    return float(np.median(timings))


def _gibbs_sweep(W: np.ndarray, b_hidden: np.ndarray, b_visible: np.ndarray,
                 visible: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    p_hidden = sigmoid(visible @ W.T + b_hidden)
    hidden = (rng.random(p_hidden.shape) < p_hidden).astype(np.float64)
    p_visible = sigmoid(hidden @ W + b_visible)
    return (rng.random(p_visible.shape) < p_visible).astype(np.float64)


def bench_runtime(sizes: Sequence[int], repeats: int = 21, batch: int = 1000, seed: int = 0,
                  output_path: Optional[Path] = None) -> pd.DataFrame:
    """Bảng thời gian (giây) cho từng tác vụ và kích thước N.

    Args:
        sizes: các số nút vào cần đo (mỗi giá trị >= 1).
        repeats: số lần đo cho mỗi điểm, lấy trung vị.
        batch: số mẫu/chuỗi xử lý cùng lúc.
        seed: seed cho dữ liệu và trọng số ngẫu nhiên.
        output_path: nếu có, ghi bảng ra CSV.
    """
    if not sizes:
        raise ValueError("sizes không được rỗng")
    if any(int(size) < 1 for size in sizes):
        raise ValueError("Mọi kích thước phải >= 1")
    if repeats < 1 or batch < 1:
        raise ValueError("repeats và batch phải >= 1")
    rng = make_rng(seed)
    rows = []
    for size in sorted(int(s) for s in sizes):
        model = MlpModel.gaussian(size, 1, 1, std=0.01, rng=rng)
        X = rng.random((batch, size))
        visible = (rng.random((batch, size)) < 0.5).astype(np.float64)
        b_visible = np.zeros(size)

        mlp_time = median_runtime(lambda: forward(model, X), repeats)
        gibbs_time = median_runtime(lambda: _gibbs_sweep(model.W1, model.b, b_visible, visible, rng), repeats)
        rows.append({"workload": "mlp_forward", "size": size, "median_seconds": mlp_time,
                     "repeats": repeats, "batch": batch})
        rows.append({"workload": "gibbs_sweep", "size": size, "median_seconds": gibbs_time,
                     "repeats": repeats, "batch": batch})
        logger.info(f"N={size}: mlp {mlp_time:.3e}s, gibbs {gibbs_time:.3e}s")

    table = pd.DataFrame(rows, columns=BENCH_COLUMNS)
    if output_path is not None:
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(output_path, index=False, float_format="%.6e")
    return table
