"""Chuyển trọng số giữa EBM/MLP và các thước đo so sánh hai cách hiểu."""
from typing import Dict, Sequence, Union

import numpy as np

from ..core.exceptions import ShapeMismatchError
from ..core.params import NetworkParameters
from ..ebm.gradient import grad_conditional_ll
from ..ebm.model import EbmModel
from ..mlp.model import OUTPUT_CLAMP, MlpModel, grad_backprop

FIRST_ORDER_GROUPS = ("W1", "b", "c")


def transfer_weights(source: Union[EbmModel, MlpModel]) -> Union[MlpModel, EbmModel]:
    """Sao chép nguyên W1, W2, b, c sang cách hiểu còn lại."""
    if isinstance(source, EbmModel):
        return MlpModel.from_parameters(source)
    if isinstance(source, MlpModel):
        return EbmModel.from_parameters(source)
    raise TypeError(f"Không chuyển được trọng số từ {type(source).__name__}")


def bernoulli_kl(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return p * (np.log(p) - np.log(q)) + (1.0 - p) * (np.log1p(-p) - np.log1p(-q))


def symmetrized_kl(p_outputs, q_outputs, clamp: float = OUTPUT_CLAMP) -> float:
    """Trung bình theo mẫu của D(p‖q) + D(q‖p) (nats), cộng theo các nút ra Bernoulli."""
    p = np.asarray(p_outputs, dtype=np.float64)
    q = np.asarray(q_outputs, dtype=np.float64)
    if p.shape != q.shape:
        raise ShapeMismatchError(f"Hai dãy đầu ra khác kích thước: {p.shape} và {q.shape}")
    if p.size == 0:
        raise ValueError("Dãy đầu ra rỗng")
    p = np.clip(p, clamp, 1.0 - clamp)
    q = np.clip(q, clamp, 1.0 - clamp)
    per_unit = bernoulli_kl(p, q) + bernoulli_kl(q, p)
    per_example = per_unit.sum(axis=-1) if per_unit.ndim > 1 else per_unit
    return float(max(per_example.mean(), 0.0))


def gradient_discrepancy(params: NetworkParameters, X, Y=None) -> Dict[str, float]:
    """Độ lệch tương đối giữa gradient giảm của MLP và gradient tăng (đổi dấu) chính xác của EBM.

    Với mỗi nhóm tham số: max|g_mlp + g_ebm| / max|g_mlp|. Nhóm W1, b, c lệch bậc w²
    khi trọng số cỡ w; W2 chỉ khớp ở bậc 0 (lệch bậc w). Khoá "first_order" là
    giá trị lớn nhất trên W1, b, c.
    """
    descent = grad_backprop(params, X, Y).as_dict()
    ascent = grad_conditional_ll(params, X, Y).as_dict()
    report = {}
    for name, g in descent.items():
        scale = np.max(np.abs(g))
        diff = np.max(np.abs(g + ascent[name]))
        report[name] = float(diff / scale) if scale > 0 else float(diff)
    report["first_order"] = max(report[name] for name in FIRST_ORDER_GROUPS)
    return report


def fit_scaling_exponent(scales: Sequence[float], discrepancies: Sequence[float]) -> float:
    """Hệ số góc của log(độ lệch) theo log(thang trọng số)."""
    scales = np.asarray(scales, dtype=np.float64)
    discrepancies = np.asarray(discrepancies, dtype=np.float64)
    if scales.shape != discrepancies.shape or scales.size < 2:
        raise ValueError("Cần ít nhất hai cặp (thang, độ lệch) cùng độ dài")
    if np.any(scales <= 0) or np.any(discrepancies <= 0):
        raise ValueError("Thang và độ lệch phải dương để lấy log")
    slope, _ = np.polyfit(np.log(scales), np.log(discrepancies), 1)
    return float(slope)
