"""Gradient của log-hợp lý điều kiện log P(y|x) cho EBM (hướng tăng).

gradient = pha dương (x, y cố định) - pha âm (chỉ x cố định, y lấy mẫu).
Bias được xử lý như trọng số nối với một nút hằng bằng 1.
"""
from typing import TYPE_CHECKING, Optional

import numpy as np

from ..core.activations import sigmoid
from ..core.batch import as_batch
from ..core.params import GradientSet, NetworkParameters
from ..core.rng import derive_seed
from ..sampling.config import SamplerConfig
from .model import hidden_fields, log_conditional_y

if TYPE_CHECKING:
    from ..sampling.samplers import Sampler

ESTIMATORS = ("recompute", "sampled_k")


def positive_phase(model: NetworkParameters, X, Y=None) -> GradientSet:
    """Kỳ vọng với cả x và y cố định: E[k_j] = σ(W1x + W2ᵀy + b)_j."""
    X, Y = as_batch(model, X, Y)
    batch = X.shape[0]
    H = sigmoid(hidden_fields(model, X) + Y @ model.W2)     # B×K
    return GradientSet(
        dW1=H.T @ X / batch,
        dW2=Y.T @ H / batch,
        db=H.mean(axis=0),
        dc=Y.mean(axis=0),
    )


def exact_negative_phase(model: NetworkParameters, X) -> GradientSet:
    """Pha âm chính xác: lấy tổng trên 2^M giá trị y với P(y|x) dạng đóng."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    batch = X.shape[0]
    y_states, log_probs = log_conditional_y(model, X)
    probs = np.exp(log_probs)                                                    # B×S
    H = sigmoid(hidden_fields(model, X)[:, None, :] + (y_states @ model.W2)[None, :, :])  # B×S×K
    expected_h = np.einsum("bs,bsk->bk", probs, H)
    return GradientSet(
        dW1=expected_h.T @ X / batch,
        dW2=np.einsum("bs,sm,bsk->mk", probs, y_states, H) / batch,
        db=expected_h.mean(axis=0),
        dc=(probs @ y_states).mean(axis=0),
    )


def negative_phase(model: NetworkParameters, X, sampler: "Sampler", reads: int = 1000,
                   config: Optional[SamplerConfig] = None, base_seed: int = 0,
                   estimator: str = "recompute") -> GradientSet:
    """Pha âm ước lượng bằng sampler, mỗi x một SampleSet gồm `reads` mẫu (k, y).

    Args:
        model: EBM hiện tại (chỉ đọc).
        X: batch đầu vào B×N (hoặc danh sách cặp (x, y); y bị bỏ qua).
        sampler: đối tượng có phương thức sample(model, x, config).
        reads: số mẫu mỗi điểm dữ liệu khi không truyền config.
        config: cấu hình sampler; seed của điểm thứ i là base_seed ⊕ i.
        estimator: "recompute" giữ ỹ rồi tính lại σ(W1x + W2ᵀỹ + b);
            "sampled_k" dùng trực tiếp k̃ đã lấy mẫu.

    Returns:
        GradientSet trung bình theo batch.
    """
    if estimator not in ESTIMATORS:
        raise ValueError(f"estimator không hợp lệ: {estimator!r}, chọn một trong {ESTIMATORS}")
    if isinstance(X, (list, tuple)) and X and isinstance(X[0], tuple):
        X = [pair[0] for pair in X]
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[0] == 0:
        raise ValueError("Batch rỗng")
    config = config if config is not None else SamplerConfig(reads=reads)
    K = model.n_hidden
    total = GradientSet.zeros_like(model)
    for i, x in enumerate(X):
        samples = sampler.sample(model, x, config.with_seed(derive_seed(base_seed, i)))
        weights = samples.weights                                   # U
        y_tilde = samples.assignments[:, K:].astype(np.float64)     # U×M
        if estimator == "recompute":
            h_tilde = sigmoid(hidden_fields(model, x) + y_tilde @ model.W2)
        else:
            h_tilde = samples.assignments[:, :K].astype(np.float64)
        mean_h = weights @ h_tilde
        total.dW1 += np.outer(mean_h, x)
        total.dW2 += (y_tilde * weights[:, None]).T @ h_tilde
        total.db += mean_h
        total.dc += weights @ y_tilde
    return total.scale(1.0 / X.shape[0])


def grad_conditional_ll(model: NetworkParameters, X, Y=None, sampler: Optional["Sampler"] = None,
                        reads: int = 1000, config: Optional[SamplerConfig] = None,
                        base_seed: int = 0, estimator: str = "recompute") -> GradientSet:
    """Hướng tăng của trung bình log P(y|x); không có sampler thì dùng pha âm chính xác."""
    X, Y = as_batch(model, X, Y)
    positive = positive_phase(model, X, Y)
    if sampler is None:
        return positive - exact_negative_phase(model, X)
    return positive - negative_phase(model, X, sampler, reads, config, base_seed, estimator)
