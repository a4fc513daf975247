"""Mô hình năng lượng (EBM) một lớp ẩn với đầu vào x được cố định.

Quy ước dấu: E(x,k,y) = -(kᵀW1x + yᵀW2k + bᵀk + cᵀy) và P ∝ exp(-E), để các
phân phối điều kiện có dạng sigmoid P(k_j=1|x,y) = σ(W1x + W2ᵀy + b)_j và
P(y_j=1|x,k) = σ(W2k + c)_j.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import logsumexp

from ..core.activations import softplus
from ..core.batch import check_binary
from ..core.enumeration import enumerate_states, state_index
from ..core.exceptions import EnumerationLimitError, ShapeMismatchError
from ..core.params import NetworkParameters
from ..etl.transform import Dataset

DEFAULT_ENUMERATION_LIMIT = 20


class EbmModel(NetworkParameters):
    """EBM có cùng bố cục tham số với MlpModel."""


def _check_input(model: NetworkParameters, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.n_inputs,):
        raise ShapeMismatchError(f"x có kích thước {x.shape}, mô hình cần ({model.n_inputs},)")
    return x


def hidden_fields(model: NetworkParameters, x: np.ndarray) -> np.ndarray:
    """W1 x + b: hệ số tuyến tính của k khi x bị cố định (một hoặc nhiều x)."""
    return np.asarray(x, dtype=np.float64) @ model.W1.T + model.b


def energy(model: NetworkParameters, x: np.ndarray, k: np.ndarray, y: np.ndarray) -> float:
    x = _check_input(model, x)
    k = check_binary("k", k)
    y = check_binary("y", y)
    if k.shape != (model.n_hidden,) or y.shape != (model.n_outputs,):
        raise ShapeMismatchError(
            f"k, y có kích thước {k.shape}, {y.shape}; cần ({model.n_hidden},), ({model.n_outputs},)"
        )
    return -float(k @ model.W1 @ x + y @ model.W2 @ k + model.b @ k + model.c @ y)


@dataclass(frozen=True, eq=False)
class ConditionalDistribution:
    """Phân phối chính xác P(k, y | x) trên 2^(K+M) trạng thái."""

    n_hidden: int
    n_outputs: int
    states: np.ndarray          # S×(K+M), k trước, y sau
    probabilities: np.ndarray   # S
    log_partition: float

    @property
    def k_states(self) -> np.ndarray:
        return self.states[:, :self.n_hidden]

    @property
    def y_states(self) -> np.ndarray:
        return self.states[:, self.n_hidden:]

    def y_marginal(self) -> Tuple[np.ndarray, np.ndarray]:
        """(các giá trị y theo thứ tự enumerate_states(M), P(y|x))."""
        y_index = state_index(self.y_states) if self.n_outputs else np.zeros(len(self.states), dtype=np.int64)
        marginal = np.bincount(y_index, weights=self.probabilities, minlength=1 << self.n_outputs)
        return enumerate_states(self.n_outputs), marginal

    def probability_of(self, k: np.ndarray, y: np.ndarray) -> float:
        idx = state_index(np.concatenate([np.asarray(k), np.asarray(y)]))[0]
        return float(self.probabilities[idx])


def exact_conditional(model: NetworkParameters, x: np.ndarray,
                      limit: int = DEFAULT_ENUMERATION_LIMIT) -> ConditionalDistribution:
    """Liệt kê toàn bộ (k, y) với x cố định và chuẩn hoá exp(-E)."""
    x = _check_input(model, x)
    K, M = model.n_hidden, model.n_outputs
    if K + M > limit:
        raise EnumerationLimitError(f"K+M = {K + M} vượt giới hạn liệt kê {limit}")
    states = enumerate_states(K + M)
    k = states[:, :K].astype(np.float64)
    y = states[:, K:].astype(np.float64)
    neg_energy = k @ hidden_fields(model, x) + y @ model.c + np.sum((y @ model.W2) * k, axis=1)
    log_z = float(logsumexp(neg_energy))
    return ConditionalDistribution(K, M, states, np.exp(neg_energy - log_z), log_z)


def log_conditional_y(model: NetworkParameters, X: np.ndarray,
                      limit: int = DEFAULT_ENUMERATION_LIMIT) -> Tuple[np.ndarray, np.ndarray]:
    """log P(y|x) chính xác cho mọi y, lấy tổng theo k dưới dạng đóng.

    Vì các nút ẩn độc lập có điều kiện khi biết (x, y):
        log P~(y|x) = cᵀy + Σ_j softplus((W1x + b + W2ᵀy)_j)
    nên chỉ cần 2^M số hạng, không phụ thuộc K.

    Returns:
        (y_states 2^M×M, log-xác suất B×2^M) với X dạng B×N (hoặc (S,) cho một x).
    """
    M = model.n_outputs
    if M > limit:
        raise EnumerationLimitError(f"M = {M} vượt giới hạn liệt kê {limit}")
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.n_inputs:
        raise ShapeMismatchError(f"x dài {X.shape[1]}, mô hình cần {model.n_inputs}")
    y_states = enumerate_states(M).astype(np.float64)
    a = hidden_fields(model, X)                                    # B×K
    shift = y_states @ model.W2                                    # S×K
    scores = y_states @ model.c + softplus(a[:, None, :] + shift[None, :, :]).sum(axis=2)  # B×S
    return y_states, scores - logsumexp(scores, axis=1)[:, None]


def conditional_log_likelihood(model: NetworkParameters, x: np.ndarray, y: np.ndarray,
                               method: str = "marginal",
                               limit: int = DEFAULT_ENUMERATION_LIMIT) -> float:
    """log P(y|x) cho một cặp (x, y); luôn <= 0.

    method="marginal" dùng công thức đóng theo k (chỉ giới hạn M),
    method="enumerate" cộng trực tiếp trên 2^(K+M) trạng thái.
    """
    y = check_binary("y", y)
    if y.shape != (model.n_outputs,):
        raise ShapeMismatchError(f"y có kích thước {y.shape}, cần ({model.n_outputs},)")
    target = int(state_index(y)[0]) if model.n_outputs else 0
    if method == "enumerate":
        _, marginal = exact_conditional(model, x, limit).y_marginal()
        return float(np.log(marginal[target]))
    if method != "marginal":
        raise ValueError(f"method không hợp lệ: {method!r}")
    _, log_probs = log_conditional_y(model, _check_input(model, x), limit)
    return float(log_probs[0, target])


def mean_conditional_log_likelihood(model: NetworkParameters, X: np.ndarray, Y: np.ndarray) -> float:
    """Trung bình log P(y|x) trên một tập (X: B×N, Y: B×M)."""
    Y = np.asarray(Y, dtype=np.int64).reshape(len(X), model.n_outputs)
    _, log_probs = log_conditional_y(model, X)
    target = state_index(Y) if model.n_outputs else np.zeros(len(X), dtype=np.int64)
    return float(np.mean(log_probs[np.arange(len(X)), target]))


def output_marginals(model: NetworkParameters, X: np.ndarray) -> np.ndarray:
    """E[y|x] = P(y_j=1|x) chính xác, dạng B×M."""
    y_states, log_probs = log_conditional_y(model, X)
    return np.exp(log_probs) @ y_states


def conditional_predict(model: NetworkParameters, X: np.ndarray) -> np.ndarray:
    """Quyết định của EBM: argmax_y P(y|x); hoà thì chọn y nhỏ hơn theo thứ tự liệt kê."""
    y_states, log_probs = log_conditional_y(model, X)
    return y_states[np.argmax(log_probs, axis=1)].astype(np.int64)


def ebm_accuracy(model: NetworkParameters, dataset: Dataset) -> float:
    if len(dataset) == 0:
        return float("nan")
    predictions = conditional_predict(model, dataset.inputs)
    return float(np.mean(np.all(predictions == dataset.targets, axis=1)))
