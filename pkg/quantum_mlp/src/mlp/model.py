import numpy as np

from ..core.activations import sigmoid
from ..core.batch import as_batch
from ..core.exceptions import ShapeMismatchError
from ..core.params import GradientSet, NetworkParameters
from ..etl.transform import Dataset

# Kẹp đầu ra trước khi lấy log
OUTPUT_CLAMP = 1e-12


class MlpModel(NetworkParameters):
    """MLP một lớp ẩn: z = σ(W2 σ(W1 x + b) + c)."""


def hidden_activations(model: NetworkParameters, X: np.ndarray) -> np.ndarray:
    return sigmoid(X @ model.W1.T + model.b)


def forward(model: NetworkParameters, x: np.ndarray) -> np.ndarray:
    """Lan truyền xuôi; nhận một vector (N,) hoặc một batch (B×N)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.n_inputs:
        raise ShapeMismatchError(f"x dài {x.shape[-1]}, mô hình cần {model.n_inputs}")
    h = hidden_activations(model, x)
    return sigmoid(h @ model.W2.T + model.c)


def cross_entropy(y: np.ndarray, z: np.ndarray, clamp: float = OUTPUT_CLAMP):
    """Sigmoid cross-entropy, cộng theo các nút ra (trục cuối)."""
    y = np.asarray(y, dtype=np.float64)
    z = np.clip(np.asarray(z, dtype=np.float64), clamp, 1.0 - clamp)
    return -np.sum(y * np.log(z) + (1.0 - y) * np.log1p(-z), axis=-1)


def batch_loss(model: NetworkParameters, X, Y=None) -> float:
    X, Y = as_batch(model, X, Y)
    return float(np.mean(cross_entropy(Y, forward(model, X))))


def grad_backprop(model: NetworkParameters, X, Y=None) -> GradientSet:
    """Gradient của cross-entropy trung bình theo batch (hướng giảm, dùng z - y)."""
    X, Y = as_batch(model, X, Y)
    batch = X.shape[0]
    H = hidden_activations(model, X)                  # B×K
    Z = sigmoid(H @ model.W2.T + model.c)             # B×M
    delta_out = Z - Y                                 # B×M
    delta_hidden = (delta_out @ model.W2) * H * (1.0 - H)  # B×K
    return GradientSet(
        dW1=delta_hidden.T @ X / batch,
        dW2=delta_out.T @ H / batch,
        db=delta_hidden.mean(axis=0),
        dc=delta_out.mean(axis=0),
    )


def predict(model: NetworkParameters, x: np.ndarray) -> np.ndarray:
    # z = 0.5 được xếp vào lớp 0
    return (forward(model, x) > 0.5).astype(np.int64)


def accuracy(model: NetworkParameters, dataset: Dataset) -> float:
    """Tỉ lệ mẫu dự đoán đúng toàn bộ các nút ra."""
    if len(dataset) == 0:
        return float("nan")
    predictions = predict(model, dataset.inputs)
    return float(np.mean(np.all(predictions == dataset.targets, axis=1)))
