from typing import Sequence, Tuple, Union

import numpy as np

from .exceptions import ShapeMismatchError
from .params import NetworkParameters

Pairs = Sequence[Tuple[np.ndarray, np.ndarray]]


def as_batch(params: NetworkParameters, X: Union[np.ndarray, Pairs],
             Y: np.ndarray = None) -> Tuple[np.ndarray, np.ndarray]:
    """Chuẩn hoá batch về (X: B×N, Y: B×M).

    Nhận cả hai dạng: mảng X, Y riêng hoặc danh sách các cặp (x, y).
    """
    if Y is None:
        if isinstance(X, np.ndarray):
            raise ValueError("Truyền mảng X thì phải truyền cả Y; dạng không có Y là danh sách cặp (x, y)")
        if len(X) == 0:
            raise ValueError("Batch rỗng")
        X, Y = zip(*X)
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim < 2:
        Y = Y.reshape(X.shape[0], -1) if X.shape[0] else Y.reshape(0, params.n_outputs)
    if X.shape[0] == 0:
        raise ValueError("Batch rỗng")
    if X.shape[1] != params.n_inputs:
        raise ShapeMismatchError(f"x dài {X.shape[1]}, mô hình cần {params.n_inputs}")
    if Y.shape != (X.shape[0], params.n_outputs):
        raise ShapeMismatchError(f"Y có kích thước {Y.shape}, cần {(X.shape[0], params.n_outputs)}")
    return X, Y


def check_binary(name: str, values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    if not np.all((values == 0.0) | (values == 1.0)):
        raise ValueError(f"{name} phải chỉ gồm 0 và 1")
    return values
