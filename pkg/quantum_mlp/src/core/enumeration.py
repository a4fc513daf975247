"""Liệt kê trạng thái nhị phân cho các oracle chính xác."""
import numpy as np


def enumerate_states(n: int) -> np.ndarray:
    """Mọi vector nhị phân độ dài n (2^n × n); biến đầu tiên là bit cao nhất."""
    index = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((index[:, None] >> shifts[None, :]) & 1).astype(np.int8)


def state_index(assignments: np.ndarray) -> np.ndarray:
    """Ánh xạ ngược của enumerate_states."""
    assignments = np.atleast_2d(np.asarray(assignments, dtype=np.int64))
    n = assignments.shape[1]
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    return assignments @ weights

