"""Mô hình nhị phân bậc hai (BQM) cho phân phối điều kiện P(k, y | x).

Biến được xếp theo thứ tự (k_1..k_K, y_1..y_M). Năng lượng E(q) = qᵀQq + offset
với Q tam giác trên: đường chéo là hệ số tuyến tính, phần trên là hệ số bậc hai.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List

import numpy as np

from ..core.exceptions import ShapeMismatchError
from ..core.params import NetworkParameters

logger = logging.getLogger(__name__)


def format_coefficient(value: float) -> str:
    """17 chữ số có nghĩa: đủ để đọc lại đúng từng bit của float64."""
    return f"{float(value):.17g}"


@dataclass(eq=False)
class Bqm:
    Q: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        Q = np.array(self.Q, dtype=np.float64)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ShapeMismatchError(f"Q phải là ma trận vuông, nhận được {Q.shape}")
        if np.any(np.tril(Q, -1) != 0.0):
            raise ValueError("Q phải là ma trận tam giác trên")
        self.Q = Q
        self.offset = float(self.offset)

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    @property
    def linear(self) -> np.ndarray:
        return np.diag(self.Q).copy()

    @property
    def quadratic(self) -> np.ndarray:
        return np.triu(self.Q, 1)

    def energy(self, q: np.ndarray) -> np.ndarray:
        """qᵀQq + offset cho một phép gán (n,) hoặc nhiều phép gán (S×n)."""
        q = np.asarray(q, dtype=np.float64)
        if q.shape[-1] != self.n:
            raise ShapeMismatchError(f"Phép gán dài {q.shape[-1]}, BQM có {self.n} biến")
        return np.einsum("...i,ij,...j->...", q, self.Q, q) + self.offset

    def to_lines(self) -> List[str]:
        lines = [f"{self.n} {format_coefficient(self.offset)}"]
        for i in range(self.n):
            lines.append(f"{i} {i} {format_coefficient(self.Q[i, i])}")
        rows, cols = np.nonzero(np.triu(self.Q, 1))
        for i, j in zip(rows, cols):
            lines.append(f"{i} {j} {format_coefficient(self.Q[i, j])}")
        return lines

    def to_text(self) -> str:
        return "\n".join(self.to_lines()) + "\n"

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "Bqm":
        rows = [line.split() for line in lines if line.strip() and not line.lstrip().startswith("#")]
        if not rows or len(rows[0]) != 2:
            raise ValueError("Thiếu dòng tiêu đề 'n offset'")
        n, offset = int(rows[0][0]), float(rows[0][1])
        Q = np.zeros((n, n))
        for parts in rows[1:]:
            if len(parts) != 3:
                raise ValueError(f"Dòng hệ số không hợp lệ: {' '.join(parts)}")
            i, j, value = int(parts[0]), int(parts[1]), float(parts[2])
            if not (0 <= i <= j < n):
                raise ValueError(f"Chỉ số ({i}, {j}) không hợp lệ cho n = {n}")
            Q[i, j] = value
        return cls(Q, offset)

    @classmethod
    def from_text(cls, text: str) -> "Bqm":
        return cls.from_lines(text.splitlines())


def build_conditional_bqm(model: NetworkParameters, x: np.ndarray, beta_eff: float) -> Bqm:
    """Mã hoá E(x, k, y) với x cố định thành BQM, đã chia cho beta_eff.

    Q = -(1/β_eff) [[diag(W1x + b), W2ᵀ], [0, diag(c)]], offset 0, do đó
    β_eff · E_BQM(k, y) = E(x, k, y). Kích thước (K+M)×(K+M) không phụ thuộc N.
    """
    if beta_eff <= 0:
        raise ValueError(f"beta_eff phải dương, nhận được {beta_eff}")
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.n_inputs,):
        raise ShapeMismatchError(f"x có kích thước {x.shape}, mô hình cần ({model.n_inputs},)")
    K, M = model.n_hidden, model.n_outputs
    Q = np.zeros((K + M, K + M))
    Q[np.arange(K), np.arange(K)] = model.W1 @ x + model.b
    Q[np.arange(K, K + M), np.arange(K, K + M)] = model.c
    Q[:K, K:] = model.W2.T
    return Bqm(-Q / beta_eff, 0.0)


def save_bqm(bqm: Bqm, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(bqm.to_text(), encoding="utf-8")
    logger.info(f"✅ Đã ghi BQM {bqm.n} biến vào {path}")
    return path


def load_bqm(path) -> Bqm:
    return Bqm.from_text(Path(path).read_text(encoding="utf-8"))
