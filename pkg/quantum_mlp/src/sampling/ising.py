"""Mô hình Ising tương đương với BQM và bước kẹp hệ số theo giới hạn phần cứng.

Quy ước: E(s) = -Σ h_i s_i - Σ_{i<j} J_ij s_i s_j + offset với s ∈ {-1, 1}^n,
liên hệ với BQM qua q = (s + 1) / 2.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.special import softmax

from ..core.exceptions import ShapeMismatchError
from ..core.enumeration import enumerate_states
from .bqm import Bqm, format_coefficient

logger = logging.getLogger(__name__)

H_RANGE = (-2.0, 2.0)
J_RANGE = (-1.0, 1.0)


@dataclass(eq=False)
class IsingModel:
    h: np.ndarray
    J: np.ndarray      # tam giác trên ngặt
    offset: float = 0.0

    def __post_init__(self):
        h = np.array(self.h, dtype=np.float64).reshape(-1)
        J = np.array(self.J, dtype=np.float64)
        if J.shape != (h.shape[0], h.shape[0]):
            raise ShapeMismatchError(f"J có kích thước {J.shape}, cần {(h.shape[0], h.shape[0])}")
        if np.any(np.tril(J) != 0.0):
            raise ValueError("J phải là ma trận tam giác trên ngặt")
        self.h = h
        self.J = J
        self.offset = float(self.offset)

    @property
    def n(self) -> int:
        return self.h.shape[0]

    def symmetric_couplings(self) -> np.ndarray:
        return self.J + self.J.T

    def energy(self, s: np.ndarray) -> np.ndarray:
        """Năng lượng của một cấu hình spin (n,) hoặc nhiều cấu hình (S×n)."""
        s = np.asarray(s, dtype=np.float64)
        if s.shape[-1] != self.n:
            raise ShapeMismatchError(f"Cấu hình dài {s.shape[-1]}, mô hình có {self.n} spin")
        return -(s @ self.h) - np.einsum("...i,ij,...j->...", s, self.J, s) + self.offset

    def local_fields(self, s: np.ndarray) -> np.ndarray:
        """f_i = h_i + Σ_j J_ij s_j; lật spin i làm năng lượng tăng 2 s_i f_i."""
        return np.asarray(s, dtype=np.float64) @ self.symmetric_couplings() + self.h

    def to_text(self) -> str:
        lines = [f"{self.n} {format_coefficient(self.offset)}"]
        lines += [f"{i} {i} {format_coefficient(v)}" for i, v in enumerate(self.h)]
        rows, cols = np.nonzero(self.J)
        lines += [f"{i} {j} {format_coefficient(self.J[i, j])}" for i, j in zip(rows, cols)]
        return "\n".join(lines) + "\n"


def bqm_to_ising(bqm: Bqm) -> IsingModel:
    Q = bqm.Q
    diag = np.diag(Q)
    upper = np.triu(Q, 1)
    coupling_sum = upper.sum(axis=0) + upper.sum(axis=1)
    h = -(diag / 2.0 + coupling_sum / 4.0)
    J = -upper / 4.0
    offset = bqm.offset + diag.sum() / 2.0 + upper.sum() / 4.0
    return IsingModel(h, J, offset)


def ising_to_bqm(ising: IsingModel) -> Bqm:
    coupling_sum = ising.J.sum(axis=0) + ising.J.sum(axis=1)
    Q = -4.0 * ising.J
    Q[np.diag_indices(ising.n)] = -2.0 * ising.h + 2.0 * coupling_sum
    offset = ising.offset + ising.h.sum() - ising.J.sum()
    return Bqm(Q, offset)


def spin_states(n: int) -> np.ndarray:
    """Mọi cấu hình spin, cùng thứ tự với enumerate_states (s = 2q - 1)."""
    return 2 * enumerate_states(n).astype(np.int8) - 1


@dataclass(frozen=True)
class ClampEntry:
    kind: str                 # "h" hoặc "J"
    index: Tuple[int, ...]
    original: float
    clamped: float

    @property
    def magnitude(self) -> float:
        return abs(self.original - self.clamped)


@dataclass
class ClampReport:
    entries: List[ClampEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def distorted(self) -> bool:
        """True khi có hệ số bị kẹp: phân phối lấy mẫu không còn đúng phân phối mục tiêu."""
        return bool(self.entries)

    @property
    def max_magnitude(self) -> float:
        return max((e.magnitude for e in self.entries), default=0.0)


def clamp_to_hardware(ising: IsingModel, h_range: Tuple[float, float] = H_RANGE,
                      j_range: Tuple[float, float] = J_RANGE) -> Tuple[IsingModel, ClampReport]:
    """Cắt h vào [-2, 2] và J vào [-1, 1] (không co giãn lại)."""
    h = np.clip(ising.h, *h_range)
    J = np.clip(ising.J, *j_range)
    report = ClampReport()
    for i in np.flatnonzero(h != ising.h):
        report.entries.append(ClampEntry("h", (int(i),), float(ising.h[i]), float(h[i])))
    for i, j in zip(*np.nonzero(J != ising.J)):
        report.entries.append(ClampEntry("J", (int(i), int(j)), float(ising.J[i, j]), float(J[i, j])))
    if report.distorted:
        logger.warning(f"⚠️ Đã kẹp {len(report)} hệ số Ising, lệch lớn nhất {report.max_magnitude:.4g}")
    return IsingModel(h, J, ising.offset), report


def ising_boltzmann(ising: IsingModel, beta: float) -> Tuple[np.ndarray, np.ndarray]:
    """Phân phối Boltzmann chính xác exp(-β E(s)) / Z trên 2^n cấu hình."""
    states = spin_states(ising.n)
    return states, softmax(-beta * ising.energy(states))
