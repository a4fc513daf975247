"""Bộ tham số (W1, W2, b, c) dùng chung cho EBM và MLP.

Hai mô hình có cùng bố cục tham số nên việc chuyển trọng số giữa chúng chỉ là
sao chép. File nhị phân lưu trọng số cũng dùng chung định dạng:

    magic (8 byte) | N, K, M (uint32 little-endian) | W1, W2, b, c (float64 little-endian, row-major)
"""
import struct
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Dict, Optional, Tuple, Type, TypeVar

import numpy as np

from .exceptions import ShapeMismatchError

PARAMETER_NAMES = ("W1", "W2", "b", "c")
WEIGHTS_MAGIC = b"QMLPW001"

P = TypeVar("P", bound="NetworkParameters")


def _as_float_array(value, ndim: int, name: str) -> np.ndarray:
    array = np.array(value, dtype=np.float64)
    if array.ndim != ndim:
        raise ShapeMismatchError(f"{name} phải có {ndim} chiều, nhận được {array.ndim}")
    return array


@dataclass(eq=False)
class NetworkParameters:
    W1: np.ndarray  # K×N
    W2: np.ndarray  # M×K
    b: np.ndarray   # K, bias lớp ẩn
    c: np.ndarray   # M, bias lớp ra

    def __post_init__(self):
        self.W1 = _as_float_array(self.W1, 2, "W1")
        self.W2 = _as_float_array(self.W2, 2, "W2")
        self.b = _as_float_array(self.b, 1, "b")
        self.c = _as_float_array(self.c, 1, "c")
        self.validate()

    @property
    def n_inputs(self) -> int:
        return self.W1.shape[1]

    @property
    def n_hidden(self) -> int:
        return self.W1.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.W2.shape[0]

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.n_inputs, self.n_hidden, self.n_outputs

    def validate(self) -> None:
        """Kiểm tra tính nhất quán kích thước và giá trị hữu hạn."""
        K = self.W1.shape[0]
        if self.W2.shape[1] != K or self.b.shape[0] != K:
            raise ShapeMismatchError(
                f"Số nút ẩn không khớp: W1 có {K} hàng, W2 có {self.W2.shape[1]} cột, b dài {self.b.shape[0]}"
            )
        if self.W2.shape[0] != self.c.shape[0]:
            raise ShapeMismatchError(
                f"Số nút ra không khớp: W2 có {self.W2.shape[0]} hàng, c dài {self.c.shape[0]}"
            )
        for name in PARAMETER_NAMES:
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"{name} chứa giá trị NaN/Inf")

    def as_dict(self) -> Dict[str, np.ndarray]:
        # Trả về chính các mảng (không sao chép) để optimizer cập nhật tại chỗ
        return {name: getattr(self, name) for name in PARAMETER_NAMES}

    def copy(self: P) -> P:
        return type(self)(**{name: getattr(self, name).copy() for name in PARAMETER_NAMES})

    def scaled(self: P, factor: float) -> P:
        return type(self)(**{name: getattr(self, name) * factor for name in PARAMETER_NAMES})

    def max_abs_weight(self) -> float:
        return float(max(np.max(np.abs(self.W1), initial=0.0), np.max(np.abs(self.W2), initial=0.0)))

    @classmethod
    def from_parameters(cls: Type[P], other: "NetworkParameters") -> P:
        return cls(**{name: getattr(other, name).copy() for name in PARAMETER_NAMES})

    @classmethod
    def zeros(cls: Type[P], n_inputs: int, n_hidden: int, n_outputs: int = 1) -> P:
        return cls(
            W1=np.zeros((n_hidden, n_inputs)),
            W2=np.zeros((n_outputs, n_hidden)),
            b=np.zeros(n_hidden),
            c=np.zeros(n_outputs),
        )

    @classmethod
    def gaussian(cls: Type[P], n_inputs: int, n_hidden: int, n_outputs: int = 1,
                 std: float = 0.01, rng: Optional[np.random.Generator] = None) -> P:
        """Khởi tạo Gaussian(0, std) cho trọng số, bias bằng 0."""
        rng = rng if rng is not None else np.random.default_rng()
        return cls(
            W1=rng.normal(0.0, std, size=(n_hidden, n_inputs)),
            W2=rng.normal(0.0, std, size=(n_outputs, n_hidden)),
            b=np.zeros(n_hidden),
            c=np.zeros(n_outputs),
        )

    @classmethod
    def fan_in_uniform(cls: Type[P], n_inputs: int, n_hidden: int, n_outputs: int = 1,
                       rng: Optional[np.random.Generator] = None) -> P:
        """Khởi tạo U(-1/sqrt(fan_in), 1/sqrt(fan_in)) cho cả trọng số và bias."""
        rng = rng if rng is not None else np.random.default_rng()
        bound1 = 1.0 / np.sqrt(n_inputs)
        bound2 = 1.0 / np.sqrt(n_hidden)
        return cls(
            W1=rng.uniform(-bound1, bound1, size=(n_hidden, n_inputs)),
            W2=rng.uniform(-bound2, bound2, size=(n_outputs, n_hidden)),
            b=rng.uniform(-bound1, bound1, size=n_hidden),
            c=rng.uniform(-bound2, bound2, size=n_outputs),
        )


@dataclass(eq=False)
class GradientSet:
    dW1: np.ndarray
    dW2: np.ndarray
    db: np.ndarray
    dc: np.ndarray

    @classmethod
    def zeros_like(cls, params: NetworkParameters) -> "GradientSet":
        return cls(np.zeros_like(params.W1), np.zeros_like(params.W2),
                   np.zeros_like(params.b), np.zeros_like(params.c))

    def _combine(self, other: "GradientSet", op) -> "GradientSet":
        return GradientSet(*(op(getattr(self, f.name), getattr(other, f.name)) for f in fields(self)))

    def __add__(self, other: "GradientSet") -> "GradientSet":
        return self._combine(other, np.add)

    def __sub__(self, other: "GradientSet") -> "GradientSet":
        return self._combine(other, np.subtract)

    def __neg__(self) -> "GradientSet":
        return self.scale(-1.0)

    def scale(self, factor: float) -> "GradientSet":
        return GradientSet(*(getattr(self, f.name) * factor for f in fields(self)))

    def as_dict(self) -> Dict[str, np.ndarray]:
        """Khoá theo tên tham số để ghép với NetworkParameters.as_dict()."""
        return dict(zip(PARAMETER_NAMES, (self.dW1, self.dW2, self.db, self.dc)))

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(getattr(self, f.name)), initial=0.0) for f in fields(self)))

    def check_shapes(self, params: NetworkParameters) -> None:
        for name, grad in self.as_dict().items():
            if grad.shape != getattr(params, name).shape:
                raise ShapeMismatchError(
                    f"Gradient {name} có kích thước {grad.shape}, tham số có {getattr(params, name).shape}"
                )


def parameters_to_bytes(params: NetworkParameters) -> bytes:
    N, K, M = params.dims
    chunks = [WEIGHTS_MAGIC, struct.pack("<III", N, K, M)]
    for name in PARAMETER_NAMES:
        chunks.append(np.ascontiguousarray(getattr(params, name), dtype="<f8").tobytes())
    return b"".join(chunks)


def parameters_from_bytes(data: bytes, cls: Type[P] = NetworkParameters) -> P:
    header = len(WEIGHTS_MAGIC) + 12
    if len(data) < header or data[:len(WEIGHTS_MAGIC)] != WEIGHTS_MAGIC:
        raise ValueError("File trọng số không đúng magic")
    N, K, M = struct.unpack("<III", data[len(WEIGHTS_MAGIC):header])
    shapes = {"W1": (K, N), "W2": (M, K), "b": (K,), "c": (M,)}
    expected = header + 8 * sum(int(np.prod(s)) for s in shapes.values())
    if len(data) != expected:
        raise ValueError(f"File trọng số dài {len(data)} byte, cần {expected} byte")
    offset = header
    values = {}
    for name in PARAMETER_NAMES:
        count = int(np.prod(shapes[name]))
        values[name] = np.frombuffer(data, dtype="<f8", count=count, offset=offset).reshape(shapes[name]).astype(np.float64)
        offset += 8 * count
    return cls(**values)


def save_parameters(params: NetworkParameters, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(parameters_to_bytes(params))
    return path


def load_parameters(path, cls: Type[P] = NetworkParameters) -> P:
    return parameters_from_bytes(Path(path).read_bytes(), cls)
