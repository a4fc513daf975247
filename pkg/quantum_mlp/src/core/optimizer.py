"""ADAM dùng chung cho mọi nhánh huấn luyện (luôn ở dạng cực tiểu hoá)."""
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .exceptions import ShapeMismatchError
from .params import GradientSet, NetworkParameters


@dataclass(frozen=True)
class AdamConfig:
    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError("learning_rate không được âm")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError("beta1, beta2 phải nằm trong [0, 1)")
        if self.epsilon <= 0:
            raise ValueError("epsilon phải dương")


@dataclass(eq=False)
class AdamState:
    config: AdamConfig = field(default_factory=AdamConfig)
    m: Dict[str, np.ndarray] = field(default_factory=dict)   # mô-men bậc một
    v: Dict[str, np.ndarray] = field(default_factory=dict)   # mô-men bậc hai
    t: int = 0


def adam_update(state: AdamState, params: Dict[str, np.ndarray],
                grads: Dict[str, np.ndarray]) -> Dict[str, np.ndarray]:
    """Một bước ADAM có hiệu chỉnh bias; cập nhật `params` tại chỗ và trả lại chính nó."""
    if set(params) != set(grads):
        raise ShapeMismatchError(f"Tên gradient {sorted(grads)} không khớp tham số {sorted(params)}")
    for name, value in params.items():
        if np.shape(grads[name]) != value.shape:
            raise ShapeMismatchError(
                f"Gradient {name} có kích thước {np.shape(grads[name])}, tham số có {value.shape}"
            )

    cfg = state.config
    state.t += 1
    bc1 = 1.0 - cfg.beta1 ** state.t
    bc2 = 1.0 - cfg.beta2 ** state.t

    for name, value in params.items():
        g = np.asarray(grads[name], dtype=np.float64)
        if name not in state.m:
            state.m[name] = np.zeros_like(value)
            state.v[name] = np.zeros_like(value)
        state.m[name] *= cfg.beta1
        state.m[name] += (1.0 - cfg.beta1) * g
        state.v[name] *= cfg.beta2
        state.v[name] += (1.0 - cfg.beta2) * (g * g)

        m_hat = state.m[name] / bc1
        v_hat = state.v[name] / bc2
        value -= cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)
    return params


class AdamOptimizer:
    """Bộ tối ưu gắn với đúng một lượt huấn luyện."""

    def __init__(self, config: AdamConfig = None):
        self.state = AdamState(config=config or AdamConfig())

    @property
    def steps(self) -> int:
        return self.state.t

    def minimize_step(self, params: NetworkParameters, grads: GradientSet) -> NetworkParameters:
        """Đi theo hướng giảm của `grads` (gradient của hàm mất mát)."""
        grads.check_shapes(params)
        adam_update(self.state, params.as_dict(), grads.as_dict())
        params.validate()
        return params

    def maximize_step(self, params: NetworkParameters, ascent: GradientSet) -> NetworkParameters:
        # Log-likelihood: đưa hướng tăng đã đổi dấu vào bộ cực tiểu hoá
        return self.minimize_step(params, -ascent)
