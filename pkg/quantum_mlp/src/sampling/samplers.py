"""Các sampler cho phân phối điều kiện P(k, y | x) ∝ exp(-E(x, k, y)).

Mọi sampler trả về SampleSet gồm các phép gán (k, y) duy nhất kèm số lần xuất hiện.
Ba cài đặt:
    ExactSampler      liệt kê 2^(K+M) trạng thái (oracle)
    GibbsSampler      Gibbs theo khối k | x,y rồi y | x,k
    SimAnnealSampler  Metropolis lật từng spin trên mô hình Ising đã kẹp, đóng vai QPU
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from numba import njit

from ..core.activations import sigmoid
from ..core.enumeration import enumerate_states, state_index
from ..core.exceptions import EnumerationLimitError, QuantumMlpError, SamplerError, ShapeMismatchError
from ..core.params import NetworkParameters
from ..core.rng import draw_seed, make_rng
from ..ebm.model import DEFAULT_ENUMERATION_LIMIT, exact_conditional, hidden_fields
from .bqm import build_conditional_bqm
from .config import SamplerConfig
from .ising import bqm_to_ising, clamp_to_hardware

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class SampleSet:
    assignments: np.ndarray          # U×(K+M), mỗi hàng duy nhất
    counts: np.ndarray               # U
    n_hidden: int
    metadata: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_samples(cls, samples: np.ndarray, n_hidden: int,
                     metadata: Optional[Dict[str, Any]] = None) -> "SampleSet":
        samples = np.asarray(samples, dtype=np.int8)
        if samples.ndim != 2 or samples.shape[0] == 0:
            raise SamplerError("Sampler không trả về mẫu nào")
        if not np.all((samples == 0) | (samples == 1)):
            raise SamplerError("Mẫu chứa giá trị khác 0/1")
        unique, counts = np.unique(samples, axis=0, return_counts=True)
        return cls(unique, counts.astype(np.int64), n_hidden, dict(metadata or {}))

    @property
    def total_reads(self) -> int:
        return int(self.counts.sum())

    @property
    def n_variables(self) -> int:
        return self.assignments.shape[1]

    @property
    def k(self) -> np.ndarray:
        return self.assignments[:, :self.n_hidden]

    @property
    def y(self) -> np.ndarray:
        return self.assignments[:, self.n_hidden:]

    @property
    def weights(self) -> np.ndarray:
        return self.counts / self.counts.sum()

    def expand(self) -> np.ndarray:
        return np.repeat(self.assignments, self.counts, axis=0)

    def empirical_distribution(self) -> np.ndarray:
        """Tần suất trên 2^(K+M) trạng thái theo thứ tự enumerate_states."""
        dist = np.zeros(1 << self.n_variables)
        np.add.at(dist, state_index(self.assignments), self.counts)
        return dist / dist.sum()

    def total_variation(self, probabilities: np.ndarray) -> float:
        return float(0.5 * np.abs(self.empirical_distribution() - np.asarray(probabilities)).sum())


class Sampler(ABC):
    """Hợp đồng chung: sample(model, x, config) -> SampleSet, tất định khi cố định seed."""

    name = "sampler"

    def sample(self, model: NetworkParameters, x: np.ndarray,
               config: Optional[SamplerConfig] = None) -> SampleSet:
        config = config or SamplerConfig()
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (model.n_inputs,):
            raise ShapeMismatchError(f"x có kích thước {x.shape}, mô hình cần ({model.n_inputs},)")
        seed = config.seed if config.seed is not None else draw_seed(make_rng())
        try:
            samples, extra = self._draw(model, x, config, seed)
        except QuantumMlpError:
            raise
        except Exception as e:
            raise SamplerError(f"{self.name} thất bại: {e}") from e
        metadata = {"sampler": self.name, "seed": seed, "beta_eff": config.beta_eff}
        metadata.update(extra)
        sample_set = SampleSet.from_samples(samples, model.n_hidden, metadata)
        if sample_set.total_reads != config.reads:
            raise SamplerError(f"{self.name} trả về {sample_set.total_reads} mẫu, cần {config.reads}")
        return sample_set

    @abstractmethod
    def _draw(self, model: NetworkParameters, x: np.ndarray, config: SamplerConfig, seed: int):
        """Trả về (mẫu reads×(K+M) kiểu 0/1, metadata bổ sung)."""


class ExactSampler(Sampler):
    name = "exact"

    def __init__(self, limit: int = DEFAULT_ENUMERATION_LIMIT):
        self.limit = limit

    def distribution(self, model: NetworkParameters, x: np.ndarray):
        return exact_conditional(model, x, self.limit)

    def _draw(self, model, x, config, seed):
        dist = self.distribution(model, x)
        counts = make_rng(seed).multinomial(config.reads, dist.probabilities)
        return np.repeat(dist.states, counts, axis=0), {}


class GibbsSampler(Sampler):
    """Gibbs theo khối, `chains` chuỗi song song khởi tạo ngẫu nhiên đều.

    Mỗi chuỗi chạy burn_in lượt rồi lấy một mẫu sau mỗi `thin` lượt.
    """

    name = "gibbs"

    def _draw(self, model, x, config, seed):
        rng = make_rng(seed)
        K, M = model.n_hidden, model.n_outputs
        chains = config.num_chains
        per_chain = -(-config.reads // chains)
        fields_k = hidden_fields(model, x)
        y = rng.integers(0, 2, size=(chains, M)).astype(np.float64)
        collected = []
        for sweep in range(config.burn_in + config.thin * per_chain):
            k = (rng.random((chains, K)) < sigmoid(fields_k + y @ model.W2)).astype(np.float64)
            y = (rng.random((chains, M)) < sigmoid(k @ model.W2.T + model.c)).astype(np.float64)
            if sweep >= config.burn_in and (sweep - config.burn_in + 1) % config.thin == 0:
                collected.append(np.concatenate([k, y], axis=1))
        samples = np.concatenate(collected, axis=0)[:config.reads]
        return samples, {"chains": chains, "burn_in": config.burn_in, "thin": config.thin}


def gibbs_transition_matrix(model: NetworkParameters, x: np.ndarray,
                            limit: int = 12) -> np.ndarray:
    """Ma trận chuyển một lượt Gibbs trên 2^(K+M) trạng thái (k, y).

    T[(k, y) -> (k', y')] = P(k' | x, y) · P(y' | x, k'). Chỉ dùng cho mô hình nhỏ.
    """
    K, M = model.n_hidden, model.n_outputs
    if K + M > limit:
        raise EnumerationLimitError(f"K+M = {K + M} vượt giới hạn {limit}")
    states = enumerate_states(K + M).astype(np.float64)
    k_states, y_states = states[:, :K], states[:, K:]
    p_k = sigmoid(hidden_fields(model, x) + y_states @ model.W2)          # S×K theo y nguồn
    p_y = sigmoid(k_states @ model.W2.T + model.c)                       # S×M theo k đích
    prob_k = np.prod(np.where(k_states[None, :, :] == 1.0, p_k[:, None, :], 1.0 - p_k[:, None, :]), axis=2)
    prob_y = np.prod(np.where(y_states == 1.0, p_y, 1.0 - p_y), axis=1)
    return prob_k * prob_y[None, :]


@njit
def _metropolis_anneal(h, J, betas, reads, seed):
    # J đối xứng, đường chéo 0; ΔE khi lật spin i là 2 s_i f_i
    np.random.seed(seed)
    n = h.shape[0]
    out = np.empty((reads, n), dtype=np.int8)
    s = np.empty(n)
    f = np.empty(n)
    for r in range(reads):
        for i in range(n):
            s[i] = 1.0 if np.random.random() < 0.5 else -1.0
        for i in range(n):
            acc = h[i]
            for j in range(n):
                acc += J[i, j] * s[j]
            f[i] = acc
        for t in range(betas.shape[0]):
            beta = betas[t]
            for i in range(n):
                delta = 2.0 * s[i] * f[i]
                if delta <= 0.0 or np.random.random() < np.exp(-beta * delta):
                    s[i] = -s[i]
                    step = 2.0 * s[i]
                    for j in range(n):
                        f[j] += step * J[j, i]
        for i in range(n):
            out[r, i] = 1 if s[i] > 0 else 0
    return out


class SimAnnealSampler(Sampler):
    """Giả lập QPU: EBM -> BQM (chia β_eff) -> Ising -> kẹp phần cứng -> ủ Metropolis.

    β tăng theo cấp số nhân từ beta_start tới beta_sim (mặc định bằng β_eff) trong
    num_sweeps lượt cho mỗi lần đọc, nên phân phối cuối là exp(-β_sim·E_BQM).
    """

    name = "sim-anneal"

    def schedule(self, config: SamplerConfig) -> np.ndarray:
        return np.geomspace(config.beta_start, config.final_beta, config.num_sweeps)

    def _draw(self, model, x, config, seed):
        ising = bqm_to_ising(build_conditional_bqm(model, x, config.beta_eff))
        clamped = 0
        if config.clamp_to_hardware:
            ising, report = clamp_to_hardware(ising)
            clamped = len(report)
        samples = _metropolis_anneal(ising.h, ising.symmetric_couplings(), self.schedule(config),
                                     config.reads, seed)
        return samples, {"beta_sim": config.final_beta, "num_sweeps": config.num_sweeps,
                         "clamped": clamped}


SAMPLERS = {
    ExactSampler.name: ExactSampler,
    GibbsSampler.name: GibbsSampler,
    SimAnnealSampler.name: SimAnnealSampler,
}


def get_sampler(name: str) -> Sampler:
    if name not in SAMPLERS:
        raise ValueError(f"Sampler không hợp lệ: {name!r}, chọn một trong {sorted(SAMPLERS)}")
    return SAMPLERS[name]()
