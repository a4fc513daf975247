"""Ước lượng nghịch đảo nhiệt độ hiệu dụng của một sampler.

Dùng cực đại giả hợp lý (pseudo-likelihood): với chi phí lật cục bộ ν = 2 s_i f_i,
P(s_i | phần còn lại) = σ(β ν), nên β* là nghiệm của Σ ν σ(-β ν) = 0.
"""
import logging
from typing import Union

import numpy as np
from scipy import optimize
from scipy.special import expit

from .ising import IsingModel
from .samplers import SampleSet

logger = logging.getLogger(__name__)

MAX_BETA = 1e6


def flip_costs(ising: IsingModel, spins: np.ndarray) -> np.ndarray:
    """Năng lượng tăng thêm khi lật từng spin, dạng S×n."""
    spins = np.atleast_2d(np.asarray(spins, dtype=np.float64))
    return 2.0 * spins * ising.local_fields(spins)


def estimate_effective_beta(ising: IsingModel, samples: Union[SampleSet, np.ndarray]) -> float:
    """β ước lượng sao cho các mẫu Boltzmann theo exp(-β E_ising).

    Args:
        ising: mô hình Ising đã lập trình cho sampler.
        samples: SampleSet (biến 0/1) hoặc mảng spin ±1 dạng S×n.

    Returns:
        β ước lượng; +inf nếu không mẫu nào có kích thích cục bộ, 0 nếu mẫu không
        nghiêng về năng lượng thấp.
    """
    if isinstance(samples, SampleSet):
        spins = 2.0 * samples.assignments.astype(np.float64) - 1.0
        weights = samples.counts.astype(np.float64)
    else:
        spins = np.atleast_2d(np.asarray(samples, dtype=np.float64))
        weights = np.ones(spins.shape[0])
    costs = flip_costs(ising, spins)
    weights = np.broadcast_to(weights[:, None], costs.shape)
    costs, weights = costs.ravel(), weights.ravel()

    if np.all(costs >= 0.0):
        return float("inf")

    def score(beta: float) -> float:
        return float(np.sum(weights * costs * expit(-beta * costs)))

    if score(0.0) <= 0.0:
        logger.warning("⚠️ Mẫu không nghiêng về năng lượng thấp, β ước lượng = 0")
        return 0.0
    upper = 1.0
    while score(upper) > 0.0:
        upper *= 2.0
        if upper > MAX_BETA:
            return float("inf")
    result = optimize.root_scalar(score, bracket=[0.0, upper], method="brentq")
    if not result.converged:
        logger.warning(f"⚠️ Không hội tụ khi ước lượng β: {result.flag}")
    return float(result.root)
