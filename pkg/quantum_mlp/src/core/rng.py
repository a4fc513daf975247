"""Dịch vụ sinh số ngẫu nhiên có seed cho toàn bộ thư viện."""
from typing import Optional

import numpy as np

SEED_MASK = (1 << 31) - 1


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(seed)


def draw_seed(rng: np.random.Generator) -> int:
    """Rút một seed con từ bộ sinh hiện tại."""
    return int(rng.integers(0, SEED_MASK))


def derive_seed(base_seed: int, index: int) -> int:
    # seed cho từng điểm dữ liệu: base ⊕ index
    return (int(base_seed) ^ int(index)) & SEED_MASK


def trial_seed(base_seed: int, trial_index: int) -> int:
    return int(base_seed) + int(trial_index)
