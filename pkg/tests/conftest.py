import os
import struct
from pathlib import Path

import numpy as np
import pytest

from quantum_mlp.src.ebm import EbmModel
from quantum_mlp.src.etl.extract import has_mnist_files
from quantum_mlp.src.etl.transform import synthetic_task
from quantum_mlp.src.mlp import MlpModel

MNIST_DIR = os.getenv("QMLP_DATA_DIR", "data")
CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

requires_mnist = pytest.mark.skipif(not has_mnist_files(MNIST_DIR),
                                    reason=f"không có file MNIST trong {MNIST_DIR}")


def idx_bytes(magic: int, dims, payload: bytes) -> bytes:
    """Ghép header IDX big-endian với payload."""
    return struct.pack(">I", magic) + struct.pack(f">{len(dims)}I", *dims) + payload


def random_parameters(cls, n_inputs, n_hidden, n_outputs, seed, scale=0.5):
    rng = np.random.default_rng(seed)
    return cls(
        W1=scale * rng.standard_normal((n_hidden, n_inputs)),
        W2=scale * rng.standard_normal((n_outputs, n_hidden)),
        b=scale * rng.standard_normal(n_hidden),
        c=scale * rng.standard_normal(n_outputs),
    )


@pytest.fixture
def small_ebm():
    return random_parameters(EbmModel, 3, 2, 1, seed=7)


@pytest.fixture
def small_mlp():
    return random_parameters(MlpModel, 3, 2, 1, seed=7)


@pytest.fixture
def tiny_task():
    data = synthetic_task(4, 60, seed=3)
    idx = np.arange(len(data))
    return data.subset(idx[:40]), data.subset(idx[40:])
