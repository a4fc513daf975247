import numpy as np


def sigmoid(z):
    """Hàm logistic 1/(1+e^-z), ổn định số học cho cả hai phía."""
    z = np.asarray(z, dtype=np.float64)
    e = np.exp(-np.abs(z))
    return np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def sigmoid_prime(z):
    """Đạo hàm σ(z)(1-σ(z)), cực đại 0.25 tại z=0."""
    s = sigmoid(z)
    return s * (1.0 - s)


def softplus(z):
    # log(1 + e^z)
    return np.logaddexp(0.0, np.asarray(z, dtype=np.float64))


def log_sigmoid(z):
    return -softplus(-np.asarray(z, dtype=np.float64))
