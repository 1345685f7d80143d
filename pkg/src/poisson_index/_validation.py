import numpy as np
from sklearn.utils.validation import check_array

from .model import NonInformative, parse_prior


def check_prior(prior):
    if prior is None:
        return NonInformative()
    if isinstance(prior, str):
        return parse_prior(prior)
    return prior


def check_arms(X):
    """Validate a ``(2, 2)`` array of ``[events, exposure]`` rows."""
    X = check_array(X, dtype=np.float64)
    if X.shape != (2, 2):
        raise ValueError(f"expected a (2, 2) array of [events, exposure] rows, got shape {X.shape}")
    _check_counts(X[:, 0], X[:, 1])
    return X


def check_pairs(X):
    """Validate an ``(m, 4)`` array of ``[k1, n1, k2, n2]`` rows."""
    X = check_array(X, dtype=np.float64)
    if X.shape[1] != 4:
        raise ValueError(f"expected rows of [k1, n1, k2, n2], got {X.shape[1]} columns")
    _check_counts(X[:, [0, 2]].ravel(), X[:, [1, 3]].ravel())
    return X


def _check_counts(k, n):
    if np.any(k < 0) or np.any(k != np.floor(k)):
        raise ValueError("event counts must be non-negative integers")
    if np.any(n <= 0):
        raise ValueError("exposures must be positive")
