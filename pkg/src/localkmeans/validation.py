"""Input validation helpers shared across the package."""

import numpy as np

_SEED_MODULUS = 2**63


def as_matrix(x, name="X"):
    """Coerce to a finite 2-D float64 array, raising ValueError otherwise."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_vector(x, name="v"):
    """Coerce to a finite 1-D float64 array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_positive_int(value, name):
    if int(value) != value or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_nonnegative(value, name):
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {value!r}")
    return float(value)


def normalize_seed(seed):
    """Map an arbitrary integer seed into the non-negative range numpy accepts."""
    return int(seed) % _SEED_MODULUS


def machine_rng(seed, machine_index):
    """Independent per-machine random stream keyed by (seed, machine index)."""
    return np.random.default_rng([normalize_seed(seed), int(machine_index)])
