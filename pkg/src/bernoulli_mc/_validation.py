"""Input validation helpers shared by the public functions and estimators."""

import math
import numbers

import numpy as np

MAX_SEED = 2**64 - 1


def check_finite_real(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {type(value).__name__}")
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    return value


def check_probability(value, name="p", open_interval=False):
    value = check_finite_real(value, name)
    if open_interval:
        if not 0.0 < value < 1.0:
            raise ValueError(f"{name} must lie in (0,1), got {value}")
    elif not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0,1], got {value}")
    return value


def check_positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return value


def check_nonnegative_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return value


def check_seed(seed):
    seed = check_nonnegative_int(seed, "seed")
    if seed > MAX_SEED:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    return seed


def check_counts(successes, n):
    """Validate a (successes, trials) pair and return them as ints."""
    n = check_positive_int(n, "n")
    successes = check_nonnegative_int(successes, "successes")
    if successes > n:
        raise ValueError(f"successes ({successes}) cannot exceed n ({n})")
    return successes, n


def check_range(bounds, name):
    lo, hi = bounds
    lo = check_finite_real(lo, f"{name} lower bound")
    hi = check_finite_real(hi, f"{name} upper bound")
    if lo > hi:
        raise ValueError(f"{name} must satisfy lo <= hi, got [{lo}, {hi}]")
    return lo, hi


def check_p_grid(p_grid):
    grid = np.asarray(p_grid, dtype=float).ravel()
    if grid.size == 0:
        raise ValueError("p_grid must not be empty")
    if not np.all((grid > 0.0) & (grid < 1.0)):
        raise ValueError("p_grid values must lie in (0,1)")
    return grid


def check_binary_array(X):
    """Return a flat uint8 array of 0/1 draws, rejecting anything else."""
    arr = np.asarray(X)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d array of draws, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("expected at least one draw")
    if arr.dtype == bool:
        return arr.astype(np.uint8)
    if not np.issubdtype(arr.dtype, np.number):
        raise ValueError(f"draws must be numeric, got dtype {arr.dtype}")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("draws must be exactly 0 or 1")
    return arr.astype(np.uint8)
