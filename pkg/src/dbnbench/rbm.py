"""Restricted Boltzmann machine core: parameters, energy, conditionals,
and exact small-instance quantities used as ground truth.

Binary states and real-valued vectors are plain numpy arrays. Exact
operations enumerate the smaller layer and integrate the other one out
analytically, so their cost is 2**min(n, m); they refuse to run past
``EXACT_ENUM_LIMIT`` units.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import expit, logsumexp

EXACT_ENUM_LIMIT = 20

# states are enumerated in blocks to keep the 2**min(n,m) tables off the heap
_ENUM_BLOCK = 1 << 14


class SizeGuardError(ValueError):
    """Raised when an exact operation is asked to enumerate too many states."""


def _as_1d(x, size, name):
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != size:
        raise ValueError(f"{name} must be a length-{size} vector, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class RbmParams:
    """Coupling matrix W (n x m) plus visible bias b and hidden bias c."""

    W: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        W = np.array(self.W, dtype=np.float64)
        if W.ndim != 2 or W.shape[0] < 1 or W.shape[1] < 1:
            raise ValueError(f"W must be a 2-d matrix, got shape {W.shape}")
        b = _as_1d(self.b, W.shape[0], "b")
        c = _as_1d(self.c, W.shape[1], "c")
        if not (np.isfinite(W).all() and np.isfinite(b).all() and np.isfinite(c).all()):
            raise ValueError("RBM parameters must be finite")
        for name, arr in (("W", W), ("b", b.copy()), ("c", c.copy())):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self):
        return self.W.shape[0]

    @property
    def m(self):
        return self.W.shape[1]

    @classmethod
    def zeros(cls, n, m):
        return cls(np.zeros((n, m)), np.zeros(n), np.zeros(m))


@dataclass(frozen=True)
class ModelExpectations:
    """Sufficient statistics <v_i h_j>, <v_i>, <h_j> (either phase)."""

    vh: np.ndarray
    v: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        vh = np.asarray(self.vh, dtype=np.float64)
        v = _as_1d(self.v, vh.shape[0], "v")
        h = _as_1d(self.h, vh.shape[1], "h")
        for name, arr in (("vh", vh), ("v", v), ("h", h)):
            if not np.isfinite(arr).all():
                raise ValueError(f"{name} has non-finite entries")
            # sampled means of [0,1] quantities; allow float-roundoff slack
            if arr.min() < -1e-12 or arr.max() > 1 + 1e-12:
                raise ValueError(f"{name} entries must lie in [0, 1]")
            object.__setattr__(self, name, arr)


def _check_len(x, size, name):
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (size,):
        raise ValueError(f"{name} must have length {size}, got shape {arr.shape}")
    return arr


def energy(v, h, params):
    """E(v, h) = -b.v - c.h - v.W.h for one joint configuration."""
    v = _check_len(v, params.n, "v")
    h = _check_len(h, params.m, "h")
    return float(-(params.b @ v) - (params.c @ h) - v @ params.W @ h)


def hidden_conditional(params, v):
    """P(h_j = 1 | v) for each hidden unit; v may be real-valued in [0,1]."""
    v = _check_len(v, params.n, "v")
    return expit(params.c + v @ params.W)


def visible_conditional(params, h):
    """P(v_i = 1 | h) for each visible unit; h may be real-valued in [0,1]."""
    h = _check_len(h, params.m, "h")
    return expit(params.b + params.W @ h)


def _guard(params):
    if min(params.n, params.m) > EXACT_ENUM_LIMIT:
        raise SizeGuardError(
            f"exact enumeration needs min(n, m) <= {EXACT_ENUM_LIMIT}, "
            f"got {params.n}x{params.m}"
        )


def _enum_blocks(k):
    """Yield all binary vectors of length k, in blocks, low bits first."""
    total = 1 << k
    bit = 1 << np.arange(k, dtype=np.int64)
    for start in range(0, total, _ENUM_BLOCK):
        idx = np.arange(start, min(start + _ENUM_BLOCK, total), dtype=np.int64)
        yield ((idx[:, None] & bit) > 0).astype(np.float64)


def _small_side(params):
    """View the RBM with the smaller layer as the one to enumerate.

    Returns (W, bias_enum, bias_other) such that enumerating states ``s`` of
    the small layer gives log-weight  bias_enum.s + sum softplus(bias_other + W.s).
    """
    if params.m <= params.n:
        return params.W, params.c, params.b, False
    return np.ascontiguousarray(params.W.T), params.b, params.c, True


def log_partition_exact(params):
    """log Z by enumerating the smaller layer and summing the other analytically."""
    _guard(params)
    W, bias_e, bias_o, _ = _small_side(params)
    k = len(bias_e)
    chunks = []
    for states in _enum_blocks(k):
        logw = states @ bias_e + np.logaddexp(0.0, bias_o + states @ W.T).sum(axis=1)
        chunks.append(logsumexp(logw))
    return float(logsumexp(chunks))


def exact_expectations(params):
    """Exact Gibbs moments <v_i h_j>, <v_i>, <h_j>."""
    _guard(params)
    W, bias_e, bias_o, swapped = _small_side(params)
    k = len(bias_e)
    # two passes: first the normalizer, then probability-weighted sums
    log_z = log_partition_exact(params)
    e_mean = np.zeros(k)
    o_mean = np.zeros(len(bias_o))
    cross = np.zeros((len(bias_o), k))  # <other_i * enum_j>
    for states in _enum_blocks(k):
        logw = states @ bias_e + np.logaddexp(0.0, bias_o + states @ W.T).sum(axis=1)
        p = np.exp(logw - log_z)
        cond_o = expit(bias_o + states @ W.T)  # P(other_i = 1 | enum state)
        e_mean += p @ states
        o_mean += p @ cond_o
        cross += (cond_o * p[:, None]).T @ states
    if swapped:
        return ModelExpectations(vh=cross.T.copy(), v=e_mean, h=o_mean)
    return ModelExpectations(vh=cross, v=o_mean, h=e_mean)


def free_term(params, v):
    """log sum_h exp(-E(v, h)) for one (possibly real-valued) visible vector."""
    v = _check_len(v, params.n, "v")
    return float(params.b @ v + np.logaddexp(0.0, params.c + v @ params.W).sum())


def log_likelihood(params, data):
    """Mean log p(v) over the data; exact, so small instances only."""
    _guard(params)
    data = np.atleast_2d(np.asarray(data, dtype=np.float64))
    if data.shape[1] != params.n:
        raise ValueError(f"data items must have length {params.n}")
    log_z = log_partition_exact(params)
    free = data @ params.b + np.logaddexp(0.0, params.c + data @ params.W).sum(axis=1)
    return float(free.mean() - log_z)
