"""Negative-phase estimators: contrastive divergence (marginal and fully
discretized), simulated annealing with a linear inverse-temperature ramp,
parallel tempering, and the exact enumerator wrapped in the same interface.

All estimators are deterministic functions of (params, config, seed).
"""

from dataclasses import dataclass

import numpy as np

from dbnbench import _kernels
from dbnbench.rbm import ModelExpectations, RbmParams, exact_expectations

CD_MODES = ("marginal", "discrete")
UPDATE_ORDERS = ("fixed-block", "random-permutation")


@dataclass(frozen=True)
class CdConfig:
    """CD-k chains started from the data batch, one chain per item."""

    k: int = 1
    mode: str = "marginal"
    chain_count: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.mode not in CD_MODES:
            raise ValueError(f"mode must be one of {CD_MODES}")
        if self.chain_count is not None and self.chain_count < 1:
            raise ValueError("chain_count must be positive")


@dataclass(frozen=True)
class SaConfig:
    """Independent anneals from beta_initial to beta_final.

    beta_initial = 0 means the first sweep accepts every proposal. The
    2-sweep default is the quench schedule: one pass at each endpoint.
    """

    sweeps: int = 2
    samples: int = 400
    beta_initial: float = 0.0
    beta_final: float = 1.0
    update_order: str = "random-permutation"

    def __post_init__(self):
        if self.sweeps < 2:
            raise ValueError("sweeps must be >= 2 (distinct first/last passes)")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if not 0.0 <= self.beta_initial <= self.beta_final:
            raise ValueError("need 0 <= beta_initial <= beta_final")
        if self.update_order not in UPDATE_ORDERS:
            raise ValueError(f"update_order must be one of {UPDATE_ORDERS}")


def default_pt_ladder(n_rungs=8, t_hot=8.0):
    """Inverse temperatures geometric in T from t_hot down to the target T=1."""
    temps = t_hot ** (1.0 - np.arange(n_rungs) / (n_rungs - 1))
    betas = 1.0 / temps
    betas[-1] = 1.0
    return tuple(betas)


@dataclass(frozen=True)
class PtConfig:
    """Replica-exchange sampler; ``samples`` independent runs are averaged."""

    betas: tuple = default_pt_ladder()
    sweeps_per_exchange: int = 2
    rounds: int = 200
    samples: int = 8
    update_order: str = "random-permutation"

    def __post_init__(self):
        betas = tuple(float(x) for x in self.betas)
        object.__setattr__(self, "betas", betas)
        if len(betas) < 1 or any(bb <= ba for ba, bb in zip(betas, betas[1:])):
            raise ValueError("betas must be a strictly increasing ladder")
        if betas[-1] != 1.0:
            raise ValueError("ladder must end at the target inverse temperature 1.0")
        if self.sweeps_per_exchange < 1 or self.rounds < 1 or self.samples < 1:
            raise ValueError("sweeps_per_exchange, rounds and samples must be positive")
        if self.update_order not in UPDATE_ORDERS:
            raise ValueError(f"update_order must be one of {UPDATE_ORDERS}")


def _wt(params):
    return np.ascontiguousarray(params.W.T)


def _expectations_from_states(v, h):
    count = v.shape[0]
    return ModelExpectations(vh=v.T @ h / count, v=v.mean(axis=0), h=h.mean(axis=0))


def _check_batch(params, batch):
    batch = np.atleast_2d(np.asarray(batch, dtype=np.float64))
    if batch.shape[0] == 0:
        raise ValueError("batch must be nonempty")
    if batch.shape[1] != params.n:
        raise ValueError(f"batch items must have length {params.n}")
    if batch.min() < 0.0 or batch.max() > 1.0:
        raise ValueError("batch entries must lie in [0, 1]")
    return batch


def cd_estimate(params, batch, cfg, seed):
    """CD-k negative phase from the data batch.

    Marginal mode starts each chain at its (real-valued) data vector and
    collects final statistics as v_final x P(h=1 | v_final). Discrete mode
    draws the initial state from P(v_i = 1) = data_i and keeps sampled
    binary values end to end.
    """
    batch = _check_batch(params, batch)
    n_chains = cfg.chain_count if cfg.chain_count is not None else batch.shape[0]
    starts = batch[np.arange(n_chains) % batch.shape[0]]
    discrete = cfg.mode == "discrete"
    v, h = _kernels.cd_kernel(
        params.W, _wt(params), params.b, params.c,
        np.ascontiguousarray(starts), cfg.k, discrete, discrete,
        np.uint64(seed),
    )
    return _expectations_from_states(v, h)


def sa_estimate(params, cfg, seed):
    """Model expectations from the final states of independent anneals."""
    betas = np.linspace(cfg.beta_initial, cfg.beta_final, cfg.sweeps)
    v, h = _kernels.sa_kernel(
        params.W, _wt(params), params.b, params.c, betas,
        cfg.samples, cfg.update_order == "random-permutation", np.uint64(seed),
    )
    return _expectations_from_states(v, h)


def pt_estimate(params, cfg, seed):
    """Model expectations from the target-rung states of replica-exchange runs."""
    v_sum, h_sum, vh_sum, n_rec = _kernels.pt_kernel(
        params.W, _wt(params), params.b, params.c,
        np.asarray(cfg.betas, dtype=np.float64),
        cfg.sweeps_per_exchange, cfg.rounds, cfg.samples,
        cfg.update_order == "random-permutation", np.uint64(seed),
    )
    total = cfg.samples * n_rec
    return ModelExpectations(
        vh=vh_sum.sum(axis=0) / total,
        v=v_sum.sum(axis=0) / total,
        h=h_sum.sum(axis=0) / total,
    )


def exact_estimate(params):
    """The enumeration oracle behind the common sampler interface."""
    return exact_expectations(params)


def metropolis_states(params, beta, sweeps, seed, update_order="random-permutation"):
    """Single fixed-temperature chain; returns the (sweeps, n+m) visited states.

    Column layout: visible units first, then hidden. Diagnostic surface for
    equilibrium checks.
    """
    if update_order not in UPDATE_ORDERS:
        raise ValueError(f"update_order must be one of {UPDATE_ORDERS}")
    return _kernels.chain_kernel(
        params.W, _wt(params), params.b, params.c, float(beta), int(sweeps),
        update_order == "random-permutation", np.uint64(seed),
    )


def make_negative_phase(sampler, cfg=None):
    """Adapter giving every estimator the (params, batch, seed) signature.

    ``sampler`` is one of: cd-marginal, cd-discrete, sa, pt, exact. The
    data-independent estimators ignore the batch; exact also ignores the seed.
    """
    if sampler in ("cd-marginal", "cd-discrete"):
        mode = sampler.split("-", 1)[1]
        cfg = cfg if cfg is not None else CdConfig(mode=mode)
        if cfg.mode != mode:
            raise ValueError(f"config mode {cfg.mode!r} does not match {sampler!r}")
        return lambda params, batch, seed: cd_estimate(params, batch, cfg, seed)
    if sampler == "sa":
        cfg = cfg if cfg is not None else SaConfig()
        return lambda params, batch, seed: sa_estimate(params, cfg, seed)
    if sampler == "pt":
        cfg = cfg if cfg is not None else PtConfig()
        return lambda params, batch, seed: pt_estimate(params, cfg, seed)
    if sampler == "exact":
        return lambda params, batch, seed: exact_estimate(params)
    raise ValueError(f"unknown sampler {sampler!r}")
