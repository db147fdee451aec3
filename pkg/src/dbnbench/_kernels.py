"""Numba kernels for the Markov chain samplers.

Every chain owns a splitmix64 stream seeded from (run seed, chain index),
so results are bit-reproducible and independent of thread scheduling; the
calling code reduces per-chain outputs in fixed index order. Acceptance
draws are only consumed when a proposal can actually be rejected, and
local fields are maintained incrementally (refreshed on every accepted
flip). W and its transpose are both passed so that either layer's field
update walks contiguous memory.
"""

import numpy as np
from numba import njit, prange, uint64

_GOLD = np.uint64(0x9E3779B97F4A7C15)


@njit(uint64(uint64), inline="always", cache=True)
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(uint64(uint64, uint64), inline="always", cache=True)
def _stream_init(seed, chain):
    return _mix64(seed ^ (chain * _GOLD + np.uint64(0x632BE59BD9B4E019)))


@njit(inline="always", cache=True)
def _next_u64(state):
    state[0] = state[0] + _GOLD
    return _mix64(state[0])


@njit(inline="always", cache=True)
def _next_unit(state):
    # double in [0, 1) from the top 53 bits
    return (_next_u64(state) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(inline="always", cache=True)
def _next_below(state, bound):
    # bounded draw via the high 32 bits (Lemire); bias < 2**-32
    x = _next_u64(state) >> np.uint64(32)
    return int((x * np.uint64(bound)) >> np.uint64(32))


@njit(inline="always", cache=True)
def _next_bit(state):
    return np.float64(_next_u64(state) >> np.uint64(63))


@njit(inline="always", cache=True)
def _sigmoid(x):
    # overflow-free in both tails
    if x >= 0.0:
        return 1.0 / (1.0 + np.exp(-x))
    e = np.exp(x)
    return e / (1.0 + e)


@njit(inline="always", cache=True)
def _shuffle(order, rng):
    for k in range(order.shape[0] - 1, 0, -1):
        r = _next_below(rng, k + 1)
        tmp = order[k]
        order[k] = order[r]
        order[r] = tmp


@njit(inline="always", cache=True)
def _init_fields(W, WT, b, c, v, h, fv, fh):
    n, m = W.shape
    for i in range(n):
        acc = b[i]
        for j in range(m):
            acc += W[i, j] * h[j]
        fv[i] = acc
    for j in range(m):
        acc = c[j]
        for i in range(n):
            acc += WT[j, i] * v[i]
        fh[j] = acc


@njit(inline="always", cache=True)
def _metropolis_sweep(W, WT, v, h, fv, fh, order, beta, rng):
    """One proposal at every site, in the order given."""
    n = W.shape[0]
    for k in range(order.shape[0]):
        site = order[k]
        if site < n:
            x = v[site]
            d_e = (2.0 * x - 1.0) * fv[site]
            if d_e <= 0.0 or _next_unit(rng) < np.exp(-beta * d_e):
                nv = 1.0 - x
                v[site] = nv
                d = nv - x
                for j in range(W.shape[1]):
                    fh[j] += d * W[site, j]
        else:
            jj = site - n
            x = h[jj]
            d_e = (2.0 * x - 1.0) * fh[jj]
            if d_e <= 0.0 or _next_unit(rng) < np.exp(-beta * d_e):
                nh = 1.0 - x
                h[jj] = nh
                d = nh - x
                for i in range(n):
                    fv[i] += d * WT[jj, i]


@njit(cache=True, parallel=True, fastmath=True)
def sa_kernel(W, WT, b, c, betas, n_samples, random_order, seed):
    """Independent anneals along the given beta schedule; returns final states."""
    n, m = W.shape
    n_sites = n + m
    sweeps = betas.shape[0]
    out_v = np.empty((n_samples, n), np.float64)
    out_h = np.empty((n_samples, m), np.float64)
    for s in prange(n_samples):
        rng = np.empty(1, np.uint64)
        rng[0] = _stream_init(np.uint64(seed), np.uint64(s))
        v = np.empty(n, np.float64)
        h = np.empty(m, np.float64)
        fv = np.empty(n, np.float64)
        fh = np.empty(m, np.float64)
        for i in range(n):
            v[i] = _next_bit(rng)
        for j in range(m):
            h[j] = _next_bit(rng)
        _init_fields(W, WT, b, c, v, h, fv, fh)
        order = np.empty(n_sites, np.int64)
        for k in range(n_sites):
            order[k] = k
        for t in range(sweeps):
            if random_order:
                _shuffle(order, rng)
            _metropolis_sweep(W, WT, v, h, fv, fh, order, betas[t], rng)
        for i in range(n):
            out_v[s, i] = v[i]
        for j in range(m):
            out_h[s, j] = h[j]
    return out_v, out_h


@njit(cache=True, fastmath=True)
def chain_kernel(W, WT, b, c, beta, sweeps, random_order, seed):
    """Single fixed-temperature chain; records the state after every sweep."""
    n, m = W.shape
    n_sites = n + m
    out = np.empty((sweeps, n_sites), np.uint8)
    rng = np.empty(1, np.uint64)
    rng[0] = _stream_init(np.uint64(seed), np.uint64(0))
    v = np.empty(n, np.float64)
    h = np.empty(m, np.float64)
    fv = np.empty(n, np.float64)
    fh = np.empty(m, np.float64)
    for i in range(n):
        v[i] = _next_bit(rng)
    for j in range(m):
        h[j] = _next_bit(rng)
    _init_fields(W, WT, b, c, v, h, fv, fh)
    order = np.empty(n_sites, np.int64)
    for k in range(n_sites):
        order[k] = k
    for t in range(sweeps):
        if random_order:
            _shuffle(order, rng)
        _metropolis_sweep(W, WT, v, h, fv, fh, order, beta, rng)
        for i in range(n):
            out[t, i] = np.uint8(v[i])
        for j in range(m):
            out[t, n + j] = np.uint8(h[j])
    return out


@njit(cache=True, parallel=True, fastmath=True)
def pt_kernel(W, WT, b, c, betas, sweeps_per_exchange, rounds, n_runs,
              random_order, seed):
    """Replica-exchange runs; accumulates target-rung statistics per run.

    Swap moves exchange rung assignments instead of states. Recording starts
    after a burn-in of rounds // 2.
    """
    n, m = W.shape
    n_sites = n + m
    n_rungs = betas.shape[0]
    burn_in = rounds // 2
    v_sum = np.zeros((n_runs, n), np.float64)
    h_sum = np.zeros((n_runs, m), np.float64)
    vh_sum = np.zeros((n_runs, n, m), np.float64)
    for r in prange(n_runs):
        rng = np.empty(1, np.uint64)
        rng[0] = _stream_init(np.uint64(seed), np.uint64(r))
        vs = np.empty((n_rungs, n), np.float64)
        hs = np.empty((n_rungs, m), np.float64)
        fvs = np.empty((n_rungs, n), np.float64)
        fhs = np.empty((n_rungs, m), np.float64)
        rung_of = np.empty(n_rungs, np.int64)   # rung index held by each replica
        replica_at = np.empty(n_rungs, np.int64)
        for k in range(n_rungs):
            for i in range(n):
                vs[k, i] = _next_bit(rng)
            for j in range(m):
                hs[k, j] = _next_bit(rng)
            _init_fields(W, WT, b, c, vs[k], hs[k], fvs[k], fhs[k])
            rung_of[k] = k
            replica_at[k] = k
        order = np.empty(n_sites, np.int64)
        for q in range(n_sites):
            order[q] = q
        energies = np.empty(n_rungs, np.float64)
        for t in range(rounds):
            for k in range(n_rungs):
                beta = betas[rung_of[k]]
                for _ in range(sweeps_per_exchange):
                    if random_order:
                        _shuffle(order, rng)
                    _metropolis_sweep(W, WT, vs[k], hs[k], fvs[k], fhs[k],
                                      order, beta, rng)
            for k in range(n_rungs):
                e = 0.0
                for i in range(n):
                    e -= b[i] * vs[k, i]
                for j in range(m):
                    e -= c[j] * hs[k, j]
                for i in range(n):
                    if vs[k, i] != 0.0:
                        for j in range(m):
                            e -= W[i, j] * hs[k, j]
                energies[k] = e
            for a in range(n_rungs - 1):
                ra = replica_at[a]
                rb = replica_at[a + 1]
                # swap acceptance for adjacent inverse temperatures
                arg = (betas[a] - betas[a + 1]) * (energies[ra] - energies[rb])
                if arg >= 0.0 or _next_unit(rng) < np.exp(arg):
                    replica_at[a] = rb
                    replica_at[a + 1] = ra
                    rung_of[ra] = a + 1
                    rung_of[rb] = a
            if t >= burn_in:
                k = replica_at[n_rungs - 1]
                for i in range(n):
                    v_sum[r, i] += vs[k, i]
                for j in range(m):
                    h_sum[r, j] += hs[k, j]
                for i in range(n):
                    if vs[k, i] != 0.0:
                        for j in range(m):
                            vh_sum[r, i, j] += hs[k, j]
    return v_sum, h_sum, vh_sum, rounds - burn_in


@njit(cache=True, parallel=True, fastmath=True)
def cd_kernel(W, WT, b, c, starts, k_steps, discrete_init, discrete_stats, seed):
    """Alternating Gibbs chains, one per start vector.

    Chains sample binary h | v then binary v | h for ``k_steps`` rounds.
    The returned per-chain statistics are the final binary v together with
    P(h = 1 | v_final)  (probabilities), or a Bernoulli draw from it when
    ``discrete_stats`` is set.
    """
    n, m = W.shape
    n_chains = starts.shape[0]
    out_v = np.empty((n_chains, n), np.float64)
    out_h = np.empty((n_chains, m), np.float64)
    for s in prange(n_chains):
        rng = np.empty(1, np.uint64)
        rng[0] = _stream_init(np.uint64(seed), np.uint64(s))
        v = np.empty(n, np.float64)
        h = np.empty(m, np.float64)
        if discrete_init:
            for i in range(n):
                v[i] = 1.0 if _next_unit(rng) < starts[s, i] else 0.0
        else:
            for i in range(n):
                v[i] = starts[s, i]
        for _ in range(k_steps):
            for j in range(m):
                acc = c[j]
                for i in range(n):
                    acc += WT[j, i] * v[i]
                h[j] = 1.0 if _next_unit(rng) < _sigmoid(acc) else 0.0
            for i in range(n):
                acc = b[i]
                for j in range(m):
                    acc += W[i, j] * h[j]
                v[i] = 1.0 if _next_unit(rng) < _sigmoid(acc) else 0.0
        for j in range(m):
            acc = c[j]
            for i in range(n):
                acc += WT[j, i] * v[i]
            p = _sigmoid(acc)
            if discrete_stats:
                out_h[s, j] = 1.0 if _next_unit(rng) < p else 0.0
            else:
                out_h[s, j] = p
        for i in range(n):
            out_v[s, i] = v[i]
    return out_v, out_h
