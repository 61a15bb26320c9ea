"""Hot inner loops, compiled with numba by default (see backend.py).

The Monte-Carlo oracle dominates runtime: for every sample it redraws each
uncertain probability from its beta and re-enumerates the joint over all
evidence-consistent worlds. Per-sample substreams keyed by (seed, sample
index) make the output independent of evaluation order.
"""

from __future__ import annotations

import numpy as np

from .backend import jit_kernel
from .rng import beta_at, stream_key


@jit_kernel
def enumerate_worlds(states, rows_idx, row_p, soft_idx, soft_p, out):
    """Posterior P(state0) per node from explicit world enumeration.

    states:   (W, N) int8 world assignments (already hard-consistent)
    rows_idx: (W, N) int64 CPT row index per node per world
    row_p:    (R,) probability of state 0 per row
    soft_idx: (M,) int64 node column per soft observation
    soft_p:   (M,) likelihood of state 0 per soft observation
    out:      (N,) filled with P(state0); returns total evidence weight
    """
    n_worlds, n_nodes = states.shape
    total = 0.0
    for n in range(n_nodes):
        out[n] = 0.0
    for w in range(n_worlds):
        weight = 1.0
        for n in range(n_nodes):
            p = row_p[rows_idx[w, n]]
            if states[w, n] == 0:
                weight *= p
            else:
                weight *= 1.0 - p
        for m in range(soft_idx.shape[0]):
            if states[w, soft_idx[m]] == 0:
                weight *= soft_p[m]
            else:
                weight *= 1.0 - soft_p[m]
        total += weight
        for n in range(n_nodes):
            if states[w, n] == 0:
                out[n] += weight
    if total > 0.0:
        for n in range(n_nodes):
            out[n] /= total
    return total


@jit_kernel
def oracle_samples(states, rows_idx, row_alpha, row_fixed, row_value,
                   soft_idx, soft_alpha, soft_fixed, soft_value,
                   seed, n_samples, out):
    """Monte-Carlo posteriors: out[s, n] = P(node n = state0) for sample s.

    Rows flagged fixed keep their point value; the rest are redrawn per sample
    from Beta(row_alpha). Inconsistent samples (zero evidence weight) come out
    as NaN.
    """
    n_rows = row_alpha.shape[0]
    n_soft = soft_idx.shape[0]
    n_worlds, n_nodes = states.shape
    theta = np.empty(n_rows)
    lik = np.empty(n_soft)
    post = np.empty(n_nodes)
    for s in range(n_samples):
        # uint64 coercions keep the fallback path exact (the compiled helpers
        # hand back plain ints when called from interpreted code)
        key = np.uint64(stream_key(seed, np.uint64(s)))
        ctr = np.uint64(0)
        for r in range(n_rows):
            if row_fixed[r] == 1:
                theta[r] = row_value[r]
            else:
                theta[r], ctr = beta_at(row_alpha[r, 0], row_alpha[r, 1], key, ctr)
                ctr = np.uint64(ctr)
        for m in range(n_soft):
            if soft_fixed[m] == 1:
                lik[m] = soft_value[m]
            else:
                lik[m], ctr = beta_at(soft_alpha[m, 0], soft_alpha[m, 1], key, ctr)
                ctr = np.uint64(ctr)
        total = enumerate_worlds(states, rows_idx, theta, soft_idx, lik, post)
        for n in range(n_nodes):
            out[s, n] = post[n] if total > 0.0 else np.nan


@jit_kernel
def beta_matrix(alpha, seed, n_samples, out):
    """out[s, j] ~ Beta(alpha[j, 0], alpha[j, 1]) on substream (seed, s)."""
    n_vars = alpha.shape[0]
    for s in range(n_samples):
        key = np.uint64(stream_key(seed, np.uint64(s)))
        ctr = np.uint64(0)
        for j in range(n_vars):
            out[s, j], ctr = beta_at(alpha[j, 0], alpha[j, 1], key, ctr)
            ctr = np.uint64(ctr)
