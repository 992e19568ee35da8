"""Seedable deterministic random streams.

Every stochastic component draws from a PCG64 generator created here, one
stream per run, so a (parameters, seed) pair pins the output exactly.  Batch
consumers (the vectorized dart thrower) draw arrays from the same stream; the
array fill order matches repeated scalar draws, so scalar and vectorized
paths see identical values.
"""

from __future__ import annotations

import math

import numpy as np

RngStream = np.random.Generator


def make_rng(seed: int) -> RngStream:
    """Fresh deterministic stream for a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed))


def exp_draw(rate: float, rng: RngStream) -> float:
    """Exponential variate with the given rate, as -ln(u)/rate for uniform
    u in (0, 1); a zero draw is redrawn."""
    u = rng.random()
    while u <= 0.0:
        u = rng.random()
    return -math.log(u) / rate
