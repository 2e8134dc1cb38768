"""Phase-biased Pauli channel: rates, chain probabilities, sampling and bounds.

The bias eta = p_z / (2 p_x) with p_x = p_y; eta = inf (pure dephasing)
is a first-class value so that zero minority rates are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pauli import PauliString, weight_counts

# Sentinel for log(0): large enough that exp underflows to exactly 0 after
# any max-shift, small enough that count * LOG_ZERO never overflows.
LOG_ZERO = -1e15


@dataclass(frozen=True)
class NoiseParams:
    """Total rate p split as p_x = p_y = p / (2(eta+1)), p_z = p eta / (eta+1)."""

    p: float
    eta: float
    p_x: float
    p_y: float
    p_z: float

    @property
    def p_i(self) -> float:
        return 1.0 - self.p

    def rate_by_letter_index(self) -> np.ndarray:
        """Rates ordered by letter index 2x+z: (I, Z, X, Y)."""
        return np.array([self.p_i, self.p_z, self.p_x, self.p_y])

    def log_rate_by_letter_index(self) -> np.ndarray:
        r = self.rate_by_letter_index()
        return np.where(r > 0.0, np.log(np.where(r > 0.0, r, 1.0)), LOG_ZERO)


def biased_rates(p: float, eta: float) -> NoiseParams:
    """Noise parameters for total rate p and bias eta (eta >= 1/2 or inf)."""
    if not 0.0 <= p < 1.0:
        raise ValueError(f"total error rate must be in [0, 1), got {p}")
    if math.isinf(eta):
        return NoiseParams(p, math.inf, 0.0, 0.0, p)
    if eta < 0.5:
        raise ValueError(f"bias must be >= 1/2 or inf, got {eta}")
    p_x = p / (2.0 * (eta + 1.0))
    p_z = p * eta / (eta + 1.0)
    return NoiseParams(p, eta, p_x, p_x, p_z)


def special_point(eta: float) -> float:
    """The error rate p_s = (1 + 1/eta) / (2 + 1/eta) where p_z = 1 - p."""
    if math.isinf(eta):
        return 0.5
    if eta < 0.5:
        raise ValueError(f"bias must be >= 1/2 or inf, got {eta}")
    return (eta + 1.0) / (2.0 * eta + 1.0)


def chain_log_prob(noise: NoiseParams, chain: PauliString) -> float:
    """Natural log of the chain probability; -inf when a zero-rate letter appears."""
    wc = weight_counts(chain)
    n = chain.n
    if noise.p == 0.0:
        return -math.inf if (wc.n_x or wc.n_y or wc.n_z) else 0.0
    for count, rate in ((wc.n_x, noise.p_x), (wc.n_y, noise.p_y), (wc.n_z, noise.p_z)):
        if count and rate == 0.0:
            return -math.inf
    log_1mp = math.log(noise.p_i)
    out = n * log_1mp
    for count, rate in ((wc.n_x, noise.p_x), (wc.n_y, noise.p_y), (wc.n_z, noise.p_z)):
        if count:
            out += count * (math.log(rate) - log_1mp)
    return out


def sample_chain(noise: NoiseParams, n: int, rng: np.random.Generator) -> PauliString:
    """Draw an i.i.d. error chain; deterministic given the generator state."""
    u = rng.random(n)
    c1 = noise.p_i
    c2 = c1 + noise.p_x
    c3 = c2 + noise.p_y
    code = (u >= c1).astype(np.uint8) + (u >= c2) + (u >= c3)  # 0=I 1=X 2=Y 3=Z
    x = ((code == 1) | (code == 2)).astype(np.uint8)
    z = ((code == 2) | (code == 3)).astype(np.uint8)
    return PauliString(x, z)


def entropy(noise: NoiseParams) -> float:
    """Channel entropy in bits, with 0 log 0 = 0."""
    out = 0.0
    for rate in (noise.p_i, noise.p_x, noise.p_y, noise.p_z):
        if rate > 0.0:
            out -= rate * math.log2(rate)
    return out


def hashing_bound(eta: float) -> float:
    """The error rate where the channel entropy crosses 1 bit.

    Found by bisection on H(p) = 1 to absolute tolerance 1e-10.  H is
    strictly increasing from 0 up to the maximum-entropy rate, so the root
    in (0, p_uniform] is unique.
    """
    if math.isinf(eta):
        return 0.5  # binary entropy: H(0.5) = 1 exactly
    # maximum-entropy total rate: all four rates equal gives the largest
    # natural cap; for biased channels H keeps increasing past equal rates,
    # so bracket with the p that maximizes H on a coarse scan.
    lo, hi = 0.0, _argmax_entropy(eta)
    if entropy(biased_rates(hi, eta)) < 1.0:
        raise ValueError(f"channel entropy never reaches 1 bit for eta={eta}")
    # tolerance well inside the promised 1e-10 so H(p_c) = 1 holds to 1e-9
    # even where the entropy slope is steep (large eta)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if entropy(biased_rates(mid, eta)) < 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    return 0.5 * (lo + hi)


def _argmax_entropy(eta: float) -> float:
    grid = np.linspace(1e-6, 1.0 - 1e-9, 4097)
    vals = [entropy(biased_rates(p, eta)) for p in grid]
    return float(grid[int(np.argmax(vals))])


def xz_decoupled_rates(p1: float, p2: float) -> tuple[float, float, float]:
    """(p_x, p_y, p_z) of the two-parameter channel whose K_y coupling vanishes."""
    if not (0.0 <= p1 < 1.0 and 0.0 <= p2 < 1.0):
        raise ValueError("p1 and p2 must lie in [0, 1)")
    return p1 * (1.0 - p2), p1 * p2, p2 * (1.0 - p1)


def noise_from_rates(p_x: float, p_y: float, p_z: float) -> NoiseParams:
    """NoiseParams from explicit per-letter rates (eta defined when p_x = p_y)."""
    p = p_x + p_y + p_z
    if not 0.0 <= p < 1.0:
        raise ValueError("rates must sum to a total in [0, 1)")
    eta = p_z / (2.0 * p_x) if p_x > 0 else math.inf
    return NoiseParams(p, eta, p_x, p_y, p_z)
