"""BPSK over AWGN: modulation, seeded noise, channel LLRs, Eb/N0 bookkeeping."""

from __future__ import annotations

import numpy as np

from ._kernels import CLAMP
from .errors import ParameterError


def modulate(bits) -> np.ndarray:
    """0 -> +1.0, 1 -> -1.0."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)


def frame_rng(seed: int, point: int, frame: int) -> np.random.Generator:
    """Independent generator for one frame, keyed by (seed, point, frame).

    Results depend only on the key, never on how frames are batched or
    which worker draws them.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(point), int(frame)]))


def add_noise(symbols, sigma: float, rng: np.random.Generator) -> np.ndarray:
    if sigma < 0:
        raise ParameterError("sigma must be >= 0")
    x = np.asarray(symbols, dtype=np.float64)
    if sigma == 0:
        return x.copy()
    return x + sigma * rng.standard_normal(x.shape)


def llr(y, sigma: float) -> np.ndarray:
    """2y/sigma^2; with sigma == 0 the sign of y gives a +/-25 certainty."""
    y = np.asarray(y, dtype=np.float64)
    if sigma == 0:
        return np.where(y > 0, CLAMP, np.where(y < 0, -CLAMP, 0.0))
    return 2.0 * y / (sigma * sigma)


def ebno_to_sigma(ebno_db: float, info_bits: int, channel_bits: int) -> float:
    """Noise std per real dimension for unit-energy BPSK at code rate info/channel."""
    if info_bits <= 0 or channel_bits <= 0:
        raise ParameterError("bit counts must be positive")
    rate = info_bits / channel_bits
    return float(np.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebno_db / 10.0))))
