"""Terminated K=9 rate-1/4 convolutional code with soft-decision Viterbi decoding."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import ParameterError, StructureError

# Maximum free-distance K=9 rate-1/4 generators (octal), free distance 24.
DEFAULT_GENERATORS = (0o463, 0o535, 0o733, 0o745)


@dataclass(frozen=True, eq=False)
class ConvCodeSpec:
    """Feed-forward code; generator MSB taps the newest input bit."""

    generators: tuple[int, ...] = DEFAULT_GENERATORS
    constraint_length: int = 9
    info_bits: int = 192

    def __post_init__(self):
        K = self.constraint_length
        gens = tuple(int(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if len(set(gens)) != len(gens):
            raise ParameterError("generators must be distinct")
        for g in gens:
            if g >> (K - 1) != 1 or not g & 1:
                raise ParameterError(
                    f"generator {g:o} must have both end taps set for K={K}")

    @property
    def rate_inverse(self) -> int:
        return len(self.generators)

    @property
    def tail_bits(self) -> int:
        return self.constraint_length - 1

    @property
    def coded_bits(self) -> int:
        return (self.info_bits + self.tail_bits) * self.rate_inverse

    @property
    def n_states(self) -> int:
        return 1 << (self.constraint_length - 1)

    @cached_property
    def trellis(self) -> tuple[np.ndarray, np.ndarray]:
        """(next_state[s, u], out_bits[s, u, r]) tables."""
        K = self.constraint_length
        S = self.n_states
        s = np.arange(S, dtype=np.int64)[:, None]
        u = np.arange(2, dtype=np.int64)[None, :]
        reg = (u << (K - 1)) | s
        next_state = (reg >> 1).astype(np.int64)
        out = np.empty((S, 2, self.rate_inverse), dtype=np.uint8)
        for r, g in enumerate(self.generators):
            out[:, :, r] = _parity(reg & g)
        return next_state, out


def _parity(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64).copy()
    p = np.zeros_like(x)
    while np.any(x):
        p ^= x & 1
        x >>= 1
    return p.astype(np.uint8)


def parse_generators(text: str) -> tuple[int, ...]:
    """``"463,535,733,745"`` -> octal ints."""
    return tuple(int(tok.strip(), 8) for tok in text.split(",") if tok.strip())


def conv_encode(spec: ConvCodeSpec, payload) -> np.ndarray:
    u = np.asarray(payload, dtype=np.uint8).ravel()
    if u.size != spec.info_bits:
        raise ParameterError(f"payload has {u.size} bits, expected {spec.info_bits}")
    bits = np.concatenate((u, np.zeros(spec.tail_bits, dtype=np.uint8)))
    next_state, out = spec.trellis
    coded = np.empty((bits.size, spec.rate_inverse), dtype=np.uint8)
    state = 0
    for t, b in enumerate(bits):
        coded[t] = out[state, b]
        state = next_state[state, b]
    return coded.ravel()


def conv_encode_batch(spec: ConvCodeSpec, payloads) -> np.ndarray:
    """Encode a (frames, info_bits) array by GF(2) convolution."""
    u = np.atleast_2d(np.asarray(payloads, dtype=np.int64))
    if u.shape[1] != spec.info_bits:
        raise ParameterError(f"payload has {u.shape[1]} bits, expected {spec.info_bits}")
    K = spec.constraint_length
    padded = np.concatenate((u, np.zeros((u.shape[0], K - 1), dtype=np.int64)), axis=1)
    T = padded.shape[1]
    out = np.zeros((u.shape[0], T, spec.rate_inverse), dtype=np.int64)
    for r, g in enumerate(spec.generators):
        for lag in range(K):
            if (g >> (K - 1 - lag)) & 1:
                out[:, lag:, r] ^= padded[:, :T - lag]
    return out.reshape(u.shape[0], -1).astype(np.uint8)


def viterbi_decode(spec: ConvCodeSpec, llrs) -> np.ndarray:
    """Maximum-likelihood payload for a zero-terminated frame of channel LLRs."""
    llr = np.asarray(llrs, dtype=np.float64).ravel()
    if llr.size != spec.coded_bits:
        raise StructureError(f"expected {spec.coded_bits} LLRs, got {llr.size}")
    next_state, out = spec.trellis
    bits, _ = _kernels.viterbi(llr, next_state, out, spec.info_bits + spec.tail_bits,
                               spec.rate_inverse, spec.info_bits)
    return bits.copy()


def free_distance(spec: ConvCodeSpec, max_depth: int = 64) -> int:
    """Minimum output weight of a path leaving and re-entering state 0 (Dijkstra)."""
    next_state, out = spec.trellis
    weight = out.sum(axis=2).astype(int)
    start = int(next_state[0, 1])
    heap = [(int(weight[0, 1]), start, 1)]
    best = {}
    while heap:
        w, s, depth = heapq.heappop(heap)
        if s == 0:
            return w
        if best.get(s, 1 << 30) <= w or depth > max_depth:
            continue
        best[s] = w
        for u in (0, 1):
            heapq.heappush(heap, (w + int(weight[s, u]), int(next_state[s, u]), depth + 1))
    raise ParameterError("no remerging path found within depth bound")
