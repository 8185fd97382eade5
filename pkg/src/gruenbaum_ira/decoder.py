"""Iterative soft decoding of IRA codes and an exhaustive MAP reference.

Two schedules are offered.  ``decode_flooding`` updates every check and
then every variable of the full Tanner graph (information and parity
variables alike).  ``decode_turbo`` treats the accumulator as a two-state
trellis and runs a forward/backward recursion over the checks in chain
order, so each check sees the message its predecessor just produced.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from . import _kernels
from ._kernels import CLAMP
from .code import IraCode, encode_batch
from .errors import ParameterError, StructureError

DEFAULT_ITERS = 72
MAX_BRUTE_FORCE_BITS = 16


@dataclass(frozen=True)
class DecodeResult:
    hard_bits: np.ndarray
    iterations_used: int
    converged: bool
    posterior: np.ndarray
    parity_posterior: np.ndarray | None = None


def boxplus(a: float, b: float, minsum: bool = False) -> float:
    """Check-node combination 2*atanh(tanh(a/2)*tanh(b/2)).

    Evaluated as sign*min(|a|,|b|) plus two log1p corrections, which stays
    finite for any input; values at +/-25 count as certainties.
    """
    return float(_kernels.boxplus(float(a), float(b), minsum))


def hard_decision(llr) -> np.ndarray:
    return (np.asarray(llr) < 0).astype(np.uint8)


def _pinned_llrs(code: IraCode, n: int) -> np.ndarray:
    pinned = np.zeros(n)
    pinned[code.pinned_positions] = np.where(code.pinned_values == 0, CLAMP, -CLAMP)
    return pinned


_graph_cache: "weakref.WeakKeyDictionary[IraCode, tuple]" = weakref.WeakKeyDictionary()


def tanner_csr(code: IraCode):
    """(edge_var, check_ptr, var_ptr, var_edges) for the full Tanner graph.

    Variables are numbered information first (0..k-1) then parity
    (k..k+m-1).  Check j holds its combiner slots, then parity j, then
    parity j-1 when j > 0.
    """
    cached = _graph_cache.get(code)
    if cached is not None:
        return cached
    k, m = code.k, code.m
    rows = []
    for j in range(m):
        vars_j = list(code.check_info_nodes(j)) + [k + j]
        if j > 0:
            vars_j.append(k + j - 1)
        rows.append(vars_j)
    check_ptr = np.zeros(m + 1, dtype=np.int64)
    check_ptr[1:] = np.cumsum([len(r) for r in rows])
    edge_var = np.fromiter((v for r in rows for v in r), dtype=np.int64, count=check_ptr[-1])
    order = np.argsort(edge_var, kind="stable")
    var_ptr = np.zeros(code.n + 1, dtype=np.int64)
    var_ptr[1:] = np.cumsum(np.bincount(edge_var, minlength=code.n))
    out = (edge_var, check_ptr, var_ptr, order.astype(np.int64))
    _graph_cache[code] = out
    return out


def _channel(code: IraCode, channel_llrs) -> np.ndarray:
    ch = np.asarray(channel_llrs, dtype=np.float64).ravel()
    if ch.size != code.n:
        raise StructureError(f"expected {code.n} channel LLRs, got {ch.size}")
    return ch


def decode_flooding(code: IraCode, channel_llrs, max_iter: int = DEFAULT_ITERS,
                    early_stop: bool = False, minsum: bool = False,
                    use_pins: bool = True) -> DecodeResult:
    ch = _channel(code, channel_llrs)
    if max_iter < 1:
        raise ParameterError("max_iter must be >= 1")
    pinned = _pinned_llrs(code, code.n) if use_pins else np.zeros(code.n)
    edge_var, check_ptr, var_ptr, var_edges = tanner_csr(code)
    post, it, ok = _kernels.flooding(ch, pinned, edge_var, check_ptr, var_ptr, var_edges,
                                     int(max_iter), bool(early_stop), bool(minsum))
    info = post[:code.k].copy()
    return DecodeResult(hard_decision(info), int(it), bool(ok), info, post[code.k:].copy())


INFO_UPDATES = ("edge", "sweep")


def decode_turbo(code: IraCode, channel_llrs, max_iter: int = DEFAULT_ITERS,
                 early_stop: bool = False, minsum: bool = False,
                 info_update: str = "edge", use_pins: bool = True) -> DecodeResult:
    """Turbo-like schedule over the two-state accumulator trellis.

    info_update:
        ``"edge"`` refreshes an information node's belief as soon as any
        check sends it a new message, so later checks in the same sweep
        read the fresh value; ``"sweep"`` refreshes all beliefs once after
        the backward pass.
    """
    ch = _channel(code, channel_llrs)
    if max_iter < 1:
        raise ParameterError("max_iter must be >= 1")
    if info_update not in INFO_UPDATES:
        raise ParameterError(f"info_update must be one of {INFO_UPDATES}")
    pinned = _pinned_llrs(code, code.k) if use_pins else np.zeros(code.k)
    info, par, it, ok = _kernels.turbo(
        ch[:code.k].copy(), ch[code.k:].copy(), pinned, code.slot_info, code.check_ptr,
        int(max_iter), bool(early_stop), bool(minsum), info_update == "edge")
    return DecodeResult(hard_decision(info), int(it), bool(ok), info, par)


def decode(code: IraCode, channel_llrs, scheduling: str = "turbo", **kw) -> DecodeResult:
    if scheduling == "turbo":
        return decode_turbo(code, channel_llrs, **kw)
    if scheduling == "flooding":
        return decode_flooding(code, channel_llrs, **kw)
    raise ParameterError(f"unknown scheduling {scheduling!r}")


def codebook(code: IraCode) -> np.ndarray:
    """Every codeword consistent with the pins, one row per payload value."""
    b = code.payload_bits
    if b > MAX_BRUTE_FORCE_BITS:
        raise ParameterError(
            f"exhaustive search over 2^{b} payloads refused (limit 2^{MAX_BRUTE_FORCE_BITS})")
    idx = np.arange(1 << b, dtype=np.int64)
    payloads = ((idx[:, None] >> np.arange(b)) & 1).astype(np.uint8)
    return encode_batch(code, payloads)


def map_posteriors(code: IraCode, channel_llrs) -> np.ndarray:
    """Exact bitwise a-posteriori LLRs of the information bits by enumeration."""
    ch = _channel(code, channel_llrs)
    words = codebook(code)
    # log P(y | x) up to a constant: +L/2 for a 0, -L/2 for a 1
    loglik = ((1.0 - 2.0 * words) * (0.5 * ch)).sum(axis=1)
    info = words[:, :code.k].astype(bool)
    post = np.empty(code.k)
    for i in range(code.k):
        zero = loglik[~info[:, i]]
        one = loglik[info[:, i]]
        lz = logsumexp(zero) if zero.size else -np.inf
        lo = logsumexp(one) if one.size else -np.inf
        post[i] = lz - lo
    return post


def brute_force_map(code: IraCode, channel_llrs) -> np.ndarray:
    """Bitwise MAP decisions on the information bits; ties decide 0."""
    return (map_posteriors(code, channel_llrs) < 0).astype(np.uint8)


def brute_force_ml(code: IraCode, channel_llrs) -> np.ndarray:
    """Information bits of the single most likely codeword."""
    ch = _channel(code, channel_llrs)
    words = codebook(code)
    loglik = ((1.0 - 2.0 * words) * (0.5 * ch)).sum(axis=1)
    return words[int(np.argmax(loglik)), :code.k].copy()
