"""Compiled inner loops for the message-passing decoders.

All messages are natural-log LLRs, positive meaning bit 0.  A message at
+/-CLAMP is treated as certain.
"""

import math

import numpy as np
from numba import njit

CLAMP = 25.0


@njit(cache=True, nogil=True, inline="always")
def clip(x):
    if x > CLAMP:
        return CLAMP
    if x < -CLAMP:
        return -CLAMP
    return x


@njit(cache=True, nogil=True)
def boxplus(a, b, minsum=False):
    if a >= CLAMP:
        return clip(b)
    if a <= -CLAMP:
        return -clip(b)
    if b >= CLAMP:
        return clip(a)
    if b <= -CLAMP:
        return -clip(a)
    if a == 0.0 or b == 0.0:
        return 0.0
    mag = min(abs(a), abs(b))
    if (a > 0) != (b > 0):
        mag = -mag
    if minsum:
        return mag
    return mag + math.log1p(math.exp(-abs(a + b))) - math.log1p(math.exp(-abs(a - b)))


@njit(cache=True, nogil=True)
def _check_extrinsics(msgs, lo, hi, out, fwd, minsum):
    """out[i] = boxplus of msgs[lo:hi] except msgs[i]."""
    d = hi - lo
    acc = CLAMP
    for t in range(d):
        fwd[t] = acc
        acc = boxplus(acc, msgs[lo + t], minsum)
    acc = CLAMP
    for t in range(d - 1, -1, -1):
        out[lo + t] = boxplus(fwd[t], acc, minsum)
        acc = boxplus(acc, msgs[lo + t], minsum)


@njit(cache=True, nogil=True)
def _checks_satisfied(hard, edge_var, check_ptr):
    m = check_ptr.size - 1
    for j in range(m):
        par = 0
        for e in range(check_ptr[j], check_ptr[j + 1]):
            par ^= hard[edge_var[e]]
        if par:
            return False
    return True


@njit(cache=True, nogil=True)
def flooding(ch, pinned, edge_var, check_ptr, var_ptr, var_edges,
             max_iter, early_stop, minsum):
    """Parallel belief propagation over a generic Tanner graph in CSR form.

    ``pinned`` holds +/-CLAMP for known variables and 0 elsewhere.
    Returns (posterior, iterations, converged).
    """
    n = ch.size
    ne = edge_var.size
    v2c = np.empty(ne)
    c2v = np.zeros(ne)
    fwd = np.empty(64)
    post = np.empty(n)
    hard = np.zeros(n, dtype=np.uint8)
    for e in range(ne):
        v = edge_var[e]
        v2c[e] = pinned[v] if pinned[v] != 0.0 else clip(ch[v])
    it = 0
    converged = False
    m = check_ptr.size - 1
    while it < max_iter:
        it += 1
        for j in range(m):
            lo = check_ptr[j]
            hi = check_ptr[j + 1]
            if hi - lo > fwd.size:
                fwd = np.empty(2 * (hi - lo))
            _check_extrinsics(v2c, lo, hi, c2v, fwd, minsum)
        for v in range(n):
            if pinned[v] != 0.0:
                post[v] = pinned[v]
                for t in range(var_ptr[v], var_ptr[v + 1]):
                    v2c[var_edges[t]] = pinned[v]
            else:
                tot = ch[v]
                for t in range(var_ptr[v], var_ptr[v + 1]):
                    tot += c2v[var_edges[t]]
                post[v] = tot
                for t in range(var_ptr[v], var_ptr[v + 1]):
                    e = var_edges[t]
                    v2c[e] = clip(tot - c2v[e])
            hard[v] = 1 if post[v] < 0 else 0
        converged = _checks_satisfied(hard, edge_var, check_ptr)
        if early_stop and converged:
            break
    return post, it, converged


@njit(cache=True, nogil=True)
def turbo(ch_info, ch_par, pinned, slot_info, check_ptr, max_iter, early_stop,
          minsum, per_edge):
    """Sequential accumulator-trellis schedule.

    Each iteration runs one forward and one backward recursion over the
    two-state accumulator; a check's combiner input is the box-sum of its
    current information messages.  With ``per_edge`` the information-node
    totals are refreshed as soon as a check emits new messages, otherwise
    once per sweep.  Returns (info posterior, parity posterior, iterations,
    converged).
    """
    k = ch_info.size
    m = ch_par.size
    E = slot_info.size
    c2v = np.zeros(E)
    v2c = np.empty(E)
    ext = np.empty(E)
    fwd = np.empty(64)
    total = np.empty(k)
    lc = np.empty(m)
    f = np.empty(m)
    a = np.empty(m)
    bwd = np.empty(m)
    par_post = np.empty(m)
    hard_info = np.zeros(k, dtype=np.uint8)
    for v in range(k):
        total[v] = pinned[v] if pinned[v] != 0.0 else clip(ch_info[v])
    it = 0
    converged = False
    while it < max_iter:
        it += 1
        if not per_edge:
            for s in range(E):
                v = slot_info[s]
                v2c[s] = pinned[v] if pinned[v] != 0.0 else clip(total[v] - c2v[s])
        # forward: state before check 0 is the known zero
        prev = CLAMP
        for j in range(m):
            lo = check_ptr[j]
            hi = check_ptr[j + 1]
            acc = CLAMP
            for s in range(lo, hi):
                if per_edge:
                    v = slot_info[s]
                    v2c[s] = pinned[v] if pinned[v] != 0.0 else clip(total[v] - c2v[s])
                acc = boxplus(acc, v2c[s], minsum)
            lc[j] = acc
            f[j] = boxplus(prev, acc, minsum)
            a[j] = clip(f[j] + ch_par[j])
            prev = a[j]
        b = 0.0
        for j in range(m - 1, -1, -1):
            lo = check_ptr[j]
            hi = check_ptr[j + 1]
            d = hi - lo
            if d + 1 > fwd.size:
                fwd = np.empty(2 * (d + 1))
            if per_edge:
                acc = CLAMP
                for s in range(lo, hi):
                    v = slot_info[s]
                    v2c[s] = pinned[v] if pinned[v] != 0.0 else clip(total[v] - c2v[s])
                    acc = boxplus(acc, v2c[s], minsum)
                lc[j] = acc
            bwd[j] = b
            pb = clip(ch_par[j] + b)
            before = a[j - 1] if j > 0 else CLAMP
            e_j = boxplus(before, pb, minsum)
            _check_extrinsics(v2c, lo, hi, ext, fwd, minsum)
            for s in range(lo, hi):
                new = boxplus(e_j, ext[s], minsum)
                if per_edge:
                    v = slot_info[s]
                    if pinned[v] == 0.0:
                        total[v] += new - c2v[s]
                c2v[s] = new
            b = boxplus(lc[j], pb, minsum)
        if not per_edge:
            for v in range(k):
                total[v] = ch_info[v]
            for s in range(E):
                total[slot_info[s]] += c2v[s]
        for v in range(k):
            if pinned[v] != 0.0:
                total[v] = pinned[v]
            hard_info[v] = 1 if total[v] < 0 else 0
        ok = True
        prev_bit = 0
        for j in range(m):
            par_post[j] = ch_par[j] + f[j] + bwd[j]
            bit = 1 if par_post[j] < 0 else 0
            x = bit ^ prev_bit
            for s in range(check_ptr[j], check_ptr[j + 1]):
                x ^= hard_info[slot_info[s]]
            if x:
                ok = False
            prev_bit = bit
        converged = ok
        if early_stop and converged:
            break
    return total.copy(), par_post, it, converged


@njit(cache=True, nogil=True)
def viterbi(llr, next_state, out_bits, n_steps, n_out, n_info):
    """Soft Viterbi over a feed-forward trellis, terminated in state 0.

    ``out_bits[state, input, r]`` is the r-th coded bit; the branch metric is
    the correlation sum of (+L/2 for bit 0, -L/2 for bit 1).
    """
    S = next_state.shape[0]
    NEG = -1e300
    metric = np.full(S, NEG)
    metric[0] = 0.0
    new = np.empty(S)
    decision = np.empty((n_steps, S), dtype=np.int32)
    for t in range(n_steps):
        for s in range(S):
            new[s] = NEG
        for s in range(S):
            ms = metric[s]
            if ms == NEG:
                continue
            for u in range(2):
                bm = 0.0
                for r in range(n_out):
                    l = llr[t * n_out + r]
                    bm += -0.5 * l if out_bits[s, u, r] else 0.5 * l
                ns = next_state[s, u]
                cand = ms + bm
                if cand > new[ns]:
                    new[ns] = cand
                    decision[t, ns] = s * 2 + u
        for s in range(S):
            metric[s] = new[s]
    bits = np.empty(n_steps, dtype=np.uint8)
    s = 0
    for t in range(n_steps - 1, -1, -1):
        d = decision[t, s]
        bits[t] = d & 1
        s = d >> 1
    return bits[:n_info], metric[0]
