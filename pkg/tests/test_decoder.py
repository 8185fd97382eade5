import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gruenbaum_ira.channel import ebno_to_sigma
from gruenbaum_ira.code import build_code, encode, encode_batch, reference_code
from gruenbaum_ira.decoder import (CLAMP, boxplus, brute_force_map, brute_force_ml, decode,
                                   decode_flooding, decode_turbo, map_posteriors)
from gruenbaum_ira.errors import ParameterError, StructureError
from gruenbaum_ira.interleaver import Permutation

from conftest import chain_code, random_toy_code


def exact_boxplus(a, b):
    mpmath.mp.dps = 50
    a, b = mpmath.mpf(a), mpmath.mpf(b)
    return float(2 * mpmath.atanh(mpmath.tanh(a / 2) * mpmath.tanh(b / 2)))


def noisy_llrs(rng, word, sigma):
    y = (1.0 - 2.0 * word) + sigma * rng.standard_normal(word.size)
    return 2.0 * y / sigma**2


def test_boxplus_laws():
    for L in (-7.5, -0.3, 0.0, 1.0, 12.0):
        assert boxplus(L, CLAMP) == L
        assert boxplus(L, -CLAMP) == -L
        assert boxplus(L, 0.0) == 0.0
    mpmath.mp.dps = 50
    ref = float(mpmath.log((1 + mpmath.e**4) / (2 * mpmath.e**2)))
    assert boxplus(2.0, 2.0) == pytest.approx(1.32500, abs=1e-4)
    assert boxplus(2.0, 2.0) == pytest.approx(ref, abs=1e-14)


@settings(max_examples=300, deadline=None)
@given(st.floats(-20, 20), st.floats(-20, 20))
def test_boxplus_against_high_precision(a, b):
    got = boxplus(a, b)
    assert got == pytest.approx(exact_boxplus(a, b), abs=1e-12)
    assert abs(got) <= min(abs(a), abs(b)) + math.log(2)
    assert got == boxplus(b, a)


def test_minsum_flag():
    assert boxplus(2.0, -3.0, minsum=True) == -2.0


def test_dimension_errors():
    code = reference_code()
    with pytest.raises(StructureError):
        decode_flooding(code, np.zeros(10))
    with pytest.raises(StructureError):
        decode_turbo(code, np.zeros(10))
    with pytest.raises(ParameterError):
        decode(code, np.zeros(code.n), scheduling="bogus")
    with pytest.raises(ParameterError):
        decode_turbo(code, np.zeros(code.n), info_update="bogus")


@pytest.mark.parametrize("scheduling", ["flooding", "turbo"])
def test_noiseless_converges_in_one_iteration(rng, scheduling):
    code = reference_code()
    word = encode(code, rng.integers(0, 2, 184)).bits
    llrs = np.where(word == 0, 20.0, -20.0)
    res = decode(code, llrs, scheduling, early_stop=True)
    assert res.converged and res.iterations_used == 1
    assert np.array_equal(res.hard_bits, word[:192])


@pytest.mark.parametrize("scheduling", ["flooding", "turbo"])
def test_erasures_keep_pins(scheduling):
    code = reference_code()
    res = decode(code, np.zeros(code.n), scheduling, max_iter=5)
    assert np.all(res.posterior[code.pinned_positions] == -CLAMP)
    free = np.setdiff1d(np.arange(code.k), code.pinned_positions)
    assert np.all(res.posterior[free] == 0.0)
    assert np.all(res.hard_bits[free] == 0)


def test_pinned_posteriors_never_flip(rng):
    code = reference_code()
    sigma = ebno_to_sigma(-1.0, 184, 768)
    for _ in range(20):
        word = encode(code, rng.integers(0, 2, 184)).bits
        # push the channel hard against the pinned ones
        llrs = noisy_llrs(rng, word, sigma)
        llrs[code.pinned_positions] = 15.0
        for sched in ("flooding", "turbo"):
            res = decode(code, llrs, sched, max_iter=10)
            assert np.all(res.posterior[code.pinned_positions] < 0)


def test_brute_force_map_tiny_repetition_code():
    # k=1 repeated once and accumulated once: codeword (u, u)
    code = build_code([1], Permutation([0]), [1])
    assert brute_force_map(code, [1.0, -3.0]).tolist() == [1]
    assert brute_force_map(code, [3.0, -1.0]).tolist() == [0]


def naive_map(code, llrs):
    """Double loop over payload integers with math.exp, no vectorization."""
    k = code.k
    p0 = [0.0] * k
    p1 = [0.0] * k
    for val in range(1 << code.payload_bits):
        payload = [(val >> i) & 1 for i in range(code.payload_bits)]
        word = encode(code, payload).bits
        w = math.exp(sum(0.5 * l if b == 0 else -0.5 * l for b, l in zip(word, llrs)))
        for i in range(k):
            if word[i]:
                p1[i] += w
            else:
                p0[i] += w
    return np.array([math.log(a) - math.log(b) for a, b in zip(p0, p1)])


def test_map_posteriors_against_naive_enumeration(rng):
    for _ in range(5):
        code = random_toy_code(rng, 6)
        word = encode(code, rng.integers(0, 2, 6)).bits
        llrs = noisy_llrs(rng, word, 0.9)
        assert np.allclose(map_posteriors(code, llrs), naive_map(code, llrs), atol=1e-9)


def test_brute_force_refuses_large_codes():
    with pytest.raises(ParameterError):
        brute_force_map(reference_code(), np.zeros(768))


def test_ml_and_bitwise_map_agree_on_most_frames(rng):
    code = random_toy_code(rng, 8)
    agree = 0
    for _ in range(200):
        word = encode(code, rng.integers(0, 2, 8)).bits
        llrs = noisy_llrs(rng, word, 0.8)
        agree += np.array_equal(brute_force_map(code, llrs), brute_force_ml(code, llrs))
    assert agree >= 180


@pytest.mark.parametrize("info_update", ["edge", "sweep"])
def test_turbo_one_sweep_is_exact_on_chain(rng, info_update):
    for _ in range(50):
        code = chain_code(8, rng)
        word = encode(code, rng.integers(0, 2, 8)).bits
        llrs = noisy_llrs(rng, word, 0.8)
        res = decode_turbo(code, llrs, max_iter=1, info_update=info_update)
        assert np.allclose(res.posterior, map_posteriors(code, llrs), atol=1e-9, rtol=0)


def tree_code():
    """Degree-1 information nodes on a chain of degree-2 checks: a tree."""
    return build_code([1] * 8, Permutation([3, 0, 6, 1, 4, 7, 2, 5]), [2, 2, 2, 2])


def test_flooding_matches_map_on_tree(rng):
    code = tree_code()
    agree = total = 0
    for _ in range(1000):
        word = encode(code, rng.integers(0, 2, 8)).bits
        llrs = noisy_llrs(rng, word, 1.0)
        post = map_posteriors(code, llrs)
        res = decode_flooding(code, llrs, max_iter=20)
        sure = np.abs(post) > 1e-6
        total += sure.sum()
        agree += np.sum(res.hard_bits[sure] == (post[sure] < 0))
        assert np.allclose(res.posterior, post, atol=1e-9)
    assert agree / total > 0.95


def test_flooding_vs_map_on_loopy_toy(rng):
    """Agreement rate on a code with cycles; recorded, loosely bounded."""
    code = random_toy_code(rng, 8, degrees=(2, 3))
    agree = total = 0
    for _ in range(1000):
        word = encode(code, rng.integers(0, 2, 8)).bits
        llrs = noisy_llrs(rng, word, 0.8)
        post = map_posteriors(code, llrs)
        res = decode_flooding(code, llrs)
        sure = np.abs(post) > 1e-6
        total += sure.sum()
        agree += np.sum(res.hard_bits[sure] == (post[sure] < 0))
    rate = agree / total
    print(f"flooding/MAP bit agreement on loopy toy: {rate:.4f}")
    assert rate > 0.9


@pytest.mark.parametrize("scheduling", ["flooding", "turbo"])
def test_decoding_is_deterministic(rng, scheduling):
    code = reference_code()
    word = encode(code, rng.integers(0, 2, 184)).bits
    llrs = noisy_llrs(rng, word, ebno_to_sigma(1.0, 184, 768))
    a = decode(code, llrs, scheduling)
    b = decode(code, llrs.copy(), scheduling)
    assert np.array_equal(a.posterior, b.posterior)
    assert a.iterations_used == b.iterations_used == 72


def paired_frame_errors(code, ebno, frames, seed, **kw):
    rng = np.random.default_rng(seed)
    sigma = ebno_to_sigma(ebno, 184, 768)
    words = encode_batch(code, rng.integers(0, 2, (frames, 184)))
    out = []
    for w in words:
        llrs = noisy_llrs(rng, w, sigma)
        out.append(decode(code, llrs, **kw).hard_bits)
    return words[:, :192], np.array(out)


def test_turbo_no_worse_than_flooding():
    code = reference_code()
    truth, turbo = paired_frame_errors(code, 1.5, 300, 7, scheduling="turbo", early_stop=True)
    _, flood = paired_frame_errors(code, 1.5, 300, 7, scheduling="flooding", early_stop=True)
    fe_turbo = np.any(turbo != truth, axis=1).sum()
    fe_flood = np.any(flood != truth, axis=1).sum()
    assert fe_turbo <= fe_flood


def test_early_stop_does_not_change_decisions():
    code = reference_code()
    _, fixed = paired_frame_errors(code, 1.75, 150, 3, scheduling="turbo")
    _, early = paired_frame_errors(code, 1.75, 150, 3, scheduling="turbo", early_stop=True)
    assert np.array_equal(fixed, early)
