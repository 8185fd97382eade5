"""
The K=9 convolutional baseline
==============================

A rate-1/4, 256-state code terminated with 8 zero tail bits, decoded by a
soft-decision Viterbi search.
"""

import numpy as np

from gruenbaum_ira.baseline import ConvCodeSpec, conv_encode, free_distance, viterbi_decode
from gruenbaum_ira.channel import add_noise, ebno_to_sigma, llr, modulate

spec = ConvCodeSpec()
print("generators (octal):", [oct(g) for g in spec.generators])
print("coded bits per frame:", spec.coded_bits, " free distance:", free_distance(spec))

rng = np.random.default_rng(3)
for ebno in (1.5, 2.5, 3.5):
    sigma = ebno_to_sigma(ebno, spec.info_bits, spec.coded_bits)
    errors = 0
    for _ in range(200):
        u = rng.integers(0, 2, spec.info_bits, dtype=np.uint8)
        y = add_noise(modulate(conv_encode(spec, u)), sigma, rng)
        errors += int(np.any(viterbi_decode(spec, llr(y, sigma)) != u))
    print(f"Eb/N0 {ebno} dB: FER {errors / 200:.3f}")
