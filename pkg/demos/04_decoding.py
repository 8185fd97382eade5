"""
Flooding and turbo-style decoding
=================================

Both decoders pass log-likelihood ratios on the Tanner graph.  Flooding
updates every node at once; the turbo schedule runs forward/backward along
the accumulator chain, so each check sees fresh messages.
"""

import numpy as np

from gruenbaum_ira import code as ira
from gruenbaum_ira.channel import add_noise, ebno_to_sigma, llr, modulate
from gruenbaum_ira.decoder import boxplus, decode_flooding, decode_turbo

print("boxplus(2, 2) =", round(boxplus(2.0, 2.0), 5))

code = ira.reference_code()
sigma = ebno_to_sigma(1.75, code.payload_bits, code.n)
rng = np.random.default_rng(7)

frames, stats = 50, {"turbo": [0, 0], "flooding": [0, 0]}
for _ in range(frames):
    payload = rng.integers(0, 2, code.payload_bits, dtype=np.uint8)
    y = add_noise(modulate(ira.encode(code, payload).bits), sigma, rng)
    L = llr(y, sigma)
    for name, dec in (("turbo", decode_turbo), ("flooding", decode_flooding)):
        res = dec(code, L, max_iter=72, early_stop=True)
        stats[name][0] += int(np.any(res.hard_bits[code.free_positions] != payload))
        stats[name][1] += res.iterations_used

for name, (fe, its) in stats.items():
    print(f"{name:8s} frame errors {fe}/{frames}, mean iterations {its / frames:.1f}")
