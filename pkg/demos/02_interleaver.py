"""
Building the 1344-entry interleaver
===================================

A relative-prime map i -> (s + p*i) mod n is "dithered" block by block with
the 24-entry table, then the heads of consecutive blocks are swapped.
"""

import numpy as np

from gruenbaum_ira import interleaver

spec = interleaver.reference_spec()
print(f"n={spec.n} p={spec.p} s={spec.s} block length {spec.group_len}")

perm = interleaver.build_gruenbaum_interleaver(spec)
print("first entries:", perm.map[:12].tolist())
print("bijection:", interleaver.is_bijection(perm.map))

# the plain relative-prime map, for contrast
rp = interleaver.relative_prime_permutation(spec.n, spec.p, spec.s)
print("entries moved by dithering:", int(np.sum(rp.map != perm.map)))

# the three ways of treating the block heads
for mode in interleaver.SHIFT_MODES:
    pm = interleaver.build_gruenbaum_interleaver(spec, mode)
    print(f"{mode:10s} spread {interleaver.s_random_metric(pm):3d}")

# inverse and composition
inv = interleaver.invert(perm)
print("inverse composes to identity:", inv.compose(perm) == interleaver.Permutation.identity(spec.n))
