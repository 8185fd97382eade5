"""
The rate-1/4 IRA code
=====================

192 information bits are repeated by an irregular degree profile into 1344
edges, interleaved, XORed in groups of 3,2,2,... into 576 checks and
accumulated.  Eight information positions are pinned to 1.
"""

import numpy as np

from gruenbaum_ira import code as ira

code = ira.reference_code()
print(f"k={code.k} m={code.m} n={code.n} E={code.E} rate={code.rate}")

# degree realization of the profile
degrees, counts = np.unique(code.rep_degree, return_counts=True)
print("repetition degrees:", dict(zip(degrees.tolist(), counts.tolist())))
degrees, counts = np.unique(code.check_degree, return_counts=True)
print("check degrees:", dict(zip(degrees.tolist(), counts.tolist())))
print("pinned positions:", code.pinned_positions.tolist())

rng = np.random.default_rng(1)
payload = rng.integers(0, 2, code.payload_bits, dtype=np.uint8)
word = ira.encode(code, payload)
print("codeword length", word.bits.size, "satisfies checks:", ira.check_codeword(code, word.bits))

# the same code as a sparse parity-check matrix
H = code.parity_check_matrix()
print("H shape", H.shape, "syndrome weight", int((H @ word.bits % 2).sum()))

# flip one bit and the check fails
bad = word.bits.copy()
bad[100] ^= 1
print("after a flip:", ira.check_codeword(code, bad))
