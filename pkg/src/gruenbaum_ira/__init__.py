"""IRA codes with a Gruenbaum-graph dithered interleaver.

Submodules: ``graph`` (Gruenbaum graph and dither derivation),
``interleaver``, ``code`` (degree realization, Tanner graph, encoder),
``decoder`` (flooding and turbo schedules), ``baseline`` (K=9 Viterbi),
``channel`` (BPSK/AWGN), ``analysis`` (4-cycles, stopping sets, (p, s)
search) and ``sim`` (Monte-Carlo sweeps).
"""

from .code import IraCode, build_code, encode, check_codeword, reference_code
from .decoder import boxplus, decode_flooding, decode_turbo
from .interleaver import Permutation, build_gruenbaum_interleaver, gr24, gr25, reference_interleaver

__version__ = "0.1.0"
