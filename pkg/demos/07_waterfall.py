"""
Waterfall comparison
====================

FER and BER of the IRA code (turbo schedule, 72 iterations) against the
K=9 Viterbi baseline, written as CSV and a small SVG plot.  Pass a frame
count on the command line for tighter curves, e.g. ``python 07_waterfall.py 10000``.
"""

import sys

from gruenbaum_ira.sim import SweepConfig, crossing_ebno, run_comparison

frames = int(sys.argv[1]) if len(sys.argv) > 1 else 300
configs = [SweepConfig(system="ira", snr_points=(1.25, 1.5, 1.75, 2.0), max_frames=frames),
           SweepConfig(system="conv", snr_points=(1.75, 2.0, 2.25, 2.5, 2.75), max_frames=frames)]
results = run_comparison(configs, csv_path="waterfall.csv", svg_path="waterfall.svg",
                         progress=lambda r: print(f"{r.system:4s} {r.ebno_db:4.2f} dB  "
                                                  f"FER {r.fer:.2e}  BER {r.ber:.2e}"))

x = {c.system: crossing_ebno([r for r in results if r.system == c.system]) for c in configs}
print("FER 1e-2 crossing:", {k: None if v is None else round(v, 2) for k, v in x.items()})
if None not in x.values():
    print(f"gap {x['conv'] - x['ira']:.2f} dB")
