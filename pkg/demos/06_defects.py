"""
Short cycles and stopping sets
==============================

The interleaver parameters (p, s) decide how many 4-cycles the Tanner graph
has and how small its stopping sets are.  Here the reference parameters are
compared with a handful of random ones.
"""

from gruenbaum_ira import analysis, code as ira

report = analysis.analyze_defects(ira.reference_code(pins=False), max_size=4)
print(report.as_text())

setup = analysis.SearchSetup()
candidates = analysis.sample_candidates(1344, 20, seed=0)
best, results = analysis.search_ps(candidates + [(173, 1184)], setup)
for c in sorted(results, key=analysis.Candidate.key)[:5]:
    print(f"p={c.p:4d} s={c.s:4d} score={c.report.score()}")
print(f"best of the sample: p={best.p}, s={best.s}")
