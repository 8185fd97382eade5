"""Tanner-graph defect counts and the search over interleaver parameters.

Defects are measured on the full Tanner graph of the code: information
variables, parity variables and every check (including the accumulator's
parity-chain edges).
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .code import IraCode, build_code, reference_profile, realize_check_degrees, realize_degrees
from .errors import ParameterError
from .interleaver import (DitherSequence, InterleaverSpec, build_gruenbaum_interleaver,
                          reference_table)

MAX_STOPPING_SET_BOUND = 6
DEFAULT_STOPPING_SET_BOUND = 4


@dataclass(frozen=True)
class DefectReport:
    cycle4_total: int
    cycle4_min_degree: int
    min_stopping_set_size: Optional[int]
    searched_bound: int
    multi_edges: int = 0
    stopping_set: tuple = ()

    def score(self) -> tuple:
        """Lexicographic badness; smaller is better."""
        ss = self.min_stopping_set_size
        ss = self.searched_bound + 1 if ss is None else ss
        return (self.cycle4_min_degree, self.cycle4_total, -ss)

    def as_text(self) -> str:
        ss = "none" if self.min_stopping_set_size is None else self.min_stopping_set_size
        return "\n".join([
            f"cycle4_total = {self.cycle4_total}",
            f"cycle4_min_degree = {self.cycle4_min_degree}",
            f"min_stopping_set_size = {ss}",
            f"searched_bound = {self.searched_bound}",
            f"multi_edges = {self.multi_edges}",
        ])


def check_neighbors(code: IraCode) -> list[list[int]]:
    """Distinct variable neighbors of every check (info 0..k-1, parity k..)."""
    k = code.k
    rows = []
    for j in range(code.m):
        vs = set(int(v) for v in code.check_info_nodes(j))
        vs.add(k + j)
        if j > 0:
            vs.add(k + j - 1)
        rows.append(sorted(vs))
    return rows


def multi_edge_count(code: IraCode) -> int:
    """Repetition edges that land in a check already holding the same node."""
    total = 0
    for j in range(code.m):
        nodes = code.check_info_nodes(j)
        total += nodes.size - np.unique(nodes).size
    return total


def _pair_overlaps(rows: Iterable[Sequence[int]]) -> Counter:
    shared = Counter()
    for row in rows:
        for a in range(len(row)):
            for b in range(a + 1, len(row)):
                shared[(row[a], row[b])] += 1
    return shared


def cycles4_from_rows(rows: Iterable[Sequence[int]], low_degree_vars=None) -> tuple[int, int]:
    """(all 4-cycles, 4-cycles among `low_degree_vars`) of a Tanner graph.

    A pair of variables sharing c checks closes c*(c-1)/2 distinct 4-cycles.
    """
    low = set() if low_degree_vars is None else set(low_degree_vars)
    total = flagged = 0
    for (u, v), c in _pair_overlaps(rows).items():
        if c >= 2:
            cyc = c * (c - 1) // 2
            total += cyc
            if u in low and v in low:
                flagged += cyc
    return total, flagged


def count_cycles4(code: IraCode) -> DefectReport:
    low = np.flatnonzero(code.rep_degree == code.rep_degree.min())
    total, flagged = cycles4_from_rows(check_neighbors(code), low)
    return DefectReport(total, flagged, None, 0, multi_edge_count(code))


def smallest_stopping_set(rows: Sequence[Sequence[int]], n_vars: int,
                          max_size: int) -> Optional[tuple[int, ...]]:
    """Smallest nonempty variable set whose every neighboring check it hits twice.

    Exhaustive branch-and-bound: each set is grown from its lowest-index
    member, and growth always branches on one check currently touched only
    once, since any stopping superset must contain another of its neighbors.
    Returns None if no stopping set of size <= max_size exists.
    """
    if max_size > MAX_STOPPING_SET_BOUND:
        raise ParameterError(
            f"stopping-set bound {max_size} exceeds guard {MAX_STOPPING_SET_BOUND}")
    var_checks: list[list[int]] = [[] for _ in range(n_vars)]
    for c, row in enumerate(rows):
        for v in row:
            var_checks[v].append(c)
    touch = [0] * len(rows)
    best: list = [None]
    bound = [max_size]

    def grow(members: list[int], seed: int, lonely: set):
        if not lonely:
            if best[0] is None or len(members) < len(best[0]):
                best[0] = tuple(sorted(members))
                bound[0] = len(members) - 1
            return
        room = bound[0] - len(members)
        if room <= 0:
            return
        # branch on the once-touched check with the fewest candidates
        pick, cands = None, None
        for c in lonely:
            cs = [v for v in rows[c] if v > seed and touch[c] == 1 and v not in members]
            if pick is None or len(cs) < len(cands):
                pick, cands = c, cs
                if not cs:
                    return
        for v in cands:
            changed = []
            for c in var_checks[v]:
                touch[c] += 1
                changed.append(c)
            new_lonely = set(lonely)
            for c in changed:
                if touch[c] == 1:
                    new_lonely.add(c)
                else:
                    new_lonely.discard(c)
            members.append(v)
            grow(members, seed, new_lonely)
            members.pop()
            for c in changed:
                touch[c] -= 1

    for seed in range(n_vars):
        if bound[0] < 1:
            break
        for c in var_checks[seed]:
            touch[c] += 1
        lonely = {c for c in var_checks[seed] if touch[c] == 1}
        grow([seed], seed, lonely)
        for c in var_checks[seed]:
            touch[c] -= 1
    return best[0]


def find_stopping_sets(code: IraCode, max_size: int = DEFAULT_STOPPING_SET_BOUND) -> DefectReport:
    found = smallest_stopping_set(check_neighbors(code), code.n, max_size)
    return DefectReport(0, 0, None if found is None else len(found), max_size,
                        stopping_set=found or ())


def analyze_defects(code: IraCode, max_size: int = DEFAULT_STOPPING_SET_BOUND) -> DefectReport:
    cyc = count_cycles4(code)
    ss = find_stopping_sets(code, max_size)
    return DefectReport(cyc.cycle4_total, cyc.cycle4_min_degree, ss.min_stopping_set_size,
                        max_size, cyc.multi_edges, ss.stopping_set)


@dataclass(frozen=True)
class Candidate:
    p: int
    s: int
    report: DefectReport

    def key(self) -> tuple:
        return self.report.score() + (self.p, self.s)


@dataclass
class SearchSetup:
    """Everything except (p, s) that defines a candidate code."""

    n: int = 1344
    small: DitherSequence = field(default_factory=reference_table)
    rep_degree: Optional[np.ndarray] = None
    check_degree: Optional[np.ndarray] = None
    shift: str = "skip-first"
    stopping_bound: int = DEFAULT_STOPPING_SET_BOUND

    def __post_init__(self):
        if self.rep_degree is None:
            self.rep_degree = realize_degrees(reference_profile(), 192, self.n)
        if self.check_degree is None:
            self.check_degree = realize_check_degrees(self.n, 576)

    def code(self, p: int, s: int) -> IraCode:
        perm = build_gruenbaum_interleaver(InterleaverSpec(self.n, p, s, self.small), self.shift)
        return build_code(self.rep_degree, perm, self.check_degree)


def evaluate_candidate(setup: SearchSetup, p: int, s: int) -> Candidate:
    return Candidate(p, s, analyze_defects(setup.code(p, s), setup.stopping_bound))


def coprime_candidates(n: int, p_values: Iterable[int], s_values: Iterable[int]):
    s_values = list(s_values)
    for p in p_values:
        if math.gcd(p, n) == 1:
            for s in s_values:
                yield (p, s)


def sample_candidates(n: int, count: int, seed: int = 0,
                      p_range: Optional[range] = None, s_range: Optional[range] = None):
    """`count` distinct random coprime (p, s) pairs, reproducible from `seed`."""
    rng = np.random.default_rng(seed)
    p_range = range(1, n) if p_range is None else p_range
    s_range = range(n) if s_range is None else s_range
    ps = [p for p in p_range if math.gcd(p, n) == 1]
    if not ps or not len(s_range):
        raise ParameterError("empty feasible (p, s) range")
    total = len(ps) * len(s_range)
    count = min(count, total)
    picks = rng.choice(total, size=count, replace=False)
    return [(ps[i // len(s_range)], s_range[i % len(s_range)]) for i in sorted(picks)]


def search_ps(candidates: Iterable[tuple[int, int]], setup: Optional[SearchSetup] = None,
              workers: int = 1, progress=None) -> tuple[Candidate, list[Candidate]]:
    """Score every candidate; return (best, all scored) in input order.

    Non-coprime multipliers are dropped.  The best candidate minimizes
    (4-cycles among minimal-degree nodes, all 4-cycles, -smallest stopping
    set), ties going to smaller p then smaller s.
    """
    setup = setup or SearchSetup()
    cands = [(p, s) for p, s in candidates if math.gcd(p, setup.n) == 1]
    if not cands:
        raise ParameterError("no coprime (p, s) candidates to search")
    results: list[Candidate] = []
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            for i, c in enumerate(pool.map(lambda ps: evaluate_candidate(setup, *ps), cands)):
                results.append(c)
                if progress:
                    progress(i + 1, len(cands))
    else:
        for i, (p, s) in enumerate(cands):
            results.append(evaluate_candidate(setup, p, s))
            if progress:
                progress(i + 1, len(cands))
    best = min(results, key=Candidate.key)
    return best, results


def parse_range(text: str) -> range:
    """``"a:b"`` -> range(a, b); a single integer gives a one-element range."""
    if ":" in text:
        a, b = text.split(":", 1)
        return range(int(a), int(b))
    v = int(text)
    return range(v, v + 1)
