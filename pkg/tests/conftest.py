import numpy as np
import pytest

from gruenbaum_ira.code import build_code, realize_check_degrees
from gruenbaum_ira.interleaver import Permutation

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}"
    if detail:
        line += f" -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


def random_toy_code(rng, k, m=None, degrees=(2, 3), pinned=()):
    rep = rng.choice(degrees, size=k)
    E = int(rep.sum())
    if m is None:
        m = max(1, E // 2)
    perm = Permutation(rng.permutation(E))
    return build_code(rep, perm, realize_check_degrees(E, m), pinned)


def chain_code(k, perm_rng=None):
    """Repetition degree 1, check degree 1: a plain accumulator, cycle-free."""
    perm = np.arange(k) if perm_rng is None else perm_rng.permutation(k)
    return build_code([1] * k, Permutation(perm), [1] * k)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
