"""Dithered relative-prime interleaver built from a Gruenbaum dither table."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from pathlib import Path

import numpy as np

from .errors import ParameterError, StructureError

GR25 = (7, 20, 12, 4, 9, 21, 0, 18, 11, 6, 16, 3, 19, 23, 10, 15, 1, 24,
        17, 13, 22, 2, 8, 14, 5)

# Small table hard-coded in the reference interleaver routine.  It is not Gr24
# and not its inverse; kept verbatim because it defines the simulated code.
REF_TABLE = (0, 14, 9, 22, 18, 2, 15, 5, 10, 17, 4, 13, 7, 1, 21, 12, 16, 23,
              6, 19, 11, 3, 8, 20)

REF_N = 1344
REF_P = 173
REF_S = 1184

SHIFT_MODES = ("skip-first", "cyclic", "none")


def is_bijection(values, n: int | None = None) -> bool:
    """Counting test: every index 0..n-1 occurs exactly once."""
    arr = np.asarray(values, dtype=np.int64).ravel()
    n = arr.size if n is None else n
    if arr.size != n:
        return False
    if n and (arr.min() < 0 or arr.max() >= n):
        return False
    return bool(np.all(np.bincount(arr, minlength=n) == 1))


@dataclass(frozen=True)
class DitherSequence:
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if not is_bijection(self.values):
            raise StructureError("dither sequence is not a permutation of 0..L-1")

    @property
    def L(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


class Permutation:
    """Immutable bijection on 0..n-1 stored as an index array."""

    def __init__(self, mapping):
        arr = np.array(mapping, dtype=np.int64).ravel()
        if not is_bijection(arr):
            raise StructureError("mapping is not a bijection")
        arr.setflags(write=False)
        self._map = arr

    @property
    def map(self) -> np.ndarray:
        return self._map

    @property
    def n(self) -> int:
        return self._map.size

    def __len__(self) -> int:
        return self._map.size

    def __getitem__(self, i):
        return self._map[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self._map, other._map)

    def __hash__(self):
        return hash(self._map.tobytes())

    def __repr__(self) -> str:
        return f"Permutation(n={self.n})"

    def compose(self, other: "Permutation") -> "Permutation":
        """Return self after other: i -> self[other[i]]."""
        if other.n != self.n:
            raise StructureError("length mismatch")
        return Permutation(self._map[other._map])

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))


@dataclass(frozen=True)
class InterleaverSpec:
    n: int
    p: int
    s: int
    small: DitherSequence

    def __post_init__(self):
        if self.n <= 0:
            raise ParameterError("n must be positive")
        if gcd(self.p, self.n) != 1:
            raise ParameterError(f"gcd(p={self.p}, n={self.n}) != 1")
        if not 0 <= self.s < self.n:
            raise ParameterError(f"offset s={self.s} outside 0..{self.n - 1}")
        if self.n % self.small.L:
            raise ParameterError(
                f"dither length {self.small.L} does not divide n={self.n}")

    @property
    def group_len(self) -> int:
        return self.small.L


def gr25() -> DitherSequence:
    return DitherSequence(GR25)


def gr24() -> DitherSequence:
    return DitherSequence(tuple(v for v in GR25 if v != 24))


def reference_table() -> DitherSequence:
    return DitherSequence(REF_TABLE)


def reference_spec(small: str = "ref") -> InterleaverSpec:
    """The (n, p, s) = (1344, 173, 1184) instance with a named small table."""
    tables = {"ref": reference_table, "gr24": gr24}
    if small not in tables:
        raise ParameterError(f"unknown small table {small!r}; use one of {sorted(tables)}")
    return InterleaverSpec(REF_N, REF_P, REF_S, tables[small]())


def rp_index(i: int, p: int, s: int, n: int) -> int:
    if gcd(p, n) != 1:
        raise ParameterError(f"gcd(p={p}, n={n}) != 1")
    if not 0 <= i < n:
        raise ParameterError(f"index {i} outside 0..{n - 1}")
    return (p * i + s) % n


def build_gruenbaum_interleaver(spec: InterleaverSpec, shift: str = "skip-first") -> Permutation:
    """Dithered relative-prime interleaver.

    Stage 1 permutes indices inside each block of ``group_len`` with the
    small table, stage 2 maps the result through ``(s + i*p) mod n``, stage 3
    walks the block heads swapping each head's entry with the previous
    head's.

    shift:
        ``"skip-first"`` starts the walk with no previous head (the first
        swap is skipped), ``"cyclic"`` treats the last head as the previous
        head of block 0, ``"none"`` omits stage 3.
    """
    if shift not in SHIFT_MODES:
        raise ParameterError(f"shift must be one of {SHIFT_MODES}, got {shift!r}")
    n, L = spec.n, spec.group_len
    i = np.arange(n, dtype=np.int64)
    table = np.asarray(spec.small.values, dtype=np.int64)
    ptr = (i - i % L) + table[i % L]
    dst = (spec.s + ptr * spec.p) % n
    if shift != "none":
        heads = list(range(0, n, L))
        prev = heads[-1] if shift == "cyclic" else -1
        for h in heads:
            if prev >= 0:
                dst[prev], dst[h] = dst[h], dst[prev]
            prev = h
    return Permutation(dst)


def reference_interleaver(small: str = "ref", shift: str = "skip-first") -> Permutation:
    return build_gruenbaum_interleaver(reference_spec(small), shift=shift)


def relative_prime_permutation(n: int, p: int, s: int) -> Permutation:
    if gcd(p, n) != 1:
        raise ParameterError(f"gcd(p={p}, n={n}) != 1")
    return Permutation((p * np.arange(n, dtype=np.int64) + s) % n)


def invert(perm: Permutation) -> Permutation:
    if not isinstance(perm, Permutation):
        perm = Permutation(perm)
    inv = np.empty(perm.n, dtype=np.int64)
    inv[perm.map] = np.arange(perm.n)
    return Permutation(inv)


def s_random_metric(seq) -> int:
    """Minimum of |i - j| + |P(i) - P(j)| over all index pairs i != j."""
    if isinstance(seq, Permutation):
        vals = seq.map
    elif isinstance(seq, DitherSequence):
        vals = np.asarray(seq.values, dtype=np.int64)
    else:
        vals = np.asarray(seq, dtype=np.int64)
    if not is_bijection(vals):
        raise StructureError("s-random metric needs a bijection")
    n = vals.size
    if n < 2:
        raise ParameterError("need at least two entries")
    best = None
    # row-by-row over the upper triangle keeps memory at O(n)
    for i in range(n - 1):
        d = (np.arange(i + 1, n) - i) + np.abs(vals[i + 1:] - vals[i])
        m = int(d.min())
        if best is None or m < best:
            best = m
    return best


def write_permutation(perm: Permutation, path: str | Path) -> None:
    body = "\n".join(str(int(v)) for v in perm.map)
    Path(path).write_text(f"{perm.n}\n{body}\n")


def read_permutation(path: str | Path) -> Permutation:
    tokens = Path(path).read_text().split()
    if not tokens:
        raise StructureError(f"{path}: empty permutation file")
    n = int(tokens[0])
    values = [int(t) for t in tokens[1:]]
    if len(values) != n:
        raise StructureError(f"{path}: header says {n} entries, found {len(values)}")
    return Permutation(values)
