"""Irregular repeat-accumulate code: degree realization, Tanner graph, encoder.

Information bit ``v`` is repeated ``rep_degree[v]`` times; the repeated
stream (edges in information-node order) is permuted into combiner slots,
consecutive slots are XORed into one combiner output per check, and the
combiner outputs go through the accumulator ``1/(1+D)`` to give the parity
bits.  Codewords are systematic: ``k`` information bits followed by ``m``
parity bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConstructionError, ParameterError, StructureError
from .interleaver import Permutation, reference_interleaver, read_permutation

REF_K = 192
REF_E = 1344
REF_M = 576
REF_PINNED = ((3, 1), (9, 1), (11, 1), (18, 1), (19, 1), (26, 1), (27, 1), (74, 1))

# Printed repetition profile; the two x^7 terms are merged on construction.
REF_PROFILE_TERMS = ((3, 0.2), (7, 0.4), (11, 0.1), (7, 0.15), (29, 0.1), (31, 0.05))


@dataclass(frozen=True)
class DegreeProfile:
    """Edge-perspective repetition profile ``sum_d lambda_d x^d``."""

    terms: tuple[tuple[int, float], ...]

    def __post_init__(self):
        merged: dict[int, float] = {}
        for d, f in self.terms:
            d = int(d)
            if d < 2:
                raise ParameterError(f"repetition degree {d} < 2")
            if not 0 < f <= 1:
                raise ParameterError(f"fraction {f} outside (0, 1]")
            merged[d] = merged.get(d, 0.0) + float(f)
        total = sum(merged.values())
        if abs(total - 1.0) > 1e-9:
            raise ParameterError(f"profile fractions sum to {total}, not 1")
        object.__setattr__(self, "terms", tuple(sorted(merged.items())))

    @property
    def degrees(self) -> list[int]:
        return [d for d, _ in self.terms]

    def node_fractions(self) -> dict[int, float]:
        w = {d: f / d for d, f in self.terms}
        s = sum(w.values())
        return {d: v / s for d, v in w.items()}


def reference_profile() -> DegreeProfile:
    return DegreeProfile(REF_PROFILE_TERMS)


def _count_vectors(degrees: list[int], k: int, E: int):
    """All non-negative integer (n_d) with sum n_d = k and sum d*n_d = E."""
    if len(degrees) == 1:
        if degrees[0] * k == E:
            yield (k,)
        return
    lo, hi = degrees[0], degrees[1]
    rest = degrees[2:]

    def fill(i, nodes, edges, acc):
        # every remaining node costs at least `lo` edges
        if nodes < 0 or edges < lo * nodes:
            return
        if i == len(rest):
            num = edges - lo * nodes
            if num % (hi - lo) == 0 and num // (hi - lo) <= nodes:
                n_hi = num // (hi - lo)
                yield (nodes - n_hi, n_hi) + acc
            return
        d = rest[i]
        for c in range(min(nodes, edges // d) + 1):
            yield from fill(i + 1, nodes - c, edges - d * c, acc + (c,))

    yield from fill(0, k, E, ())


@lru_cache(maxsize=32)
def _best_counts(profile: "DegreeProfile", k: int, E: int):
    degrees = profile.degrees
    target = dict(profile.terms)
    node_round = {d: round(k * f) for d, f in profile.node_fractions().items()}
    best_key, best = None, None
    for counts in _count_vectors(degrees, k, E):
        l1 = sum(abs(d * c / E - target[d]) for d, c in zip(degrees, counts))
        tie = sum(abs(c - node_round[d]) for d, c in zip(degrees, counts))
        key = (round(l1, 12), tie, tuple(-c for c in counts))
        if best_key is None or key < best_key:
            best_key, best = key, counts
    return best


def realize_degrees(profile: DegreeProfile, k: int, E: int) -> np.ndarray:
    """Integer repetition degrees for ``k`` nodes and ``E`` edges.

    Among all count vectors meeting both totals exactly, picks the one whose
    edge fractions are L1-closest to the profile. Ties go to the vector
    closest to the rounded node-perspective counts, then to the one with
    more nodes at lower degrees.  Returns a length-``k`` array sorted
    ascending.
    """
    degrees = profile.degrees
    best = _best_counts(profile, int(k), int(E))
    if best is None:
        lo, hi = min(degrees) * k, max(degrees) * k
        raise ConstructionError(
            f"no integer realization of degrees {degrees} with {k} nodes and {E} edges "
            f"(achievable edge totals lie in [{lo}, {hi}] subject to divisibility; "
            f"gap to nearest bound {max(lo - E, E - hi, 0)})")
    return np.repeat(np.array(degrees, dtype=np.int64), best)


def realize_check_degrees(E: int, m: int) -> np.ndarray:
    """Check degrees from {floor(E/m), ceil(E/m)} spread evenly along the chain.

    Check ``j`` takes the larger degree when ``(j*h) mod m < h`` where ``h``
    is the number of larger-degree checks; for E=1344, m=576 this repeats
    the block (3, 2, 2).
    """
    if m <= 0 or E < m:
        raise ParameterError(f"need 0 < m <= E, got E={E}, m={m}")
    base, high = divmod(E, m)
    j = np.arange(m, dtype=np.int64)
    return base + ((j * high) % m < high).astype(np.int64)


@dataclass(frozen=True, eq=False)
class IraCode:
    rep_degree: np.ndarray
    perm: Permutation
    check_degree: np.ndarray
    pinned: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        rep = np.asarray(self.rep_degree, dtype=np.int64)
        chk = np.asarray(self.check_degree, dtype=np.int64)
        rep.setflags(write=False)
        chk.setflags(write=False)
        object.__setattr__(self, "rep_degree", rep)
        object.__setattr__(self, "check_degree", chk)
        pins = tuple((int(p), int(b)) for p, b in self.pinned)
        object.__setattr__(self, "pinned", tuple(sorted(pins)))

    @property
    def k(self) -> int:
        return self.rep_degree.size

    @property
    def m(self) -> int:
        return self.check_degree.size

    @property
    def n(self) -> int:
        return self.k + self.m

    @property
    def E(self) -> int:
        return self.perm.n

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def payload_bits(self) -> int:
        return self.k - len(self.pinned)

    @cached_property
    def pinned_positions(self) -> np.ndarray:
        return np.array([p for p, _ in self.pinned], dtype=np.int64)

    @cached_property
    def pinned_values(self) -> np.ndarray:
        return np.array([b for _, b in self.pinned], dtype=np.uint8)

    @cached_property
    def free_positions(self) -> np.ndarray:
        mask = np.ones(self.k, dtype=bool)
        mask[self.pinned_positions] = False
        return np.flatnonzero(mask)

    @cached_property
    def edge_info(self) -> np.ndarray:
        """Information node of each repetition edge."""
        return np.repeat(np.arange(self.k, dtype=np.int64), self.rep_degree)

    @cached_property
    def slot_info(self) -> np.ndarray:
        """Information node feeding each combiner slot."""
        out = np.empty(self.E, dtype=np.int64)
        out[self.perm.map] = self.edge_info
        return out

    @cached_property
    def slot_edge(self) -> np.ndarray:
        out = np.empty(self.E, dtype=np.int64)
        out[self.perm.map] = np.arange(self.E)
        return out

    @cached_property
    def check_ptr(self) -> np.ndarray:
        return np.concatenate(([0], np.cumsum(self.check_degree))).astype(np.int64)

    def check_info_nodes(self, j: int) -> np.ndarray:
        return self.slot_info[self.check_ptr[j]:self.check_ptr[j + 1]]

    def parity_check_matrix(self) -> np.ndarray:
        """Dense GF(2) parity-check matrix over (information, parity) bits."""
        H = np.zeros((self.m, self.n), dtype=np.uint8)
        checks = np.repeat(np.arange(self.m), self.check_degree)
        np.add.at(H, (checks, self.slot_info), 1)
        H %= 2
        j = np.arange(self.m)
        H[j, self.k + j] = 1
        H[j[1:], self.k + j[:-1]] = 1
        return H


@dataclass(frozen=True)
class Codeword:
    systematic: np.ndarray
    parity: np.ndarray

    @property
    def bits(self) -> np.ndarray:
        return np.concatenate((self.systematic, self.parity))


def build_code(rep: Sequence[int], perm: Permutation, check: Sequence[int],
               pinned: Sequence[tuple[int, int]] = ()) -> IraCode:
    rep = np.asarray(rep, dtype=np.int64)
    check = np.asarray(check, dtype=np.int64)
    if not isinstance(perm, Permutation):
        perm = Permutation(perm)
    if rep.min(initial=1) < 1 or check.min(initial=1) < 1:
        raise ConstructionError("node degrees must be positive")
    if not (perm.n == rep.sum() == check.sum()):
        raise ConstructionError(
            f"edge count mismatch: perm {perm.n}, repetition {rep.sum()}, checks {check.sum()}")
    positions = [int(p) for p, _ in pinned]
    if len(set(positions)) != len(positions):
        raise ConstructionError("pinned positions must be distinct")
    for p, b in pinned:
        if not 0 <= p < rep.size:
            raise ConstructionError(f"pinned position {p} outside 0..{rep.size - 1}")
        if b not in (0, 1):
            raise ConstructionError(f"pinned value {b} is not a bit")
    return IraCode(rep, perm, check, tuple(pinned))


def reference_code(small: str = "ref", shift: str = "skip-first", pins: bool = True,
               perm: Permutation | None = None) -> IraCode:
    """The k=192, rate-1/4 instance with 1344 interleaver edges."""
    rep = realize_degrees(reference_profile(), REF_K, REF_E)
    check = realize_check_degrees(REF_E, REF_M)
    if perm is None:
        perm = reference_interleaver(small, shift)
    return build_code(rep, perm, check, REF_PINNED if pins else ())


def accumulate(bits) -> np.ndarray:
    """Running XOR: y_i = x_i ^ y_{i-1}."""
    x = np.asarray(bits, dtype=np.uint8)
    return (np.cumsum(x, dtype=np.int64) & 1).astype(np.uint8)


def information_vector(code: IraCode, payload) -> np.ndarray:
    payload = np.asarray(payload, dtype=np.uint8).ravel()
    if payload.size != code.payload_bits:
        raise ParameterError(f"payload has {payload.size} bits, expected {code.payload_bits}")
    u = np.empty(code.k, dtype=np.uint8)
    u[code.free_positions] = payload
    u[code.pinned_positions] = code.pinned_values
    return u


def combiner(code: IraCode, u) -> np.ndarray:
    stream = np.asarray(u, dtype=np.int64)[code.slot_info]
    sums = np.add.reduceat(stream, code.check_ptr[:-1])
    return (sums & 1).astype(np.uint8)


def encode(code: IraCode, payload) -> Codeword:
    u = information_vector(code, payload)
    return Codeword(u, accumulate(combiner(code, u)))


def encode_batch(code: IraCode, payloads) -> np.ndarray:
    """Encode a (frames, payload_bits) array into (frames, n) codewords."""
    payloads = np.atleast_2d(np.asarray(payloads, dtype=np.uint8))
    if payloads.shape[1] != code.payload_bits:
        raise ParameterError(f"payload has {payloads.shape[1]} bits, expected {code.payload_bits}")
    u = np.empty((payloads.shape[0], code.k), dtype=np.int64)
    u[:, code.free_positions] = payloads
    u[:, code.pinned_positions] = code.pinned_values
    comb = np.add.reduceat(u[:, code.slot_info], code.check_ptr[:-1], axis=1) & 1
    parity = np.cumsum(comb, axis=1) & 1
    return np.concatenate((u, parity), axis=1).astype(np.uint8)


def check_codeword(code: IraCode, word, check_pins: bool = True) -> bool:
    """All parity constraints hold and, unless disabled, pinned bits carry their values."""
    if isinstance(word, Codeword):
        u, p = np.asarray(word.systematic), np.asarray(word.parity)
    else:
        bits = np.asarray(word, dtype=np.uint8).ravel()
        if bits.size != code.n:
            raise StructureError(f"word length {bits.size} != n={code.n}")
        u, p = bits[:code.k], bits[code.k:]
    if u.size != code.k or p.size != code.m:
        raise StructureError("word dimensions do not match code")
    if check_pins and np.any(u[code.pinned_positions] != code.pinned_values):
        return False
    prev = np.concatenate(([0], p[:-1])).astype(np.uint8)
    return bool(np.all(combiner(code, u) ^ p ^ prev == 0))


def pins_respected(code: IraCode, word) -> bool:
    bits = word.bits if isinstance(word, Codeword) else np.asarray(word)
    return bool(np.all(bits[code.pinned_positions] == code.pinned_values))


def write_code(code: IraCode, path: str | Path, perm_file: str | None = None) -> None:
    """Plain-text code description, one ``key value...`` line per field.

    The permutation is written inline unless ``perm_file`` names a file
    holding it (which the caller is then responsible for writing).
    """
    lines = [
        "# irregular repeat-accumulate code",
        f"k {code.k}",
        f"m {code.m}",
        f"E {code.E}",
        "rep_degree " + " ".join(map(str, code.rep_degree)),
        "check_degree " + " ".join(map(str, code.check_degree)),
        "pinned " + " ".join(f"{p}:{b}" for p, b in code.pinned),
    ]
    if perm_file is not None:
        lines.append(f"perm_file {perm_file}")
    else:
        lines.append("perm " + " ".join(map(str, code.perm.map)))
    Path(path).write_text("\n".join(lines) + "\n")


def read_code(path: str | Path) -> IraCode:
    fields: dict[str, list[str]] = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, *vals = line.split()
        fields[key] = vals
    try:
        rep = [int(v) for v in fields["rep_degree"]]
        check = [int(v) for v in fields["check_degree"]]
    except KeyError as exc:
        raise StructureError(f"{path}: missing field {exc}") from None
    if "perm" in fields:
        perm = Permutation([int(v) for v in fields["perm"]])
    elif "perm_file" in fields:
        ref = Path(fields["perm_file"][0])
        if not ref.is_absolute():
            ref = Path(path).parent / ref
        perm = read_permutation(ref)
    else:
        raise StructureError(f"{path}: no perm or perm_file field")
    pinned = []
    for tok in fields.get("pinned", []):
        p, b = tok.split(":")
        pinned.append((int(p), int(b)))
    code = build_code(rep, perm, check, pinned)
    for key, val in (("k", code.k), ("m", code.m), ("E", code.E)):
        if key in fields and int(fields[key][0]) != val:
            raise StructureError(f"{path}: {key}={fields[key][0]} disagrees with contents ({val})")
    return code
