"""Linear-chain network combinatorics.

A chain with n independent sources has n+1 parties: two edge parties (Alice
and Charlie, n inputs each) and n-1 central parties (one Bob per interior
position, 2 inputs each).  The 2^(n-1) correlator terms are indexed by the
length-n bit strings that start with 0; term i carries the sign vector
((-1)^bit_1, ..., (-1)^bit_n) on the edge observables and selects one input
per central party through the trailing n-1 bits.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ChainScenario:
    """Party/input/output counts for an n-source linear chain."""

    n: int
    edge_inputs: int = field(init=False)
    central_parties: int = field(init=False)
    central_inputs: int = 2
    outcomes: int = 2

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"chain scenario needs at least 2 sources, got n={self.n}")
        object.__setattr__(self, "edge_inputs", self.n)
        object.__setattr__(self, "central_parties", self.n - 1)

    @property
    def terms(self) -> int:
        return 2 ** (self.n - 1)


@dataclass(frozen=True)
class SignEncoding:
    """Sign matrix of the correlator family.

    Row i (0-based internally, 1-based in reports) is ((-1)^{b_1},...,(-1)^{b_n})
    for the i-th length-n bit string b with first bit 0, in ascending binary
    order.  Every row therefore starts with +1.
    """

    n: int
    signs: np.ndarray
    bitstrings: tuple[str, ...]

    def row(self, i: int) -> np.ndarray:
        """Sign vector for 1-based term index i."""
        if not 1 <= i <= len(self.bitstrings):
            raise IndexError(f"term index {i} out of range 1..{len(self.bitstrings)}")
        return self.signs[i - 1]


@dataclass(frozen=True)
class BobInputMap:
    """Central-party input combination per term.

    Row k is the length-(n-1) binary expansion of k-1 (most significant bit
    first) with bit 0 mapped to input 1 and bit 1 to input 2, so row 1 is
    (1,...,1) and row 2^(n-1) is (2,...,2).
    """

    n: int
    rows: tuple[tuple[int, ...], ...]

    def row(self, i: int) -> tuple[int, ...]:
        if not 1 <= i <= len(self.rows):
            raise IndexError(f"term index {i} out of range 1..{len(self.rows)}")
        return self.rows[i - 1]


def build_encoding(n: int) -> SignEncoding:
    """Sign encoding for an n-source chain, rows in ascending binary order."""
    if n < 2:
        raise ValueError(f"chain scenario needs at least 2 sources, got n={n}")
    count = 2 ** (n - 1)
    bitstrings = []
    signs = np.empty((count, n), dtype=np.int64)
    for i in range(count):
        bits = [0] + [(i >> (n - 2 - j)) & 1 for j in range(n - 1)]
        bitstrings.append("".join(str(b) for b in bits))
        signs[i] = [1 - 2 * b for b in bits]
    signs.setflags(write=False)
    return SignEncoding(n=n, signs=signs, bitstrings=tuple(bitstrings))


def build_bob_input_map(n: int) -> BobInputMap:
    """Input combination table for the n-1 central parties."""
    if n < 2:
        raise ValueError(f"chain scenario needs at least 2 sources, got n={n}")
    rows = []
    for k in range(2 ** (n - 1)):
        rows.append(tuple(((k >> (n - 2 - m)) & 1) + 1 for m in range(n - 1)))
    return BobInputMap(n=n, rows=tuple(rows))


def bob_inputs_for_term(n: int, i: int) -> tuple[int, ...]:
    """Central-party inputs used by term i (1-based)."""
    if not 1 <= i <= 2 ** (n - 1):
        raise IndexError(f"term index {i} out of range 1..{2 ** (n - 1)}")
    return build_bob_input_map(n).row(i)


def scenario_to_json_dict(n: int) -> dict:
    """JSON-ready description of the scenario (signs and bob inputs)."""
    enc = build_encoding(n)
    bmap = build_bob_input_map(n)
    return {
        "n": n,
        "signs": enc.signs.tolist(),
        "bob_inputs": [list(r) for r in bmap.rows],
    }
