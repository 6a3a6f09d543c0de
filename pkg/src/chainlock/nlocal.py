"""Classical (n-local) bounds for the chain inequality.

Three independent routes to the same number:
  * ``alpha_closed_form``  -- the binomial sum, exact integers.
  * ``alpha_bruteforce``   -- exhaustive evaluation of the edge-assignment
    functional at every one of the 2^n sign assignments, exact integers.
  * ``lhv_exhaustive_max`` -- full deterministic-strategy search at the
    behavior level (small n), going through explicit probability tables.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ShapeError
from .scenario import ChainScenario, SignEncoding, BobInputMap, build_bob_input_map, build_encoding

BRUTEFORCE_MAX_N = 24
EXHAUSTIVE_MAX_N = 4


@dataclass(frozen=True)
class DeterministicStrategy:
    """One classical assignment of +-1 outputs.

    ``alice``/``charlie`` hold one sign per input; ``bobs[m]`` holds the pair
    of signs central party m answers for inputs 1 and 2.
    """

    alice: tuple[int, ...]
    charlie: tuple[int, ...]
    bobs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for group in (self.alice, self.charlie, *self.bobs):
            if any(v not in (-1, 1) for v in group):
                raise ValueError("strategy entries must be +1 or -1")

    def to_json_dict(self) -> dict:
        return {
            "alice": list(self.alice),
            "charlie": list(self.charlie),
            "bobs": [list(pair) for pair in self.bobs],
        }


@dataclass(frozen=True)
class Behavior:
    """Joint conditional probability table P(a, b_vec, c | x, y_vec, z).

    ``table[a, b, c, x, k, z]`` with b the central outcome bits packed big-endian
    and k the 0-based central input-combination index (row k+1 of BobInputMap).
    """

    n: int
    table: np.ndarray

    def __post_init__(self):
        t = self.table
        half = 2 ** (self.n - 1)
        if t.shape != (2, half, 2, self.n, half, self.n):
            raise ShapeError(f"behavior table has shape {t.shape}, expected "
                             f"{(2, half, 2, self.n, half, self.n)}")
        if np.any(t < 0):
            raise ValueError("behavior has negative probabilities")
        sums = t.sum(axis=(0, 1, 2))
        if not np.allclose(sums, 1.0, atol=1e-12):
            raise ValueError("behavior is not normalized per input tuple")


@dataclass(frozen=True)
class BoundReport:
    n: int
    alpha_closed: int
    alpha_bruteforce: int
    witness: DeterministicStrategy
    match: bool
    lhv_max: int | None = None  # behavior-level maximum, when searched

    def to_json_dict(self) -> dict:
        out = {
            "n": self.n,
            "alpha_closed": self.alpha_closed,
            "alpha_bruteforce": self.alpha_bruteforce,
            "match": self.match,
            "witness": self.witness.to_json_dict(),
        }
        if self.lhv_max is not None:
            out["lhv_max"] = self.lhv_max
        return out


def alpha_closed_form(n: int) -> int:
    """Classical ceiling: sum_{l=0}^{floor(n/2)} C(n,l) * (n - 2l)."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return sum(math.comb(n, l) * (n - 2 * l) for l in range(n // 2 + 1))


def _walsh_hadamard(v: np.ndarray) -> np.ndarray:
    """In-place-style unnormalized Walsh-Hadamard transform of a length-2^n vector."""
    v = v.copy()
    size = v.shape[0]
    h = 1
    while h < size:
        v = v.reshape(-1, 2, h)
        top = v[:, 0, :] + v[:, 1, :]
        bot = v[:, 0, :] - v[:, 1, :]
        v = np.stack((top, bot), axis=1).reshape(size)
        h *= 2
    return v


def assignment_scores(n: int) -> np.ndarray:
    """Score of every edge assignment: f(a) = sum_i |sum_x signs[i,x] a_x|.

    Evaluated exactly for all 2^n assignments at once.  With rows and
    assignments written as bit masks, the inner sum is n - 2*popcount(v ^ a),
    so f is the XOR-convolution of the row indicator with |n - 2*popcount|,
    which three Walsh-Hadamard transforms compute in O(n 2^n) exact integer
    arithmetic.  Index bit for input x sits at position n-1-x (first input is
    the most significant bit); bit 0 means sign +1.
    """
    size = 2 ** n
    popcount = np.zeros(size, dtype=np.int64)
    for b in range(n):
        popcount += (np.arange(size) >> b) & 1
    g = np.abs(n - 2 * popcount)
    indicator = np.zeros(size, dtype=np.int64)
    indicator[: size // 2] = 1  # first bit 0 <=> index < 2^(n-1)
    prod = _walsh_hadamard(indicator) * _walsh_hadamard(g)
    conv = _walsh_hadamard(prod)
    assert np.all(conv % size == 0)
    return conv // size


def alpha_bruteforce(n: int) -> tuple[int, tuple[int, ...]]:
    """Exact maximum of the edge-assignment functional and its first maximizer."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n > BRUTEFORCE_MAX_N:
        raise CapacityError(f"alpha_bruteforce supports n <= {BRUTEFORCE_MAX_N}, got {n}")
    scores = assignment_scores(n)
    idx = int(np.argmax(scores))
    witness = tuple(1 - 2 * ((idx >> (n - 1 - x)) & 1) for x in range(n))
    return int(scores[idx]), witness


def bound_report(n: int) -> BoundReport:
    """Closed form vs brute force, with a strategy witness achieving the bound."""
    closed = alpha_closed_form(n)
    brute, edge = alpha_bruteforce(n)
    # charlie mirroring alice makes every J_i a perfect square, so the witness
    # strategy attains beta = alpha with all central parties answering +1
    witness = DeterministicStrategy(
        alice=edge, charlie=edge, bobs=tuple((1, 1) for _ in range(n - 1)))
    return BoundReport(n=n, alpha_closed=closed, alpha_bruteforce=brute,
                       witness=witness, match=closed == brute)


def _input_grids(n: int):
    half = 2 ** (n - 1)
    if n not in _input_grids.cache:
        _input_grids.cache[n] = np.meshgrid(
            np.arange(n), np.arange(half), np.arange(n), indexing="ij")
    return _input_grids.cache[n]


_input_grids.cache = {}


def behavior_from_strategy(strategy: DeterministicStrategy,
                           scenario: ChainScenario) -> Behavior:
    """Deterministic behavior: probability 1 on the outputs the strategy dictates."""
    n = scenario.n
    if (len(strategy.alice) != n or len(strategy.charlie) != n
            or len(strategy.bobs) != n - 1):
        raise ShapeError(f"strategy dimensions do not match n={n}")
    half = 2 ** (n - 1)
    table = np.zeros((2, half, 2, n, half, n))
    a_bits = np.array([(1 - s) // 2 for s in strategy.alice])
    c_bits = np.array([(1 - s) // 2 for s in strategy.charlie])
    bmap = build_bob_input_map(n)
    b_packed = np.empty(half, dtype=np.int64)
    for k in range(half):
        bits = [(1 - strategy.bobs[m][y - 1]) // 2 for m, y in enumerate(bmap.rows[k])]
        b_packed[k] = int("".join(str(b) for b in bits), 2) if bits else 0
    xx, kk, zz = _input_grids(n)
    table[a_bits[xx], b_packed[kk], c_bits[zz], xx, kk, zz] = 1.0
    return Behavior(n=n, table=table)


def beta_of_behavior(behavior: Behavior, enc: SignEncoding | None = None,
                     bob_map: BobInputMap | None = None) -> float:
    """beta = sum_i sqrt(|J_i|) evaluated on an explicit behavior."""
    n = behavior.n
    enc = enc or build_encoding(n)
    half = 2 ** (n - 1)
    parity_b = np.array([(-1.0) ** bin(b).count("1") for b in range(half)])
    sign_a = np.array([1.0, -1.0])
    # E[x, k, z] = sum_{a,b,c} (-1)^(a + |b| + c) P(a,b,c|x,k,z)
    corr = np.einsum("a,b,c,abcxkz->xkz", sign_a, parity_b, sign_a, behavior.table)
    beta = 0.0
    for i in range(half):
        s = enc.signs[i].astype(float)
        beta += math.sqrt(abs(s @ corr[:, i, :] @ s))
    return beta


def _strategy_from_index(n: int, idx: int) -> DeterministicStrategy:
    """Strategy number idx in lexicographic order over (alice, charlie, bobs) bits."""
    nbits = 2 * n + 2 * (n - 1)
    bits = [(idx >> (nbits - 1 - j)) & 1 for j in range(nbits)]
    signs = [1 - 2 * b for b in bits]
    alice = tuple(signs[:n])
    charlie = tuple(signs[n:2 * n])
    bobs = tuple((signs[2 * n + 2 * m], signs[2 * n + 2 * m + 1]) for m in range(n - 1))
    return DeterministicStrategy(alice=alice, charlie=charlie, bobs=bobs)


def _search_range(args: tuple[int, int, int]) -> tuple[float, int]:
    """Best (beta, first index) over a contiguous range of strategy indices."""
    n, start, stop = args
    scenario = ChainScenario(n)
    enc = build_encoding(n)
    best, best_idx = -1.0, -1
    for idx in range(start, stop):
        s = _strategy_from_index(n, idx)
        beta = beta_of_behavior(behavior_from_strategy(s, scenario), enc)
        if beta > best + 1e-12:
            best, best_idx = beta, idx
    return best, best_idx


def lhv_exhaustive_max(n: int, threads: int = 1) -> BoundReport:
    """Maximize beta over every deterministic strategy, via explicit behaviors.

    The search space is 2^(2n) * 4^(n-1) strategies; supported for n in 2..4.
    The result is independent of the worker count: chunks are reduced in
    order and ties keep the lexicographically first witness.
    """
    if not 2 <= n <= EXHAUSTIVE_MAX_N:
        raise CapacityError(
            f"lhv_exhaustive_max supports 2 <= n <= {EXHAUSTIVE_MAX_N}, got {n}")
    total = 2 ** (2 * n + 2 * (n - 1))
    if threads <= 1:
        best, best_idx = _search_range((n, 0, total))
    else:
        chunk = -(-total // threads)
        jobs = [(n, lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_search_range, jobs))
        best, best_idx = -1.0, -1
        for b, idx in results:  # in chunk order, so first maximizer wins ties
            if b > best + 1e-12:
                best, best_idx = b, idx
    closed = alpha_closed_form(n)
    if abs(best - closed) > 1e-9:
        raise AssertionError(
            f"behavior-level maximum {best} disagrees with closed form {closed}")
    brute, _ = alpha_bruteforce(n)
    return BoundReport(n=n, alpha_closed=closed, alpha_bruteforce=brute,
                       witness=_strategy_from_index(n, best_idx),
                       match=closed == brute, lhv_max=round(best))
