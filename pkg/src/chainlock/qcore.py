"""Quantum numerics for the chain: states, observables, and two correlator evaluators.

The dense evaluator applies every local operator to the full state vector.
The contracted evaluator exploits that the state is a product of maximally
entangled links: each link of local dimension d turns the expectation into a
d x d matrix transfer, so a full (n+1)-party correlator costs a handful of
d^4 contractions instead of anything exponential in the qubit count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (CapacityError, NumericalConsistencyError, ShapeError,
                     UnsupportedStateError)
from .scenario import ChainScenario, SignEncoding, BobInputMap, build_bob_input_map, build_encoding

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

DENSE_QUBIT_LIMIT = 24
AUTO_DENSE_QUBIT_LIMIT = 12
HERMITIAN_TOL = 1e-12
DICHOTOMIC_TOL = 1e-10
IMAG_TOL = 1e-10


def kron_all(*ops: np.ndarray) -> np.ndarray:
    out = np.array([[1.0]], dtype=complex)
    for o in ops:
        out = np.kron(out, o)
    return out


@dataclass(frozen=True)
class Observable:
    """Hermitian dichotomic operator (eigenvalues +-1)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"observable must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValueError("observable is not Hermitian")
        if np.linalg.norm(m @ m - np.eye(m.shape[0]), 2) > DICHOTOMIC_TOL:
            raise ValueError("observable is not dichotomic (square != identity)")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class ChainLayout:
    """Qubit bookkeeping for the chain state.

    Each of the n sources emits 2m consecutive qubits: the left half goes to
    the upstream party, the right half to the downstream one.  Alice owns the
    first m qubits, Bob_t the contiguous block [(2t-1)m, (2t+1)m), Charlie
    the last m.  Qubit 0 is the most significant bit of the amplitude index.
    """

    n: int
    qubits_per_half: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")
        if self.qubits_per_half < 1:
            raise ValueError("need at least one qubit per half")

    @property
    def total_qubits(self) -> int:
        return 2 * self.qubits_per_half * self.n

    @property
    def link_dim(self) -> int:
        return 2 ** self.qubits_per_half

    def alice_slot(self) -> tuple[int, int]:
        return 0, self.qubits_per_half

    def bob_slot(self, t: int) -> tuple[int, int]:
        """Qubit block of central party t (1-based)."""
        if not 1 <= t <= self.n - 1:
            raise IndexError(f"central party index {t} out of range 1..{self.n - 1}")
        m = self.qubits_per_half
        return (2 * t - 1) * m, 2 * m

    def charlie_slot(self) -> tuple[int, int]:
        m = self.qubits_per_half
        return (2 * self.n - 1) * m, m


def default_layout(n: int, qubits_per_half: int | None = None) -> ChainLayout:
    """floor(n/2) Bell pairs per source unless overridden."""
    return ChainLayout(n=n, qubits_per_half=qubits_per_half or max(1, n // 2))


@dataclass(frozen=True)
class NetworkState:
    amplitudes: np.ndarray
    layout: ChainLayout
    bell_links: bool = False  # set by bell_chain_state

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (2 ** self.layout.total_qubits,):
            raise ShapeError("state length does not match layout")
        if abs(np.linalg.norm(amp) - 1.0) > 1e-12:
            raise ValueError("state is not normalized")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)


def bell_chain_state(n: int, qubits_per_half: int | None = None) -> NetworkState:
    """Product of m*n maximally entangled pairs arranged per ChainLayout."""
    layout = default_layout(n, qubits_per_half)
    if layout.total_qubits > DENSE_QUBIT_LIMIT:
        raise CapacityError(
            f"dense state needs {layout.total_qubits} qubits, limit is {DENSE_QUBIT_LIMIT}")
    d = layout.link_dim
    source = np.eye(d, dtype=complex).reshape(-1) / math.sqrt(d)  # vec(I)/sqrt(d)
    amp = np.array([1.0], dtype=complex)
    for _ in range(n):
        amp = np.kron(amp, source)
    return NetworkState(amplitudes=amp, layout=layout, bell_links=True)


@dataclass(frozen=True)
class QuantumModel:
    scenario: ChainScenario
    layout: ChainLayout
    state: NetworkState
    alice: tuple[Observable, ...]
    bobs: tuple[tuple[Observable, Observable], ...]
    charlie: tuple[Observable, ...]

    def __post_init__(self):
        n, d = self.scenario.n, self.layout.link_dim
        if self.layout.n != n:
            raise ShapeError("layout and scenario disagree on n")
        if len(self.alice) != n or len(self.charlie) != n:
            raise ShapeError(f"edge parties need {n} observables each")
        if len(self.bobs) != n - 1:
            raise ShapeError(f"need {n - 1} central parties")
        for o in (*self.alice, *self.charlie):
            if o.dim != d:
                raise ShapeError(f"edge observable dim {o.dim} != {d}")
        for pair in self.bobs:
            if len(pair) != 2:
                raise ShapeError("each central party needs exactly 2 observables")
            for o in pair:
                if o.dim != d * d:
                    raise ShapeError(f"central observable dim {o.dim} != {d * d}")

    @property
    def n(self) -> int:
        return self.scenario.n


def make_model(n: int, alice, bobs, charlie,
               qubits_per_half: int | None = None) -> QuantumModel:
    """Wrap raw matrices into a QuantumModel on the Bell chain."""
    layout = default_layout(n, qubits_per_half)
    return QuantumModel(
        scenario=ChainScenario(n),
        layout=layout,
        state=bell_chain_state(n, layout.qubits_per_half),
        alice=tuple(Observable(a) for a in alice),
        bobs=tuple((Observable(p[0]), Observable(p[1])) for p in bobs),
        charlie=tuple(Observable(c) for c in charlie),
    )


def jordan_wigner_set(n_obs: int) -> list[Observable]:
    """n_obs mutually anticommuting dichotomic observables on ceil((n_obs-1)/2) qubits.

    Site j contributes the pair Z^(j-1) X I... and Z^(j-1) Y I...; an odd count
    appends Z^m.  The two-observable set is (X, Z), the standard CHSH pair.
    """
    if n_obs < 1:
        raise ValueError("need at least one observable")
    if n_obs == 1:
        return [Observable(PAULI_X)]
    if n_obs == 2:
        return [Observable(PAULI_X), Observable(PAULI_Z)]
    m = max(1, -(-(n_obs - 1) // 2))
    mats = []
    for j in range(m):
        pre = [PAULI_Z] * j
        post = [PAULI_I] * (m - j - 1)
        mats.append(kron_all(*pre, PAULI_X, *post))
        mats.append(kron_all(*pre, PAULI_Y, *post))
    if n_obs % 2 == 1:
        mats.append(kron_all(*([PAULI_Z] * m)))
    return [Observable(o) for o in mats[:n_obs]]


def anticommutator_report(observables) -> np.ndarray:
    """Entry (j,k) = operator norm of {O_j, O_k}; diagonal is 2 for dichotomic sets."""
    mats = [o.matrix if isinstance(o, Observable) else np.asarray(o) for o in observables]
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1:
        raise ShapeError(f"observables have mixed dimensions {sorted(dims)}")
    k = len(mats)
    out = np.empty((k, k))
    for a in range(k):
        for b in range(k):
            out[a, b] = np.linalg.norm(mats[a] @ mats[b] + mats[b] @ mats[a], 2)
    return out


# ---------------------------------------------------------------------------
# dense evaluator

def apply_to_slot(amplitudes: np.ndarray, op: np.ndarray, start: int, count: int,
                  total: int) -> np.ndarray:
    """Apply a 2^count-dim operator to the contiguous qubit block [start, start+count)."""
    dim = 2 ** count
    if op.shape != (dim, dim):
        raise ShapeError(f"operator shape {op.shape} does not fit a {count}-qubit slot")
    pre, post = 2 ** start, 2 ** (total - start - count)
    st = amplitudes.reshape(pre, dim, post)
    return np.einsum("ts,psq->ptq", op, st).reshape(-1)


def _real_or_raise(value: complex, what: str) -> float:
    if abs(value.imag) > IMAG_TOL:
        raise NumericalConsistencyError(f"{what} has imaginary part {value.imag:.3e}")
    return float(value.real)


def correlator_dense(model: QuantumModel, x: int, bob_inputs, z: int) -> float:
    """<A_x B^1_{y_1} ... B^(n-1)_{y_(n-1)} C_z> by direct statevector application.

    x, z and the bob inputs are 1-based, matching the term conventions.
    """
    n, lay = model.n, model.layout
    if not (1 <= x <= n and 1 <= z <= n):
        raise IndexError(f"edge inputs must lie in 1..{n}")
    if len(bob_inputs) != n - 1 or any(y not in (1, 2) for y in bob_inputs):
        raise ShapeError(f"need {n - 1} central inputs from {{1,2}}")
    total = lay.total_qubits
    amp = model.state.amplitudes
    phi = apply_to_slot(amp, model.alice[x - 1].matrix, *lay.alice_slot(), total)
    for t in range(1, n):
        phi = apply_to_slot(phi, model.bobs[t - 1][bob_inputs[t - 1] - 1].matrix,
                            *lay.bob_slot(t), total)
    phi = apply_to_slot(phi, model.charlie[z - 1].matrix, *lay.charlie_slot(), total)
    return _real_or_raise(np.vdot(amp, phi), "correlator")


# ---------------------------------------------------------------------------
# chain-contraction evaluator

def transfer_forward(env: np.ndarray, bob: np.ndarray, d: int) -> np.ndarray:
    """Push a d x d left environment through one central operator."""
    T = bob.reshape(d, d, d, d)  # [bra left-leg, bra right-leg, ket left-leg, ket right-leg]
    return np.einsum("ab,acbd->cd", env, T)


def transfer_backward(env: np.ndarray, bob: np.ndarray, d: int) -> np.ndarray:
    """Pull a d x d right environment back through one central operator."""
    T = bob.reshape(d, d, d, d)
    return np.einsum("cd,acbd->ab", env, T)


def chain_expectation(a_mat: np.ndarray, bob_mats, c_mat: np.ndarray, d: int) -> complex:
    """<a (x) bobs (x) c> on a chain of maximally entangled links of dimension d.

    On each link <phi| P (x) Q |phi> = tr(P Q^T)/d, which threads the whole
    correlator into d x d transfers with one global 1/d^n factor.
    """
    n = len(bob_mats) + 1
    env = np.asarray(a_mat, dtype=complex)
    for b in bob_mats:
        env = transfer_forward(env, np.asarray(b, dtype=complex), d)
    return np.einsum("ab,ab->", env, np.asarray(c_mat, dtype=complex)) / d ** n


def _require_bell_links(model: QuantumModel):
    if not model.state.bell_links:
        raise UnsupportedStateError(
            "contracted evaluator requires a product-of-Bell-links state; "
            "use the dense evaluator for general states")


def correlator_contracted(model: QuantumModel, x: int, bob_inputs, z: int) -> float:
    """Same contract as correlator_dense, evaluated by chain contraction."""
    _require_bell_links(model)
    n, d = model.n, model.layout.link_dim
    if not (1 <= x <= n and 1 <= z <= n):
        raise IndexError(f"edge inputs must lie in 1..{n}")
    if len(bob_inputs) != n - 1 or any(y not in (1, 2) for y in bob_inputs):
        raise ShapeError(f"need {n - 1} central inputs from {{1,2}}")
    bob_mats = [model.bobs[t][bob_inputs[t] - 1].matrix for t in range(n - 1)]
    val = chain_expectation(model.alice[x - 1].matrix, bob_mats,
                            model.charlie[z - 1].matrix, d)
    return _real_or_raise(val, "correlator")


def edge_combinations(model: QuantumModel, enc: SignEncoding):
    """Signed edge sums Y^A_i and Y^C_i for every term, as raw matrices."""
    n = model.n
    ya, yc = [], []
    for i in range(2 ** (n - 1)):
        s = enc.signs[i]
        ya.append(sum(s[x] * model.alice[x].matrix for x in range(n)))
        yc.append(sum(s[z] * model.charlie[z].matrix for z in range(n)))
    return ya, yc


def _resolve_evaluator(model: QuantumModel, evaluator: str) -> str:
    if evaluator == "auto":
        if (model.state.bell_links
                and model.layout.total_qubits > AUTO_DENSE_QUBIT_LIMIT):
            return "contracted"
        return "dense"
    if evaluator not in ("dense", "contracted"):
        raise ValueError(f"unknown evaluator {evaluator!r}")
    return evaluator


def term_values(model: QuantumModel, enc: SignEncoding | None = None,
                bob_map: BobInputMap | None = None,
                evaluator: str = "auto") -> np.ndarray:
    """J_i = sum_{x,z} signs[i,x] signs[i,z] E(x, map[i], z) for every term."""
    n = model.n
    enc = enc or build_encoding(n)
    bob_map = bob_map or build_bob_input_map(n)
    which = _resolve_evaluator(model, evaluator)
    half = 2 ** (n - 1)
    js = np.empty(half)
    if which == "dense":
        for i in range(half):
            combo = bob_map.rows[i]
            s = enc.signs[i]
            total = 0.0
            for x in range(1, n + 1):
                for z in range(1, n + 1):
                    total += s[x - 1] * s[z - 1] * correlator_dense(model, x, combo, z)
            js[i] = total
    else:
        _require_bell_links(model)
        d = model.layout.link_dim
        ya, yc = edge_combinations(model, enc)
        for i in range(half):
            combo = bob_map.rows[i]
            bob_mats = [model.bobs[t][combo[t] - 1].matrix for t in range(n - 1)]
            js[i] = _real_or_raise(chain_expectation(ya[i], bob_mats, yc[i], d),
                                   f"term {i + 1}")
    return js


def beta_quantum(model: QuantumModel, enc: SignEncoding | None = None,
                 bob_map: BobInputMap | None = None,
                 evaluator: str = "auto") -> tuple[float, list[float]]:
    """beta = sum_i sqrt(|J_i|), with the per-term values."""
    js = term_values(model, enc, bob_map, evaluator)
    return float(np.sum(np.sqrt(np.abs(js)))), [float(j) for j in js]


# ---------------------------------------------------------------------------
# open-slot functionals (used by the seesaw and the condition solver)

def bob_slot_matrix(a_mat, bob_mats_before, bob_mats_after, c_mat, d: int,
                    n: int) -> np.ndarray:
    """G with <chain> = tr(B G) when central operator B is left open."""
    left = np.asarray(a_mat, dtype=complex)
    for b in bob_mats_before:
        left = transfer_forward(left, np.asarray(b, dtype=complex), d)
    right = np.asarray(c_mat, dtype=complex)
    for b in reversed(bob_mats_after):
        right = transfer_backward(right, np.asarray(b, dtype=complex), d)
    return np.einsum("ab,cd->bdac", left, right).reshape(d * d, d * d) / d ** n


def edge_slot_matrix(side: str, bob_mats, other_edge_mat, d: int, n: int) -> np.ndarray:
    """G with <chain> = tr(E G) when one edge operator E is left open."""
    env = np.asarray(other_edge_mat, dtype=complex)
    if side == "alice":
        for b in reversed(bob_mats):
            env = transfer_backward(env, np.asarray(b, dtype=complex), d)
    elif side == "charlie":
        for b in bob_mats:
            env = transfer_forward(env, np.asarray(b, dtype=complex), d)
    else:
        raise ValueError("side must be 'alice' or 'charlie'")
    return env.T / d ** n


def dichotomic_projection(hermitian: np.ndarray) -> np.ndarray:
    """Nearest dichotomic observable: replace eigenvalues by their signs.

    Zero eigenvalues round to +1 so the output is deterministic.
    """
    w, v = np.linalg.eigh((hermitian + hermitian.conj().T) / 2)
    signs = np.where(w >= 0, 1.0, -1.0)
    return (v * signs) @ v.conj().T


def random_dichotomic(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Sign-of-eigenvalues of a standard complex-normal Hermitian matrix."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return dichotomic_projection((g + g.conj().T) / 2)


# ---------------------------------------------------------------------------
# reduced states and serialization

def reduced_density(state: NetworkState, start: int, count: int) -> np.ndarray:
    """Reduced density matrix on the contiguous qubit block [start, start+count)."""
    total = state.layout.total_qubits
    pre, dim, post = 2 ** start, 2 ** count, 2 ** (total - start - count)
    psi = state.amplitudes.reshape(pre, dim, post)
    return np.einsum("paq,pbq->ab", psi, psi.conj())


def _matrix_to_pairs(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(m, complex)]


def _matrix_from_pairs(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def model_to_json_dict(model: QuantumModel) -> dict:
    return {
        "n": model.n,
        "qubits_per_half": model.layout.qubits_per_half,
        "alice": [_matrix_to_pairs(o.matrix) for o in model.alice],
        "bobs": [[_matrix_to_pairs(o.matrix) for o in pair] for pair in model.bobs],
        "charlie": [_matrix_to_pairs(o.matrix) for o in model.charlie],
    }


def model_from_json_dict(data: dict) -> QuantumModel:
    return make_model(
        int(data["n"]),
        [_matrix_from_pairs(m) for m in data["alice"]],
        [[_matrix_from_pairs(m) for m in pair] for pair in data["bobs"]],
        [_matrix_from_pairs(m) for m in data["charlie"]],
        qubits_per_half=int(data["qubits_per_half"]),
    )
