"""Explicit models targeting the quantum ceiling, and the condition solver.

The two-source construction attains the ceiling 2 sqrt(2) exactly.  For three
or more sources the zero-residual conditions B_i|psi> = (Y^A_i (x) Y^C_i /
omega_i)|psi> are mutually inconsistent on any Bell-chain state: eliminating
the shared central observables between terms forces an operator identity that
fails whenever the edge sets are (even in expectation) anticommuting.  The
builders therefore return the best product-form / least-squares solutions and
raise ``ConstructionFailedError`` carrying the measured model, per-term values
and residuals, instead of pretending the target was reached.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, ConstructionFailedError
from .qcore import (PAULI_X, PAULI_Y, PAULI_Z, NetworkState, Observable, QuantumModel,
                    bell_chain_state, beta_quantum, bob_slot_matrix, chain_expectation,
                    default_layout, dichotomic_projection, jordan_wigner_set, kron_all,
                    make_model, random_dichotomic)
from .scenario import BobInputMap, SignEncoding, build_bob_input_map, build_encoding
from .soscert import condition_residuals, omega_values, tsirelson_ceiling

SOLVE_RESIDUAL_TOL = 1e-8
SUPPORTED_N = (2, 3, 4, 5)


@dataclass(frozen=True)
class OptimalModelRecipe:
    n: int
    edge_set_kind: str = "jordan_wigner"
    bob_rule: str = field(default="")
    expected_beta: float = field(default=0.0)

    def __post_init__(self):
        if not self.bob_rule:
            rule = {2: "explicit_n2", 3: "explicit_n3"}.get(self.n, "solve_condition")
            object.__setattr__(self, "bob_rule", rule)
        object.__setattr__(self, "expected_beta", tsirelson_ceiling(self.n))


def _explicit_n2() -> QuantumModel:
    a1 = (PAULI_Z + PAULI_X) / math.sqrt(2)
    a2 = (PAULI_Z - PAULI_X) / math.sqrt(2)
    bob = [kron_all(PAULI_Z, PAULI_Z), kron_all(PAULI_X, PAULI_X)]
    return make_model(2, [a1, a2], [bob], [a1, a2])


def _pauli_vector(v: np.ndarray) -> np.ndarray:
    return v[0] * PAULI_X + v[1] * PAULI_Y + v[2] * PAULI_Z


def _explicit_n3() -> QuantumModel:
    """Closest product-Pauli model for three sources.

    Each central observable is a single Pauli on each of its two qubits: the
    link-facing middle legs are Z (a passive wire), and the outer legs align
    with the transpose-corrected average of the edge sign rows they serve.
    This realizes J_i = 2 for every term (beta = 4 sqrt(2)); the equal-term
    target J_i = 3 is not reachable by any model (see module docstring).
    """
    enc = build_encoding(3)
    flip_y = np.diag([1.0, -1.0, 1.0])  # transpose of a Pauli vector across a Bell link
    targets = [flip_y @ enc.signs[i] for i in range(4)]
    bob1, bob2 = [], []
    for y in (1, 2):
        left = sum(targets[i] for i in range(4) if (i >> 1) + 1 == y)
        right = sum(targets[i] for i in range(4) if (i & 1) + 1 == y)
        bob1.append(kron_all(_pauli_vector(left / np.linalg.norm(left)), PAULI_Z))
        bob2.append(kron_all(PAULI_Z, _pauli_vector(right / np.linalg.norm(right))))
    edges = [o.matrix for o in jordan_wigner_set(3)]
    return make_model(3, edges, [bob1, bob2], edges)


def fit_bob_observables(state: NetworkState, edge_observables,
                        enc: SignEncoding | None = None,
                        bob_map: BobInputMap | None = None,
                        sweeps: int = 400, extra_starts: int = 8):
    """Least-squares fit of per-party central observables to the zero conditions.

    Maximizes sum_i <psi| T_i B_i |psi> with T_i = (Y^A_i (x) Y^C_i)/omega_i
    by coordinate ascent with dichotomic projection; the per-term residuals
    are r_i = sqrt(2 - 2 overlap_i).  Returns (bobs, overlaps) for the best
    deterministic start.
    """
    layout = state.layout
    n, d = layout.n, layout.link_dim
    enc = enc or build_encoding(n)
    bob_map = bob_map or build_bob_input_map(n)
    edges = [o.matrix if isinstance(o, Observable) else np.asarray(o, complex)
             for o in edge_observables]
    if len(edges) != n or edges[0].shape != (d, d):
        raise ValueError(f"need {n} edge observables of dimension {d}")
    half = 2 ** (n - 1)
    ys = [sum(enc.signs[i][x] * edges[x] for x in range(n)) for i in range(half)]
    # omega per term from the actual edge set (equals n for anticommuting sets)
    model_tmp = make_model(n, edges, [[np.eye(d * d)] * 2] * (n - 1), edges,
                           qubits_per_half=layout.qubits_per_half)
    om_a, om_c = omega_values(model_tmp, enc)
    omegas = [a * c for a, c in zip(om_a, om_c)]
    combos = [tuple(y - 1 for y in bob_map.rows[i]) for i in range(half)]

    def overlaps(bobs):
        out = np.empty(half)
        for i in range(half):
            mats = [bobs[t][combos[i][t]] for t in range(n - 1)]
            out[i] = chain_expectation(ys[i] / omegas[i], mats, ys[i], d).real
        return out

    def sweep_to_convergence(bobs):
        prev = overlaps(bobs).sum()
        for _ in range(sweeps):
            for t in range(n - 1):
                for yv in range(2):
                    w = np.zeros((d * d, d * d), dtype=complex)
                    for i in range(half):
                        if combos[i][t] != yv:
                            continue
                        before = [bobs[u][combos[i][u]] for u in range(t)]
                        after = [bobs[u][combos[i][u]] for u in range(t + 1, n - 1)]
                        w += bob_slot_matrix(ys[i] / omegas[i], before, after,
                                             ys[i], d, n)
                    bobs[t][yv] = dichotomic_projection(w)
            cur = overlaps(bobs).sum()
            if abs(cur - prev) < 1e-13:
                break
            prev = cur
        return bobs, prev

    starts = [[[np.eye(d * d, dtype=complex) for _ in range(2)] for _ in range(n - 1)]]
    for s in range(extra_starts):
        rng = np.random.default_rng(1000 + s)
        starts.append([[random_dichotomic(d * d, rng) for _ in range(2)]
                       for _ in range(n - 1)])
    best_bobs, best_total = None, -np.inf
    for bobs in starts:
        bobs, total = sweep_to_convergence(bobs)
        if total > best_total + 1e-12:
            best_bobs, best_total = bobs, total
    return best_bobs, overlaps(best_bobs)


def solve_bob_condition(state: NetworkState, edge_observables,
                        enc: SignEncoding | None = None,
                        bob_map: BobInputMap | None = None,
                        tol: float = SOLVE_RESIDUAL_TOL):
    """Central observables satisfying every zero condition within ``tol``.

    Raises ConstructionFailedError with the best-fit observables and their
    residuals when the conditions cannot be met (any n >= 3).
    """
    bobs, overlaps = fit_bob_observables(state, edge_observables, enc, bob_map)
    residuals = np.sqrt(np.maximum(0.0, 2.0 - 2.0 * overlaps))
    if float(np.max(residuals)) >= tol:
        raise ConstructionFailedError(
            f"zero conditions not satisfiable: max residual "
            f"{float(np.max(residuals)):.6f} (best overlaps {np.round(overlaps, 6).tolist()})",
            model=bobs, residuals=[float(r) for r in residuals])
    return bobs


def optimal_model(n: int, qubits_per_half: int | None = None) -> QuantumModel:
    """Model attaining the ceiling 2^(n-1) sqrt(n), where one exists.

    Succeeds for n=2.  For n in {3,4,5} the ceiling is strict: the builder
    assembles the best known construction, measures it, and raises
    ConstructionFailedError carrying the model and its diagnostics.
    """
    if n not in SUPPORTED_N:
        raise CapacityError(f"optimal_model supports n in {SUPPORTED_N}, got {n}")
    expected = tsirelson_ceiling(n)
    if n == 2:
        model = _explicit_n2()
        beta, _ = beta_quantum(model)
        assert abs(beta - expected) < 1e-12
        return model
    if n == 3 and (qubits_per_half or 1) == 1:
        model = _explicit_n3()
        beta, terms = beta_quantum(model)
        residuals = condition_residuals(model)
        raise ConstructionFailedError(
            f"n=3: equal-term target J_i = 3 is unattainable; closest "
            f"product-Pauli model reaches beta = {beta:.9f} < {expected:.9f} "
            f"with terms {np.round(terms, 9).tolist()}",
            model=model, residuals=residuals, beta=beta, expected=expected)
    layout = default_layout(n, qubits_per_half)
    state = bell_chain_state(n, layout.qubits_per_half)
    edges = [o.matrix for o in jordan_wigner_set(n)]
    if edges[0].shape[0] > layout.link_dim:
        raise CapacityError(
            f"{n} mutually anticommuting observables need dimension "
            f"{edges[0].shape[0]}; layout provides {layout.link_dim} per edge party")
    if edges[0].shape[0] != layout.link_dim:
        pad = layout.link_dim // edges[0].shape[0]
        edges = [np.kron(e, np.eye(pad)) for e in edges]
    try:
        bobs = solve_bob_condition(state, edges)
    except ConstructionFailedError as err:
        model = make_model(n, edges, err.model, edges,
                           qubits_per_half=layout.qubits_per_half)
        beta, _ = beta_quantum(model)
        raise ConstructionFailedError(
            f"n={n}: zero conditions are inconsistent; least-squares model "
            f"reaches beta = {beta:.9f} < {expected:.9f} with max residual "
            f"{max(err.residuals):.6f}",
            model=model, residuals=err.residuals, beta=beta, expected=expected,
        ) from None
    model = make_model(n, edges, bobs, edges, qubits_per_half=layout.qubits_per_half)
    beta, _ = beta_quantum(model)
    if abs(beta - expected) > 1e-6:
        raise ConstructionFailedError(
            f"n={n}: solved conditions but beta = {beta} misses {expected}",
            model=model, beta=beta, expected=expected)
    return model
