"""Coordinate-ascent maximization of beta over observables from random starts.

Each sub-update forms the effective Hermitian operator of the linearized
objective with one observable slot left open (chain contraction) and replaces
the observable by the dichotomic projection of that operator.  An update that
would lower beta is discarded, which keeps every trace monotone.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import (QuantumModel, bob_slot_matrix, chain_expectation, default_layout,
                    dichotomic_projection, edge_slot_matrix, make_model,
                    random_dichotomic)
from .scenario import build_bob_input_map, build_encoding

WEIGHT_FLOOR = 1e-12


@dataclass(frozen=True)
class SeesawConfig:
    max_iterations: int = 500
    tolerance: float = 1e-7
    restarts: int = 10
    seed: int = 0
    optimize_edges: bool = True
    qubits_per_half: int | None = None

    def __post_init__(self):
        if self.max_iterations < 1 or self.restarts < 1 or self.tolerance <= 0:
            raise ValueError("need max_iterations >= 1, restarts >= 1, tolerance > 0")


@dataclass(frozen=True)
class SeesawReport:
    """Outcome of one optimization run; ``converged`` means every restart
    stopped on the improvement tolerance rather than the iteration cap."""

    best_beta: float
    best_model: QuantumModel
    trace: tuple[tuple[int, int, float], ...]  # (restart, iteration, beta)
    converged: bool
    restart_betas: tuple[float, ...]

    def to_json_dict(self, include_model: bool = True) -> dict:
        from .qcore import model_to_json_dict
        out = {
            "best_beta": self.best_beta,
            "converged": self.converged,
            "restart_betas": list(self.restart_betas),
            "trace": [list(t) for t in self.trace],
        }
        if include_model:
            out["best_model"] = model_to_json_dict(self.best_model)
        return out


def random_model(n: int, seed: int, qubits_per_half: int | None = None) -> QuantumModel:
    """Bell-chain model with seeded random dichotomic observables."""
    rng = np.random.default_rng(seed)
    d = default_layout(n, qubits_per_half).link_dim
    alice = [random_dichotomic(d, rng) for _ in range(n)]
    charlie = [random_dichotomic(d, rng) for _ in range(n)]
    bobs = [[random_dichotomic(d * d, rng) for _ in range(2)] for _ in range(n - 1)]
    return make_model(n, alice, bobs, charlie, qubits_per_half=qubits_per_half)


class _Workspace:
    """Mutable observable matrices for one restart."""

    def __init__(self, model: QuantumModel):
        self.n = model.n
        self.m = model.layout.qubits_per_half
        self.d = model.layout.link_dim
        self.alice = [np.array(o.matrix) for o in model.alice]
        self.charlie = [np.array(o.matrix) for o in model.charlie]
        self.bobs = [[np.array(o.matrix) for o in pair] for pair in model.bobs]

    def to_model(self) -> QuantumModel:
        return make_model(self.n, self.alice, self.bobs, self.charlie,
                          qubits_per_half=self.m)


def _term_data(ws: _Workspace, enc, bob_map):
    half = 2 ** (ws.n - 1)
    ya = [sum(enc.signs[i][x] * ws.alice[x] for x in range(ws.n)) for i in range(half)]
    yc = [sum(enc.signs[i][z] * ws.charlie[z] for z in range(ws.n)) for i in range(half)]
    combos = [tuple(y - 1 for y in bob_map.rows[i]) for i in range(half)]
    return ya, yc, combos


def _beta_of(ws: _Workspace, enc, bob_map):
    ya, yc, combos = _term_data(ws, enc, bob_map)
    half = 2 ** (ws.n - 1)
    js = np.empty(half)
    for i in range(half):
        mats = [ws.bobs[t][combos[i][t]] for t in range(ws.n - 1)]
        js[i] = chain_expectation(ya[i], mats, yc[i], ws.d).real
    return float(np.sum(np.sqrt(np.abs(js)))), js


def _weights(js: np.ndarray) -> np.ndarray:
    sigma = np.where(js >= 0, 1.0, -1.0)
    return sigma / (2.0 * np.sqrt(np.maximum(np.abs(js), WEIGHT_FLOOR)))


def _sweep(ws: _Workspace, enc, bob_map, beta: float, js: np.ndarray,
           optimize_edges: bool) -> tuple[float, np.ndarray]:
    n, d = ws.n, ws.d
    half = 2 ** (n - 1)

    def try_update(apply, revert):
        nonlocal beta, js
        apply()
        cand, cand_js = _beta_of(ws, enc, bob_map)
        if cand < beta - 1e-12:
            revert()
        else:
            beta, js = cand, cand_js

    for t in range(n - 1):
        for yv in range(2):
            ya, yc, combos = _term_data(ws, enc, bob_map)
            c = _weights(js)
            w = np.zeros((d * d, d * d), dtype=complex)
            for i in range(half):
                if combos[i][t] != yv:
                    continue
                before = [ws.bobs[u][combos[i][u]] for u in range(t)]
                after = [ws.bobs[u][combos[i][u]] for u in range(t + 1, n - 1)]
                w += c[i] * bob_slot_matrix(ya[i], before, after, yc[i], d, n)
            old = ws.bobs[t][yv]
            try_update(lambda: ws.bobs[t].__setitem__(yv, dichotomic_projection(w)),
                       lambda: ws.bobs[t].__setitem__(yv, old))
    if optimize_edges:
        for x in range(n):
            ya, yc, combos = _term_data(ws, enc, bob_map)
            c = _weights(js)
            w = np.zeros((d, d), dtype=complex)
            for i in range(half):
                mats = [ws.bobs[t][combos[i][t]] for t in range(n - 1)]
                w += (c[i] * enc.signs[i][x]
                      * edge_slot_matrix("alice", mats, yc[i], d, n))
            old = ws.alice[x]
            try_update(lambda: ws.alice.__setitem__(x, dichotomic_projection(w)),
                       lambda: ws.alice.__setitem__(x, old))
        for z in range(n):
            ya, yc, combos = _term_data(ws, enc, bob_map)
            c = _weights(js)
            w = np.zeros((d, d), dtype=complex)
            for i in range(half):
                mats = [ws.bobs[t][combos[i][t]] for t in range(n - 1)]
                w += (c[i] * enc.signs[i][z]
                      * edge_slot_matrix("charlie", mats, ya[i], d, n))
            old = ws.charlie[z]
            try_update(lambda: ws.charlie.__setitem__(z, dichotomic_projection(w)),
                       lambda: ws.charlie.__setitem__(z, old))
    return beta, js


def seesaw_optimize(n: int, config: SeesawConfig | None = None) -> SeesawReport:
    """Best beta over seeded restarts of coordinate ascent on the Bell chain."""
    config = config or SeesawConfig()
    enc = build_encoding(n)
    bob_map = build_bob_input_map(n)
    trace: list[tuple[int, int, float]] = []
    restart_betas: list[float] = []
    best_beta, best_model = -1.0, None
    all_converged = True
    for r in range(config.restarts):
        model = random_model(n, seed=config.seed + 7919 * r,
                             qubits_per_half=config.qubits_per_half)
        ws = _Workspace(model)
        beta, js = _beta_of(ws, enc, bob_map)
        trace.append((r, 0, beta))
        converged = False
        for it in range(1, config.max_iterations + 1):
            new_beta, js = _sweep(ws, enc, bob_map, beta, js, config.optimize_edges)
            trace.append((r, it, new_beta))
            if new_beta - beta < config.tolerance:
                beta = new_beta
                converged = True
                break
            beta = new_beta
        all_converged &= converged
        restart_betas.append(beta)
        if beta > best_beta + 1e-12:  # ties keep the lowest restart index
            best_beta, best_model = beta, ws.to_model()
    return SeesawReport(best_beta=best_beta, best_model=best_model,
                        trace=tuple(trace), converged=all_converged,
                        restart_betas=tuple(restart_betas))
