"""Sum-of-squares certificate diagnostics.

For each term i the signed edge combinations Y^A_i, Y^C_i have state norms
omega^A_i, omega^C_i, and beta is bounded by tau = sum_i sqrt(omega^A_i
omega^C_i).  A model attains its own tau exactly when every residual

    r_i = || B_i |psi>  -  (Y^A_i (x) Y^C_i / omega_i) |psi> ||

vanishes; ``certify`` measures the gap tau - beta and these residuals.  The
dimension-independent ceiling sum_i sqrt(omega_i) <= 2^(n-1) sqrt(n) holds
for every model because sum_i (omega^A_i)^2 = 2^(n-1) n identically.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCertificateError
from .qcore import (QuantumModel, anticommutator_report, apply_to_slot, beta_quantum,
                    edge_combinations, reduced_density)
from .scenario import SignEncoding, build_bob_input_map, build_encoding

CERTIFICATE_TOL = 1e-7
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class CertificateReport:
    n: int
    omega_a: tuple[float, ...]
    omega_c: tuple[float, ...]
    tau: float
    beta: float
    gamma: float
    residuals: tuple[float, ...]
    anticommutator_max: float
    certified: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "omega_a": list(self.omega_a),
            "omega_c": list(self.omega_c),
            "tau": self.tau,
            "beta": self.beta,
            "gamma": self.gamma,
            "residuals": list(self.residuals),
            "anticommutator_max": self.anticommutator_max,
            "certified": self.certified,
        }


def tsirelson_ceiling(n: int) -> float:
    """Dimension-independent quantum ceiling 2^(n-1) sqrt(n)."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return 2 ** (n - 1) * math.sqrt(n)


def omega_values(model: QuantumModel,
                 enc: SignEncoding | None = None) -> tuple[list[float], list[float]]:
    """omega^A_i = ||Y^A_i |psi>|| and omega^C_i likewise, via reduced states."""
    enc = enc or build_encoding(model.n)
    ya, yc = edge_combinations(model, enc)
    rho_a = reduced_density(model.state, *model.layout.alice_slot())
    rho_c = reduced_density(model.state, *model.layout.charlie_slot())
    omega_a = [math.sqrt(max(0.0, float(np.trace(rho_a @ (y @ y)).real))) for y in ya]
    omega_c = [math.sqrt(max(0.0, float(np.trace(rho_c @ (y @ y)).real))) for y in yc]
    for label, values in (("A", omega_a), ("C", omega_c)):
        for i, v in enumerate(values):
            if v <= DEGENERATE_TOL:
                warnings.warn(f"omega^{label}_{i + 1} vanishes: signed edge "
                              f"combination annihilates the state", stacklevel=2)
    return omega_a, omega_c


def condition_residuals(model: QuantumModel,
                        enc: SignEncoding | None = None) -> list[float]:
    """|| B_i|psi> - (Y^A_i (x) Y^C_i / omega_i)|psi> || for every term, dense."""
    n, lay = model.n, model.layout
    enc = enc or build_encoding(n)
    bob_map = build_bob_input_map(n)
    omega_a, omega_c = omega_values(model, enc)
    ya, yc = edge_combinations(model, enc)
    amp = model.state.amplitudes
    total = lay.total_qubits
    out = []
    for i in range(2 ** (n - 1)):
        omega = omega_a[i] * omega_c[i]
        if omega <= DEGENERATE_TOL:
            raise DegenerateCertificateError(
                f"term {i + 1}: signed edge combination annihilates the state")
        phi_b = amp
        for t, y in enumerate(bob_map.rows[i], start=1):
            phi_b = apply_to_slot(phi_b, model.bobs[t - 1][y - 1].matrix,
                                  *lay.bob_slot(t), total)
        phi_t = apply_to_slot(amp, ya[i], *lay.alice_slot(), total)
        phi_t = apply_to_slot(phi_t, yc[i], *lay.charlie_slot(), total)
        out.append(float(np.linalg.norm(phi_b - phi_t / omega)))
    return out


def certify(model: QuantumModel, tol: float = CERTIFICATE_TOL) -> CertificateReport:
    """Full certificate: omega values, tau, beta, gap, residuals, anticommutators."""
    n = model.n
    enc = build_encoding(n)
    omega_a, omega_c = omega_values(model, enc)
    tau = sum(math.sqrt(a * c) for a, c in zip(omega_a, omega_c))
    beta, _ = beta_quantum(model, enc)
    residuals = condition_residuals(model, enc)
    rep_a = anticommutator_report(model.alice)
    rep_c = anticommutator_report(model.charlie)
    off_a = rep_a - np.diag(np.diag(rep_a))
    off_c = rep_c - np.diag(np.diag(rep_c))
    anticomm_max = float(max(np.max(off_a), np.max(off_c)))
    gamma = tau - beta
    certified = bool(gamma < tol and max(residuals) < tol)
    return CertificateReport(
        n=n, omega_a=tuple(omega_a), omega_c=tuple(omega_c), tau=tau, beta=beta,
        gamma=gamma, residuals=tuple(residuals), anticommutator_max=anticomm_max,
        certified=certified)
