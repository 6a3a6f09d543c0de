import numpy as np
import pytest

from chainlock.qcore import Observable, beta_quantum
from chainlock.seesaw import SeesawConfig, SeesawReport, random_model, seesaw_optimize
from chainlock.soscert import tsirelson_ceiling


def test_config_validation():
    with pytest.raises(ValueError):
        SeesawConfig(max_iterations=0)
    with pytest.raises(ValueError):
        SeesawConfig(tolerance=0.0)
    with pytest.raises(ValueError):
        SeesawConfig(restarts=0)


def test_random_model_deterministic():
    a = random_model(2, seed=1)
    b = random_model(2, seed=1)
    for oa, ob in zip(a.alice, b.alice):
        assert np.array_equal(oa.matrix, ob.matrix)
    assert len(a.alice) == 2 and len(a.bobs) == 1
    for pair in a.bobs:
        for o in pair:
            Observable(o.matrix)  # revalidates dichotomic + hermitian


def test_random_model_is_suboptimal():
    beta, _ = beta_quantum(random_model(3, seed=7))
    assert beta < tsirelson_ceiling(3)


def test_seesaw_n2_reaches_optimum():
    rep = seesaw_optimize(2, SeesawConfig(restarts=10, seed=0))
    assert rep.best_beta == pytest.approx(tsirelson_ceiling(2), abs=1e-4)
    assert len(rep.restart_betas) == 10


def test_seesaw_reproducible():
    cfg = SeesawConfig(restarts=3, seed=42, max_iterations=60)
    a = seesaw_optimize(2, cfg)
    b = seesaw_optimize(2, cfg)
    assert a.best_beta == b.best_beta
    assert a.trace == b.trace
    assert a.restart_betas == b.restart_betas


def test_seesaw_traces_monotone():
    rep = seesaw_optimize(3, SeesawConfig(restarts=4, seed=5, max_iterations=80))
    per_restart = {}
    for r, _, beta in rep.trace:
        if r in per_restart:
            assert beta >= per_restart[r] - 1e-10
        per_restart[r] = beta


def test_seesaw_soundness_below_ceiling():
    for n in (2, 3):
        rep = seesaw_optimize(n, SeesawConfig(restarts=4, seed=9, max_iterations=80))
        assert rep.best_beta <= tsirelson_ceiling(n) + 1e-7


def test_seesaw_beta_matches_model():
    rep = seesaw_optimize(2, SeesawConfig(restarts=2, seed=3, max_iterations=60))
    beta, _ = beta_quantum(rep.best_model)
    assert beta == pytest.approx(rep.best_beta, abs=1e-9)


def test_seesaw_freeze_edges():
    cfg = SeesawConfig(restarts=1, seed=11, optimize_edges=False, max_iterations=40)
    rep = seesaw_optimize(2, cfg)
    start = random_model(2, seed=11)
    for got, init in zip(rep.best_model.alice, start.alice):
        assert np.allclose(got.matrix, init.matrix)


def test_seesaw_qubit_override():
    rep = seesaw_optimize(4, SeesawConfig(restarts=1, seed=2, max_iterations=10,
                                          qubits_per_half=1))
    assert rep.best_model.layout.qubits_per_half == 1
    assert rep.best_model.layout.total_qubits == 8


def test_report_json_shape():
    rep = seesaw_optimize(2, SeesawConfig(restarts=1, seed=1, max_iterations=20))
    d = rep.to_json_dict()
    assert set(d) == {"best_beta", "converged", "restart_betas", "trace", "best_model"}
    assert d["best_model"]["n"] == 2
