import numpy as np
import pytest

from chainlock.errors import (CapacityError, NumericalConsistencyError, ShapeError,
                              UnsupportedStateError)
from chainlock.qcore import (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, ChainLayout, NetworkState,
                             Observable, anticommutator_report, apply_to_slot,
                             bell_chain_state, beta_quantum, correlator_contracted,
                             correlator_dense, default_layout, dichotomic_projection,
                             jordan_wigner_set, kron_all, make_model, model_from_json_dict,
                             model_to_json_dict, random_dichotomic, reduced_density)

SQ2 = np.sqrt(2.0)


def zz_xx_model(n=2):
    """The standard two-source model: rotated edge pair, Z(x)Z / X(x)X center."""
    a1 = (PAULI_Z + PAULI_X) / SQ2
    a2 = (PAULI_Z - PAULI_X) / SQ2
    bob = [kron_all(PAULI_Z, PAULI_Z), kron_all(PAULI_X, PAULI_X)]
    return make_model(2, [a1, a2], [bob], [a1, a2])


def random_model_mats(n, m, rng):
    d = 2 ** m
    alice = [random_dichotomic(d, rng) for _ in range(n)]
    charlie = [random_dichotomic(d, rng) for _ in range(n)]
    bobs = [[random_dichotomic(d * d, rng) for _ in range(2)] for _ in range(n - 1)]
    return make_model(n, alice, bobs, charlie, qubits_per_half=m)


def test_observable_validation():
    Observable(PAULI_X)
    with pytest.raises(ValueError):
        Observable(np.array([[0, 1], [0, 0]], dtype=complex))  # not hermitian
    with pytest.raises(ValueError):
        Observable(0.5 * PAULI_Z)  # eigenvalues not +-1
    with pytest.raises(ShapeError):
        Observable(np.ones((2, 3)))


def test_layout_slots():
    lay = ChainLayout(n=3, qubits_per_half=1)
    assert lay.total_qubits == 6
    assert lay.alice_slot() == (0, 1)
    assert lay.bob_slot(1) == (1, 2)
    assert lay.bob_slot(2) == (3, 2)
    assert lay.charlie_slot() == (5, 1)
    with pytest.raises(IndexError):
        lay.bob_slot(3)


def test_default_layout_half_counts():
    assert default_layout(2).qubits_per_half == 1
    assert default_layout(3).qubits_per_half == 1
    assert default_layout(4).qubits_per_half == 2
    assert default_layout(5).qubits_per_half == 2
    assert default_layout(4, qubits_per_half=1).qubits_per_half == 1


def test_bell_chain_n2_amplitudes():
    st = bell_chain_state(2)
    expected = np.zeros(16)
    for idx in (0b0000, 0b0011, 0b1100, 0b1111):
        expected[idx] = 0.5
    assert np.allclose(st.amplitudes, expected)


def test_bell_chain_n3_norm():
    st = bell_chain_state(3)
    assert st.layout.total_qubits == 6
    assert np.linalg.norm(st.amplitudes) == pytest.approx(1.0, abs=1e-13)


def test_bell_chain_n4_link_schmidt_rank():
    st = bell_chain_state(4)
    assert st.layout.total_qubits == 16
    rho = reduced_density(st, *st.layout.alice_slot())
    # Alice's half of source 1 is maximally mixed: Schmidt rank 4 per link pair
    assert np.allclose(rho, np.eye(4) / 4)


def test_bell_chain_capacity():
    with pytest.raises(CapacityError):
        bell_chain_state(7)  # 2*3*7 = 42 qubits


def test_jordan_wigner_small_sets():
    assert [o.matrix.tolist() for o in jordan_wigner_set(2)] == \
        [PAULI_X.tolist(), PAULI_Z.tolist()]
    mats = [o.matrix for o in jordan_wigner_set(3)]
    assert np.allclose(mats[0], PAULI_X)
    assert np.allclose(mats[1], PAULI_Y)
    assert np.allclose(mats[2], PAULI_Z)


@pytest.mark.parametrize("n_obs", [2, 3, 4, 5, 6, 7])
def test_jordan_wigner_anticommutes(n_obs):
    obs = jordan_wigner_set(n_obs)
    assert len(obs) == n_obs
    expected_dim = 2 ** max(1, -(-(n_obs - 1) // 2))
    assert obs[0].dim == expected_dim
    rep = anticommutator_report(obs)
    off = rep - np.diag(np.diag(rep))
    assert np.max(off) < 1e-12
    assert np.allclose(np.diag(rep), 2.0)


def test_anticommutator_report_examples():
    rep = anticommutator_report([Observable(PAULI_X), Observable(PAULI_X)])
    assert rep[0, 1] == pytest.approx(2.0)
    with pytest.raises(ShapeError):
        anticommutator_report([Observable(PAULI_X), Observable(kron_all(PAULI_X, PAULI_X))])


def test_correlator_dense_examples():
    model = make_model(2, [PAULI_Z, PAULI_X], [[kron_all(PAULI_Z, PAULI_Z),
                                                kron_all(PAULI_X, PAULI_X)]],
                       [PAULI_Z, PAULI_X])
    assert correlator_dense(model, 1, (1,), 1) == pytest.approx(1.0, abs=1e-12)
    # mixed bases decorrelate: Z against X (x) X
    assert correlator_dense(model, 1, (2,), 1) == pytest.approx(0.0, abs=1e-12)
    ident = make_model(2, [PAULI_I * 1.0] * 2, [[np.eye(4)] * 2], [PAULI_I * 1.0] * 2)
    assert correlator_dense(ident, 1, (1,), 2) == pytest.approx(1.0, abs=1e-12)


def test_correlator_input_validation():
    model = zz_xx_model()
    with pytest.raises(IndexError):
        correlator_dense(model, 3, (1,), 1)
    with pytest.raises(ShapeError):
        correlator_dense(model, 1, (1, 1), 1)


@pytest.mark.parametrize("n,m", [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2)])
def test_contracted_matches_dense_random(n, m):
    rng = np.random.default_rng(500 + 10 * n + m)
    for rep in range(4):
        model = random_model_mats(n, m, rng)
        combo = tuple(rng.integers(1, 3) for _ in range(n - 1))
        x = int(rng.integers(1, n + 1))
        z = int(rng.integers(1, n + 1))
        a = correlator_dense(model, x, combo, z)
        b = correlator_contracted(model, x, combo, z)
        assert a == pytest.approx(b, abs=1e-11)
        assert -1 - 1e-10 <= a <= 1 + 1e-10


def test_beta_quantum_optimal_n2():
    beta, terms = beta_quantum(zz_xx_model(), evaluator="dense")
    assert beta == pytest.approx(2 * SQ2, abs=1e-12)
    assert terms == pytest.approx([2.0, 2.0], abs=1e-12)
    beta_c, terms_c = beta_quantum(zz_xx_model(), evaluator="contracted")
    assert beta_c == pytest.approx(beta, abs=1e-12)
    assert np.allclose(terms, terms_c)


@pytest.mark.parametrize("n,m", [(2, 1), (3, 1), (4, 2)])
def test_beta_respects_quantum_ceiling(n, m):
    rng = np.random.default_rng(900 + n)
    for rep in range(3):
        model = random_model_mats(n, m, rng)
        beta, _ = beta_quantum(model)
        assert beta <= 2 ** (n - 1) * np.sqrt(n) + 1e-9


def test_beta_evaluators_agree_on_bigger_chain():
    rng = np.random.default_rng(77)
    model = random_model_mats(4, 2, rng)  # 16 qubits: auto picks contracted
    b_auto, _ = beta_quantum(model, evaluator="auto")
    b_dense, _ = beta_quantum(model, evaluator="dense")
    assert b_auto == pytest.approx(b_dense, abs=1e-9)


def test_contracted_requires_bell_links():
    model = zz_xx_model()
    amp = np.zeros(16, dtype=complex)
    amp[0] = 1.0
    product_state = NetworkState(amplitudes=amp, layout=model.layout)
    broken = type(model)(scenario=model.scenario, layout=model.layout,
                         state=product_state, alice=model.alice, bobs=model.bobs,
                         charlie=model.charlie)
    with pytest.raises(UnsupportedStateError):
        correlator_contracted(broken, 1, (1,), 1)
    # dense path still works on arbitrary states
    correlator_dense(broken, 1, (1,), 1)


def test_beta_invariant_under_local_unitary():
    rng = np.random.default_rng(4)
    model = random_model_mats(3, 1, rng)
    base, _ = beta_quantum(model, evaluator="dense")
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    u = np.linalg.qr(g)[0]
    rotated_alice = [u @ a.matrix @ u.conj().T for a in model.alice]
    amp = apply_to_slot(model.state.amplitudes, u, *model.layout.alice_slot(),
                        model.layout.total_qubits)
    rotated_state = NetworkState(amplitudes=amp, layout=model.layout)
    rotated = make_model(3, rotated_alice, [[o.matrix for o in p] for p in model.bobs],
                         [c.matrix for c in model.charlie], qubits_per_half=1)
    rotated = type(model)(scenario=rotated.scenario, layout=rotated.layout,
                          state=rotated_state, alice=rotated.alice,
                          bobs=rotated.bobs, charlie=rotated.charlie)
    got, _ = beta_quantum(rotated, evaluator="dense")
    assert got == pytest.approx(base, abs=1e-9)


def test_dichotomic_projection_signs_and_ties():
    w = np.diag([3.0, -0.5, 0.0])
    proj = dichotomic_projection(w)
    assert np.allclose(proj, np.diag([1.0, -1.0, 1.0]))  # zero rounds to +1


def test_random_dichotomic_deterministic():
    a = random_dichotomic(4, np.random.default_rng(123))
    b = random_dichotomic(4, np.random.default_rng(123))
    assert np.array_equal(a, b)
    Observable(a)


def test_imaginary_part_guard():
    # force a non-real expectation by sabotaging hermiticity after validation
    model = zz_xx_model()
    bad = (1.0 + 0.1j) * np.array(model.bobs[0][0].matrix, copy=True)
    object.__setattr__(model.bobs[0][0], "matrix", bad)
    with pytest.raises(NumericalConsistencyError):
        correlator_dense(model, 1, (1,), 1)
    with pytest.raises(NumericalConsistencyError):
        correlator_contracted(model, 1, (1,), 1)


def test_model_serialization_roundtrip():
    rng = np.random.default_rng(8)
    model = random_model_mats(3, 1, rng)
    data = model_to_json_dict(model)
    back = model_from_json_dict(data)
    assert back.n == 3
    for a, b in zip(model.alice, back.alice):
        assert np.allclose(a.matrix, b.matrix)
    b0, _ = beta_quantum(model)
    b1, _ = beta_quantum(back)
    assert b0 == pytest.approx(b1, abs=1e-12)


def test_bob_slot_matrix_matches_dense():
    # tr(O G) with the slot left open must reproduce the dense correlator
    # with O inserted, for every central position (dual route for the
    # optimizer's effective operators)
    from chainlock.qcore import bob_slot_matrix
    rng = np.random.default_rng(41)
    for n in (2, 3):
        model = random_model_mats(n, 1, rng)
        combo = tuple(int(v) for v in rng.integers(1, 3, size=n - 1))
        x = int(rng.integers(1, n + 1))
        z = int(rng.integers(1, n + 1))
        for t in range(1, n):
            before = [model.bobs[u - 1][combo[u - 1] - 1].matrix for u in range(1, t)]
            after = [model.bobs[u - 1][combo[u - 1] - 1].matrix for u in range(t + 1, n)]
            g = bob_slot_matrix(model.alice[x - 1].matrix, before, after,
                                model.charlie[z - 1].matrix, 2, n)
            probe = model.bobs[t - 1][combo[t - 1] - 1].matrix
            want = correlator_dense(model, x, combo, z)
            assert np.trace(probe @ g).real == pytest.approx(want, abs=1e-11)


def test_edge_slot_matrix_matches_dense():
    from chainlock.qcore import edge_slot_matrix
    rng = np.random.default_rng(42)
    model = random_model_mats(3, 1, rng)
    combo = (2, 1)
    bob_mats = [model.bobs[t][combo[t] - 1].matrix for t in range(2)]
    g_a = edge_slot_matrix("alice", bob_mats, model.charlie[0].matrix, 2, 3)
    g_c = edge_slot_matrix("charlie", bob_mats, model.alice[1].matrix, 2, 3)
    assert np.trace(model.alice[2].matrix @ g_a).real == pytest.approx(
        correlator_dense(model, 3, combo, 1), abs=1e-11)
    assert np.trace(model.charlie[2].matrix @ g_c).real == pytest.approx(
        correlator_dense(model, 2, combo, 3), abs=1e-11)


def test_embedded_classical_strategy_reproduces_behavior_beta():
    # a +-1 strategy lifted to +-identity observables must give the same beta
    # through the quantum evaluators as through the behavior table
    from chainlock.nlocal import (DeterministicStrategy, behavior_from_strategy,
                                  beta_of_behavior)
    from chainlock.scenario import ChainScenario
    rng = np.random.default_rng(43)
    for n in (2, 3, 4):
        alice = tuple(int(s) for s in rng.choice((-1, 1), size=n))
        charlie = tuple(int(s) for s in rng.choice((-1, 1), size=n))
        bobs = tuple((int(a), int(b)) for a, b in rng.choice((-1, 1), size=(n - 1, 2)))
        strat = DeterministicStrategy(alice=alice, charlie=charlie, bobs=bobs)
        classical = beta_of_behavior(behavior_from_strategy(strat, ChainScenario(n)))
        m = max(1, n // 2)
        d = 2 ** m
        model = make_model(
            n, [a * np.eye(d) for a in alice],
            [[y1 * np.eye(d * d), y2 * np.eye(d * d)] for y1, y2 in bobs],
            [c * np.eye(d) for c in charlie], qubits_per_half=m)
        quantum, _ = beta_quantum(model)
        assert quantum == pytest.approx(classical, abs=1e-9)


def test_jordan_wigner_single():
    (obs,) = jordan_wigner_set(1)
    assert np.allclose(obs.matrix, PAULI_X)


def test_dense_correlator_20_qubits():
    model = zz_like_chain_model(5)
    val = correlator_dense(model, 1, (1, 1, 1, 1), 1)
    assert val == pytest.approx(1.0, abs=1e-10)
    assert correlator_contracted(model, 1, (1, 1, 1, 1), 1) == pytest.approx(val, abs=1e-10)


def zz_like_chain_model(n):
    m = max(1, n // 2)
    d = 2 ** m
    z_all = kron_all(*([PAULI_Z] * m))
    zz_all = kron_all(*([PAULI_Z] * (2 * m)))
    return make_model(n, [z_all] * n, [[zz_all] * 2] * (n - 1), [z_all] * n,
                      qubits_per_half=m)


def test_beta_invariant_under_local_unitary_on_central_slot():
    rng = np.random.default_rng(44)
    model = random_model_mats(3, 1, rng)
    base, _ = beta_quantum(model, evaluator="dense")
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    u = np.linalg.qr(g)[0]
    rotated_bobs = [[u @ o.matrix @ u.conj().T for o in model.bobs[0]],
                    [o.matrix for o in model.bobs[1]]]
    amp = apply_to_slot(model.state.amplitudes, u, *model.layout.bob_slot(1),
                        model.layout.total_qubits)
    rotated = make_model(3, [a.matrix for a in model.alice], rotated_bobs,
                         [c.matrix for c in model.charlie], qubits_per_half=1)
    rotated = type(model)(scenario=rotated.scenario, layout=rotated.layout,
                          state=NetworkState(amplitudes=amp, layout=model.layout),
                          alice=rotated.alice, bobs=rotated.bobs,
                          charlie=rotated.charlie)
    got, _ = beta_quantum(rotated, evaluator="dense")
    assert got == pytest.approx(base, abs=1e-9)
