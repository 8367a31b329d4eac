import numpy as np
import pytest

from qconsensus.dynamics import gossip_channel, smc_channel, ssc_channel
from qconsensus.qcore import (
    I2,
    SIGMA_X,
    SIGMA_Z,
    KrausChannel,
    apply_channel,
    basis_ket,
    bitstring_ket,
    check_cptp,
    completeness_residual,
    dual_apply,
    expectation,
    hermiticity_residual,
    ket,
    ket_to_density,
    load_matrix,
    partial_trace,
    pure_state_fidelity,
    purity,
    save_matrix,
    tensor,
    validate_density_matrix,
)
from qconsensus.simulator import random_density


def test_ket_normalizes():
    v = ket([3.0, 4.0j])
    assert abs(np.linalg.norm(v) - 1.0) < 1e-12
    assert np.allclose(v, [0.6, 0.8j])


def test_ket_rejects_zero_vector():
    with pytest.raises(ValueError):
        ket([0.0, 0.0])


def test_bitstring_ket_site_one_most_significant():
    assert np.argmax(np.abs(bitstring_ket("01"))) == 1
    assert np.argmax(np.abs(bitstring_ket("100"))) == 4
    with pytest.raises(ValueError):
        bitstring_ket("012")


def test_tensor_identities():
    assert np.array_equal(tensor(I2, I2), np.eye(4))
    assert np.array_equal(tensor(SIGMA_Z, I2), np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex))


def test_tensor_projector_with_sigma_x():
    # |0><0| (x) sigma_x expanded by hand: sigma_x in the upper-left block.
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 1] = 1.0
    expected[1, 0] = 1.0
    got = tensor(ket_to_density(basis_ket(2, 0)), SIGMA_X)
    assert np.max(np.abs(got - expected)) == 0.0


def test_partial_trace_product_state():
    rho = ket_to_density(bitstring_ket("00"))
    reduced = partial_trace(rho, 2, {1})
    assert np.allclose(reduced, ket_to_density(basis_ket(2, 0)))


def test_partial_trace_symmetric_pair():
    # (|01>+|10>)/sqrt2: expanding and tracing out site 2 leaves I/2.
    psi = ket([0.0, 1.0, 1.0, 0.0])
    reduced = partial_trace(ket_to_density(psi), 2, {1})
    assert np.max(np.abs(reduced - I2 / 2)) < 1e-12


def test_partial_trace_keep_all_is_identity():
    rng = np.random.default_rng(5)
    rho_a = random_density(1, 2)
    rho_b = random_density(2, 2)
    rho = np.kron(rho_a, rho_b)
    assert np.allclose(partial_trace(rho, 2, {1, 2}), rho)
    del rng


def test_partial_trace_preserves_trace():
    rho = random_density(11, 8)
    reduced = partial_trace(rho, 3, {2})
    assert abs(np.trace(reduced) - 1.0) < 1e-12


def test_partial_trace_rejects_empty_keep():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4) / 4, 2, set())


@pytest.mark.parametrize(
    "rho, expected",
    [
        (np.eye(4, dtype=complex) / 4, 0.25),
        (ket_to_density(ket([1.0, 1.0j])), 1.0),
        (0.5 * ket_to_density(bitstring_ket("00")) + 0.5 * ket_to_density(bitstring_ket("11")), 0.5),
    ],
)
def test_purity_values(rho, expected):
    assert abs(purity(rho) - expected) < 1e-12


def test_expectation_values():
    assert abs(expectation(ket_to_density(basis_ket(2, 0)), SIGMA_Z) - 1.0) < 1e-12
    assert abs(expectation(I2 / 2, SIGMA_Z)) < 1e-12
    # S2 = 2I + sigma_z (x) I + I (x) sigma_z is diagonal (4, 2, 2, 0);
    # |01> reads off the second entry.
    s2 = 2 * np.eye(4) + np.kron(SIGMA_Z, I2) + np.kron(I2, SIGMA_Z)
    assert abs(expectation(ket_to_density(bitstring_ket("01")), s2) - 2.0) < 1e-12


def test_expectation_rejects_non_hermitian():
    with pytest.raises(ValueError):
        expectation(I2 / 2, np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_validate_density_matrix_rejects_bad_states():
    with pytest.raises(ValueError, match="Hermitian"):
        validate_density_matrix(np.array([[0.5, 1.0], [0.0, 0.5]]))
    with pytest.raises(ValueError, match="trace"):
        validate_density_matrix(np.eye(2))
    with pytest.raises(ValueError, match="positive"):
        validate_density_matrix(np.diag([1.5, -0.5]))


def test_apply_channel_identity():
    ch = KrausChannel((np.eye(4, dtype=complex),), label="id")
    rho = random_density(3, 4)
    assert np.allclose(apply_channel(ch, rho), rho)


def test_apply_channel_dephasing_kills_coherence():
    ch = KrausChannel((np.sqrt(0.5) * I2, np.sqrt(0.5) * SIGMA_Z), label="dephase")
    plus = ket([1.0, 1.0])
    out = apply_channel(ch, ket_to_density(plus))
    assert np.max(np.abs(out - I2 / 2)) < 1e-12


def test_apply_channel_gossip_mixture():
    ch = gossip_channel((1, 2), 2, 0.3)
    out = apply_channel(ch, ket_to_density(bitstring_ket("01")))
    expected = 0.7 * ket_to_density(bitstring_ket("01")) + 0.3 * ket_to_density(bitstring_ket("10"))
    assert np.max(np.abs(out - expected)) < 1e-12


def test_apply_channel_dim_mismatch():
    ch = gossip_channel((1, 2), 2, 0.5)
    with pytest.raises(ValueError):
        apply_channel(ch, np.eye(8) / 8)


def _family_channels_m3():
    return [
        gossip_channel((1, 2), 3, 0.5),
        ssc_channel((2, 3), 3),
        smc_channel((1, 3), 3),
    ]


def test_dual_is_unital_for_every_family():
    for ch in _family_channels_m3():
        out = dual_apply(ch, np.eye(ch.dim, dtype=complex))
        assert np.max(np.abs(out - np.eye(ch.dim))) < 1e-12, ch.label


def test_dual_of_gossip_matches_symbolic_adjoint():
    alpha = 0.37
    ch = gossip_channel((1, 2), 2, alpha)
    swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
    rng = np.random.default_rng(8)
    x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    expected = (1 - alpha) * x + alpha * swap.conj().T @ x @ swap
    assert np.max(np.abs(dual_apply(ch, x) - expected)) < 1e-12


def test_duality_relation_random_pairs():
    # Tr[X E(rho)] = Tr[E^dag(X) rho] on 100 random pairs per family.
    rng = np.random.default_rng(123)
    for ch in _family_channels_m3():
        for _ in range(100):
            x = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
            rho = random_density(int(rng.integers(2**31)), 8)
            lhs = np.trace(x @ apply_channel(ch, rho))
            rhs = np.trace(dual_apply(ch, x) @ rho)
            assert abs(lhs - rhs) < 1e-10, ch.label


def test_check_cptp_gossip():
    report = check_cptp(gossip_channel((1, 2), 2, 0.5))
    assert report.completeness_residual <= 1e-12
    assert report.is_unital


def test_check_cptp_ssc_pair_not_unital():
    from qconsensus.dynamics import ssc_pair_channel

    report = check_cptp(ssc_pair_channel())
    assert report.completeness_residual <= 1e-12
    assert not report.is_unital


def test_check_cptp_flags_incomplete_set():
    report = check_cptp([I2 / 2])
    assert abs(report.completeness_residual - 0.75) < 1e-12


def test_kraus_channel_rejects_incomplete_ops():
    with pytest.raises(ValueError, match="complete"):
        KrausChannel((I2 / 2,))
    with pytest.raises(ValueError):
        KrausChannel(())


def test_channels_preserve_density_invariants():
    # Trace and positivity preserved on 100 random states across families.
    channels = _family_channels_m3()
    for i in range(100):
        rho = random_density(1000 + i, 8)
        out = apply_channel(channels[i % 3], rho, validate=False)
        assert abs(np.trace(out) - 1.0) < 1e-9
        assert hermiticity_residual(out) < 1e-9
        assert np.linalg.eigvalsh(0.5 * (out + out.conj().T))[0] > -1e-9


def test_gossip_contracts_purity():
    ch = gossip_channel((1, 2), 3, 0.5)
    for i in range(20):
        rho = random_density(50 + i, 8)
        assert purity(apply_channel(ch, rho)) <= purity(rho) + 1e-12


def test_pure_state_fidelity():
    psi = bitstring_ket("01")
    assert abs(pure_state_fidelity(ket_to_density(psi), psi) - 1.0) < 1e-12
    assert abs(pure_state_fidelity(np.eye(4) / 4, psi) - 0.25) < 1e-12


def test_matrix_roundtrip(tmp_path):
    rho = random_density(77, 4)
    path = tmp_path / "rho.json"
    save_matrix(path, rho)
    back = load_matrix(path)
    assert np.array_equal(back, rho)


def test_load_matrix_rejects_bad_payload(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"dim": 2, "entries": [[1.0, 0.0]]}')
    with pytest.raises(ValueError, match="entries"):
        load_matrix(path)


def test_completeness_residual_identity():
    assert completeness_residual([I2]) == 0.0
