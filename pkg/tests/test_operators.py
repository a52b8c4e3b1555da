import numpy as np
import pytest

from sivic.hamiltonian import build_operators, strain_transform


@pytest.fixture(scope="module")
def ops():
    return build_operators()


def test_diagonals_fix_the_basis_ordering(ops):
    assert np.allclose(np.diag(ops.Sz), [0.5, 0.5, -0.5, -0.5, 0.5, 0.5, -0.5, -0.5])
    assert np.allclose(np.diag(ops.Iz), [0.5, -0.5] * 4)
    assert np.allclose(np.diag(ops.Lz), [1, 1, 1, 1, -1, -1, -1, -1])


def test_pauli_traces(ops):
    assert abs(np.trace(ops.Sx @ ops.Sy)) < 1e-14
    assert np.isclose(np.trace(ops.Sz @ ops.Sz).real, 2.0)


def test_all_hermitian(ops):
    for op in (*ops.S, *ops.I, ops.Lz):
        assert np.allclose(op, op.conj().T)


def test_commutation_relations(ops):
    for s in ops.S:
        for i in ops.I:
            assert np.allclose(s @ i - i @ s, 0.0)
        assert np.allclose(ops.Lz @ s - s @ ops.Lz, 0.0)
    for i in ops.I:
        assert np.allclose(ops.Lz @ i - i @ ops.Lz, 0.0)


def test_spin_casimir(ops):
    eye = np.eye(8)
    s2 = sum(op @ op for op in ops.S)
    i2 = sum(op @ op for op in ops.I)
    assert np.allclose(s2, 0.75 * eye)
    assert np.allclose(i2, 0.75 * eye)


def test_operators_are_read_only(ops):
    with pytest.raises(ValueError):
        ops.Sx[0, 0] = 1.0


def test_transform_block_is_as_printed():
    t, _ = strain_transform()
    assert t[0, 0] == -1.0 and t[0, 4] == -1.0j
    assert t[4, 0] == 1.0 and t[4, 4] == -1.0j


def test_transform_inverse_is_exact():
    t, t_inv = strain_transform()
    assert np.allclose(t @ t_inv, np.eye(8), atol=1e-15)
    assert np.allclose(t_inv @ t, np.eye(8), atol=1e-15)
    # t is sqrt(2) times a unitary, so the adjoint is not the inverse
    assert not np.allclose(t @ t.conj().T, np.eye(8))


def test_similarity_preserves_strain_spectrum():
    t, t_inv = strain_transform()
    rng = np.random.default_rng(5)
    for _ in range(10):
        alpha, beta = rng.uniform(-2e5, 2e5, size=2)
        block = np.kron(np.array([[alpha, beta], [beta, -alpha]]), np.eye(4))
        transformed = t @ block @ t_inv
        values = np.sort(np.linalg.eigvalsh(transformed))
        expected = np.sort([-np.hypot(alpha, beta)] * 4 + [np.hypot(alpha, beta)] * 4)
        assert np.allclose(values, expected, rtol=1e-12, atol=1e-8)
