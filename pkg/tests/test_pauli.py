import itertools

import numpy as np
import pytest

from memqec.codes import repetition_code
from memqec.pauli import (
    PauliString,
    basis_state,
    cnot_unitary,
    hadamard_all,
    is_unitary,
    ket,
    restricted_matrix,
)


def test_single_flip_on_qubit_one():
    # |000> -> |100>, which is index 1 with qubit 1 in bit 0
    assert PauliString(3, x_mask=0b001).apply(0) == (1, 1)


def test_identity_apply():
    ident = PauliString(3)
    for idx in range(8):
        assert ident.apply(idx) == (idx, 1)


def test_zz_phases():
    zz = PauliString(2, z_mask=0b11)
    assert zz.apply(3) == (3, 1)
    assert zz.apply(1) == (1, -1)


def test_apply_out_of_range():
    with pytest.raises(IndexError):
        PauliString(2, x_mask=1).apply(4)


@pytest.mark.parametrize("bad", [dict(x_mask=8), dict(z_mask=-1), dict(x_mask=1, z_mask=2)])
def test_invalid_masks(bad):
    with pytest.raises(ValueError):
        PauliString(3, **bad)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bitmask_matches_kronecker_exhaustively(n):
    for mask, kind in itertools.product(range(1 << n), ("x", "z")):
        ps = PauliString(n, **{f"{kind}_mask": mask})
        dense = ps.kron_matrix()
        np.testing.assert_array_equal(ps.matrix(), dense)
        for idx in range(1 << n):
            new, phase = ps.apply(idx)
            column = dense[:, idx]
            assert column[new] == phase
            assert np.count_nonzero(column) == 1


def test_cnot_truth_table():
    cx = cnot_unitary(1, 2, 2)
    np.testing.assert_allclose(cx @ ket("10"), ket("11"))
    np.testing.assert_allclose(cx @ ket("00"), ket("00"))
    np.testing.assert_allclose(cx @ ket("11"), ket("10"))


def test_fanout_encodes_three_qubits():
    u = cnot_unitary(1, 3, 3) @ cnot_unitary(1, 2, 3)
    np.testing.assert_allclose(u @ ket("100"), ket("111"))


def test_cnot_rejects_same_qubit():
    with pytest.raises(ValueError):
        cnot_unitary(2, 2, 3)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_unitarity(n):
    assert is_unitary(hadamard_all(n))
    for i, j in itertools.permutations(range(1, n + 1), 2):
        assert is_unitary(cnot_unitary(i, j, n))


def test_hadamard():
    h1 = hadamard_all(1)
    np.testing.assert_allclose(h1 @ basis_state(1, 0), np.array([1, 1]) / np.sqrt(2))
    psi = np.array([0.6, 0.8j])
    np.testing.assert_allclose(h1 @ (h1 @ psi), psi, atol=1e-15)
    plus3 = hadamard_all(3) @ basis_state(3, 0)
    np.testing.assert_allclose(plus3, np.full(8, 1 / np.sqrt(8)), atol=1e-15)


def test_restricted_identity():
    code = repetition_code(3)
    np.testing.assert_allclose(restricted_matrix(np.eye(8), code), np.eye(2))


def test_restricted_shape_mismatch():
    with pytest.raises(ValueError):
        restricted_matrix(np.eye(4), repetition_code(3))
