import math

import numpy as np
import pytest

from entnet import fock

from oracles import taylor_expm


def test_annihilation_dim2_matrix():
    space = fock.TruncatedSpace(2, 1)
    np.testing.assert_array_equal(
        fock.annihilation(space).matrix, np.array([[0, 1], [0, 0]], dtype=complex)
    )


@pytest.mark.parametrize("dim", [2, 3, 5])
def test_creation_maps_vacuum_to_one(dim):
    space = fock.TruncatedSpace(dim, 1)
    raised = fock.creation(space).matrix @ fock.vacuum_state(space).amplitudes
    expected = fock.fock_state(space, [1]).amplitudes
    np.testing.assert_allclose(raised, expected, atol=1e-15)


def test_annihilation_sqrt_entries():
    space = fock.TruncatedSpace(4, 1)
    a = fock.annihilation(space).matrix
    assert a[2, 3] == pytest.approx(math.sqrt(3))
    for n in range(1, 4):
        assert a[n - 1, n] == pytest.approx(math.sqrt(n))


def test_creation_is_adjoint_of_annihilation():
    space = fock.TruncatedSpace(6, 1)
    a = fock.annihilation(space).matrix
    adag = fock.creation(space).matrix
    np.testing.assert_array_equal(adag, a.conj().T)


def test_commutator_truncated_at_top_level():
    space = fock.TruncatedSpace(5, 1)
    a = fock.annihilation(space)
    comm = (a @ fock.creation(space)) - (fock.creation(space) @ a)
    # [a, a+] = 1 except on the top Fock level, where truncation bites.
    expected = np.eye(5, dtype=complex)
    expected[-1, -1] = -(5 - 1)
    np.testing.assert_allclose(comm.matrix, expected, atol=1e-14)


def test_space_rejects_small_cutoff():
    with pytest.raises(ValueError):
        fock.TruncatedSpace(1, 1)


def test_tensor_of_identities_is_identity():
    space = fock.TruncatedSpace(3, 1)
    eye2 = fock.tensor(fock.identity(space), fock.identity(space))
    np.testing.assert_array_equal(eye2.matrix, np.eye(9))
    assert eye2.space.n_modes == 2


def test_tensor_state_index_convention():
    space = fock.TruncatedSpace(4, 1)
    zero = fock.vacuum_state(space)
    one = fock.fock_state(space, [1])
    product = fock.tensor_state(zero, one)
    # |0>|1> must sit at index 0*dim + 1.
    nonzero = np.nonzero(product.amplitudes)[0]
    assert list(nonzero) == [1]


def test_tensor_three_identities_side():
    space = fock.TruncatedSpace(3, 1)
    eye3 = fock.tensor(*[fock.identity(space)] * 3)
    assert eye3.matrix.shape == (27, 27)


def test_tensor_rejects_mixed_cutoffs():
    with pytest.raises(ValueError):
        fock.tensor(
            fock.identity(fock.TruncatedSpace(2, 1)),
            fock.identity(fock.TruncatedSpace(3, 1)),
        )


def test_tensor_size_guard():
    space = fock.TruncatedSpace(64, 1)
    ops = [fock.identity(space)] * 5
    with pytest.raises(ValueError, match="exceeds"):
        fock.tensor(*ops)


def test_permute_identity_returns_input():
    space = fock.TruncatedSpace(3, 2)
    rng = np.random.default_rng(1)
    state = fock.StateVector(space, rng.normal(size=9) + 1j * rng.normal(size=9))
    out = fock.permute_modes(state, (0, 1))
    np.testing.assert_array_equal(out.amplitudes, state.amplitudes)


def test_permute_involution():
    space = fock.TruncatedSpace(2, 4)
    rng = np.random.default_rng(2)
    state = fock.StateVector(space, rng.normal(size=16) + 1j * rng.normal(size=16))
    twice = fock.permute_modes(fock.permute_modes(state, (0, 3, 2, 1)), (0, 3, 2, 1))
    np.testing.assert_array_equal(twice.amplitudes, state.amplitudes)


def test_permute_swaps_01_to_10():
    space = fock.TruncatedSpace(2, 2)
    state = fock.fock_state(space, [0, 1])
    swapped = fock.permute_modes(state, (1, 0))
    np.testing.assert_array_equal(swapped.amplitudes, fock.fock_state(space, [1, 0]).amplitudes)


def test_permute_preserves_amplitudes_exactly():
    # Amplitudes are moved, never recomputed: the multiset (and hence the
    # l2 norm) is preserved bit-for-bit.
    space = fock.TruncatedSpace(3, 3)
    rng = np.random.default_rng(3)
    amps = rng.normal(size=27) + 1j * rng.normal(size=27)
    state = fock.StateVector(space, amps)
    out = fock.permute_modes(state, (2, 0, 1))
    np.testing.assert_array_equal(
        np.sort_complex(out.amplitudes), np.sort_complex(state.amplitudes)
    )
    assert out.norm() == pytest.approx(state.norm(), rel=1e-15)


def test_permute_rejects_invalid():
    space = fock.TruncatedSpace(2, 3)
    state = fock.vacuum_state(space)
    with pytest.raises(ValueError):
        fock.permute_modes(state, (0, 1, 1))


def test_expm_of_zero_is_identity():
    space = fock.TruncatedSpace(3, 1)
    zero = fock.Operator(space, np.zeros((3, 3)))
    np.testing.assert_allclose(fock.expm(zero).matrix, np.eye(3), atol=1e-15)


def test_expm_diagonal_phases():
    space = fock.TruncatedSpace(3, 1)
    theta = np.array([0.3, -1.1, 2.5])
    op = fock.Operator(space, np.diag(1j * theta))
    np.testing.assert_allclose(
        fock.expm(op).matrix, np.diag(np.exp(1j * theta)), rtol=1e-12, atol=1e-14
    )


def test_expm_matches_taylor_series_for_squeeze_generator():
    # dim=2 two-mode squeeze generator against a term-by-term series sum.
    space = fock.TruncatedSpace(2, 1)
    a = fock.annihilation(space)
    ad = fock.creation(space)
    gen = 0.2j * (fock.tensor(ad, ad) + fock.tensor(a, a))
    expected = taylor_expm(gen.matrix, order=20)
    np.testing.assert_allclose(fock.expm(gen).matrix, expected, rtol=0, atol=1e-12)


def test_expm_rejects_nonfinite():
    space = fock.TruncatedSpace(2, 1)
    bad = fock.Operator(space, np.array([[np.inf, 0], [0, 0]]))
    with pytest.raises(ValueError):
        fock.expm(bad)


@pytest.mark.parametrize("seed", range(4))
def test_expm_antihermitian_is_unitary(seed):
    rng = np.random.default_rng(seed)
    n = 6
    h = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = h + h.conj().T
    space = fock.TruncatedSpace(6, 1)
    u = fock.expm(fock.Operator(space, 1j * h)).matrix
    np.testing.assert_allclose(u.conj().T @ u, np.eye(n), atol=1e-10)


def test_expectation_number_operator():
    space = fock.TruncatedSpace(4, 1)
    n_op = fock.number(space)
    assert fock.expectation(n_op, fock.vacuum_state(space)) == 0
    assert fock.expectation(n_op, fock.fock_state(space, [1])) == pytest.approx(1.0)


def test_expectation_identity_gives_norm_squared():
    space = fock.TruncatedSpace(3, 1)
    rng = np.random.default_rng(5)
    state = fock.StateVector(space, rng.normal(size=3) + 1j * rng.normal(size=3))
    value = fock.expectation(fock.identity(space), state)
    assert value.real == pytest.approx(state.norm() ** 2, rel=1e-14)
    assert value.imag == pytest.approx(0.0, abs=1e-14)


def test_expectation_rejects_mismatch():
    with pytest.raises(ValueError):
        fock.expectation(
            fock.identity(fock.TruncatedSpace(3, 1)),
            fock.vacuum_state(fock.TruncatedSpace(4, 1)),
        )


def test_expectation_psd_operator_nonnegative():
    space = fock.TruncatedSpace(4, 1)
    rng = np.random.default_rng(6)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    psd = fock.Operator(space, m @ m.conj().T)
    for seed in range(5):
        r = np.random.default_rng(seed)
        state = fock.StateVector(space, r.normal(size=4) + 1j * r.normal(size=4))
        value = fock.expectation(psd, state)
        assert value.real >= -1e-12
