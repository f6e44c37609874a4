import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdiscrim.discrimination import (
    AssistedState,
    DensityOperator,
    density_to_factor,
    density_to_state,
    gram,
    max_bound,
    reduced_bound,
    state_to_density,
    verify,
)
from qdiscrim.errors import DimensionMismatch, InvalidRank, NotPSD
from qdiscrim.gates import GateSet, family_max, pauli_xz
from qdiscrim.linalg import random_density

X2 = pauli_xz(2, 1, 0)
Z2 = pauli_xz(2, 0, 1)


def test_density_validation():
    with pytest.raises(NotPSD):
        DensityOperator(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError):
        DensityOperator(np.eye(2))
    rho = DensityOperator.from_unnormalized(np.diag([2.0, 1e-14, 0.0]))
    assert rho.rank == 1 and np.isclose(rho.matrix[0, 0], 1)


def test_gram_examples():
    one = GateSet(3, ["I"], [np.eye(3)])
    assert np.allclose(gram(one, DensityOperator.maximally_mixed(3)), [[1]])
    ix = GateSet(2, ["I", "X"], [np.eye(2), X2])
    assert np.allclose(gram(ix, DensityOperator.diagonal([1, 0])), np.eye(2))
    iz = GateSet(2, ["I", "Z"], [np.eye(2), Z2])
    assert np.allclose(gram(iz, DensityOperator.maximally_mixed(2)), np.eye(2))


def test_gram_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        gram(GateSet(2, ["I"], [np.eye(2)]), DensityOperator.maximally_mixed(3))


def test_verify_examples():
    gates, rho = family_max(4, 2)
    rep = verify(gates, rho, 2)
    assert rep.passed and rep.residual <= 1e-12

    ix = GateSet(2, ["I", "X"], [np.eye(2), X2])
    rep = verify(ix, DensityOperator.maximally_mixed(2), 1)
    assert rep.residual == 0 and rep.rank == 2 and not rep.passed

    dup = GateSet(2, ["I", "I'"], [np.eye(2), np.eye(2)])
    rep = verify(dup, DensityOperator.diagonal([0.3, 0.7]), 2)
    assert not rep.passed and np.isclose(rep.residual, 1)
    assert rep.to_dict()["pass"] is False


def test_verify_rank_range():
    gates, rho = family_max(2, 1)
    with pytest.raises(InvalidRank):
        verify(gates, rho, 3)


def test_verify_monotone_in_rank():
    for d in range(2, 6):
        for r in range(1, d + 1):
            gates, rho = family_max(d, r)
            assert all(verify(gates, rho, r2).passed for r2 in range(r, d + 1))


def test_state_to_density_examples():
    bell = AssistedState(2, 2, np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert np.allclose(state_to_density(bell).matrix, np.eye(2) / 2)
    phi = np.array([0.6, 0.8j])
    prod = AssistedState(2, 1, phi)
    rho = state_to_density(prod)
    assert rho.rank == 1 and np.allclose(rho.matrix, np.outer(phi, phi.conj()))


def test_density_to_state_examples():
    psi = density_to_state(DensityOperator.diagonal([1, 0]))
    assert psi.r == 1 and np.allclose(psi.amplitudes, [1, 0])
    psi = density_to_state(DensityOperator.maximally_mixed(2))
    assert psi.r == 2
    assert np.allclose(state_to_density(psi).matrix, np.eye(2) / 2)
    # maximally entangled: every Schmidt coefficient is 1/sqrt(2)
    assert np.allclose(np.linalg.svd(psi.blocks(), compute_uv=False), [2**-0.5] * 2)


def test_density_to_factor_examples():
    S = density_to_factor(DensityOperator.diagonal([1, 0]))
    assert S.shape == (2, 1) and np.allclose(S[:, 0], [1, 0])
    S = density_to_factor(DensityOperator.maximally_mixed(2))
    assert np.allclose(S @ S.conj().T, np.eye(2) / 2)
    assert np.allclose(np.abs(S), np.eye(2) / np.sqrt(2))


def test_factor_columns_orthogonal_under_gates():
    gates, rho = family_max(4, 2)
    S = density_to_factor(rho)
    US = gates.matrices @ S
    G = np.einsum("iab,jab->ij", US.conj(), US)
    assert np.max(np.abs(G - np.diag(np.diag(G)))) <= 1e-12


def test_density_to_state_is_deterministic():
    rho = DensityOperator(random_density(5, 3, np.random.default_rng(2)))
    a, b = density_to_state(rho), density_to_state(rho)
    assert np.array_equal(a.amplitudes, b.amplitudes)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(1, 12), st.integers(0, 10**6))
def test_schmidt_rank_bound(d, r, seed):
    rng = np.random.default_rng(seed)
    amp = rng.standard_normal(d * r) + 1j * rng.standard_normal(d * r)
    rho = state_to_density(AssistedState(d, r, amp / np.linalg.norm(amp)))
    assert rho.rank <= min(d, r)
    assert np.isclose(np.trace(rho.matrix).real, 1)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), st.data())
def test_gram_hermitian_unit_diagonal(d, data):
    from qdiscrim.linalg import random_unitary

    rng = np.random.default_rng(data.draw(st.integers(0, 10**6)))
    k = data.draw(st.integers(1, 5))
    gates = GateSet(d, [str(i) for i in range(k)], [random_unitary(d, rng) for _ in range(k)])
    rho = DensityOperator(random_density(d, data.draw(st.integers(1, d)), rng))
    G = gram(gates, rho)
    assert np.allclose(G, G.conj().T)
    assert np.allclose(np.diag(G), 1)


@pytest.mark.parametrize("r,expected", [(5, 3), (2, 1), (10, 7), (1, 1)])
def test_reduced_bound(r, expected):
    assert reduced_bound(r) == expected


def test_bounds():
    assert max_bound(2, 1) == 2 and max_bound(4, 4) == 16
    for p in range(4):
        for q in range(p + 1):
            assert max_bound(2**p, 2**q) == 2 ** (p + q)
    for d in range(1, 17):
        for r in range(1, d + 1):
            assert reduced_bound(r) <= max_bound(d, r)
