import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdiscrim.certificates import classify_pauli_products
from qdiscrim.discrimination import DensityOperator, verify
from qdiscrim.errors import InvalidRank, OddRankUnsupported, RankTooLarge
from qdiscrim.gates import (
    GateSet,
    dedup_phase,
    family_block,
    family_max,
    family_sqrt_d,
    family_sqrt_rd,
    omega,
    pauli_xz,
    w_gate,
)


def test_pauli_examples():
    assert np.allclose(pauli_xz(2, 1, 0), [[0, 1], [1, 0]])
    assert np.allclose(pauli_xz(4, 0, 1), np.diag([1, -1j, -1, 1j]))
    assert np.allclose(pauli_xz(2, 1, 1), [[0, -1], [1, 0]])


def test_pauli_exponents_wrap():
    assert np.allclose(pauli_xz(5, 7, -3), pauli_xz(5, 2, 2))


@pytest.mark.parametrize("d", range(2, 9))
def test_commutation_exhaustive(d):
    # X^a Z^b X^a' Z^b' = w^(a' b) X^(a+a') Z^(b+b'), since Z X = w X Z
    w = omega(d)
    P = {(a, b): pauli_xz(d, a, b) for a in range(d) for b in range(d)}
    for (a, b), (a2, b2) in itertools.product(P, repeat=2):
        lhs = P[a, b] @ P[a2, b2]
        rhs = w ** (a2 * b) * P[(a + a2) % d, (b + b2) % d]
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_w_gate():
    assert np.allclose(w_gate(4, 2), np.diag([1, -1, 1, 1]))
    z = np.exp(-2j * np.pi / 3)
    assert np.allclose(w_gate(3, 3), np.diag([1, z, z**2]))
    for d in range(2, 7):
        for r in range(2, d + 1):
            assert np.allclose(np.linalg.matrix_power(w_gate(d, r), r), np.eye(d))
    with pytest.raises(InvalidRank):
        w_gate(3, 1)
    with pytest.raises(InvalidRank):
        w_gate(3, 4)


def test_family_max_d2_r1():
    gates, rho = family_max(2, 1)
    assert len(gates) == 2
    assert np.allclose(gates.matrices[0], np.eye(2))
    assert np.allclose(rho.matrix, np.diag([1, 0]))


def test_family_max_d4_r2():
    gates, rho = family_max(4, 2)
    assert len(gates) == 8
    assert np.allclose(rho.matrix, np.diag([0.5, 0.5, 0, 0]))
    assert verify(gates, rho, 2).residual <= 1e-12


@pytest.mark.parametrize("d", range(2, 7))
def test_family_max_counts(d):
    for r in range(1, d + 1):
        gates, rho = family_max(d, r)
        assert len(gates) == r * d
        assert verify(gates, rho, r).passed
        for U in gates.matrices:
            assert np.linalg.norm(U.conj().T @ U - np.eye(d)) <= 1e-12


def test_family_max_rejects_bad_rank():
    with pytest.raises(InvalidRank):
        family_max(3, 4)


def test_family_sqrt_d_9():
    gates = family_sqrt_d(9)
    assert gates.metadata["p"] == 8
    assert gates.metadata["pre_dedup_count"] == 13 == gates.metadata["count_formula"]
    assert verify(gates, DensityOperator.maximally_mixed(9), 9).passed


@pytest.mark.parametrize("d", range(4, 13))
def test_family_sqrt_d_products_are_traceless_paulis(d):
    gates = family_sqrt_d(d)
    cons = classify_pauli_products(gates)
    assert not cons.non_pauli_pairs and not cons.identity_pairs
    assert len(gates) <= gates.metadata["count_formula"]


def test_family_sqrt_rd_4_2():
    gates = family_sqrt_rd(4, 2)
    assert gates.metadata["pre_dedup_count"] == 9 == gates.metadata["count_formula"]
    assert len(gates) == 7
    assert verify(gates, DensityOperator.maximally_mixed(4), 4).passed


@pytest.mark.parametrize("d,r", [(d, r) for d in range(2, 10) for r in range(1, d)])
def test_family_sqrt_rd_coverage(d, r):
    have = classify_pauli_products(family_sqrt_rd(d, r)).constrained
    need = {(i % d, j) for i in range(r + 1) for j in range(d) if (i % d, j) != (0, 0)}
    assert need <= have


def test_family_sqrt_rd_rejects_full_rank():
    with pytest.raises(InvalidRank):
        family_sqrt_rd(4, 4)


def test_family_block_8_2():
    gates, rho = family_block(8, 2)
    assert len(gates) == 6
    assert np.allclose(np.diag(rho.matrix), [1 / 6] * 3 + [1 / 10] * 5)
    assert verify(gates, rho, 8).residual <= 1e-10
    assert gates.metadata["prime"] == 521


@pytest.mark.parametrize("d,r", [(6, 2), (12, 4), (14, 6)])
def test_family_block_counts(d, r):
    gates, rho = family_block(d, r)
    assert len(gates) == 2 * r + 2
    assert verify(gates, rho, d).passed


def test_family_block_errors():
    with pytest.raises(OddRankUnsupported):
        family_block(8, 3)
    with pytest.raises(RankTooLarge):
        family_block(8, 4)


def test_dedup_phase_examples():
    X = pauli_xz(2, 1, 0)
    g = GateSet(2, ["I", "-I", "X"], [np.eye(2), -np.eye(2), X])
    assert dedup_phase(g).names == ["I", "X"]
    g = GateSet(2, ["I", "X", "X'"], [np.eye(2), X, X])
    assert dedup_phase(g).names == ["I", "X"]


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.floats(0, 2 * np.pi), st.integers(0, 10**6))
def test_dedup_phase_random_phases(d, theta, seed):
    from qdiscrim.linalg import random_unitary

    rng = np.random.default_rng(seed)
    U, V = random_unitary(d, rng), random_unitary(d, rng)
    g = GateSet(d, ["U", "V", "eU"], [U, V, np.exp(1j * theta) * U])
    assert dedup_phase(g).names == ["U", "V"]


def test_gateset_validation():
    with pytest.raises(ValueError):
        GateSet(2, ["A"], [np.array([[1, 1], [0, 1]])])
    with pytest.raises(ValueError):
        GateSet(2, ["A", "A"], [np.eye(2), np.eye(2)])
