import numpy as np
import pytest

from qdiscrim.discrimination import AssistedState, density_to_state, verify
from qdiscrim.errors import Ambiguous, IndexOutOfRange, NotDiscriminating
from qdiscrim.gates import GateSet, family_max, pauli_xz
from qdiscrim.sdc import (
    apply_on_system,
    bits_to_index,
    build_codebook,
    capacity_bound,
    decode,
    demo,
    encode,
    index_to_bits,
)

BELL = AssistedState(2, 2, np.array([1, 0, 0, 1]) / np.sqrt(2))
X, Z = pauli_xz(2, 1, 0), pauli_xz(2, 0, 1)


def bell_book():
    gates = GateSet(2, ["I", "X", "Z", "XZ"], [np.eye(2), X, Z, X @ Z])
    return build_codebook(gates, BELL)


def test_bell_codebook():
    book = bell_book()
    assert len(book) == 4 and book.orthogonality_residual() <= 1e-12
    assert np.allclose(encode(0, book), BELL.amplitudes)
    assert np.allclose(encode(1, book), np.kron(X, np.eye(2)) @ BELL.amplitudes)
    assert [decode(encode(i, book), book) for i in range(4)] == [0, 1, 2, 3]


def test_single_codeword():
    book = build_codebook(GateSet(2, ["I"], [np.eye(2)]), BELL)
    assert len(book) == 1 and book.orthogonality_residual() == 0


def test_errors():
    with pytest.raises(NotDiscriminating):
        build_codebook(GateSet(2, ["I", "I'"], [np.eye(2), np.eye(2)]), BELL)
    book = bell_book()
    with pytest.raises(IndexOutOfRange):
        encode(4, book)
    with pytest.raises(Ambiguous):
        decode((encode(0, book) + encode(1, book)) / np.sqrt(2), book)


def test_decode_orthogonal_input():
    book = build_codebook(GateSet(2, ["I", "X"], [np.eye(2), X]), BELL)
    with pytest.raises(Ambiguous):
        decode(apply_on_system(Z, BELL), book)


def test_kronecker_action_matches_kron():
    rng = np.random.default_rng(4)
    amp = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    psi = AssistedState(3, 2, amp / np.linalg.norm(amp))
    U = pauli_xz(3, 1, 2)
    assert np.allclose(apply_on_system(U, psi), np.kron(U, np.eye(2)) @ psi.amplitudes)


@pytest.mark.parametrize("p,q", [(p, q) for p in range(1, 4) for q in range(p + 1)])
def test_family_max_codebooks(p, q):
    d, r = 2**p, 2**q
    gates, rho = family_max(d, r)
    book = build_codebook(gates, density_to_state(rho))
    assert len(book) == 2 ** (p + q)
    # codeword overlaps are exactly the Gram entries of (gates, rho)
    assert book.orthogonality_residual() <= 2 * max(verify(gates, rho, r).residual, 1e-15)
    assert all(decode(encode(i, book), book) == i for i in range(len(book)))


def test_demo_and_capacity():
    assert demo(1, 1) == (4, 4)
    assert demo(2, 2) == (16, 16)
    assert capacity_bound(1, 1) == 2 and capacity_bound(2, 2) == 4 and capacity_bound(3, 0) == 3


def test_bits_roundtrip():
    assert bits_to_index("101") == 5
    assert index_to_bits(5, 4) == "0101"
    for n in range(6):
        assert all(bits_to_index(index_to_bits(i, n)) == i for i in range(2**n))
