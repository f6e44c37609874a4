"""
Superdense coding with a discriminable gate set.

Alice and Bob share ``|psi>`` on system (x) ancilla.  Alice encodes message
``i`` by applying ``U_i`` to the system and sends it; the codewords
``(U_i (x) I)|psi>`` are pairwise orthogonal exactly when the reduced density
of ``|psi>`` discriminates the gates, so Bob decodes by projecting onto them.
"""

from dataclasses import dataclass

import numpy as np

from .discrimination import AssistedState, density_to_state, state_to_density, verify
from .errors import Ambiguous, IndexOutOfRange, NotDiscriminating
from .gates import family_max


@dataclass(frozen=True)
class Codebook:
    d: int
    r: int
    base_state: AssistedState
    codewords: np.ndarray
    names: tuple

    def __len__(self):
        return len(self.names)

    def orthogonality_residual(self):
        C = self.codewords
        G = C.conj() @ C.T
        off = np.abs(G - np.diag(np.diag(G)))
        return float(off.max()) if off.size else 0.0

    def to_dict(self):
        return {
            "d": self.d,
            "r": self.r,
            "names": list(self.names),
            "base_state": self.base_state.amplitudes,
            "codewords": self.codewords,
        }


def apply_on_system(U, psi):
    """``(U (x) I_r) |psi>`` for the Kronecker layout of :class:`AssistedState`."""
    return (U @ psi.blocks()).reshape(-1)


def build_codebook(gates, psi, tol=1e-9):
    rho = state_to_density(psi)
    report = verify(gates, rho, min(psi.r, psi.d), tol)
    if not report.passed:
        raise NotDiscriminating(
            f"shared state does not discriminate the gates (residual {report.residual:.3e}, "
            f"rank {report.rank})"
        )
    words = np.array([apply_on_system(U, psi) for U in gates.matrices])
    book = Codebook(d=psi.d, r=psi.r, base_state=psi, codewords=words, names=tuple(gates.names))
    if book.orthogonality_residual() > max(1e-8, 2 * tol):
        raise NotDiscriminating("codewords are not orthogonal")
    return book


def encode(index, codebook):
    if not 0 <= index < len(codebook):
        raise IndexOutOfRange(f"message index {index} outside [0, {len(codebook)})")
    return codebook.codewords[index].copy()


def decode(state, codebook, tol=1e-9):
    """Index of the codeword with overlap ``>= 1 - tol`` (noiseless projective measurement)."""
    state = np.asarray(state, dtype=np.complex128).reshape(-1)
    if state.size != codebook.d * codebook.r:
        raise ValueError(f"state has {state.size} amplitudes, expected {codebook.d * codebook.r}")
    overlaps = np.abs(codebook.codewords.conj() @ state)
    best = int(np.argmax(overlaps))
    if overlaps[best] < 1.0 - tol:
        raise Ambiguous(f"largest overlap {overlaps[best]:.3e} below 1 - {tol:g}")
    return best


def capacity_bound(p, q):
    """Bits Alice can send with p qubits when Bob holds q qubits of entanglement."""
    if p < 0 or q < 0:
        raise ValueError("qubit counts must be nonnegative")
    return p + q


def bits_to_index(bits):
    """Big-endian bit string to message index: ``'101' -> 5``."""
    return int("".join(str(int(b)) for b in bits), 2) if len(bits) else 0


def index_to_bits(index, n):
    return format(index, f"0{n}b") if n else ""


def demo(p, q):
    """Roundtrip every ``(p+q)``-bit message through the family_max(2^p, 2^q) codebook.

    Returns ``(successes, total)``.
    """
    d, r = 2**p, 2**q
    gates, rho = family_max(d, r)
    psi = density_to_state(rho)
    book = build_codebook(gates, psi)
    n = capacity_bound(p, q)
    total = 2**n
    if len(book) != total:
        raise AssertionError(f"codebook has {len(book)} words, expected {total}")
    ok = 0
    for msg in range(total):
        bits = index_to_bits(msg, n)
        received = decode(encode(bits_to_index(bits), book), book)
        ok += index_to_bits(received, n) == bits
    return ok, total
