"""
Generalized Pauli operators and the gate families used throughout qdiscrim.

``X|k> = |k+1 mod d>`` and ``Z|k> = omega^k |k>`` with ``omega = exp(-2 pi i / d)``;
``pauli_xz(d, a, b)`` is ``X^a Z^b``.  The family constructors return
:class:`GateSet` objects (and witness densities where one is known).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .discrimination import DensityOperator, verify
from .errors import (
    DimensionMismatch,
    DimensionTooSmall,
    InvalidRank,
    OddRankUnsupported,
    RankTooLarge,
)
from .linalg import direct_sum, is_unitary

UNITARY_TOL = 1e-9


class GateSet:
    """Ordered, named collection of d x d unitaries.

    ``matrices`` is a ``(k, d, d)`` complex array.  ``metadata`` carries
    construction details such as the pre-deduplication gate count.
    """

    def __init__(self, d, names, matrices, metadata=None, unitary_tol=UNITARY_TOL):
        mats = np.asarray(matrices, dtype=np.complex128)
        if mats.ndim == 2:
            mats = mats[None]
        names = list(names)
        if mats.shape[1:] != (d, d):
            raise DimensionMismatch(f"gates have shape {mats.shape[1:]}, expected ({d}, {d})")
        if len(names) != mats.shape[0]:
            raise ValueError("number of names differs from number of matrices")
        if len(set(names)) != len(names):
            raise ValueError("gate names must be unique")
        for name, U in zip(names, mats):
            if not is_unitary(U, unitary_tol):
                raise ValueError(f"gate {name!r} is not unitary within {unitary_tol:g}")
        self.d = int(d)
        self.names = names
        self.matrices = mats
        self.metadata = dict(metadata or {})

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(zip(self.names, self.matrices))

    def __getitem__(self, i):
        return self.names[i], self.matrices[i]

    def subset(self, indices):
        idx = list(indices)
        return GateSet(self.d, [self.names[i] for i in idx], self.matrices[idx], self.metadata)

    def __repr__(self):
        return f"GateSet(d={self.d}, k={len(self)})"


@dataclass(frozen=True)
class PauliIndex:
    """``phase * X^a Z^b`` with exponents reduced mod d."""

    a: int
    b: int
    phase: complex = 1.0
    d: int = field(default=0, compare=False)

    def __post_init__(self):
        if abs(abs(self.phase) - 1.0) > 1e-9:
            raise ValueError("Pauli phase must have unit modulus")
        if self.d:
            object.__setattr__(self, "a", self.a % self.d)
            object.__setattr__(self, "b", self.b % self.d)

    def matrix(self):
        return self.phase * pauli_xz(self.d, self.a, self.b)


def omega(d):
    return np.exp(-2j * np.pi / d)


def pauli_xz(d, a, b):
    """``X^a Z^b``: entry ``(u, v)`` is ``omega^(b v)`` when ``u = v + a (mod d)``."""
    if d < 2:
        raise DimensionTooSmall("Pauli operators need d >= 2")
    a %= d
    b %= d
    v = np.arange(d)
    M = np.zeros((d, d), dtype=np.complex128)
    M[(v + a) % d, v] = np.exp(-2j * np.pi * b * v / d)
    return M


def pauli_name(a, b):
    return f"X^{a}Z^{b}"


def w_gate(d, r):
    """``diag(1, w, ..., w^(r-1), 1, ..., 1)`` with ``w = exp(-2 pi i / r)``."""
    if r < 2 or r > d:
        raise InvalidRank(f"W needs 2 <= r <= d, got r={r}, d={d}")
    diag = np.ones(d, dtype=np.complex128)
    diag[:r] = np.exp(-2j * np.pi * np.arange(r) / r)
    return np.diag(diag)


def family_max(d, r):
    """``r d`` gates that are r-assisted discriminable, with their witness.

    For ``r = 1`` these are the shifts ``X^i`` discriminated by ``|0><0|``; for
    ``r >= 2`` they are ``X^i W^j`` (``0 <= i < d``, ``0 <= j < r``) discriminated
    by the uniform mixture on the first ``r`` basis states.
    """
    if r < 1 or r > d:
        raise InvalidRank(f"need 1 <= r <= d, got r={r}, d={d}")
    names, mats = [], []
    if r == 1:
        for i in range(d):
            names.append(f"X^{i}W^0")
            mats.append(pauli_xz(d, i, 0))
        witness = np.zeros(d)
        witness[0] = 1.0
    else:
        W = w_gate(d, r)
        Wp = [np.linalg.matrix_power(W, j) for j in range(r)]
        for i in range(d):
            Xi = pauli_xz(d, i, 0)
            for j in range(r):
                names.append(f"X^{i}W^{j}")
                mats.append(Xi @ Wp[j])
        witness = np.zeros(d)
        witness[:r] = 1.0 / r
    gates = GateSet(d, names, mats, metadata={"family": "max", "d": d, "r": r})
    rho = DensityOperator.diagonal(witness)
    report = verify(gates, rho, r)
    if not report.passed:
        raise AssertionError(f"family_max witness failed verification: {report}")
    return gates, rho


def dedup_phase(gates, tol=1e-8):
    """Keep the first representative of each global-phase class, preserving order."""
    keep = []
    for idx, U in enumerate(gates.matrices):
        duplicate = False
        for j in keep:
            V = gates.matrices[j]
            ov = np.trace(V.conj().T @ U)
            if abs(ov) > 1e-12:
                if np.linalg.norm(U - (ov / abs(ov)) * V) <= tol:
                    duplicate = True
                    break
            elif np.linalg.norm(U - V) <= tol:
                duplicate = True
                break
        if not duplicate:
            keep.append(idx)
    out = gates.subset(keep)
    out.metadata = dict(gates.metadata)
    return out


def _pauli_list(d, exponents, metadata):
    names, mats, seen = [], [], set()
    for a, b in exponents:
        key = (a % d, b % d)
        name = pauli_name(*key)
        if name in seen:
            # exact exponent collision mod d; dedup_phase would drop it anyway
            continue
        seen.add(name)
        names.append(name)
        mats.append(pauli_xz(d, *key))
    return dedup_phase(GateSet(d, names, mats, metadata=metadata))


def family_sqrt_d(d):
    """O(sqrt d) Paulis: discriminable with a d-dimensional ancilla, not without one.

    ``p = ceil(sqrt(6 d))``; the rows are ``Z^j`` (1 <= j <= floor(p/2)),
    ``Z^(ip)``, ``X Z^(ip)`` and ``X^(d-1) Z^(ip)`` (0 <= i <= ceil(d/p)).
    """
    if d < 4:
        raise DimensionTooSmall("family_sqrt_d needs d >= 4")
    p = math.isqrt(6 * d - 1) + 1
    m = -(-d // p)
    rows = [(0, j) for j in range(1, p // 2 + 1)]
    rows += [(0, i * p) for i in range(m + 1)]
    rows += [(1, i * p) for i in range(m + 1)]
    rows += [(d - 1, i * p) for i in range(m + 1)]
    return _pauli_list(
        d,
        rows,
        {
            "family": "sqrt-d",
            "d": d,
            "p": p,
            "pre_dedup_count": len(rows),
            "count_formula": 3 * m + 3 + p // 2,
        },
    )


def family_sqrt_rd(d, r):
    """O(sqrt(r d)) Paulis that are d-assisted but not r-assisted discriminable.

    Union of ``X^i Z^j`` (i < p, j < q) and ``X^(-p i') Z^(-q j')``
    (i' <= ceil(r/p), j' <= ceil(d/q)) with ``p = ceil(sqrt r)``, ``q = ceil(sqrt d)``.
    """
    if r < 1 or r >= d:
        raise InvalidRank(f"family_sqrt_rd needs 1 <= r < d, got r={r}, d={d}")
    p = math.isqrt(r - 1) + 1
    q = math.isqrt(d - 1) + 1
    raw = [(i, j) for i in range(p) for j in range(q)]
    for i2 in range(-(-r // p) + 1):
        for j2 in range(-(-d // q) + 1):
            e = (-p * i2, -q * j2)
            if e not in raw:
                raw.append(e)
    return _pauli_list(
        d,
        raw,
        {
            "family": "sqrt-rd",
            "d": d,
            "r": r,
            "p": p,
            "q": q,
            "pre_dedup_count": len(raw),
            "count_formula": p * q + (-(-r // p) + 1) * (-(-d // q) + 1) - 1,
        },
    )


def smallest_prime_above(n):
    c = n + 1
    while True:
        if c >= 2 and all(c % f for f in range(2, math.isqrt(c) + 1)):
            return c
        c += 1


def block_phase(d):
    """Phase on the second block of the mixed-shift gates: a root of unity of large prime order."""
    p = smallest_prime_above(8 * d * d)
    return np.exp(2j * np.pi / p), p


def family_block(d, r):
    """``2r + 2`` block gates, d-assisted but not r-assisted discriminable (r even).

    Blocks have sizes ``r+1`` and ``d-r-1``.  Witness is
    ``I/(2(r+1)) (+) I/(2(d-r-1))``.
    """
    if r < 1:
        raise InvalidRank("r must be positive")
    if r % 2:
        raise OddRankUnsupported("family_block is only defined for even r")
    if 2 * (r + 1) > d:
        raise RankTooLarge(f"need r <= d/2 - 1, got r={r}, d={d}")
    n1, n2 = r + 1, d - r - 1
    half = r // 2
    w, prime = block_phase(d)
    names, mats, layout = [], [], []

    def add(top, bottom, phase, label):
        names.append(f"blk({len(names)})")
        mats.append(direct_sum(pauli_xz(n1, *top), phase * pauli_xz(n2, *bottom)))
        layout.append({"label": label, "top": list(top), "bottom": list(bottom)})

    for i in range(1, half + 1):
        add((i, 0), (i, 0), 1.0, f"X^{i}+X^{i}")
    for i in range(1, half + 1):
        add((-i, 0), (-i, 0), w, f"X^-{i}+wX^-{i}")
    for j in range(-half, half + 1):
        add((0, j), (0, j), 1.0, f"Z^{j}+Z^{j}")
    add((0, 0), (0, 0), -1.0, "I+(-I)")

    gates = GateSet(
        d,
        names,
        mats,
        metadata={"family": "block", "d": d, "r": r, "prime": prime, "layout": layout},
    )
    diag = np.concatenate([np.full(n1, 1.0 / (2 * n1)), np.full(n2, 1.0 / (2 * n2))])
    rho = DensityOperator.diagonal(diag)
    report = verify(gates, rho, d, tol=1e-10)
    if not report.passed:
        raise AssertionError(f"family_block witness failed verification: {report}")
    return gates, rho
