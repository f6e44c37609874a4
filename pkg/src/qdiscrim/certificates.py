"""
Structural impossibility certificates.

A certificate proves that no density operator of rank <= r satisfies every
trace constraint ``tr(U_i^dagger U_j rho) = 0``.  The argument is exact index
bookkeeping:

* every product ``U_i^dagger U_j`` that is a phase times ``X^a Z^b`` gives
  ``sum_v omega^(b v) rho[v, v+a] = 0``;
* if all ``b`` in ``[0, d)`` occur for one offset ``a``, the DFT (a Vandermonde
  matrix) is invertible, so the whole wrapped diagonal ``rho[v, v+a]`` is zero;
* if all ``b`` in ``[1, d)`` occur for ``a = 0``, the main diagonal is constant,
  hence equal to ``1/d`` because ``tr(rho) = 1``;
* zero wrapped diagonals ``1..m`` plus a constant positive main diagonal make
  the leading ``(m+1) x (m+1)`` block diagonal and nonsingular, so
  ``rank(rho) >= m + 1``.

Floating point only enters when products are classified as Paulis.
"""

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import StructureMismatch
from .gates import block_phase, pauli_xz


class Conclusion(str, enum.Enum):
    NOT_R_ASSISTED = "NotRAssisted"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class PauliConstraintSet:
    d: int
    constrained: frozenset
    non_pauli_pairs: tuple = ()
    identity_pairs: tuple = ()
    sources: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Certificate:
    zeroed_diagonals: tuple = ()
    principal_constant: bool = False
    rank_lower_bound: int = 0
    conclusion: Conclusion = Conclusion.INCONCLUSIVE
    r: int = None
    narrative: tuple = ()

    def __post_init__(self):
        if self.conclusion is Conclusion.NOT_R_ASSISTED and self.rank_lower_bound < self.r + 1:
            raise ValueError("NotRAssisted(r) needs rank_lower_bound >= r + 1")

    @property
    def not_r_assisted(self):
        return self.conclusion is Conclusion.NOT_R_ASSISTED

    def to_dict(self):
        return {
            "zeroed_diagonals": list(self.zeroed_diagonals),
            "principal_constant": self.principal_constant,
            "rank_lower_bound": self.rank_lower_bound,
            "conclusion": self.conclusion.value,
            "r": self.r,
            "narrative": list(self.narrative),
        }


def _match_pauli(P, d, tol):
    """Return ``(a, b, phase)`` if ``P = phase * X^a Z^b`` within ``tol``, else None."""
    u, v = np.unravel_index(int(np.argmax(np.abs(P))), P.shape)
    # a phase-Pauli has every nonzero entry of modulus 1 (>= 1/sqrt(d) for safety)
    if abs(P[u, v]) < 1.0 / np.sqrt(d):
        return None
    a = int((u - v) % d)
    for b in range(d):
        T = pauli_xz(d, a, b)
        phase = P[u, v] / T[u, v]
        if abs(abs(phase) - 1.0) > tol:
            continue
        if np.linalg.norm(P - phase * T) <= tol:
            return a, b, complex(phase / abs(phase))
    return None


def classify_pauli_products(gates, tol=1e-8):
    """Sort every ordered product ``U_i^dagger U_j`` (i != j) into Pauli constraints."""
    U = gates.matrices
    d = gates.d
    constrained = set()
    sources = {}
    non_pauli, identity = [], []
    for i in range(len(U)):
        for j in range(len(U)):
            if i == j:
                continue
            hit = _match_pauli(U[i].conj().T @ U[j], d, tol)
            if hit is None:
                non_pauli.append((i, j))
            elif hit[:2] == (0, 0):
                identity.append((i, j))
            else:
                constrained.add(hit[:2])
                sources.setdefault(hit[:2], (i, j))
    return PauliConstraintSet(
        d=d,
        constrained=frozenset(constrained),
        non_pauli_pairs=tuple(non_pauli),
        identity_pairs=tuple(identity),
        sources=sources,
    )


def forced_structure(constraints):
    """Wrapped diagonals forced to zero and whether the main diagonal is forced constant.

    Offset ``a`` labels entries ``rho[v, v + a mod d]``.  The Hermitian mirror
    (offset ``d - a``) is zero as well but is only listed when it is forced in
    its own right.
    """
    d = constraints.d
    by_offset = {}
    for a, b in constraints.constrained:
        by_offset.setdefault(a % d, set()).add(b % d)
    zeroed = tuple(sorted(a for a, bs in by_offset.items() if a != 0 and len(bs) == d))
    principal = set(range(1, d)) <= by_offset.get(0, set())
    narrative = []
    for a in zeroed:
        narrative.append(
            f"offset {a}: constraints for all {d} Z-exponents form an invertible DFT, "
            f"so rho[v, v+{a}] = 0 for every v"
        )
    if principal:
        narrative.append(
            f"offset 0: constraints Z^1..Z^{d - 1} leave only the all-ones direction, "
            f"so the diagonal of rho is constant (= 1/{d})"
        )
    return Certificate(zeroed_diagonals=zeroed, principal_constant=principal, narrative=tuple(narrative))


def _contiguous_run(zeroed):
    m = 0
    z = set(zeroed)
    while m + 1 in z:
        m += 1
    return m


def rank_bound_from_structure(cert, d):
    """Rank lower bound ``m + 1`` from zero wrapped diagonals ``1..m`` and a constant diagonal."""
    m = min(_contiguous_run(cert.zeroed_diagonals), d - 1)
    if cert.principal_constant and m >= 1:
        step = (
            f"leading {m + 1}x{m + 1} block has zero off-diagonals (offsets 1..{m} and "
            f"their mirrors) and diagonal 1/{d} > 0, so rank(rho) >= {m + 1}"
        )
        return replace(cert, rank_lower_bound=m + 1, narrative=cert.narrative + (step,))
    return replace(cert, rank_lower_bound=0)


def certify_not_r_assisted(gates, r, tol=1e-8):
    """Run classify -> forced_structure -> rank bound and conclude for ancilla dimension ``r``.

    Never asserts discriminability: the fallback is ``Inconclusive``.
    """
    cons = classify_pauli_products(gates, tol)
    d = gates.d
    if cons.identity_pairs:
        i, j = cons.identity_pairs[0]
        step = (
            f"gates {i} and {j} agree up to a global phase: tr(U_{i}^dag U_{j} rho) = "
            f"phase * tr(rho) != 0 for every density, at any rank"
        )
        return Certificate(
            rank_lower_bound=d + 1,
            conclusion=Conclusion.NOT_R_ASSISTED,
            r=r,
            narrative=(step,),
        )
    cert = rank_bound_from_structure(forced_structure(cons), d)
    if cert.rank_lower_bound >= r + 1:
        # the minor argument only needs the leading (r+1)x(r+1) block
        step = f"its leading {r + 1}x{r + 1} minor is nonzero, so no density of rank <= {r} exists"
        return replace(
            cert,
            rank_lower_bound=r + 1,
            conclusion=Conclusion.NOT_R_ASSISTED,
            r=r,
            narrative=cert.narrative + (step,),
        )
    return replace(cert, conclusion=Conclusion.INCONCLUSIVE, r=r)


# --- block family ---------------------------------------------------------


def _expected_block_layout(r):
    half = r // 2
    rows = []
    for i in range(1, half + 1):
        rows.append(((i, 0), (i, 0), "one"))
    for i in range(1, half + 1):
        rows.append(((-i, 0), (-i, 0), "omega"))
    for j in range(-half, half + 1):
        rows.append(((0, j), (0, j), "one"))
    rows.append(((0, 0), (0, 0), "minus"))
    return rows


def _match_block_gate(U, n1, n2, top, bottom, kind, tol):
    """Return the phase on the second block if ``U`` has the expected shape, else None."""
    if np.linalg.norm(U[:n1, n1:]) > tol or np.linalg.norm(U[n1:, :n1]) > tol:
        return None
    if np.linalg.norm(U[:n1, :n1] - pauli_xz(n1, *top)) > tol:
        return None
    B = pauli_xz(n2, *bottom)
    lower = U[n1:, n1:]
    phase = np.trace(B.conj().T @ lower) / n2
    if abs(abs(phase) - 1.0) > tol or np.linalg.norm(lower - phase * B) > tol:
        return None
    if kind == "one" and abs(phase - 1.0) > tol:
        return None
    if kind == "minus" and abs(phase + 1.0) > tol:
        return None
    return phase


def _root_order(z, max_order, tol=1e-9):
    for n in range(1, max_order + 1):
        if abs(z**n - 1.0) <= tol:
            return n
    return None


def _in_span(basis, target, tol):
    coeffs, *_ = np.linalg.lstsq(basis, target, rcond=None)
    resid = np.linalg.norm(basis @ coeffs - target)
    return resid <= tol * max(1.0, np.linalg.norm(target)), resid


def certify_block_family(d, r, gates, tol=1e-8):
    """Certificate for the ``2r + 2`` block family: no density of rank <= r discriminates it.

    The proof is replayed on the actual gate matrices:

    1. combine constraints linearly to cancel the second block, leaving
       ``X^a Z^b (+) 0`` on the leading ``(r+1)``-block (checked as membership in
       the span of the products ``U_i^dagger U_j``);
    2. DFT completeness over ``(r+1)``-th roots zeroes every off-diagonal of
       that block;
    3. ``Z^j (+) 0`` (j != 0) makes its diagonal constant and ``I (+) -I`` gives
       the trace balance, so the constant is ``1/(2(r+1)) > 0``;
    4. the block is a nonsingular diagonal, hence ``rank(rho) >= r + 1``.
    """
    n1, n2 = r + 1, d - r - 1
    if r < 2 or r % 2 or n2 < n1:
        raise StructureMismatch(f"(d={d}, r={r}) is not a valid block-family instance")
    if gates.d != d:
        raise StructureMismatch(f"gate dimension {gates.d} != {d}")
    layout = _expected_block_layout(r)
    if len(gates) != len(layout):
        raise StructureMismatch(f"expected {len(layout)} gates, got {len(gates)}")

    unused = list(range(len(gates)))
    phases = []
    for top, bottom, kind in layout:
        for idx in unused:
            ph = _match_block_gate(gates.matrices[idx], n1, n2, top, bottom, kind, tol)
            if ph is not None:
                unused.remove(idx)
                if kind == "omega":
                    phases.append(ph)
                break
        else:
            raise StructureMismatch(f"no gate matches block pattern {top} (+) {kind} {bottom}")
    w = phases[0]
    if any(abs(p - w) > tol for p in phases):
        raise StructureMismatch("mixed-shift gates carry different second-block phases")

    narrative = [f"gates match the {2 * r + 2}-gate block pattern with blocks {n1} (+) {n2}"]
    order = _root_order(w, max(n1, n2))
    if order is not None and (n1 % order == 0 or n2 % order == 0 or order == 1):
        narrative.append(
            f"warning: block phase is a root of unity of order {order}; "
            "cancellation of the second block may fail"
        )
    else:
        expected, prime = block_phase(d)
        note = f" (order-{prime} root)" if abs(w - expected) <= tol else ""
        narrative.append(f"block phase {w:.6f}{note} is not an (r+1)-th or (d-r-1)-th root of unity")

    U = gates.matrices
    k = len(U)
    prods = [U[i].conj().T @ U[j] for i in range(k) for j in range(k) if i != j]
    basis = np.stack([P.reshape(-1) for P in prods], axis=1)

    def block_op(top_matrix, bottom_matrix=None):
        lower = np.zeros((n2, n2)) if bottom_matrix is None else bottom_matrix
        M = np.zeros((d, d), dtype=np.complex128)
        M[:n1, :n1] = top_matrix
        M[n1:, n1:] = lower
        return M.reshape(-1)

    # steps 1 + 2: every X^a Z^b (+) 0 with a != 0 lies in the constraint span
    zeroed = []
    for a in range(1, n1):
        complete = True
        for b in range(n1):
            ok, resid = _in_span(basis, block_op(pauli_xz(n1, a, b)), tol)
            if not ok:
                complete = False
                narrative.append(f"X^{a}Z^{b} (+) 0 is not in the constraint span (residual {resid:.2e})")
                break
        if complete:
            zeroed.append(a)
    if zeroed == list(range(1, n1)):
        narrative.append(
            f"pairing constraints cancels the second block; for each offset 1..{r} all "
            f"{n1} Z-exponents appear, so the leading {n1}x{n1} block is diagonal"
        )
    # step 3: constant diagonal plus trace balance
    principal = all(_in_span(basis, block_op(pauli_xz(n1, 0, b)), tol)[0] for b in range(1, n1))
    balance, _ = _in_span(basis, block_op(np.eye(n1), -np.eye(n2)), tol)
    if principal and balance:
        narrative.append(
            f"Z^j (+) 0 constraints make the block diagonal constant; I (+) -I gives "
            f"sum of its diagonal = 1/2, so each entry is 1/{2 * n1} > 0"
        )
    if zeroed == list(range(1, n1)) and principal and balance:
        narrative.append(
            f"the leading {n1}x{n1} block is a nonsingular diagonal, so rank(rho) >= {n1} "
            f"and no density of rank <= {r} exists"
        )
        return Certificate(
            zeroed_diagonals=tuple(zeroed),
            principal_constant=True,
            rank_lower_bound=n1,
            conclusion=Conclusion.NOT_R_ASSISTED,
            r=r,
            narrative=tuple(narrative),
        )
    return Certificate(
        zeroed_diagonals=tuple(zeroed),
        principal_constant=bool(principal and balance),
        rank_lower_bound=0,
        conclusion=Conclusion.INCONCLUSIVE,
        r=r,
        narrative=tuple(narrative),
    )
