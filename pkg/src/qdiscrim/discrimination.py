"""
The trace-orthogonality criterion for ancilla-assisted discrimination.

A set of gates ``U_1..U_k`` on a d-dimensional system is discriminable with an
r-dimensional ancilla iff some density operator ``rho`` of rank <= r satisfies
``tr(U_i^dagger U_j rho) = 0`` for all i != j.  This module holds the density
type, the Gram matrix of those traces, the verifier, and the conversions between
the three equivalent witnesses (assisted pure state, density, factor ``S`` with
``rho = S S^dagger``).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataIntegrityError, DimensionMismatch, InvalidRank, NotPSD
from .linalg import DEFAULT_REL_TOL, _rank_from_values, as_matrix, hermitian_eigen

GRAM_DIAGONAL_TOL = 1e-6


class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix with cached spectrum.

    Construction validates the invariants (each at 1e-9) and raises ValueError
    subclasses when they fail.
    """

    def __init__(self, matrix, rel_tol=DEFAULT_REL_TOL):
        M = as_matrix(matrix)
        self.eigen = hermitian_eigen(M)
        if self.eigen.values[-1] < -1e-9:
            raise NotPSD(f"min eigenvalue {self.eigen.values[-1]:.3e} < -1e-9")
        tr = np.trace(M)
        if abs(tr - 1.0) > 1e-9:
            raise ValueError(f"trace {tr} differs from 1 by more than 1e-9")
        self.matrix = 0.5 * (M + M.conj().T)
        self.rel_tol = rel_tol
        self.rank = _rank_from_values(self.eigen.values, rel_tol)

    @property
    def d(self):
        return self.matrix.shape[0]

    @classmethod
    def from_unnormalized(cls, matrix, rel_tol=DEFAULT_REL_TOL):
        """Clamp numerically-zero and slightly negative eigenvalues, then renormalize."""
        eig = hermitian_eigen(matrix)
        if eig.values[-1] < -1e-9 * max(1.0, abs(eig.values[0])):
            raise NotPSD(f"min eigenvalue {eig.values[-1]:.3e} is not within tolerance of 0")
        scale = max(1.0, float(np.max(np.abs(eig.values))))
        lam = np.where(eig.values > rel_tol * scale, eig.values, 0.0)
        if lam.sum() <= 0:
            raise NotPSD("matrix has no positive spectrum")
        lam = lam / lam.sum()
        return cls((eig.vectors * lam) @ eig.vectors.conj().T, rel_tol=rel_tol)

    @classmethod
    def maximally_mixed(cls, d):
        return cls(np.eye(d) / d)

    @classmethod
    def diagonal(cls, entries):
        return cls(np.diag(np.asarray(entries, dtype=np.complex128)))

    def support(self):
        """Isometry whose columns span the support (eigenvectors of nonzero eigenvalues)."""
        return self.eigen.vectors[:, : self.rank]

    def __repr__(self):
        return f"DensityOperator(d={self.d}, rank={self.rank})"


@dataclass(frozen=True)
class AssistedState:
    """Pure state on system (x) ancilla, amplitudes in Kronecker order.

    Amplitude index is ``s * r + l`` for system index ``s`` and ancilla label
    ``l``, so ``psi.reshape(d, r)[:, l]`` is the unnormalized ``|psi_l>``.
    """

    d: int
    r: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amp.size != self.d * self.r:
            raise DimensionMismatch(f"expected {self.d * self.r} amplitudes, got {amp.size}")
        if abs(np.linalg.norm(amp) - 1.0) > 1e-9:
            raise ValueError("assisted state is not unit norm")
        object.__setattr__(self, "amplitudes", amp)

    def blocks(self):
        """``d x r`` matrix whose l-th column is ``|psi_l>``."""
        return self.amplitudes.reshape(self.d, self.r)


@dataclass(frozen=True)
class DiscriminationReport:
    residual: float
    rank: int
    rank_bound: int
    passed: bool
    worst_pair: tuple
    tol: float

    def to_dict(self):
        return {
            "residual": self.residual,
            "rank": self.rank,
            "rank_bound": self.rank_bound,
            "pass": self.passed,
            "worst_pair": list(self.worst_pair),
            "tol": self.tol,
        }


def _matrices(gates):
    return getattr(gates, "matrices", gates)


def gram(gates, rho):
    """``G[i, j] = tr(U_i^dagger U_j rho)`` for a gate set and a density operator."""
    U = np.asarray(_matrices(gates), dtype=np.complex128)
    R = rho.matrix if isinstance(rho, DensityOperator) else as_matrix(rho)
    if U.shape[1:] != R.shape:
        raise DimensionMismatch(f"gates act on {U.shape[1:]}, density is {R.shape}")
    # tr(U_i^dag U_j rho) = <U_i A, U_j A> for any factor; here directly via U_j rho
    URho = U @ R
    G = np.einsum("iab,jab->ij", U.conj(), URho)
    return G


def verify(gates, rho, r, tol=1e-9):
    """Check that ``rho`` discriminates ``gates`` with an ancilla of dimension ``r``."""
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    d = rho.d
    if not 1 <= r <= d:
        raise InvalidRank(f"rank bound {r} outside [1, {d}]")
    G = gram(gates, rho)
    diag_err = np.max(np.abs(np.diag(G) - 1.0)) if G.size else 0.0
    if diag_err > GRAM_DIAGONAL_TOL:
        raise DataIntegrityError(f"Gram diagonal deviates from 1 by {diag_err:.3e}")
    k = G.shape[0]
    if k < 2:
        residual, worst = 0.0, (0, 0)
    else:
        off = np.abs(G - np.diag(np.diag(G)))
        idx = int(np.argmax(off))
        worst = divmod(idx, k)
        residual = float(off.flat[idx])
    passed = residual <= tol and rho.rank <= r
    return DiscriminationReport(
        residual=residual,
        rank=rho.rank,
        rank_bound=r,
        passed=bool(passed),
        worst_pair=(int(worst[0]), int(worst[1])),
        tol=tol,
    )


def state_to_density(psi):
    """Reduced operator ``sum_l |psi_l><psi_l|`` on the system."""
    B = psi.blocks()
    return DensityOperator(B @ B.conj().T)


def _canonical_phase(V, tol=1e-12):
    # make the first non-negligible component of every column real-positive
    V = V.copy()
    for c in range(V.shape[1]):
        col = V[:, c]
        nz = np.flatnonzero(np.abs(col) > tol)
        if nz.size:
            z = col[nz[0]]
            V[:, c] = col * (abs(z) / z)
    return V


def _canonical_eigenspace(V):
    """Basis-independent orthonormal basis of ``span(V)``: Gram-Schmidt on the projector's columns."""
    P = V @ V.conj().T
    basis = []
    for col in P.T:
        w = col - sum(np.vdot(b, col) * b for b in basis) if basis else col.copy()
        n = np.linalg.norm(w)
        if n > 1e-6:
            basis.append(w / n)
            if len(basis) == V.shape[1]:
                break
    return np.array(basis).T


def _canonical_vectors(values, V, rel_tol=1e-9):
    """Eigenvectors with each degenerate cluster replaced by its canonical basis."""
    V = V.copy()
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    start = 0
    for stop in range(1, len(values) + 1):
        if stop == len(values) or abs(values[stop] - values[start]) > rel_tol * scale:
            if stop - start > 1:
                V[:, start:stop] = _canonical_eigenspace(V[:, start:stop])
            start = stop
    return _canonical_phase(V)


def density_to_factor(rho):
    """``S`` (d x rank) with ``S S^dagger = rho``, columns are scaled eigenvectors."""
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    t = rho.rank
    lam = np.clip(rho.eigen.values[:t], 0.0, None)
    V = _canonical_vectors(lam, rho.eigen.vectors[:, :t])
    return V * np.sqrt(lam)


def density_to_state(rho):
    """Purification with an ancilla of dimension ``rank(rho)`` in the computational basis."""
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    S = density_to_factor(rho)
    d, t = S.shape
    amp = S.reshape(-1)
    amp = amp / np.linalg.norm(amp)
    return AssistedState(d=d, r=t, amplitudes=amp)


def max_bound(d, r):
    """At most ``r * d`` gates are r-assisted discriminable on a d-dimensional system."""
    if d < 1 or r < 1:
        raise ValueError("d and r must be positive")
    return r * d


def reduced_bound(r):
    """``floor((sqrt(3(r-1)^2 - 19) + 1) / 2)``, clamped to 1 when the radicand is negative."""
    if r < 1:
        raise ValueError("r must be positive")
    radicand = 3 * (r - 1) ** 2 - 19
    if radicand < 0:
        return 1
    # floor((sqrt(n) + 1) / 2) == (isqrt(n) + 1) // 2 for integer n >= 0
    return max(1, (math.isqrt(radicand) + 1) // 2)
