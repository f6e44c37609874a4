"""
Dense complex linear algebra primitives.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
The Hermitian eigensolver is LAPACK's ``zheevd`` (through ``numpy.linalg.eigh``)
with the output re-sorted so eigenvalues come out in descending order.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotHermitian, NotPSD

DEFAULT_REL_TOL = 1e-9


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (real, descending) and eigenvectors (columns of a unitary)."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self):
        return (self.vectors * self.values) @ self.vectors.conj().T


def as_matrix(M):
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def dagger(M):
    return np.conj(np.swapaxes(M, -1, -2))


def is_hermitian(M, tol=1e-9):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    return np.linalg.norm(M - M.conj().T) <= tol * max(1.0, np.linalg.norm(M))


def _check_hermitian(M):
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise NotHermitian(f"matrix is not square: {M.shape}")
    if not is_hermitian(M):
        raise NotHermitian("matrix is not Hermitian within 1e-9 relative Frobenius norm")
    return M


def hermitian_eigen(M):
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.

    Raises NotHermitian when ``||M - M^dagger||_F`` exceeds ``1e-9 * max(1, ||M||_F)``.
    """
    M = _check_hermitian(M)
    # symmetrize so tiny anti-Hermitian noise never reaches LAPACK
    H = 0.5 * (M + M.conj().T)
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    order = np.argsort(w, kind="stable")[::-1]
    return EigenDecomposition(values=w[order].copy(), vectors=V[:, order].copy())


def _rank_from_values(values, rel_tol):
    if values.size == 0:
        return 0
    scale = max(1.0, float(np.max(np.abs(values))))
    return int(np.sum(np.abs(values) > rel_tol * scale))


def numerical_rank(M, rel_tol=DEFAULT_REL_TOL):
    """Number of eigenvalues with ``|lambda| > rel_tol * max(1, |lambda|_max)``."""
    if not 0 < rel_tol < 1:
        raise ValueError("rel_tol must lie in (0, 1)")
    return _rank_from_values(hermitian_eigen(M).values, rel_tol)


def psd_root(rho, rel_tol=DEFAULT_REL_TOL):
    """Symmetric square root ``A = V sqrt(Lambda) V^dagger`` so that ``A^dagger A = rho``.

    Eigenvalues in ``[-rel_tol, 0)`` are clamped to zero; anything more negative
    raises NotPSD.
    """
    eig = hermitian_eigen(rho)
    if eig.values.size and eig.values[-1] < -rel_tol:
        raise NotPSD(f"eigenvalue {eig.values[-1]:.3e} below -{rel_tol:g}")
    scale = max(1.0, float(np.max(np.abs(eig.values)))) if eig.values.size else 1.0
    lam = np.where(eig.values > rel_tol * scale, eig.values, 0.0)
    V = eig.vectors
    return (V * np.sqrt(lam)) @ V.conj().T


def direct_sum(M1, M2):
    """Block-diagonal ``M1 (+) M2``; off-diagonal blocks are exact zeros."""
    M1 = as_matrix(M1)
    M2 = as_matrix(M2)
    if M1.shape[0] != M1.shape[1] or M2.shape[0] != M2.shape[1]:
        raise ValueError("direct_sum expects square blocks")
    n1, n2 = M1.shape[0], M2.shape[0]
    out = np.zeros((n1 + n2, n1 + n2), dtype=np.complex128)
    out[:n1, :n1] = M1
    out[n1:, n1:] = M2
    return out


def is_unitary(U, tol=1e-9):
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])) <= tol


def random_unitary(d, rng):
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def random_density(d, rank, rng):
    """Random density operator of the given rank, ``B B^dagger / tr`` with ``B`` d x rank."""
    B = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = B @ B.conj().T
    return rho / np.trace(rho).real
