"""
Lowering the rank of a discriminating density while keeping every constraint.

One step, for a witness ``rho`` of rank ``t`` supported on the isometry ``V``:

1. find a nonzero ``H0 = V Y V^dagger`` with ``rank(Y) <= floor((t-1)/2)`` and
   ``tr(U_i^dagger U_j H0) = 0`` for all i != j;
2. make it Hermitian: ``H = H0 + H0^dagger`` (or ``i(H0 - H0^dagger)`` if that vanishes);
3. pick ``lambda`` so that ``rho - lambda H`` is PSD with a zero eigenvalue on the support;
4. renormalize.

Constraints are linear, so ``rho - lambda H`` still satisfies all of them, and the
rank drops by at least one.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .discrimination import DensityOperator, reduced_bound, verify
from .errors import (
    AnnihilatorNotFound,
    DegenerateTrace,
    InsufficientRoom,
    InvalidRank,
    ReductionStalled,
    SingularDensity,
    ZeroInput,
)
from .linalg import hermitian_eigen, psd_root
from .search import SearchOptions

log = logging.getLogger(__name__)

ANNIHILATOR_TOL = 1e-11
INNER_TOL = 1e-12


@dataclass(frozen=True)
class ReductionStep:
    rank_before: int
    rank_after: int
    residual_after: float
    restarts_used: int

    def to_dict(self):
        return {
            "rank_before": self.rank_before,
            "rank_after": self.rank_after,
            "residual_after": self.residual_after,
            "restarts_used": self.restarts_used,
        }


@dataclass
class ReductionTrace:
    steps: list = field(default_factory=list)
    final: DensityOperator = None

    def to_dict(self):
        return {
            "steps": [s.to_dict() for s in self.steps],
            "final_rank": None if self.final is None else self.final.rank,
        }


def _constraint_ops(gates, support):
    """``K_ij = V^dagger U_i^dagger U_j V`` for all ordered pairs i != j, shape (m, t, t)."""
    U = gates.matrices
    k = len(U)
    UV = U @ support
    ops = [UV[i].conj().T @ UV[j] for i in range(k) for j in range(k) if i != j]
    t = support.shape[1]
    return np.array(ops).reshape(len(ops), t, t)


def _null_direction(M):
    """Unit vector minimizing ``||M x||`` and the attained value."""
    if M.shape[0] < M.shape[1]:
        # wide system: an exact null vector exists
        _, s, Vh = np.linalg.svd(M, full_matrices=True)
        return Vh[-1].conj(), 0.0 if s.size < M.shape[1] else float(s[-1])
    _, s, Vh = np.linalg.svd(M, full_matrices=False)
    return Vh[-1].conj(), float(s[-1])


def _als_restart(K, t, s, max_iters, rng):
    """Alternating least squares for ``Y = B C`` (B: t x s, C: s x t) with ``tr(K_m Y) ~ 0``."""
    m = K.shape[0]
    B = rng.standard_normal((t, s)) + 1j * rng.standard_normal((t, s))
    # tr(K Y) = sum_{ab} K[b, a] Y[a, b]
    KT = np.swapaxes(K, 1, 2)  # KT[m, a, b] = K[m, b, a]
    prev = math.inf
    C = None
    val = math.inf
    for _ in range(max_iters):
        B, _ = np.linalg.qr(B)
        # tr(K B C) = sum_{c, b} (KT^T B)... linear in C: coefficient of C[c, b] is sum_a KT[m, a, b] B[a, c]
        MB = np.einsum("mab,ac->mcb", KT, B).reshape(m, s * t)
        x, val = _null_direction(MB)
        C = x.reshape(s, t)
        if val <= INNER_TOL or prev - val <= INNER_TOL * max(prev, 1e-300):
            break
        prev = val
        # fix C (orthonormal rows), solve for B
        Q, _ = np.linalg.qr(C.conj().T)
        C = Q.conj().T
        MC = np.einsum("mab,cb->mac", KT, C).reshape(m, t * s)
        x, val = _null_direction(MC)
        B = x.reshape(t, s)
        if val <= INNER_TOL:
            Y = B @ C
            return Y / np.linalg.norm(Y)
    Y = B @ C
    return Y / np.linalg.norm(Y)


def _annihilator_residual(gates, H0):
    U = gates.matrices
    k = len(U)
    nrm = np.linalg.norm(H0)
    if k < 2 or nrm == 0:
        return 0.0 if nrm else math.inf
    UH = U @ H0
    G = np.einsum("iab,jba->ij", U.conj().transpose(0, 2, 1), UH)
    off = np.abs(G - np.diag(np.diag(G)))
    return float(off.max()) / nrm


def find_annihilator(gates, support, s, opts=None, tol=ANNIHILATOR_TOL):
    """Nonzero ``H0 = V Y V^dagger`` with ``rank(Y) <= s`` annihilating every ``U_i^dagger U_j``.

    Every restart runs; among those reaching ``tol`` the smallest residual wins
    (ties by restart index), so the result is fixed by ``(opts.seed, opts.restarts)``.
    Returns ``(H0, restarts_used)``.
    """
    opts = opts or SearchOptions()
    V = np.asarray(support, dtype=np.complex128)
    d, t = V.shape
    k = len(gates)
    if t < 2:
        raise InvalidRank("support must have at least 2 columns")
    if s < 1 or s > t:
        raise InvalidRank(f"rank cap s={s} outside [1, {t}]")
    if k * (k - 1) >= t * t:
        raise InsufficientRoom(f"k(k-1) = {k * (k - 1)} >= t^2 = {t * t}")
    if k < 2:
        rng = np.random.default_rng(np.random.SeedSequence(opts.seed).spawn(1)[0])
        b = rng.standard_normal((t, s)) + 1j * rng.standard_normal((t, s))
        c = rng.standard_normal((s, t)) + 1j * rng.standard_normal((s, t))
        Y = b @ c
        return V @ (Y / np.linalg.norm(Y)) @ V.conj().T, 1

    K = _constraint_ops(gates, V)
    seeds = np.random.SeedSequence(opts.seed).spawn(opts.restarts)
    best = None
    best_any = math.inf
    for n, seq in enumerate(seeds):
        Y = _als_restart(K, t, s, opts.max_iters, np.random.default_rng(seq))
        H0 = V @ Y @ V.conj().T
        res = _annihilator_residual(gates, H0)
        best_any = min(best_any, res)
        if res <= tol and (best is None or res < best[0]):
            best = (res, n, H0)
    if best is None:
        raise AnnihilatorNotFound(
            f"no rank-<={s} annihilator on a {t}-dim support after {opts.restarts} restarts "
            f"(best residual {best_any:.3e})"
        )
    return best[2], opts.restarts


def hermitize(H0, tol=1e-9):
    """``H0 + H0^dagger`` unless it vanishes (relative to ``||H0||``), else ``i(H0 - H0^dagger)``."""
    H0 = np.asarray(H0, dtype=np.complex128)
    nrm = np.linalg.norm(H0)
    if nrm == 0:
        raise ZeroInput("H0 is zero")
    H = H0 + H0.conj().T
    if np.linalg.norm(H) > tol * nrm:
        return H
    return 1j * (H0 - H0.conj().T)


def _other_branch(H0):
    return 1j * (H0 - H0.conj().T)


def mixing_coefficient(rho_t, H_t, rel_tol=1e-9):
    """``lambda`` making ``rho_t - lambda H_t`` PSD with a zero eigenvalue.

    With ``rho_t = A^dagger A`` and ``M = A^-dagger H_t A^-1`` (eigenvalues
    ``d_1 >= ... >= d_t``): ``lambda = 1/d_1`` if ``d_1 > 0``, else ``1/d_t``.
    """
    rho_t = np.asarray(rho_t, dtype=np.complex128)
    H_t = np.asarray(H_t, dtype=np.complex128)
    eig = hermitian_eigen(rho_t)
    if eig.values[-1] <= rel_tol * max(1.0, eig.values[0]):
        raise SingularDensity(f"rho_t is not positive definite (min eigenvalue {eig.values[-1]:.3e})")
    A = psd_root(rho_t)
    A_inv = np.linalg.inv(A)
    M = A_inv.conj().T @ H_t @ A_inv
    vals = hermitian_eigen(0.5 * (M + M.conj().T)).values
    if np.max(np.abs(vals)) == 0:
        raise ZeroInput("H_t is zero")
    return 1.0 / vals[0] if vals[0] > 0 else 1.0 / vals[-1]


def reduce_step(gates, rho, opts=None):
    """One rank-lowering step.  Returns ``(rho_new, restarts_used)``."""
    opts = opts or SearchOptions()
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    t = rho.rank
    if t < 2:
        raise InvalidRank("reduce_step needs rank >= 2")
    report = verify(gates, rho, rho.d, opts.tol)
    if not report.passed:
        raise ValueError(f"input density does not discriminate the gates (residual {report.residual:.3e})")
    V = rho.support()
    # t = 2 gives floor((t-1)/2) = 0; fall back to rank-1 annihilators there
    s = max(1, (t - 1) // 2)
    H0, used = find_annihilator(gates, V, s, opts)
    rho_t = V.conj().T @ rho.matrix @ V

    for H in (hermitize(H0), _other_branch(H0)):
        if np.linalg.norm(H) <= 1e-12 * np.linalg.norm(H0):
            continue
        H_t = V.conj().T @ H @ V
        lam = mixing_coefficient(rho_t, H_t)
        new = rho.matrix - lam * H
        tr = np.trace(new).real
        if tr <= 1e-12:
            continue
        rho_new = DensityOperator.from_unnormalized(new / tr)
        if rho_new.rank < t:
            return rho_new, used
    raise DegenerateTrace("both Hermitian combinations give a vanishing or non-reducing update")


def reduce_to_rank(gates, rho, r, opts=None):
    """Repeat :func:`reduce_step` until ``rank <= r``.

    Raises ReductionStalled (carrying the partial trace) if a step fails.
    """
    opts = opts or SearchOptions()
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    if r < 1:
        raise InvalidRank("target rank must be >= 1")
    k = len(gates)
    if k > reduced_bound(r):
        log.warning("k=%d exceeds reduced_bound(%d)=%d; reduction may stall", k, r, reduced_bound(r))
    if r == 1 and rho.rank > 1:
        log.info("target rank 1 is best effort: the last step has no existence guarantee")
    trace = ReductionTrace(final=rho)
    current = rho
    while current.rank > r:
        before = current.rank
        try:
            current, used = reduce_step(gates, current, opts)
        except (AnnihilatorNotFound, InsufficientRoom, DegenerateTrace, SingularDensity) as exc:
            raise ReductionStalled(f"stalled at rank {before}: {exc}", trace=trace) from exc
        residual = verify(gates, current, current.d, opts.tol).residual
        trace.steps.append(ReductionStep(before, current.rank, residual, used))
        trace.final = current
        if residual > opts.tol:
            raise ReductionStalled(f"residual {residual:.3e} exceeded tol after step", trace=trace)
    return trace
