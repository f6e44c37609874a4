"""
Numerical search for a rank-<=r discriminating density.

``rho = S S^dagger`` with ``S`` a ``d x r`` factor, and the objective is

    f(S) = sum_{i != j} |tr(S^dagger U_i^dagger U_j S)|^2 / ||S||_F^4,

which is scale invariant, so ``S`` is renormalized to ``tr(S S^dagger) = 1``
after each accepted step.  A zero of ``f`` is a witness.  ``NotFound`` is only
numerical evidence, never a proof.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .discrimination import DensityOperator, gram, verify
from .errors import InvalidRank, ZeroFactor

log = logging.getLogger(__name__)

NOT_FOUND_LABEL = "no witness found (numerical)"
ARMIJO = 1e-4
MAX_SUPPORTS = 20000


@dataclass(frozen=True)
class SearchOptions:
    restarts: int = 50
    max_iters: int = 500
    tol: float = 1e-9
    seed: int = 0
    step_init: float = 1.0
    workers: int = 1

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass(frozen=True)
class SearchOutcome:
    density: DensityOperator = None
    best_residual: float = math.inf
    restarts_used: int = 0

    @property
    def feasible(self):
        return self.density is not None

    @property
    def status(self):
        return "feasible" if self.feasible else "not_found"

    def to_dict(self, with_matrix=False):
        out = {
            "status": self.status,
            "best_residual": self.best_residual,
            "restarts_used": self.restarts_used,
        }
        if self.feasible:
            out["rank"] = self.density.rank
            if with_matrix:
                out["rho"] = self.density.matrix
        else:
            out["label"] = NOT_FOUND_LABEL
        return out


def _products_gram(U, S):
    T = U @ S  # (k, d, r)
    G = np.einsum("iab,jab->ij", T.conj(), T)
    return T, G


def _evaluate(U, S):
    n = np.vdot(S, S).real
    if n <= 0:
        raise ZeroFactor("factor S is zero")
    T, G = _products_gram(U, S)
    off = G - np.diag(np.diag(G))
    F = float(np.sum(np.abs(off) ** 2))
    # dF/dconj(S) = 2 sum_{i != j} conj(G_ij) U_i^dag U_j S
    Wt = np.einsum("ij,jab->iab", off.conj(), T)
    dF = 2.0 * np.einsum("iba,ibc->ac", U.conj(), Wt)
    df = dF / n**2 - 2.0 * F * S / n**3
    residual = float(np.abs(off).max()) / n if off.size else 0.0
    return F / n**2, 2.0 * df, residual


def objective_and_gradient(gates, S):
    """Objective and its gradient ``df/dRe(S) + i df/dIm(S)``."""
    U = np.asarray(getattr(gates, "matrices", gates), dtype=np.complex128)
    S = np.asarray(S, dtype=np.complex128)
    if S.ndim == 1:
        S = S[:, None]
    f, g, _ = _evaluate(U, S)
    return f, g


def _descend(U, S, opts):
    """Gradient descent with Armijo backtracking; trial step from the Barzilai-Borwein rule.

    Stops on ``residual <= tol``, on stagnation (relative decrease below 1e-12),
    or after ``max_iters`` accepted steps.
    """
    S = S / np.linalg.norm(S)
    f, g, res = _evaluate(U, S)
    step = opts.step_init
    prev = None
    for _ in range(opts.max_iters):
        if res <= opts.tol:
            break
        gnorm2 = np.vdot(g, g).real
        if gnorm2 == 0:
            break
        if prev is not None:
            dS, dg = S - prev[0], g - prev[1]
            denom = np.vdot(dS, dg).real
            if denom > 0:
                step = np.vdot(dS, dS).real / denom
        accepted = False
        for _ in range(60):
            S_new = S - step * g
            nrm = np.linalg.norm(S_new)
            if nrm == 0:
                step *= 0.5
                continue
            S_new = S_new / nrm
            f_new, g_new, res_new = _evaluate(U, S_new)
            if f_new <= f - ARMIJO * step * gnorm2:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        stalled = f - f_new <= 1e-12 * f
        prev = (S, g)
        S, f, g, res = S_new, f_new, g_new, res_new
        if stalled:
            break
    return S, res


def _restart(U, d, r, opts, seed_seq):
    rng = np.random.default_rng(seed_seq)
    S0 = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    return _descend(U, S0, opts)


def _candidate(gates, S, r, tol):
    try:
        rho = DensityOperator.from_unnormalized(S @ S.conj().T)
    except ValueError:
        return None
    return rho if verify(gates, rho, r, tol).passed else None


def _traceless_shortcut(gates, r, tol):
    d = gates.d
    if r < d:
        return None
    rho = DensityOperator.maximally_mixed(d)
    return rho if verify(gates, rho, r, tol).passed else None


def search_density(gates, r, opts=None):
    """Multi-restart factored descent for a rank-<=r density discriminating ``gates``.

    Restart ``n`` draws its start from child ``n`` of ``SeedSequence(opts.seed)``;
    the first feasible restart (by index) wins, so the result does not depend on
    ``opts.workers``.
    """
    opts = opts or SearchOptions()
    d = gates.d
    if not 1 <= r <= d:
        raise InvalidRank(f"rank cap {r} outside [1, {d}]")
    rho = _traceless_shortcut(gates, r, opts.tol)
    if rho is not None:
        return SearchOutcome(density=rho, best_residual=verify(gates, rho, r).residual, restarts_used=0)

    U = gates.matrices
    seeds = np.random.SeedSequence(opts.seed).spawn(opts.restarts)
    best = math.inf
    batch = max(1, opts.workers)
    pool = ThreadPoolExecutor(max_workers=batch) if batch > 1 else None
    try:
        for start in range(0, opts.restarts, batch):
            idx = range(start, min(start + batch, opts.restarts))
            if pool is None:
                results = [_restart(U, d, r, opts, seeds[n]) for n in idx]
            else:
                results = list(pool.map(lambda n: _restart(U, d, r, opts, seeds[n]), idx))
            for n, (S, res) in zip(idx, results):
                best = min(best, res)
                if res <= opts.tol:
                    rho = _candidate(gates, S, r, opts.tol)
                    if rho is not None:
                        return SearchOutcome(density=rho, best_residual=res, restarts_used=n + 1)
    finally:
        if pool is not None:
            pool.shutdown()
    log.debug("search_density: %s, best residual %.3e", NOT_FOUND_LABEL, best)
    return SearchOutcome(best_residual=best, restarts_used=opts.restarts)


def _diagonal_lp(A, support, d):
    """Minimize ``t`` s.t. ``|Re/Im (A p)| <= t``, ``sum p = 1``, ``p >= 0``, p zero off ``support``."""
    s = len(support)
    Asub = A[:, support]
    Ar = np.vstack([Asub.real, Asub.imag])
    m = Ar.shape[0]
    # variables: p (s entries), t
    c = np.zeros(s + 1)
    c[-1] = 1.0
    ones = np.ones((m, 1))
    A_ub = np.vstack([np.hstack([Ar, -ones]), np.hstack([-Ar, -ones])])
    b_ub = np.zeros(2 * m)
    A_eq = np.hstack([np.ones((1, s)), np.zeros((1, 1))])
    res = linprog(
        c,
        A_ub=A_ub if m else None,
        b_ub=b_ub if m else None,
        A_eq=A_eq,
        b_eq=[1.0],
        bounds=[(0, None)] * (s + 1),
        method="highs",
    )
    if not res.success:
        return math.inf, None
    p = np.zeros(d)
    p[list(support)] = res.x[:s]
    return float(res.x[-1]), p


def search_diagonal(gates, r, tol=1e-9):
    """Search over diagonal densities, where every constraint is linear in the diagonal.

    Constraint ``(i, j)`` reads ``sum_v (U_i^dagger U_j)[v, v] p_v = 0``.  Supports of
    size ``min(r, d)`` are tried in lexicographic order with a linear program each.
    """
    d = gates.d
    U = gates.matrices
    k = len(U)
    rows = [np.diag(U[i].conj().T @ U[j]) for i in range(k) for j in range(i + 1, k)]
    A = np.array(rows).reshape(len(rows), d)
    size = min(r, d)
    n_supports = math.comb(d, size)
    if n_supports > MAX_SUPPORTS:
        supports = [tuple(range(d))]
    else:
        supports = itertools.combinations(range(d), size)
    best = math.inf
    tried = 0
    for support in supports:
        tried += 1
        t, p = _diagonal_lp(A, list(support), d)
        best = min(best, t)
        # |z| <= sqrt(2) max(|Re z|, |Im z|)
        if p is None or t * math.sqrt(2) > tol:
            continue
        p = np.where(p > 1e-12, p, 0.0)
        p = p / p.sum()
        rho = DensityOperator.diagonal(p)
        if verify(gates, rho, r, tol).passed:
            return SearchOutcome(density=rho, best_residual=float(np.abs(_offdiag(gates, rho)).max(initial=0.0)), restarts_used=tried)
    return SearchOutcome(best_residual=best, restarts_used=tried)


def _offdiag(gates, rho):
    G = gram(gates, rho)
    return G - np.diag(np.diag(G))
