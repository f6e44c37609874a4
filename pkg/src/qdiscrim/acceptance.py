"""
Acceptance criteria, runnable as ``python -m qdiscrim.acceptance``.

Each ``criterion_N`` returns ``(passed, detail)``.  Expensive searches are cached
so the cross-check in criterion 11 reuses the runs from criteria 1-5.
"""

import functools
import itertools
import sys
import time

import numpy as np

from .certificates import certify_block_family, certify_not_r_assisted, classify_pauli_products
from .discrimination import (
    AssistedState,
    DensityOperator,
    density_to_factor,
    density_to_state,
    reduced_bound,
    state_to_density,
    verify,
)
from .errors import ReductionStalled
from .gates import GateSet, family_block, family_max, family_sqrt_d, family_sqrt_rd, pauli_xz
from .linalg import random_density, random_unitary
from .reduction import reduce_to_rank
from .sdc import capacity_bound, demo
from .search import SearchOptions, objective_and_gradient, search_density


def ixz_gates():
    return GateSet(2, ["I", "X", "Z"], [np.eye(2), pauli_xz(2, 1, 0), pauli_xz(2, 0, 1)])


@functools.lru_cache(maxsize=None)
def _search(key, r, restarts):
    gates = _INSTANCES[key]()
    return search_density(gates, r, SearchOptions(restarts=restarts))


_INSTANCES = {
    "ixz": ixz_gates,
    "sqrt_d(9)": lambda: family_sqrt_d(9),
    "sqrt_rd(4,2)": lambda: family_sqrt_rd(4, 2),
    "block(8,2)": lambda: family_block(8, 2)[0],
}


def criterion_1():
    worst, slowest, bad = 0.0, 0.0, []
    for d in range(2, 9):
        for r in range(1, d + 1):
            t0 = time.perf_counter()
            gates, rho = family_max(d, r)
            rep = verify(gates, rho, r)
            dt = time.perf_counter() - t0
            slowest = max(slowest, dt)
            worst = max(worst, rep.residual)
            if len(gates) != r * d or rep.residual > 1e-10 or rho.rank != r or not rep.passed or dt >= 1.0:
                bad.append((d, r))
    return not bad, f"36 instances, worst residual {worst:.1e}, slowest {slowest:.3f}s, failures {bad}"


def criterion_2():
    out = _search("ixz", 1, 200)
    ok = not out.feasible and out.best_residual >= 1e-2
    return ok, f"{out.status}, best residual {out.best_residual:.3f}"


def criterion_3():
    gates = family_sqrt_d(9)
    cert = certify_not_r_assisted(gates, 1)
    out = _search("sqrt_d(9)", 1, 200)
    rep = verify(gates, DensityOperator.maximally_mixed(9), 9)
    pre = gates.metadata["pre_dedup_count"]
    ok = cert.not_r_assisted and not out.feasible and rep.passed and rep.residual <= 1e-10 and pre == 13
    return ok, (
        f"certificate {cert.conclusion.value}, search {out.status} ({out.best_residual:.3f}), "
        f"I/9 residual {rep.residual:.1e}, pre-dedup count {pre}"
    )


def sqrt_rd_coverage(d, r):
    """Every X^iZ^j with i <= r, (i, j) != (0, 0), is a product U_a^dag U_b up to phase."""
    gates = family_sqrt_rd(d, r)
    have = classify_pauli_products(gates).constrained
    need = {(i, j) for i in range(r + 1) for j in range(d) if (i, j) != (0, 0)}
    return need - have


def criterion_4():
    gates = family_sqrt_rd(4, 2)
    missing = sqrt_rd_coverage(4, 2)
    cert = certify_not_r_assisted(gates, 2)
    low = _search("sqrt_rd(4,2)", 2, 200)
    high = search_density(gates, 4, SearchOptions())
    ok = (
        not missing
        and cert.rank_lower_bound == 3
        and cert.not_r_assisted
        and not low.feasible
        and high.feasible
        and high.restarts_used == 0
    )
    return ok, (
        f"missing products {sorted(missing)}, rank_lower_bound {cert.rank_lower_bound}, "
        f"r=2 {low.status} ({low.best_residual:.3f}), r=4 {high.status} via I/4={high.restarts_used == 0}"
    )


def criterion_5():
    gates, _ = family_block(8, 2)
    rho = DensityOperator.diagonal([1 / 6] * 3 + [1 / 10] * 5)
    rep = verify(gates, rho, 8)
    cert = certify_block_family(8, 2, gates)
    out = _search("block(8,2)", 2, 200)
    ok = (
        len(gates) == 6
        and rep.passed
        and rep.residual <= 1e-10
        and cert.not_r_assisted
        and not out.feasible
        and out.best_residual >= 1e-3
    )
    return ok, (
        f"{len(gates)} gates, witness residual {rep.residual:.1e}, certificate {cert.conclusion.value}, "
        f"search {out.status} ({out.best_residual:.3f})"
    )


def reduction_instance(seed, target=5):
    """Search a full-rank witness for 3 random unitaries on C^8, then reduce it to ``target``."""
    rng = np.random.default_rng(seed)
    gates = GateSet(8, ["U0", "U1", "U2"], [random_unitary(8, rng) for _ in range(3)])
    opts = SearchOptions(seed=seed)
    found = search_density(gates, 8, opts)
    if not found.feasible or found.density.rank != 8:
        return False, f"seed {seed}: no full-rank witness"
    try:
        trace = reduce_to_rank(gates, found.density, target, opts)
    except ReductionStalled as exc:
        return False, f"seed {seed}: {exc}"
    ranks = [s.rank_before for s in trace.steps] + [trace.final.rank]
    monotone = all(a > b for a, b in zip(ranks, ranks[1:]))
    res = verify(gates, trace.final, target, 1e-8)
    ok = monotone and res.passed and trace.final.rank <= target
    return ok, f"seed {seed}: ranks {ranks}, residual {res.residual:.1e}"


def criterion_6():
    target = next(r for r in itertools.count(1) if reduced_bound(r) >= 3)
    t0 = time.perf_counter()
    results = [reduction_instance(seed, target) for seed in range(10)]
    dt = time.perf_counter() - t0
    wins = sum(ok for ok, _ in results)
    failures = [msg for ok, msg in results if not ok]
    return wins >= 9 and dt < 60 and target == 5, f"target {target}, {wins}/10 reduced in {dt:.1f}s {failures}"


def criterion_7():
    worst = 0.0
    for d in range(1, 9):
        for r in range(1, d + 1):
            rng = np.random.default_rng(1000 * d + r)
            for _ in range(100):
                rho = DensityOperator(random_density(d, r, rng))
                back = state_to_density(density_to_state(rho))
                S = density_to_factor(rho)
                worst = max(
                    worst,
                    np.linalg.norm(back.matrix - rho.matrix),
                    np.linalg.norm(S @ S.conj().T - rho.matrix),
                )
    return worst <= 1e-10, f"worst Frobenius error {worst:.1e} over 3600 densities"


def criterion_8():
    rng = np.random.default_rng(8)
    violations = 0
    for _ in range(500):
        d = int(rng.integers(1, 9))
        r = int(rng.integers(1, 2 * d + 1))
        amp = rng.standard_normal(d * r) + 1j * rng.standard_normal(d * r)
        psi = AssistedState(d, r, amp / np.linalg.norm(amp))
        rho = state_to_density(psi)
        violations += rho.rank > min(d, r)
    return violations == 0, f"{violations} of 500 states exceed rank min(d, r)"


def finite_difference_error(gates, S, h=1e-6):
    _, g = objective_and_gradient(gates, S)
    num = np.zeros_like(S)
    for idx in np.ndindex(S.shape):
        for unit, part in ((1.0, 1.0), (1j, 1j)):
            E = np.zeros_like(S)
            E[idx] = unit
            fp, _ = objective_and_gradient(gates, S + h * E)
            fm, _ = objective_and_gradient(gates, S - h * E)
            num[idx] += part * (fp - fm) / (2 * h)
    return float(np.max(np.abs(num - g)))


def criterion_9():
    rng = np.random.default_rng(9)
    worst = 0.0
    for n in range(100):
        d = int(rng.integers(2, 6))
        r = int(rng.integers(1, d + 1))
        k = int(rng.integers(2, 5))
        gates = GateSet(d, [f"U{i}" for i in range(k)], [random_unitary(d, rng) for _ in range(k)])
        S = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
        worst = max(worst, finite_difference_error(gates, S / np.linalg.norm(S)))
    return worst <= 1e-5, f"max component error {worst:.1e} over 100 instances"


def criterion_10():
    runs = {(p, q): demo(p, q) for p, q in ((1, 1), (2, 2))}
    ok = all(s == t == 2 ** (p + q) for (p, q), (s, t) in runs.items())
    ok = ok and all(capacity_bound(p, q) == p + q for p, q in itertools.product(range(5), repeat=2))
    return ok, ", ".join(f"(p,q)={k}: {s}/{t}" for k, (s, t) in runs.items())


def _never_contradict_records():
    """(label, certificate, search outcome or None, verify-pass-at-r) over criteria 1-5."""
    rows = []
    for d in range(2, 9):
        for r in range(1, d + 1):
            gates, rho = family_max(d, r)
            rows.append((f"max({d},{r})", certify_not_r_assisted(gates, r), None, verify(gates, rho, r).passed))
    rows.append(("ixz r=1", certify_not_r_assisted(ixz_gates(), 1), _search("ixz", 1, 200), False))
    g9 = family_sqrt_d(9)
    rows.append(("sqrt_d(9) r=1", certify_not_r_assisted(g9, 1), _search("sqrt_d(9)", 1, 200), False))
    rows.append(
        ("sqrt_d(9) r=9", certify_not_r_assisted(g9, 9), None, verify(g9, DensityOperator.maximally_mixed(9), 9).passed)
    )
    g4 = family_sqrt_rd(4, 2)
    rows.append(("sqrt_rd(4,2) r=2", certify_not_r_assisted(g4, 2), _search("sqrt_rd(4,2)", 2, 200), False))
    high = search_density(g4, 4, SearchOptions())
    rows.append(("sqrt_rd(4,2) r=4", certify_not_r_assisted(g4, 4), high, high.feasible))
    gb, wb = family_block(8, 2)
    rows.append(("block(8,2) r=2", certify_block_family(8, 2, gb), _search("block(8,2)", 2, 200), False))
    rows.append(("block(8,2) r=8", certify_not_r_assisted(gb, 8), None, verify(gb, wb, 8).passed))
    return rows


def criterion_11():
    bad = []
    rows = _never_contradict_records()
    for label, cert, outcome, verified in rows:
        if cert.not_r_assisted and outcome is not None and outcome.feasible:
            bad.append(f"{label}: certificate vs search")
        if verified and cert.rank_lower_bound > cert.r:
            bad.append(f"{label}: certificate vs verify")
    return not bad, f"{len(rows)} instances, contradictions {bad}"


CRITERIA = [
    (1, "saturating construction", criterion_1),
    (2, "saturation is tight", criterion_2),
    (3, "ancilla-free impossibility", criterion_3),
    (4, "square-root family", criterion_4),
    (5, "2r+2 block family", criterion_5),
    (6, "rank reduction", criterion_6),
    (7, "criterion equivalences", criterion_7),
    (8, "Schmidt bound", criterion_8),
    (9, "gradient correctness", criterion_9),
    (10, "superdense coding", criterion_10),
    (11, "never contradict", criterion_11),
]


def format_line(num, name, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d} ({name}): {detail}"


def main(argv=None):
    failed = 0
    for num, name, fn in CRITERIA:
        ok, detail = fn()
        failed += not ok
        print(format_line(num, name, ok, detail), flush=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
