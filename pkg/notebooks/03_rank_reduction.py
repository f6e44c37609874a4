"""Shrinking a full-rank witness for three random unitaries on C^8."""

import numpy as np

from qdiscrim import GateSet, SearchOptions, reduce_to_rank, reduced_bound, search_density, verify
from qdiscrim.linalg import random_unitary

rng = np.random.default_rng(0)
gates = GateSet(8, ["U0", "U1", "U2"], [random_unitary(8, rng) for _ in range(3)])

# %% Smallest ancilla for which the bound covers three gates.
target = min(r for r in range(1, 9) if reduced_bound(r) >= len(gates))
print("target rank", target)

# %% A generic witness from the search has full rank.
found = search_density(gates, 8, SearchOptions(seed=0))
print("rank", found.density.rank, "residual", found.best_residual)

# %% Each step subtracts a Hermitian annihilator until an eigenvalue hits zero.
trace = reduce_to_rank(gates, found.density, target, SearchOptions(seed=0))
for step in trace.steps:
    print(step.rank_before, "->", step.rank_after, f"{step.residual_after:.1e}")
print(verify(gates, trace.final, target))
print(np.round(np.linalg.eigvalsh(trace.final.matrix)[::-1], 4))
