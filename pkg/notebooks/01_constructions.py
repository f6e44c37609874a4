"""Gate families and their witnesses, one cell at a time."""

import numpy as np

from qdiscrim import DensityOperator, family_block, family_max, family_sqrt_d, family_sqrt_rd, verify

np.set_printoptions(precision=3, suppress=True)

# %% The saturating family: r*d shifts-times-phases on C^d, told apart with an r-dim ancilla.
gates, rho = family_max(4, 2)
print(len(gates), "gates:", gates.names)
print("witness diagonal:", np.diag(rho.matrix).real)
print(verify(gates, rho, 2))

# %% One more gate than r*d and no witness can exist; the count is the ceiling.
for d in range(2, 6):
    print(d, [len(family_max(d, r)[0]) for r in range(1, d + 1)])

# %% Few Paulis that need a full-size ancilla.  Every product U_i^dag U_j is traceless,
# so the maximally mixed state works at rank d.
g9 = family_sqrt_d(9)
print(g9.names)
print("pre-dedup", g9.metadata["pre_dedup_count"], "formula", g9.metadata["count_formula"])
print(verify(g9, DensityOperator.maximally_mixed(9), 9).residual)

# %% Same idea with an intermediate ancilla.
g = family_sqrt_rd(4, 2)
print(len(g), "gates after phase dedup, from", g.metadata["pre_dedup_count"])

# %% Block family: 2r+2 gates on C^8 built from direct sums; witness is block-uniform.
gb, wb = family_block(8, 2)
print(gb.names, "prime", gb.metadata["prime"])
print(np.diag(wb.matrix).real)
print(verify(gb, wb, 8).passed)
