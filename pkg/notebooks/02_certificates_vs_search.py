"""Structural proofs of impossibility, cross-checked against numerical search."""

from qdiscrim import (
    SearchOptions,
    certify_block_family,
    certify_not_r_assisted,
    family_block,
    family_max,
    family_sqrt_rd,
    search_density,
)

# %% A certificate is a short chain of exact index arguments.
cert = certify_not_r_assisted(family_sqrt_rd(4, 2), 2)
print(cert.conclusion.value, "rank >=", cert.rank_lower_bound)
for line in cert.narrative:
    print("  -", line)

# %% The search cannot beat it.  NotFound is only evidence, but it agrees.
out = search_density(family_sqrt_rd(4, 2), 2, SearchOptions(restarts=50))
print(out.status, round(out.best_residual, 3))

# %% Where a witness exists the certifier stays quiet.
gates, _ = family_max(4, 2)
print(certify_not_r_assisted(gates, 2).conclusion.value)
print(search_density(gates, 2).status)

# %% The block family needs its own argument: its products are not all Paulis.
gb, _ = family_block(8, 2)
print(certify_not_r_assisted(gb, 2).conclusion.value)
bc = certify_block_family(8, 2, gb)
print(bc.conclusion.value)
for line in bc.narrative:
    print("  -", line)
