"""Superdense coding from a discriminable gate set."""

import numpy as np

from qdiscrim import build_codebook, capacity_bound, decode, density_to_state, encode, family_max
from qdiscrim.sdc import bits_to_index, demo, index_to_bits

# %% Two qubits of system, two of entanglement: 16 messages.
gates, rho = family_max(4, 4)
psi = density_to_state(rho)
book = build_codebook(gates, psi)
print(len(book), "codewords, overlap residual", book.orthogonality_residual())

# %% Send "1011".
bits = "1011"
received = decode(encode(bits_to_index(bits), book), book)
print(bits, "->", index_to_bits(received, capacity_bound(2, 2)))

# %% The Gram matrix of the codewords is the identity.
G = book.codewords.conj() @ book.codewords.T
print(np.allclose(G, np.eye(len(book))))

# %% Every message for a few sizes.
for p, q in [(1, 0), (1, 1), (2, 1), (2, 2), (3, 2)]:
    print((p, q), demo(p, q))
