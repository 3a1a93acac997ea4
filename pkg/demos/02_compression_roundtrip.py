"""
Compress, store, decompress
===========================

Nine copies of a random qubit fit into four qubits. Undoing the circuit
recovers the original product state.
"""

import numpy as np

from symcompress import QubitParams, compressed_size, inverse, product_state, synthesize

N = 9
n = compressed_size(N)
rng = np.random.default_rng(3)
psi = QubitParams.from_bloch(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
state = product_state(psi, N).amplitudes

circuit = synthesize(N)
out = circuit.apply_array(state)
leak = np.sum(np.abs(out[1 << n:]) ** 2)
print(f"{N} qubits -> {n} qubits, weight left outside: {leak:.1e}")

# keep only the low register, pad fresh zeros, run the circuit backwards
kept = np.zeros_like(out)
kept[: 1 << n] = out[: 1 << n]
back = inverse(circuit).apply_array(kept)
print("fidelity after the round trip:", abs(np.vdot(state, back)) ** 2)

# the stored register holds sqrt(C(N,k)) a^(N-k) b^k on basis state k
print(np.round(out[: N + 1], 4))
