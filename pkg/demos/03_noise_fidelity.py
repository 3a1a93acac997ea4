"""
Storing under rotation noise
============================

Small rotations hit every stored qubit. Fewer stored qubits means fewer
chances to go wrong, which is what the global fidelity sweep shows.
"""

from symcompress.analysis import format_records, sweep_global, sweep_single

records = sweep_global(range(3, 10), phi=0.1, samples=500, seed=1)
print(format_records(records))

# when the input is fed through to just one qubit, the picture depends on the axis
print(format_records(sweep_single([0.1, 0.2], N=7, axes=("z", "averaged"), samples=500, seed=1)))
