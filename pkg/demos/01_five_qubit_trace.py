"""
Watching five copies shrink
===========================

Follow |5;3⟩ gate by gate through the first stage of the circuit.
"""

from symcompress import dicke_state, synthesize_stage1
from symcompress.cli import format_trace

# the rendered listing: amplitudes in units of 1/sqrt(10)
print(format_trace(5, 3))

# the same thing by hand, counting how many basis states carry weight
circuit = synthesize_stage1(5)
for gate, state in circuit.iter_states(dicke_state(5, 3)):
    support = (abs(state.amplitudes) > 1e-12).sum()
    print(f"{gate.label:2s} {str(gate.targets):12s} support={support}")
