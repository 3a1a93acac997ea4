"""Exact compression of N identical qubits into ceil(log2(N+1)) qubits."""
from .circuit import (
    CompressionCircuit,
    GateCountReport,
    export_circuit,
    gate_count_report,
    gate_U,
    gate_V,
    gate_W,
    inverse,
    mixed_mcx,
    parse_circuit,
    synthesize,
    synthesize_stage1,
    synthesize_stage2,
)
from .statevec import (
    DensityMatrix2,
    Gate,
    MCXGate,
    StateVector,
    append_zero_qubits,
    apply_gate,
    extract_low_register,
    fidelity_pure,
    inner_product,
    qubit_fidelity,
    reduced_single_qubit,
)
from .symmetric import (
    QubitParams,
    b_state,
    c_state,
    compressed_size,
    dicke_state,
    product_state,
    symmetric_amplitudes,
)

__version__ = "0.1.0"
