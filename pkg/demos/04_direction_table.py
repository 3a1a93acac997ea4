"""
Sending a direction with n qubits
=================================

Compare naive copies against the compressed encoding of 2^n - 1 copies.
"""

from symcompress.analysis import compressed_fidelity, format_table1, naive_fidelity

print(format_table1())

for n in (8, 12, 16):
    print(f"n={n:2d}  naive loss {1 - naive_fidelity(n):.2e}  compressed loss {1 - compressed_fidelity(n):.2e}")
