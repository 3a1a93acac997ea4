"""Independent constructors for expected states written in ket notation."""
from itertools import combinations
from math import comb, sqrt

import numpy as np


def index_of(bits: str) -> int:
    """'0100' (qubit 1 first) -> basis index with qubit 1 as bit 0."""
    return sum(1 << i for i, ch in enumerate(bits) if ch == "1")


def two_ket(N, terms, norm=1.0):
    """Sum of coef * |prefix>|M;j> terms; suffix given as (M, j) or a bit string.

    The suffix Dicke state is normalized.
    """
    out = np.zeros(1 << N, dtype=complex)
    for coef, prefix, suffix in terms:
        p = len(prefix)
        base = index_of(prefix)
        if isinstance(suffix, str):
            out[base | index_of(suffix) << p] += coef
            continue
        M, j = suffix
        for pos in combinations(range(M), j):
            out[base | sum(1 << (p + q) for q in pos)] += coef / sqrt(comb(M, j))
    return out / norm
