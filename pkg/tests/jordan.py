"""Matrices with prescribed Jordan structure, for cyclicity ground truth."""

from itertools import product

import numpy as np


def partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def jordan_matrix(blocks):
    """blocks: list of (eigenvalue, size)."""
    n = sum(s for _, s in blocks)
    m = np.zeros((n, n), dtype=complex)
    i = 0
    for ev, s in blocks:
        for k in range(s):
            m[i + k, i + k] = ev
            if k + 1 < s:
                m[i + k, i + k + 1] = 1
        i += s
    return m


def structures(n, eigenvalues=(0.0, 0.3, 0.5 + 0.5j)):
    """All block lists of size n whose block eigenvalues come from ``eigenvalues``."""
    seen = set()
    for part in partitions(n):
        for evs in product(range(len(eigenvalues)), repeat=len(part)):
            key = tuple(sorted(zip(evs, part)))
            if key in seen:
                continue
            seen.add(key)
            blocks = [(eigenvalues[e], s) for e, s in key]
            cyclic = len({e for e, _ in key}) == len(key)
            yield blocks, cyclic


def conjugated(m, rng, cond_max=20.0):
    n = m.shape[0]
    while True:
        s = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        if np.linalg.cond(s) < cond_max:
            return s @ m @ np.linalg.inv(s)
