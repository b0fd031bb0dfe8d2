"""Nevanlinna-Pick solvability in the disc through the Pick matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import OutOfRange

PSD_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class PickProblem:
    nodes: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.nodes, dtype=complex))
        w = np.atleast_1d(np.asarray(self.targets, dtype=complex))
        if z.shape != w.shape or z.ndim != 1:
            raise ValueError("nodes and targets must be equally long lists")
        if np.any(np.abs(z) >= 1) or np.any(np.abs(w) >= 1):
            raise OutOfRange("nodes and targets must lie in the open disc")
        if z.size > 1 and np.min(np.abs(z[:, None] - z[None, :]) + np.eye(z.size)) == 0:
            raise ValueError("nodes must be pairwise distinct")
        object.__setattr__(self, "nodes", z)
        object.__setattr__(self, "targets", w)

    def matrix(self) -> np.ndarray:
        z, w = self.nodes, self.targets
        return (1 - np.outer(w, w.conj())) / (1 - np.outer(z, z.conj()))


def is_psd(m: np.ndarray, rtol: float = PSD_RTOL) -> bool:
    """Pivoted Cholesky test with absolute tolerance rtol * trace."""
    a = np.array(m, dtype=complex)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    tol = rtol * max(abs(np.trace(a).real), np.finfo(float).tiny)
    for k in range(n):
        d = a.diagonal().real[k:]
        p = k + int(np.argmax(d))
        if d.min() < -tol:
            return False
        if a[p, p].real <= tol:
            rest = a[k:, k:]
            return bool(np.max(np.abs(rest - np.diag(rest.diagonal()))) <= tol) if n - k > 1 else True
        a[[k, p]] = a[[p, k]]
        a[:, [k, p]] = a[:, [p, k]]
        piv = a[k, k].real
        col = a[k + 1:, k] / np.sqrt(piv)
        a[k + 1:, k + 1:] -= np.outer(col, col.conj())
    return True


def np_solvable(prob: PickProblem, rtol: float = PSD_RTOL) -> bool:
    return is_psd(prob.matrix(), rtol)


def np_solvable_circle(beta: complex, deltas, nus, rtol: float = PSD_RTOL) -> bool:
    """Solvability of delta_j * beta -> nu_j for deltas on the circle."""
    d = np.asarray(deltas, dtype=complex)
    if abs(beta) >= 1:
        raise OutOfRange("|beta| must be below 1")
    if np.any(np.abs(np.abs(d) - 1) > 1e-12):
        raise OutOfRange("deltas must lie on the unit circle")
    return np_solvable(PickProblem(d * beta, nus), rtol)
