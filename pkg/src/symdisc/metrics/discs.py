"""Blaschke products, the induced maps into G_n, and pluricomplex Green functions with poles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import BranchInconsistency, OutOfRange
from ..sympoly import elem_sym

BRANCH_TOL = 1e-10


def _disc_check(a):
    if np.any(np.abs(a) >= 1):
        raise OutOfRange("points must lie in the open unit disc")


def blaschke_eval(zeros, rotation: complex, z):
    a = np.atleast_1d(np.asarray(zeros, dtype=complex))
    _disc_check(a)
    if abs(abs(rotation) - 1) > 1e-12:
        raise OutOfRange("rotation must be unimodular")
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, complex(rotation))
    for ak in a:
        out = out * (z - ak) / (1 - np.conj(ak) * z)
    return complex(out) if out.ndim == 0 else out


def f_B_disc(zeros, rotation: complex, n: int, lam: complex) -> np.ndarray:
    """sigma(B(r), B(eps r), ..., B(eps^{n-1} r)) for r^n = lam.

    Every choice of the root gives the same point up to rounding; all n are
    compared.
    """
    if abs(lam) >= 1:
        raise OutOfRange("lambda must lie in the open unit disc")
    eps = np.exp(2j * np.pi * np.arange(n) / n)
    r0 = complex(lam) ** (1 / n) if lam != 0 else 0j
    pts = [elem_sym(blaschke_eval(zeros, rotation, r0 * e * eps)) for e in eps]
    ref = pts[0]
    scale = max(1.0, float(np.max(np.abs(ref))))
    for p in pts[1:]:
        if np.max(np.abs(p - ref)) > BRANCH_TOL * scale:
            raise BranchInconsistency("n-th root branches disagree")
    return ref


def m_disc(a, b):
    return np.abs(a - b) / np.abs(1 - np.conj(a) * b)


def l_disc_poles(poles, z: complex) -> float:
    p = np.atleast_1d(np.asarray(poles, dtype=complex))
    _disc_check(p)
    _disc_check(np.asarray([z]))
    return float(np.prod(m_disc(p, z)))


@dataclass(frozen=True)
class ProductCheck:
    lhs_upper: float
    rhs: float
    equal: bool
    disc_points: tuple[complex, complex]
    interpolation_error: float


def product_property_check(poles, theta: float, phi: float = 0.0) -> ProductCheck:
    """Poles A = {a1, a2} in the punctured disc and B = e^{i theta} A.

    The disc zeta -> (e^{i phi} zeta, e^{i(phi + theta)} zeta) passes through
    (a_k, e^{i theta} a_k) at zeta_k = e^{-i phi} a_k, which bounds the Lempert
    function at the origin by |zeta_1 zeta_2|.
    """
    a = np.asarray(poles, dtype=complex)
    if a.shape != (2,):
        raise ValueError("exactly two poles are expected")
    _disc_check(a)
    if np.any(a == 0):
        raise OutOfRange("poles must avoid the origin")
    rot = np.exp(1j * theta)
    zeta = np.exp(-1j * phi) * a
    hits = np.stack([np.exp(1j * phi) * zeta, np.exp(1j * (phi + theta)) * zeta], axis=1)
    want = np.stack([a, rot * a], axis=1)
    err = float(np.max(np.abs(hits - want)))
    lhs = float(np.prod(np.abs(zeta)))
    rhs = l_disc_poles(a, 0)
    return ProductCheck(lhs, rhs, abs(lhs - rhs) <= 1e-12 and err <= 1e-12, (complex(zeta[0]), complex(zeta[1])), err)
