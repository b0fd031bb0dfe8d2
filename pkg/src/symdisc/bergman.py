"""Bergman kernel of the symmetrized polydisc and a constructive zero for n = 3.

Kernel arguments are given through preimages: ``kernel_Gn(lam, mu)`` is the
kernel evaluated at (sigma(lam), sigma(mu)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AllCoefficientsZero,
    ConstructionFailed,
    Mu1Zero,
    OutOfRange,
    SeparationTooSmall,
)
from .sympoly import as_point, elem_sym

SEPARATION_TOL = 1e-6


def _check_disc(*pts):
    for p in pts:
        if np.any(np.abs(p) >= 1.0):
            raise OutOfRange("kernel arguments must lie in the open unit polydisc")


def _vandermonde_product(x: np.ndarray) -> complex:
    out = 1.0 + 0j
    for j in range(x.size):
        for k in range(j + 1, x.size):
            out *= x[j] - x[k]
    return out


def min_separation(x) -> float:
    x = as_point(x)
    if x.size < 2:
        return math.inf
    d = np.abs(x[:, None] - x[None, :])
    return float(np.min(d[np.triu_indices(x.size, 1)]))


def delta_n(lam, mu) -> complex:
    """det[(1 - lam_j conj(mu_k))^-2]."""
    lam, mu = as_point(lam), as_point(mu)
    m = (1.0 - np.outer(lam, np.conj(mu))) ** -2
    return complex(np.linalg.det(m))


def kernel_Gn(lam, mu, sep_tol: float = SEPARATION_TOL) -> complex:
    lam, mu = as_point(lam), as_point(mu)
    if lam.size != mu.size:
        raise ValueError("lam and mu must have the same length")
    _check_disc(lam, mu)
    if min(min_separation(lam), min_separation(mu)) < sep_tol:
        raise SeparationTooSmall("preimage coordinates nearly coincide")
    n = lam.size
    denom = np.pi ** n * _vandermonde_product(lam) * _vandermonde_product(np.conj(mu))
    return delta_n(lam, mu) / denom


def kernel_G2_closed(lam, mu) -> complex:
    l1, l2 = as_point(lam)
    m1, m2 = np.conj(as_point(mu))
    num = 2.0 - (l1 + l2) * (m1 + m2) + 2.0 * l1 * l2 * m1 * m2
    den = np.pi ** 2 * ((1 - l1 * m1) * (1 - l1 * m2) * (1 - l2 * m1) * (1 - l2 * m2)) ** 2
    return complex(num / den)


def abc(nu) -> tuple[complex, complex, complex]:
    s1, s2, s3 = elem_sym(nu)
    c = s2 - 2 * s1 + 3
    a = s2 * (2 - s1) + s3 * (2 * s1 - 3)
    b = (s1 - 2) * c + 3 * (s3 - s1 + 2)
    return complex(a), complex(b), complex(c)


def _cross_product(lam: np.ndarray, mus: np.ndarray) -> complex:
    return complex(np.prod((1.0 - np.outer(lam, np.conj(mus))) ** 2))


def kernel_G3_mu3zero(lam, mu1: complex, mu2: complex) -> complex:
    """Kernel at (sigma(lam), sigma(mu1, mu2, 0)) through the quadratic in z = conj(mu2/mu1)."""
    lam = as_point(lam)
    if mu1 == 0:
        raise Mu1Zero("mu1 must be nonzero")
    _check_disc(lam, as_point([mu1, mu2]))
    m1 = np.conj(mu1)
    z = np.conj(mu2) / m1
    a, b, c = abc(lam * m1)
    return (a * z * z - b * z + 2 * c) / (np.pi ** 3 * _cross_product(lam, np.array([mu1, mu2])))


def reduced_determinant(lam, mu1: complex, mu2: complex) -> complex:
    """Factored form of det[(1 - lam_j conj(mu_k))^-2] with mu_3 = 0.

    Equals (nu1-nu3)(nu2-nu3) z (z-1) (A z^2 - B z + 2C) / prod(1-lam_j conj(mu_k))^2
    where A, B, C are (nu2 - nu1) times the coefficients returned by ``abc``.
    """
    lam = as_point(lam)
    m1 = np.conj(mu1)
    z = np.conj(mu2) / m1
    nu = lam * m1
    a, b, c = (x * (nu[1] - nu[0]) for x in abc(nu))
    lead = (nu[0] - nu[2]) * (nu[1] - nu[2]) * z * (z - 1)
    return lead * (a * z * z - b * z + 2 * c) / _cross_product(lam, np.array([mu1, mu2]))


def quad_roots(a: complex, b: complex, c: complex) -> list[complex]:
    """Roots of a z^2 - b z + 2c, cancellation-free."""
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0:
        raise AllCoefficientsZero("a, b and c all vanish")
    if abs(a) <= 1e-14 * scale:
        return [] if b == 0 else [2 * c / b]
    d = np.sqrt(complex(b * b - 8 * a * c))
    q = 0.5 * (b + d if abs(b + d) >= abs(b - d) else b - d)
    if q == 0:
        return [0j, 0j]
    return [q / a, 2 * c / q]


def quad_zero_z(nu) -> list[complex]:
    """Roots of a z^2 - b z + 2c for (a, b, c) = abc(nu)."""
    return quad_roots(*abc(nu))


NU0 = np.exp(1j * np.pi * np.array([1 / 6, 1 / 3, -1 / 6]))


def z0_closed_form() -> complex:
    r3 = math.sqrt(3)
    x = (6 - 3 * r3 - math.sqrt(40 * r3 - 69)) / (math.sqrt(2) * (3 * r3 - 5))
    return complex(np.exp(-1j * np.pi / 4) * x)


@dataclass(frozen=True)
class KernelZeroWitness:
    lam: np.ndarray
    mu: np.ndarray
    kernel_value: complex
    quad_residual: float
    eps: float
    z: complex
    quality: float


def local_kernel_scale(lam, mu, radius: float = 1e-2, samples: int = 64, seed: int = 0) -> float:
    """Median |K| over seeded perturbations of (lam, mu) of size ``radius``."""
    rng = np.random.default_rng(seed)
    lam, mu = as_point(lam), as_point(mu)
    vals = []
    while len(vals) < samples:
        d = rng.normal(size=(2, lam.size)) + 1j * rng.normal(size=(2, lam.size))
        d *= radius * rng.random() / np.linalg.norm(d)
        try:
            vals.append(abs(kernel_Gn(lam + d[0], mu + d[1])))
        except (SeparationTooSmall, OutOfRange):
            continue
    return float(np.median(vals))


def construct_kernel_zero_G3(
    eps_schedule=(0.005, 0.0025, 0.001, 0.01), quality_tol: float = 1e-6, seed: int = 0
) -> KernelZeroWitness:
    """Kernel zero of G_3 near the base point nu_0, with mu_3 = 0."""
    z0 = z0_closed_form()
    for eps in eps_schedule:
        nu = (1.0 - eps) * NU0
        zs = [z for z in quad_zero_z(nu) if abs(z) < 1]
        if not zs:
            continue
        z = min(zs, key=lambda w: abs(w - z0))
        mu1 = 0.5 * (1.0 + float(np.max(np.abs(nu))))
        lam = nu / np.conj(mu1)
        mu = np.array([mu1, np.conj(z) * mu1, 0.0], dtype=complex)
        if min(min_separation(lam), min_separation(mu)) < 1e-3:
            continue
        a, b, c = abc(nu)
        resid = abs(a * z * z - b * z + 2 * c) / max(abs(a), abs(b), abs(c))
        k = kernel_Gn(lam, mu)
        quality = abs(k) / local_kernel_scale(lam, mu, seed=seed)
        if quality <= quality_tol and resid <= 1e-10:
            return KernelZeroWitness(lam, mu, k, float(resid), eps, complex(z), quality)
    raise ConstructionFailed("no kernel zero met the quality threshold")


def f3_on_circle(witness: KernelZeroWitness, radius: float = 1e-2, samples: int = 64) -> np.ndarray:
    """Delta_3(w, lam_2, lam_3; mu) for w on a circle around lam_1, kept inside the disc."""
    radius = min(radius, 0.5 * (1.0 - abs(witness.lam[0])))
    w = witness.lam[0] + radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    return np.array([delta_n(np.array([x, *witness.lam[1:]]), witness.mu) for x in w])
