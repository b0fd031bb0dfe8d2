"""Maxima over the unit circle: f_lambda, the Moebius-type distance m_Gn and rho_n."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import DenominatorVanishes
from ..sympoly import as_point

COARSE = 1024
ANGLE_TOL = 1e-10


@dataclass(frozen=True)
class CircleMaximum:
    value: float
    arg_lambda: complex
    refinement_radius: float


def circle_max(func: Callable[[np.ndarray], np.ndarray], coarse: int = COARSE, candidates: int = 3) -> CircleMaximum:
    """Maximum over T of a real function given on arrays of angles.

    Coarse scan, then bounded scalar refinement within two coarse steps of
    the best local maxima.
    """
    h = 2 * np.pi / coarse
    theta = h * np.arange(coarse)
    vals = np.asarray(func(theta), dtype=float)
    is_peak = (vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1))
    peaks = np.flatnonzero(is_peak)
    peaks = peaks[np.argsort(vals[peaks])[::-1][:candidates]]
    best_val = float(np.max(vals))
    best_th = float(theta[int(np.argmax(vals))])
    for i in peaks:
        c = theta[i]
        res = minimize_scalar(
            lambda t: -float(func(np.array([t]))[0]),
            bounds=(c - 2 * h, c + 2 * h),
            method="bounded",
            options={"xatol": ANGLE_TOL},
        )
        if -res.fun > best_val:
            best_val, best_th = float(-res.fun), float(res.x)
    return CircleMaximum(best_val, complex(np.exp(1j * best_th)), 2 * h)


def _f_lambda_many(z: np.ndarray, lam: np.ndarray, check: bool = True) -> np.ndarray:
    n = z.size
    num = np.zeros(lam.shape, dtype=complex)
    den = np.full(lam.shape, complex(n))
    for j in range(n, 0, -1):
        num = num * lam + j * z[j - 1]
    pw = np.ones(lam.shape, dtype=complex)
    for j in range(1, n):
        pw = pw * lam
        den = den + (n - j) * z[j - 1] * pw
    if check and np.any(np.abs(den) <= 1e-12):
        raise DenominatorVanishes("f_lambda denominator vanishes")
    return num / den


def f_lambda(z, lam):
    z = as_point(z)
    out = _f_lambda_many(z, np.asarray(lam, dtype=complex))
    return complex(out) if out.ndim == 0 else out


def circle_sup_f(z, coarse: int = COARSE) -> CircleMaximum:
    z = as_point(z)
    return circle_max(lambda th: np.abs(_f_lambda_many(z, np.exp(1j * th))), coarse)


def denominator_zero_in_disc(z) -> bool:
    """True when the denominator of f_lambda vanishes somewhere in the closed disc."""
    z = as_point(z)
    n = z.size
    # ascending coefficients n, (n-1) z_1, ..., z_{n-1}
    coeffs = np.concatenate([[n], (n - np.arange(1, n)) * z[: n - 1]])
    coeffs = np.trim_zeros(coeffs, "b")
    if coeffs.size < 2:
        return False
    return bool(np.min(np.abs(np.roots(coeffs[::-1]))) <= 1 + 1e-12)


def in_Gn_by_circle(z) -> bool:
    """Membership from sup |f_lambda| over the closed disc.

    With the denominator free of zeros in the closed disc the supremum is
    attained on the circle; otherwise f_lambda is unbounded there.
    """
    if denominator_zero_in_disc(z):
        return False
    try:
        return circle_sup_f(z).value < 1.0
    except DenominatorVanishes:
        # a pole on the circle makes the supremum infinite
        return False


def _m_disc(a, b):
    return np.abs(a - b) / np.abs(1 - np.conj(a) * b)


def m_Gn(z, w) -> float:
    z, w = as_point(z), as_point(w)

    def dist(th):
        lam = np.exp(1j * th)
        return _m_disc(_f_lambda_many(z, lam), _f_lambda_many(w, lam))

    return circle_max(dist).value


def m_Gn_full(z, w) -> CircleMaximum:
    z, w = as_point(z), as_point(w)
    return circle_max(lambda th: _m_disc(_f_lambda_many(z, np.exp(1j * th)), _f_lambda_many(w, np.exp(1j * th))))


def rho_n(x) -> float:
    x = as_point(x)
    n = x.size
    coeffs = np.arange(1, n + 1) * x / n

    def mod(th):
        lam = np.exp(1j * th)
        acc = np.zeros(lam.shape, dtype=complex)
        for c in coeffs[::-1]:
            acc = acc * lam + c
        return np.abs(acc)

    return circle_max(mod).value
