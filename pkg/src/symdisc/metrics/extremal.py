"""Boundary functions, extremal polynomials and the constants for e_2 at the origin of G_3."""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.optimize import minimize

from ..errors import ConvergenceFailure, DivisibilityViolation, OutOfRange
from ..sympoly import in_Gn, minkowski_h


# -- slices of G_3 and G_4 -------------------------------------------------------
# (p, q) stands for the polynomial zeta^n + p zeta + q.

def r3(p: complex, q: complex) -> float:
    aq = 1 - abs(q) ** 2
    return abs(np.conj(p) * q * aq - p * p * np.conj(q)) + abs(p) ** 2 - aq ** 2


def s4(p: complex, q: complex) -> float:
    aq = 1 - abs(q) ** 2
    inner = aq ** 2 - abs(p) ** 2
    return (
        aq * abs(np.conj(p) * q * inner - p ** 3 * np.conj(q) ** 2)
        + abs(p) ** 4 * abs(q) ** 2
        - inner ** 2
    )


def slice_point(n: int, p: complex, q: complex) -> np.ndarray:
    """Point of C^n whose polynomial is zeta^n + p zeta + q."""
    z = np.zeros(n, dtype=complex)
    z[n - 2] = p * (-1) ** (n - 1)
    z[n - 1] = q * (-1) ** n
    return z


@dataclass(frozen=True)
class NonconvexWitness:
    n: int
    boundary: tuple[tuple[complex, complex], tuple[complex, complex]]
    midpoint: tuple[complex, complex]
    modulus_sum: float
    closed_form_sum: float
    defining_value: float
    boundary_values: tuple[float, float]


def witness_n3(q1: float = 0.5) -> NonconvexWitness:
    p1 = 1 - q1 * q1
    a = (p1 * np.exp(2j * np.pi / 3), complex(q1))
    b = (p1 * np.exp(1j * np.pi / 3), q1 * np.exp(1j * np.pi / 2))
    p0, q0 = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
    closed = (3 * math.sqrt(3) + 2 * math.sqrt(2)) / 8
    return NonconvexWitness(
        3, (a, b), (p0, q0), abs(p0) + abs(q0), closed, r3(p0, q0), (r3(*a), r3(*b))
    )


def witness_n4(q1: float = 0.4) -> NonconvexWitness:
    p1 = (1 - q1) * math.sqrt(1 + q1)
    a = (p1 * np.exp(1j * np.pi / 2), complex(q1))
    b = (p1 * np.exp(1j * np.pi / 4), q1 * np.exp(1j * np.pi / 3))
    p0, q0 = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
    closed = (3 * math.sqrt(7 * (2 + math.sqrt(2)) / 5) + 2 * math.sqrt(3)) / 10
    return NonconvexWitness(
        4, (a, b), (p0, q0), abs(p0) + abs(q0), closed, s4(p0, q0), (s4(*a), s4(*b))
    )


# -- extremal discs through the origin --------------------------------------------

@dataclass(frozen=True, eq=False)
class PolyDisc:
    """phi(zeta) with phi_j(zeta) = coeffs[j-1][m] zeta^m (ascending in m)."""

    coeffs: list[np.ndarray]

    def __call__(self, zeta: complex) -> np.ndarray:
        return np.array([np.polyval(c[::-1], zeta) for c in self.coeffs])

    def derivative_at_0(self) -> np.ndarray:
        return np.array([c[1] if c.size > 1 else 0.0 for c in self.coeffs])


def extremal_disc_ek(n: int, k: int) -> PolyDisc:
    if k < 1 or n % k:
        raise DivisibilityViolation(f"{k} does not divide {n}")
    m = n // k
    coeffs = []
    for j in range(1, n + 1):
        c = np.zeros(m + 1, dtype=complex)
        if j % k == 0:
            c[j // k] = comb(m, j // k)
        coeffs.append(c)
    return PolyDisc(coeffs)


def check_disc_in_Gn(disc: PolyDisc, samples: int = 1000, seed: int = 0) -> bool:
    rng = np.random.default_rng(seed)
    zs = 0.999 * np.sqrt(rng.random(samples)) * np.exp(2j * np.pi * rng.random(samples))
    return all(in_Gn(disc(z)) for z in zs)


def kappa_ek_upper(n: int, k: int) -> float:
    """Upper bound for the Kobayashi metric at 0 in direction e_k from the extremal disc."""
    d = extremal_disc_ek(n, k).derivative_at_0()
    return 1.0 / abs(d[k - 1])


# -- torus maxima ------------------------------------------------------------------

def gn_torus(t, n: int | None = None, eps: float = 0.0) -> complex:
    t = np.asarray(t, dtype=complex)
    n = t.size if n is None else n
    s = t.sum()
    q = (t * t).sum()
    return complex(0.5 * q - s * s / (n + 1) + eps * q - eps * (n + 1) * s * s)


def M_n(n: int) -> float:
    return (n - 1) * (n + 2) / (2 * (n + 1))


@dataclass(frozen=True)
class TorusMaximum:
    value: float
    angles: np.ndarray


def max_gn_torus(n: int, eps: float = 0.0, restarts: int = 200, seed: int = 0) -> TorusMaximum:
    """max over T^n of |g_{n,eps}| with theta_1 pinned at 0 (g is 2-homogeneous)."""
    rng = np.random.default_rng(seed)

    def neg(th):
        t = np.exp(1j * np.concatenate([[0.0], th]))
        return -abs(gn_torus(t, n, eps)) ** 2

    warm = np.where(np.arange(1, n) < n // 2 + 1, 0.0, np.pi)
    starts = [warm] + [rng.uniform(0, 2 * np.pi, n - 1) for _ in range(restarts)]
    best = None
    for x0 in starts:
        res = minimize(neg, x0, method="BFGS", options={"gtol": 1e-12})
        if best is None or res.fun < best.fun:
            best = res
    res = minimize(neg, best.x, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 20000})
    if res.fun < best.fun:
        best = res
    return TorusMaximum(math.sqrt(-best.fun), np.concatenate([[0.0], best.x]) % (2 * np.pi))


# -- the e_2 constants of G_3 ------------------------------------------------------

C0_CLOSED = math.sqrt(8 / (13 * math.sqrt(13) - 35))
C_STAR = (math.sqrt(13) - 1) / 12
DELTA = (1 / 6, (5 - math.sqrt(17)) / 4)


def f_c(c: float, x):
    return 4 * c * (4 * c - 1) * np.square(x) + 4 * (2 * c - 1) * (5 * c - 1) * np.asarray(x) + 25 * c * c - 22 * c + 5


def g_of_c(c: float) -> float:
    if not DELTA[0] < c < DELTA[1]:
        raise OutOfRange("c must lie in (1/6, (5 - sqrt 17)/4)")
    return (3 * c - 1) ** 3 / (c * (4 * c - 1))


def _golden_min(f, a: float, b: float, tol: float = 1e-12) -> float:
    invphi = (math.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def gamma3_e2_upper() -> float:
    """Minimise g over its interval and return 1/sqrt(min); agrees with C0_CLOSED."""
    lo, hi = DELTA
    c = _golden_min(g_of_c, lo + 1e-15, hi - 1e-15)
    if abs(c - C_STAR) > 1e-5:
        raise ConvergenceFailure(f"minimiser {c} differs from the closed form {C_STAR}")
    return 1.0 / math.sqrt(g_of_c(c))


# -- boundary points for the upper estimate (odd n) --------------------------------

def _z12(roots) -> np.ndarray:
    r = np.asarray(roots, dtype=complex)
    s1 = r.sum()
    return np.array([s1, (s1 * s1 - (r * r).sum()) / 2])


def boundary_polynomials_odd(n: int, augmented: bool = False) -> list[np.ndarray]:
    """Root lists of (t-1)^n, (t-1)(t^2-1)^((n-1)/2), (t-i)(t-1)^(n-1).

    With ``augmented`` the lists for (t-i)^k (t-1)^(n-k), k = (n-1)/2 and
    (n+1)/2, are appended; for n >= 5 the first three alone do not push
    the estimate strictly past the bound.
    """
    if n < 3 or n % 2 == 0:
        raise OutOfRange("n must be odd and at least 3")
    out = [
        np.ones(n, dtype=complex),
        np.array([1] + [1, -1] * ((n - 1) // 2), dtype=complex),
        np.array([1j] + [1] * (n - 1), dtype=complex),
    ]
    if augmented:
        for k in ((n - 1) // 2, (n + 1) // 2):
            out.append(np.array([1j] * k + [1] * (n - k), dtype=complex))
    return out


def boundary_points_odd(n: int, augmented: bool = False) -> list[np.ndarray]:
    """(z_1, z_2) of the points in ``boundary_polynomials_odd``."""
    pts = [
        np.array([n, n * (n - 1) / 2], dtype=complex),
        np.array([1, (1 - n) / 2], dtype=complex),
        np.array([n - 1 + 1j, (n - 1) * (n - 2) / 2 + (n - 1) * 1j]),
    ]
    if augmented:
        pts += [_z12(r) for r in boundary_polynomials_odd(n, True)[3:]]
    return pts


def m_nc_lower(n: int, c: complex, augmented: bool = False) -> float:
    return max(abs(z[1] + c * z[0] ** 2) for z in boundary_points_odd(n, augmented))


def m_nc_bound(n: int) -> float:
    return n * (n * n - 1) / (2 * (n * n + 1))


def c_equality(n: int) -> float:
    return -((n - 1) ** 2) / (2 * (n * n + 1))


def min_m_nc_lower(n: int, augmented: bool = False) -> tuple[float, complex]:
    """min over complex c of the finite-point maximum (a convex problem)."""
    f = lambda v: m_nc_lower(n, complex(v[0], v[1]), augmented)
    x = np.array([c_equality(n), 0.0])
    for _ in range(4):
        best = minimize(f, x, method="Nelder-Mead", options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 20000})
        x = best.x
    return float(best.fun), complex(x[0], x[1])


def default_eps(n: int) -> float:
    # keeps the all-equal configuration of the torus below M_n
    return 0.1 * (n - 1) / ((n + 1) * (n ** 3 + n ** 2))


@dataclass(frozen=True)
class E2Sandwich:
    n: int
    lower_bound: float
    lower_witness: float
    observed: float
    upper_bound: float
    eps: float


def e2_sandwich(n: int, eps: float | None = None, restarts: int = 200, seed: int = 0) -> E2Sandwich:
    """Bounds for gamma(0; e_2) on G_n, n odd.

    ``lower_witness`` is (1 + 2 eps)/max|P_{n,eps}| on the boundary, from the
    torus maximum; ``observed`` is 1/min_c of |z_2 + c z_1^2| maximised over
    the augmented boundary points, an upper estimate.
    """
    eps = default_eps(n) if eps is None else eps
    m_eps = max_gn_torus(n, eps, restarts, seed).value
    mn, _ = min_m_nc_lower(n, augmented=True)
    return E2Sandwich(
        n,
        (2 / n) * (1 + 2 / ((n - 1) * (n + 2))),
        (1 + 2 * eps) / m_eps,
        1.0 / mn,
        (2 / n) * (1 + 2 / ((n - 1) * (n + 1))),
        eps,
    )


def boundary_check(n: int, augmented: bool = True) -> list[float]:
    """h of each boundary point, resolved at high precision (multiple roots)."""
    from ..sympoly import elem_sym

    return [minkowski_h(elem_sym(r), dps=100) for r in boundary_polynomials_odd(n, augmented)]
