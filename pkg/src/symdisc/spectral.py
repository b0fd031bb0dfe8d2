"""Matrix side: spectral ball Omega_n, cyclicity, derivatives of sigma, liftings."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.linalg import expm

from .errors import (
    ConstructionFailed,
    CriteriaDisagreement,
    Order3Violation,
    OutOfRange,
    SingularResolvent,
)
from .sympoly import Polynomial, _roots_mp, in_Gn, roots

RANK_RTOL = 1e-8
OMEGA_TOL = 1e-12


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    if not 1 <= m.shape[0] <= 8:
        raise ValueError("matrix size must be at most 8")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def rank(m: np.ndarray, rtol: float = RANK_RTOL, scale: float = 0.0) -> int:
    """Numerical rank; ``scale`` floors the reference singular value."""
    s = np.linalg.svd(m, compute_uv=False)
    ref = max(s[0] if s.size else 0.0, scale)
    if ref == 0:
        return 0
    return int(np.count_nonzero(s > rtol * ref))


def char_coeffs(a) -> np.ndarray:
    """Faddeev-LeVerrier: coefficients of det(zI - A), leading first."""
    a = as_matrix(a)
    n = a.shape[0]
    c = np.zeros(n + 1, dtype=complex)
    c[0] = 1.0
    m = np.zeros_like(a)
    eye = np.eye(n)
    for k in range(1, n + 1):
        m = a @ m + c[k - 1] * eye
        c[k] = -np.trace(a @ m) / k
    return c


def sigma_of(a) -> np.ndarray:
    c = char_coeffs(a)
    n = c.size - 1
    return c[1:] * np.array([(-1) ** j for j in range(1, n + 1)])


@dataclass(frozen=True, eq=False)
class SpectralData:
    eigenvalues: np.ndarray
    char_poly: Polynomial
    sigma: np.ndarray


def _eigs_from_coeffs(c: np.ndarray) -> np.ndarray:
    ev = roots(Polynomial(c))
    if ev.size > 1:
        d = np.abs(ev[:, None] - ev[None, :])[np.triu_indices(ev.size, 1)]
        if np.min(d) < 1e-2 * max(1.0, float(np.max(np.abs(ev)))):
            # clustered: resolve the perturbed polynomial precisely instead
            ev = _roots_mp(c, 60)
    return ev


def spectral_data(a) -> SpectralData:
    c = char_coeffs(a)
    n = c.size - 1
    return SpectralData(
        eigenvalues(a),
        Polynomial(c),
        c[1:] * np.array([(-1) ** j for j in range(1, n + 1)]),
    )


def eigenvalues(a) -> np.ndarray:
    """Roots of the characteristic polynomial of A - mu I, shifted back by mu.

    mu = trace(A)/n is the centroid of the spectrum; a cluster far from the
    origin is otherwise lost in the large coefficients of det(zI - A).
    """
    a = as_matrix(a)
    mu = np.trace(a) / a.shape[0]
    return _eigs_from_coeffs(char_coeffs(a - mu * np.eye(a.shape[0]))) + mu


def spectral_radius(a) -> float:
    return float(np.max(np.abs(eigenvalues(a))))


def in_omega(a, tol: float = OMEGA_TOL) -> bool:
    return spectral_radius(a) < 1.0 - tol


def mobius_phi(lam: complex, a) -> np.ndarray:
    """(A - lam I)(I - conj(lam) A)^-1."""
    a = as_matrix(a)
    if abs(lam) >= 1:
        raise OutOfRange("|lam| must be < 1")
    eye = np.eye(a.shape[0])
    r = eye - np.conj(lam) * a
    if np.linalg.cond(r) > 1e12:
        raise SingularResolvent("I - conj(lam) A is numerically singular")
    return (a - lam * eye) @ np.linalg.inv(r)


def m_disc(a: complex, b: complex) -> float:
    return abs(a - b) / abs(1 - np.conj(a) * b)


def lempert_scalar_pole(lam: complex, a) -> float:
    return spectral_radius(mobius_phi(lam, a))


def kappa_scalar_pole(lam: complex, b) -> float:
    if abs(lam) >= 1:
        raise OutOfRange("|lam| must be < 1")
    return spectral_radius(b) / (1.0 - abs(lam) ** 2)


def s_minmax(a, b) -> float:
    ea, eb = eigenvalues(a), eigenvalues(b)
    if max(np.max(np.abs(ea)), np.max(np.abs(eb))) >= 1:
        raise OutOfRange("both matrices must lie in the spectral ball")
    md = np.abs(ea[:, None] - eb[None, :]) / np.abs(1 - np.conj(ea)[:, None] * eb[None, :])
    return float(np.min(np.max(md, axis=1)))


# -- derivative of sigma -------------------------------------------------------

def _t_nodes(n: int) -> np.ndarray:
    k = np.arange(1, n // 2 + 2)
    nodes = np.concatenate([[0.0], np.ravel(np.column_stack([k, -k]))])
    return nodes[: n + 1]


def sigma_prime(a, b) -> np.ndarray:
    """t^1 coefficient of the polynomial t -> sigma(A + tB)."""
    a, b = as_matrix(a), as_matrix(b)
    n = a.shape[0]
    nrm = np.linalg.norm(b, 2)
    if nrm == 0:
        return np.zeros(n, dtype=complex)
    t = _t_nodes(n) / (1.0 + nrm)
    vals = np.array([sigma_of(a + ti * b) for ti in t])
    v = np.vander(t, n + 1, increasing=True)
    coeffs = np.linalg.solve(v, vals)
    return coeffs[1]


def sigma_prime_matrix(a) -> np.ndarray:
    """n x n^2 matrix of B -> sigma'_A(B) in the basis E_ij (row-major)."""
    a = as_matrix(a)
    n = a.shape[0]
    cols = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            cols.append(sigma_prime(a, e))
    return np.array(cols).T


def ad_matrix(a) -> np.ndarray:
    """Matrix of X -> XA - AX acting on row-major vec(X)."""
    a = as_matrix(a)
    eye = np.eye(a.shape[0])
    return np.kron(eye, a.T) - np.kron(a, eye)


# -- cyclicity -----------------------------------------------------------------

CRITERIA = (
    "krylov",
    "minimal_poly",
    "jordan_eigenspaces",
    "centralizer_dim",
    "rank_sigma_prime",
    "ker_equals_image_ad",
)


@dataclass(frozen=True)
class CyclicityVerdict:
    krylov: bool
    minimal_poly: bool
    jordan_eigenspaces: bool
    centralizer_dim: bool
    rank_sigma_prime: bool
    ker_equals_image_ad: bool
    consensus: bool

    def breakdown(self) -> dict:
        return {k: getattr(self, k) for k in CRITERIA}


def _unit_scaled(a):
    nrm = np.linalg.norm(a, 2)
    return a / nrm if nrm else a


def _krylov(a, n, rng) -> bool:
    a = _unit_scaled(a)
    for _ in range(8):
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        cols = [v / np.linalg.norm(v)]
        for _ in range(n - 1):
            cols.append(a @ cols[-1])
        if rank(np.column_stack(cols)) == n:
            return True
    return False


def _minimal_poly(a, n) -> bool:
    a = _unit_scaled(a)
    powers = [np.eye(n, dtype=complex)]
    for _ in range(n - 1):
        powers.append(a @ powers[-1])
    return rank(np.column_stack([p.ravel() for p in powers])) == n


def cluster_eigenvalues(ev: np.ndarray, tol: float) -> list[np.ndarray]:
    """Single-linkage groups of eigenvalues closer than ``tol``."""
    parent = list(range(ev.size))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in combinations(range(ev.size), 2):
        if abs(ev[i] - ev[j]) < tol:
            parent[find(i)] = find(j)
    groups: dict[int, list] = {}
    for i in range(ev.size):
        groups.setdefault(find(i), []).append(ev[i])
    return [np.array(g) for g in groups.values()]


def _jordan(a, n) -> bool:
    if not np.any(a):
        return n == 1
    ev = eigenvalues(a)
    tol = 1e-3 * max(1.0, float(np.max(np.abs(ev))))
    for g in cluster_eigenvalues(ev, tol):
        if g.size < 2:
            continue
        c = g.mean()
        if n - rank(a - c * np.eye(n), scale=max(np.linalg.norm(a, 2), abs(c))) > 1:
            return False
    return True


def cyclicity(a, seed: int = 0) -> CyclicityVerdict:
    a = as_matrix(a)
    n = a.shape[0]
    rng = np.random.default_rng(seed)
    norm_a = np.linalg.norm(a, 2)
    ad = ad_matrix(a)
    rank_ad = rank(ad, scale=norm_a)
    jac = sigma_prime_matrix(a)
    rank_jac = rank(jac, scale=max(1.0, norm_a) ** (n - 1))
    # image of ad always sits in ker sigma'; spot-check that before comparing dimensions
    x = rng.normal(size=n * n) + 1j * rng.normal(size=n * n)
    y = ad @ x
    if np.linalg.norm(jac @ y) > 1e-6 * max(1.0, np.linalg.norm(jac) * np.linalg.norm(y)):
        raise CriteriaDisagreement({"containment": False})
    verdict = {
        "krylov": _krylov(a, n, rng),
        "minimal_poly": _minimal_poly(a, n),
        "jordan_eigenspaces": _jordan(a, n),
        "centralizer_dim": n * n - rank_ad == n,
        "rank_sigma_prime": rank_jac == n,
        "ker_equals_image_ad": n * n - rank_jac == rank_ad,
    }
    vals = set(verdict.values())
    if len(vals) != 1:
        raise CriteriaDisagreement(verdict)
    return CyclicityVerdict(**verdict, consensus=vals.pop())


def solve_commutator(a, b) -> np.ndarray | None:
    """Y with YA - AY = B, or None when B is outside the image."""
    a, b = as_matrix(a), as_matrix(b)
    n = a.shape[0]
    if not np.any(b):
        return np.zeros((n, n), dtype=complex)
    ad = ad_matrix(a)
    y, *_ = np.linalg.lstsq(ad, b.ravel(), rcond=None)
    y = y.reshape(n, n)
    res = np.linalg.norm(y @ a - a @ y - b)
    if res <= 1e-8 * (np.linalg.norm(a) * np.linalg.norm(y) + np.linalg.norm(b)):
        return y
    return None


def commutator(y, a) -> np.ndarray:
    return y @ a - a @ y


def isospectral_curve(a, y, zeta: complex) -> np.ndarray:
    a, y = as_matrix(a), as_matrix(y)
    return expm(zeta * y) @ a @ expm(-zeta * y)


# -- non-cyclic 3x3 models -----------------------------------------------------

def a_t(t: complex) -> np.ndarray:
    m = np.zeros((3, 3), dtype=complex)
    m[2, 2] = t
    return m


A_TILDE = np.array([[0, 0, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)


def tangent_cone_predicates(b, which: str, tol: float = 1e-10) -> bool:
    b = as_matrix(b)
    if b.shape != (3, 3):
        raise ValueError("B must be 3x3")
    if which == "A_t":
        conds = (b[2, 2], b[0, 0] + b[1, 1], b[0, 0] ** 2 + b[0, 1] * b[1, 0])
    elif which == "A_tilde":
        conds = (np.trace(b), b[2, 1], b[0, 1] * b[2, 0])
    else:
        raise ValueError("which must be 'A_t' or 'A_tilde'")
    return all(abs(c) <= tol for c in conds)


@dataclass(frozen=True, eq=False)
class Decomposition:
    x: np.ndarray
    y: np.ndarray
    residual: float


def decompose_XY(b, which: str, t: complex | None = None, tol: float = 1e-10) -> Decomposition | None:
    """B = X + [Y, A] with A + zeta X isospectral to A; None when obstructed."""
    b = as_matrix(b)
    if not tangent_cone_predicates(b, which, tol):
        raise OutOfRange("B is not in the tangent cone of the model matrix")
    x = np.zeros((3, 3), dtype=complex)
    y = np.zeros((3, 3), dtype=complex)
    if which == "A_t":
        if t is None or t == 0:
            raise ValueError("A_t needs a nonzero t")
        a = a_t(t)
        x[:2, :2] = b[:2, :2]
        y[0, 2], y[1, 2] = b[0, 2], b[1, 2]
        y[2, 0], y[2, 1] = -b[2, 0], -b[2, 1]
        y /= t
    else:
        a = A_TILDE
        b11, b12, b31 = b[0, 0], b[0, 1], b[2, 0]
        small = lambda v: abs(v) <= tol
        if small(b31):
            if small(b11):
                y[2, 0] = -b[1, 0]
            elif small(b12):
                return None
            else:
                y[2, 0] = -b[1, 0] - b11 ** 2 / b12
            y[2, 1] = -b11 - b[1, 1]
        else:
            # b12 = 0 here; eigenvalue b22 + y32 forces y32 = -b22
            y[2, 1] = -b[1, 1]
            y[0, 1] = b[0, 2] + b11 ** 2 / b31
            y[2, 0] = -b[1, 0]
        x = b - commutator(y, a)
    res = float(np.linalg.norm(b - x - commutator(y, a)))
    if res > tol * max(1.0, np.linalg.norm(b)):
        raise ConstructionFailed(f"decomposition residual {res:.2e}")
    return Decomposition(x, y, res)


# -- lifting discs into Omega_3 --------------------------------------------------

def _coeff_array(p) -> np.ndarray:
    """Ascending coefficients (constant first)."""
    return np.atleast_1d(np.asarray(p, dtype=complex))


def lift_disc_G3(phi) -> np.ndarray:
    """Matrix polynomial psi with sigma(psi(zeta)) = phi(zeta).

    ``phi`` holds three ascending coefficient lists. The result has shape
    (deg + 1, 3, 3); entry k is the coefficient of zeta^k.
    """
    p1, p2, p3 = (_coeff_array(p) for p in phi)
    if p3.size > 0 and abs(p3[0]) != 0:
        raise Order3Violation("phi_3 must vanish at 0")
    if p3.size > 1 and abs(p3[1]) != 0:
        raise Order3Violation("phi_3 must vanish to second order at 0")
    q3 = p3[1:]
    deg = max(1, p1.size - 1, p2.size - 1, q3.size - 1)
    psi = np.zeros((deg + 1, 3, 3), dtype=complex)
    psi[1, 0, 1] = 1.0
    psi[0, 1, 2] = 1.0
    psi[: q3.size, 2, 0] = q3
    psi[: p2.size, 2, 1] = -p2
    psi[: p1.size, 2, 2] = p1
    return psi


def eval_matrix_poly(psi: np.ndarray, zeta: complex) -> np.ndarray:
    out = np.zeros(psi.shape[1:], dtype=complex)
    for c in psi[::-1]:
        out = out * zeta + c
    return out


def competitor_radius(target) -> float:
    a, b, c = np.asarray(target, dtype=complex)
    return max(3 * abs(a), 3 * abs(b), np.sqrt(3 * abs(c)))


def competitor_disc(target):
    a, b, c = np.asarray(target, dtype=complex)
    r = competitor_radius(target)
    return [np.array([0, _rdiv(a, r)]), np.array([0, _rdiv(b, r)]), np.array([0, 0, _rdiv(_rdiv(c, r), r)])], r


def _rdiv(x: complex, r: float) -> complex:
    # componentwise, so a subnormal r does not overflow complex division
    return complex(x.real / r, x.imag / r)


def lempert_upper_bound_G3(target, samples: int = 1000, seed: int = 0) -> float:
    """Radius r of the competitor disc through sigma_target, after validating the disc."""
    r = competitor_radius(target)
    if r >= 1:
        raise OutOfRange("competitor radius must be < 1")
    if r == 0:
        return 0.0
    phi, _ = competitor_disc(target)
    psi = lift_disc_G3(phi)
    rng = np.random.default_rng(seed)
    zs = 0.999 * np.sqrt(rng.random(samples)) * np.exp(2j * np.pi * rng.random(samples))
    for z in np.concatenate([zs, [r]]):
        m = eval_matrix_poly(psi, z)
        want = np.array([np.polyval(p[::-1], z) for p in phi])
        if np.max(np.abs(sigma_of(m) - want)) > 1e-10:
            raise ConstructionFailed("lifted disc does not reproduce phi")
        if abs(z) < 1 and not in_Gn(want):
            raise ConstructionFailed(f"competitor disc leaves G_3 at zeta={z}")
    return float(r)
