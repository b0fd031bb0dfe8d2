"""Symmetrized polydisc primitives.

Points of C^n are plain 1-D complex numpy arrays. A point ``z`` of G_n is
identified with the monic polynomial

    f(t) = t^n - z_1 t^(n-1) + z_2 t^(n-2) - ... + (-1)^n z_n,

whose roots are the preimages of ``z`` under the elementary symmetric map.
Membership in G_n is decided by the Cohn reduction; the root finder is a
batched Aberth iteration kept independent of it so either can serve as the
other's oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ConvergenceFailure, DegenerateStep

BOUNDARY_TOL = 1e-12
_EPS = np.finfo(float).eps


def as_point(xs) -> np.ndarray:
    z = np.atleast_1d(np.asarray(xs, dtype=complex))
    if z.ndim != 1 or z.size == 0:
        raise ValueError("a point needs at least one coordinate")
    if not np.all(np.isfinite(z)):
        raise ValueError("point has non-finite coordinates")
    return z


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Dense complex polynomial, leading coefficient first."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficient list must be one-dimensional and non-empty")
        if c[0] == 0:
            raise ValueError("leading coefficient must be nonzero")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite coefficient")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def from_roots(cls, rts) -> "Polynomial":
        rts = as_point(rts)
        return cls(_monic_from_roots(rts))

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        acc = np.zeros_like(x) + self.coeffs[0]
        for a in self.coeffs[1:]:
            acc = acc * x + a
        return acc

    def scale(self, x) -> np.ndarray:
        """Backward-error scale sum |a_j| max(1,|x|)^(n-j)."""
        r = np.maximum(1.0, np.abs(np.asarray(x, dtype=complex)))
        acc = np.zeros_like(r) + abs(self.coeffs[0])
        for a in self.coeffs[1:]:
            acc = acc * r + abs(a)
        return acc

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()!r})"


@dataclass(frozen=True)
class RootLocationReport:
    inside: bool
    margin: float
    steps: int
    boundary: bool = False


def _monic_from_roots(rts: np.ndarray) -> np.ndarray:
    c = np.zeros(rts.size + 1, dtype=complex)
    c[0] = 1.0
    for k, r in enumerate(rts, start=1):
        c[1:k + 1] = c[1:k + 1] - r * c[0:k]
    return c


def elem_sym(xs) -> np.ndarray:
    """(sigma_1(xs), ..., sigma_n(xs)) from the coefficients of prod(t + x_j)."""
    x = as_point(xs)
    c = np.zeros(x.size + 1, dtype=complex)
    c[0] = 1.0
    for k, r in enumerate(x, start=1):
        c[1:k + 1] = c[1:k + 1] + r * c[0:k]
    return c[1:]


def elem_sym_many(xs: np.ndarray) -> np.ndarray:
    """Row-wise ``elem_sym`` for an (m, n) array."""
    x = np.asarray(xs, dtype=complex)
    m, n = x.shape
    c = np.zeros((m, n + 1), dtype=complex)
    c[:, 0] = 1.0
    for k in range(1, n + 1):
        c[:, 1:k + 1] = c[:, 1:k + 1] + x[:, k - 1:k] * c[:, 0:k]
    return c[:, 1:]


def _alternating(n: int) -> np.ndarray:
    return np.array([(-1) ** j for j in range(1, n + 1)], dtype=float)


def poly_from_point(z) -> Polynomial:
    z = as_point(z)
    return Polynomial(np.concatenate([[1.0], _alternating(z.size) * z]))


def pi_action(lam: complex, z) -> np.ndarray:
    """(lam z_1, lam^2 z_2, ..., lam^n z_n)."""
    z = as_point(z)
    return z * lam ** np.arange(1, z.size + 1)


# -- Cohn rule ---------------------------------------------------------------

def cohn_reduce(p: Polynomial, tol: float = BOUNDARY_TOL) -> Polynomial:
    """One Cohn step: (conj(a_0) f(t) - a_n t^n conj(f(1/conj t))) / t."""
    a = p.coeffs
    n = p.degree
    if n < 1:
        raise ValueError("Cohn reduction needs degree >= 1")
    a0, an = abs(a[0]), abs(a[-1])
    if a0 - an <= tol * a0:
        raise DegenerateStep((a0 - an) / a0, 0)
    return Polynomial(np.conj(a[0]) * a[:-1] - a[-1] * np.conj(a[:0:-1]))


def root_location(p: Polynomial, tol: float = BOUNDARY_TOL) -> RootLocationReport:
    """Iterate the Cohn reduction down to degree zero.

    ``margin`` is the smallest relative gap (|a_0| - |a_n|) / |a_0| seen.
    A step whose gap is within ``tol`` stops the iteration and flags the
    report as boundary; ``inside`` is then false.
    """
    a = p.coeffs / np.max(np.abs(p.coeffs))
    margin = math.inf
    steps = 0
    while a.size > 1:
        a0, an = abs(a[0]), abs(a[-1])
        gap = (a0 - an) / a0
        margin = min(margin, gap)
        steps += 1
        if gap <= tol:
            return RootLocationReport(False, margin, steps, boundary=gap > -tol)
        a = np.conj(a[0]) * a[:-1] - a[-1] * np.conj(a[:0:-1])
        a = a / np.max(np.abs(a))
    return RootLocationReport(True, margin, steps)


def all_roots_in_disc(p: Polynomial, tol: float = BOUNDARY_TOL) -> bool:
    return root_location(p, tol).inside


def in_Gn(z, tol: float = BOUNDARY_TOL) -> bool:
    return all_roots_in_disc(poly_from_point(z), tol)


def in_G2_closed(s: complex, p: complex) -> bool:
    """|s - conj(s) p| + |p|^2 < 1."""
    return abs(s - np.conj(s) * p) + abs(p) ** 2 < 1.0


# -- roots -------------------------------------------------------------------

def _horner(c: np.ndarray, z: np.ndarray):
    """p, p' and sum |a_j||z|^(n-j) for rows of monic c at rows of z."""
    p = np.ones_like(z)
    dp = np.zeros_like(z)
    s = np.ones(z.shape)
    az = np.abs(z)
    for j in range(1, c.shape[1]):
        dp = dp * z + p
        p = p * z + c[:, j:j + 1]
        s = s * az + np.abs(c[:, j:j + 1])
    return p, dp, s


def roots_many(coeffs, max_iter: int = 500, restarts: int = 6, seed: int = 0) -> np.ndarray:
    """Aberth iteration on every row of an (m, n+1) coefficient array.

    Rows are normalised to monic. Roots at zero (exactly vanishing trailing
    coefficients) are split off exactly before iterating.
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    if np.any(c[:, 0] == 0):
        raise ValueError("leading coefficient must be nonzero")
    m, n1 = c.shape
    n = n1 - 1
    if n < 1:
        raise ValueError("degree must be >= 1")
    c = c / c[:, :1]
    out = np.empty((m, n), dtype=complex)
    has_zero = c[:, -1] == 0
    if np.any(has_zero):
        for i in np.flatnonzero(has_zero):
            row = c[i]
            k = 0
            while k < n and row[n - k] == 0:
                k += 1
            out[i, :k] = 0.0
            if k < n:
                out[i, k:] = roots_many(row[None, :n + 1 - k], max_iter, restarts, seed)[0]
        keep = ~has_zero
        if np.any(keep):
            out[keep] = roots_many(c[keep], max_iter, restarts, seed)
        return out
    if n == 1:
        return -c[:, 1:2]

    rng = np.random.default_rng(seed)
    k = np.arange(1, n + 1)
    # Fujiwara-type radius: max_k |a_k|^(1/k)
    radius = np.max(np.abs(c[:, 1:]) ** (1.0 / k), axis=1)
    radius = np.maximum(radius, 1e-3)
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    z = radius[:, None] * np.exp(1j * angles)[None, :]
    done = np.zeros((m, n), dtype=bool)
    thresh = 4 * n * _EPS

    for attempt in range(restarts + 1):
        for _ in range(max_iter):
            act = ~np.all(done, axis=1)
            if not np.any(act):
                break
            za = z[act]
            p, dp, s = _horner(c[act], za)
            ok = np.abs(p) <= thresh * s
            diff = za[:, :, None] - za[:, None, :]
            idx = np.arange(n)
            diff[:, idx, idx] = np.inf
            with np.errstate(divide="ignore", invalid="ignore"):
                recip = np.sum(1.0 / diff, axis=2)
                ratio = p / dp
                w = ratio / (1.0 - ratio * recip)
            bad = ~np.isfinite(w)
            if np.any(bad):
                w[bad] = 1e-3 * (np.abs(za[bad]) + 1e-3) * np.exp(2j * np.pi * rng.random(np.count_nonzero(bad)))
            w[ok] = 0.0
            z[act] = za - w
            done[act] = done[act] | ok
        if np.all(done):
            break
        # stagnation: shake the unconverged roots and try again
        rows = ~np.all(done, axis=1)
        shake = 1e-3 * (np.abs(z[rows]) + 1e-3) * np.exp(2j * np.pi * rng.random(z[rows].shape))
        z[rows] = z[rows] + shake * ~done[rows]
    # one polishing pass for all roots
    p, dp, s = _horner(c, z)
    diff = z[:, :, None] - z[:, None, :]
    idx = np.arange(n)
    diff[:, idx, idx] = np.inf
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = p / dp
        w = ratio / (1.0 - ratio * np.sum(1.0 / diff, axis=2))
    w[~np.isfinite(w)] = 0.0
    z = z - w
    p, _, _ = _horner(c, z)
    scale = np.ones(z.shape)
    r = np.maximum(1.0, np.abs(z))
    for j in range(1, n + 1):
        scale = scale * r + np.abs(c[:, j:j + 1])
    if np.any(np.abs(p) > 1e-10 * scale):
        worst = float(np.max(np.abs(p) / scale))
        raise ConvergenceFailure(f"root residual {worst:.2e} exceeds tolerance")
    return z


def roots(p: Polynomial, dps: int | None = None) -> np.ndarray:
    """All roots of ``p`` with multiplicity.

    With ``dps`` set, mpmath's polynomial solver is used at that many
    decimal digits; this is what resolves high-multiplicity roots of
    exactly representable polynomials.
    """
    if p.degree < 1:
        raise ValueError("degree must be >= 1")
    if dps is None:
        return roots_many(p.coeffs[None, :])[0]
    return _roots_mp(p.coeffs, dps)


def _roots_mp(coeffs, dps: int, max_iter: int = 2000) -> np.ndarray:
    import mpmath

    coeffs = np.asarray(coeffs, dtype=complex)
    nz = 0
    while nz < coeffs.size - 1 and coeffs[coeffs.size - 1 - nz] == 0:
        nz += 1
    if nz:
        rest = _roots_mp(coeffs[: coeffs.size - nz], dps, max_iter) if coeffs.size - nz > 1 else []
        return np.concatenate([np.zeros(nz, dtype=complex), rest])

    with mpmath.workdps(dps):
        c = [mpmath.mpc(complex(a)) for a in coeffs]
        c = [a / c[0] for a in c]
        absc = [abs(a) for a in c]
        n = len(c) - 1
        z = [mpmath.mpc(0.4, 0.9) ** k for k in range(n)]
        target = mpmath.mpf(10) ** (5 - dps)
        for _ in range(max_iter):
            for k in range(n):
                p, dp = c[0], mpmath.mpc(0)
                for a in c[1:]:
                    dp = dp * z[k] + p
                    p = p * z[k] + a
                if p == 0:
                    continue
                r = p / dp
                s = mpmath.fsum(1 / (z[k] - z[j]) for j in range(n) if j != k)
                z[k] -= r / (1 - r * s)
            res = max(abs(mpmath.polyval(c, x)) / mpmath.polyval(absc, max(1, abs(x))) for x in z)
            if res < target:
                return np.array([complex(x) for x in z])
        raise ConvergenceFailure(f"high-precision roots stalled at residual {float(res):.2e}")


# -- Minkowski function --------------------------------------------------------

def minkowski_h(z, dps: int | None = None) -> float:
    """max modulus of the roots of the polynomial attached to ``z``."""
    z = as_point(z)
    if not np.any(z):
        return 0.0
    return float(np.max(np.abs(roots(poly_from_point(z), dps=dps))))


def minkowski_h_many(zs) -> np.ndarray:
    z = np.asarray(zs, dtype=complex)
    n = z.shape[1]
    c = np.concatenate([np.ones((z.shape[0], 1)), _alternating(n) * z], axis=1)
    return np.max(np.abs(roots_many(c)), axis=1)


def minkowski_h_bisect(z, rtol: float = 1e-12, max_iter: int = 200) -> float:
    """Gauge inf{t > 0 : pi_{1/t}(z) in G_n} located by bisection on membership."""
    z = as_point(z)
    if not np.any(z):
        return 0.0
    k = np.arange(1, z.size + 1)
    hi = 2.0 * float(np.max(np.abs(z) ** (1.0 / k))) + 1e-300
    lo = 0.0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if in_Gn(pi_action(1.0 / mid, z), tol=0.0):
            hi = mid
        else:
            lo = mid
        if hi - lo <= rtol * hi:
            break
    return 0.5 * (lo + hi)


# -- power sums in elementary symmetric polynomials --------------------------

def _padd(a: dict, b: dict, scale: int = 1) -> dict:
    out = dict(a)
    for mono, c in b.items():
        v = out.get(mono, 0) + scale * c
        if v:
            out[mono] = v
        else:
            out.pop(mono, None)
    return out


def _pmul_sigma(a: dict, i: int, n: int) -> dict:
    out = {}
    for mono, c in a.items():
        e = list(mono)
        e[i - 1] += 1
        out[tuple(e)] = c
    return out


def power_sums_in_elem(n: int, m: int) -> dict[tuple[int, ...], int]:
    """Sum_j t_j^m written in sigma_1..sigma_n, exactly.

    Returns ``{exponents: coefficient}`` where ``exponents[i]`` is the power
    of sigma_(i+1). Built from Newton's identities
    p_m = sum_{i=1}^{min(m-1,n)} (-1)^(i-1) sigma_i p_(m-i) + (-1)^(m-1) m sigma_m.
    """
    if not (1 <= n <= 8 and 1 <= m <= 2 * n + 2):
        raise ValueError("need 1 <= n <= 8 and 1 <= m <= 2n+2")
    zero = (0,) * n
    p: list[dict] = [{zero: n}]
    for k in range(1, m + 1):
        acc: dict = {}
        for i in range(1, min(k - 1, n) + 1):
            acc = _padd(acc, _pmul_sigma(p[k - i], i, n), (-1) ** (i - 1))
        if k <= n:
            acc = _padd(acc, _pmul_sigma({zero: 1}, k, n), (-1) ** (k - 1) * k)
        p.append(acc)
    return p[m]


def waring_coefficient(n: int) -> Fraction:
    """Coefficient of z_1 z_n in (1/n) sum t_j^(n+1) viewed as a function of sigma(t)."""
    expansion = power_sums_in_elem(n, n + 1)
    mono = [0] * n
    mono[0] += 1
    mono[n - 1] += 1
    return Fraction(expansion.get(tuple(mono), 0), n)


def eval_elem_expansion(expansion: dict, sigma: Sequence[complex]) -> complex:
    total = 0j
    for mono, c in expansion.items():
        term = complex(c)
        for s, e in zip(sigma, mono):
            if e:
                term *= s ** e
        total += term
    return total
