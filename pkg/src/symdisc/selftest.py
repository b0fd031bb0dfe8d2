"""Quick checks of the elementary cases, grouped by module, for ``--selftest``."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import bergman, spectral, sympoly
from .errors import CertificateMissing, DegenerateStep, Order3Violation
from .metrics import appendix_c, circle, discs, extremal, pick

Check = tuple[str, Callable[[], bool]]


def _close(a, b, tol=1e-12) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    return a.size == 0 or float(np.max(np.abs(a - b))) <= tol


def _raises(exc, fn) -> bool:
    try:
        fn()
    except exc:
        return True
    return False


def _sympoly() -> list[Check]:
    a = 0.3 + 0.1j
    P = sympoly.Polynomial
    return [
        ("sigma of zero", lambda: _close(sympoly.elem_sym([0, 0, 0]), [0, 0, 0])),
        ("sigma of (a, -a)", lambda: _close(sympoly.elem_sym([a, -a]), [0, -a * a])),
        ("polynomial of the origin", lambda: _close(sympoly.poly_from_point([0, 0, 0]).coeffs, [1, 0, 0, 0])),
        ("Cohn step of zeta^2", lambda: _close(sympoly.cohn_reduce(P([1, 0, 0])).coeffs, [1, 0])),
        ("degenerate Cohn step", lambda: _raises(DegenerateStep, lambda: sympoly.cohn_reduce(P([1, 0, 1])))),
        ("zeta^3 has its roots inside", lambda: sympoly.all_roots_in_disc(P([1, 0, 0, 0]))),
        ("origin lies in G_n", lambda: all(sympoly.in_Gn(np.zeros(n)) for n in range(1, 7))),
        ("(0,0) lies in closed G_2", lambda: sympoly.in_G2_closed(0, 0)),
        ("h(0) = 0", lambda: sympoly.minkowski_h([0, 0, 0]) == 0),
        ("roots of zeta^2 - 1", lambda: _close(np.sort_complex(sympoly.roots(P([1, 0, -1]))), [-1, 1])),
        ("triple root 0.5", lambda: _close(sympoly.roots(P.from_roots([0.5] * 3)), [0.5] * 3, 1e-5)),
        ("first power sum", lambda: sympoly.power_sums_in_elem(4, 1) == {(1, 0, 0, 0): 1}),
        ("second power sum", lambda: sympoly.power_sums_in_elem(2, 2) == {(2, 0): 1, (0, 1): -2}),
    ]


def _bergman() -> list[Check]:
    return [
        ("unit disc kernel at 0", lambda: _close(bergman.kernel_Gn([0], [0]), 1 / math.pi)),
        ("G_2 closed form at 0", lambda: _close(bergman.kernel_G2_closed([0, 0], [0, 0]), 2 / math.pi ** 2)),
        ("Hermitian symmetry", lambda: _close(
            bergman.kernel_Gn([0.1, 0.3j, -0.4], [0.2j, -0.5, 0.6]),
            np.conj(bergman.kernel_Gn([0.2j, -0.5, 0.6], [0.1, 0.3j, -0.4])), 1e-10)),
        ("a, b, c at the origin", lambda: _close(bergman.abc([0, 0, 0]), [0, 0, 3])),
        ("root of b z = 0", lambda: _close(bergman.quad_roots(0, 1, 0), [0])),
    ]


def _spectral() -> list[Check]:
    jordan = np.array([[0, 1], [0, 0]], dtype=complex)
    comp = np.array([[0, 0, 0.1], [1, 0, -0.2j], [0, 1, 0.3]])
    b = np.array([[1, 2j], [0.5, -3]])
    return [
        ("identity spectrum", lambda: _close(spectral.sigma_of(np.eye(3)), [3, 3, 1])),
        ("companion matrix", lambda: _close(spectral.sigma_of(comp), [0.3, 0.2j, 0.1])),
        ("zero matrix radius", lambda: spectral.spectral_radius(np.zeros((3, 3))) == 0 and spectral.in_omega(np.zeros((3, 3)))),
        ("diag(0.5, 1.2) outside", lambda: _close(spectral.spectral_radius(np.diag([0.5, 1.2])), 1.2) and not spectral.in_omega(np.diag([0.5, 1.2]))),
        ("nilpotent block", lambda: spectral.spectral_radius(7 * jordan) == 0),
        ("Phi_0 is the identity", lambda: _close(spectral.mobius_phi(0, b / 4), b / 4)),
        ("sigma' along 0", lambda: _close(spectral.sigma_prime(b, np.zeros((2, 2))), [0, 0])),
        ("sigma'_1 is the trace", lambda: _close(spectral.sigma_prime(comp, comp.T)[0], np.trace(comp), 1e-10)),
        ("distinct diagonal is cyclic", lambda: spectral.cyclicity(np.diag([0.1, 0.2, 0.3])).consensus),
        ("diag(0, 0) is not cyclic", lambda: not spectral.cyclicity(np.zeros((2, 2))).consensus),
        ("commutator for B = 0", lambda: _close(spectral.solve_commutator(jordan, np.zeros((2, 2))), np.zeros((2, 2)))),
        ("curve at zeta = 0", lambda: _close(spectral.isospectral_curve(jordan, b, 0), jordan)),
        ("rotation exponential", lambda: _rotation(0.7)),
        ("pole at lambda I", lambda: spectral.lempert_scalar_pole(0.3, 0.3 * np.eye(2)) < 1e-15),
        ("kappa at 0", lambda: _close(spectral.kappa_scalar_pole(0, np.diag([0.2, -0.5])), 0.5)),
        ("s of equal scalar matrices", lambda: spectral.s_minmax(0.3 * np.eye(2), 0.3 * np.eye(2)) < 1e-12),
        ("cone predicates at 0", lambda: spectral.tangent_cone_predicates(np.zeros((3, 3)), "A_t")
            and spectral.tangent_cone_predicates(np.zeros((3, 3)), "A_tilde")),
        ("decomposition of 0", lambda: _zero_decomposition()),
        ("order-one third component", lambda: _raises(Order3Violation, lambda: spectral.lift_disc_G3([[0], [0], [0, 1]]))),
        ("competitor at the origin", lambda: spectral.lempert_upper_bound_G3([0, 0, 0]) == 0),
    ]


def _rotation(t: float) -> bool:
    r = np.array([[math.cos(t), math.sin(t)], [-math.sin(t), math.cos(t)]])
    e = np.diag([1.0, 0.0])
    return _close(spectral.isospectral_curve(e, np.array([[0, t], [-t, 0]]), 1), r @ e @ r.T)


def _zero_decomposition() -> bool:
    d = spectral.decompose_XY(np.zeros((3, 3)), "A_tilde")
    return d is not None and _close(d.x, 0) and _close(d.y, 0)


def _metrics() -> list[Check]:
    rng = np.random.default_rng(0)
    z = rng.normal(size=3) * 0.1 + 1j * rng.normal(size=3) * 0.1
    w = rng.normal(size=3) * 0.1 + 1j * rng.normal(size=3) * 0.1
    x = np.array([0.2, -0.1j, 0.3])
    return [
        ("f_lambda at z = 0", lambda: _close(circle.f_lambda(np.zeros(3), np.exp(1j * np.arange(5))), 0)),
        ("m(z, z) = 0", lambda: circle.m_Gn(z, z) == 0),
        ("m symmetric", lambda: _close(circle.m_Gn(z, w), circle.m_Gn(w, z), 1e-10)),
        ("m below 1", lambda: circle.m_Gn(z, w) < 1),
        ("rho homogeneous", lambda: _close(circle.rho_n(x * (0.5 - 2j)), abs(0.5 - 2j) * circle.rho_n(x), 1e-10)),
        ("disc for k = n", lambda: _close(extremal.extremal_disc_ek(3, 3)(0.4j), [0, 0, 0.4j])),
        ("r3(0, 0) = -1", lambda: extremal.r3(0, 0) == -1),
        ("coarse grid below 0.999", lambda: appendix_c.grid_search_appendixC(1e-2).grid_max <= 0.999 + 1e-12),
        ("target 2 certified", lambda: appendix_c.certified_max_bb(target=2).certified_below == 2),
        ("C_1 refused without certificate", lambda: _raises(CertificateMissing, lambda: appendix_c.caratheodory_gamma2_G3_lower(None))),
        ("one-node Pick problem", lambda: pick.np_solvable(pick.PickProblem([0.3j], [0.9]))),
        ("f_B for the identity", lambda: _close(discs.f_B_disc([0], 1, 3, 0.2 + 0.1j), [0, 0, 0.2 + 0.1j], 1e-12)),
        ("single pole", lambda: _close(discs.l_disc_poles([0.4], 0.1j), discs.m_disc(0.4, 0.1j))),
        ("z at a pole", lambda: discs.l_disc_poles([0.4, -0.2], 0.4) == 0),
        ("two poles at 0", lambda: _close(discs.l_disc_poles([0.3, -0.4], 0), 0.12)),
        ("product property, theta = 0", lambda: _product(0.5, -0.5, 0.0, 0.25)),
        ("rhs is the pole function", lambda: _close(discs.product_property_check([0.3j, 0.6], 1.0).rhs, discs.l_disc_poles([0.3j, 0.6], 0))),
    ]


def _product(a1, a2, theta, value) -> bool:
    r = discs.product_property_check([a1, a2], theta)
    return r.equal and _close(r.lhs_upper, value) and _close(r.rhs, value)


SUITES: dict[str, Callable[[], list[Check]]] = {
    "sympoly": _sympoly,
    "bergman": _bergman,
    "spectral": _spectral,
    "metrics": _metrics,
}


def run(module: str) -> list[tuple[str, bool, str]]:
    out = []
    for label, fn in SUITES[module]():
        try:
            ok, note = bool(fn()), ""
        except Exception as exc:  # a failing check is reported, not raised
            ok, note = False, f"{type(exc).__name__}: {exc}"
        out.append((label, ok, note))
    return out
