from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from conftest import disc_points
from strategies import disc_tuples, in_disc
from symdisc.bergman import min_separation
from symdisc.errors import DegenerateStep
from symdisc.sympoly import (
    Polynomial,
    all_roots_in_disc,
    cohn_reduce,
    elem_sym,
    elem_sym_many,
    eval_elem_expansion,
    in_G2_closed,
    in_Gn,
    minkowski_h,
    minkowski_h_bisect,
    minkowski_h_many,
    pi_action,
    poly_from_point,
    power_sums_in_elem,
    root_location,
    roots,
    roots_many,
    waring_coefficient,
)


def brute_elem_sym(xs):
    return [sum(np.prod(c) for c in combinations(xs, k)) for k in range(1, len(xs) + 1)]


class TestElementarySymmetric:
    def test_zero(self):
        assert np.all(elem_sym([0, 0, 0]) == 0)

    def test_opposite_pair(self):
        a = 0.3 + 0.1j
        assert np.allclose(elem_sym([a, -a]), [0, -a * a], atol=1e-15)

    def test_three_values(self):
        assert np.allclose(elem_sym([1, 2, 3]), [6, 11, 6])

    @given(disc_tuples())
    def test_matches_subset_sums(self, xs):
        assert np.allclose(elem_sym(xs), brute_elem_sym(xs), atol=1e-12)

    @given(disc_tuples(2, 6), st.randoms())
    def test_permutation_invariant(self, xs, rnd):
        ys = list(xs)
        rnd.shuffle(ys)
        assert np.allclose(elem_sym(xs), elem_sym(ys), atol=1e-13)

    def test_batched(self, rng):
        xs = disc_points(rng, (50, 4))
        rows = np.array([elem_sym(x) for x in xs])
        assert np.allclose(elem_sym_many(xs), rows, atol=1e-14)

    def test_polynomial_of_origin(self):
        assert np.all(poly_from_point([0, 0, 0]).coeffs == [1, 0, 0, 0])

    @given(disc_tuples())
    def test_polynomial_vanishes_at_the_roots(self, xs):
        p = poly_from_point(elem_sym(xs))
        assert np.max(np.abs(p(np.array(xs)))) < 1e-12


class TestCohn:
    def test_zeta_squared_reduces_to_zeta(self):
        assert np.allclose(cohn_reduce(Polynomial([1, 0, 0])).coeffs, [1, 0])

    def test_equal_end_moduli_is_degenerate(self):
        with pytest.raises(DegenerateStep):
            cohn_reduce(Polynomial([1, 0, 1]))

    def test_cube_inside(self):
        assert all_roots_in_disc(Polynomial([1, 0, 0, 0]))

    def test_origin_in_every_Gn(self):
        assert all(in_Gn(np.zeros(n)) for n in range(1, 9))

    def test_root_on_circle_is_boundary(self):
        rep = root_location(Polynomial.from_roots([1.0, 0.2]))
        assert not rep.inside and rep.boundary

    def test_agrees_with_numpy_roots(self, rng):
        # oracle: LAPACK eigenvalues of the companion matrix
        checked = 0
        for _ in range(2000):
            n = int(rng.integers(1, 7))
            c = np.concatenate([[1], (rng.normal(size=n) + 1j * rng.normal(size=n)) * rng.uniform(0.05, 1.2)])
            r = np.max(np.abs(np.roots(c)))
            if abs(r - 1) < 1e-8:
                continue
            assert all_roots_in_disc(Polynomial(c)) == (r < 1)
            checked += 1
        assert checked > 1900

    @given(disc_tuples(1, 6, 0.999))
    def test_sigma_of_disc_points_is_inside(self, xs):
        assert in_Gn(elem_sym(xs))

    @given(disc_tuples(1, 5), st.floats(1.001, 3.0))
    def test_one_root_outside(self, xs, r):
        assert not in_Gn(elem_sym(xs + [r]))


class TestG2:
    def test_origin(self):
        assert in_G2_closed(0, 0)

    def test_against_cohn(self, rng):
        s = 2 * disc_points(rng, 20000, 1.5)
        p = disc_points(rng, 20000, 1.2)
        for si, pi in zip(s, p):
            h = minkowski_h([si, pi])
            if abs(h - 1) < 1e-8:
                continue
            assert in_G2_closed(si, pi) == in_Gn([si, pi]) == (h < 1)


class TestRoots:
    def test_plus_minus_one(self):
        assert np.allclose(np.sort_complex(roots(Polynomial([1, 0, -1]))), [-1, 1])

    def test_triple_root(self):
        r = roots(Polynomial.from_roots([0.5] * 3))
        assert np.max(np.abs(r - 0.5)) < 1e-5

    def test_seven_fold_root_high_precision(self):
        r = roots(Polynomial.from_roots([1.0] * 7), dps=100)
        assert np.max(np.abs(r - 1)) < 1e-9

    def test_exact_zero_roots(self):
        r = roots(Polynomial([1, -0.5, 0, 0]))
        assert np.sum(r == 0) == 2 and np.any(np.isclose(r, 0.5))

    def test_batch_against_numpy(self, rng):
        c = np.concatenate([np.ones((200, 1)), rng.normal(size=(200, 5)) + 1j * rng.normal(size=(200, 5))], axis=1)
        got = roots_many(c)
        for row, rts in zip(c, got):
            want = np.roots(row)
            d = np.abs(rts[:, None] - want[None, :])
            assert np.max(np.min(d, axis=1)) < 1e-8


class TestMinkowski:
    def test_origin(self):
        assert minkowski_h([0, 0, 0]) == 0

    @given(disc_tuples(1, 6, 2.0))
    def test_max_modulus(self, xs):
        # repeated roots are only resolved to sqrt(eps) in double precision
        assume(len(xs) == 1 or min_separation(xs) > 1e-2)
        assert abs(minkowski_h(elem_sym(xs)) - max(abs(x) for x in xs)) < 1e-9

    @pytest.mark.parametrize("k", [2, 4, 7])
    def test_repeated_root_high_precision(self, k):
        assert abs(minkowski_h(elem_sym([1.0] * k), dps=100) - 1) < 1e-12

    @given(disc_tuples(1, 4, 1.5), in_disc(1.0))
    def test_homogeneous_under_pi_action(self, xs, lam):
        assume(len(xs) == 1 or min_separation(xs) > 1e-2)
        z = elem_sym(xs)
        assert abs(minkowski_h(pi_action(lam, z)) - abs(lam) * minkowski_h(z)) < 1e-9

    def test_bisection_and_batch_agree(self, rng):
        xs = disc_points(rng, (40, 4), 1.3)
        zs = elem_sym_many(xs)
        want = np.max(np.abs(xs), axis=1)
        assert np.allclose(minkowski_h_many(zs), want, atol=1e-9)
        assert np.allclose([minkowski_h_bisect(z) for z in zs], want, rtol=1e-10)


class TestNewton:
    def test_first_power_sum(self):
        assert power_sums_in_elem(5, 1) == {(1, 0, 0, 0, 0): 1}

    def test_second_power_sum(self):
        assert power_sums_in_elem(2, 2) == {(2, 0): 1, (0, 1): -2}

    @pytest.mark.parametrize("n,m", [(3, 4), (4, 5), (5, 6), (6, 7), (3, 7)])
    def test_exact_at_rational_points(self, n, m, rng):
        # exact oracle: evaluate both sides in rational arithmetic
        t = [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 7))) for _ in range(n)]
        sig = brute_elem_sym(t)
        lhs = sum(x ** m for x in t)
        rhs = Fraction(0)
        for mono, c in power_sums_in_elem(n, m).items():
            term = Fraction(c)
            for s, e in zip(sig, mono):
                term *= s ** e
            rhs += term
        assert lhs == rhs

    def test_numeric_evaluation(self, rng):
        t = disc_points(rng, 4)
        val = eval_elem_expansion(power_sums_in_elem(4, 5), elem_sym(t))
        assert abs(val - np.sum(t ** 5)) < 1e-12

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_waring_coefficient(self, n):
        assert waring_coefficient(n) == Fraction((-1) ** (n - 1) * (n + 1), n)

    def test_waring_frozen(self):
        assert [waring_coefficient(n) for n in (3, 4, 5)] == [Fraction(4, 3), Fraction(-5, 4), Fraction(6, 5)]
