import cmath
import math
from itertools import product

import numpy as np
import pytest

from gaussvar.polyring import (
    Monomial,
    MultiPoly,
    Wavevector,
    format_poly,
    monomials_up_to_degree,
    parse_poly,
    poly_add,
    poly_eval,
    poly_mul,
    poly_scale,
    truncated_exponential,
    variables,
)


def brute_monomials(n, D):
    """Independent enumeration: filter the full exponent box."""
    out = [e for e in product(range(D + 1), repeat=n) if sum(e) <= D]
    return sorted(out, key=lambda e: (sum(e), tuple(-x for x in e)))


class TestMonomialEnumeration:
    def test_univariate_degree_two(self):
        mons = monomials_up_to_degree(1, 2)
        assert [m.exponents for m in mons] == [(0,), (1,), (2,)]

    def test_degree_zero(self):
        mons = monomials_up_to_degree(2, 0)
        assert [m.exponents for m in mons] == [(0, 0)]

    @pytest.mark.parametrize("n,D", [(2, 3), (3, 4), (1, 6), (4, 2)])
    def test_count_and_order_match_brute_force(self, n, D):
        mons = monomials_up_to_degree(n, D)
        assert len(mons) == math.comb(n + D, D)
        assert [m.exponents for m in mons] == brute_monomials(n, D)

    @pytest.mark.parametrize("n,D", [(2, 4), (3, 3)])
    def test_strictly_increasing_graded_lex(self, n, D):
        mons = monomials_up_to_degree(n, D)
        assert all(a < b for a, b in zip(mons, mons[1:]))
        assert len(set(mons)) == len(mons)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            monomials_up_to_degree(0, 3)
        with pytest.raises(ValueError):
            monomials_up_to_degree(2, -1)
        with pytest.raises(ValueError):
            Monomial((1, -2))


class TestEvaluation:
    def test_sum_of_squares(self):
        x, y = variables(2)
        p = x * x + y * y
        assert poly_eval(p, (3.0, 4.0)) == 25.0

    def test_constant(self):
        p = MultiPoly.constant(3, 1.0)
        assert poly_eval(p, (9.0, -2.0, 0.5)) == 1.0

    def test_linear_form(self):
        p = Wavevector((1.0, 2.0)).linear_form()
        assert poly_eval(p, (5.0, 7.0)) == 19.0

    def test_batch_matches_pointwise(self):
        x, y = variables(2)
        p = 2.0 * x * y + x ** 3 - 0.5
        pts = np.array([[0.5, 1.0], [-2.0, 3.0], [0.0, 0.0]])
        batch = p.eval(pts)
        for i in range(3):
            assert batch[i] == p.eval(pts[i])

    def test_dimension_mismatch(self):
        p = MultiPoly.variable(2, 0)
        with pytest.raises(ValueError):
            p.eval((1.0, 2.0, 3.0))


class TestRingOps:
    def test_cancellation(self):
        x, y = variables(2)
        assert (x + y) + (x - y) == 2.0 * x

    def test_square(self):
        (x,) = variables(1)
        assert poly_mul(x, x) == x ** 2

    def test_scale_by_zero(self):
        (x,) = variables(1)
        z = poly_scale(x ** 2, 0.0)
        assert z.is_zero() and z.terms == {}

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            poly_add(MultiPoly.variable(1, 0), MultiPoly.variable(2, 0))

    def test_partial_derivative(self):
        x, y = variables(2)
        p = x ** 3 * y + 2.0 * y
        assert p.partial(0) == 3.0 * x ** 2 * y
        assert p.partial(1) == x ** 3 + MultiPoly.constant(2, 2.0)


def random_int_poly(rng, n, max_degree):
    terms = {}
    for mono in monomials_up_to_degree(n, max_degree):
        c = int(rng.integers(-9, 10))
        if c and rng.random() < 0.6:
            terms[mono] = float(c)
    return MultiPoly(n, terms)


class TestRingAxioms:
    """Exact axioms on canonical forms, with small integer coefficients."""

    @pytest.mark.parametrize("seed", range(8))
    def test_axioms_exact(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 4))
        p = random_int_poly(rng, n, 4)
        q = random_int_poly(rng, n, 4)
        s = random_int_poly(rng, n, 4)
        assert (p + q) + s == p + (q + s)
        assert p + q == q + p
        assert p * q == q * p
        assert (p * q) * s == p * (q * s)
        assert p * (q + s) == p * q + p * s

    @pytest.mark.parametrize("seed", range(6))
    def test_eval_homomorphism(self, seed):
        rng = np.random.default_rng(100 + seed)
        n = int(rng.integers(1, 4))
        p = random_int_poly(rng, n, 3) * float(rng.uniform(0.1, 2.0))
        q = random_int_poly(rng, n, 3) * float(rng.uniform(0.1, 2.0))
        x = rng.uniform(-2.0, 2.0, size=n)
        lhs = poly_eval(p * q, x)
        rhs = poly_eval(p, x) * poly_eval(q, x)
        assert abs(lhs - rhs) <= 1e-10 * (1.0 + abs(rhs))


class TestTruncatedExponential:
    def test_order_one_is_constant(self):
        p = truncated_exponential((3.0, -1.0), 1)
        assert [m.exponents for m in p.terms] == [(0, 0)]
        assert p.terms[Monomial((0, 0))] == 1.0 + 0.0j

    def test_order_two_axis_aligned(self):
        p = truncated_exponential((1.0, 0.0), 2)
        assert p.terms == {
            Monomial((0, 0)): 1.0 + 0.0j,
            Monomial((1, 0)): 1j,
        }

    def test_high_order_approximates_exponential(self):
        p = truncated_exponential((1.0, 0.0), 20)
        val = p.eval((0.5, 0.0))
        assert abs(val - cmath.exp(0.5j)) <= 1e-12

    @pytest.mark.parametrize("m", [1, 3, 7, 12, 20])
    def test_taylor_remainder_inequality(self, m):
        rng = np.random.default_rng(m)
        k = Wavevector(rng.uniform(-1.0, 1.0, size=2))
        p = truncated_exponential(k, m)
        for _ in range(20):
            x = rng.uniform(-1.5, 1.5, size=2)
            y = k.norm * float(np.linalg.norm(x))
            if y > 3.0:
                continue
            err = abs(p.eval(x) - cmath.exp(1j * k.dot(x)))
            bound = y ** m / math.factorial(m) * math.exp(y)
            assert err <= bound * (1.0 + 1e-12) + 1e-15

    def test_invalid_order(self):
        with pytest.raises(ValueError):
            truncated_exponential((1.0,), 0)


class TestTextFormat:
    def test_examples_round_trip(self):
        x, y = variables(2)
        polys = [
            x ** 2 + y ** 2,
            MultiPoly.constant(2, 1.0),
            -3.0 * x * y + 0.125 * y ** 3 - 2.0,
            MultiPoly.zero(2),
            MultiPoly(2, {Monomial((1, 0)): 1e-17, Monomial((0, 2)): -7.25}),
        ]
        for p in polys:
            text = format_poly(p)
            q = parse_poly(text, ambient_dim=2)
            assert q == p
            assert format_poly(q) == text

    @pytest.mark.parametrize("seed", range(10))
    def test_random_round_trip_bit_exact(self, seed):
        rng = np.random.default_rng(200 + seed)
        n = int(rng.integers(1, 4))
        terms = {}
        for mono in monomials_up_to_degree(n, 4):
            if rng.random() < 0.4:
                terms[mono] = float(rng.standard_normal() * 10.0 ** rng.integers(-12, 12))
        p = MultiPoly(n, terms)
        q = parse_poly(format_poly(p), ambient_dim=n)
        assert q == p

    def test_complex_coefficients_round_trip(self):
        p = MultiPoly(1, {Monomial((2,)): 1.5 - 0.25j, Monomial((0,)): 1j})
        q = parse_poly(format_poly(p), ambient_dim=1)
        assert q == p

    def test_scientific_notation_minus(self):
        p = parse_poly("1e-05*x1^2-3", ambient_dim=1)
        assert p.terms[Monomial((2,))] == 1e-05
        assert p.terms[Monomial((0,))] == -3.0

    def test_parse_errors(self):
        with pytest.raises(ValueError):
            parse_poly("")
        with pytest.raises(ValueError):
            parse_poly("2*")
        with pytest.raises(ValueError):
            parse_poly("x0^2")
        with pytest.raises(ValueError):
            parse_poly("x3^1", ambient_dim=2)


class TestWavevector:
    def test_norm_identity(self):
        k = Wavevector((3.0, 4.0))
        assert k.norm_sq == 25.0
        assert k.norm == 5.0
        assert k.norm ** 2 == pytest.approx(k.norm_sq, rel=1e-15)
