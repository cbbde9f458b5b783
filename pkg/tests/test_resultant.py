"""Resultant and determinant tests: algebraic identities and the gcd link."""

import random
from fractions import Fraction

import pytest

from deltahyp import DegreeError, PolynomialRing, poly_gcd
from deltahyp.resultant import det_bareiss, det_cofactor, resultant, sylvester_matrix

RING = PolynomialRing(("t", "s"))
T = RING.var("t")
S = RING.var("s")


def poly_with_roots(roots):
    """Product of (t - root) for rational roots."""
    p = RING.one()
    for r in roots:
        p = p * (T - RING.const(Fraction(r)))
    return p


class TestSylvesterMatrix:
    def test_shape(self):
        f = T**3 + S
        g = T**2 - 1
        m = sylvester_matrix(f, g, "t")
        assert len(m) == 5
        assert all(len(row) == 5 for row in m)

    def test_rejects_constant_operand(self):
        with pytest.raises(DegreeError):
            sylvester_matrix(T + 1, RING.one() + S, "t")


class TestDeterminants:
    def test_bareiss_matches_cofactor_random(self):
        rng = random.Random(2024)
        for size in range(1, 7):
            for _ in range(6):
                matrix = [
                    [
                        RING.const(rng.randint(-5, 5))
                        + RING.var("s").scale(rng.randint(-2, 2))
                        for _ in range(size)
                    ]
                    for _ in range(size)
                ]
                assert det_bareiss(matrix) == det_cofactor(matrix)

    def test_singular_matrix(self):
        row = [T + 1, S, RING.one()]
        matrix = [row, row[:], [RING.one(), RING.zero(), S]]
        assert det_bareiss(matrix).is_zero()

    def test_known_determinant(self):
        matrix = [
            [RING.const(2), RING.const(1)],
            [RING.const(7), RING.const(4)],
        ]
        assert det_bareiss(matrix) == RING.one()


class TestResultantValues:
    def test_product_of_root_differences(self):
        # res(f, g) = lc(f)^deg(g) * lc(g)^deg(f) * prod (ri - sj) up to sign
        f = poly_with_roots([1, 2])
        g = poly_with_roots([3, 5])
        value = resultant(f, g, "t")
        assert value.is_constant()
        expected = Fraction((1 - 3) * (1 - 5) * (2 - 3) * (2 - 5))
        assert value.constant_value() == expected

    def test_shared_root_gives_zero(self):
        f = poly_with_roots([1, 4])
        g = poly_with_roots([4, 9])
        assert resultant(f, g, "t").is_zero()

    def test_symbolic_discriminant_like(self):
        # res_t(t^2 - s, 2t) = -4s  up to sign convention
        f = T**2 - S
        g = RING.const(2) * T
        value = resultant(f, g, "t")
        assert value in (RING.const(-4) * S, RING.const(4) * S)

    def test_multiplicative_in_second_argument(self):
        rng = random.Random(99)
        for _ in range(10):
            f = poly_with_roots([rng.randint(-4, 4), rng.randint(5, 9)])
            g = poly_with_roots([rng.randint(-9, -5)])
            h = poly_with_roots([rng.randint(10, 14)])
            lhs = resultant(f, g * h, "t")
            rhs = resultant(f, g, "t") * resultant(f, h, "t")
            assert lhs == rhs

    def test_methods_agree(self):
        f = T**3 + S * T + 1
        g = S * T**2 - T + 2
        assert resultant(f, g, "t") == resultant(f, g, "t", method="naive")


class TestResultantGcdLink:
    """res(f, g) = 0 iff f and g share a nonconstant factor in the variable."""

    def test_constructed_pairs(self):
        rng = random.Random(314)
        shared, coprime = 0, 0
        while shared < 30 or coprime < 30:
            a = poly_with_roots([rng.randint(-9, 9) for _ in range(rng.randint(1, 2))])
            b = poly_with_roots([rng.randint(-9, 9) for _ in range(rng.randint(1, 2))])
            common = poly_with_roots([rng.randint(-9, 9)])
            give_common = rng.random() < 0.5
            f = a * (common if give_common else RING.one())
            g = b * (common if give_common else RING.one())
            if not give_common:
                roots_a = {r for r, in _roots_of(a)}
                roots_b = {r for r, in _roots_of(b)}
                if roots_a & roots_b:
                    continue  # accidental overlap; not a coprime sample
            value = resultant(f, g, "t")
            has_common = poly_gcd(f, g).degree("t") >= 1
            assert value.is_zero() == has_common
            if has_common:
                shared += 1
            else:
                coprime += 1


def _roots_of(p):
    """Recover integer roots of a product of monic linear factors (test helper)."""
    roots = []
    q = p
    for candidate in range(-9, 10):
        while q.degree("t") >= 1 and q.substitute("t", Fraction(candidate)).is_zero():
            q = q.exact_div(T - RING.const(candidate))
            roots.append((candidate,))
    return roots
