"""Reference forms the replay checks its derived stages against.

Each function returns, for a fixed integer dimension n, the closed-form
reference polynomial for one tagged stage of the elimination, built in the
frame ring of a :class:`~deltahyp.derivation.DerivationAlgebra`.  Structural
templates (allowed monomial supports) for the stages whose reference
coefficients are not pinned numerically live here as well.

All equations are written as single polynomials (left side minus right side).
"""

from __future__ import annotations

from fractions import Fraction

from .derivation import DerivationAlgebra
from .poly import Polynomial


def _fr(num: int, den: int = 1) -> Fraction:
    return Fraction(num, den)


# -- scalar coefficient tables ---------------------------------------------------


def kappa_reference(n: int) -> Fraction:
    """Cubic prefactor as tabulated in the reference first integrals."""
    return _fr(2 * n**3 + 31 * n**2 - 112 * n + 96)


def kappa_corrected(n: int) -> Fraction:
    """Re-parenthesized variant of the cubic prefactor.

    This is the determinant (up to a positive rational factor) of the linear
    solve that produces the first integrals, hence the value the elimination
    actually needs to be nonzero.  It differs from :func:`kappa_reference` by
    the sign of the trailing group and is nonzero for every integer n >= 4.
    """
    return _fr(2 * n**3 - 31 * n**2 + 112 * n - 96)


# -- master equations -------------------------------------------------------------


def master_A(alg: DerivationAlgebra) -> Polynomial:
    """First master equation, normalized to a unit second-order coefficient."""
    n = alg.n
    r = alg.ring
    H, beta, E, EE = r.var("H"), r.var("beta"), r.var("E"), r.var("EE")
    u, v = r.var("w212"), r.var("w313")
    coeff_uv = _fr(-(9 * n**2 - 50 * n + 48), n**2)
    c_H3 = _fr(n**2 * (7 * n**2 - 29 * n + 26), 2 * (n - 2) ** 2)
    c_H2b = _fr(2 * n * (n - 1), n - 2)
    c_Hb2 = _fr(-4 * (n - 1), n)
    return (
        EE
        + coeff_uv * ((u + v) * E)
        + c_H3 * H**3
        + c_H2b * (H**2 * beta)
        + c_Hb2 * (H * beta**2)
    )


def master_B(alg: DerivationAlgebra) -> Polynomial:
    """Second master equation (the one that pins the second-order term)."""
    n = alg.n
    r = alg.ring
    H, E, EE, w = r.var("H"), r.var("E"), r.var("EE"), r.var("w414")
    return EE + _fr(n + 2, 2) * (w * E) + _fr(n**3, 4 * (n - 2)) * H**3


def master_C(alg: DerivationAlgebra, a_poly: Polynomial) -> Polynomial:
    """Third master equation (the trace/type relation), reference orientation."""
    n = alg.n
    r = alg.ring
    H, beta, E, EE = r.var("H"), r.var("beta"), r.var("E"), r.var("EE")
    u, v, w = r.var("w212"), r.var("w313"), r.var("w414")
    return (
        -EE
        - (u + v + (n - 3) * w) * E
        + _fr(n**2 * (n + 2), 2 * (n - 2)) * H**3
        - _fr(n**2, n - 2) * (H**2 * beta)
        + 2 * (H * beta**2)
        - a_poly * H
    )


def master_A_unreduced(alg: DerivationAlgebra) -> Polynomial:
    """First master equation before the dimension constants are substituted."""
    r = alg.ring
    n = alg.n
    c1, c2 = alg.c1, alg.c2
    H, beta, E, EE = r.var("H"), r.var("beta"), r.var("E"), r.var("EE")
    u, v = r.var("w212"), r.var("w313")
    coeff_uv = 2 * (n - 3) * (c1 + c2) * (2 * c1 - c2) + c2 * (2 * c2 - c1)
    c_H3 = 2 * (n - 3) * (2 * c1 - c2) * (c1 + c2) * c2**2 - c1 * c2**2 * (c1 - c2)
    return (
        c2**2 * EE
        + coeff_uv * ((u + v) * E)
        - c_H3 * H**3
        - 2 * c2**2 * (c1 - c2) * (H**2 * beta)
        + 2 * c2 * (c1 - c2) * (H * beta**2)
    )


def master_B_unreduced(alg: DerivationAlgebra) -> Polynomial:
    """Second master equation before the dimension constants are substituted."""
    r = alg.ring
    c1, c2 = alg.c1, alg.c2
    H, E, EE, w = r.var("H"), r.var("E"), r.var("EE"), r.var("w414")
    return (c1 + c2) * EE + (c1 + 2 * c2) * (w * E) - c1 * c2 * (c1 + c2) * H**3


# -- auxiliary product relation ----------------------------------------------------


def product_relation(alg: DerivationAlgebra) -> Polynomial:
    """Reference quadratic relation among the three connection quotients.

    Written with the antisymmetric partners substituted (the diagonal
    first-slot coefficients are the negatives of w414 resp. w313).
    """
    n = alg.n
    r = alg.ring
    c1, c2 = alg.c1, alg.c2
    H, beta = r.var("H"), r.var("beta")
    u, v, w = r.var("w212"), r.var("w313"), r.var("w414")
    K = (n - 3) * (c1 + c2) * c2 * H**2 + beta * (c2 * H - beta)
    return -(n - 3) * (w * (u + v)) - u * v - K


# -- first integrals ---------------------------------------------------------------


def integral_sum_quotient(alg: DerivationAlgebra, a_poly: Polynomial) -> Polynomial:
    """Reference first integral for the (w212+w313)-flow term."""
    n = alg.n
    r = alg.ring
    H, beta, E = r.var("H"), r.var("beta"), r.var("E")
    u, v = r.var("w212"), r.var("w313")
    kap = kappa_reference(n)
    return (
        _fr(2, n**2) * kap * ((u + v) * E)
        - _fr(n**2 * (5 * n**3 - 82 * n**2 + 256 * n - 200), 4 * (n - 2) ** 2) * H**3
        - _fr(n * (3 * n**2 - 16 * n + 16), 2 * (n - 2)) * (H**2 * beta)
        - _fr(3 * n**2 - 40 * n + 48, n) * (H * beta**2)
        - _fr(n + 2, 2) * (a_poly * H)
    )


def integral_lone_quotient(alg: DerivationAlgebra, a_poly: Polynomial) -> Polynomial:
    """Reference first integral for the w414-flow term."""
    n = alg.n
    r = alg.ring
    H, beta, E = r.var("H"), r.var("beta"), r.var("E")
    w = r.var("w414")
    kap = kappa_reference(n)
    return (
        _fr(2, n**2) * kap * (w * E)
        - _fr(7 * n**4 - 56 * n**3 + 86 * n**2 + 152 * n - 192, 2 * (n - 2) ** 2) * H**3
        + _fr(11 * n**2 - 52 * n + 48, n - 2) * (H**2 * beta)
        - _fr(2 * (5 * n**2 - 44 * n + 48), n**2) * (H * beta**2)
        + _fr(9 * n**2 - 50 * n + 48, n**2) * (a_poly * H)
    )


def integral_product(alg: DerivationAlgebra, a_poly: Polynomial) -> Polynomial:
    """Reference first integral for the w212*w313 product."""
    n = alg.n
    r = alg.ring
    H, beta = r.var("H"), r.var("beta")
    u, v = r.var("w212"), r.var("w313")
    kap = kappa_reference(n)
    return (
        _fr(1, n * (n - 3)) * kap * (u * v)
        - _fr(n**2 * (n**3 - 144 * n**2 + 480 * n - 392), 4 * (n - 2) ** 2) * H**2
        - _fr(n * (n**3 - 56 * n**2 + 176 * n - 144), 2 * (n - 2) * (n - 3)) * (H * beta)
        - _fr(5 * n**3 - 18 * n**2 + 56 * n - 48, n * (n - 3)) * beta**2
        - _fr(n + 2, 2) * (a_poly * H)
    )


def integral_square(alg: DerivationAlgebra, a_poly: Polynomial) -> Polynomial:
    """Reference first integral for the squared flow derivative."""
    n = alg.n
    r = alg.ring
    H, beta, E = r.var("H"), r.var("beta"), r.var("E")
    kap = kappa_reference(n)
    return (
        -_fr(4, n**3) * kap * E**2
        - _fr(7 * n**4 - 56 * n**3 + 86 * n**2 + 152 * n - 192, 2 * (n - 2) ** 2) * H**4
        + _fr(11 * n**2 - 52 * n + 48, n - 2) * (H**3 * beta)
        - _fr(2 * (5 * n**2 - 44 * n + 48), n**2) * (H**2 * beta**2)
        + _fr(9 * n**2 - 50 * n + 48, n**2) * (a_poly * H**2)
    )


# -- structural templates -----------------------------------------------------------

#: Allowed (H, beta, a)-exponents for the two linear-relation coefficient forms.
TEMPLATE_LINEAR_FORM = frozenset(
    {(4, 0, 0), (3, 1, 0), (2, 2, 0), (1, 3, 0), (2, 0, 1), (1, 1, 1)}
)

#: Allowed (H, beta, a)-exponents for the cubic form of the product relation.
TEMPLATE_CUBIC_FORM = frozenset({(3, 0, 0), (2, 1, 0), (1, 2, 0), (1, 0, 1)})


def template_curve9() -> frozenset[tuple[int, int, int]]:
    """Maximal support of the degree-9 curve: odd strata 9/7/5/3 against a^0..a^3."""
    out = set()
    for k in range(4):
        d = 9 - 2 * k
        for i in range(d + 1):
            out.add((i, d - i, k))
    return frozenset(out)


def template_curve12() -> frozenset[tuple[int, int, int]]:
    """Maximal support of the degree-12 curve: even strata 12/10/8/6/4 with a^0..a^4."""
    out = set()
    for k in range(5):
        d = 12 - 2 * k
        for i in range(d + 1):
            out.add((i, d - i, k))
    return frozenset(out)


def allowed_side_conditions(alg: DerivationAlgebra) -> list[Polynomial]:
    """Fixed vocabulary of denominators that may legally be cleared."""
    r = alg.ring
    c1, c2 = alg.c1, alg.c2
    H, beta, E = r.var("H"), r.var("beta"), r.var("E")
    return [
        c1 * H - beta,
        c2 * H - 2 * beta,
        (c1 - c2) * H + beta,
        (c1 + c2) * H - beta,
        c1 * H + beta,
        c2 * H,
        E,
    ]
