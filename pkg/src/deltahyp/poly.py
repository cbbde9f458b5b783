"""Exact-arithmetic sparse multivariate polynomials and rational functions.

The ring fixes an ordered tuple of variable names.  A polynomial stores a map
from exponent vectors (tuples of non-negative ints, one slot per ring
variable) to nonzero ``fractions.Fraction`` coefficients.  The canonical term
order is graded lexicographic: higher total degree first, ties broken by the
exponent vector compared left to right (earlier ring variables are stronger).
Canonical text renders terms in descending order, e.g. ``-1/2*w212*E + 44*H^3``.

Everything here is immutable after construction and safe to share.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegreeError,
    ExactDivisionError,
    ParseError,
    RingMismatchError,
    UnknownVariableError,
)

_VAR_RE = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


class PolynomialRing:
    """An ordered universe of variable names over the rationals."""

    __slots__ = ("vars", "_index")

    def __init__(self, variables: Sequence[str]):
        names = tuple(variables)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names}")
        for name in names:
            if not _VAR_RE.match(name):
                raise ValueError(f"invalid variable name: {name!r}")
        object.__setattr__(self, "vars", names)
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(names)})

    def __setattr__(self, *_):  # pragma: no cover - guard
        raise AttributeError("PolynomialRing is immutable")

    def __eq__(self, other):
        return isinstance(other, PolynomialRing) and self.vars == other.vars

    def __hash__(self):
        return hash(self.vars)

    def __repr__(self):
        return f"PolynomialRing({', '.join(self.vars)})"

    def index(self, var: str) -> int:
        try:
            return self._index[var]
        except KeyError:
            raise UnknownVariableError(f"{var!r} is not in ring {self.vars}") from None

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, value) -> "Polynomial":
        value = Fraction(value)
        if value == 0:
            return self.zero()
        return Polynomial(self, {(0,) * len(self.vars): value})

    def var(self, name: str) -> "Polynomial":
        exp = [0] * len(self.vars)
        exp[self.index(name)] = 1
        return Polynomial(self, {tuple(exp): Fraction(1)})

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(self, text)


def _grlex_key(exp: tuple[int, ...]) -> tuple:
    return (sum(exp), exp)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: Mapping[tuple[int, ...], Fraction]):
        clean = {}
        width = len(ring.vars)
        for exp, coeff in terms.items():
            if len(exp) != width:
                raise ValueError(f"exponent vector {exp} does not fit ring {ring.vars}")
            coeff = Fraction(coeff)
            if coeff != 0:
                clean[tuple(exp)] = coeff
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):  # pragma: no cover - guard
        raise AttributeError("Polynomial is immutable")

    # -- basic predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(exp) == 0 for exp in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    # -- ring arithmetic ----------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise RingMismatchError(
                f"ring mismatch: {self.ring.vars} vs {other.ring.vars}"
            )

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            new = out.get(exp, Fraction(0)) + coeff
            if new == 0:
                out.pop(exp, None)
            else:
                out[exp] = new
        return Polynomial(self.ring, out)

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                new = out.get(exp, Fraction(0)) + c1 * c2
                if new == 0:
                    out.pop(exp, None)
                else:
                    out[exp] = new
        return Polynomial(self.ring, out)

    def __rmul__(self, other):
        return self * other

    def __radd__(self, other):
        return self + other

    def __rsub__(self, other):
        return (-self) + other

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return self.ring.const(other)

    def scale(self, value) -> "Polynomial":
        value = Fraction(value)
        if value == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {e: c * value for e, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.ring, tuple(sorted(self.terms.items()))))
            object.__setattr__(self, "_hash", h)
        return h

    # -- structure ----------------------------------------------------------

    def degree(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if self.is_zero():
            return -1
        i = self.ring.index(var)
        return max(exp[i] for exp in self.terms)

    def total_degree(self) -> int:
        if self.is_zero():
            return -1
        return max(sum(exp) for exp in self.terms)

    def variables_used(self) -> tuple[str, ...]:
        used = [False] * len(self.ring.vars)
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.ring.vars, used) if u)

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def leading_coefficient(self) -> Fraction:
        return self.leading()[1]

    def coefficient_of(self, var: str, power: int) -> "Polynomial":
        """Collect terms with the given power of ``var`` (that slot zeroed)."""
        i = self.ring.index(var)
        out = {}
        for exp, coeff in self.terms.items():
            if exp[i] == power:
                reduced = list(exp)
                reduced[i] = 0
                out[tuple(reduced)] = coeff
        return Polynomial(self.ring, out)

    def coefficients_in(self, var: str) -> list["Polynomial"]:
        """Dense coefficient list [c_0, ..., c_d] viewing self in ``var``."""
        d = self.degree(var)
        if d < 0:
            return []
        return [self.coefficient_of(var, k) for k in range(d + 1)]

    # -- calculus / evaluation ----------------------------------------------

    def diff(self, var: str) -> "Polynomial":
        i = self.ring.index(var)
        out: dict[tuple[int, ...], Fraction] = {}
        for exp, coeff in self.terms.items():
            e = exp[i]
            if e == 0:
                continue
            new = list(exp)
            new[i] = e - 1
            key = tuple(new)
            val = out.get(key, Fraction(0)) + coeff * e
            if val == 0:
                out.pop(key, None)
            else:
                out[key] = val
        return Polynomial(self.ring, out)

    def evaluate(self, assignment: Mapping[str, Fraction]) -> Fraction:
        for var in self.variables_used():
            if var not in assignment:
                raise UnknownVariableError(f"assignment missing variable {var!r}")
        values = {}
        for var, val in assignment.items():
            values[self.ring.index(var)] = Fraction(val)
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            term = coeff
            for i, e in enumerate(exp):
                if e:
                    term *= values[i] ** e
            total += term
        return total

    def substitute(self, var: str, value) -> "Polynomial":
        """Partial evaluation: replace one variable by a rational or polynomial."""
        i = self.ring.index(var)
        if isinstance(value, Polynomial):
            self._check(value)
            out = self.ring.zero()
            for exp, coeff in self.terms.items():
                reduced = list(exp)
                e = reduced[i]
                reduced[i] = 0
                term = Polynomial(self.ring, {tuple(reduced): coeff})
                out = out + term * value**e
            return out
        value = Fraction(value)
        out_terms: dict[tuple[int, ...], Fraction] = {}
        for exp, coeff in self.terms.items():
            reduced = list(exp)
            e = reduced[i]
            reduced[i] = 0
            key = tuple(reduced)
            val = out_terms.get(key, Fraction(0)) + coeff * value**e
            if val == 0:
                out_terms.pop(key, None)
            else:
                out_terms[key] = val
        return Polynomial(self.ring, out_terms)

    def restrict_ring(self, ring: PolynomialRing) -> "Polynomial":
        """Re-express in a smaller/other ring containing every used variable."""
        positions = []
        for var in self.ring.vars:
            positions.append(ring._index.get(var, -1))
        out = {}
        width = len(ring.vars)
        for exp, coeff in self.terms.items():
            new = [0] * width
            for i, e in enumerate(exp):
                if not e:
                    continue
                j = positions[i]
                if j < 0:
                    raise UnknownVariableError(
                        f"variable {self.ring.vars[i]!r} not present in target ring"
                    )
                new[j] = e
            out[tuple(new)] = coeff
        return Polynomial(ring, out)

    # -- division / normalization --------------------------------------------

    def exact_div(self, divisor: "Polynomial") -> "Polynomial":
        """Exact division; raises ExactDivisionError if not divisible."""
        divisor = self._coerce(divisor)
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if divisor.is_constant():
            return self.scale(Fraction(1) / divisor.constant_value())
        remainder = dict(self.terms)
        quotient: dict[tuple[int, ...], Fraction] = {}
        div_exp, div_coeff = divisor.leading()
        while remainder:
            exp = max(remainder, key=_grlex_key)
            coeff = remainder[exp]
            q_exp = tuple(a - b for a, b in zip(exp, div_exp))
            if any(e < 0 for e in q_exp):
                raise ExactDivisionError("division left a nonzero remainder")
            q_coeff = coeff / div_coeff
            quotient[q_exp] = quotient.get(q_exp, Fraction(0)) + q_coeff
            for d_exp, d_coeff in divisor.terms.items():
                key = tuple(a + b for a, b in zip(q_exp, d_exp))
                val = remainder.get(key, Fraction(0)) - q_coeff * d_coeff
                if val == 0:
                    remainder.pop(key, None)
                else:
                    remainder[key] = val
        return Polynomial(self.ring, quotient)

    def divides(self, other: "Polynomial") -> bool:
        try:
            other.exact_div(self)
            return True
        except ExactDivisionError:
            return False

    def content(self) -> Fraction:
        """Positive rational content (gcd of coefficients); 0 for zero."""
        if self.is_zero():
            return Fraction(0)
        num = 0
        den = 1
        for coeff in self.terms.values():
            num = math.gcd(num, abs(coeff.numerator))
            den = den * coeff.denominator // math.gcd(den, coeff.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Polynomial":
        """Canonical primitive part: content 1, positive leading coefficient."""
        if self.is_zero():
            return self
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        return self.scale(Fraction(1) / c)

    def monic_in_lead(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(Fraction(1) / self.leading_coefficient())

    # -- rendering ------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def render(self) -> str:
        if self.is_zero():
            return "0"
        pieces = []
        for position, (exp, coeff) in enumerate(self.sorted_terms()):
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.ring.vars, exp)
                if e
            )
            mag = abs(coeff)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if position == 0:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"<Polynomial {self.render()}>"


# -- parsing -------------------------------------------------------------------

_TERM_SPLIT = re.compile(r"(?=[+-])")
_FACTOR_RE = re.compile(
    r"^(?P<num>\d+(?:/\d+)?)$|^(?P<var>[A-Za-z_][A-Za-z_0-9]*)(?:\^(?P<pow>\d+))?$"
)


def parse_polynomial(ring: PolynomialRing, text: str) -> Polynomial:
    """Parse the canonical ASCII polynomial format (round-trip of render)."""
    stripped = text.replace(" ", "")
    if not stripped:
        raise ParseError("empty polynomial text")
    if stripped == "0":
        return ring.zero()
    chunks = [c for c in _TERM_SPLIT.split(stripped) if c]
    result = ring.zero()
    for chunk in chunks:
        sign = Fraction(1)
        while chunk and chunk[0] in "+-":
            if chunk[0] == "-":
                sign = -sign
            chunk = chunk[1:]
        if not chunk:
            raise ParseError(f"dangling sign in {text!r}")
        coeff = sign
        exp = [0] * len(ring.vars)
        for factor in chunk.split("*"):
            m = _FACTOR_RE.match(factor)
            if not m:
                raise ParseError(f"bad factor {factor!r} in {text!r}")
            if m.group("num") is not None:
                coeff *= Fraction(m.group("num"))
            else:
                name = m.group("var")
                power = int(m.group("pow") or 1)
                exp[ring.index(name)] += power
        result = result + Polynomial(ring, {tuple(exp): coeff})
    return result


# -- gcd -------------------------------------------------------------------------


def _from_dense(coeffs: list[Polynomial], main: str, ring: PolynomialRing) -> Polynomial:
    x = ring.var(main)
    out = ring.zero()
    xk = ring.one()
    for c in coeffs:
        if not c.is_zero():
            out = out + c * xk
        xk = xk * x
    return out


def _pseudo_remainder(
    f_coeffs: list[Polynomial], g_coeffs: list[Polynomial]
) -> list[Polynomial]:
    """Pseudo-remainder of dense univariate views with polynomial coefficients.

    Classical premultiplication-free form: each step replaces R by
    lc(g)*R - lead(R)*x^shift*g, which stays in the polynomial ring.  The
    result therefore differs from the textbook lc(g)^k * (f mod g) by a
    power of lc(g) only, which is harmless inside a primitive sequence.
    """
    f = list(f_coeffs)
    dg = len(g_coeffs) - 1
    lc_g = g_coeffs[-1]
    while True:
        while f and f[-1].is_zero():
            f.pop()
        df = len(f) - 1
        if df < dg or not f:
            return f
        lead = f[-1]
        f = [c * lc_g for c in f[:-1]]
        shift = df - dg
        for k in range(dg):
            f[shift + k] = f[shift + k] - lead * g_coeffs[k]


def _coefficient_content(coeffs: Iterable[Polynomial], ring: PolynomialRing) -> Polynomial:
    g = ring.zero()
    for c in coeffs:
        g = poly_gcd(g, c)
        if g.is_constant() and not g.is_zero():
            return ring.one()
    return g


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Multivariate gcd via a primitive pseudo-remainder sequence.

    Result has rational content 1 and positive leading coefficient;
    gcd(0, g) is the normalized g; gcd of two nonzero constants is 1.
    """
    if f.ring != g.ring:
        raise RingMismatchError("gcd of polynomials from different rings")
    ring = f.ring
    if f.is_zero():
        return g.primitive()
    if g.is_zero():
        return f.primitive()
    if f.is_constant() or g.is_constant():
        return ring.one()
    main = next(v for v in ring.vars if f.degree(v) > 0 or g.degree(v) > 0)
    if f.degree(main) == 0 or g.degree(main) == 0:
        # The gcd is free of the main variable: it divides the side without it
        # and the coefficient-content of the other side.
        free, other = (f, g) if f.degree(main) == 0 else (g, f)
        return poly_gcd(free, _coefficient_content(other.coefficients_in(main), ring))

    cont_f = _coefficient_content(f.coefficients_in(main), ring)
    cont_g = _coefficient_content(g.coefficients_in(main), ring)
    cont = poly_gcd(cont_f, cont_g)
    a = f.exact_div(cont_f).primitive()
    b = g.exact_div(cont_g).primitive()
    if a.degree(main) < b.degree(main):
        a, b = b, a
    while True:
        if b.degree(main) == 0:
            # Primitive and coprime in the main variable.
            pp = ring.one()
            break
        rem = _pseudo_remainder(a.coefficients_in(main), b.coefficients_in(main))
        if not rem:
            pp = b
            break
        r = _from_dense(rem, main, ring).primitive()
        r_cont = _coefficient_content(r.coefficients_in(main), ring)
        if not r_cont.is_constant():
            r = r.exact_div(r_cont)
        a, b = b, r
    return (pp * cont).primitive()


class RationalFunction:
    """Quotient of polynomials, kept gcd-reduced with a sign-normalized denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, *, reduce: bool = True):
        if den is None:
            den = num.ring.one()
        if num.ring != den.ring:
            raise RingMismatchError("rational function parts from different rings")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = num.ring.one()
        elif reduce:
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = num.exact_div(g)
                den = den.exact_div(g)
            # normalize: denominator primitive with positive leading coefficient
            c = den.content()
            if den.leading_coefficient() < 0:
                c = -c
            den = den.scale(Fraction(1) / c)
            num = num.scale(Fraction(1) / c)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *_):  # pragma: no cover - guard
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def of(cls, p: Polynomial) -> "RationalFunction":
        return cls(p, p.ring.one(), reduce=False)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError(f"not a polynomial: {self.render()}")
        return self.num.scale(Fraction(1) / self.den.constant_value())

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction.of(other)
        return RationalFunction.of(self.num.ring.const(other))

    def __add__(self, other):
        other = self._coerce(other)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            other = self._coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def render(self) -> str:
        if self.is_polynomial():
            return self.as_polynomial().render()
        return f"({self.num.render()}) / ({self.den.render()})"

    def __repr__(self):
        return f"<RationalFunction {self.render()}>"


# -- spec-facing functional wrappers --------------------------------------------


def poly_arith(lhs: Polynomial, rhs: Polynomial, kind: str) -> Polynomial:
    """add/sub/mul with explicit ring checking (typed errors, no coercion)."""
    if not isinstance(lhs, Polynomial) or not isinstance(rhs, Polynomial):
        raise TypeError("poly_arith expects Polynomial operands")
    if lhs.ring != rhs.ring:
        raise RingMismatchError(f"ring mismatch: {lhs.ring.vars} vs {rhs.ring.vars}")
    if kind == "add":
        return lhs + rhs
    if kind == "sub":
        return lhs - rhs
    if kind == "mul":
        return lhs * rhs
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def poly_diff(p: Polynomial, var: str) -> Polynomial:
    return p.diff(var)


def evaluate(p: Polynomial, assignment: Mapping[str, Fraction]) -> Fraction:
    missing = [v for v in p.variables_used() if v not in assignment]
    if missing:
        raise UnknownVariableError(f"assignment missing variables {missing}")
    return p.evaluate(assignment)
