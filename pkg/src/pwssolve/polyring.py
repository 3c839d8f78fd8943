"""Exact polynomials with rational coefficients.

Two concrete classes share one arithmetic interface:

* :class:`Poly` -- univariate, dense coefficient tuple, lowest degree first.
* :class:`MPoly` -- ``nvars`` variables, sparse ``{exponent tuple: coeff}``.

Every polynomial carries a variable tag, either ``"t"`` (the even variable
``t = λ²``) or ``"λ"``.  Arithmetic between different tags is refused, which
keeps even-ring data from silently mixing with ``λ``-polynomials.

>>> p = Poly([-1, 1])
>>> p * Poly([1, 1])
Poly('t^2 - 1')
>>> divmod(Poly([1, 0, 1]), Poly([0, 2]))
(Poly('1/2 t'), Poly('1'))
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

T = "t"
LAM = "λ"

NEG_INF = float("-inf")

Scalar = Union[int, Fraction]


class StructuralError(ValueError):
    """Operands with incompatible shape, arity or variable tag."""


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, _RationalABC)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c.strip())
    raise TypeError(f"not an exact rational: {c!r}")


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_terms(terms: Sequence[tuple[Fraction, str]]) -> str:
    """Join ``(coeff, monomial)`` pairs, highest first, as ``a - b + c``."""
    if not terms:
        return "0"
    out = []
    for k, (c, mono) in enumerate(terms):
        neg = c < 0
        a = -c if neg else c
        if mono and a == 1:
            body = mono
        elif mono:
            body = f"{format_rational(a)} {mono}"
        else:
            body = format_rational(a)
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _int_view(cs: Sequence[Fraction]) -> tuple[int, list[int]]:
    den = 1
    for c in cs:
        if c.denominator != 1:
            den = math.lcm(den, c.denominator)
    if den == 1:
        return 1, [c.numerator for c in cs]
    return den, [c.numerator * (den // c.denominator) for c in cs]


class Poly:
    """Immutable univariate polynomial over Q.

    ``coeffs[k]`` is the coefficient of ``var**k``; trailing zeros are
    stripped so the zero polynomial has ``coeffs == ()``.
    """

    __slots__ = ("coeffs", "var", "_iv")
    nvars = 1

    def __init__(self, coeffs: Iterable = (), var: str = T):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly, (self.coeffs, self.var))

    @classmethod
    def _raw(cls, fracs: list, var: str) -> Poly:
        """Build from a list of Fractions without re-validating."""
        while fracs and fracs[-1] == 0:
            fracs.pop()
        p = object.__new__(cls)
        object.__setattr__(p, "coeffs", tuple(fracs))
        object.__setattr__(p, "var", var)
        return p

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c, var: str = T) -> Poly:
        return cls([c], var)

    @classmethod
    def monomial(cls, deg: int, c=1, var: str = T) -> Poly:
        return cls([0] * deg + [c], var)

    @classmethod
    def from_roots(cls, roots: Iterable, var: str = T) -> Poly:
        """Monic polynomial ``prod (var - r)``."""
        p = cls([1], var)
        for r in roots:
            p = p * cls([-_frac(r), 1], var)
        return p

    def zero_like(self) -> Poly:
        return Poly((), self.var)

    def one_like(self) -> Poly:
        return Poly((1,), self.var)

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def lc(self) -> Fraction:
        if not self.coeffs:
            raise ZeroDivisionError("leading coefficient of the zero polynomial")
        return self.coeffs[-1]

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def monic(self) -> Poly:
        return self * (1 / self.lc())

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.var == other.var and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def __repr__(self):
        return f"Poly('{self}')"

    def __str__(self):
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            terms.append((c, mono))
        return _format_terms(terms)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.var != self.var:
                raise StructuralError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly([other], self.var)
        if isinstance(other, MPoly):
            raise StructuralError("cannot mix univariate and multivariate polynomials")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly._raw([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return Poly((), self.var)
        # integer convolution on denominator-cleared coefficients
        da, ia = self._int_coeffs()
        db, ib = o._int_coeffs()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(ia):
            if x:
                for j, y in enumerate(ib):
                    out[i + j] += x * y
        den = da * db
        if den == 1:
            return Poly._raw([Fraction(c) for c in out], self.var)
        return Poly._raw([Fraction(c, den) for c in out], self.var)

    __rmul__ = __mul__

    def _int_coeffs(self) -> tuple[int, list[int]]:
        try:
            return self._iv
        except AttributeError:
            iv = _int_view(self.coeffs)
            object.__setattr__(self, "_iv", iv)
            return iv

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        out = self.one_like()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other):
        return poly_divrem(self, self._coerce(other))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    # -- conversion ---------------------------------------------------
    def to_mpoly(self) -> MPoly:
        return MPoly({(k,): c for k, c in enumerate(self.coeffs) if c}, 1, self.var)

    def __call__(self, x):
        return eval_at(self, x)


class MPoly:
    """Immutable sparse polynomial in ``nvars`` variables over Q."""

    __slots__ = ("terms", "nvars", "var")

    def __init__(self, terms: Mapping[tuple, object] | Iterable = (), nvars: int = 2, var: str = T):
        if nvars < 1:
            raise StructuralError("nvars must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple, Fraction] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != nvars or min(e, default=0) < 0:
                raise StructuralError(f"bad exponent {e} for {nvars} variables")
            acc[e] = acc.get(e, Fraction(0)) + _frac(c)
        object.__setattr__(self, "terms", {e: c for e, c in acc.items() if c != 0})
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("MPoly is immutable")

    def __reduce__(self):
        return (MPoly, (dict(self.terms), self.nvars, self.var))

    @classmethod
    def constant(cls, c, nvars: int, var: str = T) -> MPoly:
        return cls({(0,) * nvars: c}, nvars, var)

    @classmethod
    def variable(cls, i: int, nvars: int, var: str = T) -> MPoly:
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, nvars, var)

    @classmethod
    def from_univariate(cls, p: Poly, i: int, nvars: int) -> MPoly:
        """Embed ``p`` as a polynomial in variable ``i`` of ``nvars``."""
        out = {}
        for k, c in enumerate(p.coeffs):
            if c:
                e = [0] * nvars
                e[i] = k
                out[tuple(e)] = c
        return cls(out, nvars, p.var)

    def zero_like(self) -> MPoly:
        return MPoly({}, self.nvars, self.var)

    def one_like(self) -> MPoly:
        return MPoly.constant(1, self.nvars, self.var)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        return max((sum(e) for e in self.terms), default=NEG_INF)

    def degree_in(self, i: int):
        return max((e[i] for e in self.terms), default=NEG_INF)

    def homogeneous_part(self, k: int) -> MPoly:
        return MPoly({e: c for e, c in self.terms.items() if sum(e) == k}, self.nvars, self.var)

    def leading_term(self) -> tuple[tuple, Fraction]:
        """Lex-largest term."""
        if not self.terms:
            raise ZeroDivisionError("leading term of the zero polynomial")
        e = max(self.terms)
        return e, self.terms[e]

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return (self.nvars, self.var, self.terms) == (other.nvars, other.var, other.terms)
        if isinstance(other, (int, Fraction)):
            return self.terms == MPoly.constant(other, self.nvars).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, self.var, frozenset(self.terms.items())))

    def _mono(self, e) -> str:
        parts = []
        for i, k in enumerate(e):
            if k == 0:
                continue
            name = f"{self.var}{i + 1}"
            parts.append(name if k == 1 else f"{name}^{k}")
        return " ".join(parts)

    def __str__(self):
        order = sorted(self.terms, key=lambda e: (sum(e), e), reverse=True)
        return _format_terms([(self.terms[e], self._mono(e)) for e in order])

    def __repr__(self):
        return f"MPoly('{self}', nvars={self.nvars})"

    def _coerce(self, other) -> MPoly:
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise StructuralError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
            if other.var != self.var:
                raise StructuralError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.constant(other, self.nvars, self.var)
        if isinstance(other, Poly):
            raise StructuralError("cannot mix univariate and multivariate polynomials")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        acc = dict(self.terms)
        for e, c in o.terms.items():
            acc[e] = acc.get(e, 0) + c
        return MPoly(acc, self.nvars, self.var)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()}, self.nvars, self.var)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        acc: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return MPoly(acc, self.nvars, self.var)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = self.one_like()
        for _ in range(e):
            out = out * self
        return out

    def to_poly(self) -> Poly:
        if self.nvars != 1:
            raise StructuralError("only single-variable MPoly converts to Poly")
        d = self.degree()
        if d == NEG_INF:
            return Poly((), self.var)
        cs = [Fraction(0)] * (d + 1)
        for (k,), c in self.terms.items():
            cs[k] = c
        return Poly(cs, self.var)

    def __call__(self, x):
        return eval_at(self, x)


AnyPoly = Union[Poly, MPoly]


def poly_zero(nvars: int = 1, var: str = T) -> AnyPoly:
    return Poly((), var) if nvars == 1 else MPoly({}, nvars, var)


def poly_one(nvars: int = 1, var: str = T) -> AnyPoly:
    return Poly((1,), var) if nvars == 1 else MPoly.constant(1, nvars, var)


def poly_arith(a: AnyPoly, b: AnyPoly, op: str) -> AnyPoly:
    if type(a) is not type(b) or a.nvars != b.nvars:
        raise StructuralError("mismatched polynomial arity")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def poly_divrem(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Euclidean division: ``a == b*q + r`` with ``deg r < deg b``."""
    if not isinstance(a, Poly) or not isinstance(b, Poly):
        raise StructuralError("poly_divrem is univariate; use mv_divide_exact")
    if b.var != a.var:
        raise StructuralError(f"variable mismatch: {a.var} vs {b.var}")
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(a.coeffs)
    db = len(b.coeffs) - 1
    if len(r) - 1 < db:
        return Poly((), a.var), a
    inv = 1 / b.coeffs[-1]
    q = [Fraction(0)] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c == 0:
            continue
        f = c * inv
        q[k - db] = f
        for i, bc in enumerate(b.coeffs):
            if bc:
                r[k - db + i] -= f * bc
    return Poly(q, a.var), Poly(r[:db], a.var)


def divides(b: Poly, a: Poly) -> bool:
    return poly_divrem(a, b)[1].is_zero()


def exact_quotient(a: Poly, b: Poly) -> Poly:
    q, r = poly_divrem(a, b)
    if r:
        raise ArithmeticError(f"{b} does not divide {a}")
    return q


def _xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Extended Euclid: ``(g, s, u)`` with ``s*a + u*b == g``, g monic or 0."""
    r0, r1 = a, b
    s0, s1 = a.one_like(), a.zero_like()
    u0, u1 = a.zero_like(), a.one_like()
    while r1:
        q, r = poly_divrem(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    if r0:
        inv = 1 / r0.lc()
        r0, s0, u0 = r0 * inv, s0 * inv, u0 * inv
    return r0, s0, u0


def gcd_bezout(polys: Sequence[Poly]) -> tuple[Poly, list[Poly]]:
    """Monic gcd ``g`` of ``polys`` and cofactors ``R`` with ``sum p_j R_j == g``.

    >>> g, R = gcd_bezout([Poly([-1, 1]), Poly([-2, 1])])
    >>> g, R
    (Poly('1'), [Poly('1'), Poly('-1')])
    """
    polys = list(polys)
    if not polys or all(p.is_zero() for p in polys):
        raise ValueError("zero ideal")
    for p in polys:
        if not isinstance(p, Poly):
            raise StructuralError("gcd_bezout is univariate")
    var = polys[0].var
    g = Poly((), var)
    R: list[Poly] = []
    for p in polys:
        g, s, u = _xgcd(g, p)
        R = [r * s for r in R] + [u]
    return g, R


def mv_divide_exact(a: AnyPoly, b: AnyPoly) -> AnyPoly | None:
    """Exact quotient ``a / b`` or None when ``b`` does not divide ``a``.

    Lex-order division by a single divisor; for an exact divisor the
    remainder vanishes, so any stuck leading term proves non-divisibility.
    """
    if isinstance(a, Poly) and isinstance(b, Poly):
        q, r = poly_divrem(a, b)
        return q if r.is_zero() else None
    if not isinstance(a, MPoly) or not isinstance(b, MPoly):
        raise StructuralError("mv_divide_exact needs operands of the same kind")
    b = a._coerce(b)
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    eb, cb = b.leading_term()
    rem = a
    quot: dict[tuple, Fraction] = {}
    while rem:
        ea, ca = rem.leading_term()
        if any(x < y for x, y in zip(ea, eb)):
            return None
        e = tuple(x - y for x, y in zip(ea, eb))
        c = ca / cb
        quot[e] = c
        rem = rem - MPoly({e: c}, a.nvars, a.var) * b
    return MPoly(quot, a.nvars, a.var)


def expand_even(h: AnyPoly) -> AnyPoly:
    """Substitute ``t_f = λ_f²``."""
    if isinstance(h, Poly):
        cs = [Fraction(0)] * (2 * len(h.coeffs) - 1) if h.coeffs else []
        for k, c in enumerate(h.coeffs):
            cs[2 * k] = c
        return Poly(cs, LAM)
    return MPoly({tuple(2 * x for x in e): c for e, c in h.terms.items()}, h.nvars, LAM)


def odd_part_is_zero(p: AnyPoly) -> bool:
    if isinstance(p, Poly):
        return all(c == 0 for c in p.coeffs[1::2])
    return all(all(x % 2 == 0 for x in e) for e in p.terms)


def symmetrize_even(p: AnyPoly) -> AnyPoly | None:
    """Average of ``p`` over all sign flips of the variables, written in ``t``.

    Single variable: ``(p(λ) + p(-λ))/2``.  In ``d`` variables the average
    runs over the ``2^d`` sign patterns, which keeps exactly the monomials
    that are even in every variable.
    """
    if p.var == T:
        return p
    if isinstance(p, Poly):
        return Poly(p.coeffs[0::2], T)
    kept = {}
    for e, c in p.terms.items():
        if all(x % 2 == 0 for x in e):
            kept[tuple(x // 2 for x in e)] = c
    out = MPoly(kept, p.nvars, T)
    # sign average recomputed term by term as an internal consistency check
    check: dict[tuple, Fraction] = {}
    n = p.nvars
    for mask in range(1 << n):
        for e, c in p.terms.items():
            sgn = -1 if sum(e[i] for i in range(n) if mask >> i & 1) % 2 else 1
            check[e] = check.get(e, Fraction(0)) + sgn * c
    avg = MPoly({e: c / (1 << n) for e, c in check.items()}, n, LAM)
    if expand_even(out) != avg:
        return None
    return out


def eval_at(p: AnyPoly, lam):
    """Evaluate in double-precision complex at ``λ``.

    ``lam`` is a scalar (single variable), a length-``nvars`` vector, or a
    numpy array whose last axis has length ``nvars`` (broadcast over the
    leading axes).  Polynomials in ``t`` are evaluated at ``t_f = λ_f²``.
    """
    arr = np.asarray(lam, dtype=complex)
    if isinstance(p, Poly):
        if arr.ndim >= 1 and arr.shape[-1] == 1 and arr.ndim > 0:
            arr = arr[..., 0]
        x = arr * arr if p.var == T else arr
        acc = np.zeros_like(x)
        for c in reversed(p.coeffs):
            acc = acc * x + complex(float(c))
        return acc if acc.ndim else complex(acc)
    if arr.shape[-1:] != (p.nvars,):
        raise StructuralError(f"expected {p.nvars} coordinates, got shape {arr.shape}")
    x = arr * arr if p.var == T else arr
    acc = np.zeros(x.shape[:-1], dtype=complex)
    for e, c in p.terms.items():
        term = np.full(x.shape[:-1], complex(float(c)))
        for i, k in enumerate(e):
            if k:
                term = term * x[..., i] ** k
        acc = acc + term
    return acc if acc.ndim else complex(acc)


def content_lcm(polys: Iterable[AnyPoly]) -> int:
    """LCM of all coefficient denominators (for integer-scaled views)."""
    out = 1
    for p in polys:
        cs = p.coeffs if isinstance(p, Poly) else p.terms.values()
        for c in cs:
            out = math.lcm(out, c.denominator)
    return out
