"""K-types of SL(2,R)^d and the twist polynomials between them.

A K-type of ``SO(2)^d`` is an integer tuple.  Between two parity-compatible
K-types ``n, m`` the Level-3 module of Hom_M-valued functions is free over
the even polynomials with generator ``q_{n,m}(λ)``; composing two
generators differs from the direct generator by the even factor
``r^l_{n,m}``::

    q_{n,m} * q_{l,n} == r^l_{n,m} * q_{l,m}
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .polyring import LAM, T, AnyPoly, MPoly, Poly, expand_even, odd_part_is_zero, symmetrize_even


class ParityError(ValueError):
    """Hom_M(E_n, E_m) vanishes because some factor has n_f != m_f mod 2."""

    def __init__(self, n, m):
        super().__init__(f"Hom_M is zero: K-types {n} and {m} differ in parity")
        self.n, self.m = n, m


class GroupMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class KType:
    weights: tuple[int, ...]

    def __post_init__(self):
        if not self.weights:
            raise ValueError("a K-type needs at least one weight")
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))

    @classmethod
    def of(cls, x: KTypeLike) -> KType:
        if isinstance(x, KType):
            return x
        if isinstance(x, int):
            return cls((x,))
        return cls(tuple(x))

    @property
    def rank(self) -> int:
        return len(self.weights)

    @property
    def group(self) -> str:
        return "sl2r" if self.rank == 1 else f"sl2r^{self.rank}"

    def to_json(self):
        return self.weights[0] if self.rank == 1 else list(self.weights)

    def __str__(self):
        return str(self.weights[0]) if self.rank == 1 else str(self.weights)


KTypeLike = Union[KType, int, Sequence[int]]


def _same_group(*ks: KType):
    if len({k.rank for k in ks}) > 1:
        raise GroupMismatch(f"K-types from different groups: {', '.join(map(str, ks))}")


def parity_compatible(n: KTypeLike, m: KTypeLike) -> bool:
    n, m = KType.of(n), KType.of(m)
    _same_group(n, m)
    return all((a - b) % 2 == 0 for a, b in zip(n.weights, m.weights))


def _same_sign(n: int, m: int) -> bool:
    # 0 carries no sign; both case formulas agree whenever one weight is 0
    return n * m >= 0


@lru_cache(maxsize=None)
def q_factor(n: int, m: int) -> Poly:
    """``q_{n,m}(λ)`` for SO(2), read off the four-case product table."""
    if (n - m) % 2:
        raise ParityError(n, m)
    half = Fraction(1, 2)
    if n == m:
        shifts = []
    elif abs(n) > abs(m) and _same_sign(n, m):
        # (λ + (|m|+1)/2)(λ + (|m|+3)/2) ... (λ + (|n|-1)/2)
        shifts = [half * k for k in range(abs(m) + 1, abs(n), 2)]
    elif abs(n) < abs(m) and _same_sign(n, m):
        # (λ - (|n|+1)/2) ... (λ - (|m|-1)/2)
        shifts = [-half * k for k in range(abs(n) + 1, abs(m), 2)]
    else:
        # (λ + (|n|-1)/2)(λ + (|n|-3)/2) ... (λ - (|m|-1)/2)
        top, bottom = abs(n) - 1, -(abs(m) - 1)
        shifts = [half * k for k in range(top, bottom - 1, -2)]
    return Poly.from_roots([-s for s in shifts], LAM)


@dataclass(frozen=True)
class TwistGenerator:
    source: KType
    target: KType
    poly: AnyPoly

    @property
    def degree(self) -> int:
        return int(self.poly.degree())

    def __str__(self):
        return str(self.poly)


def _product_over_factors(polys: Sequence[Poly], var: str) -> AnyPoly:
    if len(polys) == 1:
        return polys[0]
    d = len(polys)
    out = MPoly.constant(1, d, var)
    for i, p in enumerate(polys):
        out = out * MPoly.from_univariate(p, i, d)
    return out


def q_poly(n: KTypeLike, m: KTypeLike) -> TwistGenerator:
    return _q_poly(KType.of(n), KType.of(m))


@lru_cache(maxsize=8192)
def _q_poly(n: KType, m: KType) -> TwistGenerator:
    if not parity_compatible(n, m):
        raise ParityError(n, m)
    poly = _product_over_factors([q_factor(a, b) for a, b in zip(n.weights, m.weights)], LAM)
    return TwistGenerator(n, m, poly)


def _r_case_table(l: int, n: int, m: int) -> Poly:
    if l <= n <= m or m <= n <= l:
        return Poly([1], LAM)
    if l <= m < n or n < m <= l:
        return q_factor(n, m) * q_factor(m, n)
    # remaining orderings: m < l < n or n < l < m
    return q_factor(n, l) * q_factor(l, n)


class TwistIdentityError(AssertionError):
    pass


@lru_cache(maxsize=None)
def r_factor(l: int, n: int, m: int) -> Poly:
    """``r^l_{n,m}`` for SO(2) as a polynomial in ``t``."""
    for a, b in ((l, n), (n, m), (l, m)):
        if (a - b) % 2:
            raise ParityError(a, b)
    lam_poly = _r_case_table(l, n, m)
    if not odd_part_is_zero(lam_poly):
        raise TwistIdentityError(f"r^{l}_{{{n},{m}}} is not even: {lam_poly}")
    r = symmetrize_even(lam_poly)
    if __debug__:
        lhs = q_factor(n, m) * q_factor(l, n)
        rhs = expand_even(r) * q_factor(l, m)
        if lhs != rhs:
            raise TwistIdentityError(f"q/r identity fails for (l, n, m) = ({l}, {n}, {m})")
    return r


def r_poly(l: KTypeLike, n: KTypeLike, m: KTypeLike) -> AnyPoly:
    l, n, m = KType.of(l), KType.of(n), KType.of(m)
    _same_group(l, n, m)
    return _product_over_factors(
        [r_factor(a, b, c) for a, b, c in zip(l.weights, n.weights, m.weights)], T
    )


RHO_K_ABELIAN: tuple[Fraction, ...] | None = None  # rho_k vanishes for SO(2)^d


def casimir_eigenvalue(mu: KTypeLike, rho: Sequence | None = RHO_K_ABELIAN) -> Fraction:
    """Scalar ``|mu + rho|^2 - |rho|^2`` by which the Casimir of K acts on E_mu."""
    mu = KType.of(mu)
    rho = [Fraction(0)] * mu.rank if rho is None else [Fraction(x) for x in rho]
    if len(rho) != mu.rank:
        raise GroupMismatch("rho_k has the wrong rank")
    shifted = sum((w + r) ** 2 for w, r in zip(mu.weights, rho))
    return Fraction(shifted - sum(r * r for r in rho))
