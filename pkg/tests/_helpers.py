"""Random generators and independent oracles shared by the test modules."""

from __future__ import annotations

import math
import os
import random
from fractions import Fraction

import sympy

from pwssolve.polyring import LAM, T, MPoly, Poly

SEED = int(os.environ.get("PWS_SOLVE_SEED", "20240611"))


def rng(salt: int = 0) -> random.Random:
    return random.Random(SEED * 1000003 + salt)


def rand_frac(r: random.Random, size: int = 5, denoms=(1, 1, 1, 2, 3)) -> Fraction:
    return Fraction(r.randint(-size, size), r.choice(denoms))


def rand_poly(r: random.Random, maxdeg: int = 3, var: str = T, zero_ok: bool = True,
              size: int = 5) -> Poly:
    while True:
        d = r.randint(0, maxdeg)
        p = Poly([rand_frac(r, size) for _ in range(d + 1)], var)
        if zero_ok or p:
            return p


def rand_mpoly(r: random.Random, nvars: int = 2, maxdeg: int = 2, var: str = T,
               nterms: int = 4, zero_ok: bool = True) -> MPoly:
    while True:
        terms = {}
        for _ in range(r.randint(1, nterms)):
            tot = r.randint(0, maxdeg)
            e = [0] * nvars
            for _ in range(tot):
                e[r.randrange(nvars)] += 1
            terms[tuple(e)] = rand_frac(r, 4)
        p = MPoly(terms, nvars, var)
        if zero_ok or p:
            return p


def rand_weight(r: random.Random, parity: int, bound: int = 12) -> int:
    k = r.randint(-bound, bound)
    return k if (k - parity) % 2 == 0 else k + (1 if k < bound else -1)


# -- sympy conversions (oracle side) ----------------------------------------

x = sympy.Symbol("x")


def to_sympy(p: Poly, sym=x):
    return sum((sympy.Rational(c.numerator, c.denominator) * sym ** k
                for k, c in enumerate(p.coeffs)), sympy.Integer(0))


def sympy_poly(p: Poly, sym=x) -> sympy.Poly:
    return sympy.Poly(to_sympy(p, sym), sym, domain="QQ")


# -- exact linear algebra oracle ---------------------------------------------


def fraction_rank(rows: list[list[Fraction]]) -> int:
    """Rank over Q by integer Gaussian elimination (rows scaled to primitive integer vectors)."""
    m = []
    for r in rows:
        den = 1
        for c in r:
            den = den * c.denominator // math.gcd(den, c.denominator)
        iv = [int(c * den) for c in r]
        if any(iv):
            m.append(iv)
    rank, ncols = 0, (len(m[0]) if m else 0)
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        for i in range(rank + 1, len(m)):
            a = m[i][c]
            if a:
                row = [pr[c] * u - a * v for u, v in zip(m[i], pr)]
                g = 0
                for u in row:
                    g = math.gcd(g, u)
                m[i] = [u // g for u in row] if g > 1 else row
        rank += 1
    return rank


def bounded_solvable(A: list[list[Poly]], b: list[Poly], D: int) -> bool:
    """Is there ``h`` with every ``deg h_j <= D`` and ``A h = b``?  Brute-force coefficient system.

    Unknown ``c_{j,k}`` is the ``t^k`` coefficient of ``h_j``; the equation for
    row ``i`` and power ``t^e`` collects ``A_ij[e-k] c_{j,k}``.
    """
    n = len(A[0]) if A else 0
    degA = max((len(a.coeffs) - 1 for row in A for a in row), default=0)
    degb = max((len(p.coeffs) - 1 for p in b), default=0)
    E = max(degA + D, degb) + 1
    mat = []
    for i, row in enumerate(A):
        for e in range(E):
            eq = []
            for j in range(n):
                cs = row[j].coeffs
                for k in range(D + 1):
                    eq.append(cs[e - k] if 0 <= e - k < len(cs) else Fraction(0))
            rhs = b[i].coeffs[e] if e < len(b[i].coeffs) else Fraction(0)
            mat.append(eq + [rhs])
    if not mat:
        return True
    coef = [r[:-1] for r in mat]
    return fraction_rank(coef) == fraction_rank(mat)


def lam_var(i: int, nvars: int) -> MPoly:
    return MPoly.variable(i, nvars, LAM)


def _coeff_system(A: list[list[Poly]], D: int):
    n = len(A[0]) if A else 0
    degA = max((len(a.coeffs) - 1 for row in A for a in row), default=0)
    E = max(degA + D, 0) + 1
    mat = []
    for row in A:
        for e in range(E):
            eq = []
            for j in range(n):
                cs = row[j].coeffs
                for k in range(D + 1):
                    eq.append(cs[e - k] if 0 <= e - k < len(cs) else Fraction(0))
            mat.append(eq)
    return mat, n


def fraction_nullspace(mat: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right null space via reduced row echelon form."""
    m = [list(r) for r in mat]
    pivots, rank = [], 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c]
        m[rank] = [v * inv for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        pivots.append(c)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def bounded_kernel(A: list[list[Poly]], D: int) -> list[list[Poly]]:
    """Q-basis of ``{h : deg h_j <= D, A h = 0}`` by brute-force linear algebra."""
    mat, n = _coeff_system(A, D)
    vecs = fraction_nullspace(mat, n * (D + 1))
    return [[Poly(v[j * (D + 1):(j + 1) * (D + 1)]) for j in range(n)] for v in vecs]
