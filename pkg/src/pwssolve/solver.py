"""Solvability, kernels and exactness at a fixed K-type.

Everything reduces to the untwisted matrix ``Ã = untwist(P, l)``: the system
``P v = w`` at K-type ``l`` is ``Ã h = b`` on even coordinates.  Over one
variable this is decided exactly (Smith form or the row-by-row Bézout
induction); over several variables a degree-bounded search is all we offer,
and a negative answer is reported as inconclusive.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .ktypes import KType, KTypeLike
from .polymatrix import PolyMatrix, kernel_basis, mv_bounded_solve, snf_solve
from .polyring import NEG_INF, AnyPoly, Poly, StructuralError, gcd_bezout, poly_divrem
from .pws import (
    Level3Element,
    Level3Operator,
    Level3Vector,
    apply,
    compose,
    operator_from_columns,
    untwist,
)

STRATEGIES = ("snf_direct", "row_induction")


@dataclass
class SolveReport:
    solution: Level3Vector | None
    method: str
    status: str  # "solved" | "unsolvable" | "inconclusive"
    certificate: str | None = None
    details: dict = field(default_factory=dict)

    @property
    def solved(self) -> bool:
        return self.solution is not None


class Exactness(str, enum.Enum):
    exact = "exact"
    im_strictly_smaller = "im_strictly_smaller"
    not_complex = "not_complex"


def _deg(p: AnyPoly) -> int:
    d = p.degree()
    return 0 if d == NEG_INF else int(d)


def solve_single_row(P: Level3Operator, w: Level3Element, l: KTypeLike | None = None) -> SolveReport:
    """Bézout solution of a one-row system ``sum_j P_j v_j = w``.

    With ``ã_j = a_j r^l_{n_j,m}`` and ``p = gcd(ã)``, a solution exists iff
    ``p`` divides ``b = w.h``; it is then ``h_j = (b/p) R_j`` for Bézout
    cofactors ``sum ã_j R_j = p``.
    """
    if len(P.targets) != 1:
        raise StructuralError("solve_single_row needs exactly one target row")
    l = KType.of(w.source if l is None else l)
    if w.source != l:
        raise StructuralError(f"rhs lives at K-type {w.source}, not {l}")
    if w.target != P.targets[0]:
        raise StructuralError("rhs target does not match the operator row")
    if l.rank != 1:
        raise StructuralError("solve_single_row is univariate; use solve_system")
    A = untwist(P, l)
    row = A.row(0)
    b = w.h
    h = _bezout_row(row, b)
    if isinstance(h, str):
        return SolveReport(None, "bezout_single_row", "unsolvable", h)
    sol = Level3Vector(l, P.sources, h)
    return SolveReport(sol, "bezout_single_row", "solved")


def _bezout_row(row: Sequence[Poly], b: Poly):
    """h with ``sum row_j h_j = b``, or a certificate string."""
    if all(a.is_zero() for a in row):
        if b.is_zero():
            return [b.zero_like() for _ in row]
        return f"row is zero but rhs {b} is not"
    g, R = gcd_bezout(row)
    beta, rem = poly_divrem(b, g)
    if rem:
        return f"gcd {g} does not divide {b}"
    return [beta * r for r in R]


def _row_induction(A: PolyMatrix, b: list[Poly], depth: int = 0):
    """Solve ``A h = b`` one row at a time.

    Solve the first row by Bézout, then look for the correction inside the
    kernel of that row: ``h = v1 + K1 g`` with ``(A' K1) g = b' - A' v1``.
    """
    n = A.cols
    var = b[0].var if b else "t"
    if A.rows == 0:
        return [Poly((), var)] * n
    first = A.row(0)
    v1 = _bezout_row(first, b[0])
    if isinstance(v1, str):
        return f"row {depth}: {v1}"
    if A.rows == 1:
        return v1
    rest = PolyMatrix.from_rows(A.to_rows()[1:], n)
    K1 = kernel_basis(PolyMatrix.from_rows([first], n))
    resid = [x - y for x, y in zip(b[1:], rest.apply(v1))]
    if not K1:
        if any(resid):
            return f"row {depth}: first row is injective and the remaining rows are not satisfied"
        return v1
    Kmat = PolyMatrix.from_rows([[k[i] for k in K1] for i in range(n)], len(K1))
    g = _row_induction(rest @ Kmat, resid, depth + 1)
    if isinstance(g, str):
        return g
    return [x + y for x, y in zip(v1, Kmat.apply(g))]


def default_degree_cap(A: PolyMatrix, b: Sequence[AnyPoly]) -> int:
    db = max((_deg(x) for x in b), default=0)
    da = max((_deg(x) for x in A.entries), default=0)
    return 2 * (da + db) + 4


def solve_untwisted(A: PolyMatrix, b: list[AnyPoly], strategy: str = "snf_direct",
                    degree_cap: int | None = None):
    """``(h, method, status, certificate)`` for the plain system ``A h = b``."""
    if len(b) != A.rows:
        raise StructuralError(f"rhs of length {len(b)} for {A.rows} rows")
    sample = next(iter(A.entries), None) or next(iter(b), None)
    if sample is not None and not isinstance(sample, Poly):
        cap = default_degree_cap(A, b) if degree_cap is None else degree_cap
        h = mv_bounded_solve(A, b, cap)
        if h is None:
            return None, "degree_bounded", "inconclusive", f"no solution with degree <= {cap}"
        return h, "degree_bounded", "solved", None
    if strategy == "snf_direct":
        h, cert = snf_solve(A, b)
    elif strategy == "row_induction":
        h = _row_induction(A, b)
        cert = h if isinstance(h, str) else None
        h = None if cert else h
    else:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if h is None:
        return None, strategy, "unsolvable", cert
    return h, strategy, "solved", None


def solve_system(P: Level3Operator, w: Level3Vector, l: KTypeLike | None = None,
                 strategy: str = "snf_direct", degree_cap: int | None = None) -> SolveReport:
    """Find ``v`` at K-type ``l`` with ``P v = w``.

    Univariate answers are definitive.  Product groups go through
    :func:`~pwssolve.polymatrix.mv_bounded_solve`; a miss there is labelled
    ``inconclusive``.
    """
    l = KType.of(w.ktype if l is None else l)
    if w.ktype != l:
        raise StructuralError(f"rhs lives at K-type {w.ktype}, not {l}")
    if w.targets != P.targets:
        raise StructuralError("rhs targets do not match operator targets")
    A = untwist(P, l)
    h, method, status, cert = solve_untwisted(A, list(w.h), strategy, degree_cap)
    sol = None if h is None else Level3Vector(l, P.sources, h)
    report = SolveReport(sol, method, status, cert)
    if sol is not None and apply(P, sol) != w:
        raise AssertionError("solver produced a vector that does not solve the system")
    return report


def kernel_at_ktype(P: Level3Operator, l: KTypeLike) -> list[Level3Vector]:
    """Generators of ``Ker P`` in ``_l PWS_tau`` (syzygies of the untwisted matrix)."""
    l = KType.of(l)
    if l.rank != 1:
        raise StructuralError("kernel generators are only computed over one variable")
    A = untwist(P, l)
    return [Level3Vector(l, P.sources, k) for k in kernel_basis(A)]


def kernel_operator(P: Level3Operator, l: KTypeLike) -> Level3Operator:
    """Operator ``Q`` whose columns are the kernel generators at ``l``."""
    l = KType.of(l)
    gens = kernel_at_ktype(P, l)
    return operator_from_columns(l, P.sources, [g.h for g in gens])


def membership(v: Sequence[Poly], generators: Sequence[Sequence[Poly]]):
    """Coefficients ``c`` with ``sum c_k gen_k == v``, or None."""
    v = list(v)
    if any(len(g) != len(v) for g in generators):
        raise StructuralError("generator length differs from the vector length")
    if not generators:
        return [] if all(x.is_zero() for x in v) else None
    G = PolyMatrix.from_rows([[g[i] for g in generators] for i in range(len(v))], len(generators))
    c, _ = snf_solve(G, v)
    return c


def check_exactness_at_ktype(P: Level3Operator, Q: Level3Operator, l: KTypeLike) -> Exactness:
    """Compare ``Im Q`` with ``Ker P`` inside ``_l PWS_tau``."""
    if Q.targets != P.sources:
        raise StructuralError("Q.targets must equal P.sources")
    l = KType.of(l)
    if not compose(P, Q).is_zero():
        return Exactness.not_complex
    Qt = untwist(Q, l)
    cols = [Qt.col(j) for j in range(Qt.cols)]
    for k in kernel_at_ktype(P, l):
        if membership(list(k.h), cols) is None:
            return Exactness.im_strictly_smaller
    return Exactness.exact
