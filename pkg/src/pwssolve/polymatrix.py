"""Matrices over the polynomial rings of :mod:`pwssolve.polyring`.

Smith normal form and kernels are univariate (``Q[t]`` is a PID).  The
degree-bounded solver works in any number of variables by reducing
``A h = b`` to an exact rational linear system on coefficient vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polyring import (
    NEG_INF,
    AnyPoly,
    MPoly,
    Poly,
    StructuralError,
    poly_divrem,
    poly_one,
    poly_zero,
)


@dataclass(frozen=True)
class PolyMatrix:
    rows: int
    cols: int
    entries: tuple  # row-major

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise StructuralError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[AnyPoly]], cols: int | None = None) -> PolyMatrix:
        rows = [list(r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        if any(len(r) != ncols for r in rows):
            raise StructuralError("ragged rows")
        return cls(len(rows), ncols, tuple(e for r in rows for e in r))

    @classmethod
    def identity(cls, n: int, nvars: int = 1, var: str = "t") -> PolyMatrix:
        one, zero = poly_one(nvars, var), poly_zero(nvars, var)
        return cls(n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int, nvars: int = 1, var: str = "t") -> PolyMatrix:
        return cls(rows, cols, (poly_zero(nvars, var),) * (rows * cols))

    def __getitem__(self, ij) -> AnyPoly:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> PolyMatrix:
        return PolyMatrix.from_rows([self.col(j) for j in range(self.cols)], self.rows)

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def degree(self):
        return max((e.degree() for e in self.entries), default=NEG_INF)

    def __matmul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.cols != other.rows:
                raise StructuralError(f"cannot multiply {self.shape} by {other.shape}")
            out = []
            for i in range(self.rows):
                for j in range(other.cols):
                    acc = None
                    for k in range(self.cols):
                        a, b = self[i, k], other[k, j]
                        if a.is_zero() or b.is_zero():
                            continue
                        acc = a * b if acc is None else acc + a * b
                    out.append(acc if acc is not None else self._zero())
            return PolyMatrix(self.rows, other.cols, tuple(out))
        return self.apply(other)

    def apply(self, vec: Sequence[AnyPoly]) -> list:
        if len(vec) != self.cols:
            raise StructuralError(f"vector of length {len(vec)} for {self.cols} columns")
        out = []
        for i in range(self.rows):
            acc = self._zero()
            for j in range(self.cols):
                a = self[i, j]
                if a and vec[j]:
                    acc = acc + a * vec[j]
            out.append(acc)
        return out

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        if self.shape != other.shape:
            raise StructuralError("shape mismatch")
        return PolyMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def _zero(self):
        if self.entries:
            return self.entries[0].zero_like()
        return Poly()

    def __str__(self):
        return "[" + "; ".join(", ".join(str(e) for e in self.row(i)) for i in range(self.rows)) + "]"


def determinant(M: PolyMatrix) -> Poly:
    """Determinant over Q[t] by fraction-free (Bareiss) elimination."""
    if M.rows != M.cols:
        raise StructuralError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return Poly([1])
    a = M.to_rows()
    sign = 1
    prev = a[0][0].one_like()
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return prev.zero_like()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                q, r = poly_divrem(num, prev)
                assert r.is_zero()
                a[i][j] = q
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


# -- Smith normal form ------------------------------------------------------


def smith_normal_form(M: PolyMatrix) -> tuple[PolyMatrix, PolyMatrix, PolyMatrix]:
    """``(U, S, V)`` with ``U @ M @ V == S`` over Q[t].

    ``S`` is diagonal with monic nonzero entries forming a divisibility chain
    followed by zeros; ``U`` and ``V`` are unimodular.  The pivot is always a
    nonzero entry of minimal degree in the active block (ties broken by the
    smallest ``(row, col)``), which forces the degree-reduction argument to
    terminate.
    """
    if any(not isinstance(e, Poly) for e in M.entries):
        raise StructuralError("smith_normal_form needs univariate entries")
    m, n = M.shape
    var = M.entries[0].var if M.entries else "t"
    one, zero = Poly([1], var), Poly((), var)
    S = M.to_rows()
    U = [[one if i == j else zero for j in range(m)] for i in range(m)]
    V = [[one if i == j else zero for j in range(n)] for i in range(n)]

    def row_addmul(i, k, q):  # row_i -= q * row_k
        S[i] = [a - q * b if b else a for a, b in zip(S[i], S[k])]
        U[i] = [a - q * b if b else a for a, b in zip(U[i], U[k])]

    def col_addmul(j, k, q):  # col_j -= q * col_k
        for r in S:
            if r[k]:
                r[j] = r[j] - q * r[k]
        for r in V:
            if r[k]:
                r[j] = r[j] - q * r[k]

    for k in range(min(m, n)):
        while True:
            best = None
            for i in range(k, m):
                for j in range(k, n):
                    e = S[i][j]
                    if e and (best is None or e.degree() < best[0]):
                        best = (e.degree(), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != k:
                S[k], S[pi] = S[pi], S[k]
                U[k], U[pi] = U[pi], U[k]
            if pj != k:
                for r in S:
                    r[k], r[pj] = r[pj], r[k]
                for r in V:
                    r[k], r[pj] = r[pj], r[k]
            piv = S[k][k]
            clean = True
            for i in range(k + 1, m):
                if S[i][k]:
                    q, r = poly_divrem(S[i][k], piv)
                    row_addmul(i, k, q)
                    clean = clean and r.is_zero()
            for j in range(k + 1, n):
                if S[k][j]:
                    q, r = poly_divrem(S[k][j], piv)
                    col_addmul(j, k, q)
                    clean = clean and r.is_zero()
            if not clean:
                continue
            bad = next(
                (i for i in range(k + 1, m) for j in range(k + 1, n)
                 if S[i][j] and not poly_divrem(S[i][j], piv)[1].is_zero()),
                None,
            )
            if bad is None:
                break
            S[k] = [a + b for a, b in zip(S[k], S[bad])]
            U[k] = [a + b for a, b in zip(U[k], U[bad])]
        if k < m and k < n and S[k][k]:
            inv = 1 / S[k][k].lc()
            if inv != 1:
                S[k] = [a * inv for a in S[k]]
                U[k] = [a * inv for a in U[k]]
    return (
        PolyMatrix.from_rows(U, m),
        PolyMatrix.from_rows(S, n),
        PolyMatrix.from_rows(V, n),
    )


def snf_rank(S: PolyMatrix) -> int:
    return sum(1 for k in range(min(S.shape)) if S[k, k])


def kernel_basis(M: PolyMatrix) -> list[list[Poly]]:
    """Free basis of ``{k : M k = 0}``: the columns of ``V`` past the rank.

    Each generator is scaled so its first nonzero entry is monic.
    """
    _, S, V = smith_normal_form(M)
    r = snf_rank(S)
    out = []
    for j in range(r, M.cols):
        col = V.col(j)
        lead = next(e for e in col if e)  # V is invertible, so no column is zero
        inv = 1 / lead.lc()
        out.append(col if inv == 1 else [e * inv for e in col])
    return out


def snf_solve(M: PolyMatrix, b: Sequence[Poly]):
    """Solve ``M x = b`` over Q[t].

    Returns ``(x, None)`` or ``(None, certificate)`` where the certificate
    names the diagonal entry that fails to divide the transformed rhs.
    """
    if len(b) != M.rows:
        raise StructuralError(f"rhs of length {len(b)} for {M.rows} rows")
    U, S, V = smith_normal_form(M)
    c = U.apply(list(b))
    r = snf_rank(S)
    var = b[0].var if b else "t"
    y = []
    for i in range(M.rows):
        if i < r:
            q, rem = poly_divrem(c[i], S[i, i])
            if rem:
                return None, f"S[{i},{i}] = {S[i, i]} does not divide (U b)[{i}] = {c[i]}"
            y.append(q)
        elif c[i]:
            return None, f"(U b)[{i}] = {c[i]} is nonzero on a zero row of S"
    y += [Poly((), var)] * (M.cols - len(y))
    y = y[:M.cols]
    return V.apply(y), None


# -- exact rational linear algebra -----------------------------------------


def solve_rational(rows: list[dict[int, Fraction]], rhs: list[Fraction], nunk: int):
    """One solution of a sparse rational system, or None if inconsistent.

    ``rows[i]`` maps unknown index to coefficient.  Free unknowns are set to
    zero.
    """
    pivots: dict[int, tuple[dict[int, Fraction], Fraction]] = {}
    order: list[int] = []
    for row, r in zip(rows, rhs):
        row = {k: v for k, v in row.items() if v}
        # reduce against existing pivots
        for p in order:
            c = row.get(p)
            if c:
                prow, prhs = pivots[p]
                for k, v in prow.items():
                    nv = row.get(k, 0) - c * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
                r = r - c * prhs
        if not row:
            if r != 0:
                return None
            continue
        p = min(row)
        inv = 1 / row[p]
        prow = {k: v * inv for k, v in row.items()}
        prhs = r * inv
        # keep existing pivot rows reduced in p
        for q in order:
            qrow, qrhs = pivots[q]
            c = qrow.get(p)
            if c:
                for k, v in prow.items():
                    nv = qrow.get(k, 0) - c * v
                    if nv:
                        qrow[k] = nv
                    else:
                        qrow.pop(k, None)
                pivots[q] = (qrow, qrhs - c * prhs)
        pivots[p] = (prow, prhs)
        order.append(p)
    x = [Fraction(0)] * nunk
    for p in order:
        x[p] = pivots[p][1]
    return x


def _monomials(nvars: int, deg: int):
    for total in range(deg + 1):
        for e in itertools.product(range(total + 1), repeat=nvars):
            if sum(e) == total:
                yield e


def _as_mpoly(p: AnyPoly) -> MPoly:
    return p.to_mpoly() if isinstance(p, Poly) else p


def _solve_at_degree(A: PolyMatrix, b: list[MPoly], D: int, nvars: int, var: str):
    monos = list(_monomials(nvars, D))
    index = {}
    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []

    def eq(i, e):
        key = (i, e)
        if key not in index:
            index[key] = len(rows)
            rows.append({})
            rhs.append(Fraction(0))
        return index[key]

    Am = [[_as_mpoly(A[i, j]) for j in range(A.cols)] for i in range(A.rows)]
    for i in range(A.rows):
        for j in range(A.cols):
            for ea, ca in Am[i][j].terms.items():
                for u, em in enumerate(monos):
                    e = tuple(x + y for x, y in zip(ea, em))
                    r = eq(i, e)
                    k = j * len(monos) + u
                    rows[r][k] = rows[r].get(k, 0) + ca
        for e, c in b[i].terms.items():
            rhs[eq(i, e)] += c
    x = solve_rational(rows, rhs, A.cols * len(monos))
    if x is None:
        return None
    return [
        MPoly({em: x[j * len(monos) + u] for u, em in enumerate(monos)}, nvars, var)
        for j in range(A.cols)
    ]


def mv_bounded_solve(A: PolyMatrix, b: Sequence[AnyPoly], degree_cap: int):
    """Find ``h`` with ``A h = b`` and every ``deg h_j <= D`` for some ``D <= degree_cap``.

    Candidate degrees run from ``min(max(deg b, 0), degree_cap)`` upward.
    Returns None if no such ``h`` exists within the cap; that says nothing
    about solutions of higher degree.
    """
    if len(b) != A.rows:
        raise StructuralError(f"rhs of length {len(b)} for {A.rows} rows")
    if degree_cap < 0:
        raise ValueError("degree_cap must be nonnegative")
    sample = next(iter(A.entries), None) or next(iter(b), None)
    univariate = isinstance(sample, Poly)
    nvars = 1 if sample is None else sample.nvars
    var = "t" if sample is None else sample.var
    bm = [_as_mpoly(x) for x in b]
    db = max((x.degree() for x in bm), default=NEG_INF)
    start = min(max(db, 0), degree_cap) if db != NEG_INF else 0
    # the top-degree system contains every lower one: settle existence first
    top = _solve_at_degree(A, bm, degree_cap, nvars, var)
    if top is None:
        return None
    sol = top
    for D in range(int(start), degree_cap):
        found = _solve_at_degree(A, bm, D, nvars, var)
        if found is not None:
            sol = found
            break
    return [h.to_poly() for h in sol] if univariate else sol
