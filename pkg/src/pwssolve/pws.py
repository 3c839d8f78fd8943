"""Level-3 Paley-Wiener-Schwartz data in twisted polynomial coordinates.

An element of ``_mu PWS_m`` is stored by its even coordinate ``h`` (a
polynomial in ``t``); the function it represents is
``h(λ²) * q_{mu,m}(λ)``.  An operator from K-types ``n_j`` to ``m_i`` is a
matrix of even polynomials ``a_ij`` standing for ``a_ij(λ²) q_{n_j,m_i}(λ)``.
At a fixed K-type ``l`` the operator acts on ``h``-coordinates through the
plain matrix ``a_ij * r^l_{n_j,m_i}`` (see :func:`untwist`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .ktypes import (
    GroupMismatch,
    KType,
    KTypeLike,
    ParityError,
    parity_compatible,
    q_poly,
    r_poly,
)
from .polymatrix import PolyMatrix
from .polyring import T, AnyPoly, Poly, StructuralError, expand_even, poly_one, poly_zero


def _ktypes(xs: Sequence[KTypeLike]) -> tuple[KType, ...]:
    return tuple(KType.of(x) for x in xs)


def _rank_of(types: Sequence[KType]) -> int:
    ranks = {k.rank for k in types}
    if len(ranks) > 1:
        raise GroupMismatch("K-types of mixed rank")
    return ranks.pop() if ranks else 1


def _check_coord(h: AnyPoly, rank: int):
    if h.var != T or h.nvars != rank or (rank == 1) != isinstance(h, Poly):
        raise StructuralError(f"expected an even polynomial in {rank} variable(s), got {h!r}")


@dataclass(frozen=True)
class Level3Element:
    source: KType
    target: KType
    h: AnyPoly

    def __post_init__(self):
        object.__setattr__(self, "source", KType.of(self.source))
        object.__setattr__(self, "target", KType.of(self.target))
        if not parity_compatible(self.source, self.target):
            raise ParityError(self.source, self.target)
        _check_coord(self.h, self.source.rank)

    def full(self) -> AnyPoly:
        """The represented polynomial ``h(λ²) q_{source,target}(λ)``."""
        return expand_even(self.h) * q_poly(self.source, self.target).poly


@dataclass(frozen=True)
class Level3Vector:
    """Element of ``_mu PWS_tau`` with ``tau = sum of E_{targets[j]}``."""

    ktype: KType
    targets: tuple[KType, ...]
    h: tuple

    def __post_init__(self):
        object.__setattr__(self, "ktype", KType.of(self.ktype))
        object.__setattr__(self, "targets", _ktypes(self.targets))
        object.__setattr__(self, "h", tuple(self.h))
        if len(self.h) != len(self.targets):
            raise StructuralError("one h-coordinate per target is required")
        _rank_of((self.ktype,) + self.targets)
        for m, h in zip(self.targets, self.h):
            if not parity_compatible(self.ktype, m):
                raise ParityError(self.ktype, m)
            _check_coord(h, self.ktype.rank)

    @classmethod
    def zero(cls, ktype: KTypeLike, targets: Sequence[KTypeLike]) -> Level3Vector:
        ktype = KType.of(ktype)
        return cls(ktype, targets, [poly_zero(ktype.rank)] * len(targets))

    @property
    def components(self) -> list[Level3Element]:
        return [Level3Element(self.ktype, m, h) for m, h in zip(self.targets, self.h)]

    def is_zero(self) -> bool:
        return all(h.is_zero() for h in self.h)

    def full(self) -> list[AnyPoly]:
        return [c.full() for c in self.components]

    def scale(self, c) -> Level3Vector:
        return Level3Vector(self.ktype, self.targets, [h * c for h in self.h])

    def __add__(self, other: Level3Vector) -> Level3Vector:
        if (self.ktype, self.targets) != (other.ktype, other.targets):
            raise StructuralError("adding vectors of different shape")
        return Level3Vector(self.ktype, self.targets, [a + b for a, b in zip(self.h, other.h)])

    def __sub__(self, other: Level3Vector) -> Level3Vector:
        return self + other.scale(-1)


@dataclass(frozen=True)
class Level3Operator:
    """``P_ij = a_ij(λ²) q_{sources[j], targets[i]}(λ)``; rows index targets."""

    sources: tuple[KType, ...]
    targets: tuple[KType, ...]
    entries: tuple  # tuple of rows

    def __post_init__(self):
        object.__setattr__(self, "sources", _ktypes(self.sources))
        object.__setattr__(self, "targets", _ktypes(self.targets))
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        rank = _rank_of(self.sources + self.targets)
        if len(rows) != len(self.targets) or any(len(r) != len(self.sources) for r in rows):
            raise StructuralError(
                f"entries must be {len(self.targets)}x{len(self.sources)} (targets x sources)"
            )
        for i, m in enumerate(self.targets):
            for j, n in enumerate(self.sources):
                a = rows[i][j]
                _check_coord(a, rank)
                if a and not parity_compatible(n, m):
                    raise ParityError(n, m)

    @property
    def rank(self) -> int:
        return _rank_of(self.sources + self.targets)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.targets), len(self.sources)

    @classmethod
    def identity(cls, types: Sequence[KTypeLike]) -> Level3Operator:
        types = _ktypes(types)
        rank = _rank_of(types)
        one, zero = poly_one(rank), poly_zero(rank)
        return cls(types, types, [[one if i == j else zero for j in range(len(types))]
                                  for i in range(len(types))])

    @classmethod
    def zero(cls, sources: Sequence[KTypeLike], targets: Sequence[KTypeLike]) -> Level3Operator:
        sources, targets = _ktypes(sources), _ktypes(targets)
        z = poly_zero(_rank_of(sources + targets))
        return cls(sources, targets, [[z] * len(sources) for _ in targets])

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.entries for a in r)

    def full_matrix(self) -> list[list[AnyPoly]]:
        """Entries ``a_ij(λ²) q_{n_j,m_i}(λ)`` as λ-polynomials (zero where Hom_M vanishes)."""
        out = []
        for i, m in enumerate(self.targets):
            row = []
            for j, n in enumerate(self.sources):
                a = self.entries[i][j]
                if a.is_zero():
                    row.append(expand_even(a))
                else:
                    row.append(expand_even(a) * q_poly(n, m).poly)
            out.append(row)
        return out


def untwist(P: Level3Operator, l: KTypeLike) -> PolyMatrix:
    """Plain even-polynomial matrix of ``P`` acting on h-coordinates at K-type ``l``."""
    l = KType.of(l)
    for k in P.sources + P.targets:
        if not parity_compatible(l, k):
            raise ParityError(l, k)
    rows = []
    for i, m in enumerate(P.targets):
        row = []
        for j, n in enumerate(P.sources):
            a = P.entries[i][j]
            row.append(a * r_poly(l, n, m) if a else a)
        rows.append(row)
    return PolyMatrix(len(P.targets), len(P.sources), tuple(e for r in rows for e in r))


def apply(P: Level3Operator, u: Level3Vector) -> Level3Vector:
    if u.targets != P.sources:
        raise StructuralError(
            f"vector targets {list(map(str, u.targets))} do not match operator sources "
            f"{list(map(str, P.sources))}"
        )
    A = untwist(P, u.ktype)
    return Level3Vector(u.ktype, P.targets, A.apply(list(u.h)))


def compose(P2: Level3Operator, P1: Level3Operator) -> Level3Operator:
    """Twisted product ``P2 ∘ P1``.

    ``(P2 P1)_ik = sum_j a2_ij a1_jk r^{s_k}_{n_j,m_i}`` where ``s_k`` are the
    sources of ``P1``, ``n_j`` the shared middle K-types, ``m_i`` the targets.
    """
    if P2.sources != P1.targets:
        raise StructuralError("P2.sources must equal P1.targets")
    rank = _rank_of(P1.sources + P2.targets + P1.targets)
    zero = poly_zero(rank)
    rows = []
    for i, m in enumerate(P2.targets):
        row = []
        for k, s in enumerate(P1.sources):
            acc = zero
            for j, n in enumerate(P1.targets):
                a2, a1 = P2.entries[i][j], P1.entries[j][k]
                if a2 and a1:
                    acc = acc + a2 * a1 * r_poly(s, n, m)
            row.append(acc)
        rows.append(row)
    return Level3Operator(P1.sources, P2.targets, rows)


def operator_from_columns(ktype: KTypeLike, targets: Sequence[KTypeLike],
                          columns: Sequence[Sequence[AnyPoly]]) -> Level3Operator:
    """Operator whose sources all equal ``ktype`` and whose columns are the given h-vectors.

    At K-type ``ktype`` its untwisted matrix has exactly these columns,
    because ``r^l_{l,n} = 1``.
    """
    ktype = KType.of(ktype)
    targets = _ktypes(targets)
    rows = [[col[i] for col in columns] for i in range(len(targets))]
    return Level3Operator([ktype] * len(columns), targets, rows)
