"""Numeric checks of the norm inequalities behind the solvability estimates.

All sup-norms are taken over a finite :class:`~pwssolve.grids.SampleGrid`,
so they are lower bounds for the true suprema.  Inequalities are reported
with a signed margin (``rhs - lhs``) rather than a bare boolean.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .fourier import Level2Section, weighted_section_norm
from .grids import NormSpec, SampleGrid, value_norms, weight
from .ktypes import KType, KTypeLike, casimir_eigenvalue, parity_compatible
from .polyring import LAM, AnyPoly, MPoly, Poly, eval_at, expand_even
from .pws import Level3Element, Level3Operator, Level3Vector, apply

TOL = 1e-9

Evaluator = Callable[[np.ndarray], np.ndarray]


class EstimatePreconditionError(ValueError):
    """The exact algebraic precondition of an estimate check failed."""


# -- evaluators -------------------------------------------------------------


def _pts_for(rank: int, pts: np.ndarray) -> np.ndarray:
    pts = np.atleast_2d(pts)
    return pts[:, 0] if rank == 1 else pts


def poly_evaluator(p: AnyPoly) -> Evaluator:
    return lambda pts: np.broadcast_to(eval_at(p, _pts_for(p.nvars, pts)), (len(np.atleast_2d(pts)),))


def vector_evaluator(v: Level3Vector) -> Evaluator:
    """Values ``h_j(λ²) q_{mu,n_j}(λ)`` stacked into shape ``(S, k)``."""
    full = v.full()
    rank = v.ktype.rank

    def ev(pts):
        pts = np.atleast_2d(pts)
        x = _pts_for(rank, pts)
        if not full:
            return np.zeros((len(pts), 0), dtype=complex)
        return np.stack([np.broadcast_to(eval_at(p, x), (len(pts),)) for p in full], axis=-1)

    return ev


def element_evaluator(e: Level3Element) -> Evaluator:
    return poly_evaluator(e.full())


def operator_evaluator(P: Level3Operator) -> Evaluator:
    """Full matrix ``a_ij(λ²) q_{n_j,m_i}(λ)``, shape ``(S, rows, cols)``."""
    mat = P.full_matrix()
    rank = P.rank

    def ev(pts):
        pts = np.atleast_2d(pts)
        x = _pts_for(rank, pts)
        out = np.zeros((len(pts), len(mat), len(P.sources)), dtype=complex)
        for i, row in enumerate(mat):
            for j, p in enumerate(row):
                if p:
                    out[:, i, j] = eval_at(p, x)
        return out

    return ev


def as_evaluator(f) -> Evaluator:
    if isinstance(f, (Poly, MPoly)):
        return poly_evaluator(f)
    if isinstance(f, Level3Vector):
        return vector_evaluator(f)
    if isinstance(f, Level3Element):
        return element_evaluator(f)
    if isinstance(f, Level3Operator):
        return operator_evaluator(f)
    if callable(f):
        return f
    c = complex(f)
    return lambda pts: np.full(len(np.atleast_2d(pts)), c)


# -- norms ------------------------------------------------------------------


def weighted_sup_norm(phi, spec: NormSpec, grid: SampleGrid) -> float:
    """``max over grid of (1+|λ|²)^-N e^{-r|Re λ|} ||φ(λ)||_op``."""
    pts = grid.points()
    vals = as_evaluator(phi)(pts)
    return float(np.max(weight(pts, spec) * value_norms(vals, len(pts))))


# -- maximum principle -------------------------------------------------------


@dataclass
class MaxPrincipleResult:
    holds: bool
    margin: float
    lhs: float
    rhs: float
    witness: dict | None = None


def verify_max_principle(f, p: Poly, lam0: complex, circle_samples: int = 720,
                         tol: float = TOL) -> MaxPrincipleResult:
    """Check ``|f(λ0)| <= |a_k|^-1 max_{|z|=1} |f(λ0+z) p(λ0+z)|`` on sampled ``z``.

    ``a_k`` is the leading coefficient of ``p``, which is also the leading
    coefficient of ``z -> p(λ0 + z)``.
    """
    if not isinstance(p, Poly):
        raise TypeError("verify_max_principle takes a univariate polynomial")
    if p.is_zero():
        raise ValueError("p must be nonzero")
    ev = as_evaluator(f)
    lam0 = complex(lam0)
    z = np.exp(2j * np.pi * np.arange(circle_samples) / circle_samples)
    pts = (lam0 + z)[:, None]
    fp = np.asarray(ev(pts)).reshape(-1) * np.asarray(eval_at(p if p.var == LAM else expand_even(p), pts[:, 0]))
    lhs = abs(complex(np.asarray(ev(np.array([[lam0]]))).reshape(-1)[0]))
    rhs = float(np.max(np.abs(fp))) / abs(float(p.lc()))
    margin = rhs - lhs
    witness = None
    if margin < -tol:
        k = int(np.argmax(np.abs(fp)))
        witness = {"lambda0": [lam0.real, lam0.imag], "lhs": lhs, "rhs": rhs,
                   "argmax_z": [z[k].real, z[k].imag]}
    return MaxPrincipleResult(margin >= -tol, margin, lhs, rhs, witness)


# -- leading direction -------------------------------------------------------


def _sphere_samples(d: int, n_alpha: int = 181, n_phi: int = 360, n_random: int = 20000,
                    seed: int = 0) -> np.ndarray:
    if d == 1:
        return np.ones((1, 1), dtype=complex)
    if d == 2:
        # global phase is irrelevant: v = (cos a, sin a e^{i phi})
        a = np.linspace(0, np.pi / 2, n_alpha)
        ph = 2 * np.pi * np.arange(n_phi) / n_phi
        A, PH = np.meshgrid(a, ph, indexing="ij")
        return np.stack([np.cos(A).ravel() + 0j, (np.sin(A) * np.exp(1j * PH)).ravel()], axis=-1)
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(n_random, d)) + 1j * rng.normal(size=(n_random, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return np.concatenate([np.eye(d, dtype=complex), g])


def top_homogeneous_part(p: AnyPoly) -> MPoly:
    q = expand_even(p) if p.var != LAM else p
    q = q.to_mpoly() if isinstance(q, Poly) else q
    return q.homogeneous_part(int(q.degree()))


def leading_direction(p: AnyPoly) -> np.ndarray:
    """Unit ``v`` (sampled) maximising ``|p_k(v)|`` for the top homogeneous part ``p_k``.

    Polynomials in ``t`` are first expanded to ``λ``.
    """
    if p.is_zero():
        raise ValueError("leading direction of the zero polynomial")
    pk = top_homogeneous_part(p)
    cand = _sphere_samples(pk.nvars)
    vals = np.abs(np.asarray(eval_at(pk, cand)).reshape(-1))
    return cand[int(np.argmax(vals))]


# -- solution estimates ------------------------------------------------------


def verify_solution_estimate(P: Level3Operator, u: Level3Vector, v: Level3Vector,
                             spec: NormSpec, M: int, grid: SampleGrid) -> float:
    """Empirical constant ``||v||_{r,N+M} / ||P u||_{r,N}``.

    Both ``P u == P v`` (exactly) and a defined ratio are required; if
    ``P u`` vanishes the ratio is 0 for ``v = 0`` and infinite otherwise.
    """
    w = apply(P, u)
    if apply(P, v) != w:
        raise EstimatePreconditionError("P u != P v")
    num = weighted_sup_norm(vector_evaluator(v), spec.shifted(M), grid)
    den = weighted_sup_norm(vector_evaluator(w), spec, grid)
    if den == 0:
        return 0.0 if num == 0 else math.inf
    return num / den


# -- Casimir tail bound ------------------------------------------------------


@dataclass
class TailBoundReport:
    p: int
    per_ktype: dict  # KType -> {"lhs", "rhs", "margin"}
    zp_norm: float
    worst_margin: float
    holds: bool

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "zp_norm": self.zp_norm,
            "worst_margin": self.worst_margin,
            "holds": self.holds,
            "per_ktype": [{"mu": mu.to_json(), **vals} for mu, vals in self.per_ktype.items()],
        }


def casimir_weighted_norm(w: Level2Section, p: int, spec: NormSpec, grid: SampleGrid,
                          theta_resolution: int | None = None) -> float:
    """``||w||_{r,N,Z_p}`` with ``Z_p = (1 + C_k)^p`` of order ``2p``."""
    mult = {mu: float((1 + casimir_eigenvalue(mu)) ** p) for mu in w.ktypes}
    return weighted_section_norm(w, spec.shifted(p), grid, mult, theta_resolution)


def fourier_tail_bound(w: Level2Section, p: int, spec: NormSpec, grid: SampleGrid,
                       theta_resolution: int | None = None, tol: float = TOL) -> TailBoundReport:
    """Check ``||_mu w||_{r,N+p} <= (1+|mu|²)^-p ||w||_{r,N,Z_p}`` for each component."""
    zp = casimir_weighted_norm(w, p, spec, grid, theta_resolution)
    per = {}
    worst = 0.0 if not w.components else math.inf
    for mu, v in w.components:
        lhs = weighted_sup_norm(vector_evaluator(v), spec.shifted(p), grid)
        mu2 = sum(x * x for x in mu.weights)
        rhs = (1 + mu2) ** (-p) * zp
        per[mu] = {"lhs": lhs, "rhs": rhs, "margin": rhs - lhs}
        worst = min(worst, rhs - lhs)
    return TailBoundReport(p, per, zp, worst, worst >= -tol)


# -- l-uniformity ------------------------------------------------------------


@dataclass
class UniformityReport:
    table: list = field(default_factory=list)  # rows {"l", "ratio", "status"}
    max_over_median: float = math.nan
    factor: float = 10.0
    within_factor: bool = False
    skipped: list = field(default_factory=list)
    note: str = ("grid-sampled norms: evidence for l-independence of the estimate "
                 "constant, not a verification")

    def to_json(self) -> dict:
        return {
            "table": self.table,
            "max_over_median": self.max_over_median,
            "factor": self.factor,
            "within_factor": self.within_factor,
            "skipped": self.skipped,
            "note": self.note,
        }


def _ones_vector(P: Level3Operator, l: KType) -> Level3Vector:
    one = Poly([1]) if l.rank == 1 else MPoly.constant(1, l.rank)
    return Level3Vector(l, P.sources, [one] * len(P.sources))


def estimate_ratio_at(P: Level3Operator, l: KTypeLike, spec: NormSpec, M: int, grid: SampleGrid,
                      strategy: str = "snf_direct", u: Level3Vector | None = None) -> dict:
    from .solver import solve_system  # local: solver does not depend on numerics

    l = KType.of(l)
    u = _ones_vector(P, l) if u is None else u
    w = apply(P, u)
    rep = solve_system(P, w, l, strategy)
    if rep.solution is None:
        return {"l": l.to_json(), "ratio": None, "status": rep.status}
    ratio = verify_solution_estimate(P, u, rep.solution, spec, M, grid)
    return {"l": l.to_json(), "ratio": ratio, "status": rep.status}


def l_uniformity_experiment(P: Level3Operator, ls: Sequence[KTypeLike], spec: NormSpec, M: int,
                            grid: SampleGrid | None = None, factor: float = 10.0,
                            strategy: str = "snf_direct", jobs: int = 1) -> UniformityReport:
    """Estimate ratios for ``u = (1, ..., 1)`` at each compatible ``l``; compare max to median."""
    grid = grid or SampleGrid()
    report = UniformityReport(factor=factor)
    todo = []
    for l in map(KType.of, ls):
        if all(parity_compatible(l, k) for k in P.sources + P.targets):
            todo.append(l)
        else:
            report.skipped.append(l.to_json())
    if jobs > 1 and len(todo) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as ex:
            rows = list(ex.map(estimate_ratio_at, [P] * len(todo), todo, [spec] * len(todo),
                               [M] * len(todo), [grid] * len(todo), [strategy] * len(todo)))
    else:
        rows = [estimate_ratio_at(P, l, spec, M, grid, strategy) for l in todo]
    report.table = rows
    ratios = [r["ratio"] for r in rows if r["ratio"] is not None and math.isfinite(r["ratio"])]
    if ratios:
        med = statistics.median(ratios)
        report.max_over_median = max(ratios) / med if med > 0 else math.inf
        report.within_factor = report.max_over_median <= factor
    return report
