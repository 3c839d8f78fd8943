"""Level-2 sections as finite Fourier series over K-types.

For ``K = SO(2)^d`` every K-type is one-dimensional, so a section is

    w(λ, θ)_i = sum_mu  h_{mu,i}(λ²) q_{mu,m_i}(λ) e^{-i mu·θ}

with one Level-3 vector per K-type ``mu``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .grids import NormSpec, SampleGrid, theta_grid, weight
from .ktypes import KType, KTypeLike
from .polyring import StructuralError, eval_at
from .pws import Level3Operator, Level3Vector, apply


@dataclass(frozen=True)
class Level2Section:
    targets: tuple[KType, ...]
    components: tuple[tuple[KType, Level3Vector], ...]  # sorted by K-type

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(KType.of(m) for m in self.targets))
        for mu, v in self.components:
            if v.ktype != mu or v.targets != self.targets:
                raise StructuralError(f"component at {mu} does not match the section targets")

    @property
    def rank(self) -> int:
        if self.targets:
            return self.targets[0].rank
        return self.components[0][0].rank if self.components else 1

    @property
    def ktypes(self) -> list[KType]:
        return [mu for mu, _ in self.components]

    def component(self, mu: KTypeLike) -> Level3Vector | None:
        mu = KType.of(mu)
        return next((v for k, v in self.components if k == mu), None)

    def max_weight(self) -> int:
        return max((abs(w) for mu in self.ktypes for w in mu.weights), default=0)

    def without(self, mu: KTypeLike) -> Level2Section:
        mu = KType.of(mu)
        return Level2Section(self.targets, tuple((k, v) for k, v in self.components if k != mu))

    def only(self, mu: KTypeLike) -> Level2Section:
        mu = KType.of(mu)
        return Level2Section(self.targets, tuple((k, v) for k, v in self.components if k == mu))


def assemble(components: Mapping[KTypeLike, Level3Vector],
             targets: Sequence[KTypeLike] | None = None) -> Level2Section:
    items = sorted(((KType.of(k), v) for k, v in components.items()), key=lambda kv: kv[0])
    if targets is None:
        if not items:
            raise StructuralError("an empty section needs explicit targets")
        targets = items[0][1].targets
    targets = tuple(KType.of(m) for m in targets)
    for mu, v in items:
        if v.ktype != mu:
            raise StructuralError(f"component keyed by {mu} has K-type {v.ktype}")
        if v.targets != targets:
            raise StructuralError("inconsistent targets across components")
    return Level2Section(targets, tuple(items))


def _component_values(v: Level3Vector, lams: np.ndarray) -> np.ndarray:
    """``(S, k)`` values of the Level-3 component on sample points."""
    full = v.full()
    pts = lams if v.ktype.rank > 1 else lams[..., 0]
    if not full:
        return np.zeros((len(lams), 0), dtype=complex)
    return np.stack([np.broadcast_to(eval_at(p, pts), (len(lams),)) for p in full], axis=-1)


def evaluate_grid(s: Level2Section, lams: np.ndarray, thetas: np.ndarray,
                  multipliers: Mapping[KType, complex] | None = None) -> np.ndarray:
    """Section values on a product of sample sets, shape ``(S, T, k)``.

    ``multipliers`` scales component ``mu`` before summation (derivatives and
    Casimir weights act this way).
    """
    lams = np.atleast_2d(np.asarray(lams, dtype=complex))
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    out = np.zeros((lams.shape[0], thetas.shape[0], len(s.targets)), dtype=complex)
    for mu, v in s.components:
        c = 1.0 if multipliers is None else multipliers.get(mu, 0.0)
        if c == 0:
            continue
        phase = np.exp(-1j * (thetas @ np.asarray(mu.weights, dtype=float)))
        out += c * _component_values(v, lams)[:, None, :] * phase[None, :, None]
    return out


def evaluate(s: Level2Section, lam, theta) -> np.ndarray:
    """Value vector (one entry per target) at a single ``(λ, θ)``."""
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    return evaluate_grid(s, lam[None, :], theta[None, :])[0, 0]


def apply_operator_level2(P: Level3Operator, s: Level2Section) -> Level2Section:
    if s.targets != P.sources:
        raise StructuralError("section targets must equal the operator sources")
    return Level2Section(P.targets, tuple((mu, apply(P, v)) for mu, v in s.components))


def _order_tuple(order, rank: int) -> tuple[int, ...]:
    if isinstance(order, int):
        if rank != 1:
            raise ValueError("give a per-factor order tuple for product groups")
        order = (order,)
    order = tuple(int(a) for a in order)
    if len(order) != rank or min(order) < 0:
        raise ValueError(f"order must be {rank} nonnegative integers")
    return order


def derivative_multipliers(s: Level2Section, order) -> dict[KType, complex]:
    """Scalar by which ``Y^alpha`` acts on each component: ``prod (i mu_f)^alpha_f``."""
    alpha = _order_tuple(order, s.rank)
    out = {}
    for mu in s.ktypes:
        c = 1.0 + 0j
        for w, a in zip(mu.weights, alpha):
            c *= (1j * w) ** a
        out[mu] = c
    return out


def weighted_section_norm(s: Level2Section, spec: NormSpec, grid: SampleGrid,
                          multipliers: Mapping[KType, complex] | None = None,
                          theta_resolution: int | None = None) -> float:
    """``sup_{λ,θ} weight(λ) |sum_mu c_mu w_mu(λ) e^{-i mu θ}|`` on the grid."""
    if not s.components:
        return 0.0
    lams = grid.points()
    thetas = theta_grid(s.max_weight(), s.rank, theta_resolution)
    vals = evaluate_grid(s, lams, thetas, multipliers)
    mags = np.sqrt(np.sum(np.abs(vals) ** 2, axis=-1)).max(axis=1)
    return float(np.max(weight(lams, spec) * mags))


def derivative_sup_norm(s: Level2Section, spec: NormSpec, order, grid: SampleGrid,
                        theta_resolution: int | None = None) -> float:
    """Grid version of ``sup (1+|λ|²)^-(N+|α|/2) e^{-r|Re λ|} |Y^α w(λ,k)|``."""
    alpha = _order_tuple(order, s.rank)
    shifted = spec.shifted(sum(alpha) / 2)
    return weighted_section_norm(s, shifted, grid, derivative_multipliers(s, alpha),
                                 theta_resolution)
