"""Sampling grids and the weighted sup-norm weight shared by the numeric layer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NormSpec:
    """Weight ``(1+|λ|²)^-N e^{-r|Re λ|}``: support radius ``r``, order ``N``."""

    r: float = 0.0
    N: float = 0

    def __post_init__(self):
        if self.r < 0 or self.N < 0:
            raise ValueError("NormSpec needs r >= 0 and N >= 0")

    def shifted(self, dN) -> NormSpec:
        return NormSpec(self.r, self.N + dN)


@dataclass(frozen=True)
class SampleGrid:
    """Square ``[-R_max, R_max]²`` in each complex coordinate, ``resolution`` points per real axis.

    Rank ``d`` grids are the ``2d``-fold product, so keep ``resolution`` small
    when ``dimension > 1``.
    """

    R_max: float = 10.0
    resolution: int = 101
    dimension: int = 1

    def __post_init__(self):
        if self.R_max <= 0 or self.resolution < 1 or self.dimension < 1:
            raise ValueError("SampleGrid needs R_max > 0, resolution >= 1, dimension >= 1")

    def axis(self) -> np.ndarray:
        if self.resolution == 1:
            return np.zeros(1)
        return np.linspace(-self.R_max, self.R_max, self.resolution)

    def points(self) -> np.ndarray:
        """Complex sample points, shape ``(S, dimension)``."""
        ax = self.axis()
        z = (ax[:, None] + 1j * ax[None, :]).ravel()
        if self.dimension == 1:
            return z[:, None]
        mesh = np.meshgrid(*([z] * self.dimension), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def refined(self) -> SampleGrid:
        """Grid containing every current point plus all midpoints."""
        return SampleGrid(self.R_max, 2 * self.resolution - 1, self.dimension)

    @classmethod
    def parse(cls, text: str, dimension: int = 1) -> SampleGrid:
        """``"R:res"`` as accepted on the command line."""
        R, res = text.split(":")
        return cls(float(R), int(res), dimension)

    def to_json(self) -> dict:
        return {"R_max": self.R_max, "resolution": self.resolution, "dimension": self.dimension}


def weight(points: np.ndarray, spec: NormSpec) -> np.ndarray:
    sq = np.sum(np.abs(points) ** 2, axis=-1)
    re = np.sqrt(np.sum(points.real ** 2, axis=-1))
    return (1.0 + sq) ** (-float(spec.N)) * np.exp(-spec.r * re)


def value_norms(vals: np.ndarray, nsamples: int) -> np.ndarray:
    """Pointwise operator norm of evaluator output.

    Shapes ``(S,)`` are scalars, ``(S, k)`` column vectors (Euclidean norm,
    the operator norm of ``C -> C^k``), ``(S, a, b)`` matrices (spectral norm).
    """
    vals = np.asarray(vals)
    if vals.ndim == 0:
        return np.full(nsamples, abs(complex(vals)))
    if vals.shape[0] != nsamples:
        vals = np.broadcast_to(vals, (nsamples,) + vals.shape)
    if vals.ndim == 1:
        return np.abs(vals)
    if vals.ndim == 2:
        return np.sqrt(np.sum(np.abs(vals) ** 2, axis=1))
    if vals.ndim == 3:
        return np.linalg.norm(vals, ord=2, axis=(1, 2))
    raise ValueError(f"evaluator returned an array of shape {vals.shape}")


def theta_grid(max_weight: int, rank: int, resolution: int | None = None) -> np.ndarray:
    """Equally spaced angles on ``(R/2πZ)^rank``, shape ``(T, rank)``.

    The default resolution exceeds ``2 max_weight`` so discrete Fourier
    coefficients of sections with ``|mu| <= max_weight`` are exact.
    """
    n = resolution if resolution is not None else max(16, 4 * max_weight + 8)
    ax = 2 * np.pi * np.arange(n) / n
    if rank == 1:
        return ax[:, None]
    mesh = np.meshgrid(*([ax] * rank), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)
