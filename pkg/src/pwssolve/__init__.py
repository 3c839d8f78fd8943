"""Exact solvability of invariant differential systems on the hyperbolic plane, in Fourier coordinates.

The algebra (twist generators, Level-3 operators, Smith-form and Bézout
solvers, kernels) is exact over the rationals; the estimate layer samples
weighted sup-norms on finite grids.
"""

from .ktypes import KType, ParityError, q_poly, r_poly
from .polyring import LAM, T, MPoly, Poly
from .pws import Level3Element, Level3Operator, Level3Vector, apply, compose, untwist
from .solver import (
    Exactness,
    SolveReport,
    check_exactness_at_ktype,
    kernel_at_ktype,
    solve_single_row,
    solve_system,
)

__version__ = "0.1.0"

__all__ = [
    "Exactness", "KType", "LAM", "Level3Element", "Level3Operator", "Level3Vector",
    "MPoly", "ParityError", "Poly", "SolveReport", "T", "apply", "check_exactness_at_ktype",
    "compose", "kernel_at_ktype", "q_poly", "r_poly", "solve_single_row", "solve_system",
    "untwist",
]
