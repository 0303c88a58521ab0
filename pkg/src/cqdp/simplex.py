"""Dense revised primal simplex for ``max c.x  s.t.  A x = b, x >= 0``.

Small problems only: the basis is re-factorized from scratch every pivot.
Bland's rule (lowest-index entering and leaving variables) prevents cycling.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Infeasible, InvalidInput

PIVOT_TOL = 1e-11
FEAS_TOL = 1e-9


class Unbounded(Exception):
    pass


@dataclass(frozen=True)
class SimplexResult:
    objective: float
    x: np.ndarray
    basis: tuple
    iterations: int
    residual: float


def solve(c, a, b, basis, max_iter: int = 10_000) -> SimplexResult:
    """Maximize ``c @ x`` subject to ``a @ x == b``, ``x >= 0``.

    ``basis`` must list ``m`` column indices forming a primal-feasible basis.
    """
    c = np.asarray(c, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m, ncols = a.shape
    basis = list(basis)
    if len(basis) != m or len(set(basis)) != m:
        raise InvalidInput("starting basis must contain m distinct columns")

    for it in range(max_iter):
        bmat = a[:, basis]
        xb = np.linalg.solve(bmat, b)
        if np.any(xb < -FEAS_TOL):
            raise Infeasible("starting basis is not primal feasible")
        y = np.linalg.solve(bmat.T, c[basis])
        reduced = c - y @ a
        reduced[basis] = 0.0
        candidates = np.flatnonzero(reduced > PIVOT_TOL)
        if candidates.size == 0:
            x = np.zeros(ncols)
            x[basis] = np.maximum(xb, 0.0)
            resid = float(np.max(np.abs(a @ x - b)))
            return SimplexResult(float(c @ x), x, tuple(basis), it, resid)
        enter = int(candidates[0])
        d = np.linalg.solve(bmat, a[:, enter])
        rows = np.flatnonzero(d > PIVOT_TOL)
        if rows.size == 0:
            raise Unbounded(f"column {enter} is an unbounded ray")
        ratios = np.maximum(xb[rows], 0.0) / d[rows]
        best = ratios.min()
        tied = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        leave = min(tied, key=lambda r: basis[r])
        basis[leave] = enter
    raise RuntimeError(f"simplex did not converge in {max_iter} iterations")
