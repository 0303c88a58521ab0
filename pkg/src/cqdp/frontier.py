"""Classical supremum of the pairwise-averaged Fisher information over eps-DP tuples.

Three independent routes are provided and must agree:

* the closed form ``mnc_closed`` (a scan over the number ``k`` of large
  coordinates),
* the vertex linear program ``lp_supremum`` over ``{1, e^eps}^n`` solved by
  the dense simplex in :mod:`cqdp.simplex`,
* the grouped program ``grouped_supremum`` that lumps vertices by ``k``,

plus an explicit achieving tuple, ``extremal_tuple``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import simplex
from .dp import ClassicalTuple
from .errors import InvalidInput, ResourceLimit
from .fisher import check_theta, f_theta

MAX_LP_N = 16
REGISTRATION_POINTS = 100
REGISTRATION_TOL = 1e-8


def _check_n_eps(n, eps):
    if int(n) != n or n < 2:
        raise InvalidInput(f"n must be an integer >= 2, got {n!r}")
    if not eps > 0 or not math.isfinite(eps):
        raise InvalidInput(f"eps must be positive and finite, got {eps!r}")
    return int(n), float(eps)


@dataclass(frozen=True)
class SublinearObjective:
    """A positively homogeneous, subadditive function on the open positive orthant.

    Both properties are spot-checked on random points at construction; pass
    ``check=False`` to skip (e.g. for an objective already vetted elsewhere).
    """

    arity: int
    evaluator: Callable[[np.ndarray], float]
    name: str = ""
    check: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.arity < 1:
            raise InvalidInput("arity must be positive")
        if self.check:
            self.spot_check(REGISTRATION_POINTS, np.random.default_rng(self.seed))

    def __call__(self, x) -> float:
        return float(self.evaluator(np.asarray(x, dtype=float)))

    def spot_check(self, points: int, rng: np.random.Generator, tol: float = REGISTRATION_TOL):
        for _ in range(points):
            x = rng.uniform(0.01, 10.0, self.arity)
            y = rng.uniform(0.01, 10.0, self.arity)
            a = rng.uniform(0.01, 10.0)
            fx, fy, fxy, fax = self(x), self(y), self(x + y), self(a * x)
            scale = max(1.0, abs(fx), abs(fy), abs(fax))
            if fxy > fx + fy + tol * scale:
                raise InvalidInput(f"objective {self.name!r} is not subadditive at {x}, {y}")
            if abs(fax - a * fx) > tol * scale:
                raise InvalidInput(f"objective {self.name!r} is not positively homogeneous at {x}")


def pairwise_objective(psi: Callable[[float, float], float], n: int, name: str = "") -> SublinearObjective:
    """``phi(x) = sum_{i != j} psi(x_i, x_j)`` for a sublinear two-argument kernel."""
    pairs = list(itertools.permutations(range(n), 2))

    def phi(x):
        return sum(psi(x[i], x[j]) for i, j in pairs)

    return SublinearObjective(n, phi, name or "pairwise")


def fisher_objective(n: int, theta: float) -> SublinearObjective:
    theta = check_theta(theta)
    i, j = np.array(list(itertools.permutations(range(n), 2))).T

    def phi(x):
        a, b = x[i], x[j]
        return float(np.sum((a - b) ** 2 / ((1.0 - theta) * a + theta * b)))

    return SublinearObjective(n, phi, f"fisher(theta={theta})")


def vertex_set(n: int, eps: float) -> np.ndarray:
    """All ``2^n`` vectors in ``{1, e^eps}^n``; row ``b`` has ``e^eps`` where bit ``i`` of ``b`` is set."""
    n, eps = _check_n_eps(n, eps)
    if n > MAX_LP_N:
        raise ResourceLimit(f"n={n} exceeds the vertex limit n <= {MAX_LP_N}")
    bits = (np.arange(2**n)[:, None] >> np.arange(n)[None, :]) & 1
    return np.where(bits == 1, math.exp(eps), 1.0)


@dataclass(frozen=True)
class LPSolution:
    objective: float
    weights: dict  # vertex (tuple of floats) -> weight, nonzero weights only
    residual: float
    iterations: int = 0


def lp_supremum(n: int, eps: float, phi: SublinearObjective) -> LPSolution:
    """``max sum_v phi(v) alpha_v  s.t.  sum_v alpha_v v = 1_n, alpha >= 0`` over ``v in {1, e^eps}^n``."""
    n, eps = _check_n_eps(n, eps)
    if phi.arity != n:
        raise InvalidInput(f"objective arity {phi.arity} does not match n={n}")
    verts = vertex_set(n, eps)
    cost = np.array([phi(v) for v in verts])
    # the n vertices with a single large coordinate form a feasible starting
    # basis: (J + s I) alpha = 1 gives alpha_i = 1/(n - 1 + e^eps) > 0
    start = [1 << i for i in range(n)]
    res = simplex.solve(cost, verts.T, np.ones(n), start)
    weights = {
        tuple(float(z) for z in verts[k]): float(res.x[k])
        for k in np.flatnonzero(res.x > 0.0)
    }
    return LPSolution(res.objective, weights, res.residual, res.iterations)


def _kernel_pair_sum(psi, eps: float) -> float:
    ee = math.exp(eps)
    return psi(ee, 1.0) + psi(1.0, ee)


def _k_ratio(n: int, k: int, ee: float) -> float:
    return k * (n - k) / (k * ee + n - k)


def k_star(n: int, eps: float) -> int:
    """Integer ``1 <= k <= n/2`` maximizing ``k(n-k)/(k e^eps + n - k)``; ties go to the smaller k."""
    n, eps = _check_n_eps(n, eps)
    ee = math.exp(eps)
    best_k, best = 1, -math.inf
    for k in range(1, n // 2 + 1):
        r = _k_ratio(n, k, ee)
        if r > best * (1 + 1e-15) + 1e-300:
            best_k, best = k, r
    return best_k


def grouped_supremum(n: int, eps: float, psi: Callable[[float, float], float]) -> float:
    """Supremum of ``sum_{i != j} Psi(p_i, p_j)`` via the program grouped by ``k``.

    Maximize ``sum_k (psi(e,1) + psi(1,e)) k(n-k) beta_k`` subject to
    ``sum_k (k e^eps + n - k) beta_k = n``: a single constraint, so the
    optimum puts all mass on the best ``k``.
    """
    n, eps = _check_n_eps(n, eps)
    ee = math.exp(eps)
    best = max(_k_ratio(n, k, ee) for k in range(n + 1))
    return _kernel_pair_sum(psi, eps) * n * best


def mnc_closed(n: int, eps: float, theta: float) -> float:
    """Classical supremum of the minimum (equivalently average) pairwise ``J_theta``."""
    n, eps = _check_n_eps(n, eps)
    theta = check_theta(theta)
    ee = math.exp(eps)
    pair = f_theta(theta, ee, 1.0) + f_theta(theta, 1.0, ee)
    return pair / (n - 1) * _k_ratio(n, k_star(n, eps), ee)


def m2_closed(eps: float, theta: float) -> float:
    """``s^2 / (((1-theta) s + 1)(theta s + 1))`` with ``s = e^eps - 1``."""
    _check_n_eps(2, eps)
    theta = check_theta(theta)
    s = math.expm1(eps)
    return s * s / (((1.0 - theta) * s + 1.0) * (theta * s + 1.0))


def avg_fisher_supremum(n: int, eps: float, theta: float, method: str = "lp") -> float:
    """Supremum over eps-DP n-tuples of the average pairwise ``J_theta``.

    ``method`` is ``"lp"`` (vertex simplex), ``"grouped"`` or ``"closed"``.
    """
    n, eps = _check_n_eps(n, eps)
    theta = check_theta(theta)
    if method == "closed":
        return mnc_closed(n, eps, theta)
    if method == "grouped":
        return grouped_supremum(n, eps, lambda a, b: f_theta(theta, a, b)) / (n * (n - 1))
    if method == "lp":
        return lp_supremum(n, eps, fisher_objective(n, theta)).objective / (n * (n - 1))
    raise InvalidInput(f"unknown method {method!r}")


def extremal_alphabet(n: int, k: int, eps: float) -> list:
    """Vertices of ``{1, e^eps}^n`` with exactly ``k`` large coordinates, lexicographic in their positions."""
    n, eps = _check_n_eps(n, eps)
    if int(k) != k or not 1 <= k <= n // 2:
        raise InvalidInput(f"k must be an integer in [1, n/2], got {k!r}")
    ee = math.exp(eps)
    out = []
    for pos in itertools.combinations(range(n), int(k)):
        v = [1.0] * n
        for i in pos:
            v[i] = ee
        out.append(tuple(v))
    return out


def extremal_tuple(n: int, k: int, eps: float) -> ClassicalTuple:
    """The eps-DP n-tuple over ``C(n, k)`` letters with ``p_i(v) = v(i) / Z``.

    ``Z = C(n-1, k-1) e^eps + C(n-1, k)`` normalizes every row.  At
    ``k = k_star(n, eps)`` its minimum pairwise ``J_theta`` equals ``mnc_closed``.
    """
    alphabet = np.array(extremal_alphabet(n, k, eps))
    z = math.comb(n - 1, k - 1) * math.exp(eps) + math.comb(n - 1, k)
    return ClassicalTuple(alphabet.T / z)
