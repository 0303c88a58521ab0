"""Classical and classical-quantum eps-DP checks, and the minimal eps of a tuple."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import Infeasible, InvalidInput, ValidationError
from .hermitian import PSD_TOL, as_hermitian, eigh, min_eigenvalue

NORMALIZATION_TOL = 1e-10
SUPPORT_CUTOFF = 1e-11
SUPPORT_RESIDUAL = 1e-8


def as_probability_vector(p, tol: float = NORMALIZATION_TOL) -> np.ndarray:
    w = np.asarray(p, dtype=float)
    if w.ndim != 1 or w.size < 1:
        raise ValidationError("probability vector shape", f"expected a non-empty vector, got {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValidationError("finite entries")
    if np.any(w < 0):
        raise ValidationError("probability nonnegativity", f"min entry {w.min():.3g}")
    if abs(w.sum() - 1.0) > tol:
        raise ValidationError("probability normalization", f"sum is {w.sum():.17g}")
    return w


@dataclass(frozen=True, eq=False)
class ClassicalTuple:
    """``n`` probability vectors over a shared alphabet, stored as an ``(n, dim)`` array."""

    vectors: np.ndarray

    def __post_init__(self):
        rows = [np.asarray(r, dtype=float) for r in self.vectors]
        if len(rows) < 2:
            raise ValidationError("tuple size", "need at least two vectors")
        if len({r.shape for r in rows}) != 1:
            raise ValidationError("equal dimensions", "vectors have different lengths")
        arr = np.array([as_probability_vector(r) for r in rows])
        arr.setflags(write=False)
        object.__setattr__(self, "vectors", arr)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        return self.vectors[i]

    def to_density(self) -> "DensityTuple":
        return DensityTuple([np.diag(p).astype(complex) for p in self.vectors])


@dataclass(frozen=True, eq=False)
class DensityTuple:
    """``n`` density matrices of a common dimension."""

    states: tuple = field()

    def __post_init__(self):
        states = [as_hermitian(s) for s in self.states]
        if len(states) < 2:
            raise ValidationError("tuple size", "need at least two states")
        if len({s.shape for s in states}) != 1:
            raise ValidationError("equal dimensions", "states have different shapes")
        for i, s in enumerate(states):
            tr = np.trace(s).real
            if abs(tr - 1.0) > NORMALIZATION_TOL:
                raise ValidationError("unit trace", f"state {i} has trace {tr:.17g}")
            lam = min_eigenvalue(s)
            if lam < -PSD_TOL:
                raise ValidationError("positive semidefinite", f"state {i} has eigenvalue {lam:.3g}")
            s.setflags(write=False)
        object.__setattr__(self, "states", tuple(states))

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        return self.states[i]

    def subset(self, indices) -> "DensityTuple":
        return DensityTuple([self.states[i] for i in indices])


@dataclass(frozen=True)
class DPReport:
    is_dp: bool
    eps: float
    tol: float
    worst_pair: tuple | None
    worst_eigenvalue: float

    def __bool__(self):
        return self.is_dp


def _check_eps(eps):
    if not eps > 0 or not math.isfinite(eps):
        raise InvalidInput(f"eps must be positive and finite, got {eps!r}")


def classical_dp_report(t: ClassicalTuple, eps: float, tol: float = PSD_TOL) -> DPReport:
    _check_eps(eps)
    p = t.vectors
    ee = math.exp(eps)
    worst, worst_pair = math.inf, None
    for i, j in itertools.permutations(range(t.n), 2):
        m = float(np.min(ee * p[j] - p[i]))
        if m < worst:
            worst, worst_pair = m, (i, j)
    return DPReport(worst >= -tol, eps, tol, worst_pair, worst)


def classical_dp_check(t: ClassicalTuple, eps: float, tol: float = PSD_TOL) -> bool:
    """True iff ``e^eps p_j(k) - p_i(k) >= -tol`` for every ordered pair and letter."""
    return classical_dp_report(t, eps, tol).is_dp


def cq_dp_report(t: DensityTuple, eps: float, tol: float = PSD_TOL) -> DPReport:
    """Smallest eigenvalue of ``e^eps rho_j - rho_i`` over ordered pairs, with the verdict.

    ``worst_pair`` is ``(i, j)`` for the binding inequality ``rho_i <= e^eps rho_j``.
    """
    _check_eps(eps)
    if tol < 0:
        raise InvalidInput("tolerance must be non-negative")
    ee = math.exp(eps)
    worst, worst_pair = math.inf, None
    for i, j in itertools.permutations(range(t.n), 2):
        lam = min_eigenvalue(ee * t.states[j] - t.states[i])
        if lam < worst:
            worst, worst_pair = lam, (i, j)
    return DPReport(worst >= -tol, eps, tol, worst_pair, worst)


def cq_dp_check(t: DensityTuple, eps: float, tol: float = PSD_TOL) -> bool:
    return cq_dp_report(t, eps, tol).is_dp


def _support(rho: np.ndarray):
    w, v = eigh(rho)
    keep = w > SUPPORT_CUTOFF
    return w[keep], v[:, keep]


def min_epsilon_report(t: DensityTuple) -> tuple[float, tuple]:
    """Minimal eps and the pair ``(i, j)`` attaining it.

    Computes ``max log lambda_max(rho_j^{-1/2} rho_i rho_j^{-1/2})`` on the common
    support.  Raises Infeasible when the supports differ.
    """
    supports = [_support(s) for s in t.states]
    ranks = {w.size for w, _ in supports}
    if len(ranks) != 1:
        raise Infeasible(f"states have different ranks {sorted(ranks)}; no finite eps exists")
    for j, (_, vj) in enumerate(supports):
        proj = vj @ vj.conj().T
        for i, rho in enumerate(t.states):
            if i == j:
                continue
            resid = float(np.max(np.abs(rho - proj @ rho @ proj)))
            if resid > SUPPORT_RESIDUAL:
                raise Infeasible(f"state {i} leaves the support of state {j} (residual {resid:.3g})")
    best, best_pair = 0.0, None
    for j, (wj, vj) in enumerate(supports):
        whiten = vj / np.sqrt(wj)
        for i, rho in enumerate(t.states):
            if i == j:
                continue
            m = whiten.conj().T @ rho @ whiten
            lam = float(eigh(m).eigenvalues[-1])
            val = math.log(lam)
            if best_pair is None or val > best:
                best, best_pair = val, (i, j)
    return max(best, 0.0), best_pair


def min_epsilon(t: DensityTuple) -> float:
    return min_epsilon_report(t)[0]


def classical_min_epsilon(t: ClassicalTuple) -> float:
    """``max log(p_i(k)/p_j(k))`` over the common support; Infeasible if supports differ."""
    p = t.vectors
    pos = p > SUPPORT_CUTOFF
    if not np.all(pos == pos[0]):
        raise Infeasible("vectors have different supports; no finite eps exists")
    q = p[:, pos[0]]
    logs = np.log(q)
    return max(float(np.max(logs.max(axis=0) - logs.min(axis=0))), 0.0)
