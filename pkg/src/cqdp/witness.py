"""Equiangular unit-vector systems, the CQ eps-DP states built on them, and mixture channels."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dp import DensityTuple, as_probability_vector
from .errors import InvalidInput
from .hermitian import as_hermitian, min_eigenvalue, sqrt_psd

GRAM_CUTOFF = 1e-11
BISECTION_TOL = 1e-12
BISECTION_MAX_ITER = 200


@dataclass(frozen=True, eq=False)
class UnitVectorSystem:
    """``count`` unit vectors in ``C^dim`` (columns of ``vectors``) with ``|<u_i|u_j>| = coherence``."""

    vectors: np.ndarray  # shape (dim, count)
    coherence: float

    def __post_init__(self):
        v = np.array(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[1] < 2:
            raise InvalidInput("need a (dim, count) array with count >= 2")
        norms = np.linalg.norm(v, axis=0)
        if np.max(np.abs(norms - 1.0)) > 1e-10:
            raise InvalidInput("vectors are not unit length")
        g = np.abs(v.conj().T @ v)
        off = g[~np.eye(g.shape[0], dtype=bool)]
        if np.max(np.abs(off - self.coherence)) > 1e-8:
            raise InvalidInput("vectors are not equiangular at the stated coherence")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def count(self) -> int:
        return self.vectors.shape[1]

    def gram(self) -> np.ndarray:
        return self.vectors.conj().T @ self.vectors


def _columns_from_gram(gram: np.ndarray, dim: int) -> np.ndarray:
    b = sqrt_psd(gram, GRAM_CUTOFF)
    if b.shape[0] > dim:
        raise InvalidInput(f"Gram matrix has rank {b.shape[0]} > {dim}")
    pad = np.zeros((dim - b.shape[0], b.shape[1]), dtype=complex)
    b = np.vstack([b, pad])
    # dropped eigenvalues below the cutoff shave at most ~1e-11 off each norm
    return b / np.linalg.norm(b, axis=0)


def equiangular_real(n: int, c: float) -> UnitVectorSystem:
    """``n`` real unit vectors in ``R^n`` with all pairwise inner products equal to ``c``."""
    if int(n) != n or n < 2:
        raise InvalidInput(f"n must be an integer >= 2, got {n!r}")
    if not 0.0 <= c <= 1.0:
        raise InvalidInput(f"c must lie in [0, 1], got {c!r}")
    n = int(n)
    gram = (1.0 - c) * np.eye(n) + c * np.ones((n, n))
    b = _columns_from_gram(gram, n).real
    return UnitVectorSystem(b, float(c))


def complex_gram(d: int, z: complex) -> np.ndarray:
    """``(d+1) x (d+1)`` matrix with unit diagonal, ``z`` above and ``conj(z)`` below it."""
    m = d + 1
    a = np.eye(m, dtype=complex)
    iu = np.triu_indices(m, 1)
    a[iu] = z
    a[iu[::-1]] = np.conj(z)
    return a


def equiangular_phase(d: int, c: float) -> float:
    """A phase ``phi`` in ``[0, pi]`` at which ``complex_gram(d, c e^{i phi})`` is singular.

    The smallest eigenvalue is ``1 - c >= 0`` at ``phi = 0`` and ``1 - d c <= 0``
    at ``phi = pi``; bisection finds a sign change in between.
    """
    def g(phi):
        return min_eigenvalue(complex_gram(d, c * np.exp(1j * phi)))

    lo, hi = 0.0, math.pi
    glo, ghi = g(lo), g(hi)
    if abs(glo) <= BISECTION_TOL:
        return lo
    if abs(ghi) <= BISECTION_TOL:
        return hi
    for _ in range(BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if abs(gm) <= BISECTION_TOL or hi - lo < 1e-16:
            return mid
        if gm > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def equiangular_complex(d: int, c: float) -> UnitVectorSystem:
    """``d + 1`` unit vectors in ``C^d`` with ``|<u_i|u_j>| = c``; needs ``1/d <= c <= 1``."""
    if int(d) != d or d < 2:
        raise InvalidInput(f"d must be an integer >= 2, got {d!r}")
    d = int(d)
    if not (1.0 / d - 1e-15 <= c <= 1.0):
        raise InvalidInput(f"c must lie in [1/d, 1] = [{1.0 / d:.6g}, 1], got {c!r}")
    phi = equiangular_phase(d, c)
    gram = complex_gram(d, c * np.exp(1j * phi))
    return UnitVectorSystem(_columns_from_gram(gram, d), float(c))


@dataclass(frozen=True)
class WitnessParams:
    eps: float
    c: float
    D: float
    t_max: float
    t: float | None = None


def _check_eps_c(eps, c):
    if not eps > 0 or not math.isfinite(eps):
        raise InvalidInput(f"eps must be positive and finite, got {eps!r}")
    if not 0.0 <= c < 1.0:
        raise InvalidInput(f"c must lie in [0, 1), got {c!r}")


def t_max(eps: float, c: float) -> WitnessParams:
    """Largest ``t`` for which the rank-one-perturbed states stay CQ eps-DP.

    ``t_max = 2(e^eps - 1) / (sqrt(D) + 1 - e^eps)`` with
    ``D = (e^eps - 1)^2 + 4(1 - c^2) e^eps``.  Evaluated in the rationalized
    form ``s (sqrt(D) + s) / (2 (1 - c^2) e^eps)``, ``s = e^eps - 1``, which
    avoids the cancellation in ``sqrt(D) - s`` when ``c`` is near 1.
    """
    _check_eps_c(eps, c)
    ee = math.exp(eps)
    s = math.expm1(eps)
    b2 = (1.0 - c) * (1.0 + c)
    D = s * s + 4.0 * b2 * ee
    return WitnessParams(eps, c, D, s * (math.sqrt(D) + s) / (2.0 * b2 * ee))


def t_max_direct(eps: float, c: float) -> float:
    """``2(e^eps - 1) / (sqrt(D) + 1 - e^eps)`` evaluated literally."""
    _check_eps_c(eps, c)
    ee = math.exp(eps)
    D = (ee - 1.0) ** 2 + 4.0 * (1.0 - c * c) * ee
    return 2.0 * (ee - 1.0) / (math.sqrt(D) + 1.0 - ee)


def witness_tuple(sys: UnitVectorSystem, t: float) -> DensityTuple:
    """States ``(I_d + t |u_i><u_i|) / (d + t)`` for every vector of the system."""
    if not isinstance(sys, UnitVectorSystem):
        raise InvalidInput("expected a UnitVectorSystem")
    if not t > 0 or not math.isfinite(t):
        raise InvalidInput(f"t must be positive and finite, got {t!r}")
    d = sys.dim
    eye = np.eye(d, dtype=complex)
    states = []
    for i in range(sys.count):
        u = sys.vectors[:, i]
        states.append((eye + t * np.outer(u, u.conj())) / (d + t))
    return DensityTuple(states)


def canonical_witness(eps: float, c: float = 0.5, d: int = 2, t: float | None = None) -> DensityTuple:
    """Complex-equiangular witness in ``C^d`` at ``t`` (default ``t_max``)."""
    sys = equiangular_complex(d, c)
    return witness_tuple(sys, t_max(eps, c).t_max if t is None else t)


class MixtureChannel:
    """Measure-and-prepare map ``X -> sum_k <k|X|k> sigma_k``."""

    def __init__(self, sigmas):
        sig = [as_hermitian(s) for s in sigmas]
        if not sig:
            raise InvalidInput("need at least one output state")
        if len({s.shape for s in sig}) != 1:
            raise InvalidInput("output states have different dimensions")
        self.sigmas = np.array(sig)

    @property
    def input_dim(self) -> int:
        return self.sigmas.shape[0]

    @property
    def output_dim(self) -> int:
        return self.sigmas.shape[1]

    def apply_vector(self, p) -> np.ndarray:
        p = as_probability_vector(p)
        if p.size != self.input_dim:
            raise InvalidInput(f"vector length {p.size} does not match {self.input_dim} output states")
        return np.tensordot(p, self.sigmas, axes=1)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x)
        if x.ndim == 1:
            return self.apply_vector(x)
        x = as_hermitian(x)
        if x.shape[0] != self.input_dim:
            raise InvalidInput(f"input dimension {x.shape[0]} does not match {self.input_dim}")
        return np.tensordot(np.real(np.diag(x)), self.sigmas, axes=1)

    def push(self, classical) -> DensityTuple:
        """Image of every vector of a classical tuple: an essentially classical tuple."""
        return DensityTuple([self.apply_vector(p) for p in classical.vectors])


def apply_channel(sigmas, p) -> np.ndarray:
    return MixtureChannel(sigmas).apply_vector(p)
