"""RLD Fisher information of the segment ``(1-theta) rho + theta sigma``."""
from __future__ import annotations

import math

import numpy as np

from .dp import as_probability_vector
from .errors import InvalidInput
from .hermitian import PD_TOL, as_hermitian, inverse_pd

SUPPORT_CUTOFF = 1e-12


def check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= 1.0:
        raise InvalidInput(f"theta must lie in [0, 1], got {theta!r}")
    return theta


def f_theta(theta: float, alpha: float, beta: float) -> float:
    """Scalar kernel ``(alpha - beta)^2 / ((1 - theta) alpha + theta beta)``."""
    theta = check_theta(theta)
    if not (alpha > 0 and beta > 0):
        raise InvalidInput("f_theta needs positive arguments")
    return (alpha - beta) ** 2 / ((1.0 - theta) * alpha + theta * beta)


def fisher_classical(theta: float, p, q) -> float:
    """``J_theta(p, q)``: the kernel summed over letters where both vectors are positive.

    The quantity is only defined for vectors with a common support; when some
    letter is positive in exactly one of them the result is ``math.inf``.
    """
    theta = check_theta(theta)
    p = as_probability_vector(p)
    q = as_probability_vector(q)
    if p.shape != q.shape:
        raise InvalidInput(f"dimension mismatch: {p.size} vs {q.size}")
    pp, qp = p > SUPPORT_CUTOFF, q > SUPPORT_CUTOFF
    if np.any(pp != qp):
        return math.inf
    a, b = p[pp], q[pp]
    return float(np.sum((a - b) ** 2 / ((1.0 - theta) * a + theta * b)))


def fisher_quantum(theta: float, rho, sigma, tol: float = PD_TOL) -> float:
    """``Tr (sigma - rho)^2 ((1-theta) rho + theta sigma)^{-1}``.

    Raises NotPositiveDefinite when the mixture is singular.
    """
    theta = check_theta(theta)
    rho = as_hermitian(rho)
    sigma = as_hermitian(sigma)
    if rho.shape != sigma.shape:
        raise InvalidInput(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    return _rld(theta, rho, sigma, tol)


def _rld(theta, rho, sigma, tol=PD_TOL):
    # inputs already validated as Hermitian of equal shape
    inv = inverse_pd((1.0 - theta) * rho + theta * sigma, tol)
    delta = sigma - rho
    val = np.sum((delta @ delta) * inv.T)
    return max(float(val.real), 0.0)


def witness_fisher_closed_form(theta: float, d: int, t: float, c: float) -> float:
    """``J_theta`` between two rank-one-perturbed identity states with overlap ``|<u_i|u_j>| = c``.

    States are ``(I_d + t |u><u|) / (d + t)``; the value is
    ``t^2/(d+t) * (1-c^2) * (2+t) / (1 + t + t^2 theta (1-theta) (1-c^2))``.
    """
    theta = check_theta(theta)
    if int(d) != d or d < 2:
        raise InvalidInput(f"dimension must be an integer >= 2, got {d!r}")
    if not t >= 0 or not math.isfinite(t):
        raise InvalidInput(f"t must be a nonnegative finite number, got {t!r}")
    if not 0.0 <= c < 1.0:
        raise InvalidInput(f"c must lie in [0, 1), got {c!r}")
    b2 = 1.0 - c * c
    return t * t / (d + t) * b2 * (2.0 + t) / (1.0 + t + t * t * theta * (1.0 - theta) * b2)
