"""Dense complex Hermitian linear algebra.

Everything here works on plain ``numpy`` arrays of complex dtype.  Inputs are
validated with :func:`as_hermitian`, which symmetrizes small representation
drift and rejects real asymmetry.  The eigensolver is a cyclic complex Jacobi
method; matrices in this package are small (a few hundred rows at most), and
Jacobi gives eigenvalues to full relative accuracy without any LAPACK call.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import InvalidInput, NotPositiveDefinite

PSD_TOL = 1e-9
PD_TOL = 1e-12
ASYMMETRY_TOL = 1e-8

JACOBI_REL_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
SMALL_DIM = 8


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # ascending, real
    eigenvectors: np.ndarray  # columns orthonormal

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_hermitian(a, atol: float = ASYMMETRY_TOL) -> np.ndarray:
    """Return ``a`` as a complex Hermitian array, symmetrized as ``(a + a^*)/2``.

    Raises InvalidInput for non-square or non-finite input, or when
    ``max|a - a^*|`` exceeds ``atol`` (scaled by ``max(1, max|a|)``).
    """
    h = np.array(a, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 1:
        raise InvalidInput(f"expected a non-empty square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise InvalidInput("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(h))))
    asym = float(np.max(np.abs(h - h.conj().T)))
    if asym > atol * scale:
        raise InvalidInput(f"matrix is not Hermitian (asymmetry {asym:.3g})")
    return (h + h.conj().T) / 2


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def eigh(h) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each pivot ``(p, q)`` first rotates the phase of ``a[p, q]`` away, then
    applies the real Givens rotation that annihilates it.  Sweeps stop once the
    off-diagonal Frobenius mass is at most ``1e-14 * ||H||_F``.
    """
    a = as_hermitian(h)
    n = a.shape[0]
    target = JACOBI_REL_TOL * float(np.linalg.norm(a))
    if n <= SMALL_DIM:
        w, v = _jacobi_small(a.tolist(), n, target)
        w, v = np.array(w), np.array(v, dtype=complex)
    else:
        w, v = _jacobi_dense(a, n, target)
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], v[:, order])


def _rotation(apq: complex, app: float, aqq: float):
    r = abs(apq)
    ph = apq / r
    t = 0.5 * math.atan2(2.0 * r, aqq - app)
    return math.cos(t), math.sin(t), ph


def _jacobi_dense(a: np.ndarray, n: int, target: float):
    v = np.eye(n, dtype=complex)
    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) <= target:
            break
        skip = target / n * 1e-2
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = complex(a[p, q])
                if abs(apq) <= skip:
                    continue
                c, s, ph = _rotation(apq, a[p, p].real, a[q, q].real)
                phc = ph.conjugate()
                # U = diag(1, conj(ph)) @ [[c, s], [-s, c]];  A <- U^* A U,  V <- V U
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - (s * phc) * cq
                a[:, q] = s * cp + (c * phc) * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - (s * ph) * rq
                a[q, :] = s * rp + (c * ph) * rq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - (s * phc) * vq
                v[:, q] = s * vp + (c * phc) * vq
    return np.real(np.diag(a)).copy(), v


def _jacobi_small(a: list, n: int, target: float):
    # same sweep as _jacobi_dense on nested lists; numpy call overhead dominates below ~8 rows
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    t2 = target * target
    skip = target / n * 1e-2
    for _ in range(JACOBI_MAX_SWEEPS):
        off = 0.0
        for i in range(n):
            row = a[i]
            for j in range(n):
                if i != j:
                    z = row[j]
                    off += z.real * z.real + z.imag * z.imag
        if off <= t2:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if abs(apq) <= skip:
                    continue
                c, s, ph = _rotation(apq, a[p][p].real, a[q][q].real)
                phc = ph.conjugate()
                sph, sphc, cphc, cph = s * ph, s * phc, c * phc, c * ph
                for row in a:
                    x, y = row[p], row[q]
                    row[p] = c * x - sphc * y
                    row[q] = s * x + cphc * y
                rp, rq = a[p], a[q]
                a[p] = [c * x - sph * y for x, y in zip(rp, rq)]
                a[q] = [s * x + cph * y for x, y in zip(rp, rq)]
                a[p][q] = a[q][p] = 0j
                for row in v:
                    x, y = row[p], row[q]
                    row[p] = c * x - sphc * y
                    row[q] = s * x + cphc * y
    return [a[i][i].real for i in range(n)], v


def eigvalsh(h) -> np.ndarray:
    return eigh(h).eigenvalues


def min_eigenvalue(h) -> float:
    return float(eigh(h).eigenvalues[0])


def max_eigenvalue(h) -> float:
    return float(eigh(h).eigenvalues[-1])


def is_psd(h, tol: float = PSD_TOL) -> bool:
    """True iff the smallest eigenvalue of ``h`` is at least ``-tol``."""
    if tol < 0:
        raise InvalidInput("tolerance must be non-negative")
    return min_eigenvalue(h) >= -tol


def inverse_pd(h, tol: float = PD_TOL) -> np.ndarray:
    """Inverse of a strictly positive definite matrix via its eigendecomposition."""
    w, v = eigh(h)
    if w[0] <= tol:
        raise NotPositiveDefinite(f"smallest eigenvalue {w[0]:.3g} is not above {tol:.3g}")
    inv = (v / w) @ v.conj().T
    return (inv + inv.conj().T) / 2


def sqrt_psd(h, cutoff: float = 1e-11) -> np.ndarray:
    """Factor ``B`` with ``B^* B = h``; rows for eigenvalues below ``cutoff`` are dropped."""
    w, v = eigh(h)
    keep = w > cutoff
    return np.sqrt(w[keep])[:, None] * v[:, keep].conj().T


def trace_product(a, b) -> float:
    """``Tr(AB)`` for Hermitian ``A``, ``B``; the imaginary residue must be negligible."""
    a = as_hermitian(a)
    b = as_hermitian(b)
    if a.shape != b.shape:
        raise InvalidInput(f"dimension mismatch: {a.shape} vs {b.shape}")
    val = np.sum(a * b.T)
    scale = max(1.0, float(np.linalg.norm(a) * np.linalg.norm(b)))
    if abs(val.imag) > 1e-12 * scale:
        raise InvalidInput(f"trace has imaginary part {val.imag:.3g}")
    return float(val.real)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (x + x.conj().T) / 2


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    return eigh(random_hermitian(dim, rng)).eigenvectors


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
