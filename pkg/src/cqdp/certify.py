"""Non-classicality certificates for CQ eps-DP tuples.

An essentially classical tuple (a mixture-channel image of a classical eps-DP
tuple) can never have average pairwise ``J_theta`` above the classical
supremum ``mnc_closed(n, eps, theta)``, because ``J_theta`` is monotone under
channels.  A CQ eps-DP tuple that beats the bound at some ``theta`` is
therefore certified to lie outside the essentially classical set.
"""
from __future__ import annotations

import bisect
import itertools
import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .dp import DensityTuple, cq_dp_report
from .errors import InvalidInput, NotDPAtEps, NotPositiveDefinite
from .fisher import _rld, check_theta, fisher_quantum, witness_fisher_closed_form
from .frontier import mnc_closed
from .hermitian import PSD_TOL
from .witness import equiangular_real, t_max, witness_tuple

log = logging.getLogger(__name__)

NOT_IN_EC = "NOT_IN_EC"
INCONCLUSIVE = "INCONCLUSIVE"
MARGIN_TOL = 1e-7
DEFAULT_THETA_POINTS = 41
PARTNER_TOL = 1e-14


def default_theta_grid(points: int = DEFAULT_THETA_POINTS) -> list:
    """``points`` uniform values on ``[0, 1]``, with ``1/2`` forced in."""
    if points < 1:
        raise InvalidInput("theta grid needs at least one point")
    grid = set(np.linspace(0.0, 1.0, points).tolist()) if points > 1 else {0.0}
    grid.add(0.5)
    return sorted(grid)


@dataclass
class Certificate:
    verdict: str
    eps: float
    n: int
    best_theta: float | None
    avg_fisher: float | None
    classical_bound: float | None
    margin: float | None
    dp_verified: bool
    margin_tol: float
    dp_tol: float
    theta_grid: list = field(default_factory=list)
    margins: list = field(default_factory=list)  # None where the theta was skipped
    skipped: list = field(default_factory=list)
    subset: list | None = None

    @property
    def certified(self) -> bool:
        return self.verdict == NOT_IN_EC

    def margin_at(self, theta: float) -> float | None:
        for th, m in zip(self.theta_grid, self.margins):
            if abs(th - theta) < 1e-15:
                return m
        raise KeyError(theta)

    def to_dict(self) -> dict:
        return asdict(self)


def avg_pairwise_fisher(t: DensityTuple, theta: float) -> float:
    vals = [fisher_quantum(theta, t[i], t[j]) for i, j in itertools.permutations(range(t.n), 2)]
    return float(np.mean(vals))


def _avg_over_grid(t: DensityTuple, grid) -> dict:
    """Average pairwise ``J_theta`` for every theta in ``grid``; ``None`` where a mixture is singular.

    ``J_theta(rho_j, rho_i) = J_{1-theta}(rho_i, rho_j)``, so each unordered
    pair needs the values at ``theta`` and ``1 - theta`` only.  Partners are
    matched within ``PARTNER_TOL`` so a grid symmetric about 1/2 up to rounding
    inverts every mixture once.
    """
    pool = sorted(set(grid))
    partner = {}
    for th in grid:
        k = bisect.bisect_left(pool, 1.0 - th)
        near = [pool[m] for m in (k - 1, k) if 0 <= m < len(pool) and abs(pool[m] - (1.0 - th)) <= PARTNER_TOL]
        if near:
            partner[th] = near[0]
        else:
            partner[th] = 1.0 - th
            pool.append(1.0 - th)
    needed = sorted(set(pool))
    totals = dict.fromkeys(grid, 0.0)
    for i, j in itertools.combinations(range(t.n), 2):
        vals = {}
        for th in needed:
            try:
                vals[th] = _rld(th, t[i], t[j])
            except NotPositiveDefinite:
                vals[th] = None
        for th in grid:
            a, b = vals[th], vals[partner[th]]
            if totals[th] is None or a is None or b is None:
                totals[th] = None
            else:
                totals[th] += a + b
    npairs = t.n * (t.n - 1)
    return {th: None if v is None else v / npairs for th, v in totals.items()}


def certify_not_ec(
    t: DensityTuple,
    eps: float,
    theta_grid=None,
    margin_tol: float = MARGIN_TOL,
    dp_tol: float = PSD_TOL,
    subset=None,
) -> Certificate:
    """Sweep ``theta`` and compare the average pairwise ``J_theta`` to the classical bound.

    With ``subset`` (indices into ``t``), the sub-tuple is certified against the
    bound for its own size; any CQ eps-DP tuple containing a certified sub-tuple
    is itself not essentially classical.

    Raises NotDPAtEps if the (sub-)tuple is not CQ eps-DP.  A ``theta`` whose
    mixture is singular is skipped and listed in ``skipped``.
    """
    if not eps > 0:
        raise InvalidInput(f"eps must be positive, got {eps!r}")
    if margin_tol < 0:
        raise InvalidInput("margin tolerance must be non-negative")
    grid = default_theta_grid() if theta_grid is None else sorted(check_theta(x) for x in theta_grid)
    work = t
    if subset is not None:
        subset = [int(i) for i in subset]
        if len(set(subset)) != len(subset) or len(subset) < 2:
            raise InvalidInput("subset must name at least two distinct indices")
        if min(subset) < 0 or max(subset) >= t.n:
            raise InvalidInput(f"subset indices must lie in [0, {t.n})")
        work = t.subset(subset)

    rep = cq_dp_report(t, eps, dp_tol)
    if not rep.is_dp:
        raise NotDPAtEps(
            f"tuple is not CQ eps-DP at eps={eps:.17g}: rho_{rep.worst_pair[0]} <= e^eps rho_{rep.worst_pair[1]} "
            f"fails with eigenvalue {rep.worst_eigenvalue:.3g}",
            rep.worst_pair,
            rep.worst_eigenvalue,
        )

    n = work.n
    margins, skipped = [], []
    best = None
    averages = _avg_over_grid(work, grid)
    for theta in grid:
        avg = averages[theta]
        if avg is None:
            log.info("theta=%g skipped: singular mixture", theta)
            skipped.append(theta)
            margins.append(None)
            continue
        bound = mnc_closed(n, eps, theta)
        m = avg - bound
        margins.append(m)
        if best is None or m > best[3]:
            best = (theta, avg, bound, m)

    if best is None:
        verdict = INCONCLUSIVE
        best = (None, None, None, None)
    else:
        verdict = NOT_IN_EC if best[3] > margin_tol else INCONCLUSIVE
    return Certificate(
        verdict=verdict,
        eps=float(eps),
        n=n,
        best_theta=best[0],
        avg_fisher=best[1],
        classical_bound=best[2],
        margin=best[3],
        dp_verified=True,
        margin_tol=margin_tol,
        dp_tol=dp_tol,
        theta_grid=list(grid),
        margins=margins,
        skipped=skipped,
        subset=subset,
    )


def thm1_margin(eps: float) -> float:
    """Gap ``4 s^2 / ((s+2)^2 (s+3))``, ``s = e^eps - 1``, between the d=2 witness and the 3-tuple bound at theta=1/2."""
    if not eps > 0:
        raise InvalidInput(f"eps must be positive, got {eps!r}")
    s = math.expm1(eps)
    return 4.0 * s * s / ((s + 2.0) ** 2 * (s + 3.0))


def gap_ratio(eps: float) -> float:
    """``(e^eps + 1) / (e^eps + 2)``: ratio of the 3-tuple to the 2-tuple classical supremum."""
    if not eps > 0:
        raise InvalidInput(f"eps must be positive, got {eps!r}")
    ee = math.exp(eps)
    return (ee + 1.0) / (ee + 2.0)


def cq_limit_sweep(eps: float, theta: float, n: int, c_values, check_trace: bool = False) -> list:
    """``J_theta`` between two real-equiangular witness states in ``R^n`` at ``t = t_max``, per ``c``.

    Values increase toward ``m2_closed(eps, theta)`` as ``c -> 1``.  With
    ``check_trace`` the closed form is compared against the trace formula on
    the actual states.
    """
    theta = check_theta(theta)
    if int(n) != n or n < 2:
        raise InvalidInput(f"n must be an integer >= 2, got {n!r}")
    out = []
    for c in c_values:
        if not 0.0 <= c < 1.0:
            raise InvalidInput(f"c must lie in [0, 1), got {c!r}")
        tm = t_max(eps, c).t_max
        val = witness_fisher_closed_form(theta, n, tm, c)
        if check_trace:
            states = witness_tuple(equiangular_real(n, c), tm)
            direct = fisher_quantum(theta, states[0], states[1])
            if abs(direct - val) > 1e-8 * max(1.0, abs(val)):
                raise ArithmeticError(f"closed form {val!r} disagrees with trace formula {direct!r} at c={c}")
        out.append((float(c), val))
    return out


def cq_limit_value(eps: float, theta: float) -> float:
    """Limit of :func:`cq_limit_sweep` as ``c -> 1``: ``s^2 / (e^eps + theta (1-theta) s^2)``."""
    theta = check_theta(theta)
    s = math.expm1(eps)
    return s * s / (math.exp(eps) + theta * (1.0 - theta) * s * s)

