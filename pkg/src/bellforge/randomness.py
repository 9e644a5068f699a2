"""Guessing probability of Alice's ``x = 0`` outcome from a leaky CHSH test.

Bob's observables may depend on Alice's input, with
``||B_{y,0} - B_{y,1}|| <= 2 kappa``.  The analytic bound is the concave
envelope of ``pbar_g`` through the classical point ``(beta_c, 1)``: a chord
up to the tangency point ``beta*``, then ``pbar_g`` itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import NumericBreakdown

KAPPA_BREAK = 1 / math.sqrt(2)
BISECT_TOL = 1e-10
RANGE_TOL = 1e-9
LABEL = "analytic bound (paper-tight)"


def _check_kappa(kappa) -> float:
    k = float(kappa)
    if not (0 <= k < 1):
        raise ValueError(f"kappa must lie in [0, 1), got {kappa}")
    return k


def beta_q(kappa) -> float:
    """Largest quantum value of the leaky CHSH expression."""
    k = _check_kappa(kappa)
    if k <= KAPPA_BREAK:
        return 2 * math.sqrt(2) * (k + math.sqrt(1 - k * k))
    return 4.0


def beta_c(kappa) -> float:
    """Largest classical value, ``2 + 2 kappa``."""
    return 2 + 2 * _check_kappa(kappa)


def _check_beta(beta, k) -> float:
    b = float(beta)
    lo, hi = beta_c(k), beta_q(k)
    if not (lo - RANGE_TOL <= b <= hi + RANGE_TOL):
        raise ValueError(f"beta = {b} outside [{lo}, {hi}] for kappa = {k}")
    return min(max(b, lo), hi)


def _x_term(b, k):
    # sqrt(b^2 - (2 - 4k^2)^2) - 4k sqrt(1 - k^2), and its inner radical
    r = math.sqrt(max(b * b - (2 - 4 * k * k) ** 2, 0.0))
    return r - 4 * k * math.sqrt(1 - k * k), r


def pbar_g(beta, kappa) -> float:
    """Single-strategy bound ``1/2 + |<A_0>|/2`` with ``<A_0>`` at its extreme."""
    k = _check_kappa(kappa)
    b = _check_beta(beta, k)
    if k <= KAPPA_BREAK:
        X, _ = _x_term(b, k)
        return 0.5 + 0.25 * math.sqrt(max(4 - X * X, 0.0))
    return 0.5 + 0.25 * math.sqrt(max(b * (4 - b), 0.0))


def dpbar_dbeta(beta, kappa) -> float:
    """Analytic derivative of :func:`pbar_g` in ``beta`` (diverges at ``beta_q``)."""
    k = _check_kappa(kappa)
    b = _check_beta(beta, k)
    if k <= KAPPA_BREAK:
        X, r = _x_term(b, k)
        root = math.sqrt(max(4 - X * X, 0.0))
        if root == 0 or r == 0:
            return -math.inf
        return -X * (b / r) / (4 * root)
    root = math.sqrt(max(b * (4 - b), 0.0))
    if root == 0:
        return -math.inf
    return (4 - 2 * b) / (8 * root)


def tangency_residual(beta, kappa) -> float:
    """``pbar'(beta) (beta - beta_c) - (pbar(beta) - 1)``; zero at ``beta*``."""
    k = _check_kappa(kappa)
    return dpbar_dbeta(beta, k) * (float(beta) - beta_c(k)) - (pbar_g(beta, k) - 1)


def beta_star(kappa) -> float:
    """Tangency point of the chord from ``(beta_c, 1)`` to the ``pbar_g`` curve.

    ``kappa = 0`` returns ``beta_c``: there ``pbar_g(beta_c) = 1`` already and
    the chord is empty.  Otherwise the residual is bisected on
    ``[beta_c + 1e-9, beta_q - 1e-9]``; a missing sign change raises.
    """
    k = _check_kappa(kappa)
    if k == 0:
        return beta_c(k)
    lo, hi = beta_c(k) + 1e-9, beta_q(k) - 1e-9
    g_lo, g_hi = tangency_residual(lo, k), tangency_residual(hi, k)
    if not (g_lo > 0 > g_hi):
        raise NumericBreakdown(
            f"no sign change for beta* at kappa={k}: g({lo})={g_lo:.3e}, g({hi})={g_hi:.3e}"
        )
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if tangency_residual(mid, k) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def guessing_probability(beta, kappa) -> float:
    """Piecewise bound: chord on ``[beta_c, beta*]``, ``pbar_g`` on ``[beta*, beta_q]``."""
    k = _check_kappa(kappa)
    b = _check_beta(beta, k)
    bs = beta_star(k)
    if b >= bs:
        return pbar_g(b, k)
    bc = beta_c(k)
    slope = (pbar_g(bs, k) - 1) / (bs - bc)
    return 1 + slope * (b - bc)


def hmin(pg) -> float:
    """Min-entropy in bits."""
    return 0.0 - math.log2(pg)


@dataclass(frozen=True)
class GuessCurvePoint:
    beta_obs: float
    kappa: float
    pg: float
    hmin: float

    def __post_init__(self):
        if not (0.5 - 1e-12 <= self.pg <= 1 + 1e-12):
            raise ValueError(f"pg = {self.pg} outside [1/2, 1]")

    def as_row(self) -> tuple:
        return (self.beta_obs, self.kappa, self.pg, self.hmin)


def point(beta, kappa) -> GuessCurvePoint:
    k = _check_kappa(kappa)
    b = _check_beta(beta, k)
    pg = guessing_probability(b, k)
    return GuessCurvePoint(b, k, pg, hmin(pg))


def curve(kappa, n_points: int) -> list[GuessCurvePoint]:
    """``n_points`` points spaced uniformly in ``beta`` over ``[beta_c, beta_q]``."""
    if n_points < 2:
        raise ValueError("a curve needs at least two points")
    k = _check_kappa(kappa)
    betas = np.linspace(beta_c(k), beta_q(k), n_points)
    return [point(float(b), k) for b in betas]


# ---------------------------------------------------------------------------
# grid oracle for beta_q
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OracleParams:
    """State angle and observable angles of the optimizing parameterization."""

    theta: float
    alpha: float
    beta_angle: float

    @property
    def gamma(self) -> float:
        return self.alpha + self.beta_angle

    def feasible(self, kappa, tol: float = 1e-12) -> bool:
        return math.cos(self.gamma) <= 2 * float(kappa) ** 2 - 1 + tol

    def value(self) -> float:
        return 2 * (math.sin(self.alpha) + math.sin(2 * self.theta) * math.cos(self.beta_angle))


def oracle_max_chsh(kappa, resolution: int = 2001) -> tuple[float, OracleParams]:
    """Grid maximum of ``2 (sin a + sin 2t cos b)`` subject to ``cos(a + b) <= 2 kappa^2 - 1``.

    The grid runs over ``t`` in ``[0, pi/4]``, ``a`` in ``[-pi, pi]`` and
    ``g = a + b`` over the feasible arc, endpoints included.  Because
    ``sin 2t >= 0`` on the ``t`` range, the best ``g`` for each ``a`` does not
    depend on ``t``, which keeps the search at ``resolution^2`` work.
    """
    k = _check_kappa(kappa)
    if resolution < 1000:
        raise ValueError("resolution must be at least 1000 points per angle")
    g_min = math.acos(min(1.0, max(-1.0, 2 * k * k - 1)))
    gammas = np.linspace(g_min, 2 * math.pi - g_min, resolution)
    alphas = np.linspace(-math.pi, math.pi, resolution)
    thetas = np.linspace(0, math.pi / 4, resolution)

    cosb = np.cos(gammas[None, :] - alphas[:, None])
    best_g = np.argmax(cosb, axis=1)
    cmax = cosb[np.arange(resolution), best_g]
    vals = 2 * (np.sin(alphas)[:, None] + np.sin(2 * thetas)[None, :] * cmax[:, None])
    i, j = np.unravel_index(np.argmax(vals), vals.shape)
    a = float(alphas[i])
    params = OracleParams(float(thetas[j]), a, float(gammas[best_g[i]]) - a)
    return float(vals[i, j]), params
