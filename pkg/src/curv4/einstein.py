"""Einstein metrics normalized to Rc = g, so that S = 4.

The argument ruling out a positive intersection form under K <= 1 runs:

    K <= alpha           ==>  K >= beta(alpha)
    beta <= K <= alpha   ==>  8 pi^2 chi <= c(alpha, beta) Vol
    |W-|^2 >= S^2/24     ==>  2 chi - 3 tau >= Vol / (2 pi^2) >= 4 chi / c

and 3|tau| = 3 b+ >= 2 + b+ = chi then forces 2 - 4/c >= 1, i.e. c >= 4.
"""
from dataclasses import dataclass

import numpy as np

from .curvature import decompose, weyl_blocks
from .errors import NonPositiveScalar, NotEinstein, OrderViolation, OutOfRange
from .extremes import extremes_optimize

EINSTEIN_TOL = 1e-9
GAP_TOL = 1e-10


def kmin_from_kmax(alpha):
    """Lower bound on K_min for an Einstein metric with Rc = g and K_max = alpha <= 1."""
    if alpha > 1:
        raise OutOfRange(f"alpha must be at most 1 under Rc = g, got {alpha!r}")
    return (15.0 - 8.0 * alpha - np.sqrt(3.0) * np.sqrt(96.0 * alpha ** 2 - 80.0 * alpha + 19.0)) / 28.0


def euler_upper_coefficient(alpha, beta):
    """c with 8 pi^2 chi <= c Vol when beta <= K <= alpha."""
    if beta > alpha:
        raise OrderViolation(f"need beta <= alpha, got beta={beta!r}, alpha={alpha!r}")
    return 8.0 * (alpha ** 2 - (1.0 - beta) * (alpha + beta)) + 10.0 / 3.0


@dataclass(frozen=True)
class EinsteinReport:
    alpha: float
    beta: float
    euler_bound_coeff: float
    contradiction: bool
    chain: dict


def positive_intersection_contradiction(alpha=1.0, coefficient=None):
    """Run the chain for a given K_max bound.

    ``coefficient`` replaces the computed Euler coefficient, which is only
    useful for probing the boundary case c = 4.
    """
    beta = kmin_from_kmax(alpha)
    c = euler_upper_coefficient(alpha, beta) if coefficient is None else float(coefficient)
    factor = 2.0 - 4.0 / c
    chain = {
        "beta": beta,
        "euler_coefficient": c,
        # 8 pi^2 chi / Vol is at most c; 2 chi - 3 tau is at least Vol/(2 pi^2)
        "two_chi_minus_three_tau_over_chi": 4.0 / c,
        "chi_factor": factor,
        "required_chi_factor": 1.0,
    }
    return EinsteinReport(alpha, beta, c, bool(c < 4.0), chain)


def _einstein_scalar(R):
    d = decompose(R)
    ric0 = float(np.linalg.norm(d.ricci.traceless))
    if ric0 > EINSTEIN_TOL * max(1.0, abs(d.scalar)):
        raise NotEinstein(f"traceless Ricci has norm {ric0:.3e}")
    if d.scalar <= 0:
        raise NonPositiveScalar(f"scalar curvature must be positive, got {d.scalar!r}")
    return d.scalar


@dataclass(frozen=True)
class WeylGapReport:
    """Homogeneous form of the L^2 gap |W+|^2 >= S^2/24 (constant integrands)."""

    status: str
    norm2_plus: float
    bound: float
    equality: bool
    homogeneous: bool = True


def weyl_gap_check(entry):
    """Accepts a ModelSpace or a CurvatureOperator."""
    R = getattr(entry, "curvature", entry)
    S = _einstein_scalar(R)
    w2 = weyl_blocks(R).norm2_plus
    bound = S ** 2 / 24.0
    if w2 <= GAP_TOL * max(1.0, bound):
        return WeylGapReport("not-applicable", w2, bound, False)
    scale = max(1.0, bound)
    holds = w2 >= bound - GAP_TOL * scale
    return WeylGapReport("pass" if holds else "fail", w2, bound,
                         bool(abs(w2 - bound) <= GAP_TOL * scale))


@dataclass(frozen=True)
class LowerFromUpperReport:
    kmax: float
    kmin: float
    bound: float
    applicable: bool
    holds: bool


def lower_from_upper_check(R, seed=0, tol=1e-8):
    """Compare K_min with kmin_from_kmax(K_max) after rescaling to Rc = g."""
    S = _einstein_scalar(R)
    Rn = R * (4.0 / S)
    kmax = extremes_optimize(Rn, "sectional", "max", seed=seed).value
    kmin = extremes_optimize(Rn, "sectional", "min", seed=seed).value
    if kmax > 1.0 + tol:
        return LowerFromUpperReport(kmax, kmin, float("nan"), False, True)
    bound = kmin_from_kmax(min(kmax, 1.0))
    return LowerFromUpperReport(kmax, kmin, bound, True, bool(kmin >= bound - tol))
