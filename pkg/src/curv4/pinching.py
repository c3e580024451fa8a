"""Pointwise pinching conditions for definiteness of the intersection form.

Everything here is evaluated at a single point from a curvature operator and
a spectral context.  The first Laplace eigenvalue ``lambda1`` is a property of
a closed manifold, so it is always an input and never computed.

Notation: ``delta`` is the maximum of the biorthogonal curvature K_perp over
all planes, l3p and l3m are the top eigenvalues of W+ and W-.
"""
from dataclasses import dataclass, field

import numpy as np

from .curvature import ricci_contract, weyl_blocks
from .errors import (HypothesisNotMet, InconsistentContext, MissingK, NonPositiveInput,
                     NonPositiveScalar, NotTraceless)
from .extremes import extremes_optimize, kperp_extremes_closed_form

EQUALITY_TOL = 1e-10
TRACE_TOL = 1e-10
WEYL_ZERO_TOL = 1e-9
MODES = ("biorthogonal", "sectional")
FLAVORS = ("two-form", "weyl")
PASS, FAIL, NOT_APPLICABLE = "pass", "fail", "not-applicable"


def _le(a, b, tol=EQUALITY_TOL):
    return bool(a <= b + tol * max(1.0, abs(a), abs(b)))


def _eq(a, b, tol=EQUALITY_TOL):
    return bool(abs(a - b) <= tol * max(1.0, abs(a), abs(b)))


@dataclass(frozen=True)
class SpectralContext:
    """First eigenvalue of the Laplacian and an optional Ricci lower bound."""

    lambda1: float
    k: float = None

    def __post_init__(self):
        if not (np.isfinite(self.lambda1) and self.lambda1 > 0):
            raise NonPositiveInput(f"lambda1 must be positive, got {self.lambda1!r}")
        if self.k is not None and not (np.isfinite(self.k) and self.k > 0):
            raise NonPositiveInput(f"k must be positive, got {self.k!r}")

    def scaled(self, c):
        return SpectralContext(c * self.lambda1, None if self.k is None else c * self.k)


def threshold(S, lambda1):
    """S(2S + 9 lambda1) / (12(S + 3 lambda1)), the upper bound on K_perp."""
    if not (S > 0 and lambda1 > 0):
        raise NonPositiveInput(f"threshold needs S > 0 and lambda1 > 0, got {S!r}, {lambda1!r}")
    return S * (2.0 * S + 9.0 * lambda1) / (12.0 * (S + 3.0 * lambda1))


def lichnerowicz_lower(k):
    """Lower bound 4k/3 on lambda1 when Rc >= k > 0."""
    if not k > 0:
        raise NonPositiveInput(f"k must be positive, got {k!r}")
    return 4.0 * k / 3.0


@dataclass(frozen=True)
class ConditionResult:
    condition: int
    description: str
    threshold: float
    measured: float
    direction: str
    passed: bool
    detail: dict = field(default_factory=dict)

    @property
    def margin(self):
        """Distance to failure; nonnegative exactly when the inequality holds."""
        if self.direction == "<=":
            return self.threshold - self.measured
        return self.measured - self.threshold


@dataclass(frozen=True)
class PinchReport:
    mode: str
    scalar: float
    kmin: float
    kmax: float
    conditions: tuple

    @property
    def any_holds(self):
        return any(c.passed for c in self.conditions)

    def __getitem__(self, condition):
        for c in self.conditions:
            if c.condition == condition:
                return c
        raise KeyError(condition)


def _extremes(R, mode, seed):
    if mode == "biorthogonal":
        lo, hi = kperp_extremes_closed_form(R)
        return lo.value, hi.value
    if mode == "sectional":
        return (extremes_optimize(R, "sectional", "min", seed=seed).value,
                extremes_optimize(R, "sectional", "max", seed=seed).value)
    raise ValueError(f"unknown mode {mode!r}, expected one of {MODES}")


def check_conditions(R, ctx, mode="biorthogonal", conditions=(1, 2, 3, 4), seed=0):
    """Evaluate the four pinching conditions with K = K_perp or the sectional curvature.

    (1) K_max <= threshold(S, lambda1)
    (2) Rc >= k and K_max <= 5k/6
    (3) K_min >= S^2 / (24(S + 3 lambda1))
    (4) K_min >= S / (2(2S + 9 lambda1)) * K_max
    """
    S = R.scalar
    if S <= 0:
        raise NonPositiveScalar(f"scalar curvature must be positive, got {S!r}")
    conditions = tuple(sorted(set(conditions)))
    if 2 in conditions and ctx.k is None:
        raise MissingK("condition 2 needs a Ricci lower bound k")
    bad = [c for c in conditions if c not in (1, 2, 3, 4)]
    if bad:
        raise ValueError(f"unknown conditions {bad}")
    kmin, kmax = _extremes(R, mode, seed)
    lam = ctx.lambda1
    out = []
    for c in conditions:
        if c == 1:
            t = threshold(S, lam)
            out.append(ConditionResult(1, "K_max <= S(2S+9l)/(12(S+3l))", t, kmax, "<=",
                                       _le(kmax, t)))
        elif c == 2:
            ric_min = ricci_contract(R).min_eigenvalue
            ricci_ok = ric_min >= ctx.k - EQUALITY_TOL
            t = 5.0 * ctx.k / 6.0
            out.append(ConditionResult(2, "Rc >= k and K_max <= 5k/6", t, kmax, "<=",
                                       bool(ricci_ok and _le(kmax, t)),
                                       {"ricci_min": ric_min, "ricci_ok": bool(ricci_ok)}))
        elif c == 3:
            t = S ** 2 / (24.0 * (S + 3.0 * lam))
            out.append(ConditionResult(3, "K_min >= S^2/(24(S+3l))", t, kmin, ">=",
                                       _le(t, kmin)))
        else:
            t = S / (2.0 * (2.0 * S + 9.0 * lam)) * kmax
            out.append(ConditionResult(4, "K_min >= S/(2(2S+9l)) K_max", t, kmin, ">=",
                                       _le(t, kmin)))
    return PinchReport(mode, S, kmin, kmax, tuple(out))


def _top_eigenvalues(R):
    blocks = weyl_blocks(R)
    return float(blocks.plus_eigenvalues[2]), float(blocks.minus_eigenvalues[2]), blocks


@dataclass(frozen=True)
class LemmaBoundsReport:
    delta: float
    scalar: float
    l3_plus: float
    l3_minus: float
    inequalities: dict
    equalities: dict
    weyl_product_zero: bool

    @property
    def holds(self):
        return all(self.inequalities.values())


def lemma_bounds(R, delta=None):
    """Check the three eigenvalue bounds in terms of delta = max K_perp.

    (i)   2S/3 - 2 l3p - 2 l3m >= S - 4 delta
    (ii)  |l3p - l3m| <= 2 (delta - S/12)
    (iii) S/3 - 2 l3(+/-) >= 2S/3 - 4 delta

    Equality in (ii) and (iii) should coincide with |W+||W-| = 0.
    """
    if delta is None:
        delta = kperp_extremes_closed_form(R)[1].value
    S = R.scalar
    lp, lm, blocks = _top_eigenvalues(R)
    pairs = {
        "i": (S - 4.0 * delta, 2.0 * S / 3.0 - 2.0 * lp - 2.0 * lm),
        "ii": (abs(lp - lm), 2.0 * (delta - S / 12.0)),
        "iii_plus": (2.0 * S / 3.0 - 4.0 * delta, S / 3.0 - 2.0 * lp),
        "iii_minus": (2.0 * S / 3.0 - 4.0 * delta, S / 3.0 - 2.0 * lm),
    }
    inequalities = {name: _le(lo, hi) for name, (lo, hi) in pairs.items()}
    equalities = {name: _eq(lo, hi) for name, (lo, hi) in pairs.items()}
    product = np.sqrt(blocks.norm2_plus) * np.sqrt(blocks.norm2_minus)
    return LemmaBoundsReport(delta, S, lp, lm, inequalities, equalities,
                             bool(product < WEYL_ZERO_TOL))


@dataclass(frozen=True)
class DetBoundReport:
    eigenvalues: np.ndarray
    lhs: float
    rhs: float
    holds: bool
    identity_residual: float
    equality: bool
    equality_predicted: bool


def det_bound(W):
    """36 det W <= 6 l3 |W|^2 for a traceless symmetric 3x3 matrix.

    The gap equals 12 l3 (l1 - l2)^2; ``identity_residual`` is the
    difference between the two sides of that identity.
    """
    W = np.asarray(W, dtype=float)
    if W.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {W.shape}")
    tr = np.trace(W)
    if abs(tr) > TRACE_TOL:
        raise NotTraceless(f"trace is {tr!r}")
    W = 0.5 * (W + W.T)
    l1, l2, l3 = np.linalg.eigvalsh(W)
    lhs = 36.0 * np.linalg.det(W)
    rhs = 6.0 * l3 * float(np.sum(W ** 2))
    gap = 12.0 * l3 * (l1 - l2) ** 2
    scale = max(1.0, abs(l3)) ** 3
    return DetBoundReport(np.array([l1, l2, l3]), lhs, rhs, _le(lhs, rhs),
                          float(rhs - lhs - gap), _eq(lhs, rhs, 1e-9 * scale),
                          bool(abs(l1 - l2) <= 1e-9 * max(1.0, abs(l3)) or abs(l3) <= 1e-9))


@dataclass(frozen=True)
class ImplicationReport:
    branches: dict
    applicable: bool
    kperp_max: float
    threshold: float
    conclusion_holds: bool

    @property
    def margin(self):
        return self.threshold - self.kperp_max

    @property
    def falsified(self):
        return self.applicable and not self.conclusion_holds


def lemma27_implication(R, ctx):
    """Which of the three sufficient hypotheses hold, and whether K_perp <= threshold follows.

    Branches:
    (1) K_perp >= S^2 / (24(S + 3 lambda1))
    (2) K_perp_min >= S / (2(2S + 9 lambda1)) K_perp_max
    (3) Rc >= k > 0 and K_perp <= 5k/6, which needs lambda1 >= 4k/3
    """
    S = R.scalar
    if S <= 0:
        raise NonPositiveScalar(f"scalar curvature must be positive, got {S!r}")
    lam = ctx.lambda1
    lo, hi = (r.value for r in kperp_extremes_closed_form(R))
    branches = {
        1: _le(S ** 2 / (24.0 * (S + 3.0 * lam)), lo),
        2: _le(S / (2.0 * (2.0 * S + 9.0 * lam)) * hi, lo),
        3: False,
    }
    if ctx.k is not None:
        if lam < lichnerowicz_lower(ctx.k) * (1.0 - EQUALITY_TOL):
            raise InconsistentContext(
                f"lambda1 = {lam!r} is below the Lichnerowicz bound 4k/3 = {4 * ctx.k / 3!r}")
        ric_min = ricci_contract(R).min_eigenvalue
        branches[3] = bool(ric_min >= ctx.k - EQUALITY_TOL and _le(hi, 5.0 * ctx.k / 6.0))
    t = threshold(S, lam)
    applicable = any(branches.values())
    conclusion = _le(hi, t) if applicable else None
    return ImplicationReport(branches, applicable, hi, t, conclusion)


_FLAVOR_CONSTANTS = {
    # alpha maximizes (4a-1)/a^2 and (6a-1)/a^2 respectively
    "two-form": {"alpha": 0.5, "kato": 1.5},
    "weyl": {"alpha": 1.0 / 3.0, "kato": 5.0 / 3.0},
}


def flavor_constants(flavor, lambda1=1.0):
    if flavor not in _FLAVOR_CONSTANTS:
        raise ValueError(f"unknown flavor {flavor!r}, expected one of {FLAVORS}")
    c = dict(_FLAVOR_CONSTANTS[flavor])
    a = c["alpha"]
    if flavor == "two-form":
        c["gradient_coefficient"] = lambda1 * (4.0 * a - 1.0) / (2.0 * a)
    else:
        c["gradient_coefficient"] = lambda1 * (6.0 * a - 1.0) / (3.0 * a)
    return c


@dataclass(frozen=True)
class CertificateReport:
    """Pointwise quadratic q(t) = L_minus t^2 - 2 lambda1 t + L_plus and its discriminant chain.

    ``chain`` lists upper bounds for the discriminant, each no smaller than the
    previous one: the exact value, two algebraic rewrites, the bound in terms
    of delta, and the same bound at delta = threshold.
    """

    status: str
    flavor: str
    constants: dict
    scalar: float
    lambda1: float
    delta: float
    threshold: float
    l3_plus: float
    l3_minus: float
    leading: float
    constant: float
    leading_floor: float
    chain: dict
    first_step: dict

    @property
    def ok(self):
        return self.status == PASS


def discriminant_certificate(R, ctx, flavor="two-form", strict=False):
    """Verify the pointwise discriminant argument under K_perp <= threshold.

    Returns status ``not-applicable`` when delta exceeds the threshold, or
    raises HypothesisNotMet instead when ``strict`` is set.
    """
    constants = flavor_constants(flavor, ctx.lambda1)
    S = R.scalar
    if S <= 0:
        raise NonPositiveScalar(f"scalar curvature must be positive, got {S!r}")
    lam = ctx.lambda1
    lp, lm, blocks = _top_eigenvalues(R)
    delta = kperp_extremes_closed_form(R)[1].value
    t = threshold(S, lam)
    hypothesis = _le(delta, t)
    if strict and not hypothesis:
        raise HypothesisNotMet(f"max K_perp = {delta!r} exceeds threshold {t!r}")

    a_m, a_p = S / 3.0 - 2.0 * lm, S / 3.0 - 2.0 * lp
    L_minus, L_plus = a_m + lam, a_p + lam

    def d4(x):
        return 4.0 * (x - S / 12.0) ** 2 - 0.25 * (S - 4.0 * x) ** 2 - lam * (S - 4.0 * x)

    chain = {
        "exact": lam ** 2 - L_minus * L_plus,
        "expanded": -a_m * a_p - lam * (2.0 * S / 3.0 - 2.0 * lm - 2.0 * lp),
        "eigen_gap": ((lp - lm) ** 2 - (S / 3.0 - lm - lp) ** 2
                      - lam * (2.0 * S / 3.0 - 2.0 * lm - 2.0 * lp)),
        "delta": d4(delta),
        "threshold": d4(t),
    }
    floor = lam * (1.0 - S / (S + 3.0 * lam))

    if flavor == "two-form":
        # R_2 restricted to Lambda^+/- is S/3 - 2W^+/-
        r2_plus = S / 3.0 - 2.0 * blocks.plus_eigenvalues
        r2_minus = S / 3.0 - 2.0 * blocks.minus_eigenvalues
        first_step = {"r2_min_plus": float(r2_plus.min()), "r2_min_minus": float(r2_minus.min()),
                      "holds": bool(_eq(r2_plus.min(), a_p) and _eq(r2_minus.min(), a_m))}
    else:
        dp, dm = det_bound(blocks.wplus), det_bound(blocks.wminus)
        first_step = {"det_plus_gap": dp.rhs - dp.lhs, "det_minus_gap": dm.rhs - dm.lhs,
                      "holds": bool(dp.holds and dm.holds)}

    if not hypothesis:
        status = NOT_APPLICABLE
    else:
        scale = max(1.0, S, lam) ** 2
        ordered = all(_le(chain[a], chain[b], 1e-9)
                      for a, b in (("exact", "expanded"), ("expanded", "eigen_gap"),
                                   ("eigen_gap", "delta"), ("delta", "threshold")))
        good = (L_minus > 0 and L_plus > 0 and _le(floor, L_minus)
                and chain["eigen_gap"] <= EQUALITY_TOL * scale
                and chain["delta"] <= EQUALITY_TOL * scale
                and ordered and first_step["holds"])
        status = PASS if good else FAIL
    return CertificateReport(status, flavor, constants, S, lam, delta, t, lp, lm,
                             L_minus, L_plus, floor, chain, first_step)


def quadratic_min_on_halfline(leading, linear, constant):
    """Minimum of leading t^2 + linear t + constant over t >= 0 (leading > 0)."""
    t = max(0.0, -linear / (2.0 * leading))
    return leading * t * t + linear * t + constant
