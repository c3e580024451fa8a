"""Seeded property suites and the random instance generators they share.

Each suite draws instances from ``numpy.random.default_rng((seed, salt, i))``
so that any single instance can be replayed from its index.  A suite counts
falsifications and keeps the first counterexample in JSON-ready form.
"""
import os
import time
import zlib
from dataclasses import dataclass, field

import numpy as np

from .curvature import (compose, decompose, frobenius, random_curvature, ricci_contract,
                        weyl_from_blocks)
from .einstein import (euler_upper_coefficient, kmin_from_kmax, lower_from_upper_check,
                       positive_intersection_contradiction, weyl_gap_check)
from .extremes import extremes_optimize, extremes_sample, kperp_extremes_closed_form
from .models import KINDS, invariants, model_curvature, rescale
from .normal_form import berger_normal_form, verify_normal_form
from .pinching import (FLAVORS, PASS, SpectralContext, check_conditions,
                       det_bound, discriminant_certificate, lemma27_implication, lemma_bounds,
                       threshold)

DEFAULT_SEED = 20240917
SEED_ENV = "CURV4_SEED"


def default_seed():
    value = os.environ.get(SEED_ENV)
    return int(value) if value else DEFAULT_SEED


def _rng(seed, suite, i):
    return np.random.default_rng((seed, zlib.crc32(suite.encode()), i))


# ---------------------------------------------------------------- generators

def random_traceless3(rng, scale=1.0):
    X = rng.normal(size=(3, 3))
    X = 0.5 * (X + X.T)
    return scale * (X - np.trace(X) / 3.0 * np.eye(3))


def random_traceless4(rng, scale=1.0):
    X = rng.normal(size=(4, 4))
    X = 0.5 * (X + X.T)
    return scale * (X - np.trace(X) / 4.0 * np.eye(4))


def _log_uniform(rng, lo, hi):
    return float(10.0 ** rng.uniform(np.log10(lo), np.log10(hi)))


def _positive_root(a, b, c):
    """Larger root of a x^2 + b x + c, for a > 0 and c <= 0."""
    return (-b + np.sqrt(b * b - 4.0 * a * c)) / (2.0 * a)


def _shape(rng):
    """Weyl blocks and traceless Ricci with spread-out scales."""
    wp = random_traceless3(rng, _log_uniform(rng, 0.05, 5.0))
    wm = random_traceless3(rng, _log_uniform(rng, 0.05, 5.0))
    ric0 = random_traceless4(rng, rng.uniform(0.0, 2.0))
    return wp, wm, ric0


def _margin(rng):
    # mostly close to the boundary, sometimes far from it
    return _log_uniform(rng, 1e-8, 3.0)


def lemma27_instance(rng, branch):
    """A (tensor, context) pair satisfying the given hypothesis branch.

    The scalar curvature is placed a random relative distance above the
    smallest value for which the branch holds, so many instances sit close
    to the boundary.  K_perp only depends on S and the Weyl eigenvalues.
    """
    wp, wm, ric0 = _shape(rng)
    lp, lm = np.linalg.eigvalsh(wp), np.linalg.eigvalsh(wm)
    m, M = 0.5 * (lp[0] + lm[0]), 0.5 * (lp[2] + lm[2])
    lam = _log_uniform(rng, 0.05, 20.0)
    k = None
    if branch == 1:
        # S/12 + m >= S^2 / (24(S + 3 lam))  <=>  S^2 + (6 lam + 24 m) S + 72 m lam >= 0
        S = _positive_root(1.0, 6.0 * lam + 24.0 * m, 72.0 * m * lam) * (1.0 + _margin(rng))
    elif branch == 2:
        # (S/12 + m) 2(2S + 9 lam) >= S (S/12 + M)
        S = _positive_root(0.25, 1.5 * lam + 4.0 * m - M, 18.0 * m * lam) * (1.0 + _margin(rng))
    elif branch == 3:
        r_min = float(np.linalg.eigvalsh(ric0)[0])
        # S/12 + M <= 5k/6 <= 5(S/4 + r_min)/6
        S = 8.0 * (M - 5.0 * r_min / 6.0) * (1.0 + _margin(rng))
        k_lo, k_hi = 1.2 * (S / 12.0 + M), S / 4.0 + r_min
        k = k_lo + rng.uniform() * (k_hi - k_lo)
        lam = 4.0 * k / 3.0 * (1.0 + _margin(rng))
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return compose(S, ric0, weyl_from_blocks(wp, wm)), SpectralContext(lam, k)


def certificate_instance(rng):
    """A (tensor, context) pair with max K_perp below threshold(S, lambda1)."""
    wp, wm, ric0 = _shape(rng)
    M = 0.5 * (np.linalg.eigvalsh(wp)[2] + np.linalg.eigvalsh(wm)[2])
    lam = _log_uniform(rng, 0.05, 20.0)
    # threshold - S/12 = S(S + 6 lam) / (12(S + 3 lam)) must reach M
    S = _positive_root(1.0, 6.0 * lam - 12.0 * M, -36.0 * M * lam) * (1.0 + _margin(rng))
    return compose(S, ric0, weyl_from_blocks(wp, wm)), SpectralContext(lam)


def half_weyl_instance(rng, side="minus"):
    """A tensor whose W- (or W+) vanishes identically."""
    wp, _, ric0 = _shape(rng)
    zero = np.zeros((3, 3))
    W = weyl_from_blocks(wp, zero) if side == "minus" else weyl_from_blocks(zero, wp)
    return compose(rng.uniform(-5.0, 20.0), ric0, W)


# ---------------------------------------------------------------- suites

@dataclass
class SuiteResult:
    name: str
    count: int = 0
    falsifications: int = 0
    max_residual: float = 0.0
    counterexample: dict = None
    notes: dict = field(default_factory=dict)

    def record(self, ok, residual=0.0, example=None):
        self.count += 1
        if np.isfinite(residual):
            self.max_residual = max(self.max_residual, float(residual))
        if not ok:
            self.falsifications += 1
            if self.counterexample is None and example is not None:
                self.counterexample = example

    @property
    def ok(self):
        return self.falsifications == 0


def _tensor_example(i, R, **extra):
    return {"index": i, "matrix": R.matrix.tolist(), **extra}


def suite_decomposition(seed, n):
    out = SuiteResult("decomposition")
    styles = ("general", "einstein", "weyl-only")
    for i in range(n):
        R = random_curvature((seed, i), styles[i % 3])
        d = decompose(R)
        parts = (d.scalar_part.matrix, d.ricci_part.matrix, d.weyl_part.matrix)
        ortho = max(abs(frobenius(parts[a], parts[b])) for a, b in ((0, 1), (0, 2), (1, 2)))
        recon = float(np.abs(d.reassemble().matrix - R.matrix).max())
        ricci_w = float(np.abs(ricci_contract(d.weyl_part).matrix).max())
        ok = ortho < 1e-9 and recon < 1e-10 and ricci_w < 1e-9
        out.record(ok, max(ortho, recon, ricci_w), _tensor_example(i, R))
    return out


def suite_normal_form(seed, n, samples=None):
    out = SuiteResult("normal_form")
    for i in range(n):
        R = random_curvature((seed, i))
        nf = berger_normal_form(R)
        rep = verify_normal_form(R, nf, seed=i, samples=samples, raise_on_failure=False)
        residual = max(rep.block_residual, abs(rep.min_value - nf.a[0]),
                       abs(rep.max_value - nf.a[2]))
        out.record(rep.ok, residual, _tensor_example(
            i, R, failed=[k for k, v in rep.checks.items() if not v]))
    return out


def suite_kperp(seed, n, samples=10 ** 4):
    out = SuiteResult("kperp")
    for i in range(n):
        R = random_curvature((seed, i))
        lo, hi = kperp_extremes_closed_form(R)
        s_hi = extremes_sample(R, "biorthogonal", samples, seed=i, target="max").value
        s_lo = extremes_sample(R, "biorthogonal", samples, seed=i, target="min").value
        o_hi = extremes_optimize(R, "biorthogonal", "max", seed=i).value
        o_lo = extremes_optimize(R, "biorthogonal", "min", seed=i).value
        gap = max(abs(o_hi - hi.value), abs(o_lo - lo.value))
        ok = s_hi <= hi.value + 1e-12 and s_lo >= lo.value - 1e-12 and gap < 1e-8
        out.record(ok, gap, _tensor_example(i, R))
    return out


def suite_lemma26(seed, n):
    out = SuiteResult("lemma26")
    equal_pred = 0
    for i in range(n):
        rng = _rng(seed, "lemma26", i)
        if i % 10 == 9:
            # exact equality family: a repeated bottom eigenvalue
            a = abs(rng.normal())
            Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
            W = Q @ np.diag([-a, -a, 2.0 * a]) @ Q.T
            W -= np.trace(W) / 3.0 * np.eye(3)
        else:
            W = random_traceless3(rng)
        rep = det_bound(W)
        equal_pred += rep.equality_predicted
        ok = rep.holds and abs(rep.identity_residual) < 1e-9
        out.record(ok, abs(rep.identity_residual), {"index": i, "W": W.tolist()})
    out.notes["equality_instances"] = equal_pred
    return out


def suite_lemma25(seed, n):
    """Random tensors for the inequalities, half-Weyl tensors for the equality clause."""
    out = SuiteResult("lemma25")
    cooccur = 0
    for i in range(n):
        rng = _rng(seed, "lemma25", i)
        R = random_curvature((seed, i)) if i % 2 == 0 else half_weyl_instance(
            rng, "minus" if i % 4 == 1 else "plus")
        rep = lemma_bounds(R)
        eq = rep.equalities["ii"]
        matches = eq == rep.weyl_product_zero
        cooccur += bool(eq and rep.weyl_product_zero)
        slack = max(0.0, rep.l3_plus - rep.l3_minus - 2 * (rep.delta - rep.scalar / 12.0))
        out.record(rep.holds and matches, slack, _tensor_example(i, R))
    out.notes["equality_instances"] = cooccur
    return out


def suite_lemma27(seed, n):
    out = SuiteResult("lemma27")
    margins = []
    for branch in (1, 2, 3):
        for i in range(n):
            R, ctx = lemma27_instance(_rng(seed, f"lemma27-{branch}", i), branch)
            rep = lemma27_implication(R, ctx)
            ok = rep.applicable and rep.branches[branch] and rep.conclusion_holds
            margins.append(rep.margin)
            out.record(ok, max(0.0, -rep.margin), _tensor_example(
                i, R, branch=branch, lambda1=ctx.lambda1, k=ctx.k))
    out.notes["min_margin"] = float(min(margins)) if margins else None
    return out


def suite_certificate(seed, n):
    out = SuiteResult("certificate")
    for i in range(n):
        R, ctx = certificate_instance(_rng(seed, "certificate", i))
        for flavor in FLAVORS:
            rep = discriminant_certificate(R, ctx, flavor)
            worst = max(rep.chain["eigen_gap"], rep.chain["delta"])
            out.record(rep.status == PASS, max(0.0, worst), _tensor_example(
                i, R, flavor=flavor, lambda1=ctx.lambda1, status=rep.status))
    return out


def suite_threshold(seed, n):
    out = SuiteResult("threshold")
    for i in range(n):
        rng = _rng(seed, "threshold", i)
        S, lam = _log_uniform(rng, 1e-3, 1e3), _log_uniform(rng, 1e-3, 1e3)
        t = threshold(S, lam)
        gap = S / 4.0 - t
        exact = S ** 2 / (12.0 * (S + 3.0 * lam))
        monotone = threshold(S * 1.01, lam) > t and threshold(S, lam * 1.01) > t
        residual = abs(gap - exact) / exact
        out.record(gap > 0 and monotone and residual < 1e-8, residual,
                   {"index": i, "S": S, "lambda1": lam})
    return out


def suite_scaling(seed, n):
    """check_conditions gives the same verdicts after R -> cR, (lambda1, k) -> c(lambda1, k)."""
    out = SuiteResult("pinching_scale")
    for i in range(n):
        rng = _rng(seed, "pinching_scale", i)
        R, ctx = lemma27_instance(rng, 1 + i % 3)
        if ctx.k is None:
            ctx = SpectralContext(ctx.lambda1, max(ricci_contract(R).min_eigenvalue, 1e-3))
        c = _log_uniform(rng, 1e-2, 1e2)
        a = check_conditions(R, ctx)
        b = check_conditions(R * c, ctx.scaled(c))
        same = [x.passed for x in a.conditions] == [y.passed for y in b.conditions]
        drift = max(abs(x.margin * c - y.margin) / max(1.0, abs(y.threshold))
                    for x, y in zip(a.conditions, b.conditions))
        out.record(same, drift, _tensor_example(i, R, c=c, lambda1=ctx.lambda1, k=ctx.k))
    return out


_SCALES = (0.1, 0.3, 0.5, 0.9, 1.0, 1.7, 2.0, 3.5, 7.0, 12.0)


def suite_models(seed, n=None):
    out = SuiteResult("models")
    for kind in KINDS:
        base = model_curvature(kind)
        for c in _SCALES:
            rep = invariants(rescale(base, c))
            chi, tau = base.known_invariants
            err = max(abs(rep.chi - chi) / abs(chi), abs(rep.tau - tau))
            out.record(err < 1e-8, err, {"kind": kind, "homothety": c,
                                         "chi": rep.chi, "tau": rep.tau})
    return out


def suite_einstein(seed, n=None):
    out = SuiteResult("einstein")
    rep = positive_intersection_contradiction(1.0)
    beta = (7.0 - np.sqrt(105.0)) / 28.0
    err = abs(rep.beta - beta)
    out.record(rep.contradiction and err < 1e-12, err, {"alpha": 1.0})
    out.notes["euler_coefficient"] = rep.euler_bound_coeff
    out.notes["chi_factor"] = rep.chain["chi_factor"]
    # identity 1 - (1 - b)(1 + b) = b^2 at alpha = 1
    rng = _rng(seed, "einstein", 0)
    for b in rng.uniform(-1.0, 1.0, size=1000):
        res = abs(euler_upper_coefficient(1.0, b) - (8.0 * b * b + 10.0 / 3.0))
        out.record(res < 1e-12, res, {"beta": float(b)})
    grid = np.linspace(0.0, 1.0, 1001)
    values = np.array([kmin_from_kmax(a) for a in grid])
    jump = float(np.abs(np.diff(values)).max())
    out.record(bool(np.all(np.isfinite(values)) and jump < 1e-2), 0.0, {"grid": "alpha in [0,1]"})
    out.notes["max_grid_step"] = jump
    for kind, params in (("sphere4", {}), ("cp2", {"S": 4.0}), ("product_s2s2", {})):
        space = model_curvature(kind, **params)
        lf = lower_from_upper_check(space.curvature, seed=seed)
        out.record(lf.applicable and lf.holds, max(0.0, lf.bound - lf.kmin), {"kind": kind})
        gap = weyl_gap_check(space)
        expect_equality = kind != "sphere4"
        ok = gap.equality == expect_equality and gap.status != "fail"
        out.record(ok, abs(gap.norm2_plus - gap.bound) if expect_equality else 0.0,
                   {"kind": kind, "status": gap.status})
    return out


SUITES = {
    "decomposition": (suite_decomposition, 1000),
    "normal_form": (suite_normal_form, 100),
    "kperp": (suite_kperp, 50),
    "lemma26": (suite_lemma26, 10000),
    "lemma25": (suite_lemma25, 2000),
    "lemma27": (suite_lemma27, 1000),
    "certificate": (suite_certificate, 2000),
    "threshold": (suite_threshold, 2000),
    "pinching_scale": (suite_scaling, 300),
    "models": (suite_models, None),
    "einstein": (suite_einstein, None),
}


def run_suites(names=None, seed=None, n=None):
    """Run the named suites (all by default); returns (results, elapsed seconds)."""
    seed = default_seed() if seed is None else seed
    names = list(SUITES) if not names or names == ["all"] else names
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise ValueError(f"unknown suites {unknown}, expected some of {list(SUITES)}")
    start = time.perf_counter()
    results = []
    for name in names:
        fn, default_n = SUITES[name]
        results.append(fn(seed, n if n is not None else default_n))
    return results, time.perf_counter() - start


def format_summary(results, seed):
    lines = [f"seed {seed}",
             f"{'suite':<16}{'count':>8}{'falsified':>11}{'max residual':>15}"]
    for r in results:
        lines.append(f"{r.name:<16}{r.count:>8}{r.falsifications:>11}{r.max_residual:>15.3e}")
        for key, value in sorted(r.notes.items()):
            shown = f"{value:.6f}" if isinstance(value, float) else str(value)
            lines.append(f"  {key} = {shown}")
    total = sum(r.falsifications for r in results)
    lines.append(f"total falsifications {total}")
    return "\n".join(lines)
