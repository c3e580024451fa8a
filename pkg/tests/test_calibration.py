"""Multistart calibration of the plane optimizer.

A dense sample cannot certify 1e-6 agreement (its own resolution is far
coarser), so the oracle here is the dual characterization
max K = min over mu of the top eigenvalue of R + mu * star, solved in one
variable.  The sampler is used only as a one-sided bound.
"""
import numpy as np
import pytest

from curv4.curvature import random_curvature
from curv4.extremes import extremes_optimize, extremes_sample

import oracles


def _calibrate(n, samples, sample_every):
    worst_dual, worst_sample = 0.0, -np.inf
    for s in range(n):
        R = random_curvature(10 ** 6 + s)
        for target, dual in (("max", oracles.thorpe_max), ("min", oracles.thorpe_min)):
            value = extremes_optimize(R, "sectional", target, seed=s).value
            worst_dual = max(worst_dual, abs(value - dual(R.matrix)))
            if s % sample_every == 0:
                smp = extremes_sample(R, "sectional", samples, seed=s, target=target).value
                # positive means the sample beat the optimizer
                excess = smp - value if target == "max" else value - smp
                worst_sample = max(worst_sample, excess)
    return worst_dual, worst_sample


def test_calibration_quick():
    dual, sample = _calibrate(300, 10 ** 5, 10)
    assert dual < 1e-6
    assert sample <= 1e-9


@pytest.mark.slow
def test_calibration_full():
    dual, sample = _calibrate(10 ** 4, 10 ** 6, 1)
    assert dual < 1e-6
    assert sample <= 1e-9
