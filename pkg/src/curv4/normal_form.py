"""Berger's normal form of the Weyl part of a curvature operator.

In a suitable orthonormal frame the Weyl operator, written in the ordered
basis (e12, e13, e14, e34, e42, e23), is the block matrix [[A, B], [B, A]]
with A = diag(a), B = diag(b).  The frame is obtained by diagonalizing W+ and
W- separately and lifting the pair of SO(3) rotations through the quaternion
double cover; then a_i = (l_i^+ + l_i^-)/2 and b_i = (l_i^+ - l_i^-)/2.
"""
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from .curvature import decompose, weyl_blocks
from .errors import MismatchedInput
from .extremes import extremes_optimize, extremes_sample
from .lambda2 import PAIR_INDEX, FrameRotation

BLOCK_TOL = 1e-8
VERIFY_TOL = 1e-7

# (e12, e13, e14, e34, e42, e23) as signed positions in the lex basis
_BERGER_ORDER = np.zeros((6, 6))
for _row, ((_i, _j), _sign) in enumerate((((0, 1), 1.0), ((0, 2), 1.0), ((0, 3), 1.0),
                                          ((2, 3), 1.0), ((1, 3), -1.0), ((1, 2), 1.0))):
    _BERGER_ORDER[_row, PAIR_INDEX[_i, _j]] = _sign


@dataclass(frozen=True)
class BergerNormalForm:
    a: np.ndarray
    b: np.ndarray
    frame: FrameRotation

    @property
    def block_matrix(self):
        A, B = np.diag(self.a), np.diag(self.b)
        return np.block([[A, B], [B, A]])


def _oriented_eigenbasis(W):
    """Ascending eigenvectors with first nonzero entry positive and det +1."""
    w, V = np.linalg.eigh(0.5 * (W + W.T))
    for k in range(3):
        col = V[:, k]
        lead = col[np.argmax(np.abs(col) > 1e-12)]
        if lead < 0:
            V[:, k] = -col
    V[:, 2] = np.cross(V[:, 0], V[:, 1])
    return w, V


def _quaternion_of(rotation):
    """Unit quaternion (w, x, y, z) with nonnegative real part for a 3x3 rotation."""
    x, y, z, w = Rotation.from_matrix(rotation).as_quat()
    quat = np.array([w, x, y, z])
    if quat[0] < 0 or (quat[0] == 0 and quat[np.argmax(quat != 0)] < 0):
        quat = -quat
    return quat / np.linalg.norm(quat)


def weyl_in_frame(R, frame):
    """The Weyl operator of R written in the Berger ordering of ``frame``."""
    W = decompose(R).weyl_part.matrix
    L = frame.lambda2
    return _BERGER_ORDER @ (L.T @ W @ L) @ _BERGER_ORDER.T


def berger_normal_form(R):
    blocks = weyl_blocks(R)
    lp, Vp = _oriented_eigenbasis(blocks.wplus)
    lm, Vm = _oriented_eigenbasis(blocks.wminus)
    frame = FrameRotation(_quaternion_of(Vp), _quaternion_of(Vm))
    return BergerNormalForm(0.5 * (lp + lm), 0.5 * (lp - lm), frame)


def block_residual(R, nf):
    return float(np.abs(weyl_in_frame(R, nf.frame) - nf.block_matrix).max())


@dataclass
class NormalFormReport:
    block_residual: float
    min_value: float
    max_value: float
    sampled_min: float
    sampled_max: float
    entries: dict
    sums: tuple
    interlacing: tuple
    checks: dict

    @property
    def ok(self):
        return all(self.checks.values())


def verify_normal_form(R, nf, seed=0, samples=None, tol=VERIFY_TOL, raise_on_failure=True):
    """Check items (1) through (6) of Berger's normal form for ``nf``.

    The min/max characterizations use the optimizer on the Weyl part; pass
    ``samples`` to add the brute-force sampling check as well.
    """
    weyl = decompose(R).weyl_part
    Wf = weyl_in_frame(R, nf.frame)
    a, b = nf.a, nf.b
    lo = extremes_optimize(weyl, "sectional", "min", seed=seed)
    hi = extremes_optimize(weyl, "sectional", "max", seed=seed)
    s_lo = s_hi = np.nan
    if samples:
        s_lo = extremes_sample(weyl, "sectional", samples, seed=seed, target="min").value
        s_hi = extremes_sample(weyl, "sectional", samples, seed=seed, target="max").value

    # diagonal entries: W_1212, W_1313, W_1414, W_3434, W_4242, W_2323
    entries = {
        "W1212": Wf[0, 0], "W3434": Wf[3, 3],
        "W1313": Wf[1, 1], "W2424": Wf[4, 4],
        "W1414": Wf[2, 2], "W2323": Wf[5, 5],
        "W1234": Wf[0, 3], "W1342": Wf[1, 4], "W1423": Wf[2, 5],
    }
    interlacing = (a[1] - a[0] - abs(b[1] - b[0]),
                   a[2] - a[0] - abs(b[2] - b[0]),
                   a[2] - a[1] - abs(b[2] - b[1]))
    checks = {
        "block_form": block_residual(R, nf) < BLOCK_TOL,
        "sorted": a[0] <= a[1] + tol and a[1] <= a[2] + tol,
        "item1": (abs(entries["W1212"] - a[0]) < tol and abs(entries["W3434"] - a[0]) < tol
                  and abs(lo.value - a[0]) < tol),
        "item2": (abs(entries["W1414"] - a[2]) < tol and abs(entries["W2323"] - a[2]) < tol
                  and abs(hi.value - a[2]) < tol),
        "item3": abs(entries["W1313"] - a[1]) < tol and abs(entries["W2424"] - a[1]) < tol,
        "item4": (abs(entries["W1234"] - b[0]) < tol and abs(entries["W1342"] - b[1]) < tol
                  and abs(entries["W1423"] - b[2]) < tol),
        "item5": abs(a.sum()) < 1e-10 and abs(b.sum()) < 1e-10,
        "item6": min(interlacing) >= -1e-10,
    }
    if samples:
        # sampling only bounds the extremes from inside
        checks["sampled"] = s_lo >= lo.value - 1e-9 and s_hi <= hi.value + 1e-9
    report = NormalFormReport(block_residual(R, nf), lo.value, hi.value, s_lo, s_hi,
                              entries, (a.sum(), b.sum()), interlacing, checks)
    if raise_on_failure and not report.ok:
        failed = [k for k, v in checks.items() if not v]
        raise MismatchedInput(f"normal form does not match operator: {failed}")
    return report
