"""Homogeneous model spaces and their topological invariants.

Euler characteristic and signature are recovered from constant curvature
integrands times volume:

    8 pi^2 chi = (|W|^2 - 1/2 |Rc - S/4 g|^2 + S^2/24) Vol
    12 pi^2 tau = (|W+|^2 - |W-|^2) Vol

Norms are Frobenius norms of the 6x6 Weyl operator (its blocks) and of the
4x4 traceless Ricci tensor.
"""
from dataclasses import dataclass, field, replace

import numpy as np

from .curvature import (CurvatureOperator, decompose, from_blocks, weitzenbock_r2,
                        weyl_blocks)
from .errors import BadParams

KINDS = ("sphere4", "rp4", "cp2", "product_s2s2")

# CP^2 with S = 24 has Vol = pi^2/2; pinned by (chi, tau) = (3, 1)
_CP2_BASE_SCALAR = 24.0
_CP2_BASE_VOLUME = np.pi ** 2 / 2.0


@dataclass(frozen=True)
class ModelSpace:
    kind: str
    params: dict
    curvature: CurvatureOperator
    volume: float
    quotient_factor: int = 1
    known_invariants: tuple = (None, None)
    lambda1: float = None

    @property
    def scalar(self):
        return self.curvature.scalar


def _positive(**values):
    for name, x in values.items():
        if not (np.isfinite(x) and x > 0):
            raise BadParams(f"{name} must be positive, got {x!r}")


def sphere4(r=1.0):
    _positive(r=r)
    k = 1.0 / r ** 2
    return ModelSpace("sphere4", {"r": r}, CurvatureOperator(k * np.eye(6)),
                      8.0 * np.pi ** 2 / 3.0 * r ** 4, 1, (2, 0), 4.0 * k)


def rp4(r=1.0):
    _positive(r=r)
    base = sphere4(r)
    # degree-2 spherical harmonics are the first even eigenfunctions
    return replace(base, kind="rp4", quotient_factor=2, known_invariants=(1, 0),
                   lambda1=10.0 / r ** 2)


def cp2(S=12.0):
    """Fubini-Study CP^2 normalized to scalar curvature S."""
    _positive(S=S)
    A = np.diag([0.0, 0.0, S / 4.0])
    C = (S / 12.0) * np.eye(3)
    R = from_blocks(A, np.zeros((3, 3)), C)
    volume = _CP2_BASE_VOLUME * (_CP2_BASE_SCALAR / S) ** 2
    return ModelSpace("cp2", {"S": S}, R, volume, 1, (3, 1), S / 2.0)


def product_s2s2(r1=1.0, r2=1.0):
    """S^2(r1) x S^2(r2) with the factors spanning e1,e2 and e3,e4."""
    _positive(r1=r1, r2=r2)
    M = np.zeros((6, 6))
    M[0, 0] = 1.0 / r1 ** 2
    M[5, 5] = 1.0 / r2 ** 2
    lam = min(2.0 / r1 ** 2, 2.0 / r2 ** 2)
    return ModelSpace("product_s2s2", {"r1": r1, "r2": r2}, CurvatureOperator(M),
                      16.0 * np.pi ** 2 * r1 ** 2 * r2 ** 2, 1, (4, 0), lam)


_BUILDERS = {"sphere4": sphere4, "rp4": rp4, "cp2": cp2, "product_s2s2": product_s2s2}


def model_curvature(kind, *args, **params):
    try:
        builder = _BUILDERS[kind]
    except KeyError:
        raise BadParams(f"unknown model space {kind!r}, expected one of {KINDS}") from None
    try:
        return builder(*args, **params)
    except TypeError as exc:
        raise BadParams(str(exc)) from None


def rescale(space, c):
    """Homothety g -> g / c: curvature times c, volume times c^-2."""
    _positive(c=c)
    lam = None if space.lambda1 is None else c * space.lambda1
    return replace(space, curvature=space.curvature * c, volume=space.volume / c ** 2,
                   lambda1=lam, params={**space.params, "homothety": c})


def with_scalar(space, S):
    """Rescale so that the scalar curvature equals S."""
    if space.scalar <= 0:
        raise BadParams("only positive scalar curvature spaces can be normalized")
    return rescale(space, S / space.scalar)


def gb_integrand(R):
    d = decompose(R)
    W2 = float(np.sum(d.weyl_part.matrix ** 2))
    ric0 = float(np.sum(d.ricci.traceless ** 2))
    return W2 - 0.5 * ric0 + d.scalar ** 2 / 24.0


def signature_integrand(R):
    blocks = weyl_blocks(R)
    return blocks.norm2_plus - blocks.norm2_minus


@dataclass(frozen=True)
class InvariantReport:
    gb_integrand: float
    signature_integrand: float
    chi: float
    tau: float
    weyl_norms: tuple
    isotropic_nonneg: bool
    r2_min_eigenvalue: float = field(default=None)


def invariants(space):
    R = space.curvature
    gb = gb_integrand(R)
    sig = signature_integrand(R)
    blocks = weyl_blocks(R)
    r2 = weitzenbock_r2(R)
    chi = gb * space.volume / (8.0 * np.pi ** 2 * space.quotient_factor)
    tau = sig * space.volume / (12.0 * np.pi ** 2 * space.quotient_factor)
    return InvariantReport(gb, sig, chi, tau, (blocks.norm2_plus, blocks.norm2_minus),
                           r2.nonnegative_isotropic, r2.min_eigenvalue)


def catalog(scale=1.0):
    """One instance of every kind at the default normalization."""
    return {"sphere4": sphere4(scale), "rp4": rp4(scale), "cp2": cp2(12.0 / scale ** 2),
            "product_s2s2": product_s2s2(scale, scale)}
