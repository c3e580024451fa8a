"""Algebraic curvature operators on Lambda^2 R^4.

A curvature operator is a symmetric 6x6 matrix in the lex basis with entry
``[ij, kl] = R_ijkl`` that satisfies the first Bianchi identity.  Sectional
curvatures of coordinate planes sit on the diagonal and the round sphere of
radius one is the identity matrix (S = 2 trace = 12).
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import BianchiViolation, NotSymmetric
from .lambda2 import BASIS_MINUS, BASIS_PLUS, HODGE, PAIRS, SPLIT, induced_lambda2

SYMMETRY_TOL = 1e-10
BIANCHI_TOL = 1e-10

_BIANCHI_DIRECTION = np.zeros((6, 6))
for _a, _b, _s in ((0, 5, 1.0), (1, 4, -1.0), (2, 3, 1.0)):
    _BIANCHI_DIRECTION[_a, _b] = _BIANCHI_DIRECTION[_b, _a] = _s


def bianchi_residual(M):
    M = np.asarray(M, dtype=float)
    return M[0, 5] - M[1, 4] + M[2, 3]


@dataclass(frozen=True)
class CurvatureOperator:
    matrix: np.ndarray

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def scalar(self):
        return 2.0 * np.trace(self.matrix)

    def __add__(self, other):
        return CurvatureOperator(self.matrix + other.matrix)

    def __sub__(self, other):
        return CurvatureOperator(self.matrix - other.matrix)

    def __mul__(self, c):
        return CurvatureOperator(c * self.matrix)

    __rmul__ = __mul__

    def tensor(self):
        """The full array R[i, j, k, l]."""
        return _to_tensor(self.matrix)

    def blocks(self):
        """(A, B, C): the Lambda+ block, the mixed block and the Lambda- block."""
        N = SPLIT.T @ self.matrix @ SPLIT
        return N[:3, :3], N[:3, 3:], N[3:, 3:]


def validate(M, tol=BIANCHI_TOL):
    M = np.asarray(M, dtype=float)
    if M.shape != (6, 6):
        raise ValueError(f"expected a 6x6 matrix, got shape {M.shape}")
    asym = np.linalg.norm(M - M.T)
    if asym > SYMMETRY_TOL:
        raise NotSymmetric(f"matrix is not symmetric, |M - M^T| = {asym:.3e}")
    residual = bianchi_residual(M)
    if abs(residual) > tol:
        raise BianchiViolation(residual)
    return CurvatureOperator(0.5 * (M + M.T))


def from_blocks(A, B, C):
    """Assemble an operator from its blocks in the B+ / B- coordinates."""
    A, B, C = (np.asarray(X, dtype=float) for X in (A, B, C))
    N = np.block([[A, B], [B.T, C]])
    return CurvatureOperator(SPLIT @ N @ SPLIT.T)


def _to_tensor(M):
    T = np.zeros((4, 4, 4, 4))
    for a, (i, j) in enumerate(PAIRS):
        for b, (k, l) in enumerate(PAIRS):
            x = M[a, b]
            T[i, j, k, l] = x
            T[j, i, k, l] = -x
            T[i, j, l, k] = -x
            T[j, i, l, k] = x
    return T


def _from_tensor(T):
    M = np.empty((6, 6))
    for a, (i, j) in enumerate(PAIRS):
        for b, (k, l) in enumerate(PAIRS):
            M[a, b] = T[i, j, k, l]
    return M


@dataclass(frozen=True)
class RicciTensor:
    matrix: np.ndarray
    scalar: float = field(init=False)
    traceless: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        Rc = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", Rc)
        object.__setattr__(self, "scalar", float(np.trace(Rc)))
        object.__setattr__(self, "traceless", Rc - 0.25 * np.trace(Rc) * np.eye(4))

    @property
    def min_eigenvalue(self):
        return float(np.linalg.eigvalsh(self.matrix)[0])


def ricci_contract(R):
    """Rc_ik = sum_j R_ijkj."""
    T = R.tensor()
    return RicciTensor(np.einsum("ijkj->ik", T))


def kulkarni_nomizu(A, B):
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    T = (np.einsum("xz,yw->xyzw", A, B) + np.einsum("xz,yw->xyzw", B, A)
         - np.einsum("xw,yz->xyzw", A, B) - np.einsum("xw,yz->xyzw", B, A))
    return CurvatureOperator(_from_tensor(T))


def frobenius(X, Y):
    return float(np.sum(np.asarray(X) * np.asarray(Y)))


@dataclass(frozen=True)
class CurvatureDecomposition:
    scalar: float
    scalar_part: CurvatureOperator
    ricci_part: CurvatureOperator
    weyl_part: CurvatureOperator
    ricci: RicciTensor

    def reassemble(self):
        return self.scalar_part + self.ricci_part + self.weyl_part


def decompose(R):
    """Split R into (S/24) g o g + (1/2) Ric_0 o g + W."""
    ricci = ricci_contract(R)
    S = R.scalar
    g = np.eye(4)
    scalar_part = kulkarni_nomizu(g, g) * (S / 24.0)
    ricci_part = kulkarni_nomizu(ricci.traceless, g) * 0.5
    weyl_part = R - scalar_part - ricci_part
    return CurvatureDecomposition(S, scalar_part, ricci_part, weyl_part, ricci)


def compose(scalar, ricci_traceless=None, weyl=None):
    """Inverse of decompose: assemble R from S, Ric_0 (4x4) and a Weyl operator."""
    g = np.eye(4)
    R = kulkarni_nomizu(g, g) * (scalar / 24.0)
    if ricci_traceless is not None:
        R = R + kulkarni_nomizu(ricci_traceless, g) * 0.5
    if weyl is not None:
        R = R + (weyl if isinstance(weyl, CurvatureOperator) else CurvatureOperator(weyl))
    return R


def weyl_from_blocks(wplus, wminus):
    """The Weyl operator with the given traceless W+ and W- blocks."""
    return from_blocks(wplus, np.zeros((3, 3)), wminus)


def reverse_orientation(R):
    """Pull R back along the reflection e4 -> -e4, which swaps W+ and W-."""
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    L = induced_lambda2(flip)
    return CurvatureOperator(L @ R.matrix @ L.T)


def _sorted_eigh(W):
    w, V = np.linalg.eigh(0.5 * (W + W.T))
    return w, V


@dataclass(frozen=True)
class WeylBlocks:
    """W+ and W- in B+ / B- coordinates with ascending spectra."""

    wplus: np.ndarray
    wminus: np.ndarray
    plus_eigenvalues: np.ndarray = field(init=False)
    plus_eigenvectors: np.ndarray = field(init=False, repr=False)
    minus_eigenvalues: np.ndarray = field(init=False)
    minus_eigenvectors: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        for sign, W in (("plus", self.wplus), ("minus", self.wminus)):
            w, V = _sorted_eigh(W)
            object.__setattr__(self, f"{sign}_eigenvalues", w)
            object.__setattr__(self, f"{sign}_eigenvectors", V)

    @property
    def norm2_plus(self):
        return float(np.sum(self.wplus ** 2))

    @property
    def norm2_minus(self):
        return float(np.sum(self.wminus ** 2))

    @property
    def norm2(self):
        return self.norm2_plus + self.norm2_minus


def weyl_blocks(R):
    W = decompose(R).weyl_part.matrix
    return WeylBlocks(BASIS_PLUS.T @ W @ BASIS_PLUS, BASIS_MINUS.T @ W @ BASIS_MINUS)


@dataclass(frozen=True)
class Weitzenbock:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    min_eigenvalue: float
    nonnegative_isotropic: bool


def weitzenbock_r2(R, tol=1e-10):
    """R_2 = (S/6) g o g - 2W, i.e. (S/3) Id - 2W on Lambda^2."""
    d = decompose(R)
    matrix = (d.scalar / 3.0) * np.eye(6) - 2.0 * d.weyl_part.matrix
    eigenvalues = np.linalg.eigvalsh(matrix)
    lowest = float(eigenvalues[0])
    return Weitzenbock(matrix, eigenvalues, lowest, lowest >= -tol)


STYLES = ("general", "einstein", "weyl-only")


def random_curvature(seed, style="general"):
    """A reproducible random curvature operator.

    ``general`` projects a symmetric Gaussian matrix onto the Bianchi
    hyperplane; ``einstein`` additionally drops the Ricci-traceless part and
    ``weyl-only`` keeps only the Weyl part.
    """
    if style not in STYLES:
        raise ValueError(f"unknown style {style!r}, expected one of {STYLES}")
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(6, 6))
    M = 0.5 * (X + X.T)
    M = M - (bianchi_residual(M) / 3.0) * _BIANCHI_DIRECTION
    R = CurvatureOperator(M)
    if style == "general":
        return R
    d = decompose(R)
    if style == "einstein":
        return d.scalar_part + d.weyl_part
    return d.weyl_part


def hodge_commutator(R):
    """|R * - * R|; vanishes exactly when the mixed block is zero."""
    return float(np.linalg.norm(R.matrix @ HODGE - HODGE @ R.matrix))
