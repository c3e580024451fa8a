"""Two-forms on R^4.

Every 6-vector and 6x6 matrix in the package uses the lexicographic basis

    e12, e13, e14, e23, e24, e34

with unit-norm basis elements.  The self-dual and anti-self-dual bases are

    B+ = (e12 + e34, e13 - e24, e14 + e23) / sqrt(2)
    B- = (e12 - e34, e13 + e24, e14 - e23) / sqrt(2)

and ``SPLIT`` is the orthogonal 6x6 matrix whose columns are B+ followed by B-.
"""
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import NotDecomposable, NotOrthonormal, NotUnit

PAIRS = tuple(combinations(range(4), 2))
PAIR_INDEX = {pair: n for n, pair in enumerate(PAIRS)}

PLANE_TOL = 1e-9
DECOMPOSABLE_TOL = 1e-8
QUATERNION_TOL = 1e-12
_KERNEL_TOL = 1e-6

_R2 = 1.0 / np.sqrt(2.0)

HODGE = np.zeros((6, 6))
HODGE[5, 0] = HODGE[0, 5] = 1.0
HODGE[4, 1] = HODGE[1, 4] = -1.0
HODGE[3, 2] = HODGE[2, 3] = 1.0

SPLIT = np.zeros((6, 6))
SPLIT[[0, 5], 0] = _R2, _R2
SPLIT[[1, 4], 1] = _R2, -_R2
SPLIT[[2, 3], 2] = _R2, _R2
SPLIT[[0, 5], 3] = _R2, -_R2
SPLIT[[1, 4], 4] = _R2, _R2
SPLIT[[2, 3], 5] = _R2, -_R2

BASIS_PLUS = SPLIT[:, :3]
BASIS_MINUS = SPLIT[:, 3:]


def basis_form(i, j):
    """Return e_i ^ e_j for 1-based indices, with the sign of the ordering."""
    if i == j:
        raise ValueError("e_i ^ e_i vanishes")
    form = np.zeros(6)
    a, b = sorted((i - 1, j - 1))
    form[PAIR_INDEX[a, b]] = 1.0 if i < j else -1.0
    return form


def hodge_star(omega):
    return HODGE @ np.asarray(omega, dtype=float)


def split_selfdual(omega):
    """Split a 2-form into its self-dual and anti-self-dual parts.

    Returns ``(plus, minus, plus_coords, minus_coords)`` where the first two are
    6-vectors in the lex basis and the coordinates are taken in B+ and B-.
    """
    omega = np.asarray(omega, dtype=float)
    star = HODGE @ omega
    plus = 0.5 * (omega + star)
    minus = 0.5 * (omega - star)
    return plus, minus, BASIS_PLUS.T @ omega, BASIS_MINUS.T @ omega


def from_selfdual_coords(phi, psi):
    """Assemble the 2-form with B+ coordinates ``phi`` and B- coordinates ``psi``."""
    return BASIS_PLUS @ np.asarray(phi, dtype=float) + BASIS_MINUS @ np.asarray(psi, dtype=float)


def plucker_residual(omega):
    c = np.asarray(omega, dtype=float)
    return c[0] * c[5] - c[1] * c[4] + c[2] * c[3]


def is_decomposable(omega, tol=DECOMPOSABLE_TOL):
    return abs(plucker_residual(omega)) <= tol


def wedge(u, v):
    """u ^ v as a 6-vector in the lex basis."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.array([u[i] * v[j] - u[j] * v[i] for i, j in PAIRS])


def skew_matrix(omega):
    """The 4x4 antisymmetric matrix with entries omega_ij above the diagonal."""
    X = np.zeros((4, 4))
    for n, (i, j) in enumerate(PAIRS):
        X[i, j] = omega[n]
        X[j, i] = -omega[n]
    return X


@dataclass(frozen=True)
class Plane:
    """An oriented 2-plane in R^4 spanned by the orthonormal pair (u, v)."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float).reshape(4)
        v = np.asarray(self.v, dtype=float).reshape(4)
        if (abs(u @ u - 1.0) > PLANE_TOL or abs(v @ v - 1.0) > PLANE_TOL
                or abs(u @ v) > PLANE_TOL):
            raise NotOrthonormal("plane vectors must be orthonormal")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def spanned(cls, u, v):
        """Gram-Schmidt an arbitrary independent pair into a Plane."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        u = u / np.linalg.norm(u)
        v = v - (u @ v) * u
        return cls(u, v / np.linalg.norm(v))

    @property
    def projector(self):
        return np.outer(self.u, self.u) + np.outer(self.v, self.v)

    def same_span(self, other, tol=1e-8):
        return np.linalg.norm(self.projector - other.projector) < tol


def plane_to_form(plane):
    return wedge(plane.u, plane.v)


def form_to_plane(omega):
    """Recover the plane of a unit decomposable 2-form.

    The plane is the image of the rank-2 skew matrix of ``omega``.  The first
    vector is the normalized image of the earliest standard basis vector not
    in the kernel; the second completes the pair so that u ^ v = omega.
    """
    omega = np.asarray(omega, dtype=float)
    norm = np.linalg.norm(omega)
    if abs(norm - 1.0) > DECOMPOSABLE_TOL:
        raise NotUnit(f"2-form has norm {norm!r}, expected 1")
    residual = plucker_residual(omega)
    if abs(residual) > DECOMPOSABLE_TOL:
        raise NotDecomposable(residual)
    X = skew_matrix(omega)
    # X = u v^T - v u^T, so X @ e_k = v_k u - u_k v lies in the plane.
    column_norms = np.linalg.norm(X, axis=0)
    k = int(np.argmax(column_norms > _KERNEL_TOL))
    u = X[:, k] / column_norms[k]
    # X @ u = -v for unit u in the plane
    v = -(X @ u)
    v = v - (u @ v) * u
    v /= np.linalg.norm(v)
    return Plane(u, v)


def orthogonal_complement(plane):
    """P-perp, oriented so that omega_P ^ omega_Pperp is a positive volume."""
    basis = np.linalg.svd(plane.projector)[0][:, 2:]
    w, z = basis[:, 0], basis[:, 1]
    frame = np.column_stack([plane.u, plane.v, w, z])
    if np.linalg.det(frame) < 0:
        z = -z
    return Plane(w, z)


def qmul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.array([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ])


def qconj(a):
    return np.asarray(a, dtype=float) * np.array([1.0, -1.0, -1.0, -1.0])


def induced_lambda2(Q):
    """The 6x6 matrix of the map Lambda^2 Q on 2-forms."""
    Q = np.asarray(Q, dtype=float)
    M = np.empty((6, 6))
    for a, (i, j) in enumerate(PAIRS):
        for b, (k, l) in enumerate(PAIRS):
            M[a, b] = Q[i, k] * Q[j, l] - Q[j, k] * Q[i, l]
    return M


@dataclass(frozen=True)
class FrameRotation:
    """Rotation of R^4 = H given by x -> p x conj(q) for unit quaternions p, q."""

    p: np.ndarray
    q: np.ndarray
    matrix: np.ndarray = field(init=False, repr=False)
    lambda2: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).reshape(4)
        q = np.asarray(self.q, dtype=float).reshape(4)
        for name, quat in (("p", p), ("q", q)):
            if abs(np.linalg.norm(quat) - 1.0) > QUATERNION_TOL:
                raise NotUnit(f"quaternion {name} is not unit length")
        qbar = qconj(q)
        Q = np.column_stack([qmul(qmul(p, e), qbar) for e in np.eye(4)])
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "matrix", Q)
        object.__setattr__(self, "lambda2", induced_lambda2(Q))

    @property
    def plus_rotation(self):
        """The SO(3) action on B+ coordinates (the rotation of p)."""
        return BASIS_PLUS.T @ self.lambda2 @ BASIS_PLUS

    @property
    def minus_rotation(self):
        """The SO(3) action on B- coordinates (the rotation of q)."""
        return BASIS_MINUS.T @ self.lambda2 @ BASIS_MINUS

    def apply(self, plane):
        return Plane(self.matrix @ plane.u, self.matrix @ plane.v)

    def conjugate(self, M):
        """Push a 6x6 operator forward along the rotation: L M L^T."""
        L = self.lambda2
        return L @ M @ L.T


def so4_from_quaternions(p, q):
    return FrameRotation(p, q)


def random_unit_quaternion(rng):
    x = rng.normal(size=4)
    return x / np.linalg.norm(x)


def random_rotation(rng):
    return FrameRotation(random_unit_quaternion(rng), random_unit_quaternion(rng))


def random_plane(rng):
    return Plane.spanned(rng.normal(size=4), rng.normal(size=4))
