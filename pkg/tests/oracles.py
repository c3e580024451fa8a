"""Independent reference computations used by the tests.

Nothing here reuses the package's own evaluators, so agreement is evidence
rather than tautology.
"""
import numpy as np
from scipy.optimize import minimize_scalar

LEX = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

# Hodge star on the lex basis, written out by hand
STAR = np.zeros((6, 6))
for a, b, s in ((0, 5, 1.0), (1, 4, -1.0), (2, 3, 1.0)):
    STAR[a, b] = STAR[b, a] = s


def full_tensor(M):
    """R[i,j,k,l] from the 6x6 matrix, with all antisymmetries filled in."""
    T = np.zeros((4, 4, 4, 4))
    for a, (i, j) in enumerate(LEX):
        for b, (k, l) in enumerate(LEX):
            for (p, q, s1) in ((i, j, 1), (j, i, -1)):
                for (r, t, s2) in ((k, l, 1), (l, k, -1)):
                    T[p, q, r, t] = s1 * s2 * M[a, b]
    return T


def sectional_direct(M, u, v):
    """R(u, v, u, v) / |u ^ v|^2 evaluated on the 4-tensor."""
    T = full_tensor(np.asarray(M))
    num = np.einsum("ijkl,i,j,k,l->", T, u, v, u, v)
    area = (u @ u) * (v @ v) - (u @ v) ** 2
    return num / area


def thorpe_max(M):
    """max K over planes = min over mu of the top eigenvalue of M + mu * star."""
    M = np.asarray(M, dtype=float)
    f = lambda mu: np.linalg.eigvalsh(M + mu * STAR)[-1]
    bound = 2.0 * np.abs(M).sum() + 1.0
    res = minimize_scalar(f, bounds=(-bound, bound), method="bounded",
                          options={"xatol": 1e-13, "maxiter": 500})
    return float(min(res.fun, f(res.x)))


def thorpe_min(M):
    return -thorpe_max(-np.asarray(M, dtype=float))


def random_orthonormal_pair(rng):
    Q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    return Q[:, 0], Q[:, 1]


def quat_to_so3(p):
    """Rotation matrix of v -> p v conj(p) on imaginary quaternions."""
    w, x, y, z = p
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def rotation_of_lambda2(Q):
    """Lambda^2 Q by pushing each basis pair through Q (e_i ^ e_j -> Qe_i ^ Qe_j)."""
    out = np.zeros((6, 6))
    for b, (k, l) in enumerate(LEX):
        u, v = Q[:, k], Q[:, l]
        out[:, b] = [u[i] * v[j] - u[j] * v[i] for i, j in LEX]
    return out


def ricci_direct(M):
    """Rc_ik = sum_j R_ijkj from the full 4-tensor."""
    return np.einsum("ijkj->ik", full_tensor(np.asarray(M)))


def kn_direct(A, B):
    """(A o B)_ijkl = A_ik B_jl + A_jl B_ik - A_il B_jk - A_jk B_il, as a 6x6 matrix."""
    out = np.zeros((6, 6))
    for a, (i, j) in enumerate(LEX):
        for b, (k, l) in enumerate(LEX):
            out[a, b] = (A[i, k] * B[j, l] + A[j, l] * B[i, k]
                         - A[i, l] * B[j, k] - A[j, k] * B[i, l])
    return out
