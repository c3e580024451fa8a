"""Sectional and biorthogonal curvature of planes and their extremes.

Oriented planes correspond one-to-one to pairs (phi, psi) of unit vectors in
the B+ and B- coordinates through the unit decomposable form
omega = (phi + psi) / sqrt(2).  In those coordinates, with A, B, C the blocks
of the operator,

    K(P)      = 1/2 phi^T A phi + phi^T B psi + 1/2 psi^T C psi
    K_perp(P) = 1/2 phi^T A phi + 1/2 psi^T C psi

so both extremization problems live on S^2 x S^2.
"""
import warnings
from dataclasses import dataclass

import numpy as np

from .curvature import weyl_blocks
from .errors import NonConvergenceWarning
from .lambda2 import (BASIS_MINUS, BASIS_PLUS, form_to_plane, orthogonal_complement,
                      plane_to_form, split_selfdual)

QUANTITIES = ("sectional", "biorthogonal")
TARGETS = ("min", "max")

STEP_TOL = 1e-12
MAX_ITER = 200
N_RANDOM_STARTS = 24
SECULAR_TOL = 1e-14


@dataclass(frozen=True)
class ExtremeResult:
    value: float
    witness_plane: object
    method: str
    quantity: str
    target: str
    iterations: int = 0
    converged: bool = True
    certificate: float = None


def sectional(R, plane):
    omega = plane_to_form(plane)
    return float(omega @ R.matrix @ omega)


def biorthogonal(R, plane):
    return 0.5 * (sectional(R, plane) + sectional(R, orthogonal_complement(plane)))


def biorthogonal_from_weyl(R, plane):
    """S/12 + (phi^T W+ phi + psi^T W- psi) / 2 with omega_P = (phi + psi) / sqrt(2)."""
    blocks = weyl_blocks(R)
    _, _, phi, psi = split_selfdual(np.sqrt(2.0) * plane_to_form(plane))
    return R.scalar / 12.0 + 0.5 * (phi @ blocks.wplus @ phi + psi @ blocks.wminus @ psi)


def plane_from_pair(phi, psi):
    omega = (BASIS_PLUS @ phi + BASIS_MINUS @ psi) / np.sqrt(2.0)
    return form_to_plane(omega / np.linalg.norm(omega))


def _objective_blocks(R, quantity):
    A, B, C = R.blocks()
    if quantity == "biorthogonal":
        B = np.zeros((3, 3))
    elif quantity != "sectional":
        raise ValueError(f"unknown quantity {quantity!r}")
    return A, B, C


def _pair_values(A, B, C, phi, psi):
    return (0.5 * np.einsum("ni,ij,nj->n", phi, A, phi)
            + np.einsum("ni,ij,nj->n", phi, B, psi)
            + 0.5 * np.einsum("ni,ij,nj->n", psi, C, psi))


def kperp_extremes_closed_form(R):
    """K_perp min and max from the extreme eigenvalues of W+ and W-."""
    blocks = weyl_blocks(R)
    base = R.scalar / 12.0
    results = []
    for target, idx in (("min", 0), ("max", 2)):
        value = base + 0.5 * (blocks.plus_eigenvalues[idx] + blocks.minus_eigenvalues[idx])
        witness = plane_from_pair(blocks.plus_eigenvectors[:, idx],
                                  blocks.minus_eigenvectors[:, idx])
        results.append(ExtremeResult(float(value), witness, "closed-form",
                                     "biorthogonal", target))
    return tuple(results)


class _SphereSubproblem:
    """Maximize 1/2 x^T Q x + c^T x over |x| = 1 for a batch of vectors c.

    Q is fixed, so its eigendecomposition is shared by every solve.  The
    global maximizer satisfies (mu I - Q) x = c with mu >= the top eigenvalue
    of Q; mu comes from the secular equation |x(mu)| = 1.  When c has no
    component along the top eigenspace and the remaining part of x is short,
    mu equals the top eigenvalue and the top eigenspace supplies the rest.
    """

    def __init__(self, Q):
        q, V = np.linalg.eigh(0.5 * (Q + Q.T))
        self.q = q
        self.V = V
        scale = max(1.0, float(np.abs(q).max()))
        self.top = q >= q[-1] - 1e-12 * scale

    def solve(self, c, current):
        q, V, top = self.q, self.V, self.top
        cc = c @ V
        xc = current @ V
        qmax = q[-1]
        cnorm = np.linalg.norm(cc, axis=1)
        top_mass = np.linalg.norm(cc[:, top], axis=1)
        gaps = np.where(top, np.inf, qmax - q)
        rest = np.sum((cc / gaps) ** 2, axis=1)
        hard = (top_mass <= 1e-14 * (1.0 + cnorm)) & (rest <= 1.0)

        out = np.empty_like(cc)
        if np.any(hard):
            h = np.where(hard)[0]
            x = np.where(top, 0.0, cc[h] / gaps)
            tau = np.sqrt(np.maximum(0.0, 1.0 - rest[h]))
            # stay near the current iterate inside the top eigenspace
            d = np.where(top, xc[h], 0.0)
            dn = np.linalg.norm(d, axis=1)
            first = np.zeros(len(q))
            first[np.argmax(top)] = 1.0
            d = np.where(dn[:, None] > 1e-12, d / np.maximum(dn, 1e-300)[:, None], first)
            out[h] = x + tau[:, None] * d

        easy = np.where(~hard)[0]
        if easy.size:
            out[easy] = self._secular(cc[easy], cnorm[easy])
        return out @ V.T

    def _secular(self, cc, cnorm):
        q = self.q
        qmax = q[-1]
        lo = np.full(len(cc), qmax)
        hi = qmax + cnorm
        # 1/|x(mu)| is concave and increasing, so Newton started left of the
        # root (|x| >= 1 there) climbs monotonically onto it.
        top_mass = np.linalg.norm(cc[:, self.top], axis=1)
        mu = qmax + np.maximum(top_mass, 1e-16 * (1.0 + cnorm))
        for _ in range(200):
            denom = mu[:, None] - q
            with np.errstate(divide="ignore", invalid="ignore"):
                x = cc / denom
                norm = np.linalg.norm(x, axis=1)
                # Newton on 1/|x(mu)| - 1, which is close to linear in mu
                dnorm = -np.sum(x * x / denom, axis=1) / norm
                phi = 1.0 / norm - 1.0
                step = phi / (-dnorm / norm ** 2)
            too_long = ~np.isfinite(norm) | (norm > 1.0)
            lo = np.where(too_long, mu, lo)
            hi = np.where(too_long, hi, mu)
            newton = mu - step
            ok = np.isfinite(newton) & (newton >= lo) & (newton <= hi)
            tol = SECULAR_TOL * (1.0 + np.abs(mu))
            done = (hi - lo <= tol) | (np.abs(step) <= tol)
            stepped = np.where(ok, newton, 0.5 * (lo + hi))
            mu = np.where(done, np.where(ok, newton, mu), stepped)
            if done.all():
                break
        x = cc / (mu[:, None] - q)
        return x / np.linalg.norm(x, axis=1)[:, None]


def _starts(A, C, seed, n_random):
    _, VA = np.linalg.eigh(A)
    _, VC = np.linalg.eigh(C)
    phis = [VA[:, i] for i in range(3) for _ in range(3)]
    psis = [VC[:, j] for _ in range(3) for j in range(3)]
    for child in np.random.SeedSequence(seed).spawn(n_random):
        rng = np.random.default_rng(child)
        x = rng.normal(size=6)
        phis.append(x[:3] / np.linalg.norm(x[:3]))
        psis.append(x[3:] / np.linalg.norm(x[3:]))
    return np.array(phis), np.array(psis)


def _kkt_residual(A, B, C, phi, psi):
    gphi = A @ phi + B @ psi
    gpsi = B.T @ phi + C @ psi
    return max(np.linalg.norm(gphi - (phi @ gphi) * phi),
               np.linalg.norm(gpsi - (psi @ gpsi) * psi))


def _newton_polish(A, B, C, phi, psi, tol=STEP_TOL, max_iter=20):
    """Newton on the Lagrange system of the product-of-spheres problem.

    Used when alternating ascent stalls on a nearly flat optimum.  Returns
    the polished pair, or None if the residual cannot be brought below
    ``tol`` without lowering the objective.
    """
    start = _pair_values(A, B, C, phi[None], psi[None])[0]
    I3 = np.eye(3)
    for _ in range(max_iter):
        if _kkt_residual(A, B, C, phi, psi) < tol:
            value = _pair_values(A, B, C, phi[None], psi[None])[0]
            return (phi, psi) if value >= start - 1e-12 * (1.0 + abs(start)) else None
        gphi = A @ phi + B @ psi
        gpsi = B.T @ phi + C @ psi
        mu, nu = phi @ gphi, psi @ gpsi
        F = np.concatenate([gphi - mu * phi, gpsi - nu * psi,
                            [0.5 * (1.0 - phi @ phi), 0.5 * (1.0 - psi @ psi)]])
        J = np.zeros((8, 8))
        J[:3, :3] = A - mu * I3
        J[:3, 3:6] = B
        J[3:6, :3] = B.T
        J[3:6, 3:6] = C - nu * I3
        J[:3, 6] = -phi
        J[3:6, 7] = -psi
        J[6, :3] = -phi
        J[7, 3:6] = -psi
        delta = np.linalg.lstsq(J, -F, rcond=None)[0]
        phi = phi + delta[:3]
        psi = psi + delta[3:6]
        phi /= np.linalg.norm(phi)
        psi /= np.linalg.norm(psi)
    return None


def extremes_optimize(R, quantity="sectional", target="max", seed=0,
                      n_random=N_RANDOM_STARTS, max_iter=MAX_ITER, step_tol=STEP_TOL):
    """Extremize K or K_perp over planes by alternating sphere subproblems.

    Every restart alternates exact global solves in phi (psi fixed) and in
    psi (phi fixed), so the objective is monotone along each run.  Restarts
    are the nine eigenvector pairs of A and C plus ``n_random`` seeded ones.
    """
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}")
    A, B, C = _objective_blocks(R, quantity)
    sign = 1.0 if target == "max" else -1.0
    A, B, C = sign * A, sign * B, sign * C
    sub_phi = _SphereSubproblem(A)
    sub_psi = _SphereSubproblem(C)
    phi, psi = _starts(A, C, seed, n_random)

    done = np.zeros(len(phi), dtype=bool)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        active = ~done
        new_phi = sub_phi.solve(psi[active] @ B.T, phi[active])
        new_psi = sub_psi.solve(new_phi @ B, psi[active])
        step = np.maximum(np.abs(new_phi - phi[active]).max(axis=1),
                          np.abs(new_psi - psi[active]).max(axis=1))
        phi[active], psi[active] = new_phi, new_psi
        done[np.where(active)[0][step < step_tol]] = True
        if done.all():
            break

    values = _pair_values(A, B, C, phi, psi)
    # a restart still creeping toward the same optimum is not a better answer
    near_top = values >= values.max() - 1e-10 * (1.0 + abs(values.max()))
    pool = near_top & done if np.any(near_top & done) else near_top
    best = int(np.argmax(np.where(pool, values, -np.inf)))
    converged = bool(done[best])
    if not converged:
        polished = _newton_polish(A, B, C, phi[best], psi[best])
        if polished is not None:
            phi[best], psi[best] = polished
            values[best] = _pair_values(A, B, C, phi[best:best + 1], psi[best:best + 1])[0]
            converged = True
    if not converged:
        warnings.warn(f"{quantity} {target} optimizer stopped after {max_iter} iterations",
                      NonConvergenceWarning, stacklevel=2)
    return ExtremeResult(float(sign * values[best]), plane_from_pair(phi[best], psi[best]),
                         "optimize", quantity, target, iterations, converged)


def sectional_extremes_optimize(R, target="max", seed=0):
    return extremes_optimize(R, "sectional", target, seed=seed)


def fibonacci_sphere(n):
    """n nearly uniform points on S^2 from the golden-angle spiral."""
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    theta = np.pi * (3.0 - np.sqrt(5.0)) * k
    return np.column_stack([r * np.cos(theta), r * np.sin(theta), z])


_AXES = np.vstack([np.eye(3), -np.eye(3)])


def sphere_points(n, rng):
    """Randomly rotated Fibonacci lattice together with the six coordinate axes."""
    pts = fibonacci_sphere(max(n - 6, 1))
    G, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    return np.vstack([_AXES, pts @ G.T])


def extremes_sample(R, quantity="sectional", n=10 ** 5, seed=0, target="max"):
    """Brute-force extreme over a quasi-uniform grid on S^2 x S^2.

    The result bounds the true maximum from below (the minimum from above).
    """
    if n < 1:
        raise ValueError("need at least one sample")
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}")
    A, B, C = _objective_blocks(R, quantity)
    rng = np.random.default_rng(seed)
    m_phi = max(int(np.ceil(np.sqrt(n))), 7)
    m_psi = max(int(np.ceil(n / m_phi)), 7)
    phi = sphere_points(m_phi, rng)
    psi = sphere_points(m_psi, rng)
    grid = (0.5 * np.einsum("ni,ij,nj->n", phi, A, phi)[:, None]
            + phi @ B @ psi.T
            + 0.5 * np.einsum("ni,ij,nj->n", psi, C, psi)[None, :])
    flat = np.argmax(grid) if target == "max" else np.argmin(grid)
    i, j = np.unravel_index(flat, grid.shape)
    return ExtremeResult(float(grid[i, j]), plane_from_pair(phi[i], psi[j]), "sample",
                         quantity, target, iterations=grid.size)


@dataclass(frozen=True)
class CurvatureExtremes:
    kmin: ExtremeResult
    kmax: ExtremeResult
    kperp_min: ExtremeResult
    kperp_max: ExtremeResult


def all_extremes(R, seed=0):
    """K_min, K_max (optimizer) and K_perp min/max (closed form)."""
    kperp_min, kperp_max = kperp_extremes_closed_form(R)
    return CurvatureExtremes(extremes_optimize(R, "sectional", "min", seed=seed),
                             extremes_optimize(R, "sectional", "max", seed=seed),
                             kperp_min, kperp_max)
