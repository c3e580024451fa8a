import numpy as np
import pytest

from curv4.curvature import (BIANCHI_TOL, CurvatureOperator, compose, decompose, frobenius,
                             kulkarni_nomizu, random_curvature, reverse_orientation,
                             ricci_contract, validate, weitzenbock_r2, weyl_blocks,
                             weyl_from_blocks)
from curv4.errors import BianchiViolation, NotSymmetric
from curv4.extremes import biorthogonal
from curv4.lambda2 import BASIS_MINUS, BASIS_PLUS, Plane
from curv4.models import cp2, product_s2s2, sphere4

import oracles

I6 = np.eye(6)
SEEDS = range(100)


def test_identity_is_round_sphere():
    R = validate(I6)
    assert R.scalar == 12.0


def test_bianchi_violation_reports_residual():
    M = I6.copy()
    M[0, 5] = M[5, 0] = 1.0
    with pytest.raises(BianchiViolation) as info:
        validate(M)
    assert info.value.residual == pytest.approx(1.0)


def test_asymmetric_rejected():
    M = I6.copy()
    M[0, 1] = 1e-6
    with pytest.raises(NotSymmetric):
        validate(M)


@pytest.mark.parametrize("style", ["general", "einstein", "weyl-only"])
def test_generator_is_valid_and_deterministic(style):
    for s in range(20):
        R = random_curvature(s, style)
        validate(R.matrix)
        np.testing.assert_array_equal(R.matrix, random_curvature(s, style).matrix)


def test_generator_styles():
    for s in range(20):
        d = decompose(random_curvature(s, "einstein"))
        assert np.abs(d.ricci_part.matrix).max() < 1e-10
        W = random_curvature(s, "weyl-only")
        assert abs(np.trace(W.matrix)) < 1e-12
        assert np.abs(oracles.ricci_direct(W.matrix)).max() < 1e-12


def test_ricci_examples():
    np.testing.assert_allclose(ricci_contract(validate(I6)).matrix, 3 * np.eye(4))
    np.testing.assert_allclose(ricci_contract(product_s2s2().curvature).matrix, np.eye(4),
                               atol=1e-15)


def test_ricci_matches_direct_contraction():
    for s in range(20):
        R = random_curvature(s)
        Rc = ricci_contract(R)
        np.testing.assert_allclose(Rc.matrix, oracles.ricci_direct(R.matrix), atol=1e-12)
        assert Rc.scalar == pytest.approx(R.scalar, abs=1e-9)
        assert np.trace(Rc.traceless) == pytest.approx(0.0, abs=1e-12)


def test_kulkarni_nomizu_examples():
    g = np.eye(4)
    gg = kulkarni_nomizu(g, g)
    np.testing.assert_allclose(gg.matrix, 2 * I6)
    np.testing.assert_allclose(oracles.ricci_direct(gg.matrix), 6 * np.eye(4))
    assert gg.scalar == 24.0


def test_kulkarni_nomizu_symmetric_and_matches_formula():
    rng = np.random.default_rng(0)
    for _ in range(50):
        A, B = (0.5 * (X + X.T) for X in rng.normal(size=(2, 4, 4)))
        AB = kulkarni_nomizu(A, B).matrix
        np.testing.assert_allclose(AB, kulkarni_nomizu(B, A).matrix, atol=1e-14)
        np.testing.assert_allclose(AB, oracles.kn_direct(A, B), atol=1e-13)


def test_decompose_sphere():
    d = decompose(validate(I6))
    np.testing.assert_allclose(d.scalar_part.matrix, I6)
    assert np.abs(d.weyl_part.matrix).max() == 0
    assert np.abs(d.ricci_part.matrix).max() == 0


def test_decompose_cp2():
    b = weyl_blocks(cp2(12.0).curvature)
    np.testing.assert_allclose(b.plus_eigenvalues, [-1, -1, 2], atol=1e-14)
    np.testing.assert_allclose(b.minus_eigenvalues, 0, atol=1e-14)


def test_weyl_blocks_s2s2():
    b = weyl_blocks(product_s2s2().curvature)
    third = [-1 / 3, -1 / 3, 2 / 3]
    np.testing.assert_allclose(b.plus_eigenvalues, third, atol=1e-15)
    np.testing.assert_allclose(b.minus_eigenvalues, third, atol=1e-15)


def test_decompose_against_explicit_formula():
    g = np.eye(4)
    for s in SEEDS:
        R = random_curvature(s)
        S = R.scalar
        Ric0 = oracles.ricci_direct(R.matrix) - S / 4 * g
        W = R.matrix - S / 24 * oracles.kn_direct(g, g) - 0.5 * oracles.kn_direct(Ric0, g)
        d = decompose(R)
        np.testing.assert_allclose(d.weyl_part.matrix, W, atol=1e-12)
        np.testing.assert_allclose(d.reassemble().matrix, R.matrix, atol=1e-10)


def test_decompose_invariants():
    for s in SEEDS:
        d = decompose(random_curvature(s))
        parts = [d.scalar_part, d.ricci_part, d.weyl_part]
        for i in range(3):
            validate(parts[i].matrix)
            for j in range(i):
                assert abs(frobenius(parts[i].matrix, parts[j].matrix)) < 1e-9
        np.testing.assert_allclose(d.scalar_part.matrix, d.scalar / 12 * I6, atol=1e-12)
        W = d.weyl_part.matrix
        assert np.abs(oracles.ricci_direct(W)).max() < 1e-9
        assert np.abs(BASIS_PLUS.T @ W @ BASIS_MINUS).max() < 1e-12
        Rc = d.ricci_part.matrix
        assert np.abs(BASIS_PLUS.T @ Rc @ BASIS_PLUS).max() < 1e-12
        assert np.abs(BASIS_MINUS.T @ Rc @ BASIS_MINUS).max() < 1e-12


def test_mixed_block_is_ricci_only():
    for s in range(20):
        R = random_curvature(s)
        d = decompose(R)
        np.testing.assert_allclose(BASIS_PLUS.T @ R.matrix @ BASIS_MINUS,
                                   BASIS_PLUS.T @ d.ricci_part.matrix @ BASIS_MINUS,
                                   atol=1e-12)


def test_weyl_block_invariants():
    for s in SEEDS:
        R = random_curvature(s)
        b = weyl_blocks(R)
        assert abs(np.trace(b.wplus)) < 1e-10 and abs(np.trace(b.wminus)) < 1e-10
        assert np.all(np.diff(b.plus_eigenvalues) >= 0)
        assert np.all(np.diff(b.minus_eigenvalues) >= 0)
        assert b.norm2 == pytest.approx(frobenius(decompose(R).weyl_part.matrix,
                                                  decompose(R).weyl_part.matrix), rel=1e-12)
        W = random_curvature(s, "weyl-only")
        assert weyl_blocks(W).norm2 == pytest.approx(np.sum(W.matrix ** 2), rel=1e-12)


def test_compose_inverts_decompose():
    for s in range(20):
        R = random_curvature(s)
        d = decompose(R)
        R2 = compose(d.scalar, d.ricci.traceless, d.weyl_part)
        np.testing.assert_allclose(R2.matrix, R.matrix, atol=1e-12)


def test_weyl_from_blocks_round_trip():
    b = weyl_blocks(random_curvature(3))
    W = weyl_from_blocks(b.wplus, b.wminus)
    np.testing.assert_allclose(W.matrix, decompose(random_curvature(3)).weyl_part.matrix,
                               atol=1e-12)


def test_reverse_orientation_swaps_halves():
    R = random_curvature(4)
    a, b = weyl_blocks(R), weyl_blocks(reverse_orientation(R))
    np.testing.assert_allclose(a.plus_eigenvalues, b.minus_eigenvalues, atol=1e-12)
    np.testing.assert_allclose(a.minus_eigenvalues, b.plus_eigenvalues, atol=1e-12)


def test_r2_examples():
    w = weitzenbock_r2(product_s2s2().curvature)
    assert w.min_eigenvalue == pytest.approx(0.0, abs=1e-14)
    assert w.nonnegative_isotropic
    np.testing.assert_allclose(weitzenbock_r2(validate(I6)).matrix, 4 * I6)


def test_r2_spectrum_identity():
    for s in SEEDS:
        R = random_curvature(s)
        b = weyl_blocks(R)
        expected = np.sort(np.concatenate([R.scalar / 3 - 2 * b.plus_eigenvalues,
                                           R.scalar / 3 - 2 * b.minus_eigenvalues]))
        np.testing.assert_allclose(weitzenbock_r2(R).eigenvalues, expected, atol=1e-9)


def test_r2_rayleigh_bounds():
    rng = np.random.default_rng(11)
    for s in SEEDS:
        R = random_curvature(s)
        b = weyl_blocks(R)
        R2 = weitzenbock_r2(R).matrix
        S = R.scalar
        for basis, lam in ((BASIS_PLUS, b.plus_eigenvalues), (BASIS_MINUS, b.minus_eigenvalues)):
            w = basis @ rng.normal(size=3)
            n2 = w @ w
            val = w @ R2 @ w
            assert val <= (S / 3 - 2 * lam[0]) * n2 + 1e-9
            assert val >= (S / 3 - 2 * lam[2]) * n2 - 1e-9


def test_biorthogonal_frame_sum():
    # S/4 equals the sum over the three coordinate biorthogonal pairs of any frame
    rng = np.random.default_rng(12)
    for s in range(20):
        R = random_curvature(s)
        for _ in range(100):
            Q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
            total = sum(biorthogonal(R, Plane(Q[:, 0], Q[:, k])) for k in (1, 2, 3))
            assert total == pytest.approx(R.scalar / 4, abs=1e-9)


def test_sectional_is_diagonal_entry():
    R = random_curvature(5)
    E = np.eye(4)
    for a, (i, j) in enumerate(oracles.LEX):
        assert oracles.sectional_direct(R.matrix, E[i], E[j]) == pytest.approx(R.matrix[a, a])


def test_operator_arithmetic():
    R = random_curvature(6)
    assert isinstance(R * 2.0, CurvatureOperator)
    np.testing.assert_allclose((R + R - R).matrix, R.matrix)
    assert (R * 3.0).scalar == pytest.approx(3 * R.scalar)
    assert BIANCHI_TOL == 1e-10
