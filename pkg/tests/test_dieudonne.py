import numpy as np
import pytest

from quasiherm import matrixcore as mc
from quasiherm.dieudonne import (
    check_quasi_hermitian,
    metric_from_weights,
    physical_inner_product,
    solve_metric_space,
)
from quasiherm.errors import (
    ComplexSpectrum,
    DegenerateSpectrumWarning,
    DimensionMismatch,
    NonPositiveWeight,
    SpectralPathUnavailable,
)
from quasiherm.models import random_qh, toy_2x2, toy_2x2_metric

TOY_H = toy_2x2(2.0)
TOY_THETA = toy_2x2_metric(2.0)


def in_span(M, basis, tol=1e-10):
    """Whether M lies in the real span of the (Hermitian) basis matrices."""
    cols = np.column_stack(
        [np.concatenate([B.real.ravel(), B.imag.ravel()]) for B in basis]
    )
    v = np.concatenate([M.real.ravel(), M.imag.ravel()])
    coef, *_ = np.linalg.lstsq(cols, v, rcond=None)
    return np.linalg.norm(cols @ coef - v) <= tol * max(1.0, np.linalg.norm(v))


# ---------------------------------------------------------------------------
# solve_metric_space
# ---------------------------------------------------------------------------

def test_solve_hermitian_diagonal():
    family = solve_metric_space(np.diag([1.0, 2.0]))
    assert len(family.basis) == 2
    np.testing.assert_allclose(family.basis[0], np.diag([1.0, 0.0]), atol=1e-14)
    np.testing.assert_allclose(family.basis[1], np.diag([0.0, 1.0]), atol=1e-14)
    assert in_span(np.eye(2), family.basis)
    assert in_span(np.eye(2), family.oracle_basis)


def test_solve_toy_model_span():
    # Hand algebra for [[0, 1], [g^2, 0]]: the intertwining relation forces
    # solutions of the form [[g^2 b, c], [c, b]] with real b, c.
    family = solve_metric_space(TOY_H)
    assert len(family.oracle_basis) == 2
    for B in family.oracle_basis:
        assert B[0, 0] == pytest.approx(4.0 * B[1, 1], abs=1e-12)
        assert abs(B[0, 1].imag) < 1e-12
        assert B[0, 1] == pytest.approx(B[1, 0].conjugate(), abs=1e-14)
    assert in_span(TOY_THETA, family.oracle_basis)
    assert in_span(TOY_THETA, family.basis)


def test_solve_rejects_complex_spectrum():
    with pytest.raises(ComplexSpectrum):
        solve_metric_space(np.array([[0.0, 1.0], [-1.0, 0.0]]))


def test_solve_degenerate_spectrum_keeps_oracle_path():
    with pytest.warns(DegenerateSpectrumWarning):
        family = solve_metric_space(np.eye(3))
    assert family.degenerate
    assert family.spectral is None
    # every Hermitian matrix solves the equation for H = I
    assert len(family.oracle_basis) == 9
    with pytest.raises(SpectralPathUnavailable):
        metric_from_weights(family, np.ones(9))


@pytest.mark.parametrize("dim", [2, 3, 4, 5, 6])
def test_solution_space_dimension_and_span_agreement(dim):
    for seed in range(8):
        H, _ = random_qh(dim, 1000 * dim + seed)
        family = solve_metric_space(H)
        assert len(family.oracle_basis) == dim
        assert len(family.basis) == dim
        assert family.span_residual <= 1e-8


def test_basis_elements_solve_the_equation():
    for seed in (0, 1):
        H, _ = random_qh(5, seed)
        family = solve_metric_space(H)
        for B in family.basis + family.oracle_basis:
            assert mc.hermitian_defect(B) <= 1e-12 * max(1.0, mc.entry_norm(B))
            residual = mc.fro(H.conj().T @ B - B @ H)
            assert residual <= 1e-10 * mc.fro(H) * mc.fro(B)


# ---------------------------------------------------------------------------
# metric_from_weights
# ---------------------------------------------------------------------------

def test_weights_hermitian_case_gives_identity():
    family = solve_metric_space(np.diag([1.0, 2.0]))
    theta = metric_from_weights(family, [1.0, 1.0])
    np.testing.assert_allclose(theta, np.eye(2), atol=1e-14)


def test_weights_toy_model_proportional_to_reference():
    family = solve_metric_space(TOY_H)
    theta = metric_from_weights(family, [2.0, 2.0])
    ratio = theta[0, 0].real / TOY_THETA[0, 0].real
    np.testing.assert_allclose(theta, ratio * TOY_THETA, atol=1e-12)
    assert abs(theta[0, 1]) < 1e-12


def test_weights_reject_zero_and_negative():
    family = solve_metric_space(TOY_H)
    with pytest.raises(NonPositiveWeight):
        metric_from_weights(family, [0.0, 1.0])
    with pytest.raises(NonPositiveWeight):
        metric_from_weights(family, [1.0, -2.0])


def test_weights_reject_wrong_length():
    family = solve_metric_space(TOY_H)
    with pytest.raises(DimensionMismatch):
        metric_from_weights(family, [1.0, 1.0, 1.0])


@pytest.mark.parametrize("seed", range(10))
def test_weighted_metric_is_admissible(seed):
    dim = 2 + seed % 5
    H, _ = random_qh(dim, 7000 + seed)
    family = solve_metric_space(H)
    rng = np.random.default_rng(seed)
    kappa = rng.uniform(0.5, 2.0, size=dim)
    theta = metric_from_weights(family, kappa)
    flag, _ = mc.is_positive_definite(theta, 1e-12 * max(1.0, mc.entry_norm(theta)))
    assert flag
    assert check_quasi_hermitian(H, theta) <= 1e-10


# ---------------------------------------------------------------------------
# check_quasi_hermitian
# ---------------------------------------------------------------------------

def test_qh_identity_observable():
    assert check_quasi_hermitian(np.eye(3), np.diag([1.0, 2.0, 3.0])) == 0.0


def test_qh_toy_model_exact():
    # both H^dagger Theta and Theta H equal [[0, 4], [4, 0]]
    assert check_quasi_hermitian(TOY_H, TOY_THETA) <= 1e-15


def test_qh_nonnormal_counterexample_value():
    # ||L^dagger - L||_F = 2 against ||L||_F ||I||_F = sqrt(2) * sqrt(2)
    got = check_quasi_hermitian(np.diag([1j, 1.0]), np.eye(2))
    assert got == pytest.approx(1.0, abs=1e-15)


def test_qh_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        check_quasi_hermitian(np.eye(2), np.eye(3))


# ---------------------------------------------------------------------------
# physical_inner_product
# ---------------------------------------------------------------------------

def test_inner_product_trivial_metric():
    assert physical_inner_product([1.0, 0.0], [1.0, 0.0], np.eye(2)) == 1.0


def test_inner_product_toy_metric():
    got = physical_inner_product([1.0, 1.0], [1.0, 1.0], TOY_THETA)
    assert got == pytest.approx(5.0, abs=1e-14)


def test_inner_product_orthogonal_axes():
    got = physical_inner_product([1.0, 0.0], [0.0, 1.0], TOY_THETA)
    assert got == 0.0


def test_inner_product_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        physical_inner_product([1.0, 0.0, 0.0], [1.0, 0.0], np.eye(2))


@pytest.mark.parametrize("seed", range(8))
def test_inner_product_hermitian_symmetry_and_positivity(seed):
    rng = np.random.default_rng(seed)
    dim = 4
    H, theta = random_qh(dim, 300 + seed)
    a = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    b = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    ab = physical_inner_product(a, b, theta)
    ba = physical_inner_product(b, a, theta)
    assert ab == pytest.approx(np.conj(ba), abs=1e-12 * abs(ab))
    diag = physical_inner_product(a, a, theta)
    assert abs(diag.imag) <= 1e-12 * abs(diag)
    assert diag.real > 0

    # conjugate-linearity in the first argument
    scaled = physical_inner_product(2j * a, b, theta)
    assert scaled == pytest.approx(-2j * ab, abs=1e-12 * abs(ab))
