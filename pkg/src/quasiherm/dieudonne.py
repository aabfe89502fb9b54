"""Solve the intertwining equation ``H^dagger Theta = Theta H`` for Hermitian
metric candidates, parameterize the admissible (positive-definite) family and
evaluate physical inner products.

Two independent constructions of the solution space are computed and cross
checked on every solve:

* an algebraic null-space path over the real vector space of Hermitian
  matrices (dim^2 real parameters), thresholded by singular value;
* a spectral path built from rank-one projectors onto left eigenvectors,
  defined whenever the spectrum is real and nondegenerate.

The positive-weight combinations of the spectral projectors exhaust the
positive-definite metrics, so the weight vector is exactly the residual
freedom left by the equation (the metric is never unique; selecting a member
of the family is deliberately left to the caller).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import matrixcore as mc
from .errors import (
    ComplexSpectrum,
    DegenerateSpectrumWarning,
    DimensionMismatch,
    NonPositiveWeight,
    SpanMismatch,
    SpectralPathUnavailable,
)

#: mutual-projection residual above which the two solution paths are rejected
SPAN_AGREEMENT_TOL = 1e-8


@dataclass(frozen=True)
class MetricFamily:
    """Hermitian basis of the metric solution space for one Hamiltonian.

    ``basis`` spans the real linear space of Hermitian solutions; when the
    spectral path is available its elements are the left-eigenvector
    projectors ``|L_n><L_n|`` (one per eigenvalue, matching ``kappa_default``).
    ``oracle_basis`` is the independently computed null-space basis and is
    always present.  ``degenerate`` flags spectra whose smallest gap fell
    below tolerance, in which case only the oracle basis is returned.
    """

    dim: int
    basis: tuple[np.ndarray, ...]
    oracle_basis: tuple[np.ndarray, ...]
    spectral: mc.SpectralData | None
    kappa_default: np.ndarray
    degenerate: bool
    span_residual: float | None

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "basis": [mc.matrix_to_json(B) for B in self.basis],
            "kappa_default": [float(k) for k in self.kappa_default],
        }


def _hermitian_basis(dim: int) -> list[np.ndarray]:
    """Frobenius-orthonormal basis of the real space of Hermitian matrices."""
    basis = []
    for i in range(dim):
        E = np.zeros((dim, dim), dtype=complex)
        E[i, i] = 1.0
        basis.append(E)
    for i in range(dim):
        for j in range(i + 1, dim):
            E = np.zeros((dim, dim), dtype=complex)
            E[i, j] = E[j, i] = 1.0 / np.sqrt(2.0)
            basis.append(E)
            F = np.zeros((dim, dim), dtype=complex)
            F[i, j] = 1j / np.sqrt(2.0)
            F[j, i] = -1j / np.sqrt(2.0)
            basis.append(F)
    return basis


def _realvec(M: np.ndarray) -> np.ndarray:
    return np.concatenate([M.real.ravel(), M.imag.ravel()])


def _span_residual(first: list[np.ndarray], second: list[np.ndarray]) -> float:
    """Largest relative distance between either span and the other's projection."""
    if not first or not second:
        return np.inf
    Q1 = np.linalg.qr(np.column_stack([_realvec(B) for B in first]))[0]
    Q2 = np.linalg.qr(np.column_stack([_realvec(B) for B in second]))[0]
    worst = 0.0
    for Q, other in ((Q1, second), (Q2, first)):
        for B in other:
            v = _realvec(B)
            resid = np.linalg.norm(v - Q @ (Q.T @ v)) / np.linalg.norm(v)
            worst = max(worst, float(resid))
    return worst


def solve_metric_space(H, tol: float = 1e-10) -> MetricFamily:
    """Compute the Hermitian solution family of ``H^dagger X = X H``.

    Parameters
    ----------
    H : array_like
        Square Hamiltonian with (numerically) real spectrum.
    tol : float
        Relative threshold used for the spectral-reality precondition, the
        null-space singular-value cut and the degeneracy gap test.

    Returns
    -------
    MetricFamily
        Null-space basis plus, for nondegenerate spectra, the spectral
        projector basis with all-ones default weights.

    Raises
    ------
    ComplexSpectrum
        When ``max |Im lambda| > tol * ||H||``; no positive-definite solution
        can exist in that phase.
    DefectiveMatrix
        Propagated from the eigensolver at an exceptional point.
    SpanMismatch
        When the two independently computed spans disagree beyond 1e-8.

    Warns with DegenerateSpectrumWarning and skips the spectral path when the
    smallest eigenvalue gap falls below ``tol * ||H||``.
    """
    Hm = mc.as_square_matrix(H, "H")
    if tol <= 0:
        raise ValueError("tol must be positive")
    dim = Hm.shape[0]
    scale = mc.fro(Hm)

    spectral = mc.eig(Hm)
    max_imag = float(np.abs(spectral.eigenvalues.imag).max())
    if max_imag > tol * max(scale, 1e-300):
        raise ComplexSpectrum(
            f"max |Im eigenvalue| {max_imag:.3e} exceeds {tol:.1e} * ||H||"
        )

    # Null-space path: represent X by dim^2 real coordinates in a Frobenius
    # orthonormal Hermitian basis and split the image into (re, im) parts.
    herm = _hermitian_basis(dim)
    cols = [_realvec(Hm.conj().T @ E - E @ Hm) for E in herm]
    F = np.column_stack(cols)
    _, svals, Vt = np.linalg.svd(F)
    cut = tol * (svals[0] if svals.size else 0.0)
    null_coords = [Vt[k] for k in range(len(herm)) if k >= svals.size or svals[k] <= cut]
    oracle_basis = []
    for coord in null_coords:
        B = np.zeros((dim, dim), dtype=complex)
        for c, E in zip(coord, herm):
            B = B + c * E
        oracle_basis.append(B)

    degenerate = spectral.min_gap() < tol * max(scale, 1e-300)
    if degenerate:
        warnings.warn(
            "eigenvalue gap below tolerance; spectral metric path skipped",
            DegenerateSpectrumWarning,
            stacklevel=2,
        )
        return MetricFamily(
            dim=dim,
            basis=tuple(oracle_basis),
            oracle_basis=tuple(oracle_basis),
            spectral=None,
            kappa_default=np.ones(len(oracle_basis)),
            degenerate=True,
            span_residual=None,
        )

    projectors = [
        np.outer(spectral.left_vectors[:, n], spectral.left_vectors[:, n].conj())
        for n in range(dim)
    ]
    residual = _span_residual(oracle_basis, projectors)
    if residual > SPAN_AGREEMENT_TOL:
        raise SpanMismatch(
            f"null-space and spectral solution spans differ by {residual:.3e}"
        )
    return MetricFamily(
        dim=dim,
        basis=tuple(projectors),
        oracle_basis=tuple(oracle_basis),
        spectral=spectral,
        kappa_default=np.ones(dim),
        degenerate=False,
        span_residual=residual,
    )


def metric_from_weights(family: MetricFamily, kappa) -> np.ndarray:
    """Assemble ``Theta = sum_n kappa_n |L_n><L_n|`` from positive weights.

    Positive weights on the left-eigenvector projectors give a Hermitian
    positive-definite metric whenever the spectrum is real and nondegenerate.
    """
    if family.spectral is None:
        raise SpectralPathUnavailable(
            "no spectral projector basis (degenerate or skipped spectrum)"
        )
    k = np.asarray(kappa, dtype=float).reshape(-1)
    if k.shape[0] != len(family.basis):
        raise DimensionMismatch(
            f"{k.shape[0]} weights for a basis of size {len(family.basis)}"
        )
    if np.any(k <= 0.0) or not np.all(np.isfinite(k)):
        raise NonPositiveWeight("all metric weights must be finite and > 0")
    Theta = np.zeros((family.dim, family.dim), dtype=complex)
    for kn, B in zip(k, family.basis):
        Theta = Theta + kn * B
    return (Theta + Theta.conj().T) / 2.0


def check_quasi_hermitian(L, Theta) -> float:
    """Relative residual ``||L^dagger Theta - Theta L|| / (||L|| ||Theta||)``.

    Frobenius norms throughout; returns 0 for vanishing operands.  The caller
    compares the result against its own tolerance.
    """
    Lm = mc.as_square_matrix(L, "L")
    Tm = mc.as_square_matrix(Theta, "Theta")
    if Lm.shape != Tm.shape:
        raise DimensionMismatch(f"operator {Lm.shape} vs metric {Tm.shape}")
    denom = mc.fro(Lm) * mc.fro(Tm)
    if denom == 0.0:
        return 0.0
    return mc.fro(Lm.conj().T @ Tm - Tm @ Lm) / denom


def physical_inner_product(psi_a, psi_b, Theta) -> complex:
    """Metric-weighted inner product ``<psi_a|Theta|psi_b>``.

    Conjugate-linear in the first argument.  For a positive-definite metric
    the diagonal value ``<psi|Theta|psi>`` is real positive for psi != 0.
    """
    Tm = mc.as_square_matrix(Theta, "Theta")
    a = mc.as_vector(psi_a, Tm.shape[0], "psi_a")
    b = mc.as_vector(psi_b, Tm.shape[0], "psi_b")
    return complex(np.vdot(a, Tm @ b))
