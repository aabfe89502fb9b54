"""Dense complex matrix primitives.

Everything in this package manipulates plain ``numpy.ndarray`` objects of
dtype complex128.  This module owns the validation helpers, the
biorthogonal eigendecomposition, inversion, the matrix exponential and the
JSON interchange format used by every other module and the CLI.

All functions are pure: inputs are never mutated and no module state exists,
so concurrent calls from independent tasks are safe.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DefectiveMatrix,
    DimensionMismatch,
    InputFormatError,
    NotHermitian,
    SingularMatrix,
)

#: raw left/right overlap below which a matrix is declared non-diagonalizable
DEFECT_OVERLAP_TOL = 1e-12
#: pivots below this fraction of the max-entry norm abort the elimination
PIVOT_RTOL = 1e-14
#: eigenvector condition number above which mat_exp falls back to Pade
_EXP_EIG_COND_LIMIT = 1e8


def as_square_matrix(A, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex128 array with finite entries."""
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M.real)) or not np.all(np.isfinite(M.imag)):
        raise InputFormatError(f"{name} contains non-finite entries")
    return M


def as_vector(v, dim: int | None = None, name: str = "vector") -> np.ndarray:
    """Coerce to a 1-D complex128 array, optionally of prescribed length."""
    x = np.asarray(v, dtype=complex).reshape(-1)
    if dim is not None and x.shape[0] != dim:
        raise DimensionMismatch(f"{name} has length {x.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(x.real)) or not np.all(np.isfinite(x.imag)):
        raise InputFormatError(f"{name} contains non-finite entries")
    return x


def entry_norm(A) -> float:
    """Largest entry magnitude (the norm used for Hermitian defects and pivots)."""
    A = np.asarray(A)
    return float(np.abs(A).max()) if A.size else 0.0


def fro(A) -> float:
    """Frobenius norm (the norm used for all relative residuals)."""
    return float(np.linalg.norm(np.asarray(A)))


def hermitian_defect(A) -> float:
    """Max-entry norm of ``A - A^dagger``; zero iff A is exactly Hermitian."""
    M = as_square_matrix(A)
    return entry_norm(M - M.conj().T)


def is_hermitian(A, tol: float = 1e-12) -> bool:
    """True when the Hermitian defect is within ``tol`` of the matrix scale."""
    M = as_square_matrix(A)
    return hermitian_defect(M) <= tol * max(1.0, entry_norm(M))


@dataclass(frozen=True)
class SpectralData:
    """Eigendecomposition with a biorthonormal left/right vector pair.

    ``right_vectors`` holds the right eigenvectors as columns ``|R_n>`` with
    unit 2-norm; ``left_vectors`` holds columns ``|L_n>`` scaled so that
    ``<L_m|R_n> = delta_mn``.  ``condition_estimate`` is the 2-norm condition
    number of the right eigenvector matrix.
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray
    condition_estimate: float

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        """Reassemble ``sum_n lambda_n |R_n><L_n|``."""
        return (self.right_vectors * self.eigenvalues) @ self.left_vectors.conj().T

    def min_gap(self) -> float:
        """Smallest distance between consecutive sorted eigenvalues."""
        if self.dim < 2:
            return np.inf
        return float(np.abs(np.diff(self.eigenvalues)).min())


def eig(A) -> SpectralData:
    """Eigendecompose with deterministic ordering and biorthonormal bases.

    Eigenvalues are sorted ascending by (real, imaginary) part.  Right
    eigenvectors get unit 2-norm and a fixed gauge (largest-magnitude entry
    real positive); left vectors are the rows of the inverted right basis,
    so biorthonormality holds to rounding by construction.

    Raises
    ------
    DefectiveMatrix
        When the raw overlap ``<L_n|R_n>`` of the unit-normalized pair falls
        below ``DEFECT_OVERLAP_TOL``, which signals a (numerically)
        non-diagonalizable input such as an exceptional point.
    """
    M = as_square_matrix(A)
    w, R = np.linalg.eig(M)
    order = np.lexsort((w.imag, w.real))
    w = w[order]
    R = R[:, order]
    R = R / np.linalg.norm(R, axis=0)
    for n in range(M.shape[0]):
        pivot = R[np.argmax(np.abs(R[:, n])), n]
        R[:, n] *= np.conj(pivot) / abs(pivot)
    try:
        Rinv = inverse(R)
    except SingularMatrix as exc:
        raise DefectiveMatrix(
            "right eigenvector basis is numerically singular"
        ) from exc
    # Unit-normalized left/right overlaps are 1/||row_n(R^-1)||; a vanishing
    # overlap before rescaling marks a collapsing eigenvector pair.
    raw_overlap = 1.0 / np.linalg.norm(Rinv, axis=1)
    if np.any(raw_overlap < DEFECT_OVERLAP_TOL):
        raise DefectiveMatrix(
            f"left/right overlap {raw_overlap.min():.3e} below "
            f"{DEFECT_OVERLAP_TOL:.0e}: input is defective"
        )
    cond = float(np.linalg.norm(R, 2) * np.linalg.norm(Rinv, 2))
    return SpectralData(w, R, Rinv.conj().T, cond)


def is_positive_definite(A, tol: float) -> tuple[bool, float]:
    """Test positive definiteness of a Hermitian matrix.

    Returns ``(flag, lambda_min)`` where ``lambda_min`` is the smallest
    eigenvalue of the Hermitian symmetrization ``(A + A^dagger)/2`` and the
    flag is true iff it exceeds ``tol``.

    Raises NotHermitian when the Hermitian defect of A itself exceeds ``tol``.
    """
    M = as_square_matrix(A)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if hermitian_defect(M) > tol:
        raise NotHermitian(
            f"Hermitian defect {hermitian_defect(M):.3e} exceeds tol {tol:.1e}"
        )
    lam_min = float(np.linalg.eigvalsh((M + M.conj().T) / 2.0)[0])
    return lam_min > tol, lam_min


def mat_exp(A) -> np.ndarray:
    """Matrix exponential ``exp(A)``.

    Uses the eigendecomposition when the input is diagonalizable with a
    well-conditioned eigenvector basis, and otherwise falls back to the
    scaling-and-squaring Pade evaluation (order-13 accuracy class).
    """
    M = as_square_matrix(A)
    try:
        sd = eig(M)
        if sd.condition_estimate <= _EXP_EIG_COND_LIMIT:
            return (sd.right_vectors * np.exp(sd.eigenvalues)) @ sd.left_vectors.conj().T
    except (DefectiveMatrix, np.linalg.LinAlgError):
        pass
    return scipy.linalg.expm(M)


def inverse(A) -> np.ndarray:
    """Invert by LU elimination with partial pivoting.

    Raises SingularMatrix when any pivot magnitude falls below
    ``PIVOT_RTOL`` times the max-entry norm of A.
    """
    M = as_square_matrix(A)
    scale = entry_norm(M)
    with warnings.catch_warnings():
        # exact zero pivots are reported by our own check below
        warnings.simplefilter("ignore")
        lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.size == 0 or pivots.min() <= PIVOT_RTOL * scale:
        raise SingularMatrix(
            f"pivot {pivots.min() if pivots.size else 0.0:.3e} below "
            f"{PIVOT_RTOL:.0e} * {scale:.3e}"
        )
    ident = np.eye(M.shape[0], dtype=complex)
    return scipy.linalg.lu_solve((lu, piv), ident, check_finite=False)


# ---------------------------------------------------------------------------
# JSON interchange: {"dim": n, "re": [n*n reals], "im": [n*n reals]} row-major.
# Round-trips bit-exactly for every finite 64-bit float.
# ---------------------------------------------------------------------------

def matrix_to_json(A) -> dict:
    """Serialize a square complex matrix to the shared interchange dict."""
    M = as_square_matrix(A)
    return {
        "dim": int(M.shape[0]),
        "re": [float(x) for x in M.real.ravel()],
        "im": [float(x) for x in M.imag.ravel()],
    }


def matrix_from_json(obj) -> np.ndarray:
    """Parse the shared interchange dict back into a complex matrix."""
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"bad matrix object: {exc}") from exc
    if dim <= 0 or re.shape != (dim * dim,) or im.shape != (dim * dim,):
        raise InputFormatError(
            f"matrix object dim {dim} inconsistent with array lengths "
            f"{re.size}/{im.size}"
        )
    M = (re + 1j * im).reshape(dim, dim)
    return as_square_matrix(M)


def vector_to_json(v) -> dict:
    """Serialize a complex vector ({"dim": n, "re": [...], "im": [...]})."""
    x = as_vector(v)
    return {
        "dim": int(x.shape[0]),
        "re": [float(t) for t in x.real],
        "im": [float(t) for t in x.imag],
    }


def vector_from_json(obj) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"bad vector object: {exc}") from exc
    if dim <= 0 or re.shape != (dim,) or im.shape != (dim,):
        raise InputFormatError("vector object dim inconsistent with array lengths")
    return as_vector(re + 1j * im)


def load_matrix(path) -> np.ndarray:
    """Read a matrix interchange JSON file."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputFormatError(f"cannot read matrix file {path}: {exc}") from exc
    return matrix_from_json(obj)


def load_vector(path) -> np.ndarray:
    """Read a vector interchange JSON file."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputFormatError(f"cannot read vector file {path}: {exc}") from exc
    return vector_from_json(obj)
