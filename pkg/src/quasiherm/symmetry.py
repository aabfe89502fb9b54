"""Antilinear-symmetry residuals.

Time reversal acts as entrywise complex conjugation in the computational
basis, which turns every antilinear commutation relation into a linear
matrix identity with a single explicit conjugation.  All checks return
relative residuals (Frobenius norms) and never enforce their preconditions
beyond dimension agreement; generalized parities in particular need not be
involutive, so ``involution_defect`` reports that property separately.
"""

from __future__ import annotations

import numpy as np

from . import matrixcore as mc
from .errors import DimensionMismatch


def _pair(A, B, name_a: str, name_b: str):
    Am = mc.as_square_matrix(A, name_a)
    Bm = mc.as_square_matrix(B, name_b)
    if Am.shape != Bm.shape:
        raise DimensionMismatch(f"{name_a} {Am.shape} vs {name_b} {Bm.shape}")
    return Am, Bm


def check_pt_symmetry(H, P) -> float:
    """Residual of ``H (P K) = (P K) H`` with K the entrywise conjugation.

    Evaluated as ``||H P - P conj(H)|| / (||H|| ||P||)``; zero iff the
    antilinear commutator vanishes on every vector.
    """
    Hm, Pm = _pair(H, P, "H", "P")
    num = mc.fro(Hm @ Pm - Pm @ np.conj(Hm))
    denom = mc.fro(Hm) * mc.fro(Pm)
    return 0.0 if denom == 0.0 else num / denom


def check_pct_symmetry(H, P, C) -> float:
    """Residual of the conjugate-form relation ``H^dagger P C = P C H``.

    Zero iff the product PC intertwines H with its adjoint; when PC equals an
    admissible metric this is exactly the hidden-Hermiticity condition, but
    the check itself requires no positivity of PC.
    """
    Hm, Pm = _pair(H, P, "H", "P")
    Cm = mc.as_square_matrix(C, "C")
    if Cm.shape != Hm.shape:
        raise DimensionMismatch(f"C {Cm.shape} vs H {Hm.shape}")
    W = Pm @ Cm
    num = mc.fro(Hm.conj().T @ W - W @ Hm)
    denom = mc.fro(Hm) * mc.fro(W)
    return 0.0 if denom == 0.0 else num / denom


def check_pseudo_hermiticity(H, P) -> float:
    """Residual of ``H^dagger P = P H``.

    The depth-2 chain formalism never requires this condition; the parity
    there is a free parameter with no prescribed relation to H.  The check is
    provided for comparing model families against the literature.
    """
    Hm, Pm = _pair(H, P, "H", "P")
    num = mc.fro(Hm.conj().T @ Pm - Pm @ Hm)
    denom = mc.fro(Hm) * mc.fro(Pm)
    return 0.0 if denom == 0.0 else num / denom


def involution_defect(P) -> float:
    """Relative residual of ``P^2 = I`` (reported, never enforced)."""
    Pm = mc.as_square_matrix(P, "P")
    ident = np.eye(Pm.shape[0])
    num = mc.fro(Pm @ Pm - ident)
    denom = mc.fro(Pm) ** 2
    return 0.0 if denom == 0.0 else num / denom
