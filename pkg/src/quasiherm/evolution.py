"""Dual-pair time evolution and metric-weighted expectations.

The forward states obey ``i d/dt psi = H psi`` and are propagated with the
exact exponential ``exp(-i H t)``; the dual (metric-multiplied) states obey
the conjugate equation ``i d/dt psi'' = H^dagger psi''``.  When H is
quasi-Hermitian for the metric the two propagations intertwine exactly and
the weighted norm ``<psi|Theta|psi>`` is conserved, which is what
``norm_trajectory`` certifies.  Step integrators appear only in the test
suite as an independent oracle.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import matrixcore as mc
from .dieudonne import check_quasi_hermitian, physical_inner_product
from .errors import (
    BadRange,
    DimensionMismatch,
    NotPositiveDefinite,
    QuasiHermiticityViolation,
    ZeroState,
)

#: intertwining residual above which dual propagation refuses to run
QH_GATE = 1e-10


@dataclass(frozen=True)
class TrajectoryRecord:
    """Sampled evolution: states, dual states and weighted norms.

    ``states[k]`` is psi(times[k]); ``dual_states[k]`` its metric-multiplied
    partner; ``norms[k] = <psi|Theta|psi>``.  ``drift`` is the largest
    relative deviation of the norm from its initial value and
    ``dual_residual`` the worst relative distance between the dual states
    and ``Theta @ states`` (both are certificates, not enforced bounds: a
    deliberately wrong metric shows up as a large drift here).
    """

    times: np.ndarray
    states: np.ndarray
    dual_states: np.ndarray
    norms: np.ndarray
    drift: float
    dual_residual: float

    def to_json(self) -> dict:
        return {
            "times": [float(t) for t in self.times],
            "norms": [float(x) for x in self.norms],
            "states": [mc.vector_to_json(v) for v in self.states],
            "dual_states": [mc.vector_to_json(v) for v in self.dual_states],
            "drift": self.drift,
            "dual_residual": self.dual_residual,
        }

    def to_csv(self) -> str:
        dim = self.states.shape[1]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["t", "norm"]
        for j in range(dim):
            header += [f"re_psi{j}", f"im_psi{j}"]
        writer.writerow(header)
        for t, n, psi in zip(self.times, self.norms, self.states):
            row = [repr(float(t)), repr(float(n))]
            for x in psi:
                row += [repr(float(x.real)), repr(float(x.imag))]
            writer.writerow(row)
        return buf.getvalue()


def propagate(H, psi0, t: float) -> np.ndarray:
    """Forward state ``exp(-i H t) psi0``."""
    Hm = mc.as_square_matrix(H, "H")
    psi = mc.as_vector(psi0, Hm.shape[0], "psi0")
    return mc.mat_exp(-1j * float(t) * Hm) @ psi


def propagate_dual(H, Theta, psi0, t: float) -> np.ndarray:
    """Dual state ``exp(-i H^dagger t) Theta psi0``.

    Requires the intertwining relation to hold (residual at most 1e-10);
    the result then equals ``Theta @ propagate(H, psi0, t)``.
    """
    Hm = mc.as_square_matrix(H, "H")
    Tm = mc.as_square_matrix(Theta, "Theta")
    if Hm.shape != Tm.shape:
        raise DimensionMismatch(f"H {Hm.shape} vs Theta {Tm.shape}")
    residual = check_quasi_hermitian(Hm, Tm)
    if residual > QH_GATE:
        raise QuasiHermiticityViolation(
            f"intertwining residual {residual:.3e} exceeds {QH_GATE:.0e}"
        )
    psi = mc.as_vector(psi0, Hm.shape[0], "psi0")
    return mc.mat_exp(-1j * float(t) * Hm.conj().T) @ (Tm @ psi)


def norm_trajectory(H, Theta, psi0, times, check: bool = True) -> TrajectoryRecord:
    """Sample the dual evolution pair and the weighted norm over ``times``.

    With ``check=True`` the (H, Theta) pair is gated like ``propagate_dual``.
    Passing ``check=False`` runs the same computation on a non-intertwining
    pair for diagnostic purposes, e.g. to expose the norm drift produced by
    the naive identity metric on a genuinely non-Hermitian Hamiltonian.
    """
    Hm = mc.as_square_matrix(H, "H")
    Tm = mc.as_square_matrix(Theta, "Theta")
    if Hm.shape != Tm.shape:
        raise DimensionMismatch(f"H {Hm.shape} vs Theta {Tm.shape}")
    psi = mc.as_vector(psi0, Hm.shape[0], "psi0")
    ts = np.asarray(times, dtype=float).reshape(-1)
    if ts.size < 1 or np.any(np.diff(ts) <= 0):
        raise BadRange("times must be a nonempty strictly increasing sequence")
    positive, lam_min = mc.is_positive_definite(
        Tm, 1e-12 * max(1.0, mc.entry_norm(Tm))
    )
    if not positive:
        raise NotPositiveDefinite(f"metric smallest eigenvalue {lam_min:.3e}")
    if check:
        residual = check_quasi_hermitian(Hm, Tm)
        if residual > QH_GATE:
            raise QuasiHermiticityViolation(
                f"intertwining residual {residual:.3e} exceeds {QH_GATE:.0e}"
            )

    Hdag = Hm.conj().T
    theta_psi = Tm @ psi
    states, duals, norms = [], [], []
    for t in ts:
        phi = mc.mat_exp(-1j * t * Hm) @ psi
        states.append(phi)
        duals.append(mc.mat_exp(-1j * t * Hdag) @ theta_psi)
        norms.append(physical_inner_product(phi, phi, Tm).real)
    states = np.array(states)
    duals = np.array(duals)
    norms = np.array(norms)

    drift = float(np.abs(norms - norms[0]).max() / abs(norms[0]))
    worst = 0.0
    for phi, chi in zip(states, duals):
        denom = mc.fro(Tm) * max(np.linalg.norm(phi), 1e-300)
        worst = max(worst, float(np.linalg.norm(chi - Tm @ phi) / denom))
    return TrajectoryRecord(ts, states, duals, norms, drift, worst)


def expectation(L, Theta, psi) -> complex:
    """Weighted expectation ``<psi|Theta L|psi> / <psi|Theta|psi>``.

    Real (to rounding) whenever L is quasi-Hermitian for the
    positive-definite metric; a complex value is the diagnostic signature of
    a non-observable L.
    """
    Lm = mc.as_square_matrix(L, "L")
    Tm = mc.as_square_matrix(Theta, "Theta")
    if Lm.shape != Tm.shape:
        raise DimensionMismatch(f"L {Lm.shape} vs Theta {Tm.shape}")
    v = mc.as_vector(psi, Tm.shape[0], "psi")
    if np.linalg.norm(v) == 0.0:
        raise ZeroState("expectation needs a nonzero state")
    return complex(physical_inner_product(v, Lm @ v, Tm) / physical_inner_product(v, v, Tm))
