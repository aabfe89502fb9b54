"""Observable chains built on a factorized metric.

Given a Hamiltonian H, an admissible metric Theta and Hermitian invertible
operator parameters M_1 ... M_{N-1}, the chain assembles the observable
ladder

    Lambda_0 = I,
    Lambda_k = M_k^-1 Theta      (k = 1 ... N-1),
    Lambda_N = Theta,
    Lambda_{N+1} = H,

and extracts the metric factors Z_k = Lambda_k Lambda_{k-1}^-1, so that
Theta = Z_N Z_{N-1} ... Z_1 holds by construction.  The parameters then
coincide with the suffix products M_k = Z_N ... Z_{k+1}, which is what makes
every ladder relation an identity for Hermitian parameters.

``verify_chain`` and ``verify_theorem1`` recompute everything from the
factors alone, so they act as independent checks rather than restating the
construction.

Parameter order: ``params[0]`` is the deepest parameter (the one inverted in
Lambda_1) and ``params[-1]`` equals Z_N.  Worked N = 4 example: with
``params = (M_1, M_2, M_3)`` the observables are Lambda_1 = M_1^-1 Theta,
Lambda_2 = M_2^-1 Theta, Lambda_3 = M_3^-1 Theta, and the factors satisfy
Z_4 = M_3, Z_4 Z_3 = M_2, Z_4 Z_3 Z_2 = M_1, Z_4 Z_3 Z_2 Z_1 = Theta.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matrixcore as mc
from .dieudonne import check_quasi_hermitian
from .errors import (
    DimensionMismatch,
    FactorizationMismatch,
    InputFormatError,
    NotHermitianParameter,
    NotPositiveDefinite,
    QuasiHermiticityViolation,
    SingularMatrix,
    SingularParameter,
    WrongN,
)

#: intertwining-residual gate applied to (H, Theta) before building anything
QH_GATE = 1e-10
#: relative Hermitian-defect gate for operator parameters
HERM_GATE = 1e-12
#: relative tolerance for the factor-recomposition invariant
RECOMPOSE_TOL = 1e-9


@dataclass(frozen=True)
class Relation:
    """One named residual compared against a tolerance."""

    name: str
    residual: float
    passed: bool

    def to_json(self) -> dict:
        return {"relation": self.name, "residual": self.residual, "pass": self.passed}


@dataclass(frozen=True)
class VerificationReport:
    """Named residuals for a batch of checked relations."""

    relations: tuple[Relation, ...]
    tol: float
    overall_pass: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "overall_pass", all(r.passed for r in self.relations)
        )

    def residual(self, name: str) -> float:
        for r in self.relations:
            if r.name == name:
                return r.residual
        raise KeyError(name)

    def failed(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.relations if not r.passed)

    def to_json(self) -> list[dict]:
        return [r.to_json() for r in self.relations]


@dataclass(frozen=True)
class ObservableChain:
    """Factorized metric with its closed-form observable ladder.

    ``observables`` runs Lambda_0 ... Lambda_{N+1}; ``factors`` runs
    Z_1 ... Z_N.  Instances are immutable; verification of distinct chains
    can proceed concurrently.
    """

    N: int
    dim: int
    H: np.ndarray
    Theta: np.ndarray
    params: tuple[np.ndarray, ...]
    observables: tuple[np.ndarray, ...]
    factors: tuple[np.ndarray, ...]

    def factor_product(self) -> np.ndarray:
        """Recompose Z_N Z_{N-1} ... Z_1."""
        out = np.eye(self.dim, dtype=complex)
        for Z in self.factors:
            out = Z @ out
        return out

    def suffix_products(self) -> list[np.ndarray]:
        """Suffix products S_k = Z_N ... Z_{k+1} for k = 0 ... N-1.

        S_0 is the full recomposed metric and S_{N-1} = Z_N; for a valid
        chain S_k coincides with the parameter M_k (with M_0 = Theta).
        """
        out = [np.eye(self.dim, dtype=complex)]
        for Z in reversed(self.factors):
            out.append(out[-1] @ Z)
        out = out[1:]          # drop the empty product
        out.reverse()          # S_0 first
        return out

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "dim": self.dim,
            "H": mc.matrix_to_json(self.H),
            "Theta": mc.matrix_to_json(self.Theta),
            "params": [mc.matrix_to_json(M) for M in self.params],
            "observables": [mc.matrix_to_json(L) for L in self.observables],
            "factors": [mc.matrix_to_json(Z) for Z in self.factors],
        }

    @staticmethod
    def from_json(obj) -> "ObservableChain":
        try:
            N = int(obj["N"])
            dim = int(obj["dim"])
            H = mc.matrix_from_json(obj["H"])
            Theta = mc.matrix_from_json(obj["Theta"])
            params = tuple(mc.matrix_from_json(m) for m in obj["params"])
            observables = tuple(mc.matrix_from_json(m) for m in obj["observables"])
            factors = tuple(mc.matrix_from_json(m) for m in obj["factors"])
        except (KeyError, TypeError) as exc:
            raise InputFormatError(f"bad chain object: {exc}") from exc
        if len(observables) != N + 2 or len(factors) != N or len(params) != N - 1:
            raise InputFormatError("chain object has inconsistent sequence lengths")
        if any(M.shape != (dim, dim) for M in (H, Theta) + params + observables + factors):
            raise InputFormatError("chain object has inconsistent matrix dimensions")
        return ObservableChain(N, dim, H, Theta, params, observables, factors)


def _require_hermitian(M: np.ndarray, what: str) -> None:
    defect = mc.hermitian_defect(M)
    if defect > HERM_GATE * max(1.0, mc.entry_norm(M)):
        raise NotHermitianParameter(f"{what} has Hermitian defect {defect:.3e}")


def _require_positive_metric(Theta: np.ndarray) -> None:
    tol = 1e-12 * max(1.0, mc.entry_norm(Theta))
    positive, lam_min = mc.is_positive_definite(Theta, tol)
    if not positive:
        raise NotPositiveDefinite(f"metric has smallest eigenvalue {lam_min:.3e}")


def lemma1_observable(M, Theta) -> np.ndarray:
    """Eligible observable ``Lambda = M Theta`` for Hermitian M.

    Hermiticity of M is the whole requirement: the product is then
    automatically quasi-Hermitian with respect to Theta, which this function
    re-checks after the fact.
    """
    Mm = mc.as_square_matrix(M, "M")
    Tm = mc.as_square_matrix(Theta, "Theta")
    if Mm.shape != Tm.shape:
        raise DimensionMismatch(f"parameter {Mm.shape} vs metric {Tm.shape}")
    _require_hermitian(Mm, "observable parameter")
    _require_positive_metric(Tm)
    Lam = Mm @ Tm
    residual = check_quasi_hermitian(Lam, Tm)
    if residual > QH_GATE:
        raise QuasiHermiticityViolation(
            f"post-hoc check failed with residual {residual:.3e}"
        )
    return Lam


def build_chain(H, Theta, params) -> ObservableChain:
    """Assemble the observable ladder and extract the metric factors.

    Parameters
    ----------
    H : array_like
        Hamiltonian, quasi-Hermitian with respect to ``Theta`` (gated at
        residual 1e-10).
    Theta : array_like
        Hermitian positive-definite metric.
    params : sequence of array_like
        N-1 Hermitian invertible operator parameters, deepest first (the
        parameter inverted in Lambda_1) and ending with Z_N.

    The factors are derived as Z_k = Lambda_k Lambda_{k-1}^-1 rather than
    supplied, which makes the whole consistency ladder hold by construction
    and keeps ``verify_chain`` an independent check.
    """
    Hm = mc.as_square_matrix(H, "H")
    Tm = mc.as_square_matrix(Theta, "Theta")
    if Hm.shape != Tm.shape:
        raise DimensionMismatch(f"H {Hm.shape} vs Theta {Tm.shape}")
    dim = Hm.shape[0]
    Ms = [mc.as_square_matrix(M, f"params[{i}]") for i, M in enumerate(params)]
    for i, M in enumerate(Ms):
        if M.shape != (dim, dim):
            raise DimensionMismatch(f"params[{i}] has shape {M.shape}")
        _require_hermitian(M, f"params[{i}]")
    _require_positive_metric(Tm)
    qh = check_quasi_hermitian(Hm, Tm)
    if qh > QH_GATE:
        raise QuasiHermiticityViolation(
            f"H fails the intertwining relation for Theta (residual {qh:.3e})"
        )

    N = len(Ms) + 1
    observables = [np.eye(dim, dtype=complex)]
    for i, M in enumerate(Ms):
        try:
            observables.append(mc.inverse(M) @ Tm)
        except SingularMatrix as exc:
            raise SingularParameter(f"params[{i}] is numerically singular") from exc
    observables.append(Tm)
    observables.append(Hm)

    factors = []
    for k in range(1, N + 1):
        factors.append(observables[k] @ mc.inverse(observables[k - 1]))

    chain = ObservableChain(
        N=N,
        dim=dim,
        H=Hm,
        Theta=Tm,
        params=tuple(Ms),
        observables=tuple(observables),
        factors=tuple(factors),
    )
    recompose = mc.fro(chain.factor_product() - Tm) / mc.fro(Tm)
    if recompose > RECOMPOSE_TOL:
        raise FactorizationMismatch(
            f"factor product misses the metric by {recompose:.3e}"
        )
    return chain


def _rel(name: str, residual: float, tol: float) -> Relation:
    return Relation(name, float(residual), bool(residual <= tol))


def _ladder_label(k: int, N: int) -> str:
    """Equation tag for the k-th intertwining rung at depth N."""
    if N == 2:
        return "able2"
    if N == 3:
        return {1: "bable3", 2: "bable2"}[k]
    if k == 1:
        return "deble4"
    if k == N - 1:
        return "deble3b"
    if k == 2:
        return "deble4b"
    if k == N - 2:
        return "deble3"
    return f"deble-mid-k{k}"          # unnamed middle rungs, N >= 7 only


def _hamiltonian_label(N: int) -> str:
    return {2: "able3", 3: "bable4"}.get(N, "deblesep")


def _hermiticity_label(N: int) -> str:
    return {2: "able1", 3: "bable1"}.get(N, "deble1")


def verify_chain(chain: ObservableChain, tol: float) -> VerificationReport:
    """Check every consistency relation of the factor ladder.

    All quantities are recomputed from ``chain.factors`` (the metric as the
    full factor product), so a corrupted factor flips exactly the relations
    in which it appears.  Relation names are the source equation tags:
    able3/able2/able1 at N = 2, bable4...bable1 at N = 3, and the deble
    family otherwise, plus one Hermiticity entry per proper suffix product.
    """
    N = chain.N
    factors = chain.factors
    suffixes = chain.suffix_products()
    relations = []

    product = suffixes[0]                # Z_N ... Z_1
    num = mc.fro(chain.H.conj().T @ product - product @ chain.H)
    relations.append(
        _rel(_hamiltonian_label(N), num / (mc.fro(chain.H) * mc.fro(product)), tol)
    )

    for k in range(1, N):
        S = suffixes[k]
        Z = factors[k - 1]
        num = mc.fro(Z.conj().T @ S - S @ Z)
        relations.append(
            _rel(_ladder_label(k, N), num / (mc.fro(Z) * mc.fro(S)), tol)
        )

    ZN = factors[-1]
    relations.append(
        _rel(_hermiticity_label(N), mc.fro(ZN - ZN.conj().T) / mc.fro(ZN), tol)
    )

    # Hermiticity cascade of the suffix products Z_N .. Z_{j+1} with
    # j < N-1 (the j = N-1 entry is the factor Hermiticity above).
    for j in range(N - 1):
        S = suffixes[j]
        relations.append(
            _rel(
                f"herm[Z{N}..Z{j + 1}]",
                mc.fro(S - S.conj().T) / mc.fro(S),
                tol,
            )
        )

    return VerificationReport(tuple(relations), float(tol))


def verify_theorem1(chain: ObservableChain, tol: float) -> VerificationReport:
    """Check the observable ladder against its defining products.

    For each k = 1 ... N the report carries the quasi-Hermiticity residual of
    Lambda_k and the distance between Lambda_k and the recomposed product
    Z_k ... Z_1; the intermediate identities Lambda_k^dagger M_k = Theta
    (with M_k the suffix products, M_0 the recomposed metric) are included
    for k = 0 ... N-1.
    """
    N = chain.N
    Theta = chain.Theta
    suffixes = chain.suffix_products()
    relations = []

    running = np.eye(chain.dim, dtype=complex)
    for k in range(1, N + 1):
        running = chain.factors[k - 1] @ running     # Z_k ... Z_1
        Lam = chain.observables[k]
        relations.append(
            _rel(f"qh[Lambda_{k}]", check_quasi_hermitian(Lam, Theta), tol)
        )
        relations.append(
            _rel(f"product[Lambda_{k}]", mc.fro(Lam - running) / mc.fro(Lam), tol)
        )

    for k in range(N):
        Lam = chain.observables[k]
        num = mc.fro(Lam.conj().T @ suffixes[k] - Theta)
        relations.append(_rel(f"metric-identity[k={k}]", num / mc.fro(Theta), tol))

    return VerificationReport(tuple(relations), float(tol))


def n3_named_operators(chain: ObservableChain) -> tuple[np.ndarray, np.ndarray]:
    """Quasiparity Q and renormalized charge R of a depth-3 chain.

    Recomputes Y_3 = Z_3 Z_2 from the factors and returns
    Q = Z_3^-1 Y_3 (equal to Z_2, not an observable in general) and
    R = Y_3^-1 Theta (equal to Z_1, always quasi-Hermitian).
    """
    if chain.N != 3:
        raise WrongN(f"defined for N = 3 chains, got N = {chain.N}")
    Z1, Z2, Z3 = chain.factors
    Y3 = Z3 @ Z2
    Q = mc.inverse(Z3) @ Y3
    R = mc.inverse(Y3) @ chain.Theta
    for got, want, what in ((Q, Z2, "Q"), (R, Z1, "R")):
        drift = mc.fro(got - want) / mc.fro(want)
        if drift > RECOMPOSE_TOL:
            raise FactorizationMismatch(f"{what} misses its factor by {drift:.3e}")
    return Q, R
