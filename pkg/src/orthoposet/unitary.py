"""Orthoscalar (chi-)representations: balancing flow, polar extraction, checks.

A chi-representation is a choice of inner product under which the
orthogonal projections onto the subspaces satisfy ``sum chi_i P_i = 1``.
We search for it as a basis change ``A`` (metric ``G = A^* A``) by the
fixed-point iteration ``A <- S^(-t/2) A`` with ``S = sum chi_i P_{A V_i}``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg

from .exact import Subspace, to_complex
from .poset import Poset
from .representation import SubspaceRep

log = logging.getLogger(__name__)

PROJ_TOL = 1e-10


class UnitarizationError(ValueError):
    pass


def basis_columns(s: Subspace) -> np.ndarray:
    """Basis of ``s`` as the columns of a complex ``n x d`` array."""
    if s.dim == 0:
        return np.zeros((s.ambient_dim, 0), dtype=complex)
    return np.array([[to_complex(x) for x in row] for row in s.basis], dtype=complex).T


def exact_to_array(m) -> np.ndarray:
    return np.array([[to_complex(x) for x in row] for row in m], dtype=complex)


def orthogonal_projection(cols: np.ndarray) -> np.ndarray:
    """Standard-metric projection onto the column span of ``cols`` (full column rank)."""
    n = cols.shape[0]
    if cols.shape[1] == 0:
        return np.zeros((n, n), dtype=complex)
    q, _ = np.linalg.qr(cols)
    return q @ q.conj().T


def check_metric(G: np.ndarray) -> np.ndarray:
    G = np.asarray(G, dtype=complex)
    if not np.allclose(G, G.conj().T, atol=1e-12 * max(1.0, np.abs(G).max())):
        raise UnitarizationError("metric is not Hermitian")
    try:
        np.linalg.cholesky(G)
    except np.linalg.LinAlgError as exc:
        raise UnitarizationError("metric is not positive definite") from exc
    return G


def projections_from_metric(r: SubspaceRep, G) -> dict:
    """``P_i = B (B^* G B)^{-1} B^* G``: the G-orthogonal projection onto ``V_i``."""
    G = check_metric(G)
    out = {}
    for a in r.poset.elements:
        B = basis_columns(r.spaces[a])
        if B.shape[1] == 0:
            out[a] = np.zeros_like(G)
            continue
        gram = B.conj().T @ G @ B
        try:
            out[a] = B @ np.linalg.solve(gram, B.conj().T @ G)
        except np.linalg.LinAlgError as exc:
            raise UnitarizationError(f"singular Gram block at {a!r}") from exc
    return out


def float_weight(chi, poset: Poset) -> dict:
    if not isinstance(chi, dict):
        chi = dict(zip(poset.elements, chi))
    return {a: float(Fraction(chi[a])) if not isinstance(chi[a], float) else chi[a] for a in poset.elements}


def weighted_sum(projections: dict, chi: dict) -> np.ndarray:
    it = iter(projections.values())
    first = next(it)
    total = np.zeros_like(first)
    for a, P in projections.items():
        total = total + chi[a] * P
    return total


def orthoscalar_residual(projections: dict, chi: dict) -> float:
    """Frobenius norm of ``sum chi_i P_i - 1``."""
    S = weighted_sum(projections, chi)
    return float(np.linalg.norm(S - np.eye(S.shape[0])))


@dataclass
class UnitaryRep:
    """Projections in orthonormal coordinates (``P_i = P_i^*``).

    ``transform`` maps the original coordinates of the underlying subspace
    representation to these; ``metric = transform^* transform``.
    """

    poset: Poset
    chi: dict
    projections: dict
    residual: float
    metric: np.ndarray | None = None
    transform: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return next(iter(self.projections.values())).shape[0]

    def invariant_errors(self) -> dict:
        """Worst idempotency, self-adjointness and containment defects."""
        idem = max(float(np.linalg.norm(P @ P - P)) for P in self.projections.values())
        herm = max(float(np.linalg.norm(P - P.conj().T)) for P in self.projections.values())
        cont = 0.0
        for a, b in self.poset.less:
            Pa, Pb = self.projections[a], self.projections[b]
            cont = max(cont, float(np.linalg.norm(Pb @ Pa - Pa)))
        return {"idempotency": idem, "self_adjointness": herm, "containment": cont}

    def trace_defect(self) -> float:
        return abs(sum(self.chi[a] * np.trace(P).real for a, P in self.projections.items()) - self.dim)


@dataclass
class FlowTrace:
    iterations: int = 0
    residual_history: list = field(default_factory=list)
    converged: bool = False
    status: str = "running"  # converged | not-stable | breakdown
    reason: str = ""


@dataclass
class FlowResult:
    unitary: UnitaryRep | None
    trace: FlowTrace

    @property
    def converged(self) -> bool:
        return self.trace.converged


def _balance_state(bases: dict, chi: dict, A: np.ndarray):
    projs = {a: orthogonal_projection(A @ B) for a, B in bases.items()}
    S = weighted_sum(projs, chi)
    S = (S + S.conj().T) / 2
    return projs, S, float(np.linalg.norm(S - np.eye(S.shape[0])))


def unitarize(
    r: SubspaceRep,
    chi,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    stall_window: int = 500,
    stall_improvement: float = 1e-14,
) -> FlowResult:
    """Run the damped balancing flow.

    Convergence is ``||S - 1||_F <= tol``.  The flow gives up as not stable
    when the best residual fails to improve by ``stall_improvement`` over
    ``stall_window`` consecutive iterations, or after ``max_iter``.  A
    non-normalised weight is rejected immediately (trace obstruction).
    """
    from .stability import check_normalization

    trace = FlowTrace()
    n = r.ambient_dim
    exact_chi = chi
    chi = float_weight(chi, r.poset)
    try:
        normalized = check_normalization(r, exact_chi)
    except (TypeError, ValueError):
        normalized = abs(sum(chi[a] * r.spaces[a].dim for a in r.poset.elements) - n) < 1e-12
    if not normalized:
        trace.status = "not-stable"
        trace.reason = "weight not normalised"
        return FlowResult(None, trace)
    bases = {a: basis_columns(r.spaces[a]) for a in r.poset.elements}
    A = np.eye(n, dtype=complex)
    projs, S, res = _balance_state(bases, chi, A)
    trace.residual_history.append(res)
    t = 1.0
    best, since_best = res, 0
    for it in range(max_iter):
        if res <= tol:
            trace.converged = True
            trace.status = "converged"
            break
        w, U = np.linalg.eigh(S)
        if w.min() <= 0:
            trace.status = "breakdown"
            trace.reason = "weighted projection sum is singular"
            log.warning("balancing flow: S not positive definite at iteration %d", it)
            return FlowResult(None, trace)
        while True:
            step = (U * w ** (-t / 2)) @ U.conj().T
            A_new = step @ A
            A_new /= abs(np.linalg.det(A_new)) ** (1.0 / n)
            projs_new, S_new, res_new = _balance_state(bases, chi, A_new)
            if res_new < res or t < 1e-12:
                break
            t /= 2
        trace.iterations = it + 1
        if res_new < res:
            A, projs, S, res = A_new, projs_new, S_new, res_new
            t = min(1.0, 2 * t)
        trace.residual_history.append(res)
        if best - res > stall_improvement:
            best, since_best = res, 0
        else:
            since_best += 1
            if since_best >= stall_window:
                trace.status = "not-stable"
                trace.reason = f"no improvement over {stall_window} iterations"
                return FlowResult(None, trace)
    else:
        if res > tol:
            trace.status = "not-stable"
            trace.reason = f"residual {res:.3e} after {max_iter} iterations"
            return FlowResult(None, trace)
        trace.converged = True
        trace.status = "converged"
    u = UnitaryRep(r.poset, chi, projs, res, metric=A.conj().T @ A, transform=A)
    return FlowResult(u, trace)


def unitary_from_exact(r: SubspaceRep, chi) -> UnitaryRep:
    """Standard-metric projections of ``r`` (no balancing)."""
    chi = float_weight(chi, r.poset)
    projs = {a: orthogonal_projection(basis_columns(r.spaces[a])) for a in r.poset.elements}
    n = r.ambient_dim
    return UnitaryRep(r.poset, chi, projs, orthoscalar_residual(projs, chi), np.eye(n), np.eye(n))


# ------------------------------------------------------------ equivalence extraction


@dataclass
class Extraction:
    phi: np.ndarray
    psi: np.ndarray
    diag: np.ndarray
    error: float


def intertwiner(u: UnitaryRep, u2: UnitaryRep, h) -> np.ndarray:
    """Express an exact map ``h: V -> V'`` in the orthonormal coordinates of ``u`` and ``u2``."""
    h = exact_to_array(h) if not isinstance(h, np.ndarray) else h
    return u2.transform @ h @ np.linalg.inv(u.transform)


def intertwining_defect(u: UnitaryRep, u2: UnitaryRep, g: np.ndarray) -> float:
    gi = np.linalg.inv(g)
    worst = 0.0
    for a in u.poset.elements:
        P, Q = u.projections[a], u2.projections[a]
        worst = max(worst, float(np.linalg.norm(gi @ Q @ g @ P - P)), float(np.linalg.norm(g @ P @ gi @ Q - Q)))
    return worst


def extract_unitary(u: UnitaryRep, u2: UnitaryRep, g, tol: float = 1e-6) -> Extraction:
    """Unitary factor of the polar decomposition ``g = phi psi D psi^*``.

    ``g`` must carry each ``U_i`` onto ``U'_i``; the error reported is
    ``max_i ||phi P_i phi^* - P'_i||_F``.
    """
    g = np.asarray(g, dtype=complex)
    if u.poset != u2.poset:
        raise UnitarizationError("representations of different posets")
    if np.linalg.cond(g) > 1e12:
        raise UnitarizationError("intertwiner is numerically singular")
    defect = intertwining_defect(u, u2, g)
    if defect > tol:
        raise UnitarizationError(f"g does not intertwine the representations (defect {defect:.2e})")
    phi, H = scipy.linalg.polar(g, side="right")
    d, psi = np.linalg.eigh((H + H.conj().T) / 2)
    err = max(
        float(np.linalg.norm(phi @ u.projections[a] @ phi.conj().T - u2.projections[a])) for a in u.poset.elements
    )
    return Extraction(phi, psi, d, err)


def diagonal_lemma_instance(u: UnitaryRep, u2: UnitaryRep, ex: Extraction) -> tuple[list, list, np.ndarray]:
    """``(P, Q, D)`` with ``P_i = psi^* phi^* P'_i phi psi`` and ``Q_i = psi^* P_i psi``."""
    psi, phi = ex.psi, ex.phi
    P = [psi.conj().T @ phi.conj().T @ u2.projections[a] @ phi @ psi for a in u.poset.elements]
    Q = [psi.conj().T @ u.projections[a] @ psi for a in u.poset.elements]
    return P, Q, ex.diag


HYPOTHESES_UNMET = "hypotheses-unmet"
CONCLUSION_HOLDS = "conclusion-holds"
PROJECTION_PART_ONLY = "projection-part-only"
COUNTEREXAMPLE = "counterexample"


@dataclass
class DiagonalLemmaReport:
    verdict: str
    hypothesis_defect: float
    projection_defect: float
    diagonal_spread: float


def lemma1_verify(P: list, Q: list, D, chi, tol: float = 1e-8) -> DiagonalLemmaReport:
    """Check the diagonal lemma on one instance.

    Hypotheses: ``sum chi_i P_i = sum chi_i Q_i`` and ``P_i D Q_i = D Q_i``.
    Conclusion: ``P_i = Q_i`` and ``D`` scalar.  When the projection part
    holds but ``D`` is not scalar the instance is degenerate (for example a
    single projection equal to the identity) and is reported separately; only
    ``P_i != Q_i`` under the hypotheses counts as a counterexample.
    """
    P = [np.asarray(x, dtype=complex) for x in P]
    Q = [np.asarray(x, dtype=complex) for x in Q]
    if len(P) != len(Q) or any(p.shape != q.shape for p, q in zip(P, Q)):
        raise UnitarizationError("dimension mismatch")
    chi = [float(c) for c in (chi.values() if isinstance(chi, dict) else chi)]
    d = np.asarray(D, dtype=float)
    if d.ndim == 2:
        d = np.diag(d)
    if d.shape[0] != P[0].shape[0]:
        raise UnitarizationError("dimension mismatch")
    d = d / d.max()
    Dm = np.diag(d)
    hyp = float(np.linalg.norm(sum(c * p for c, p in zip(chi, P)) - sum(c * q for c, q in zip(chi, Q))))
    for p, q in zip(P, Q):
        hyp = max(hyp, float(np.linalg.norm(p @ Dm @ q - Dm @ q)))
    proj = max(float(np.linalg.norm(p - q)) for p, q in zip(P, Q))
    spread = float(d.max() - d.min())
    if hyp > tol:
        verdict = HYPOTHESES_UNMET
    elif proj > tol:
        verdict = COUNTEREXAMPLE
    elif spread > tol:
        verdict = PROJECTION_PART_ONLY
    else:
        verdict = CONCLUSION_HOLDS
    return DiagonalLemmaReport(verdict, hyp, proj, spread)


def orthogonal_sum(u: UnitaryRep, v: UnitaryRep) -> UnitaryRep:
    if u.poset != v.poset:
        raise UnitarizationError("representations of different posets")
    if any(abs(u.chi[a] - v.chi[a]) > 0 for a in u.poset.elements):
        raise UnitarizationError("weights differ")
    projs = {a: scipy.linalg.block_diag(u.projections[a], v.projections[a]) for a in u.poset.elements}
    metric = transform = None
    if u.metric is not None and v.metric is not None:
        metric = scipy.linalg.block_diag(u.metric, v.metric)
    if u.transform is not None and v.transform is not None:
        transform = scipy.linalg.block_diag(u.transform, v.transform)
    return UnitaryRep(u.poset, dict(u.chi), projs, orthoscalar_residual(projs, u.chi), metric, transform)


def hall_trace_sides(m1: Subspace, m2: Subspace) -> tuple[int, float]:
    """``(dim(M1 & M2), tr(P_M1 P_M2))`` with standard-metric projections."""
    from .exact import subspace_intersection

    lhs = subspace_intersection(m1, m2).dim
    rhs = float(np.trace(orthogonal_projection(basis_columns(m1)) @ orthogonal_projection(basis_columns(m2))).real)
    return lhs, rhs


def hall_trace_check(m1: Subspace, m2: Subspace, tol: float = 1e-10) -> bool:
    lhs, rhs = hall_trace_sides(m1, m2)
    return lhs <= rhs + tol
