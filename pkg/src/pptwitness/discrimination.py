"""Sets of orthogonal states and their PPT (in)distinguishability.

Two routes are offered.  :func:`many_copy_ppt_indistinguishable` is the
witness criterion: if the support of one state carries a PPT-definite
operator, that support is strongly PPT-unextendible, and then no number of
copies makes the set unambiguously distinguishable by PPT measurements.
The criterion is sufficient only; a negative outcome is reported as
Inconclusive.

:func:`ppt_discrimination_sdp` is a direct single-level check at a fixed
copy number.  It searches for PPT measurement operators with zero cross
terms by Dykstra projections and bisects on the smallest success
probability.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bipartite import (
    DEFAULT_MAX_DIM,
    SUPPORT_TOL,
    BipartiteOperator,
    check_size,
    pt,
    schmidt_decompose,
    support_projector,
    tensor_power_reorder,
    validate_density,
)
from .dykstra import psd_part, solve_feasibility
from .linalg import eigvalsh, hermitize
from .witness import WITNESS_TOL, SolverSettings, tmax, tmax_lower_bound

ORTHO_TOL = 1e-10

# Named inference steps recorded in reports.
STEP_PPT_DEFINITE = "PPT-definite operator supported on supp(rho_k) (certified by T > 0)"
STEP_STRONG = "supermultiplicativity of T: every tensor power of supp(rho_k) carries a PPT-definite operator, so supp(rho_k) is strongly PPT-unextendible"
STEP_MANY_COPY = "a strongly PPT-unextendible support blocks unambiguous PPT discrimination for every copy number"


@dataclass
class StateSet:
    dA: int
    dB: int
    states: list  # BipartiteOperator density operators
    labels: list = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.labels is None:
            self.labels = [f"rho_{i + 1}" for i in range(len(self.states))]
        if len(self.labels) != len(self.states):
            raise ValueError("one label per state required")
        for E in self.states:
            if (E.dA, E.dB) != (self.dA, self.dB):
                raise ValueError(f"state dims ({E.dA},{E.dB}) differ from set dims ({self.dA},{self.dB})")
            validate_density(E)

    def __len__(self):
        return len(self.states)


def pure_state(psi, dA: int, dB: int) -> BipartiteOperator:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return BipartiteOperator.projector(psi / np.linalg.norm(psi), dA, dB)


def overlaps(states) -> np.ndarray:
    n = len(states)
    O = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            O[i, j] = abs(np.trace(states[i].matrix @ states[j].matrix))
    return O


def check_orthogonality(S: StateSet, tol: float = ORTHO_TOL) -> bool:
    O = overlaps(S.states)
    return bool(np.all(O[~np.eye(len(S), dtype=bool)] <= tol))


@dataclass
class StateWitness:
    label: str
    support_dim: int
    T: float
    upper_bound: float
    spectral_bound: float
    status: str


@dataclass
class ManyCopyVerdict:
    verdict: str  # IndistinguishableManyCopy | Inconclusive
    per_state: list
    witness_index: int | None
    chain: list

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness_state": None if self.witness_index is None else self.per_state[self.witness_index].label,
            "per_state": [vars(w) for w in self.per_state],
            "inference_chain": self.chain,
        }


def many_copy_ppt_indistinguishable(
    S: StateSet, method: str = "barrier", threshold: float = WITNESS_TOL, support_tol: float = SUPPORT_TOL
) -> ManyCopyVerdict:
    if not check_orthogonality(S):
        raise ValueError("states are not mutually orthogonal (trace overlap above 1e-10)")
    per_state = []
    witness = None
    for label, rho in zip(S.labels, S.states):
        sub = support_projector(rho, support_tol)
        res = tmax(sub, method=method)
        per_state.append(StateWitness(label, sub.dim, res.value, res.upper_bound, res.spectral_bound, res.status))
        if witness is None and res.value > threshold:
            witness = len(per_state) - 1
    if witness is None:
        return ManyCopyVerdict(
            "Inconclusive",
            per_state,
            None,
            [f"no support carries a certified PPT-definite operator (T <= {threshold:g}); the criterion is sufficient only"],
        )
    return ManyCopyVerdict("IndistinguishableManyCopy", per_state, witness, [STEP_PPT_DEFINITE, STEP_STRONG, STEP_MANY_COPY])


@dataclass
class DiscriminationResult:
    mode: str  # Perfect | Unambiguous
    value: float
    measurements: list
    status: str
    copies: int
    violations: dict
    bisections: int = 0
    sweeps: int = 0


def _measurement_violations(M, projs, rhos, dA, dB) -> dict:
    n = len(M)
    N = M[0].shape[0]
    cross = max((abs(np.trace(M[i] @ rhos[j])) for i in range(n) for j in range(n) if i != j), default=0.0)
    return {
        "sum_minus_identity": float(np.max(np.abs(sum(M) - np.eye(N)))),
        "min_eig": float(min(eigvalsh(X)[0] for X in M)),
        "min_pt_eig": float(min(eigvalsh(pt(X, dA, dB))[0] for X in M)),
        "max_cross_term": float(cross),
    }


def ppt_discrimination_sdp(
    S: StateSet,
    mode: str = "Unambiguous",
    copies: int = 1,
    max_dim: int = DEFAULT_MAX_DIM,
    settings: SolverSettings | None = None,
    width: float = 1e-7,
) -> DiscriminationResult:
    """Best worst-case success probability of an unambiguous PPT measurement on ``k`` copies.

    The measurement ``(M_1..M_n)`` must be PPT, sum to the identity and have
    ``tr(M_i rho_j) = 0`` for ``i != j``.  Because ``M_i >= 0`` the cross
    terms vanish exactly when ``P_j M_i P_j = 0`` for the support projector
    ``P_j`` of ``rho_j``.  Perfect mode asks whether every success
    probability can be 1.
    """
    if mode not in ("Perfect", "Unambiguous"):
        raise ValueError(f"mode must be Perfect or Unambiguous, got {mode!r}")
    if not check_orthogonality(S):
        raise ValueError("states are not mutually orthogonal (trace overlap above 1e-10)")
    cfg = settings or SolverSettings()
    check_size((S.dA * S.dB) ** copies, max_dim)
    rhos_op = [tensor_power_reorder(r, copies, max_dim) for r in S.states]
    dA, dB = rhos_op[0].dA, rhos_op[0].dB
    N = dA * dB
    n = len(rhos_op)
    rhos = np.array([hermitize(r.matrix) for r in rhos_op])
    projs = np.array([hermitize(support_projector(r).projector()) for r in rhos_op])
    rho_norm2 = np.array([np.linalg.norm(r) ** 2 for r in rhos])
    eye = np.eye(N)

    def proj_psd(X):
        return np.array([psd_part(x) for x in X])

    def proj_ppt(X):
        return np.array([pt(psd_part(pt(x, dA, dB)), dA, dB) for x in X])

    def proj_cross(X):
        out = X.copy()
        for i in range(n):
            for j in range(n):
                if i != j:
                    out[i] -= projs[j] @ X[i] @ projs[j]
        return out

    def proj_sum(X):
        return X - (X.sum(axis=0) - eye) / n

    def attempt(p):
        def proj_half(X):
            out = X.copy()
            for i in range(n):
                gap = p - np.vdot(rhos[i], X[i]).real
                if gap > 0:
                    out[i] = X[i] + gap * rhos[i] / rho_norm2[i]
            return out

        x0 = np.array([projs[i] for i in range(n)]) if n > 1 else eye[None].astype(complex)
        return solve_feasibility(
            x0,
            [proj_psd, proj_ppt, proj_cross, proj_sum, proj_half],
            tol=cfg.feasibility_tol,
            max_sweeps=cfg.max_sweeps,
            stall_sweeps=cfg.stall_sweeps,
            stall_floor=min(cfg.stall_floor, 1e-2 * p) if p > 0 else cfg.stall_floor,
        )

    def pack(M, value, status, bis, sweeps):
        M = [hermitize(m) for m in M]
        return DiscriminationResult(mode, value, M, status, copies, _measurement_violations(M, projs, rhos, dA, dB),
                                    bis, sweeps)

    def infeasible(out, bis, sweeps):
        return DiscriminationResult(mode, 0.0, [], f"Infeasible ({out.reason})", copies,
                                    {"distance": out.distance}, bis, sweeps)

    out = attempt(1.0)
    sweeps = out.sweeps
    if out.feasible:
        M = out.iterates[-1]
        value = float(min(np.vdot(rhos[i], M[i]).real for i in range(n)))
        return pack(M, min(1.0, value), "Feasible", 0, sweeps)
    if mode == "Perfect":
        return infeasible(out, 0, sweeps)
    # p = 0 drops the success constraint: is there any PPT measurement with zero cross terms?
    out = attempt(0.0)
    sweeps += out.sweeps
    if not out.feasible:
        return infeasible(out, 0, sweeps)

    lo, hi = 0.0, 1.0
    best = out.iterates[-1]
    bis = 0
    while hi - lo > width:
        bis += 1
        p = 0.5 * (lo + hi)
        out = attempt(p)
        sweeps += out.sweeps
        if out.feasible:
            lo, best = p, out.iterates[-1]
        else:
            hi = p
    value = float(min(np.vdot(rhos[i], best[i]).real for i in range(n)))
    return pack(best, value, "Feasible", bis, sweeps)


def pure_state_pair(phi, d: int) -> StateSet:
    """``{|phi><phi|, (1 - |phi><phi|) / (d^2 - 1)}`` with Schmidt metadata for ``phi``."""
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    if phi.size != d * d:
        raise ValueError(f"phi has length {phi.size}, expected d^2 = {d * d}")
    if abs(np.linalg.norm(phi) - 1.0) > 1e-10:
        raise ValueError("phi must be normalized")
    sf = schmidt_decompose(phi, d, d)
    proj = np.outer(phi, phi.conj())
    comp = (np.eye(d * d) - proj) / (d * d - 1)
    meta = {
        "schmidt_rank": sf.rank,
        "schmidt_coefficients": sf.coefficients.tolist(),
        "lambda1_sq": float(sf.coefficients[0] ** 2),
        "witness_bound": float(1.0 - sf.coefficients[0] ** 2),
        "applicable": sf.rank > 1,
    }
    if sf.rank <= 1:
        meta["note"] = "not entangled; the entangled-pure-state construction does not apply"
    return StateSet(d, d, [BipartiteOperator(d, d, proj), BipartiteOperator(d, d, comp)], ["phi", "complement"], meta)


def generalized_bell_basis(d: int) -> list:
    """The d^2 vectors ``(X^a Z^b (x) 1)|Phi>`` with ``|Phi> = sum_i |ii> / sqrt(d)``.

    ``X`` is the cyclic shift and ``Z`` the clock matrix; (a, b) runs in
    lexicographic order, so the first vector is ``|Phi>`` itself.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    omega = np.exp(2j * np.pi / d)
    X = np.roll(np.eye(d), 1, axis=0)
    Z = np.diag(omega ** np.arange(d))
    Phi = np.eye(d).reshape(-1) / np.sqrt(d)
    out = []
    for a in range(d):
        for b in range(d):
            U = np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Z, b)
            out.append(np.kron(U, np.eye(d)) @ Phi)
    return out


def bell_mixture_family(d: int, m: int, k: int) -> StateSet:
    """Mixture of m maximally entangled basis states plus k - 1 further basis states."""
    if not (d * d - d + 1 <= m <= d * d):
        raise ValueError(f"need d^2 - d + 1 <= m <= d^2, i.e. {d * d - d + 1} <= m <= {d * d}; got m={m}")
    if not (2 <= k <= d * d - m + 1):
        raise ValueError(f"need 2 <= k <= d^2 - m + 1 = {d * d - m + 1}; got k={k}")
    basis = generalized_bell_basis(d)
    P = sum(np.outer(v, v.conj()) for v in basis[:m])
    states = [BipartiteOperator(d, d, hermitize(P) / m)]
    states += [BipartiteOperator.projector(basis[m + j], d, d) for j in range(k - 1)]
    meta = {
        "d": d,
        "m": m,
        "k": k,
        "bound": 1.0 - (d * d - m) / d,
        "measured_pt_lambda_min": float(eigvalsh(pt(P, d, d))[0]),
    }
    labels = ["mixture"] + [f"basis_{m + j + 1}" for j in range(k - 1)]
    return StateSet(d, d, states, labels, meta)


@dataclass
class SpectralSumCheck:
    applicable: bool
    B: float
    bound: float | None
    degenerate: bool
    terms: list


def spectral_sum_check(psis, dA: int, dB: int) -> SpectralSumCheck:
    """Sum of ``lambda_max`` of the partially transposed projectors.

    If ``B = sum_i lambda_max((|psi_i><psi_i|)^{T_B}) < 1`` then
    ``lambda_min((1 - sum_i |psi_i><psi_i|)^{T_B}) >= 1 - B > 0``, so the
    complement of the span carries a PPT-definite operator.  For a pure
    state ``lambda_max`` of the partial transpose is the squared largest
    Schmidt coefficient.
    """
    vecs = [np.asarray(p, dtype=complex).reshape(-1) for p in psis]
    vecs = [v / np.linalg.norm(v) for v in vecs]
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            if abs(np.vdot(vecs[i], vecs[j])) > 1e-10:
                raise ValueError(f"states {i} and {j} are not orthogonal")
    terms = [float(eigvalsh(pt(np.outer(v, v.conj()), dA, dB))[-1]) for v in vecs]
    B = float(sum(terms))
    if B < 1.0:
        return SpectralSumCheck(True, B, 1.0 - B, len(vecs) == 0, terms)
    return SpectralSumCheck(False, B, None, False, terms)


def pair_witness_bound(S: StateSet) -> float:
    """Spectral witness value of the complement state's support."""
    return tmax_lower_bound(support_projector(S.states[1]))
