"""Dykstra's alternating projections with feasibility verdicts.

All projections used in the package are exact spectral or affine maps, so
the only numerical judgement is when to stop: a problem-specific
``certify`` callback can prove feasibility from the current iterates, an
optional ``refute`` callback can prove infeasibility, and otherwise the
inter-set distance decides (below ``tol`` means feasible, a stall above
``stall_floor`` means infeasible).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .linalg import eigh_fast


@dataclass
class FeasibilityOutcome:
    feasible: bool
    reason: str  # certified | converged | refuted | stalled | max-sweeps
    sweeps: int
    distance: float
    iterates: list
    certificate: Any = None


def clip_eigenvalues(X, lo=None, hi=None) -> np.ndarray:
    """Frobenius projection of a Hermitian matrix onto ``lo <= X <= hi`` (spectral clipping)."""
    w, V = eigh_fast(X)
    w = np.clip(w, lo, hi)
    return (V * w) @ V.conj().T


def psd_part(X) -> np.ndarray:
    return clip_eigenvalues(X, 0.0, None)


def dykstra(x0, projections: Sequence[Callable]):
    """Yield the list of projection outputs after every full cycle."""
    x = np.array(x0, dtype=complex)
    incs = [np.zeros_like(x) for _ in projections]
    while True:
        outs = []
        for i, proj in enumerate(projections):
            y = proj(x + incs[i])
            incs[i] = x + incs[i] - y
            x = y
            outs.append(y)
        yield outs


def set_distance(outs) -> float:
    last = outs[-1]
    return max(float(np.linalg.norm(o - last)) for o in outs[:-1]) if len(outs) > 1 else 0.0


def solve_feasibility(
    x0,
    projections,
    certify: Callable | None = None,
    refute: Callable | None = None,
    *,
    tol: float = 1e-8,
    max_sweeps: int = 5000,
    stall_sweeps: int = 500,
    stall_floor: float = 1e-6,
    refute_every: int = 10,
) -> FeasibilityOutcome:
    history = []
    outs = [np.asarray(x0)]
    dist = np.inf
    for sweep, outs in enumerate(dykstra(x0, projections), start=1):
        dist = set_distance(outs)
        history.append(dist)
        if certify is not None:
            cert = certify(outs)
            if cert is not None:
                return FeasibilityOutcome(True, "certified", sweep, dist, outs, cert)
        if dist < tol:
            return FeasibilityOutcome(True, "converged", sweep, dist, outs)
        if refute is not None and sweep % refute_every == 0 and refute(outs):
            return FeasibilityOutcome(False, "refuted", sweep, dist, outs)
        if sweep > stall_sweeps and dist > stall_floor:
            earlier = min(history[-stall_sweeps - 1 : -1])
            if dist >= 0.99 * earlier:
                return FeasibilityOutcome(False, "stalled", sweep, dist, outs)
        if sweep >= max_sweeps:
            break
    return FeasibilityOutcome(False, "max-sweeps", len(history), dist, outs)
