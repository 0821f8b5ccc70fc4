"""Log-barrier path following for small dense linear matrix inequalities.

Solves  maximize c.x  subject to  G_k(x) = F_k + sum_a x_a A_{k,a} >= 0
(Hermitian blocks, strictly feasible starting point required).  Sizes in
this package are a few hundred real variables and blocks of dimension at
most ~100, so the Newton systems are formed densely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class LMIBlock:
    constant: np.ndarray  # (n, n) Hermitian
    coeffs: np.ndarray  # (p, n, n) Hermitian slices

    def value(self, x) -> np.ndarray:
        return self.constant + np.tensordot(x, self.coeffs, axes=1)


@dataclass
class BarrierResult:
    x: np.ndarray
    objective: float
    duals: list  # G_k^{-1} / tau at the last centering, one per block
    gap_bound: float
    newton_steps: int
    converged: bool


def _chol(G):
    try:
        return np.linalg.cholesky(0.5 * (G + G.conj().T))
    except np.linalg.LinAlgError:
        return None


def hermitian_basis(r: int) -> np.ndarray:
    """Frobenius-orthonormal basis of r-by-r Hermitian matrices, shape (r*r, r, r)."""
    out = []
    for i in range(r):
        E = np.zeros((r, r), dtype=complex)
        E[i, i] = 1.0
        out.append(E)
    s = 1.0 / np.sqrt(2.0)
    for i in range(r):
        for j in range(i + 1, r):
            E = np.zeros((r, r), dtype=complex)
            E[i, j] = E[j, i] = s
            out.append(E)
            F = np.zeros((r, r), dtype=complex)
            F[i, j], F[j, i] = -1j * s, 1j * s
            out.append(F)
    return np.array(out).reshape(r * r, r, r)


def barrier_maximize(
    c,
    blocks,
    x0,
    *,
    gap_tol: float = 1e-9,
    tau0: float = 1.0,
    growth: float = 8.0,
    max_newton: int = 80,
    max_outer: int = 60,
) -> BarrierResult:
    c = np.asarray(c, dtype=float)
    x = np.asarray(x0, dtype=float).copy()
    m_total = sum(b.constant.shape[0] for b in blocks)

    def feasible(xv):
        return all(_chol(b.value(xv)) is not None for b in blocks)

    if not feasible(x):
        raise ValueError("barrier start point is not strictly feasible")

    def phi(xv, tau):
        val = -tau * float(c @ xv)
        for b in blocks:
            L = _chol(b.value(xv))
            if L is None:
                return np.inf
            val -= 2.0 * float(np.sum(np.log(np.abs(np.diag(L)))))
        return val

    tau = tau0
    steps = 0
    duals = []
    converged = False
    for _ in range(max_outer):
        for _ in range(max_newton):
            g = -tau * c
            H = np.zeros((x.size, x.size))
            duals = []
            for b in blocks:
                Ginv = np.linalg.inv(b.value(x))
                Ginv = 0.5 * (Ginv + Ginv.conj().T)
                duals.append(Ginv / tau)
                M = np.einsum("ij,ajk->aik", Ginv, b.coeffs)
                g -= np.einsum("aii->a", M).real
                n = M.shape[1]
                Mf = M.reshape(M.shape[0], n * n)
                MT = M.transpose(0, 2, 1).reshape(M.shape[0], n * n)
                H += (Mf @ MT.T).real
            try:
                dx = np.linalg.solve(H, -g)
            except np.linalg.LinAlgError:
                dx = np.linalg.lstsq(H, -g, rcond=None)[0]
            dec = float(-g @ dx)
            steps += 1
            if dec / 2.0 <= 1e-10:
                break
            s = 1.0
            f0 = phi(x, tau)
            while s > 1e-12:
                xn = x + s * dx
                fn = phi(xn, tau)
                if np.isfinite(fn) and fn <= f0 - 0.25 * s * dec:
                    break
                s *= 0.5
            x = x + s * dx
            if s <= 1e-12:
                break
        if m_total / tau < gap_tol:
            converged = True
            break
        tau *= growth
    return BarrierResult(x, float(c @ x), duals, m_total / tau, steps, converged)
