"""Dense complex-matrix kernels.

Every operator in the package is a plain square ``numpy`` array of dtype
``complex128``.  The public eigensolver is a cyclic Jacobi method for
Hermitian matrices; the projection solvers use :func:`eigh_fast`, which
wraps LAPACK, because they call it thousands of times per solve.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


class NotHermitianError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def hermiticity_defect(M) -> float:
    M = np.asarray(M)
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def is_hermitian(M, rtol: float = 1e-12) -> bool:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    scale = 1.0 + (float(np.max(np.abs(M))) if M.size else 0.0)
    return hermiticity_defect(M) <= rtol * scale


def require_hermitian(M, rtol: float = 1e-12) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {M.shape}")
    if not is_hermitian(M, rtol):
        raise NotHermitianError(
            f"matrix is not Hermitian: max |M - M^dagger| = {hermiticity_defect(M):.3e}"
        )
    return M


def hermitize(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    return 0.5 * (M + M.conj().T)


def hermitian_eig(M, tol: float = 1e-15, max_sweeps: int = 100):
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(eigenvalues, V)`` with eigenvalues ascending and the columns of
    ``V`` the matching orthonormal eigenvectors, so ``M @ V == V * eigenvalues``.

    Each rotation first removes the phase of the pivot ``M[p, q]`` and then
    applies the classical real symmetric Jacobi rotation, so the iteration is
    the textbook method on a matrix that is made real pair by pair.
    """
    A = require_hermitian(M).copy()
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    if n == 0:
        return np.zeros(0), V
    scale = max(float(np.linalg.norm(A)), np.finfo(float).tiny)

    def off_norm(X):
        return float(np.linalg.norm(X - np.diag(np.diag(X))))

    for _ in range(max_sweeps):
        if off_norm(A) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r <= 1e-300 or r <= 1e-18 * scale:
                    continue
                phase = apq / r
                app, aqq = A[p, p].real, A[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                j00, j01 = c, s
                j10, j11 = -s * phase.conjugate(), c * phase.conjugate()
                colp, colq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = colp * j00 + colq * j10
                A[:, q] = colp * j01 + colq * j11
                rowp, rowq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = np.conj(j00) * rowp + np.conj(j10) * rowq
                A[q, :] = np.conj(j01) * rowp + np.conj(j11) * rowq
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = vp * j00 + vq * j10
                V[:, q] = vp * j01 + vq * j11
    else:
        res = off_norm(A)
        if res > 1e-10 * scale:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", res)

    w = np.diag(A).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def eigh_fast(M):
    """LAPACK Hermitian eigendecomposition on the Hermitian part of ``M``."""
    return np.linalg.eigh(hermitize(M))


def eigvalsh(M) -> np.ndarray:
    return np.linalg.eigvalsh(hermitize(M))


def lambda_min(M) -> float:
    return float(eigvalsh(M)[0])


def lambda_max(M) -> float:
    return float(eigvalsh(M)[-1])


def kron(A, B) -> np.ndarray:
    """Kronecker product with ``(A (x) B)[i*rB + k, j*cB + l] = A[i, j] * B[k, l]``."""
    A = np.asarray(A)
    B = np.asarray(B)
    rA, cA = A.shape
    rB, cB = B.shape
    return (A[:, None, :, None] * B[None, :, None, :]).reshape(rA * rB, cA * cB)


def scale_factor(M) -> float:
    n = M.shape[0]
    return max(1.0, float(np.trace(M).real) / n) if n else 1.0


def is_positive_definite(M, tol: float = 1e-9) -> bool:
    M = require_hermitian(M, rtol=1e-9)
    return lambda_min(M) > tol * scale_factor(M)


def is_positive_semidefinite(M, tol: float = 1e-9) -> bool:
    M = require_hermitian(M, rtol=1e-9)
    return lambda_min(M) >= -tol * scale_factor(M)


def leading_principal_minors(M) -> list:
    """Determinants of the top-left k-by-k blocks, k = 1..n.

    Integer and ``Fraction`` inputs (object or integer dtype) are handled in
    exact arithmetic with fraction-free Bareiss elimination.  Floating inputs
    use Gaussian elimination without pivoting, so minor k is the product of
    the first k pivots; a vanishing pivot falls back to pivoted LU for the
    remaining minors.
    """
    M = np.asarray(M)
    if M.dtype == object or np.issubdtype(M.dtype, np.integer):
        return _exact_minors(M)
    A = np.array(M, dtype=complex)
    n = A.shape[0]
    minors = []
    det = 1.0 + 0.0j
    pivot_scale = max(float(np.max(np.abs(A))) if n else 1.0, 1e-300)
    for k in range(n):
        piv = A[k, k]
        if abs(piv) <= 1e-14 * pivot_scale:
            for j in range(k, n):
                minors.append(float(np.linalg.det(np.asarray(M, dtype=complex)[: j + 1, : j + 1]).real))
            return minors
        det *= piv
        minors.append(float(det.real))
        if k + 1 < n:
            f = A[k + 1 :, k] / piv
            A[k + 1 :, k + 1 :] -= np.outer(f, A[k, k + 1 :])
    return minors


def _exact_minors(M) -> list:
    n = M.shape[0]
    orig = [[Fraction(M[i, j]) for j in range(n)] for i in range(n)]
    A = [row[:] for row in orig]
    minors = []
    prev = Fraction(1)
    for k in range(n):
        if A[k][k] == 0:
            minors.extend(_exact_det([r[: j + 1] for r in orig[: j + 1]]) for j in range(k, n))
            break
        minors.append(A[k][k])
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev
        prev = A[k][k]
    return [int(x) if x.denominator == 1 else x for x in minors]


def _exact_det(rows) -> Fraction:
    A = [list(r) for r in rows]
    n = len(A)
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if A[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            A[k], A[p] = A[p], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            for j in range(k, n):
                A[i][j] -= f * A[k][j]
    return det
