"""Bipartite structure: partial transpose, Schmidt form, supports, PPT tests.

Index convention, fixed everywhere: the basis vector |i>_A |j>_B sits at
position ``i * dB + j``.  Reshaping a length ``dA*dB`` vector to
``(dA, dB)`` therefore puts the A index first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import eigh_fast, eigvalsh, hermitize, kron, require_hermitian, scale_factor

DEFAULT_MAX_DIM = 4096
SUPPORT_TOL = 1e-10


class SizeCapError(ValueError):
    pass


def check_size(dim: int, max_dim: int = DEFAULT_MAX_DIM):
    if dim > max_dim:
        raise SizeCapError(
            f"operator dimension {dim} exceeds the size cap max_dim={max_dim}; raise it with --max-dim"
        )


def pt(M, dA: int, dB: int) -> np.ndarray:
    """Partial transpose on B of a raw ``(dA*dB, dA*dB)`` array."""
    M = np.asarray(M)
    return M.reshape(dA, dB, dA, dB).transpose(0, 3, 2, 1).reshape(dA * dB, dA * dB)


@dataclass(frozen=True, eq=False)
class BipartiteOperator:
    dA: int
    dB: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        n = self.dA * self.dB
        if m.shape != (n, n):
            raise ValueError(f"matrix shape {m.shape} does not match dA*dB = {self.dA}*{self.dB} = {n}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.dA * self.dB

    @classmethod
    def projector(cls, psi, dA, dB):
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        return cls(dA, dB, np.outer(psi, psi.conj()))

    def partial_transpose(self) -> "BipartiteOperator":
        return BipartiteOperator(self.dA, self.dB, pt(self.matrix, self.dA, self.dB))

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def eigvals(self) -> np.ndarray:
        return eigvalsh(self.matrix)


def partial_transpose(E: BipartiteOperator) -> BipartiteOperator:
    """Entry ((i,j),(k,l)) of the result is entry ((i,l),(k,j)) of ``E``."""
    return E.partial_transpose()


def validate_density(E: BipartiteOperator, tol: float = 1e-10) -> BipartiteOperator:
    M = require_hermitian(E.matrix, rtol=1e-10)
    tr = np.trace(M).real
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density operator has trace {tr:.12g}, expected 1")
    lo = eigvalsh(M)[0]
    if lo < -1e-9:
        raise ValueError(f"density operator is not positive semidefinite: lambda_min = {lo:.3e}")
    return E


@dataclass(frozen=True)
class SchmidtForm:
    coefficients: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def rank(self) -> int:
        return int(np.sum(self.coefficients > 1e-10))

    def vector(self) -> np.ndarray:
        return np.einsum("k,ik,jk->ij", self.coefficients, self.left, self.right).reshape(-1)


def schmidt_decompose(psi, dA: int, dB: int) -> SchmidtForm:
    """Schmidt decomposition ``psi = sum_k c_k |u_k>|v_k>`` via an SVD of the coefficient matrix."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != dA * dB:
        raise ValueError(f"vector length {psi.size} does not match {dA}*{dB}")
    if np.linalg.norm(psi) < 1e-14:
        raise ValueError("cannot Schmidt-decompose the zero vector")
    U, s, Vh = np.linalg.svd(psi.reshape(dA, dB), full_matrices=False)
    return SchmidtForm(s, U, Vh.T)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of A (x) B given by orthonormal columns."""

    dA: int
    dB: int
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.array(self.basis, dtype=complex)
        if b.ndim == 1:
            b = b[:, None]
        n = self.dA * self.dB
        if b.shape[0] != n:
            raise ValueError(f"basis has {b.shape[0]} rows, expected dA*dB = {n}")
        if b.shape[1] and np.max(np.abs(b.conj().T @ b - np.eye(b.shape[1]))) > 1e-10:
            raise ValueError("basis columns are not orthonormal (use Subspace.span)")
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, vectors, dA: int, dB: int, tol: float = 1e-10) -> "Subspace":
        """Orthonormal basis for the span of the given vectors (columns or a list)."""
        V = np.asarray(vectors, dtype=complex)
        if V.ndim == 1:
            V = V[:, None]
        elif V.shape[0] != dA * dB:
            V = V.T
        if V.shape[1] == 0:
            return cls(dA, dB, np.zeros((dA * dB, 0), dtype=complex))
        U, s, _ = np.linalg.svd(V, full_matrices=False)
        r = int(np.sum(s > tol * max(s[0], 1e-300)))
        return cls(dA, dB, U[:, :r])

    @classmethod
    def full(cls, dA: int, dB: int) -> "Subspace":
        return cls(dA, dB, np.eye(dA * dB, dtype=complex))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.dA * self.dB

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def complement(self) -> "Subspace":
        n = self.ambient_dim
        if self.dim == 0:
            return Subspace.full(self.dA, self.dB)
        w, V = eigh_fast(np.eye(n) - self.projector())
        return Subspace(self.dA, self.dB, V[:, w > 0.5])

    def contains(self, psi, tol: float = 1e-9) -> bool:
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        return np.linalg.norm(psi - self.basis @ (self.basis.conj().T @ psi)) <= tol * max(1.0, np.linalg.norm(psi))


def support_projector(rho: BipartiteOperator, tol: float = SUPPORT_TOL) -> Subspace:
    """Span of the eigenvectors of ``rho`` with eigenvalue above ``tol * lambda_max``."""
    M = require_hermitian(rho.matrix, rtol=1e-9)
    w, V = eigh_fast(M)
    top = w[-1] if w.size else 0.0
    if top <= 1e-14:
        raise ValueError("operator is (numerically) zero; its support is empty")
    if w[0] < -1e-8 * top:
        raise ValueError(f"operator is not positive semidefinite: lambda_min = {w[0]:.3e}")
    return Subspace(rho.dA, rho.dB, V[:, w > tol * top])


def _pt_lambda_min(E: BipartiteOperator, tol: float) -> tuple:
    M = require_hermitian(E.matrix, rtol=1e-9)
    if eigvalsh(M)[0] < -tol * scale_factor(M):
        raise ValueError("PPT tests require a positive semidefinite operator")
    return float(eigvalsh(pt(M, E.dA, E.dB))[0]), scale_factor(M)


def is_ppt(E: BipartiteOperator, tol: float = 1e-9) -> bool:
    lo, scale = _pt_lambda_min(E, tol)
    return lo >= -tol * scale


def is_ppt_definite(E: BipartiteOperator, tol: float = 1e-9) -> bool:
    lo, scale = _pt_lambda_min(E, tol)
    return lo > tol * scale


def regroup_permutation(dims_A, dims_B) -> np.ndarray:
    """Index map from (A1 B1 A2 B2 ... Ak Bk) ordering to (A1..Ak B1..Bk).

    ``perm[new] = old``, so ``M[np.ix_(perm, perm)]`` regroups an operator and
    ``v[perm]`` regroups a vector.
    """
    k = len(dims_A)
    shape = []
    for a, b in zip(dims_A, dims_B):
        shape += [a, b]
    idx = np.arange(int(np.prod(shape))).reshape(shape)
    order = [2 * i for i in range(k)] + [2 * i + 1 for i in range(k)]
    return idx.transpose(order).reshape(-1)


def regroup_tensor(ops, max_dim: int = DEFAULT_MAX_DIM) -> BipartiteOperator:
    """Tensor product of bipartite operators re-expressed on (A1..Ak) (x) (B1..Bk)."""
    dA = int(np.prod([E.dA for E in ops]))
    dB = int(np.prod([E.dB for E in ops]))
    check_size(dA * dB, max_dim)
    M = ops[0].matrix
    for E in ops[1:]:
        M = kron(M, E.matrix)
    perm = regroup_permutation([E.dA for E in ops], [E.dB for E in ops])
    return BipartiteOperator(dA, dB, M[np.ix_(perm, perm)])


def tensor_power_reorder(E: BipartiteOperator, k: int, max_dim: int = DEFAULT_MAX_DIM) -> BipartiteOperator:
    if k < 1:
        raise ValueError("copy count k must be >= 1")
    return regroup_tensor([E] * k, max_dim)


def tensor_subspaces(spaces, max_dim: int = DEFAULT_MAX_DIM) -> Subspace:
    """``S1 (x) S2 (x) ...`` with the regrouped (A...)(B...) index convention."""
    dA = int(np.prod([S.dA for S in spaces]))
    dB = int(np.prod([S.dB for S in spaces]))
    check_size(dA * dB, max_dim)
    B = spaces[0].basis
    for S in spaces[1:]:
        B = kron(B, S.basis)
    perm = regroup_permutation([S.dA for S in spaces], [S.dB for S in spaces])
    return Subspace(dA, dB, B[perm, :])


def subspace_power(S: Subspace, k: int, max_dim: int = DEFAULT_MAX_DIM) -> Subspace:
    return tensor_subspaces([S] * k, max_dim)


def density_from_subspace(S: Subspace) -> BipartiteOperator:
    """Normalized projector onto ``S``."""
    return BipartiteOperator(S.dA, S.dB, hermitize(S.projector()) / S.dim)
