"""Minimal strongly PPT-unextendible subspaces of an m (x) n system.

The generator space ``S`` is spanned by ``|j>|k+1> - |j+1>|k>``; its
complement ``S_mn`` (dimension ``m + n - 1``) is spanned by the uniform
anti-diagonal vectors

    psi_s = sum_{j+k = m-1-s} |j>|k>     (s = 0..m-1)
    phi_t = sum_{j+k = t} |j>|k>         (t = m..m+n-2)

and carries the PPT-definite operator

    rho_mn = sum_s x_s |psi_s><psi_s| + sum_t y_t |phi_t><phi_t|.

Only the anti-diagonal sum ``c = j + k`` matters, so internally the
coefficients live in one list ``coef[c]`` with ``coef[c] = x_{m-1-c}`` for
``c < m`` and ``coef[c] = y_c`` otherwise.  Under the partial transpose the
entry between ``|i,j>`` and ``|k,l>`` is ``coef[i + l]`` whenever
``i - j == k - l``, so ``rho_mn^{T_B}`` splits into Hankel blocks, one per
difference ``i - j``.  Those are the families P_a (difference
``m-1-a >= 0``) and Q_b (difference ``-b``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bipartite import BipartiteOperator, Subspace, pt
from .linalg import eigvalsh, leading_principal_minors

MAX_DOUBLINGS = 200


class CoefficientSearchError(RuntimeError):
    pass


def _check_dims(m: int, n: int):
    if not (2 <= m <= n):
        raise ValueError(f"need 2 <= m <= n, got m={m}, n={n}")


def index(j: int, k: int, n: int) -> int:
    return j * n + k


def build_generator_space(m: int, n: int) -> Subspace:
    _check_dims(m, n)
    gens = []
    for j in range(m - 1):
        for k in range(n - 1):
            v = np.zeros(m * n)
            v[index(j, k + 1, n)] += 1.0
            v[index(j + 1, k, n)] -= 1.0
            gens.append(v)
    return Subspace.span(np.array(gens).T, m, n)


def psi_vector(m: int, n: int, s: int) -> np.ndarray:
    v = np.zeros(m * n)
    for j in range(m - s):
        v[index(j, m - 1 - s - j, n)] = 1.0
    return v


def phi_vector(m: int, n: int, t: int) -> np.ndarray:
    v = np.zeros(m * n)
    for j in range(t - m + 1, min(n - 1, t) + 1):
        v[index(t - j, j, n)] = 1.0
    return v


def smn_vectors(m: int, n: int) -> list:
    """Unnormalized ``psi_0..psi_{m-1}, phi_m..phi_{m+n-2}`` in that order."""
    _check_dims(m, n)
    return [psi_vector(m, n, s) for s in range(m)] + [phi_vector(m, n, t) for t in range(m, m + n - 1)]


def build_smn_basis(m: int, n: int) -> Subspace:
    vecs = smn_vectors(m, n)
    # the vectors have disjoint supports, so normalizing them gives an orthonormal basis
    return Subspace(m, n, np.array([v / np.linalg.norm(v) for v in vecs]).T)


@dataclass
class CoefficientSet:
    m: int
    n: int
    x: list  # x_0 .. x_{m-1}
    y: list  # y_m .. y_{m+n-2}

    def __post_init__(self):
        if len(self.x) != self.m or len(self.y) != self.n - 1:
            raise ValueError(f"expected {self.m} x-values and {self.n - 1} y-values")
        if any(v <= 0 for v in list(self.x) + list(self.y)):
            raise ValueError("all coefficients must be strictly positive")

    def y_at(self, t: int):
        return self.y[t - self.m]

    def by_sum(self) -> list:
        """Coefficient of the anti-diagonal with ``j + k = c``, c = 0..m+n-2."""
        return [self.x[self.m - 1 - c] for c in range(self.m)] + list(self.y)

    def symmetric(self) -> bool:
        return self.m == self.n and all(self.x[a] == self.y_at(self.m - 1 + a) for a in range(1, self.m))


@dataclass
class BlockDecomposition:
    m: int
    n: int
    P_families: list  # P_families[a] = list of (j, k) labels
    Q_families: dict  # Q_families[b] = list of (j, k) labels, b = 1..n-1
    P_blocks: list = field(default_factory=list)
    Q_blocks: dict = field(default_factory=dict)
    off_block_max: float = 0.0
    pattern_notes: list = field(default_factory=list)

    def ordering(self) -> list:
        labels = [lab for fam in self.P_families for lab in fam]
        labels += [lab for b in sorted(self.Q_families) for lab in self.Q_families[b]]
        return [index(j, k, self.n) for j, k in labels]

    def sizes(self) -> list:
        return [len(f) for f in self.P_families] + [len(self.Q_families[b]) for b in sorted(self.Q_families)]


def block_families(m: int, n: int) -> BlockDecomposition:
    _check_dims(m, n)
    P = [[(m - 1 - a + t, t) for t in range(a + 1)] for a in range(m)]
    Q = {b: [(r, r + b) for r in range(min(n - 1 - b, m - 1) + 1)] for b in range(1, n)}
    return BlockDecomposition(m, n, P, Q)


def hankel(coef_by_sum, offset: int, size: int) -> np.ndarray:
    """``H[r][c] = coef_by_sum[offset + r + c]``, kept in the coefficients' own number type."""
    H = np.empty((size, size), dtype=object)
    for r in range(size):
        for c in range(size):
            H[r, c] = coef_by_sum[offset + r + c]
    return H


def block_matrices(m: int, n: int, coef_by_sum) -> tuple:
    """Predicted blocks ``(P_0..P_{m-1}, {b: Q_b})`` of rho_mn^{T_B} from the coefficients."""
    P = [hankel(coef_by_sum, m - 1 - a, a + 1) for a in range(m)]
    Q = {b: hankel(coef_by_sum, b, min(n - 1 - b, m - 1) + 1) for b in range(1, n)}
    return P, Q


def _positive_minors(H) -> bool:
    return all(v > 0 for v in leading_principal_minors(H))


def _double_until(build, start):
    """Smallest ``start * 2**k`` (k >= 0) for which ``build(value)`` has positive leading minors."""
    v = start
    for _ in range(MAX_DOUBLINGS):
        if _positive_minors(build(v)):
            return v
        v *= 2
    raise CoefficientSearchError(f"no admissible value after {MAX_DOUBLINGS} doublings from {start}")


def find_coefficients(m: int, n: int) -> CoefficientSet:
    """Positive integer coefficients making rho_mn PPT-definite.

    Square case by induction on m from x = (1, 2) at m = 2, with the
    symmetry x_a = y_{m-1+a}: every block is then the symmetric Hankel matrix
    ``[x_{|k-r-c|}]``, and stepping to m + 1 only adds the corner value x_m
    of the new largest block.  Rectangular case n > m fixes the square
    coefficients and appends y_{2m-1}, ..., y_{m+n-2}; each new value only
    enters the bottom-right corner of one full-size Q block.
    """
    _check_dims(m, n)
    x = [1, 2]
    for size in range(2, m):

        def P_new(v, x=x):
            xs = x + [v]
            k = len(xs) - 1
            return np.array([[xs[abs(k - r - c)] for c in range(k + 1)] for r in range(k + 1)], dtype=object)

        x = x + [_double_until(P_new, max(x))]

    coef = [x[m - 1 - c] for c in range(m)] + [x[a] for a in range(1, m)]  # sums 0..2m-2
    for b in range(1, n - m + 1):

        def Q_new(v, coef=coef, b=b):
            return hankel(coef + [v], b, m)

        coef = coef + [_double_until(Q_new, max(coef))]

    cs = CoefficientSet(m, n, x[:m], coef[m:])
    P, Q = block_matrices(m, n, cs.by_sum())
    bad = [f"P_{a}" for a, B in enumerate(P) if not _positive_minors(B)]
    bad += [f"Q_{b}" for b, B in Q.items() if not _positive_minors(B)]
    if bad:
        raise CoefficientSearchError(f"blocks not positive definite: {', '.join(bad)}")
    return cs


def assemble_rho(m: int, n: int, coeffs: CoefficientSet) -> BipartiteOperator:
    if (coeffs.m, coeffs.n) != (m, n):
        raise ValueError(f"coefficients are for ({coeffs.m},{coeffs.n}), not ({m},{n})")
    weights = [coeffs.x[s] for s in range(m)] + [coeffs.y_at(t) for t in range(m, m + n - 1)]
    rho = np.zeros((m * n, m * n))
    for w, v in zip(weights, smn_vectors(m, n)):
        rho += float(w) * np.outer(v, v)
    return BipartiteOperator(m, n, rho)


def _label_pattern_notes(m: int, n: int) -> list:
    """Q_b blocks whose corner would carry an x label with a negative index."""
    notes = []
    for b in range(1, n):
        if m - 1 - b < 0:
            notes.append(
                f"Q_{b}: top-left entry is y_{b} (anti-diagonal sum {b} >= m); "
                f"the nominal label x_{m - 1 - b} has a negative index"
            )
    return notes


def verify_block_decomposition(rho: BipartiteOperator, m: int, n: int, coeffs: CoefficientSet | None = None,
                               tol: float = 1e-12) -> BlockDecomposition:
    """Permute rho^{T_B} into family order and check it is block diagonal.

    When ``coeffs`` are given, each extracted block is also compared
    entrywise against the Hankel pattern predicted from them.
    """
    dec = block_families(m, n)
    order = dec.ordering()
    M = pt(rho.matrix, m, n)[np.ix_(order, order)]
    sizes = dec.sizes()
    mask = np.zeros_like(M, dtype=bool)
    start = 0
    blocks = []
    for s in sizes:
        mask[start : start + s, start : start + s] = True
        blocks.append(M[start : start + s, start : start + s])
        start += s
    dec.off_block_max = float(np.max(np.abs(M[~mask]))) if (~mask).any() else 0.0
    if dec.off_block_max > tol:
        raise ValueError(f"rho^T_B is not block diagonal in the family order: off-block {dec.off_block_max:.3e}")
    dec.P_blocks = blocks[:m]
    dec.Q_blocks = {b: blocks[m + b - 1] for b in range(1, n)}
    if coeffs is not None:
        P_pred, Q_pred = block_matrices(m, n, coeffs.by_sum())
        for name, got, want in [(f"P_{a}", dec.P_blocks[a], P_pred[a]) for a in range(m)] + [
            (f"Q_{b}", dec.Q_blocks[b], Q_pred[b]) for b in range(1, n)
        ]:
            err = float(np.max(np.abs(got - want.astype(float))))
            if err > tol * max(1.0, float(np.max(want.astype(float)))):
                raise ValueError(f"block {name} deviates from its Hankel pattern by {err:.3e}")
    dec.pattern_notes = _label_pattern_notes(m, n)
    return dec


def rho_pt_lambda_min(m: int, n: int, coeffs: CoefficientSet | None = None) -> float:
    coeffs = coeffs or find_coefficients(m, n)
    rho = assemble_rho(m, n, coeffs)
    return float(eigvalsh(pt(rho.matrix, m, n))[0])
