"""Acceptance criteria, each run at its stated tolerance with one PASS/FAIL line."""

import numpy as np
import pytest

from pptwitness.bipartite import BipartiteOperator, Subspace, pt, schmidt_decompose
from pptwitness.discrimination import (
    StateSet,
    bell_mixture_family,
    many_copy_ppt_indistinguishable,
    pair_witness_bound,
    ppt_discrimination_sdp,
    pure_state,
    pure_state_pair,
)
from pptwitness.linalg import hermitian_eig, is_positive_definite, leading_principal_minors
from pptwitness.subspaces import (
    assemble_rho,
    build_generator_space,
    build_smn_basis,
    find_coefficients,
    verify_block_decomposition,
)
from pptwitness.witness import supermultiplicativity_check, tmax

from conftest import BELL, random_hermitian, random_pure, random_subspace


@pytest.fixture
def report(capsys):
    def emit(number, title, failures, detail=""):
        status = "PASS" if not failures else "FAIL"
        with capsys.disabled():
            print(f"\n[acceptance {number}] {status}: {title}" + (f" ({detail})" if detail else ""))
            for f in failures[:10]:
                print(f"    - {f}")
        assert not failures, f"criterion {number}: {failures[:5]}"

    return emit


def _entangled(rng, d):
    while True:
        phi = random_pure(rng, d * d)
        if schmidt_decompose(phi, d, d).rank > 1:
            return phi


def test_criterion_1_entangled_pure_pairs(report):
    rng = np.random.default_rng(11)
    failures = []
    worst = 0.0
    for i in range(20):
        d = 2 if i < 10 else 3
        phi = _entangled(rng, d)
        S = pure_state_pair(phi, d)
        lam1 = schmidt_decompose(phi, d, d).coefficients[0]
        err = abs(pair_witness_bound(S) - (1 - lam1**2))
        worst = max(worst, err)
        if err > 1e-8:
            failures.append(f"sample {i}: bound error {err:.2e}")
        verdict = many_copy_ppt_indistinguishable(S).verdict
        if verdict != "IndistinguishableManyCopy":
            failures.append(f"sample {i}: verdict {verdict}")
    bell = pair_witness_bound(pure_state_pair(BELL, 2))
    if abs(bell - 0.5) > 1e-10:
        failures.append(f"Bell bound {bell!r} != 1/2")
    report(1, "spectral bound 1 - lambda1^2 and many-copy verdict for 20 entangled pure-state pairs", failures,
           f"max bound error {worst:.1e}, Bell bound {bell:.12f}")


def _certificate_ok(S, res, tol=1e-6):
    R, P = res.certificate.matrix, S.projector()
    return (
        np.linalg.eigvalsh(R)[0] >= -tol
        and np.linalg.eigvalsh(P - R)[0] >= -tol
        and np.linalg.norm(R - P @ R @ P) <= tol
        and np.linalg.eigvalsh(pt(R, S.dA, S.dB))[0] >= res.value - tol
    )


def test_criterion_2_solver_validation(report):
    failures = []
    full = tmax(Subspace.full(2, 2))
    zero = tmax(Subspace.span(np.eye(4)[:, :1], 2, 2))
    if abs(full.value - 1) > 1e-6:
        failures.append(f"T(full 2x2) = {full.value!r}")
    if abs(zero.value) > 1e-6:
        failures.append(f"T(span|00>) = {zero.value!r}")
    rng = np.random.default_rng(22)
    instances = [Subspace.full(2, 2), Subspace.span(np.eye(4)[:, :1], 2, 2), build_smn_basis(2, 2),
                 build_smn_basis(3, 3), Subspace.span(BELL[:, None], 2, 2).complement()]
    instances += [random_subspace(rng, *dims, int(rng.integers(1, dims[0] * dims[1] + 1)))
                  for dims in [(2, 2), (2, 3), (3, 3)] * 4]
    for i, S in enumerate(instances):
        res = tmax(S)
        if not _certificate_ok(S, res):
            failures.append(f"instance {i}: certificate check failed (T={res.value:.3e})")
    report(2, "T(full)=1, T(span|00>)=0, certificates independently valid", failures,
           f"T(full)={full.value:.9f}, T(|00>)={zero.value:.1e}, {len(instances)} certificates")


def test_criterion_3_supermultiplicativity(report):
    rng = np.random.default_rng(33)
    failures = []
    gaps = []
    for i in range(25):
        S1 = random_subspace(rng, 2, 2, int(rng.integers(1, 5)))
        S2 = random_subspace(rng, 2, 2, int(rng.integers(1, 5)))
        gaps.append(supermultiplicativity_check(S1, S2)["gap"])
        if gaps[-1] < -1e-5:
            failures.append(f"pair {i}: gap {gaps[-1]:.3e}")
    s22 = build_smn_basis(2, 2)
    g = supermultiplicativity_check(s22, s22)["gap"]
    if g < -1e-5:
        failures.append(f"S22 x S22: gap {g:.3e}")
    report(3, "T(S1 x S2) - T(S1) T(S2) >= -1e-5 on 25 random 2x2 pairs and S22 x S22", failures,
           f"min random gap {min(gaps):.2e}, S22 gap {g:.2e}")


def test_criterion_4_minimal_subspaces(report):
    failures = []
    for n in range(2, 6):
        for m in range(2, n + 1):
            S, G = build_smn_basis(m, n), build_generator_space(m, n)
            if S.dim != m + n - 1:
                failures.append(f"({m},{n}): dim {S.dim}")
            if np.max(np.abs(G.basis.conj().T @ S.basis)) > 1e-10:
                failures.append(f"({m},{n}): not orthogonal to generators")
            cs = find_coefficients(m, n)
            rho = assemble_rho(m, n, cs)
            lam = np.linalg.eigvalsh(pt(rho.matrix, m, n))[0]
            if not lam > 0:
                failures.append(f"({m},{n}): lambda_min {lam:.3e}")
            try:
                dec = verify_block_decomposition(rho, m, n, cs, tol=1e-12)
                if dec.off_block_max >= 1e-12:
                    failures.append(f"({m},{n}): off-block {dec.off_block_max:.2e}")
            except ValueError as exc:
                failures.append(f"({m},{n}): {exc}")
    cs = find_coefficients(2, 2)
    rho22 = assemble_rho(2, 2, cs).matrix
    expected = 2 * np.diag([1.0, 0, 0, 1]) + np.outer([0, 1, 1, 0], [0, 1, 1, 0])
    if cs.x != [1, 2] or not all(isinstance(v, int) for v in cs.x):
        failures.append(f"(2,2) coefficients {cs.x}")
    if not np.array_equal(rho22, expected):
        failures.append("(2,2) operator differs from the explicit one")
    w, _ = hermitian_eig(pt(rho22, 2, 2))
    if not np.allclose(w, [1, 1, 1, 3], atol=1e-12):
        failures.append(f"(2,2) spectrum {w}")
    report(4, "S_mn dimension, orthogonality, PPT-definite rho_mn and block structure for 2 <= m <= n <= 5",
           failures, f"(2,2) x={cs.x}, spectrum {np.round(w, 12).tolist()}")


def test_criterion_5_bell_mixture_families(report):
    failures = []
    count = 0
    for d in (2, 3):
        for m in range(d * d - d + 1, d * d + 1):
            for k in range(2, d * d - m + 2):
                count += 1
                S = bell_mixture_family(d, m, k)
                lam = S.metadata["measured_pt_lambda_min"]
                if lam < 1 - (d * d - m) / d - 1e-9:
                    failures.append(f"(d={d},m={m},k={k}): lambda_min {lam:.6f}")
                v = many_copy_ppt_indistinguishable(S).verdict
                if v != "IndistinguishableManyCopy":
                    failures.append(f"(d={d},m={m},k={k}): verdict {v}")
    report(5, "maximally entangled mixtures: lambda_min(P^T_B) >= 1 - (d^2-m)/d and many-copy verdict", failures,
           f"{count} families")


def test_criterion_6_cross_oracle(report):
    failures = []
    values = {}
    for name, S in [("Bell pair", pure_state_pair(BELL, 2)), ("mixture d=2", bell_mixture_family(2, 3, 2))]:
        for k in (1, 2):
            v = ppt_discrimination_sdp(S, mode="Unambiguous", copies=k).value
            values[f"{name} k={k}"] = v
            if v > 1e-5:
                failures.append(f"{name}, k={k}: value {v:.3e}")
    e = np.eye(4)
    classical = StateSet(2, 2, [pure_state(e[0], 2, 2), pure_state(e[3], 2, 2)])
    v = ppt_discrimination_sdp(classical, mode="Unambiguous").value
    values["classical"] = v
    if v < 1 - 1e-5:
        failures.append(f"classical pair: value {v:.6f}")
    report(6, "unambiguous PPT discrimination value ~0 for witnessed sets, ~1 for the classical pair", failures,
           ", ".join(f"{k}: {v:.2g}" for k, v in values.items()))


def test_criterion_7_kernels(report):
    rng = np.random.default_rng(77)
    failures = []
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 17))
        M = random_hermitian(rng, n, 10 ** rng.uniform(-3, 3))
        w, V = hermitian_eig(M)
        rel = np.linalg.norm(V @ np.diag(w) @ V.conj().T - M) / np.linalg.norm(M)
        worst = max(worst, rel)
    if worst > 1e-9:
        failures.append(f"reconstruction error {worst:.2e}")
    agree = 0
    for _ in range(200):
        n = int(rng.integers(1, 9))
        M = random_hermitian(rng, n)
        w = np.linalg.eigvalsh(M)
        M = M - (w[int(rng.integers(0, n))] + rng.choice([-1, 1]) * 1e-2) * np.eye(n)
        sylvester = all(v.real > 0 for v in leading_principal_minors(M))
        agree += sylvester == is_positive_definite(M, 0.0)
    if agree != 200:
        failures.append(f"Sylvester agreement {agree}/200")
    for dA, dB in [(2, 2), (2, 3), (3, 4)]:
        M = random_hermitian(rng, dA * dB)
        E = BipartiteOperator(dA, dB, M)
        if not np.array_equal(E.partial_transpose().partial_transpose().matrix, E.matrix):
            failures.append(f"partial transpose not an involution at {dA}x{dB}")
    report(7, "eigendecomposition reconstruction, Sylvester agreement, partial-transpose involution", failures,
           f"worst relative reconstruction {worst:.1e}, Sylvester {agree}/200")
