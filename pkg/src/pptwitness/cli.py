"""Command-line entry point: ``pptwitness <subcommand> ...``.

Every subcommand prints (or writes with ``--report``) one JSON report.
Exit codes: 0 when a verdict was produced, 2 when inconclusive, 1 on
input or solver errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .bipartite import DEFAULT_MAX_DIM, SUPPORT_TOL, SizeCapError, check_size, schmidt_decompose
from .discrimination import (
    bell_mixture_family,
    check_orthogonality,
    generalized_bell_basis,
    many_copy_ppt_indistinguishable,
    ppt_discrimination_sdp,
    pure_state_pair,
)
from .subspaces import (
    CoefficientSearchError,
    assemble_rho,
    build_generator_space,
    build_smn_basis,
    find_coefficients,
    rho_pt_lambda_min,
    verify_block_decomposition,
)
from .witness import WITNESS_TOL, strong_unextendibility_witness, tmax

EXIT_VERDICT, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2

# accepted alternative spellings of example names
EXAMPLE_ALIASES = {"theorem2-pair": "pure-pair", "example1": "bell-mixture"}


class CLIError(Exception):
    pass


def _plain(obj):
    """Recursively convert numpy scalars/arrays so json can serialize them."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _tolerances(args) -> dict:
    return {"tol_eig": args.tol_eig, "tol_sdp": args.tol_sdp, "max_dim": args.max_dim}


def _load_any(path, max_dim):
    raw = io.read_json(path)
    if isinstance(raw, dict) and "states" in raw:
        obj = io.parse_state_set(raw)
    else:
        obj = io.parse_operator(raw)
    check_size(obj.dA * obj.dB, max_dim)
    return raw, obj


def _tmax_evidence(res, tol_sdp) -> dict:
    chk = res.certificate_check()
    return {
        "T": res.value,
        "upper_bound": res.upper_bound,
        "spectral_bound": res.spectral_bound,
        "status": res.status,
        "witness_threshold": tol_sdp,
        "certificate_psd": chk["psd"],
        "certificate_pt_margin": chk["pt_margin"],
    }


def cmd_tmax(args):
    raw, opf = _load_any(args.path, args.max_dim)
    if not isinstance(opf, io.OperatorFile):
        raise CLIError("tmax expects an operator file, not a state set")
    S = opf.subspace()
    res = tmax(S, method=args.method)
    witnessed = res.value > args.tol_sdp
    evidence = {"dA": S.dA, "dB": S.dB, "subspace_dim": S.dim, **_tmax_evidence(res, args.tol_sdp)}
    chain = ["T > 0: the subspace carries a PPT-definite operator"] if witnessed else []
    verdict = "Witnessed" if witnessed else "Inconclusive"
    diag = {"method": args.method, "iterations": res.iterations, "residual": res.residual}
    return verdict, {"file": raw, "method": args.method}, evidence, chain, diag


def cmd_witness(args):
    raw, obj = _load_any(args.path, args.max_dim)
    inputs = {"file": raw, "method": args.method}
    if isinstance(obj, io.OperatorFile):
        wv = strong_unextendibility_witness(obj.subspace(), method=args.method, threshold=args.tol_sdp)
        res = wv.result
        chain = (
            ["T > 0: the subspace carries a PPT-definite operator",
             "supermultiplicativity of T: the subspace is strongly PPT-unextendible"]
            if wv.witnessed else []
        )
        evidence = {"subspace_dim": obj.subspace().dim, **_tmax_evidence(res, args.tol_sdp)}
        return wv.verdict, inputs, evidence, chain, {"method": args.method, "iterations": res.iterations}
    mc = many_copy_ppt_indistinguishable(obj, method=args.method, threshold=args.tol_sdp, support_tol=args.tol_eig)
    d = mc.as_dict()
    evidence = {"witness_state": d["witness_state"], "per_state": d["per_state"], "num_states": len(obj)}
    return mc.verdict, inputs, evidence, d["inference_chain"], {"method": args.method}


def cmd_subspace(args):
    m, n = args.m, args.n
    if not (2 <= m <= n):
        raise CLIError(f"need 2 <= m <= n, got m={m}, n={n}")
    check_size(m * n, args.max_dim)
    coeffs = find_coefficients(m, n)
    rho = assemble_rho(m, n, coeffs)
    dec = verify_block_decomposition(rho, m, n, coeffs)
    smn = build_smn_basis(m, n)
    gen = build_generator_space(m, n)
    lam = rho_pt_lambda_min(m, n, coeffs)
    wv = strong_unextendibility_witness(smn, threshold=args.tol_sdp)
    witnessed = lam > args.tol_eig and wv.witnessed
    evidence = {
        "m": m,
        "n": n,
        "x": [int(v) for v in coeffs.x],
        "y": [int(v) for v in coeffs.y],
        "subspace_dim": smn.dim,
        "generator_dim": gen.dim,
        "orthogonality_defect": float(np.max(np.abs(gen.basis.conj().T @ smn.basis), initial=0.0)),
        "rho_pt_lambda_min": lam,
        "block_sizes": dec.sizes(),
        "off_block_max": dec.off_block_max,
        "label_notes": dec.pattern_notes,
        **_tmax_evidence(wv.result, args.tol_sdp),
    }
    chain = [
        "rho_mn is supported on S_mn and every Hankel block of rho_mn^T_B has positive leading minors",
        "rho_mn is PPT-definite, so S_mn is strongly PPT-unextendible",
    ] if witnessed else []
    if args.out:
        io.write_json(io.OperatorFile(m, n, "subspace", smn.basis).to_json(), args.out)
    if args.rho_out:
        io.write_json(io.OperatorFile(m, n, "density", rho.matrix / rho.trace()).to_json(), args.rho_out)
    return ("Witnessed" if witnessed else "Inconclusive"), {"m": m, "n": n}, evidence, chain, {}


def _pair_vector(args) -> np.ndarray:
    d = args.d
    if d < 2:
        raise CLIError("--d must be at least 2")
    if args.state == "bell":
        return np.eye(d).reshape(-1) / np.sqrt(d)
    if args.state == "product":
        v = np.zeros(d * d)
        v[0] = 1.0
        return v
    if args.state == "schmidt":
        if not args.schmidt:
            raise CLIError("--state schmidt needs --schmidt c1,c2,...")
        c = np.array([float(t) for t in args.schmidt.split(",")])
        if len(c) > d or np.any(c < 0) or not c.any():
            raise CLIError(f"--schmidt needs at most {d} nonnegative values, not all zero")
        c = c / np.linalg.norm(c)
        v = np.zeros((d, d))
        v[np.arange(len(c)), np.arange(len(c))] = c
        return v.reshape(-1)
    rng = np.random.default_rng(args.seed)
    v = rng.normal(size=d * d) + 1j * rng.normal(size=d * d)
    return v / np.linalg.norm(v)


def cmd_examples(args):
    name = EXAMPLE_ALIASES.get(args.name, args.name)
    params = {k: getattr(args, k) for k in ("d", "m", "k", "n", "state", "schmidt", "seed")}
    if name == "pure-pair":
        phi = _pair_vector(args)
        S = pure_state_pair(phi, args.d)
        payload = io.state_set_json(S, pure_vectors=[phi, None])
        sf = schmidt_decompose(phi, args.d, args.d)
        evidence = {**S.metadata, "num_states": len(S)}
        evidence["schmidt_coefficients"] = sf.coefficients.tolist()
    elif name == "bell-mixture":
        if args.m is None or args.k is None:
            raise CLIError("bell-mixture needs --d, --m and --k")
        S = bell_mixture_family(args.d, args.m, args.k)
        basis = generalized_bell_basis(args.d)
        payload = io.state_set_json(S, pure_vectors=[None] + [basis[args.m + j] for j in range(args.k - 1)])
        evidence = {**S.metadata, "num_states": len(S)}
    elif name == "smn":
        m, n = args.m, args.n
        if m is None or n is None or not (2 <= m <= n):
            raise CLIError("smn needs --m and --n with 2 <= m <= n")
        check_size(m * n, args.max_dim)
        smn = build_smn_basis(m, n)
        payload = io.OperatorFile(m, n, "subspace", smn.basis).to_json()
        evidence = {"m": m, "n": n, "subspace_dim": smn.dim}
    else:
        raise CLIError(f"unknown example {args.name!r}; choose pure-pair, bell-mixture or smn")
    if name != "smn" and not check_orthogonality(S):
        raise CLIError("generated states are not orthogonal")
    if args.out:
        io.write_json(payload, args.out)
        evidence["written_to"] = args.out
    else:
        evidence["data"] = payload
    return "Generated", {"name": name, "params": params}, evidence, [], {}


def cmd_discriminate(args):
    raw, obj = _load_any(args.path, args.max_dim)
    if isinstance(obj, io.OperatorFile):
        raise CLIError("discriminate expects a state-set file")
    copies = args.copies
    if copies < 1:
        raise CLIError("--copies must be at least 1")
    check_size((obj.dA * obj.dB) ** copies, args.max_dim)
    res = ppt_discrimination_sdp(obj, mode=args.mode, copies=copies, max_dim=args.max_dim)
    if args.mode == "Perfect":
        ok = res.status == "Feasible"
        verdict = "PerfectlyDistinguishable" if ok else "NotPerfectlyDistinguishable"
    else:
        ok = res.value > args.tol_sdp
        verdict = "UnambiguouslyDistinguishable" if ok else "NotUnambiguouslyDistinguishable"
    evidence = {
        "mode": args.mode,
        "copies": copies,
        "value": res.value,
        "status": res.status,
        "numerical_verdict": res.status != "Feasible",
    }
    diag = {"bisections": res.bisections, "sweeps": res.sweeps, "violations": res.violations}
    return verdict, {"file": raw, "mode": args.mode, "copies": copies}, evidence, [], diag


INCONCLUSIVE = {"Inconclusive"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", help="write the JSON report here instead of stdout")
    common.add_argument("--tol-eig", type=float, default=SUPPORT_TOL,
                        help="relative eigenvalue cutoff for supports (default %(default)g)")
    common.add_argument("--tol-sdp", type=float, default=WITNESS_TOL,
                        help="T must exceed this to count as a witness (default %(default)g)")
    common.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM,
                        help="largest total Hilbert-space dimension allowed (default %(default)d)")
    common.add_argument("--copies", type=int, default=1, help="copy number for discriminate (default 1)")
    common.add_argument("--timestamp", help=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="pptwitness", description="PPT-definite witnesses and PPT discrimination checks")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("tmax", parents=[common], help="solve T(S) for an operator/subspace file")
    s.add_argument("path")
    s.add_argument("--method", choices=["barrier", "dykstra"], default="barrier")
    s.set_defaults(func=cmd_tmax)

    s = sub.add_parser("witness", parents=[common],
                       help="strong unextendibility (operator file) or many-copy verdict (state set)")
    s.add_argument("path")
    s.add_argument("--method", choices=["barrier", "dykstra"], default="barrier")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("subspace", parents=[common], help="build and certify S_mn")
    s.add_argument("m", type=int)
    s.add_argument("n", type=int)
    s.add_argument("--out", help="write the S_mn basis as a subspace file")
    s.add_argument("--rho-out", help="write the normalized rho_mn as a density file")
    s.set_defaults(func=cmd_subspace)

    s = sub.add_parser("examples", parents=[common], help="generate example state sets or subspaces")
    s.add_argument("name", help="pure-pair, bell-mixture or smn")
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--m", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--state", choices=["bell", "product", "schmidt", "random"], default="bell")
    s.add_argument("--schmidt", help="comma-separated Schmidt coefficients for --state schmidt")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="write the generated file here")
    s.set_defaults(func=cmd_examples)

    s = sub.add_parser("discriminate", parents=[common], help="PPT discrimination feasibility at fixed copy number")
    s.add_argument("path")
    s.add_argument("--mode", choices=["Perfect", "Unambiguous"], default="Unambiguous")
    s.set_defaults(func=cmd_discriminate)
    return p


def run(argv=None) -> tuple[int, dict | None]:
    args = build_parser().parse_args(argv)
    try:
        verdict, inputs, evidence, chain, diag = args.func(args)
    except (io.FormatError, CLIError, SizeCapError, CoefficientSearchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR, None
    report = io.make_report(
        args.command,
        _plain({"command": args.command, "inputs": inputs, "tolerances": _tolerances(args)}),
        _tolerances(args),
        verdict,
        _plain(evidence),
        chain,
        _plain(diag),
        timestamp=args.timestamp,
    )
    text = io.write_json(report, args.report)
    if args.report is None:
        sys.stdout.write(text)
    return (EXIT_INCONCLUSIVE if verdict in INCONCLUSIVE else EXIT_VERDICT), report


def main(argv=None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
