"""Table of the S_mn construction: coefficients, lambda_min(rho^T_B) and T(S_mn)."""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from pptwitness.subspaces import (
    assemble_rho,
    build_generator_space,
    build_smn_basis,
    find_coefficients,
    rho_pt_lambda_min,
    verify_block_decomposition,
)
from pptwitness.witness import tmax


@dataclass
class Config:
    max_n: int = 5
    solve_tmax: bool = True
    json_out: str | None = None


def run(cfg: Config) -> list:
    rows = []
    for n in range(2, cfg.max_n + 1):
        for m in range(2, n + 1):
            start = time.perf_counter()
            cs = find_coefficients(m, n)
            dec = verify_block_decomposition(assemble_rho(m, n, cs), m, n, cs)
            row = {
                "m": m,
                "n": n,
                "dim": build_smn_basis(m, n).dim,
                "generator_dim": build_generator_space(m, n).dim,
                "x": cs.x,
                "y": cs.y,
                "lambda_min": rho_pt_lambda_min(m, n, cs),
                "off_block": dec.off_block_max,
            }
            if cfg.solve_tmax:
                res = tmax(build_smn_basis(m, n))
                row.update(T=res.value, T_upper=res.upper_bound, status=res.status)
            row["seconds"] = time.perf_counter() - start
            rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    ap.add_argument("--no-tmax", action="store_true", help="skip the T(S_mn) solves")
    ap.add_argument("--json-out")
    a = ap.parse_args()
    cfg = Config(a.max_n, not a.no_tmax, a.json_out)
    rows = run(cfg)
    print(f"{'m':>2} {'n':>2} {'dim':>4} {'lambda_min':>11} {'T(S_mn)':>11}  x / y")
    for r in rows:
        t = f"{r['T']:.4e}" if "T" in r else "-"
        print(f"{r['m']:>2} {r['n']:>2} {r['dim']:>4} {r['lambda_min']:>11.4e} {t:>11}  {r['x']} / {r['y']}")
    if cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
