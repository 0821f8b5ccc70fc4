"""Entangled pure state |phi> against its normalized complement: bound 1 - lambda1^2 versus T."""

import argparse
from dataclasses import dataclass

import numpy as np

from pptwitness.bipartite import schmidt_decompose, support_projector
from pptwitness.discrimination import many_copy_ppt_indistinguishable, pure_state_pair
from pptwitness.witness import tmax


@dataclass
class Config:
    samples: int = 10
    dims: tuple = (2, 3)
    seed: int = 0


def run(cfg: Config) -> list:
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for d in cfg.dims:
        for _ in range(cfg.samples):
            phi = rng.normal(size=d * d) + 1j * rng.normal(size=d * d)
            phi /= np.linalg.norm(phi)
            S = pure_state_pair(phi, d)
            lam1 = schmidt_decompose(phi, d, d).coefficients[0]
            res = tmax(support_projector(S.states[1]))
            verdict = many_copy_ppt_indistinguishable(S).verdict
            rows.append((d, lam1**2, 1 - lam1**2, res.spectral_bound, res.value, res.upper_bound, verdict))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--dims", type=int, nargs="+", default=list(Config.dims))
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    rows = run(Config(a.samples, tuple(a.dims), a.seed))
    print(f"{'d':>2} {'lambda1^2':>10} {'1-lambda1^2':>12} {'spectral':>10} {'T':>10} {'T upper':>10}  verdict")
    for d, l2, b, s, t, u, v in rows:
        print(f"{d:>2} {l2:>10.6f} {b:>12.6f} {s:>10.6f} {t:>10.6f} {u:>10.6f}  {v}")


if __name__ == "__main__":
    main()
