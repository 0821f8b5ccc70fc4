"""Mixtures of m maximally entangled basis states: measured lambda_min(P^T_B) against 1 - (d^2 - m)/d."""

import argparse
from dataclasses import dataclass

from pptwitness.bipartite import support_projector
from pptwitness.discrimination import bell_mixture_family, many_copy_ppt_indistinguishable, ppt_discrimination_sdp
from pptwitness.witness import tmax


@dataclass
class Config:
    max_d: int = 3
    sdp_copies: int = 1  # 0 skips the discrimination check


def run(cfg: Config) -> list:
    rows = []
    for d in range(2, cfg.max_d + 1):
        # m = d^2 leaves no basis state for a second member, so it is skipped
        for m in range(d * d - d + 1, d * d):
            k = 2
            S = bell_mixture_family(d, m, k)
            T = tmax(support_projector(S.states[0])).value
            verdict = many_copy_ppt_indistinguishable(S).verdict
            sdp = ppt_discrimination_sdp(S, copies=cfg.sdp_copies).value if cfg.sdp_copies else float("nan")
            rows.append((d, m, k, S.metadata["bound"], S.metadata["measured_pt_lambda_min"], T, verdict, sdp))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-d", type=int, default=Config.max_d)
    ap.add_argument("--sdp-copies", type=int, default=Config.sdp_copies)
    a = ap.parse_args()
    print(f"{'d':>2} {'m':>3} {'k':>2} {'bound':>8} {'measured':>9} {'T':>9}  {'verdict':<26} sdp value")
    for d, m, k, b, lam, T, v, sdp in run(Config(a.max_d, a.sdp_copies)):
        print(f"{d:>2} {m:>3} {k:>2} {b:>8.4f} {lam:>9.4f} {T:>9.4f}  {v:<26} {sdp:.2g}")


if __name__ == "__main__":
    main()
