"""Qubit pair walkthrough: POVM residual, Gram vs closed-form coefficients,
and the third-basis search, for a few r^2 values."""

import argparse
import math
from dataclasses import dataclass, field

import numpy as np

from ubnob import qubit as qb
from ubnob.linalg import RngStream, frobenius_distance, random_density


@dataclass
class DemoConfig:
    r2_values: list[float] = field(default_factory=lambda: [0.1, 0.25, 1 / 3, 0.45])
    states: int = 20
    grid: int = 100
    seed: int = 0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r2", dest="r2_values", type=float, nargs="+", default=DemoConfig().r2_values)
    ap.add_argument("--states", type=int, default=DemoConfig.states)
    ap.add_argument("--grid", type=int, default=DemoConfig.grid)
    ap.add_argument("--seed", type=int, default=DemoConfig.seed)
    cfg = DemoConfig(**vars(ap.parse_args(argv)))

    print("r2        povm_res   max_err    ratio      third_basis")
    for r2 in cfg.r2_values:
        pair = qb.povm_pair(math.sqrt(r2))
        povm = np.linalg.norm(pair.projector_sum() - 2 * np.eye(2))
        errs, ratios = [], []
        for i in range(cfg.states):
            rho = random_density(2, RngStream.derived(cfg.seed, i))
            probs = qb.qubit_probabilities(rho, pair)
            q, est = qb.qubit_reconstruct(probs, pair)
            errs.append(frobenius_distance(est, rho))
            ratios.append(qb.comparator_ratio(qb.printed_qkj(probs, pair.params.r), q)[0])
        gap = qb.third_basis_search(pair, cfg.grid)
        print(f"{r2:<9.4f} {povm:<10.2e} {max(errs):<10.2e} {np.mean(ratios):<10.6f} {gap:.4f}")


if __name__ == "__main__":
    main()
