"""Track the rescaled probabilities (p_sn - lambda p_x0) / sqrt(1 - lambda)
for lambda = 1 - 2^-k and report how fast they settle."""

import argparse
from dataclasses import dataclass

from ubnob.formats import dumps
from ubnob.linalg import RngStream, random_density
from ubnob.tomography import limit_alpha


@dataclass
class LimitConfig:
    p: int = 3
    k_min: int = 4
    k_max: int = 12
    states: int = 5
    seed: int = 0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=LimitConfig.p)
    ap.add_argument("--k-min", dest="k_min", type=int, default=LimitConfig.k_min)
    ap.add_argument("--k-max", dest="k_max", type=int, default=LimitConfig.k_max)
    ap.add_argument("--states", type=int, default=LimitConfig.states)
    ap.add_argument("--seed", type=int, default=LimitConfig.seed)
    cfg = LimitConfig(**vars(ap.parse_args(argv)))

    lams = [1 - 2.0**-k for k in range(cfg.k_min, cfg.k_max + 1)]
    runs = []
    for i in range(cfg.states):
        rho = random_density(cfg.p, RngStream.derived(cfg.seed, i))
        runs.append(limit_alpha(rho, cfg.p, lams).to_dict())
    print(dumps({"p": cfg.p, "runs": runs}), end="")


if __name__ == "__main__":
    main()
