"""Shot-noise reconstruction error as lambda approaches 1.

Writes CSV and JSON with the fitted log-log slope against 1 - lambda.
"""

import argparse
from dataclasses import asdict, dataclass
from pathlib import Path

from ubnob.formats import write_text
from ubnob.tomography import noise_sweep, parse_lambda_grid


@dataclass
class ScalingConfig:
    p: int = 3
    grid: str = "geomspace:0.9:0.99:6"
    shots: int = 10_000
    trials: int = 50
    seed: int = 7
    workers: int | None = None
    out: str = "results/error_scaling"


def main(argv=None):
    defaults = ScalingConfig()
    ap = argparse.ArgumentParser(description=__doc__)
    for name, value in asdict(defaults).items():
        ap.add_argument(f"--{name}", type=type(value) if value is not None else int, default=value)
    cfg = ScalingConfig(**vars(ap.parse_args(argv)))

    result = noise_sweep(cfg.p, parse_lambda_grid(cfg.grid), cfg.shots, cfg.trials, cfg.seed, workers=cfg.workers)
    stem = Path(cfg.out)
    stem.parent.mkdir(parents=True, exist_ok=True)
    write_text(f"{stem}.csv", result.to_csv())
    write_text(f"{stem}.json", result.to_json())
    print(result.to_csv(), end="")
    print(f"fitted slope: {result.fitted_slope:.4f}")


if __name__ == "__main__":
    main()
