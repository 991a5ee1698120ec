"""Command-line driver: ``ubnob {bases,verify,tomo,sweep,qubit}``.

Exit codes: 0 ok, 1 verification failed, 2 usage, 3 I/O, 4 domain error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import qubit as qb
from .bases import build_family
from .checks import default_tolerance, full_report, witness_not_mub
from .errors import ConstructionError, DomainError, InapplicableError
from .formats import basis_to_json, dumps, load_density, matrix_to_json, write_text
from .linalg import RngStream, frobenius_distance, is_prime, random_density
from .tomography import (
    born_probabilities,
    noise_sweep,
    parse_lambda_grid,
    project_to_physical,
    reconstruct,
    sample_table,
    sum_rule,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO, EXIT_DOMAIN = 0, 1, 2, 3, 4
SEED_ENV = "UBNOB_SEED"


@dataclass
class RunConfig:
    command: str
    p: int | None = None
    lam: float | None = None
    shots: int | None = None
    trials: int | None = None
    seed: int | None = None
    state_path: str | None = None
    tol: float | None = None
    out_path: str | None = None
    lambda_grid: list[float] | None = None
    r2: float | None = None
    workers: int | None = None
    grid: int = 100


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _grid(text: str) -> list[float]:
    try:
        return parse_lambda_grid(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ubnob", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, need_lambda=True):
        sp.add_argument("--p", type=_prime, required=True, help="prime dimension")
        if need_lambda:
            sp.add_argument("--lambda", dest="lam", type=float, required=True, help="overlap between seed states")
        sp.add_argument("--out", dest="out_path", help="output file (stdout if omitted)")

    common(sub.add_parser("bases", help="write the basis family as JSON"))

    sp = sub.add_parser("verify", help="run the structural checks")
    common(sp)
    sp.add_argument("--tol", type=float, help="tolerance (default depends on lambda)")

    sp = sub.add_parser("tomo", help="reconstruct a state from simulated measurements")
    common(sp)
    sp.add_argument("--state", dest="state_path", required=True, help="density matrix JSON")
    sp.add_argument("--shots", type=_positive_int, help="sample with this many shots per projector")
    sp.add_argument("--seed", type=int)

    sp = sub.add_parser("sweep", help="shot-noise error scaling over a lambda grid")
    common(sp, need_lambda=False)
    sp.add_argument("--lambda-grid", dest="lambda_grid", type=_grid, required=True,
                    help="start:end:count or geomspace:start:end:count")
    sp.add_argument("--shots", type=_positive_int, required=True)
    sp.add_argument("--trials", type=_positive_int, required=True)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--workers", type=_positive_int)

    sp = sub.add_parser("qubit", help="two-dimensional POVM pair pipeline")
    sp.add_argument("--r2", type=float, required=True, help="squared cross overlap r^2 in (0, 1/2)")
    sp.add_argument("--state", dest="state_path", help="density matrix JSON (random if omitted)")
    sp.add_argument("--shots", type=_positive_int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--grid", type=_positive_int, default=100, help="points per axis for the third-basis search")
    sp.add_argument("--out", dest="out_path")
    return parser


def parse_args(argv=None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(ns).items()})
    if cfg.command == "sweep" and cfg.trials < 2:
        parser.error("--trials must be at least 2")
    if cfg.command == "sweep" and len(set(cfg.lambda_grid)) < 2:
        parser.error("--lambda-grid needs at least two distinct values")
    return cfg


def _seed(cfg: RunConfig) -> int:
    if cfg.seed is not None:
        return cfg.seed
    env = os.environ.get(SEED_ENV)
    return int(env) if env else 0


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out_path:
        write_text(cfg.out_path, text)
    else:
        sys.stdout.write(text)


def _cmd_bases(cfg: RunConfig) -> int:
    fam = build_family(cfg.p, cfg.lam)
    pr = fam.params
    doc = {
        "p": pr.p,
        "lambda": pr.lam,
        "mu": pr.mu,
        "nu": pr.nu,
        "eta": pr.eta,
        "psi": [matrix_to_json(b.vectors) for b in fam.psi],
        "phi": [matrix_to_json(b.vectors) for b in fam.phi],
        "x_basis": matrix_to_json(fam.x_basis.vectors),
        "Z": matrix_to_json(fam.Z),
        "X": matrix_to_json(fam.X),
    }
    _emit(cfg, dumps(doc))
    return EXIT_OK


def _cmd_verify(cfg: RunConfig) -> int:
    fam = build_family(cfg.p, cfg.lam)
    tol = cfg.tol if cfg.tol is not None else default_tolerance(cfg.lam)
    report = full_report(fam, tol)
    doc = report.to_dict()
    w = witness_not_mub(fam)
    doc["not_mub_witness"] = {
        "s": w.s, "t": w.t, "overlap_min": w.overlap_min, "overlap_max": w.overlap_max, "uniform": w.uniform,
    }
    _emit(cfg, dumps(doc))
    return EXIT_OK if report.overall_pass else EXIT_FAIL


def _cmd_tomo(cfg: RunConfig, rho: np.ndarray) -> int:
    if rho.shape[0] != cfg.p:
        raise DomainError(f"state has dimension {rho.shape[0]}, expected {cfg.p}")
    fam = build_family(cfg.p, cfg.lam)
    table = born_probabilities(rho, fam)
    exact_violation = sum_rule(table, cfg.lam)
    if cfg.shots:
        table = sample_table(table, cfg.shots, RngStream(_seed(cfg)))
    est = reconstruct(table, fam)
    doc = {
        "p": cfg.p,
        "lambda": cfg.lam,
        "shots": cfg.shots,
        "seed": _seed(cfg) if cfg.shots else None,
        "p_sn": table.p_sn.tolist(),
        "p_x": table.p_x.tolist(),
        "sum_rule_violation": exact_violation,
        "reconstructed": matrix_to_json(est),
        "trace": float(np.trace(est).real),
        "frobenius_error": frobenius_distance(est, rho),
        "projected": matrix_to_json(project_to_physical(est)),
    }
    _emit(cfg, dumps(doc))
    return EXIT_OK


def _cmd_sweep(cfg: RunConfig) -> int:
    result = noise_sweep(cfg.p, cfg.lambda_grid, cfg.shots, cfg.trials, _seed(cfg), workers=cfg.workers)
    if cfg.out_path:
        stem = Path(cfg.out_path)
        stem = stem.with_suffix("") if stem.suffix in (".csv", ".json") else stem
        write_text(f"{stem}.csv", result.to_csv())
        write_text(f"{stem}.json", result.to_json())
    else:
        sys.stdout.write(result.to_csv())
    return EXIT_OK


def _cmd_qubit(cfg: RunConfig, rho: np.ndarray | None) -> int:
    r = math.sqrt(cfg.r2) if cfg.r2 > 0 else float("nan")
    if not 0.0 < cfg.r2 < 0.5:
        raise DomainError(f"r^2={cfg.r2} must lie strictly between 0 and 1/2")
    pair = qb.povm_pair(r)
    if rho is None:
        rho = random_density(2, RngStream(_seed(cfg)))
    if rho.shape != (2, 2):
        raise DomainError("qubit pipeline needs a 2x2 state")
    probs = qb.qubit_probabilities(rho, pair)
    if cfg.shots:
        rng = RngStream(_seed(cfg))
        probs = rng.binomial(cfg.shots, np.clip(probs, 0.0, 1.0)) / cfg.shots
    q, est = qb.qubit_reconstruct(probs, pair)
    printed = qb.printed_qkj(probs, r)
    ratio, ratio_res = qb.comparator_ratio(printed, q)
    pr = pair.params
    doc = {
        "r2": cfg.r2,
        "params": {
            "theta": pr.theta, "phi": pr.phi, "phi1": pr.phi1, "phi2": pr.phi2, "r": pr.r,
            "lambda1": pr.lambda1, "lambda2": pr.lambda2,
        },
        "xi1": basis_to_json(pair.xi1.vectors),
        "xi2": basis_to_json(pair.xi2.vectors),
        "max_unbiasedness_deviation": float(np.max(np.abs(pair.cross_overlaps() - r))),
        "povm_residual": float(np.linalg.norm(pair.projector_sum() - 2 * np.eye(2))),
        "probabilities": probs.tolist(),
        "q": q.tolist(),
        "q_sum": float(q.sum()),
        "reconstructed": matrix_to_json(est),
        "frobenius_error": frobenius_distance(est, rho),
        "printed_q": printed.tolist(),
        "comparator_ratio": ratio,
        "comparator_residual": ratio_res,
    }
    if abs(cfg.r2 - qb.SIC_R2) <= 1e-9:
        sic = qb.sic_reconstruct(probs, pair)
        doc["sic_reconstructed"] = matrix_to_json(sic)
        doc["sic_vs_gram"] = frobenius_distance(sic, est)
    doc["third_basis_min_residual"] = qb.third_basis_search(pair, cfg.grid)
    _emit(cfg, dumps(doc))
    return EXIT_OK


def run(cfg: RunConfig) -> int:
    rho = None
    if cfg.state_path:
        try:
            rho = load_density(cfg.state_path)
        except DomainError as exc:
            print(f"ubnob: invalid state: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        except (OSError, ValueError) as exc:
            print(f"ubnob: cannot read {cfg.state_path}: {exc}", file=sys.stderr)
            return EXIT_IO
    try:
        if cfg.command == "bases":
            return _cmd_bases(cfg)
        if cfg.command == "verify":
            return _cmd_verify(cfg)
        if cfg.command == "tomo":
            return _cmd_tomo(cfg, rho)
        if cfg.command == "sweep":
            return _cmd_sweep(cfg)
        if cfg.command == "qubit":
            return _cmd_qubit(cfg, rho)
    except OSError as exc:
        print(f"ubnob: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DomainError, InapplicableError, ConstructionError, ValueError) as exc:
        print(f"ubnob: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    raise ValueError(f"unknown command {cfg.command!r}")


def main(argv=None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
