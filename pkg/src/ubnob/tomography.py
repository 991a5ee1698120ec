"""Measurement simulation and optimal state reconstruction.

Measurements are taken in the p non-orthogonal families psi^s plus the
orthonormal eigenbasis of X. The estimate is expanded on the dual projectors
|phi^s_n><phi^s_n| and the x-basis projectors, one probability per
coefficient.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bases import BasisFamily, build_family
from .errors import DomainError
from .formats import dumps, format_float
from .linalg import RngStream, frobenius_distance, hermitian_eigen, random_density

NEAR_SINGULAR = 1e-6


@dataclass
class ProbabilityTable:
    """Row s of ``p_sn`` holds the outcome probabilities in basis psi^s."""

    p: int
    p_sn: np.ndarray
    p_x: np.ndarray

    def __post_init__(self):
        self.p_sn = np.asarray(self.p_sn, dtype=float)
        self.p_x = np.asarray(self.p_x, dtype=float)
        if self.p_sn.shape != (self.p, self.p) or self.p_x.shape != (self.p,):
            raise ValueError("probability table has the wrong shape")
        if np.any(self.p_sn < 0) or np.any(self.p_sn > 1) or np.any(self.p_x < 0) or np.any(self.p_x > 1):
            raise ValueError("probabilities must lie in [0, 1]")

    def combine(self, other: "ProbabilityTable", a: float) -> "ProbabilityTable":
        """Convex mixture ``a * self + (1 - a) * other``."""
        return ProbabilityTable(self.p, a * self.p_sn + (1 - a) * other.p_sn, a * self.p_x + (1 - a) * other.p_x)


def _expect(rho: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    vals = np.einsum("ni,ij,nj->n", vectors.conj(), rho, vectors)
    return np.clip(vals.real, 0.0, 1.0)


def born_probabilities(rho, family: BasisFamily) -> ProbabilityTable:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (family.p, family.p):
        raise ValueError(f"state dimension {rho.shape} does not match p={family.p}")
    p_sn = np.stack([_expect(rho, b.vectors) for b in family.psi])
    return ProbabilityTable(family.p, p_sn, _expect(rho, family.x_basis.vectors))


def sum_rule(table: ProbabilityTable, lam: float) -> float:
    """Largest deviation of a row sum from ``(1 - lam) + p lam p_x[0]``."""
    expected = (1.0 - lam) + table.p * lam * table.p_x[0]
    return float(np.max(np.abs(table.p_sn.sum(axis=1) - expected)))


def _check_table(table: ProbabilityTable, family: BasisFamily) -> None:
    if table.p != family.p:
        raise ValueError(f"table dimension {table.p} does not match family p={family.p}")


def frame_coefficients(table: ProbabilityTable, family: BasisFamily) -> tuple[np.ndarray, np.ndarray]:
    """Expansion coefficients on the dual projectors and on the x-basis projectors."""
    _check_table(table, family)
    p, lam, mu = family.p, family.lam, family.params.mu
    if lam > 1.0 - NEAR_SINGULAR:
        raise DomainError(f"lambda={lam} too close to 1 for direct reconstruction; use limit_alpha")
    px = table.p_x
    cx = np.empty(p)
    cx[0] = (1.0 - lam) / (1.0 + (p - 1) * lam) * (px[0] - 1.0)
    cx[1:] = px[1:] - px[0] * p * lam / (1.0 - lam) - 1.0
    return mu * table.p_sn, cx


def reconstruct(table: ProbabilityTable, family: BasisFamily) -> np.ndarray:
    c_sn, cx = frame_coefficients(table, family)
    phi = np.stack([b.vectors for b in family.phi])  # (s, n, i)
    rho = np.einsum("sn,sni,snj->ij", c_sn, phi, phi.conj())
    x = family.x_basis.vectors
    rho += np.einsum("n,ni,nj->ij", cx, x, x.conj())
    return rho


def reconstruct_mub_limit(table: ProbabilityTable, family: BasisFamily) -> np.ndarray:
    """Standard orthonormal-MUB estimate; only valid for lambda = 0."""
    _check_table(table, family)
    if family.lam != 0.0:
        raise ValueError("the MUB reconstruction needs lambda = 0")
    rho = -np.eye(family.p, dtype=complex)
    for s, b in enumerate(family.psi):
        rho += np.einsum("n,ni,nj->ij", table.p_sn[s], b.vectors, b.vectors.conj())
    x = family.x_basis.vectors
    rho += np.einsum("n,ni,nj->ij", table.p_x, x, x.conj())
    return rho


def sample_table(table: ProbabilityTable, shots: int, rng: RngStream) -> ProbabilityTable:
    """Shot-noise estimate of an exact table.

    Each non-orthogonal projector is an independent yes/no experiment of
    ``shots`` repetitions; the x-basis is one multinomial of ``shots``.
    """
    if shots < 1:
        raise ValueError("shots must be positive")
    q = np.clip(table.p_sn, 0.0, 1.0)
    p_sn = rng.binomial(shots, q) / shots
    px = np.clip(table.p_x, 0.0, None)
    p_x = rng.multinomial(shots, px / px.sum()) / shots
    return ProbabilityTable(table.p, p_sn, p_x)


def project_to_physical(m) -> np.ndarray:
    """Clip negative eigenvalues and rescale to unit trace."""
    m = np.asarray(m, dtype=complex)
    h = 0.5 * (m + m.conj().T)
    evals, vecs = hermitian_eigen(h)
    clipped = np.clip(evals, 0.0, None)
    total = clipped.sum()
    if total <= 0.0:
        raise DomainError("no positive eigenvalues; cannot project to a state")
    return (vecs * (clipped / total)) @ vecs.conj().T


@dataclass
class LimitDiagnostic:
    alpha_sn: np.ndarray
    lambda_sequence: list[float]
    convergence_deltas: list[float]
    alpha_history: list[np.ndarray]
    reconstruction_errors: list[float]

    def to_dict(self) -> dict:
        return {
            "lambda_sequence": [float(x) for x in self.lambda_sequence],
            "alpha_sn": self.alpha_sn.tolist(),
            "convergence_deltas": [float(x) for x in self.convergence_deltas],
            "reconstruction_errors": [float(x) for x in self.reconstruction_errors],
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


def limit_alpha(rho, p: int, lambda_sequence) -> LimitDiagnostic:
    """Estimate the sqrt(1 - lambda) coefficients of p_sn as lambda -> 1.

    For each lambda, ``alpha_sn = (p_sn - lambda p_x[0]) / sqrt(1 - lambda)``.
    Also records how well the exact table reconstructs ``rho``.
    """
    rho = np.asarray(rho, dtype=complex)
    lams = [float(x) for x in lambda_sequence]
    if any(lam >= 1.0 for lam in lams):
        raise DomainError("lambda sequence must stay below 1")
    history, errors = [], []
    for lam in lams:
        family = build_family(p, lam)
        table = born_probabilities(rho, family)
        history.append((table.p_sn - lam * table.p_x[0]) / math.sqrt(1.0 - lam))
        errors.append(frobenius_distance(reconstruct(table, family), rho))
    deltas = [float(np.max(np.abs(b - a))) for a, b in zip(history, history[1:])]
    return LimitDiagnostic(history[-1], lams, deltas, history, errors)


@dataclass
class SweepResult:
    p: int
    lambda_grid: list[float]
    rms_error: list[float]
    fitted_slope: float
    shots: int
    trials: int
    seed: int

    def to_csv(self) -> str:
        lines = ["lambda,one_minus_lambda,rms_error,trials,shots"]
        for lam, err in zip(self.lambda_grid, self.rms_error):
            lines.append(f"{format_float(lam)},{format_float(1.0 - lam)},{format_float(err)},{self.trials},{self.shots}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "lambda_grid": [float(x) for x in self.lambda_grid],
            "rms_error": [float(x) for x in self.rms_error],
            "fitted_slope": float(self.fitted_slope),
            "shots": self.shots,
            "trials": self.trials,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


def loglog_slope(lambda_grid, errors) -> float:
    """Least-squares slope of log(error) against log(1 - lambda)."""
    x = np.log(1.0 - np.asarray(lambda_grid, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    if len(np.unique(x)) < 2:
        raise ValueError("slope undefined: need at least two distinct lambda values")
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def _cell_errors(p: int, lam: float, lam_index: int, shots: int, trials: int, seed: int) -> list[float]:
    family = build_family(p, lam)
    errs = []
    for trial in range(trials):
        rng = RngStream.derived(seed, lam_index, trial)
        rho = random_density(p, rng)
        noisy = sample_table(born_probabilities(rho, family), shots, rng)
        errs.append(frobenius_distance(reconstruct(noisy, family), rho))
    return errs


def noise_sweep(p: int, lambda_grid, shots: int, trials: int, seed: int, workers: int | None = None) -> SweepResult:
    """Mean Frobenius reconstruction error under shot noise across a lambda grid.

    Each (lambda index, trial) cell draws a fresh state from its own stream,
    so results do not depend on ``workers`` or execution order.
    """
    grid = [float(x) for x in lambda_grid]
    if len(set(grid)) < 2:
        raise ValueError("slope undefined: need at least two distinct lambda values")
    if trials < 2:
        raise ValueError("need at least two trials")
    args = [(p, lam, i, shots, trials, seed) for i, lam in enumerate(grid)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_cell_errors, *zip(*args)))
    else:
        cells = [_cell_errors(*a) for a in args]
    means = [float(np.mean(c)) for c in cells]
    return SweepResult(p, grid, means, loglog_slope(grid, means), shots, trials, int(seed))


def parse_lambda_grid(spec: str) -> list[float]:
    """``start:end:count`` (linear, inclusive) or ``geomspace:start:end:count``.

    The geometric form spaces ``1 - lambda`` geometrically between the two
    endpoint lambdas.
    """
    parts = spec.split(":")
    geometric = parts[0] == "geomspace"
    if geometric:
        parts = parts[1:]
    if len(parts) != 3:
        raise ValueError(f"bad lambda grid {spec!r}; expected start:end:count")
    start, end, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError("grid count must be positive")
    if geometric:
        if start >= 1 or end >= 1:
            raise ValueError("geometric grid endpoints must be below 1")
        return [float(1.0 - x) for x in np.geomspace(1.0 - start, 1.0 - end, count)]
    return [float(x) for x in np.linspace(start, end, count)]
