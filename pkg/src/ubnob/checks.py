"""Numerical verification of the structural identities of a basis family.

Every check reports the largest violation it saw together with the tolerance
it was judged against, so that sweeps over lambda can trend conditioning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bases import BasisFamily, zx_eigen_residual


def default_tolerance(lam: float) -> float:
    return 1e-10 if lam <= 0.9 else 1e-8


@dataclass
class CheckResult:
    name: str
    max_violation: float
    tolerance: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.max_violation < self.tolerance)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "max_violation": float(self.max_violation),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            "details": {k: float(v) for k, v in self.details.items()},
        }


@dataclass
class VerificationReport:
    p: int
    lam: float
    checks: list[CheckResult]

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "lambda": float(self.lam),
            "checks": [c.to_dict() for c in self.checks],
            "overall_pass": self.overall_pass,
        }


def _result(name, violation, tol, **details) -> CheckResult:
    v = float(violation)
    # NaN must fail, never pass silently.
    if math.isnan(v):
        v = math.inf
    return CheckResult(name, v, tol, details)


def _peak(*vals) -> float:
    """Maximum that propagates NaN, unlike the builtin."""
    return float(np.max(np.asarray(vals, dtype=float)))


def unbiasedness_violation(family: BasisFamily, swap: bool = False) -> float:
    """Largest deviation of ``|<phi^t_m|psi^s_n>|^2`` from its predicted value.

    With ``swap`` the roles are exchanged, ``|<psi^t_m|phi^s_n>|^2``.
    """
    p, mu = family.p, family.params.mu
    worst = 0.0
    eye = np.eye(p)
    for t in range(p):
        left = family.psi[t] if swap else family.phi[t]
        for s in range(p):
            right = family.phi[s] if swap else family.psi[s]
            sq = np.abs(left.overlaps(right)) ** 2
            expected = eye / mu if s == t else np.full((p, p), 1.0 / (mu * p))
            worst = _peak(worst, np.max(np.abs(sq - expected)))
    return worst


def check_unbiasedness(family: BasisFamily, tol: float) -> CheckResult:
    return _result("unbiasedness", unbiasedness_violation(family), tol)


def identity_residuals(family: BasisFamily) -> tuple[np.ndarray, np.ndarray]:
    """Frobenius residuals of both identity decompositions, one entry per s."""
    p = family.p
    lam, mu, nu = family.lam, family.params.mu, family.params.nu
    px = family.x_basis.projectors()
    rest = px[1:].sum(axis=0)
    first = px[0]
    eye = np.eye(p)
    psi_res = np.empty(p)
    phi_res = np.empty(p)
    for s in range(p):
        rhs_psi = (
            mu * family.psi[s].projectors().sum(axis=0)
            - nu * (1.0 - lam) * rest
            + nu * (p - 1) * (1.0 + (p - 1) * lam) * first
        )
        rhs_phi = (
            mu * family.phi[s].projectors().sum(axis=0)
            - lam * (mu - nu) * rest
            + lam * (p - 1) * (mu + (p - 1) * nu) * first
        )
        psi_res[s] = np.linalg.norm(rhs_psi - eye)
        phi_res[s] = np.linalg.norm(rhs_phi - eye)
    return psi_res, phi_res


def check_identity_decompositions(family: BasisFamily, tol: float) -> CheckResult:
    psi_res, phi_res = identity_residuals(family)
    return _result(
        "identity_decompositions",
        _peak(psi_res.max(), phi_res.max()),
        tol,
        non_orthogonal=psi_res.max(),
        biorthogonal=phi_res.max(),
    )


def dual_pair_residuals(family: BasisFamily) -> dict[str, float]:
    p = family.p
    Z, X = family.Z, family.X
    eye = np.eye(p)
    omega = family.params.omega
    return {
        "commutation": float(np.linalg.norm(Z @ X - omega * X @ Z)),
        "z_cyclic": float(np.linalg.norm(np.linalg.matrix_power(Z, p) - eye)),
        "x_cyclic": float(np.linalg.norm(np.linalg.matrix_power(X, p) - eye)),
        "x_unitary": float(np.linalg.norm(X @ X.conj().T - eye)),
    }


def check_dual_pair(family: BasisFamily, tol: float) -> CheckResult:
    res = dual_pair_residuals(family)
    return _result("dual_pair", _peak(*res.values()), tol, **res)


def check_gram_law(family: BasisFamily, tol: float) -> CheckResult:
    """Every psi^s is equally separated, every phi^s with separation |eta|."""
    p, lam, eta = family.p, family.lam, family.params.eta
    eye = np.eye(p)
    worst_psi = worst_phi = 0.0
    for s in range(p):
        g = np.abs(family.psi[s].gram())
        worst_psi = _peak(worst_psi, np.max(np.abs(g - (eye + abs(lam) * (1 - eye)))))
        h = np.abs(family.phi[s].gram())
        worst_phi = _peak(worst_phi, np.max(np.abs(h - (eye + abs(eta) * (1 - eye)))))
    # The seed overlap is real and signed; compare the complex Gram there.
    seed = float(np.max(np.abs(family.psi[0].gram() - ((1 - lam) * eye + lam))))
    worst = _peak(worst_psi, worst_phi, seed)
    return _result("gram_law", worst, tol, psi=_peak(worst_psi, seed), phi=worst_phi)


def check_biorthogonality(family: BasisFamily, tol: float) -> CheckResult:
    p, mu = family.p, family.params.mu
    target = np.eye(p) / math.sqrt(mu)
    worst = _peak(*(np.max(np.abs(family.phi[s].overlaps(family.psi[s]) - target)) for s in range(p)))
    return _result("biorthogonality", worst, tol)


def check_shift(family: BasisFamily, tol: float) -> CheckResult:
    """``X^n psi_0 = psi_n`` and ``X^n phi_0 = phi_n``."""
    psi, phi = family.psi[0].vectors, family.phi[0].vectors
    worst = 0.0
    xn = np.eye(family.p, dtype=complex)
    for n in range(family.p):
        worst = _peak(worst, np.linalg.norm(xn @ psi[0] - psi[n]), np.linalg.norm(xn @ phi[0] - phi[n]))
        xn = family.X @ xn
    return _result("shift", worst, tol)


def check_eigenstructure(family: BasisFamily, tol: float) -> CheckResult:
    """Z psi_n = omega^n psi_n, Z^s X eigenbases, and X acting diagonally on the x-basis."""
    p = family.p
    w = family.params.omega
    z_res = _peak(*(np.linalg.norm(family.Z @ v - w**n * v) for n, v in enumerate(family.psi[0].vectors)))
    zx_res = _peak(0.0, *(zx_eigen_residual(family, s) for s in range(1, p)))
    x_res = 0.0
    for v in family.x_basis.vectors:
        xv = family.X @ v
        ev = np.vdot(v, xv)
        x_res = _peak(x_res, np.linalg.norm(xv - ev * v))
    orth = float(np.linalg.norm(family.x_basis.gram() - np.eye(p)))
    return _result("eigenstructure", _peak(z_res, zx_res, x_res, orth), tol, z=z_res, zx=zx_res, x=x_res, x_orthonormal=orth)


@dataclass(frozen=True)
class NotMubWitness:
    s: int
    t: int
    overlap_min: float
    overlap_max: float
    uniform: bool = False

    @property
    def spread(self) -> float:
        return self.overlap_max - self.overlap_min


def witness_not_mub(family: BasisFamily, threshold: float = 1e-6) -> NotMubWitness:
    """Find two psi-families whose cross overlaps are not all of one modulus.

    Returns the pair (s, t) with the largest spread. When no pair exceeds
    ``threshold`` the witness is flagged ``uniform``: this happens at
    lambda = 0, and for p = 2 where the single pair has constant modulus
    sqrt((1 + lambda^2) / 2).
    """
    p = family.p
    best = None
    for s in range(p):
        for t in range(s + 1, p):
            mod = np.abs(family.psi[s].overlaps(family.psi[t]))
            w = NotMubWitness(s, t, float(mod.min()), float(mod.max()))
            if best is None or w.spread > best.spread:
                best = w
    if best.spread <= threshold:
        return NotMubWitness(best.s, best.t, best.overlap_min, best.overlap_max, uniform=True)
    return best


def full_report(family: BasisFamily, tol: float | None = None) -> VerificationReport:
    if tol is None:
        tol = default_tolerance(family.lam)
    checks = [
        check_gram_law(family, tol),
        check_biorthogonality(family, tol),
        check_unbiasedness(family, tol),
        check_identity_decompositions(family, tol),
        check_dual_pair(family, tol),
        check_shift(family, tol),
        check_eigenstructure(family, tol),
    ]
    return VerificationReport(family.p, family.lam, checks)
