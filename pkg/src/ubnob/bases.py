"""Equally separated bases in prime dimension, their duals and the Z/X pair.

Vectors are stored as rows: ``basis.vectors[n]`` is the n-th state written in
the computational basis. The seed basis is embedded so that the eigenbasis of
the shift operator X is exactly the computational basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstructionError, DomainError
from .linalg import is_prime, mod_inverse, omega_powers

INPUT_TOL = 1e-9


@dataclass(frozen=True)
class SeparationParams:
    p: int
    lam: float
    mu: float
    nu: float
    eta: float

    @property
    def omega(self) -> complex:
        return complex(np.exp(2j * np.pi / self.p))


def lambda_domain(p: int) -> tuple[float, float]:
    """Open interval of overlaps for which the Gram matrix is positive definite."""
    return -1.0 / (p - 1), 1.0


def separation_params(p: int, lam: float) -> SeparationParams:
    if not is_prime(p):
        raise ValueError(f"dimension {p} is not prime")
    lam = float(lam)
    lo, hi = lambda_domain(p)
    if not lo < lam < hi:
        raise DomainError(f"lambda={lam} outside ({lo:.6g}, {hi}); Gram matrix not positive definite")
    denom = (1.0 - lam) * (1.0 + (p - 1) * lam)
    mu = (1.0 + (p - 2) * lam) / denom
    nu = -lam / denom
    # eta is undefined where mu vanishes (only reachable for negative lambda).
    eta = nu / mu if mu != 0.0 else math.nan
    return SeparationParams(p=p, lam=lam, mu=mu, nu=nu, eta=eta)


@dataclass(frozen=True)
class Basis:
    vectors: np.ndarray

    def __post_init__(self):
        v = np.array(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("a basis needs p vectors of length p")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def p(self) -> int:
        return self.vectors.shape[0]

    def __len__(self) -> int:
        return self.p

    def __getitem__(self, n: int) -> np.ndarray:
        return self.vectors[n]

    def gram(self) -> np.ndarray:
        """``G[m, n] = <v_m|v_n>``."""
        return self.vectors.conj() @ self.vectors.T

    def overlaps(self, other: "Basis") -> np.ndarray:
        """``O[m, n] = <self_m|other_n>``."""
        return self.vectors.conj() @ other.vectors.T

    def projectors(self) -> np.ndarray:
        return np.einsum("ni,nj->nij", self.vectors, self.vectors.conj())


@dataclass(frozen=True)
class BasisFamily:
    params: SeparationParams
    psi: tuple[Basis, ...]
    phi: tuple[Basis, ...]
    x_basis: Basis
    Z: np.ndarray
    X: np.ndarray

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def lam(self) -> float:
        return self.params.lam


def seed_basis(p: int, lam: float) -> Basis:
    """Seed family with Gram matrix ``(1-lam) delta + lam``."""
    separation_params(p, lam)
    n = np.arange(p)
    vecs = np.empty((p, p), dtype=complex)
    vecs[:, 0] = math.sqrt(1.0 + (p - 1) * lam)
    vecs[:, 1:] = math.sqrt(1.0 - lam) * omega_powers(p, -np.outer(n, n[1:]))
    return Basis(vecs / math.sqrt(p))


def _check_gram(basis: Basis, lam: float, what: str) -> None:
    p = basis.p
    expected = (1.0 - lam) * np.eye(p) + lam
    err = np.max(np.abs(basis.gram() - expected))
    if err > INPUT_TOL:
        raise ValueError(f"{what} is not equally separated with overlap {lam} (error {err:.2e})")


def biorthogonal_dual(basis: Basis, params: SeparationParams) -> Basis:
    """Dual family with ``<phi_m|psi_n> = delta_mn / sqrt(mu)``."""
    if basis.p != params.p:
        raise ValueError("basis dimension does not match params")
    _check_gram(basis, params.lam, "basis")
    root_mu = math.sqrt(params.mu)
    psi = basis.vectors
    total = psi.sum(axis=0)
    phi = root_mu * psi + (params.nu / root_mu) * (total[None, :] - psi)
    return Basis(phi)


def _check_biorthogonal(psi: Basis, phi: Basis, params: SeparationParams) -> None:
    expected = np.eye(params.p) / math.sqrt(params.mu)
    err = np.max(np.abs(phi.overlaps(psi) - expected))
    if err > INPUT_TOL * max(1.0, params.mu):
        raise ValueError(f"bases are not a bi-orthogonal pair (error {err:.2e})")


def op_Z(psi: Basis, phi: Basis, params: SeparationParams) -> np.ndarray:
    """Non-unitary cyclic operator with ``Z psi_n = omega^n psi_n``."""
    _check_biorthogonal(psi, phi, params)
    w = omega_powers(params.p, np.arange(params.p))
    return math.sqrt(params.mu) * (psi.vectors.T * w) @ phi.vectors.conj()


def op_X(psi: Basis, phi: Basis, params: SeparationParams) -> np.ndarray:
    """Unitary shift with ``X psi_n = psi_{n+1}`` (indices mod p)."""
    _check_biorthogonal(psi, phi, params)
    shifted = np.roll(psi.vectors, -1, axis=0)
    return math.sqrt(params.mu) * shifted.T @ phi.vectors.conj()


def displacement_phase(p: int, s: int) -> complex:
    """Phase ``e^{i phi_s}`` attached to the eigenvalues of ``Z^s X``."""
    if p == 2:
        return 1j
    return complex(omega_powers(p, mod_inverse(2, p) * s))


def displacement_coefficients(p: int, s: int) -> np.ndarray:
    """``C[n, m]`` with ``|psi^s_n> = sum_m C[n, m] |psi_m>``."""
    if not 1 <= s <= p - 1:
        raise ValueError(f"displacement index s={s} outside 1..{p - 1}")
    if p == 2:
        return np.array([[1.0, 1j], [1.0, -1j]]) / math.sqrt(2.0)
    half = mod_inverse(2, p)
    m = np.arange(p)
    expo = half * s * m[None, :] ** 2 + np.outer(m, m)
    return omega_powers(p, expo) / math.sqrt(p)


def displaced_basis(seed: Basis, s: int) -> Basis:
    """Eigenbasis of ``Z^s X`` built from the seed family."""
    return Basis(displacement_coefficients(seed.p, s) @ seed.vectors)


def displaced_dual(dual: Basis, s: int) -> Basis:
    """The same displacement applied to the dual family."""
    return Basis(displacement_coefficients(dual.p, s) @ dual.vectors)


def x_eigenbasis(p: int, lam: float) -> Basis:
    """Orthonormal eigenbasis of X; with this embedding it is the computational basis."""
    separation_params(p, lam)
    return Basis(np.eye(p, dtype=complex))


def x_eigenbasis_from_seed(seed: Basis, lam: float) -> Basis:
    """X-eigenstates assembled as explicit combinations of the seed states."""
    p = seed.p
    n = np.arange(p)
    coeffs = omega_powers(p, np.outer(n, n)).astype(complex)
    coeffs[0] /= math.sqrt(p * (1.0 + (p - 1) * lam))
    coeffs[1:] /= math.sqrt(p * (1.0 - lam))
    return Basis(coeffs @ seed.vectors)


def zx_eigen_residual(family: BasisFamily, s: int) -> float:
    """Largest ``||Z^s X v_n - omega^{-n} e^{i phi_s} v_n||`` over the s-th basis."""
    p = family.p
    op = np.linalg.matrix_power(family.Z, s) @ family.X
    phase = displacement_phase(p, s)
    worst = 0.0
    for n, v in enumerate(family.psi[s].vectors):
        target = complex(omega_powers(p, -n)) * phase * v
        worst = max(worst, float(np.linalg.norm(op @ v - target)))
    return worst


def build_family(p: int, lam: float) -> BasisFamily:
    params = separation_params(p, lam)
    psi0 = seed_basis(p, lam)
    phi0 = biorthogonal_dual(psi0, params)
    Z = op_Z(psi0, phi0, params)
    X = op_X(psi0, phi0, params)
    psi = [psi0] + [displaced_basis(psi0, s) for s in range(1, p)]
    phi = [phi0] + [displaced_dual(phi0, s) for s in range(1, p)]
    for arr in (Z, X):
        arr.setflags(write=False)
    family = BasisFamily(
        params=params,
        psi=tuple(psi),
        phi=tuple(phi),
        x_basis=x_eigenbasis(p, lam),
        Z=Z,
        X=X,
    )
    # Fixes the sign convention of the p = 2 displaced basis; must never be swapped silently.
    tol = 1e-10 * max(1.0, params.mu)
    for s in range(1, p):
        res = zx_eigen_residual(family, s)
        if res > tol:
            raise ConstructionError(f"Z^{s}X eigen-residual {res:.2e} exceeds {tol:.1e}")
    return family
