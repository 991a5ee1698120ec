"""Two-dimensional unbiased non-orthogonal basis pairs.

The first basis is ``xi^1_0 = |0>``, ``xi^1_1 = e^{i phi} cos(theta)|0> + sin(theta)|1>``;
its partner ``xi^2`` has every cross overlap of modulus ``r``. When
``lambda_1^2 = 1 - 2 r^2`` the four projectors sum to twice the identity and
the pair is informationally complete on its own.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .bases import Basis, build_family
from .errors import DomainError, InapplicableError, NoSolutionError
from .linalg import projector

SIC_R2 = 1.0 / 3.0


@dataclass(frozen=True)
class QubitParams:
    theta: float
    phi: float
    phi1: float
    r: float

    @property
    def lambda1(self) -> float:
        return math.cos(self.theta)

    @property
    def theta1(self) -> float:
        return math.acos(self.r)

    @property
    def phi2(self) -> float:
        return 2.0 * self.phi - self.phi1

    @property
    def lambda2(self) -> float:
        """Overlap modulus inside the partner basis."""
        return math.sqrt(max(0.0, 1.0 - math.sin(2 * self.theta1) ** 2 * math.sin(self.phi - self.phi1) ** 2))


@dataclass(frozen=True)
class QubitPair:
    xi1: Basis
    xi2: Basis
    params: QubitParams

    def states(self) -> np.ndarray:
        """Rows ordered (s=1 j=0, s=1 j=1, s=2 j=0, s=2 j=1)."""
        return np.vstack([self.xi1.vectors, self.xi2.vectors])

    def cross_overlaps(self) -> np.ndarray:
        """``|<xi^2_n|xi^1_m>|`` indexed [n, m]."""
        return np.abs(self.xi2.overlaps(self.xi1))

    def operator_gram(self) -> np.ndarray:
        """``G[a, b] = |<xi_a|xi_b>|^2 = tr(P_a P_b)``."""
        v = self.states()
        return np.abs(v.conj() @ v.T) ** 2

    def projector_sum(self) -> np.ndarray:
        return sum(projector(v) for v in self.states())


def first_basis(theta: float, phi: float) -> Basis:
    if not 0.0 < theta < math.pi:
        raise DomainError("theta must lie strictly between 0 and pi (states would coincide)")
    return Basis(np.array([[1.0, 0.0], [np.exp(1j * phi) * math.cos(theta), math.sin(theta)]]))


def partner_phase_cosine(lambda1: float, r: float) -> float:
    """``cos(phi - phi1)`` required for unbiasedness; 0 in the orthogonal case."""
    if abs(lambda1) < 1e-15:
        if abs(r * r - 0.5) > 1e-12:
            raise NoSolutionError(f"orthogonal first basis forces r = 1/sqrt(2), got r = {r}")
        return 0.0
    return (2 * r * r - 1) / (2 * r * lambda1) * math.sqrt((1 - lambda1**2) / (1 - r * r))


def unbiased_partner(theta: float, phi: float, r: float, branch: int = 1) -> QubitPair:
    """Partner basis with ``|<xi^2_n|xi^1_m>| = r`` for all n, m.

    ``branch=+1`` takes ``phi1 = phi + arccos(c)``; ``-1`` the mirrored root,
    which yields the same pair with the two partner states exchanged.
    """
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    if not 0.0 < r <= math.sqrt(0.5) + 1e-15:
        raise DomainError(f"r={r} outside (0, 1/sqrt(2)]")
    xi1 = first_basis(theta, phi)
    lambda1 = math.cos(theta)
    c = partner_phase_cosine(lambda1, r)
    if abs(c) > 1.0 + 1e-12:
        raise NoSolutionError(f"no partner basis: required |cos(phi - phi1)| = {abs(c):.6g} exceeds 1")
    c = max(-1.0, min(1.0, c))
    phi1 = phi + branch * math.acos(c)
    params = QubitParams(theta=theta, phi=phi, phi1=phi1, r=r)
    s1 = math.sqrt(1.0 - r * r)
    xi2 = Basis(np.array([[np.exp(1j * phi1) * r, s1], [np.exp(1j * params.phi2) * r, s1]]))
    return QubitPair(xi1, xi2, params)


def povm_pair(r: float, phi: float = 0.0, branch: int = 1) -> QubitPair:
    """Pair with ``lambda1^2 = lambda2^2 = 1 - 2 r^2`` whose projectors sum to 2I."""
    r2 = r * r
    if not 0.0 < r2 <= 0.5 + 1e-15:
        raise DomainError(f"r^2={r2} outside (0, 1/2]")
    if abs(r2 - 0.5) <= 1e-15:
        warnings.warn("r^2 = 1/2 gives two orthonormal unbiased bases (lambda = 0)", stacklevel=2)
        return unbiased_partner(math.pi / 2, phi, math.sqrt(0.5), branch)
    theta = math.acos(math.sqrt(1.0 - 2.0 * r2))
    return unbiased_partner(theta, phi, r, branch)


def _check_povm(pair: QubitPair) -> None:
    r2 = pair.params.r ** 2
    if not 0.0 < r2 < 0.5 - 1e-12:
        raise DomainError(f"operator Gram matrix is singular at r^2 = {r2}")
    res = np.linalg.norm(pair.projector_sum() - 2 * np.eye(2))
    if res > 1e-9:
        raise ValueError(f"pair does not resolve the identity (residual {res:.2e})")


def qubit_probabilities(rho, pair: QubitPair) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    v = pair.states()
    return np.einsum("ai,ij,aj->a", v.conj(), rho, v).real


def qubit_reconstruct(probs, pair: QubitPair) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients ``q`` with ``rho = sum_a q_a |xi_a><xi_a|``, from ``G q = probs``."""
    _check_povm(pair)
    probs = np.asarray(probs, dtype=float)
    if probs.shape != (4,):
        raise ValueError("expected four probabilities")
    q = np.linalg.solve(pair.operator_gram(), probs)
    v = pair.states()
    rho = np.einsum("a,ai,aj->ij", q, v, v.conj())
    return q, rho


def printed_qkj(probs, r: float) -> np.ndarray:
    """Alternative closed-form coefficients, kept for comparison only.

    These exceed the Gram-system solution by a uniform factor of 2 and are
    never used for reconstruction.
    """
    r2 = r * r
    if not 0.0 < r2 < 0.5:
        raise DomainError(f"r^2={r2} must lie strictly between 0 and 1/2")
    probs = np.asarray(probs, dtype=float)
    den = 2 * r2 * (1 - 2 * r2)
    out = np.empty(4)
    for s in range(2):
        a, b = probs[2 * s], probs[2 * s + 1]
        out[2 * s] = ((1 - r2) * a - (1 - 3 * r2) * b - 2 * r2 * r2) / den
        out[2 * s + 1] = ((1 - r2) * b - (1 - 3 * r2) * a - 2 * r2 * r2) / den
    return out


def comparator_ratio(printed, oracle) -> tuple[float, float]:
    """Best scalar ``k`` with ``printed ~ k * oracle`` and the leftover residual."""
    printed = np.asarray(printed, dtype=float)
    oracle = np.asarray(oracle, dtype=float)
    k = float(printed @ oracle / (oracle @ oracle))
    return k, float(np.max(np.abs(printed - k * oracle)))


def sic_reconstruct(probs, pair: QubitPair) -> np.ndarray:
    """Trace-consistent SIC estimate ``(3/2) sum_a p_a P_a - I``."""
    if abs(pair.params.r ** 2 - SIC_R2) > 1e-9:
        raise ValueError("sic_reconstruct needs the r^2 = 1/3 pair")
    _check_povm(pair)
    probs = np.asarray(probs, dtype=float)
    v = pair.states()
    return 1.5 * np.einsum("a,ai,aj->ij", probs, v, v.conj()) - np.eye(2)


def _overlap_deviation(pair: QubitPair, t: np.ndarray, a: np.ndarray) -> np.ndarray:
    """``max_k ||<zeta(t, a)|xi_k>| - r|`` on broadcast grids of (t, a)."""
    r = pair.params.r
    c, s = np.cos(t), np.sin(t)
    e = np.exp(-1j * a)
    worst = np.zeros(np.broadcast(t, a).shape)
    for x0, x1 in pair.states():
        ov = np.abs(e * c * x0 + s * x1)
        worst = np.maximum(worst, np.abs(ov - r))
    return worst


def _basis_residual(pair, t, a, b) -> np.ndarray:
    res = np.maximum(_overlap_deviation(pair, t, a), _overlap_deviation(pair, t, b))
    # zeta_a and zeta_b must be linearly independent to form a basis.
    cross = np.abs(np.cos(t) ** 2 * np.exp(1j * (b - a)) + np.sin(t) ** 2)
    return np.where(cross < 1.0 - 1e-9, res, np.inf)


def third_basis_search(pair: QubitPair, grid_density: int = 100, refine: int = 10) -> float:
    """Smallest deviation from unbiasedness for a third basis, by grid search.

    Candidates are ``zeta_j = e^{i a_j} cos(t)|0> + sin(t)|1>`` over a grid of
    ``grid_density`` points in each of (t, a_0, a_1), followed by a local
    pass ``refine`` times finer around the best cell. A result bounded away
    from zero is numerical evidence that no third unbiased basis exists.
    """
    if abs(pair.params.lambda1) < 1e-12:
        raise InapplicableError("orthogonal pair: a third unbiased basis exists")
    n = int(grid_density)
    dt, da = math.pi / n, 2 * math.pi / n
    t = (np.arange(n) + 0.5) * dt
    a = np.arange(n) * da
    res = _basis_residual(pair, t[:, None, None], a[None, :, None], a[None, None, :])
    i, j, k = np.unravel_index(np.argmin(res), res.shape)
    best = float(res[i, j, k])
    if refine and refine > 1:
        offs = np.linspace(-1.0, 1.0, 2 * refine + 1)
        tt = t[i] + offs * dt
        aa = a[j] + offs * da
        bb = a[k] + offs * da
        local = _basis_residual(pair, tt[:, None, None], aa[None, :, None], bb[None, None, :])
        best = min(best, float(local.min()))
    return best


def correspondence_check(lam: float) -> float:
    """Distance between the partner basis and the p = 2 dual displaced basis phi^1.

    The first basis is identified with the seed family psi^0 through the
    unitary mapping psi_n onto xi^1_n; the result is
    ``max_n min_chi ||xi^2_n - e^{i chi} U phi^1_n||``.
    """
    if not -1.0 < lam < 1.0:
        raise DomainError("lambda must lie in (-1, 1)")
    family = build_family(2, lam)
    xi1 = first_basis(math.acos(lam), 0.0)
    # Columns are states; U maps psi_n to xi^1_n and is unitary because the Grams agree.
    u = xi1.vectors.T @ np.linalg.inv(family.psi[0].vectors.T)
    if np.linalg.norm(u @ u.conj().T - np.eye(2)) > 1e-10:
        raise NoSolutionError("seed family and first basis are not unitarily equivalent")
    r = math.sqrt(1.0 / (2.0 * family.params.mu))
    pair = unbiased_partner(math.acos(lam), 0.0, min(r, math.sqrt(0.5)), branch=-1)
    mapped = (u @ family.phi[1].vectors.T).T
    worst = 0.0
    for xi, ph in zip(pair.xi2.vectors, mapped):
        ov = np.vdot(ph, xi)
        phase = ov / abs(ov) if abs(ov) > 0 else 1.0
        worst = max(worst, float(np.linalg.norm(xi - phase * ph)))
    return worst
