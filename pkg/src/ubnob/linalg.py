"""Small dense complex linear algebra, modular arithmetic and seeded sampling.

Matrices are plain ``numpy`` complex arrays. The Hermitian eigensolver is a
cyclic Jacobi iteration, adequate for the desk-scale dimensions used here.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DomainError

DENSITY_TOL = 1e-8


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def mod_inverse(a: int, p: int) -> int:
    """Multiplicative inverse of ``a`` modulo the prime ``p``, in ``[1, p-1]``."""
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if a % p == 0:
        raise ValueError(f"{a} has no inverse modulo {p}")
    return pow(a, -1, p)


def root_of_unity(p: int, k: int) -> complex:
    """``exp(2*pi*i*k/p)`` evaluated from the reduced angle, never by products."""
    if p < 2:
        raise ValueError("p must be at least 2")
    return cmath.exp(2j * math.pi * (k % p) / p)


def omega_powers(p: int, exponents) -> np.ndarray:
    """Vectorised ``root_of_unity`` for an integer array of exponents."""
    k = np.mod(np.asarray(exponents, dtype=np.int64), p)
    return np.exp(2j * np.pi * k / p)


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def hermitian_eigen(m: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100):
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(eigenvalues, vectors)`` with eigenvalues ascending and the
    eigenvectors stored as the columns of ``vectors``.
    """
    a = np.array(m, dtype=complex)
    if not is_hermitian(a, 1e-10):
        raise ValueError("hermitian_eigen requires a Hermitian matrix")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))

    for _ in range(max_sweeps):
        if _off_norm(a) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                # Phase rotation makes the (p, q) element real, then a real Jacobi step.
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # Columns p, q of J = D R with D = diag(1, conj(phase)).
                j_pp, j_pq = c, s
                j_qp, j_qq = -s * phase.conjugate(), c * phase.conjugate()
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = col_p * j_pp + col_q * j_qp
                a[:, q] = col_p * j_pq + col_q * j_qq
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = np.conj(j_pp) * row_p + np.conj(j_qp) * row_q
                a[q, :] = np.conj(j_pq) * row_p + np.conj(j_qq) * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = vp * j_pp + vq * j_qp
                v[:, q] = vp * j_pq + vq * j_qq
    else:
        if _off_norm(a) >= threshold:
            raise RuntimeError("Jacobi iteration did not converge")

    evals = np.real(np.diag(a))
    order = np.argsort(evals, kind="stable")
    return evals[order], v[:, order]


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum(np.abs(a - b) ** 2)))


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v)
    return np.outer(v, v.conj())


class RngStream:
    """Seeded random stream backed by the counter-based Philox generator.

    Complex normals are produced by Box-Muller from the stream's uniforms so
    that the draw sequence depends only on the seed. A stream is single-owner
    mutable state; parallel work should use :meth:`derived` streams.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._gen = np.random.Generator(np.random.Philox(self.seed))

    @classmethod
    def derived(cls, seed: int, *indices: int) -> "RngStream":
        """Stream for a work cell, mixed from a master seed and cell indices."""
        ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *map(int, indices)])
        return cls(int(ss.generate_state(1, dtype=np.uint64)[0]))

    def uniform(self, size=None) -> np.ndarray:
        return self._gen.random(size)

    def complex_normal(self, shape) -> np.ndarray:
        """Standard complex normals, ``E|z|^2 = 1``."""
        u1 = 1.0 - self._gen.random(shape)  # (0, 1], keeps log finite
        u2 = self._gen.random(shape)
        radius = np.sqrt(-np.log(u1))
        return radius * np.exp(2j * np.pi * u2)

    def binomial(self, n: int, prob):
        return self._gen.binomial(n, prob)

    def multinomial(self, n: int, pvals):
        return self._gen.multinomial(n, pvals)


def random_density(p: int, rng: RngStream) -> np.ndarray:
    """Ginibre-ensemble density matrix ``G G^dag / tr(G G^dag)``."""
    if p < 2:
        raise ValueError("dimension must be at least 2")
    g = rng.complex_normal((p, p))
    w = g @ g.conj().T
    w = 0.5 * (w + w.conj().T)
    return w / np.trace(w).real


def random_pure_state(p: int, rng: RngStream) -> np.ndarray:
    v = rng.complex_normal(p)
    v = v / np.linalg.norm(v)
    return projector(v)


def validate_density(m, tol: float = DENSITY_TOL) -> np.ndarray:
    """Check the density-matrix invariants and return a complex copy.

    Raises :class:`DomainError` when Hermiticity, unit trace or positivity
    fails beyond ``tol``.
    """
    rho = np.array(m, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 1:
        raise DomainError("density matrix must be square")
    if not np.all(np.isfinite(rho)):
        raise DomainError("density matrix has non-finite entries")
    if not is_hermitian(rho, tol):
        raise DomainError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise DomainError(f"density matrix trace {tr.real:.12g} differs from 1")
    evals, _ = hermitian_eigen(rho)
    if evals[0] < -tol:
        raise DomainError(f"density matrix has negative eigenvalue {evals[0]:.3e}")
    return rho
