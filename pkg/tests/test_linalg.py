import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ubnob.errors import DomainError
from ubnob.linalg import (
    RngStream,
    frobenius_distance,
    hermitian_eigen,
    is_prime,
    mod_inverse,
    random_density,
    root_of_unity,
    validate_density,
)


@pytest.mark.parametrize("a, p, expected", [(2, 3, 2), (2, 5, 3), (2, 7, 4)])
def test_mod_inverse_examples(a, p, expected):
    assert mod_inverse(a, p) == expected
    assert (a * expected) % p == 1


@pytest.mark.parametrize("a, p", [(2, 9), (3, 3), (0, 5), (2, 1)])
def test_mod_inverse_rejects(a, p):
    with pytest.raises(ValueError):
        mod_inverse(a, p)


def test_mod_inverse_brute_force():
    for p in [2, 3, 5, 7, 11, 13]:
        for a in range(1, p):
            inv = next(b for b in range(1, p) if (a * b) % p == 1)
            assert mod_inverse(a, p) == inv


def test_root_of_unity_examples():
    assert abs(root_of_unity(2, 1) - (-1)) < 1e-15
    assert abs(root_of_unity(3, 3) - 1) < 1e-15
    z = root_of_unity(3, 1)
    assert abs(z.real + 0.5) < 1e-15
    assert abs(z.imag - math.sqrt(3) / 2) < 1e-15


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_root_of_unity_cyclic(p):
    for k in range(-p, 2 * p):
        z = root_of_unity(p, k)
        assert abs(abs(z) - 1) < 1e-15
        assert abs(z**p - 1) < 1e-13


@pytest.mark.parametrize("p, expected", [(0, False), (1, False), (2, True), (9, False), (11, True), (25, False), (97, True)])
def test_is_prime(p, expected):
    assert is_prime(p) is expected


def test_eigen_identity():
    w, v = hermitian_eigen(np.eye(3))
    np.testing.assert_allclose(w, [1, 1, 1], atol=1e-15)


def test_eigen_diagonal():
    w, v = hermitian_eigen(np.diag([2.0, 0.0]))
    np.testing.assert_allclose(w, [0, 2], atol=1e-15)
    np.testing.assert_allclose(np.abs(v), [[0, 1], [1, 0]], atol=1e-15)


def test_eigen_pauli_x():
    m = np.array([[0, 1], [1, 0]])
    w, v = hermitian_eigen(m)
    np.testing.assert_allclose(w, [-1, 1], atol=1e-15)
    for k in range(2):
        assert np.linalg.norm(m @ v[:, k] - w[k] * v[:, k]) < 1e-14


def test_eigen_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eigen(np.array([[0, 1], [0, 0]]))


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
def test_eigen_against_lapack(n, seed):
    r = np.random.default_rng(seed)
    g = r.normal(size=(n, n)) + 1j * r.normal(size=(n, n))
    h = g + g.conj().T
    w, v = hermitian_eigen(h)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(h), atol=1e-9)
    assert np.all(np.diff(w) >= 0)
    assert np.linalg.norm(h @ v - v * w) < 1e-10 * max(1.0, np.linalg.norm(h))
    assert np.linalg.norm(v.conj().T @ v - np.eye(n)) < 1e-10
    assert frobenius_distance(v @ np.diag(w) @ v.conj().T, h) < 1e-9 * max(1.0, np.linalg.norm(h))


def test_eigen_degenerate_spectrum():
    r = np.random.default_rng(3)
    q, _ = np.linalg.qr(r.normal(size=(5, 5)) + 1j * r.normal(size=(5, 5)))
    h = q @ np.diag([1, 1, 1, -2, -2]) @ q.conj().T
    w, v = hermitian_eigen(h)
    np.testing.assert_allclose(w, [-2, -2, 1, 1, 1], atol=1e-12)
    assert np.linalg.norm(v.conj().T @ v - np.eye(5)) < 1e-12


def test_frobenius_examples():
    m = np.array([[1, 2j], [3, 4]])
    assert frobenius_distance(m, m) == 0
    assert frobenius_distance(np.eye(2), np.zeros((2, 2))) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert frobenius_distance(np.diag([1, 0]), np.diag([0, 1])) == pytest.approx(math.sqrt(2), abs=1e-15)
    with pytest.raises(ValueError):
        frobenius_distance(np.eye(2), np.eye(3))


def test_random_density_examples():
    assert abs(np.trace(random_density(2, RngStream(5))) - 1) < 1e-14
    w, _ = hermitian_eigen(random_density(3, RngStream(6)))
    assert w[0] >= -1e-14
    np.testing.assert_array_equal(random_density(2, RngStream(42)), random_density(2, RngStream(42)))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_random_density_invariants(p):
    for seed in range(100):
        rho = random_density(p, RngStream(seed))
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-15
        assert abs(np.trace(rho) - 1) < 1e-14
        assert hermitian_eigen(rho)[0][0] >= -1e-14


def test_complex_normal_moments():
    z = RngStream(0).complex_normal(200_000)
    assert abs(np.mean(z)) < 0.01
    assert abs(np.mean(np.abs(z) ** 2) - 1) < 0.01
    assert abs(np.mean(z**2)) < 0.01


def test_derived_streams_are_distinct_and_stable():
    a = RngStream.derived(7, 0, 1).uniform(4)
    b = RngStream.derived(7, 1, 0).uniform(4)
    assert not np.allclose(a, b)
    np.testing.assert_array_equal(a, RngStream.derived(7, 0, 1).uniform(4))


def test_validate_density():
    validate_density(np.eye(2) / 2)
    validate_density(np.eye(2) / 2 + 1e-9)  # within input tolerance after rounding
    with pytest.raises(DomainError):
        validate_density(np.diag([1.2, -0.2]))
    with pytest.raises(DomainError):
        validate_density(np.eye(2))
    with pytest.raises(DomainError):
        validate_density(np.array([[0.5, 0.1], [0.3, 0.5]]))
