import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ubnob import qubit as qb
from ubnob.errors import DomainError, InapplicableError, NoSolutionError
from ubnob.linalg import RngStream, frobenius_distance, random_density

R2_VALUES = [0.1, 0.2, 0.25, 1 / 3, 0.45]
ZERO = np.diag([1.0, 0.0]).astype(complex)


def sic():
    return qb.povm_pair(math.sqrt(1 / 3))


class TestFirstBasis:
    def test_orthonormal(self):
        np.testing.assert_allclose(qb.first_basis(math.pi / 2, 0.0).gram(), np.eye(2), atol=1e-15)

    def test_overlap_moduli(self):
        g = qb.first_basis(math.acos(1 / math.sqrt(3)), 0.0).gram()
        assert abs(g[0, 1]) == pytest.approx(1 / math.sqrt(3), abs=1e-15)
        g = qb.first_basis(math.pi / 4, math.pi / 3).gram()
        assert abs(g[0, 1]) == pytest.approx(1 / math.sqrt(2), abs=1e-15)

    @pytest.mark.parametrize("theta", [0.0, math.pi, -0.1])
    def test_degenerate(self, theta):
        with pytest.raises(DomainError):
            qb.first_basis(theta, 0.0)


class TestPartner:
    def test_sic_phase(self):
        pair = qb.unbiased_partner(math.acos(1 / math.sqrt(3)), 0.0, 1 / math.sqrt(3))
        assert pair.params.phi1 == pytest.approx(2 * math.pi / 3, abs=1e-14)
        np.testing.assert_allclose(
            pair.xi2[0], [np.exp(2j * math.pi / 3) / math.sqrt(3), math.sqrt(2 / 3)], atol=1e-15
        )

    def test_orthogonal_case(self):
        pair = qb.unbiased_partner(math.pi / 2, 0.0, math.sqrt(0.5))
        assert pair.params.theta1 == pytest.approx(math.pi / 4, abs=1e-15)
        np.testing.assert_allclose(pair.cross_overlaps(), math.sqrt(0.5), atol=1e-15)

    def test_orthogonal_needs_max_r(self):
        with pytest.raises(NoSolutionError):
            qb.unbiased_partner(math.pi / 2, 0.0, 0.5)

    def test_infeasible(self):
        # Nearly orthogonal first basis with small r has no partner.
        with pytest.raises(NoSolutionError, match="exceeds 1"):
            qb.unbiased_partner(1.5, 0.0, 0.3)

    def test_branches_swap_states(self):
        a = qb.unbiased_partner(1.1, 0.4, 0.6, branch=1)
        b = qb.unbiased_partner(1.1, 0.4, 0.6, branch=-1)
        np.testing.assert_allclose(a.xi2.vectors, b.xi2.vectors[::-1], atol=1e-14)

    def test_feasibility_grid(self):
        checked = 0
        for theta in np.linspace(0.05, math.pi - 0.05, 10):
            for phi in np.linspace(0.0, 2 * math.pi, 10, endpoint=False):
                for r in np.linspace(0.05, 0.7, 10):
                    try:
                        pair = qb.unbiased_partner(theta, phi, r)
                    except NoSolutionError:
                        continue
                    checked += 1
                    pr = pair.params
                    assert np.max(np.abs(pair.cross_overlaps() - r)) < 1e-11
                    assert abs(pr.lambda1**2 * pr.lambda2**2 - (2 * r * r - 1) ** 2) < 1e-11
                    assert abs(abs(pair.xi2.gram()[0, 1]) - pr.lambda2) < 1e-11
        assert checked > 300

    @settings(max_examples=100)
    @given(theta=st.floats(0.2, math.pi - 0.2), phi=st.floats(-3, 3), r=st.floats(0.3, 0.7))
    def test_unbiased_when_feasible(self, theta, phi, r):
        try:
            pair = qb.unbiased_partner(theta, phi, r)
        except NoSolutionError:
            return
        assert np.max(np.abs(pair.cross_overlaps() - r)) < 1e-11


class TestPovm:
    @pytest.mark.parametrize("r2", R2_VALUES)
    def test_identity(self, r2):
        pair = qb.povm_pair(math.sqrt(r2))
        assert np.linalg.norm(pair.projector_sum() - 2 * np.eye(2)) < 1e-11
        assert pair.params.lambda1**2 == pytest.approx(1 - 2 * r2, abs=1e-12)
        assert pair.params.lambda2**2 == pytest.approx(1 - 2 * r2, abs=1e-12)

    def test_sic_tetrahedron(self):
        v = sic().states()
        mod = np.abs(v.conj() @ v.T)
        off = mod[~np.eye(4, dtype=bool)]
        assert np.max(np.abs(off - 1 / math.sqrt(3))) < 1e-11

    def test_half_warns(self):
        with pytest.warns(UserWarning):
            pair = qb.povm_pair(math.sqrt(0.5))
        assert abs(pair.params.lambda1) < 1e-15

    @pytest.mark.parametrize("r2", [0.0, 0.6, 1.0])
    def test_domain(self, r2):
        with pytest.raises(DomainError):
            qb.povm_pair(math.sqrt(r2))


class TestReconstruct:
    def test_mixed(self):
        q, rho = qb.qubit_reconstruct(qb.qubit_probabilities(np.eye(2) / 2, sic()), sic())
        np.testing.assert_allclose(q, 0.25, atol=1e-14)
        np.testing.assert_allclose(rho, np.eye(2) / 2, atol=1e-14)

    def test_zero_state(self):
        probs = qb.qubit_probabilities(ZERO, sic())
        np.testing.assert_allclose(probs, [1, 1 / 3, 1 / 3, 1 / 3], atol=1e-15)
        q, rho = qb.qubit_reconstruct(probs, sic())
        np.testing.assert_allclose(q, [1, 0, 0, 0], atol=1e-14)
        np.testing.assert_allclose(rho, ZERO, atol=1e-14)

    @pytest.mark.parametrize("r2", [0.1, 0.25, 0.3, 1 / 3, 0.45])
    def test_round_trip(self, r2):
        pair = qb.povm_pair(math.sqrt(r2))
        for seed in range(50):
            rho = random_density(2, RngStream(seed))
            q, est = qb.qubit_reconstruct(qb.qubit_probabilities(rho, pair), pair)
            assert frobenius_distance(est, rho) < 1e-10
            assert abs(q.sum() - 1) < 1e-10

    def test_singular(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            pair = qb.povm_pair(math.sqrt(0.5))
        with pytest.raises(DomainError):
            qb.qubit_reconstruct([0.5] * 4, pair)

    def test_shape(self):
        with pytest.raises(ValueError):
            qb.qubit_reconstruct([0.5] * 3, sic())


class TestPrinted:
    def test_mixed(self):
        np.testing.assert_allclose(qb.printed_qkj([0.5] * 4, 1 / math.sqrt(3)), 0.5, atol=1e-14)

    def test_zero_state(self):
        probs = qb.qubit_probabilities(ZERO, sic())
        np.testing.assert_allclose(qb.printed_qkj(probs, 1 / math.sqrt(3)), [2, 0, 0, 0], atol=1e-13)

    @pytest.mark.parametrize("r2", [0.15, 1 / 3, 0.4])
    def test_ratio_is_state_independent(self, r2):
        pair = qb.povm_pair(math.sqrt(r2))
        for seed in range(20):
            probs = qb.qubit_probabilities(random_density(2, RngStream(seed)), pair)
            q, _ = qb.qubit_reconstruct(probs, pair)
            k, res = qb.comparator_ratio(qb.printed_qkj(probs, pair.params.r), q)
            assert k == pytest.approx(2.0, abs=1e-9)
            assert res < 1e-9

    def test_domain(self):
        with pytest.raises(DomainError):
            qb.printed_qkj([0.5] * 4, math.sqrt(0.5))


class TestSic:
    def test_mixed(self):
        np.testing.assert_allclose(qb.sic_reconstruct([0.5] * 4, sic()), np.eye(2) / 2, atol=1e-14)

    def test_matches_gram(self):
        pair = sic()
        for seed in range(20):
            rho = random_density(2, RngStream(seed))
            probs = qb.qubit_probabilities(rho, pair)
            est = qb.sic_reconstruct(probs, pair)
            assert frobenius_distance(est, qb.qubit_reconstruct(probs, pair)[1]) < 1e-11
            assert abs(np.trace(est) - 1) < 1e-11

    def test_non_sic(self):
        with pytest.raises(ValueError):
            qb.sic_reconstruct([0.5] * 4, qb.povm_pair(0.5))


class TestThirdBasis:
    def test_gap(self):
        coarse = qb.third_basis_search(sic(), 100, refine=1)
        fine = qb.third_basis_search(sic(), 100, refine=10)
        assert coarse > 1e-2
        assert fine <= coarse
        assert coarse / fine < 10

    def test_orthogonal_inapplicable(self):
        with pytest.warns(UserWarning):
            pair = qb.povm_pair(math.sqrt(0.5))
        with pytest.raises(InapplicableError):
            qb.third_basis_search(pair, 10)


class TestCorrespondence:
    @pytest.mark.parametrize("lam", [0.0, 1e-3, 0.3, 1 / math.sqrt(3), 0.6])
    def test_matches_dual(self, lam):
        assert qb.correspondence_check(lam) < 1e-10

    def test_domain(self):
        with pytest.raises(DomainError):
            qb.correspondence_check(1.0)
