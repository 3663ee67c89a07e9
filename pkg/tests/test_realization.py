"""
Tests for state-space realizations, the descriptor split and simulation.
"""

import logging

import numpy as np
import pytest

from polyrealize.config import SolveConfig
from polyrealize.linalg import column_echelon
from polyrealize.poly import vandermonde_basis
from polyrealize.realization import (
    X0_POWER_SUM,
    X0_USER,
    Realization,
    TrajectoryGrid,
    canonical_realization,
    cayley_hamilton_residual,
    default_initial_state,
    descriptor_split,
    observability_matrix,
    realization_from_basis,
    realize,
    simulate,
    verify_trajectory,
)
from polyrealize.solver import GapReport, SingularPart
from polyrealize.types import (
    DimensionMismatchError,
    GridTooSmallError,
    InputError,
    RealizationError,
)


def conic_echelon(d: int = 2):
    return column_echelon(vandermonde_basis([(3, 1), (2, 3)], d))


class TestCanonicalRealization:
    def test_conic_line_matrices(self):
        R = canonical_realization(conic_echelon(), 2, 2)
        np.testing.assert_allclose(R.A[0], [[0, 1], [-6, 5]], atol=1e-10)
        np.testing.assert_allclose(R.A[1], [[7, -2], [12, -3]], atol=1e-10)
        np.testing.assert_allclose(R.c, [1, 0], atol=1e-12)
        assert [m.label() for m in R.state_monomials] == ["1", "z1"]

    def test_pivot_at_top_degree(self):
        with pytest.raises(RealizationError):
            canonical_realization(conic_echelon(1), 1, 2)

    def test_row_count_checked(self):
        with pytest.raises(DimensionMismatchError):
            canonical_realization(conic_echelon(2), 3, 2)

    def test_any_basis_is_similar(self):
        V = vandermonde_basis([(3, 1), (2, 3)], 2)
        mixed = V @ np.array([[1.0, 2.0], [-0.5, 1.5]])
        R = realization_from_basis(mixed, 2, 2)
        for Ai, expected in zip(R.A, ([2, 3], [1, 3])):
            np.testing.assert_allclose(np.sort(np.linalg.eigvals(Ai).real), expected, atol=1e-10)

    def test_observability_is_echelon_basis(self):
        H = conic_echelon()
        R = canonical_realization(H, 2, 2)
        np.testing.assert_allclose(observability_matrix(R, 2), H.H, atol=1e-10)

    def test_observability_degree_checked(self):
        R = canonical_realization(conic_echelon(), 2, 2)
        with pytest.raises(InputError):
            observability_matrix(R, -1)


class TestInitialState:
    def test_power_sum(self):
        R = canonical_realization(conic_echelon(), 2, 2)
        assert R.x0_convention == X0_POWER_SUM
        # w[0] = 2 roots, w[e1] = 3 + 2
        np.testing.assert_allclose(R.x0, [2, 5], atol=1e-10)

    def test_explicit_state(self):
        R = canonical_realization(conic_echelon(), 2, 2, x0=[1, 3])
        assert R.x0_convention == X0_USER
        np.testing.assert_allclose(R.x0, [1, 3])

    def test_with_initial_state(self):
        R = canonical_realization(conic_echelon(), 2, 2).with_initial_state([1, 2])
        assert R.x0_convention == X0_USER
        with pytest.raises(DimensionMismatchError):
            R.with_initial_state([1, 2, 3])

    def test_default_initial_state_direct(self):
        A = (np.array([[0.0, 1.0], [-2.0, 3.0]]),)
        np.testing.assert_allclose(default_initial_state(A, np.array([1.0, 0.0])), [2, 3], atol=1e-10)


class TestRealize:
    def test_univariate_frobenius(self, univariate):
        result = realize(univariate)
        np.testing.assert_allclose(result.realization.A[0], [[0, 1], [-2, 3]], atol=1e-10)
        np.testing.assert_allclose(result.realization.c, [1, 0], atol=1e-10)

    def test_gcd_pair(self, gcd_pair):
        result = realize(gcd_pair)
        np.testing.assert_allclose(result.realization.A[0], [[0, 1], [2, 1]], atol=1e-10)

    def test_conic_line(self, conic_line):
        result = realize(conic_line)
        R = result.realization
        np.testing.assert_allclose(R.A[0], [[0, 1], [-6, 5]], atol=1e-10)
        np.testing.assert_allclose(R.A[1], [[7, -2], [12, -3]], atol=1e-10)
        assert result.echelon.pivot_rows == (0, 1)
        assert result.cayley_hamilton_residual <= 1e-10
        assert result.commutation_residual <= 1e-8
        assert result.descriptor is None
        assert result.degree == 2

    @pytest.mark.parametrize("name", ["conic_line", "fourfold", "hyperbolas"])
    def test_observability_annihilation(self, name, request):
        system = request.getfixturevalue(name)
        result = realize(system, SolveConfig(cluster_tol=1e-3))
        assert result.annihilation_residual is not None
        assert result.annihilation_residual <= 1e-8

    def test_fourfold_states(self, fourfold):
        result = realize(fourfold, SolveConfig(cluster_tol=1e-3))
        labels = [m.label() for m in result.realization.state_monomials]
        assert labels == ["1", "z1", "z2", "z1^2"]
        assert result.cayley_hamilton_residual <= 1e-8

    def test_hyperbolas_descriptor(self, hyperbolas):
        result = realize(hyperbolas)
        R = result.realization
        np.testing.assert_allclose(R.A[0], [[0, 1], [4, 0]], atol=1e-8)
        np.testing.assert_allclose(R.A[1], [[0, 1.5], [6, 0]], atol=1e-8)
        np.testing.assert_allclose(np.sort(np.linalg.eigvals(R.A[0]).real), [-2, 2], atol=1e-8)
        np.testing.assert_allclose(np.sort(np.linalg.eigvals(R.A[1]).real), [-3, 3], atol=1e-8)

        split = result.descriptor
        assert split.available
        assert (split.m_R, split.m_S) == (2, 2)
        assert split.nilpotency_residual() <= 1e-8
        np.testing.assert_allclose(split.A0[:2, :2], np.eye(2))
        np.testing.assert_allclose(split.A[0][:2, :2], R.A[0])
        assert split.A0.shape == (4, 4)

    def test_parabola_first_order(self, parabola):
        result = realize(parabola)
        np.testing.assert_allclose(result.realization.A[0], [[3]], atol=1e-8)
        np.testing.assert_allclose(result.realization.A[1], [[9]], atol=1e-8)
        assert result.descriptor.m_S == 1


class TestDescriptorSplit:
    def _gap(self, m_R, m_S):
        return GapReport(degree=3, block_ranks=(1, 1, 0, 1), m_R=m_R, m_S=m_S,
                         d_star=2, stabilized=True, nullity=m_R + m_S)

    def test_regular_only(self):
        R = canonical_realization(conic_echelon(), 2, 2)
        split = descriptor_split(self._gap(2, 0), R, None)
        assert split.m_S == 0
        assert split.nilpotency_residual() == 0.0
        np.testing.assert_allclose(split.A0, np.eye(2))

    def test_unavailable(self):
        R = canonical_realization(conic_echelon(), 2, 2)
        split = descriptor_split(self._gap(2, 1), R, None)
        assert not split.available
        assert split.E0 is None

    def test_strict_raises(self):
        R = canonical_realization(conic_echelon(), 2, 2)
        with pytest.raises(RealizationError):
            descriptor_split(self._gap(2, 1), R, None, strict=True)

    def _singular(self, E0):
        return SingularPart(1, 2, (np.array([[E0]]), np.array([[0.5]]), np.eye(1)))

    def test_nilpotent_block(self, caplog):
        R = canonical_realization(conic_echelon(), 2, 2)
        with caplog.at_level(logging.WARNING, logger="polyrealize.realization"):
            split = descriptor_split(self._gap(2, 1), R, self._singular(0.0))
        assert split.available
        assert split.nilpotency_residual() == 0.0
        assert "not nilpotent" not in caplog.text

    def test_non_nilpotent_block_warns(self, caplog):
        R = canonical_realization(conic_echelon(), 2, 2)
        with caplog.at_level(logging.WARNING, logger="polyrealize.realization"):
            split = descriptor_split(self._gap(2, 1), R, self._singular(0.3))
        assert split.nilpotency_residual() == pytest.approx(0.3)
        assert "E0 is not nilpotent" in caplog.text

    def test_non_nilpotent_block_strict(self):
        R = canonical_realization(conic_echelon(), 2, 2)
        with pytest.raises(RealizationError, match="not nilpotent"):
            descriptor_split(self._gap(2, 1), R, self._singular(0.3), strict=True)


class TestSimulate:
    def test_power_sum_trajectory(self):
        R = canonical_realization(conic_echelon(), 2, 2)
        grid = simulate(R, (4, 3))
        k1, k2 = np.meshgrid(np.arange(4), np.arange(3), indexing="ij")
        expected = 3.0 ** k1 + 2.0 ** k1 * 3.0 ** k2
        np.testing.assert_allclose(grid.values, expected, rtol=1e-10)

    def test_single_root_trajectory(self):
        R = canonical_realization(conic_echelon(), 2, 2)
        grid = simulate(R, (5, 5), x0=[1, 3])
        k1, _ = np.meshgrid(np.arange(5), np.arange(5), indexing="ij")
        np.testing.assert_allclose(grid.values, 3.0 ** k1, rtol=1e-10)

    def test_single_sample(self):
        R = canonical_realization(conic_echelon(), 2, 2)
        grid = simulate(R, (1, 1))
        assert grid.extents == (1, 1)
        assert grid.values[0, 0] == pytest.approx(R.c @ R.x0)

    def test_extents_checked(self):
        R = canonical_realization(conic_echelon(), 2, 2)
        with pytest.raises(DimensionMismatchError):
            simulate(R, (3,))
        with pytest.raises(InputError):
            simulate(R, (0, 3))

    def test_similarity_keeps_trajectory(self):
        R = canonical_realization(conic_echelon(), 2, 2)
        W = np.array([[2.0, 1.0], [0.5, 1.0]])
        a = simulate(R, (4, 4)).values
        W_inv = np.linalg.inv(W)
        similar = Realization(
            tuple(W_inv @ A @ W for A in R.A), R.c @ W, R.state_monomials, W_inv @ R.x0, R.x0_convention
        )
        b = simulate(similar, (4, 4)).values
        np.testing.assert_allclose(a, b, rtol=1e-10)

    def test_csv(self):
        grid = TrajectoryGrid(np.array([[1.0, 2.0], [3.0, 4.5]]))
        assert grid.to_csv() == "1,2\n3,4.5\n"
        assert TrajectoryGrid(np.array([2.0, 3.0])).to_csv() == "2,3\n"


class TestVerifyTrajectory:
    def test_conic_line_grid(self, conic_line):
        result = realize(conic_line)
        grid = simulate(result.realization, (5, 5))
        assert verify_trajectory(conic_line, grid) <= 1e-8

    def test_wrong_trajectory_detected(self, conic_line):
        grid = TrajectoryGrid(np.ones((4, 4)))
        assert verify_trajectory(conic_line, grid) > 1.0

    def test_grid_too_small(self, conic_line):
        with pytest.raises(GridTooSmallError):
            verify_trajectory(conic_line, TrajectoryGrid(np.ones((2, 2))))

    def test_axes_checked(self, conic_line):
        with pytest.raises(DimensionMismatchError):
            verify_trajectory(conic_line, TrajectoryGrid(np.ones(5)))


class TestCommutation:
    def test_non_commuting_detected(self):
        A = (np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [1.0, 0.0]]))
        R = Realization(A, np.array([1.0, 0.0]), (), np.zeros(2))
        assert R.commutation_residual() == pytest.approx(1.0)

    def test_cayley_hamilton_dimension(self, univariate):
        R = canonical_realization(conic_echelon(), 2, 2)
        with pytest.raises(DimensionMismatchError):
            cayley_hamilton_residual(R, univariate)
