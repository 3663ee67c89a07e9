"""
Tests for Macaulay matrix construction.
"""

import numpy as np
import pytest

from polyrealize.linalg import numerical_rank
from polyrealize.macaulay import build_macaulay, default_degree, extend_macaulay
from polyrealize.poly import homogenize, vandermonde_basis
from polyrealize.types import DegreeError, DimensionMismatchError


class TestBuild:
    def test_sylvester_matrix(self, gcd_pair):
        M = build_macaulay(gcd_pair, 4)
        expected = np.array([
            [-6, -5, 2, 1, 0],
            [0, -6, -5, 2, 1],
            [-2, -1, 1, 0, 0],
            [0, -2, -1, 1, 0],
            [0, 0, -2, -1, 1],
        ], dtype=float)
        np.testing.assert_array_equal(M.data, expected)
        assert [m.label() for m in M.col_monomials] == ["1", "z1", "z1^2", "z1^3", "z1^4"]

    def test_conic_line_shape_and_rank(self, conic_line):
        M = build_macaulay(conic_line, 2)
        assert M.shape == (4, 6)
        assert numerical_rank(M.data) == 4
        np.testing.assert_array_equal(M.data[0], [13, -16, -2, 4, 0, 1])
        np.testing.assert_array_equal(M.data[1:], [
            [-7, 2, 1, 0, 0, 0],
            [0, -7, 0, 2, 1, 0],
            [0, 0, -7, 0, 2, 1],
        ])

    def test_row_labels_equation_major(self, conic_line):
        M = build_macaulay(conic_line, 3)
        eqs = [eq for eq, _ in M.row_labels]
        assert eqs == sorted(eqs)
        shifts = [s for eq, s in M.row_labels if eq == 1]
        assert shifts == sorted(shifts)
        assert M.shape == (3 + 6, 10)

    def test_roots_in_null_space(self, conic_line):
        for d in (2, 3, 4):
            M = build_macaulay(conic_line, d)
            V = vandermonde_basis([(3, 1), (2, 3)], d)
            assert np.max(np.abs(M.data @ V)) < 1e-12

    def test_degree_below_equation_degree(self, conic_line):
        with pytest.raises(DegreeError):
            build_macaulay(conic_line, 1)

    def test_read_only(self, conic_line):
        M = build_macaulay(conic_line, 2)
        with pytest.raises(ValueError):
            M.data[0, 0] = 1.0

    def test_degree_block_bounds(self, conic_line):
        M = build_macaulay(conic_line, 3)
        assert M.degree_block_bounds == ((0, 1), (1, 3), (3, 6), (6, 10))


class TestDefaultDegree:
    def test_square_systems(self, univariate, conic_line, hyperbolas, fourfold):
        assert default_degree(univariate) == 2
        assert default_degree(conic_line) == 2
        assert default_degree(hyperbolas) == 3
        assert default_degree(fourfold) == 3

    def test_non_square_needs_degree(self, gcd_pair):
        with pytest.raises(DegreeError):
            default_degree(gcd_pair)


class TestExtend:
    def test_matches_fresh_build(self, worked_system):
        _, system = worked_system
        d = max(system.degrees)
        M = build_macaulay(system, d)
        for d_new in (d + 1, d + 3):
            grown = extend_macaulay(M, system, d_new)
            fresh = build_macaulay(system, d_new)
            np.testing.assert_array_equal(grown.data, fresh.data)
            assert grown.row_labels == fresh.row_labels
            assert grown.col_monomials == fresh.col_monomials

    def test_chained_extension(self, hyperbolas):
        M = build_macaulay(hyperbolas, 2)
        M = extend_macaulay(extend_macaulay(M, hyperbolas, 3), hyperbolas, 4)
        np.testing.assert_array_equal(M.data, build_macaulay(hyperbolas, 4).data)

    def test_extend_must_grow(self, conic_line):
        M = build_macaulay(conic_line, 3)
        with pytest.raises(DegreeError):
            extend_macaulay(M, conic_line, 3)

    def test_extend_checks_system(self, conic_line, univariate):
        M = build_macaulay(conic_line, 2)
        with pytest.raises(DimensionMismatchError):
            extend_macaulay(M, univariate, 3)

    def test_homogeneous_extension_rebuilds(self, hyperbolas):
        lifted = homogenize(hyperbolas)
        M = extend_macaulay(build_macaulay(lifted, 2), lifted, 4)
        np.testing.assert_array_equal(M.data, build_macaulay(lifted, 4).data)


class TestHomogeneous:
    def test_same_numbers_as_affine(self, worked_system):
        _, system = worked_system
        lifted = homogenize(system)
        for d in range(max(system.degrees), max(system.degrees) + 3):
            affine = build_macaulay(system, d)
            homogeneous = build_macaulay(lifted, d)
            assert homogeneous.homogeneous
            assert homogeneous.n == affine.n
            np.testing.assert_array_equal(affine.data, homogeneous.data)

    def test_columns_have_exact_degree(self, conic_line):
        M = build_macaulay(homogenize(conic_line), 3)
        assert all(m.total_degree == 3 for m in M.col_monomials)


class TestCsv:
    def test_header_and_labels(self, conic_line):
        text = build_macaulay(conic_line, 2).to_csv(conic_line.variable_names)
        lines = text.splitlines()
        assert lines[0] == "row,1,z1,z2,z1^2,z1*z2,z2^2"
        assert lines[1].startswith("f1,13.0,-16.0")
        assert lines[3].startswith("f2*z1,")
        assert len(lines) == 5
