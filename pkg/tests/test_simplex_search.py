#!/usr/bin/python3
"""
Unit tests for simplex grids and coordinate ascent.
"""

import unittest

import numpy as np

from jscc_forge.exception_handler import CapExceededError, ConfigurationError
from jscc_forge.simplex_search import (
    CoordinateAscent,
    grid_divisions,
    product_grid,
    random_point,
    row_slices,
    simplex_grid,
    simplex_grid_size,
)


class TestSimplexGrid(unittest.TestCase):
    """Test cases for simplex grids."""

    def test_grid_points(self):
        grid = simplex_grid(3, 0.5)
        self.assertEqual(grid.shape, (6, 3))
        np.testing.assert_allclose(grid.sum(axis=1), 1.0)
        self.assertTrue(np.all(grid >= 0))
        self.assertEqual(len({tuple(row) for row in grid}), 6)

    def test_size_formula(self):
        for k, resolution in ((2, 0.1), (3, 0.05), (4, 0.25)):
            self.assertEqual(len(simplex_grid(k, resolution)), simplex_grid_size(k, resolution))

    def test_single_symbol(self):
        np.testing.assert_array_equal(simplex_grid(1, 0.1), [[1.0]])

    def test_resolution_range(self):
        self.assertEqual(grid_divisions(0.05), 20)
        with self.assertRaises(ConfigurationError):
            grid_divisions(0.0)
        with self.assertRaises(ConfigurationError):
            grid_divisions(0.75)

    def test_row_slices(self):
        self.assertEqual(row_slices([2, 3]), [slice(0, 2), slice(2, 5)])


class TestProductGrid(unittest.TestCase):
    """Test cases for product grids."""

    def test_product_of_rows(self):
        grid = product_grid([2, 2], 0.5, cap=100)
        self.assertEqual(grid.shape, (9, 4))
        np.testing.assert_allclose(grid[:, :2].sum(axis=1), 1.0)
        np.testing.assert_allclose(grid[:, 2:].sum(axis=1), 1.0)

    def test_cap_without_rng(self):
        with self.assertRaises(CapExceededError):
            product_grid([3, 3], 0.1, cap=10)

    def test_subsample_with_rng(self):
        rng = np.random.default_rng(3)
        grid = product_grid([3, 3], 0.1, cap=50, rng=rng)
        self.assertLessEqual(len(grid), 50)
        self.assertGreater(len(grid), 0)
        np.testing.assert_allclose(grid[:, 3:].sum(axis=1), 1.0)

    def test_random_point(self):
        rng = np.random.default_rng(5)
        points = random_point([2, 3], rng, count=4)
        self.assertEqual(points.shape, (4, 5))
        np.testing.assert_allclose(points[:, 2:].sum(axis=1), 1.0)


class TestCoordinateAscent(unittest.TestCase):
    """Test cases for CoordinateAscent."""

    def setUp(self):
        self.target = np.array([0.2, 0.3, 0.5, 0.9, 0.1])

        def objective(batch):
            return -np.sum((batch - self.target) ** 2, axis=1)

        self.objective = objective

    def test_converges_to_interior_optimum(self):
        search = CoordinateAscent(self.objective, [3, 2], max_steps=500)
        start = np.array([1.0, 0.0, 0.0, 0.5, 0.5])
        theta, value = search.run(start)
        np.testing.assert_allclose(theta, self.target, atol=1e-4)
        self.assertGreater(value, -1e-7)
        self.assertGreater(search.evaluations, 1)

    def test_stays_on_simplex(self):
        search = CoordinateAscent(self.objective, [3, 2], max_steps=20)
        theta, _ = search.run(np.array([1 / 3, 1 / 3, 1 / 3, 0.5, 0.5]))
        self.assertTrue(np.all(theta >= -1e-12))
        self.assertAlmostEqual(theta[:3].sum(), 1.0)
        self.assertAlmostEqual(theta[3:].sum(), 1.0)

    def test_run_many_keeps_best(self):
        search = CoordinateAscent(self.objective, [3, 2], max_steps=0)
        starts = np.array([[1.0, 0.0, 0.0, 0.0, 1.0], [0.2, 0.3, 0.5, 0.9, 0.1]])
        theta, value = search.run_many(starts)
        np.testing.assert_allclose(theta, starts[1])
        self.assertAlmostEqual(value, 0.0)

    def test_rejects_bad_steps(self):
        with self.assertRaises(ConfigurationError):
            CoordinateAscent(self.objective, [2], stepup=0.5)
        with self.assertRaises(ConfigurationError):
            CoordinateAscent(self.objective, [2], stepdn=1.0)
        with self.assertRaises(ConfigurationError):
            CoordinateAscent(self.objective, [2], step0=0.0)


if __name__ == "__main__":
    unittest.main()
