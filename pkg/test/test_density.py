"""
Kernel density estimate and density index tests.

From the project base dir, run as:

    pytest test/test_density.py

"""

import math
import unittest

import numpy as np

from hypothesis import given, settings, strategies as st

from clusterval.constants import IndexId
from clusterval.core import ValidationConfig, clustering_from_labels, load_dissimilarity
from clusterval.density import (
    DensityProfile,
    GapSet,
    densbound,
    densdec_and_gaps,
    density_kernel,
    density_profile,
    dissimilarity_quantile,
    highdgap,
)
from clusterval.profile import compute_profile

from .oracles import bf_densdec, d6, grid_instance, random_instance


def line(*xs):
    return load_dissimilarity([[abs(a - b) for b in xs] for a in xs])


class TestDensityProfile(unittest.TestCase):
    def test_d6(self):
        D, A = d6()
        profile = density_profile(D, A, 0.1)
        self.assertEqual(profile.q, 1.0)
        self.assertTrue(np.all(profile.h == 1.0))
        self.assertTrue(np.all(profile.h_star == 1.0))
        self.assertTrue(np.all(profile.h_o == 0.0))

    def test_identical_points(self):
        D = load_dissimilarity(np.zeros((4, 4)))
        profile = density_profile(D, clustering_from_labels([1, 1, 2, 2]), 0.5)
        self.assertEqual(profile.q, 0.0)
        self.assertTrue(np.all(profile.h == 4.0))
        self.assertTrue(np.all(profile.h_star == 1.0))

    def test_full_bandwidth(self):
        D, A = d6()
        profile = density_profile(D, A, 1.0)
        self.assertEqual(profile.q, 12.0)
        expected = 6.0 - D.d.sum(axis=1) / 12.0
        self.assertTrue(np.allclose(profile.h, expected, rtol=0, atol=1e-12))

    def test_line_quantile(self):
        D = line(0, 1, 2, 3, 10)
        self.assertEqual(dissimilarity_quantile(D, 0.4), 2.0)
        profile = density_profile(D, clustering_from_labels([1] * 5), 0.4)
        self.assertTrue(np.allclose(profile.h_star, [0.75, 1.0, 1.0, 0.75, 0.5], rtol=0, atol=1e-12))

    def test_bounds(self):
        for seed in range(20):
            D, C = random_instance(15, 3, seed)
            profile = density_profile(D, C, 0.2)
            self.assertTrue(np.all(profile.h_o >= 0.0))
            self.assertTrue(np.all(profile.h_o <= profile.h))
            self.assertTrue(np.all(profile.h <= D.n))
            self.assertEqual(profile.h_star.max(), 1.0)
            self.assertTrue(np.all(profile.h_o_star <= profile.h_star))

    def test_kernel_reuse(self):
        D, C = random_instance(15, 3, 1)
        kernel = density_kernel(D, 0.2)
        with_kernel = density_profile(D, C, 0.2, kernel)
        without = density_profile(D, C, 0.2)
        self.assertTrue(np.array_equal(with_kernel.h_o, without.h_o))


class TestDensdec(unittest.TestCase):
    def test_d6(self):
        D, A = d6()
        value, gaps = densdec_and_gaps(D, A, density_profile(D, A, 0.1))
        self.assertEqual(value.raw, 0.0)
        self.assertEqual(value.normalised, 1.0)
        self.assertEqual(sorted(gaps.T), [1.0, 1.0, 1.0, 1.0])

    def test_line_from_the_mode(self):
        # the traversal starts at the density mode and only meets decreasing densities
        D = line(0, 1, 2, 3, 10)
        C = clustering_from_labels([1, 1, 1, 1, 2])
        value, gaps = densdec_and_gaps(D, C, density_profile(D, C, 0.4))
        self.assertEqual(value.raw, 0.0)
        self.assertEqual(len(gaps), 3)
        self.assertTrue(np.allclose(sorted(gaps.T), [0.75, 1.0, 1.0], rtol=0, atol=1e-12))

    def test_density_increase(self):
        D = line(0, 1, 2, 3)
        C = clustering_from_labels([1, 1, 1, 1])
        h_star = np.array([1.0, 0.5, 0.8, 0.2])
        profile = DensityProfile(q=1.0, h=h_star, h_star=h_star, h_o=np.zeros(4), h_o_star=np.zeros(4))
        value, gaps = densdec_and_gaps(D, C, profile)
        # moving object 2 next to object 1 climbs from 0.5 to 0.8
        self.assertAlmostEqual(value.raw, math.sqrt(0.09 / 4), places=12)
        self.assertAlmostEqual(value.normalised, 1 - math.sqrt(0.09 / 4), places=12)
        self.assertTrue(np.allclose(gaps.T, [0.8, 0.8, 0.2], rtol=0, atol=1e-12))

    def test_gap_count(self):
        for seed in range(20):
            D, C = random_instance(14, 4, seed)
            value, gaps = densdec_and_gaps(D, C, density_profile(D, C, 0.1))
            self.assertEqual(len(gaps), D.n - C.K)
            self.assertGreaterEqual(value.raw, 0.0)
            self.assertLessEqual(value.raw, 1.0)

    def test_singletons(self):
        D = line(0, 1, 3)
        C = clustering_from_labels([1, 2, 3])
        _, gaps = densdec_and_gaps(D, C, density_profile(D, C, 0.5))
        self.assertEqual(len(gaps), 0)
        self.assertEqual(highdgap(gaps, D.d_max).normalised, 1.0)


class TestHighdgapDensbound(unittest.TestCase):
    def test_highdgap(self):
        self.assertAlmostEqual(highdgap(GapSet((1.0, 1.0, 1.0, 1.0)), 12.0).normalised, 11 / 12, places=12)
        value = highdgap(GapSet((0.5, 3.0)), 6.0)
        self.assertEqual((value.raw, value.normalised), (3.0, 0.5))

    def test_densbound_d6(self):
        D, A = d6()
        value = densbound(A, density_profile(D, A, 0.1))
        self.assertEqual((value.raw, value.normalised), (0.0, 1.0))

    def test_densbound_one_cluster(self):
        D, _ = d6()
        one = clustering_from_labels([1] * 6)
        self.assertEqual(densbound(one, density_profile(D, one, 0.5)).raw, 0.0)

    def test_densbound_coincident(self):
        D = line(0, 0, 5, 6)
        C = clustering_from_labels([1, 2, 2, 2])
        value = densbound(C, density_profile(D, C, 0.5))
        self.assertGreater(value.raw, 0.0)
        self.assertLessEqual(value.raw, 1.0)

    def test_profile_d6(self):
        D, A = d6()
        profile = compute_profile(D, A, ValidationConfig())
        self.assertEqual(profile.normalised(IndexId.DENSDEC), 1.0)
        self.assertEqual(profile.normalised(IndexId.DENSBOUND), 1.0)
        self.assertAlmostEqual(profile.normalised(IndexId.HIGHDGAP), 11 / 12, places=12)

    def test_scaling(self):
        D, C = random_instance(15, 3, 3)
        first = density_profile(D, C, 0.2)
        second = density_profile(D.scaled(4.0), C, 0.2)
        self.assertAlmostEqual(second.q, 4.0 * first.q, places=12)
        self.assertTrue(np.allclose(first.h_star, second.h_star, rtol=0, atol=1e-12))


class TestTraversalOracle(unittest.TestCase):
    @settings(max_examples=150, deadline=None)
    @given(st.integers(6, 16), st.integers(1, 4), st.integers(0, 2**32 - 1), st.booleans())
    def test_against_literal_growth(self, n, K, seed, grid):
        D, C = (grid_instance if grid else random_instance)(n, K, seed)
        profile = density_profile(D, C, 0.2)
        value, gaps = densdec_and_gaps(D, C, profile)
        raw, expected = bf_densdec(D.d.tolist(), C.as_list(), profile.h_star.tolist())
        self.assertTrue(math.isclose(value.raw, raw, abs_tol=1e-12))
        self.assertEqual(len(gaps.T), len(expected))
        for got, want in zip(gaps.T, expected):
            self.assertTrue(math.isclose(got, want, abs_tol=1e-12))
