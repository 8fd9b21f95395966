"""
Validation index tests: worked examples, error cases, brute force oracles
and invariances.

From the project base dir, run as:

    pytest test/test_indexes.py

"""

import math
import unittest

import numpy as np

from hypothesis import given, settings, strategies as st

from clusterval.constants import IndexId
from clusterval.core import KOutOfRangeError, ValidationConfig, clustering_from_labels, load_dissimilarity
from clusterval.indexes import (
    DegenerateCorrelationError,
    InsufficientClusterSizesError,
    NoWithinPairsError,
    RequiresTwoClustersError,
    centroid_index,
    cv_density,
    entropy,
    medoids,
    parsimony,
    pearson_gamma,
    p_separation,
    widest_gap,
    within_dis,
)
from clusterval.profile import compute_profile

from .oracles import (
    d6,
    grid_instance,
    random_instance,
    bf_centroid,
    bf_cvdens,
    bf_entropy,
    bf_medoids,
    bf_pearsongamma,
    bf_psep,
    bf_widestgap,
    bf_withindis,
)


def line(*xs):
    return load_dissimilarity([[abs(a - b) for b in xs] for a in xs])


class TestSixPoints(unittest.TestCase):
    def setUp(self):
        self.D, self.A = d6()

    def test_withindis(self):
        value = within_dis(self.D, self.A)
        self.assertAlmostEqual(value.raw, 4 / 3, places=12)
        self.assertAlmostEqual(value.normalised, 8 / 9, places=12)

    def test_psep(self):
        value = p_separation(self.D, self.A, 0.1)
        self.assertAlmostEqual(value.raw, 8.0, places=12)
        self.assertAlmostEqual(value.normalised, 2 / 3, places=12)

    def test_medoids(self):
        self.assertEqual(medoids(self.D, self.A).tolist(), [1, 4])

    def test_centroid(self):
        value = centroid_index(self.D, self.A)
        self.assertAlmostEqual(value.raw, 2 / 3, places=12)
        self.assertAlmostEqual(value.normalised, 17 / 18, places=12)

    def test_pearsongamma(self):
        value = pearson_gamma(self.D, self.A)
        self.assertAlmostEqual(value.raw, 0.9762, delta=1e-3)
        self.assertAlmostEqual(value.normalised, (value.raw + 1) / 2, places=12)

    def test_widestgap(self):
        value = widest_gap(self.D, self.A)
        self.assertEqual(value.raw, 1.0)
        self.assertAlmostEqual(value.normalised, 11 / 12, places=12)

    def test_cvdens(self):
        value = cv_density(self.D, self.A, 2)
        self.assertAlmostEqual(value.raw, 0.34641016, places=7)
        self.assertAlmostEqual(value.normalised, 0.85857864, places=7)
        with self.assertRaises(InsufficientClusterSizesError):
            cv_density(self.D, self.A, 4)

    def test_entropy(self):
        value = entropy(self.A)
        self.assertAlmostEqual(value.raw, math.log(2), places=12)
        self.assertAlmostEqual(value.normalised, 1.0, places=12)

    def test_parsimony(self):
        self.assertAlmostEqual(parsimony(self.A, 10).normalised, 0.8, places=12)
        self.assertEqual(parsimony(self.A, 2).normalised, 0.0)
        with self.assertRaises(KOutOfRangeError):
            parsimony(clustering_from_labels([1, 2, 3]), 2)

    def test_one_cluster(self):
        one = clustering_from_labels([1] * 6)
        for func in (lambda: p_separation(self.D, one, 0.1), lambda: pearson_gamma(self.D, one), lambda: entropy(one)):
            with self.assertRaises(RequiresTwoClustersError):
                func()
        # global medoid is object 2 or 3 (sum 30), the lowest wins
        self.assertEqual(medoids(self.D, one).tolist(), [2])
        self.assertAlmostEqual(centroid_index(self.D, one).raw, 30 / 6, places=12)

    def test_profile_records_failures(self):
        profile = compute_profile(self.D, self.A, ValidationConfig())
        self.assertIn(IndexId.CVDENS, profile.failures)
        self.assertIn("InsufficientClusterSizesError", profile.failures[IndexId.CVDENS])
        self.assertEqual(len(profile.values), len(IndexId) - 1)


class TestEdgeCases(unittest.TestCase):
    def test_identical_pair(self):
        D = line(0, 0, 5)
        value = within_dis(D, clustering_from_labels([1, 1, 2]))
        self.assertEqual(value.raw, 0.0)
        self.assertEqual(value.normalised, 1.0)

    def test_all_singletons(self):
        D = line(0, 1, 3)
        C = clustering_from_labels([1, 2, 3])
        with self.assertRaises(NoWithinPairsError):
            within_dis(D, C)
        self.assertEqual(centroid_index(D, C).normalised, 1.0)
        self.assertEqual(widest_gap(D, C).raw, 0.0)

    def test_two_singletons(self):
        value = p_separation(line(0, 5), clustering_from_labels([1, 2]), 0.1)
        self.assertEqual((value.raw, value.normalised), (5.0, 1.0))

    def test_two_point_medoid(self):
        self.assertEqual(medoids(line(0, 4), clustering_from_labels([1, 1])).tolist(), [0])

    def test_perfect_gamma(self):
        # within pairs all 1, between pairs all 3
        D = load_dissimilarity([[0, 1, 3, 3], [1, 0, 3, 3], [3, 3, 0, 1], [3, 3, 1, 0]])
        value = pearson_gamma(D, clustering_from_labels([1, 1, 2, 2]))
        self.assertAlmostEqual(value.raw, 1.0, places=12)
        self.assertAlmostEqual(value.normalised, 1.0, places=12)

    def test_constant_gamma(self):
        D = load_dissimilarity([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        with self.assertRaises(DegenerateCorrelationError):
            pearson_gamma(D, clustering_from_labels([1, 1, 2]))

    def test_widest_gap_mst(self):
        value = widest_gap(line(0, 1, 5, 10), clustering_from_labels([1, 1, 1, 2]))
        self.assertEqual(value.raw, 4.0)
        self.assertAlmostEqual(value.normalised, 0.6, places=12)

    def test_cv_equal_spacing(self):
        value = cv_density(line(0, 1, 2, 3, 4, 5, 6), clustering_from_labels([1] * 7), 1)
        self.assertEqual(value.raw, 0.0)
        self.assertEqual(value.normalised, 1.0)

    def test_entropy_unbalanced(self):
        value = entropy(clustering_from_labels([1] * 7 + [2]))
        self.assertAlmostEqual(value.raw, 0.3768, delta=1e-4)
        self.assertAlmostEqual(value.normalised, 0.5436, delta=1e-4)


class TestOracles(unittest.TestCase):
    P_SEP = 0.25
    K_CV = 2

    @settings(max_examples=200, deadline=None)
    @given(st.integers(6, 14), st.integers(2, 4), st.integers(0, 2**32 - 1))
    def test_against_brute_force(self, n, K, seed):
        D, C = random_instance(n, K, seed)
        d = D.d.tolist()
        labels = C.as_list()
        self.assertTrue(math.isclose(within_dis(D, C).raw, bf_withindis(d, labels), rel_tol=1e-10, abs_tol=1e-10))
        self.assertTrue(
            math.isclose(p_separation(D, C, self.P_SEP).raw, bf_psep(d, labels, self.P_SEP), rel_tol=1e-10)
        )
        self.assertTrue(math.isclose(centroid_index(D, C).raw, bf_centroid(d, labels), rel_tol=1e-10, abs_tol=1e-10))
        self.assertTrue(math.isclose(pearson_gamma(D, C).raw, bf_pearsongamma(d, labels), abs_tol=1e-10))
        self.assertTrue(math.isclose(widest_gap(D, C).raw, bf_widestgap(d, labels), rel_tol=1e-10, abs_tol=1e-10))
        self.assertTrue(math.isclose(entropy(C).raw, bf_entropy(labels), abs_tol=1e-10))
        self.assertAlmostEqual(parsimony(C, 4).raw, 1 - K / 4, delta=1e-12)
        expected = bf_cvdens(d, labels, self.K_CV)
        if expected is None:
            with self.assertRaises(InsufficientClusterSizesError):
                cv_density(D, C, self.K_CV)
        else:
            self.assertTrue(math.isclose(cv_density(D, C, self.K_CV).raw, expected, abs_tol=1e-10))

    @settings(max_examples=150, deadline=None)
    @given(st.integers(8, 16), st.integers(2, 4), st.integers(0, 2**32 - 1))
    def test_tied_dissimilarities(self, n, K, seed):
        D, C = grid_instance(n, K, seed)
        d = D.d.tolist()
        labels = C.as_list()
        if D.d_max > 0.0:
            self.assertTrue(math.isclose(within_dis(D, C).raw, bf_withindis(d, labels), abs_tol=1e-10))
            self.assertEqual(widest_gap(D, C).raw, bf_widestgap(d, labels))
            self.assertEqual(medoids(D, C).tolist(), bf_medoids(d, labels))
        if D.spread > 0.0:
            self.assertTrue(math.isclose(pearson_gamma(D, C).raw, bf_pearsongamma(d, labels), abs_tol=1e-10))
        expected = bf_cvdens(d, labels, self.K_CV)
        if expected is not None:
            self.assertTrue(math.isclose(cv_density(D, C, self.K_CV).raw, expected, abs_tol=1e-10))


class TestInvariances(unittest.TestCase):
    CONFIG = ValidationConfig(p_sep=0.2, p_dens=0.2, k_cv=2, K_max=6)

    def assertSameProfile(self, first, second, tol=1e-12):
        self.assertEqual(set(first.values), set(second.values))
        self.assertEqual(set(first.failures), set(second.failures))
        for index_id, value in first.values.items():
            self.assertAlmostEqual(value.normalised, second.values[index_id].normalised, delta=tol, msg=index_id)

    def test_normalised_range(self):
        for seed in range(50):
            D, C = random_instance(12, 3, seed)
            profile = compute_profile(D, C, self.CONFIG)
            for index_id, value in profile.values.items():
                self.assertGreaterEqual(value.normalised, 0.0, msg=index_id)
                self.assertLessEqual(value.normalised, 1.0, msg=index_id)

    def test_relabeling(self):
        for seed in range(50):
            D, C = random_instance(12, 3, seed)
            relabeled = clustering_from_labels([{1: 30, 2: 10, 3: 20}[k] for k in C.as_list()])
            self.assertSameProfile(compute_profile(D, C, self.CONFIG), compute_profile(D, relabeled, self.CONFIG), 0.0)

    def test_object_order(self):
        rng = np.random.default_rng(7)
        for seed in range(50):
            D, C = random_instance(12, 3, seed)
            order = rng.permutation(D.n)
            self.assertSameProfile(
                compute_profile(D, C, self.CONFIG), compute_profile(D.take(order), C.take(order), self.CONFIG)
            )

    def test_scaling(self):
        for seed in range(50):
            D, C = random_instance(12, 3, seed)
            self.assertSameProfile(
                compute_profile(D, C, self.CONFIG), compute_profile(D.scaled(3.5), C, self.CONFIG), 1e-9
            )

    def test_entropy_bound(self):
        self.assertLess(entropy(clustering_from_labels([1, 1, 1, 2, 3, 3])).raw, math.log(3))
        self.assertAlmostEqual(entropy(clustering_from_labels([1, 1, 2, 2, 3, 3])).raw, math.log(3), places=12)
