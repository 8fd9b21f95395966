"""
Random baseline clustering tests.

From the project base dir, run as:

    pytest test/test_random.py

"""

import asyncio
import unittest

import numpy as np

from clusterval.constants import IndexId, Generator
from clusterval.core import (
    KOutOfRangeError,
    MalformedInputError,
    ValidationConfig,
    clustering_from_labels,
    load_dissimilarity,
)
from clusterval.clusterers import pam
from clusterval.random_clusterings import (
    SeedPlan,
    agenerate_collection,
    generate_collection,
    stupid_kcentroids,
    stupid_nn,
)

from .oracles import bf_stupid_nn, d6, grid_instance, random_instance


class TestStupidKCentroids(unittest.TestCase):
    def setUp(self):
        self.D, self.A = d6()

    def test_first_two(self):
        C = stupid_kcentroids(self.D, 2, centers=[0, 1])
        self.assertEqual(C.as_list(), [1, 2, 2, 2, 2, 2])

    def test_gives_a(self):
        C = stupid_kcentroids(self.D, 2, centers=[1, 4])
        self.assertEqual(C.as_list(), self.A.as_list())

    def test_duplicate_centroids(self):
        D = load_dissimilarity([[0, 0, 0, 4], [0, 0, 0, 4], [0, 0, 0, 4], [4, 4, 4, 0]])
        C = stupid_kcentroids(D, 2, centers=[2, 0])
        # ties go to the first centroid in Q, the second one keeps only itself
        self.assertEqual(C.as_list(), [1, 2, 2, 2])

    def test_k_too_large(self):
        with self.assertRaises(KOutOfRangeError):
            stupid_kcentroids(self.D, 7, rng=np.random.default_rng(1))

    def test_bad_centers(self):
        with self.assertRaises(MalformedInputError):
            stupid_kcentroids(self.D, 2, centers=[1, 1])

    def test_medoid_assignment(self):
        result = pam(self.D, 2)
        C = stupid_kcentroids(self.D, 2, centers=result.centers)
        self.assertEqual(C.as_list(), result.clustering.as_list())


class TestStupidNN(unittest.TestCase):
    def setUp(self):
        self.D, self.A = d6()

    def test_gives_a(self):
        C = stupid_nn(self.D, 2, centers=[0, 5])
        self.assertEqual(C.as_list(), self.A.as_list())

    def test_all_singletons(self):
        C = stupid_nn(self.D, 6, rng=np.random.default_rng(3))
        self.assertEqual(C.as_list(), [1, 2, 3, 4, 5, 6])

    def test_one_cluster(self):
        C = stupid_nn(self.D, 1, centers=[3])
        self.assertEqual(C.K, 1)

    def test_exactly_k(self):
        rng = np.random.default_rng(11)
        for seed in range(30):
            D, _ = random_instance(20, 2, seed)
            for K in (2, 3, 5, 8):
                self.assertEqual(stupid_nn(D, K, rng=rng).K, K)
                self.assertEqual(stupid_kcentroids(D, K, rng=rng).K, K)

    def test_against_literal_growth(self):
        rng = np.random.default_rng(13)
        for seed in range(60):
            for D, _ in (random_instance(14, 2, seed), grid_instance(14, 2, seed)):
                for K in (1, 2, 3, 5):
                    centers = rng.choice(D.n, size=K, replace=False).tolist()
                    expected = clustering_from_labels(bf_stupid_nn(D.d.tolist(), centers))
                    self.assertEqual(stupid_nn(D, K, centers=centers).as_list(), expected.as_list())


class TestSeedPlan(unittest.TestCase):
    def test_distinct_streams(self):
        plan = SeedPlan(42)
        draws = {
            (g, K, r): tuple(plan.substream(g, K, r).integers(0, 2**62, size=4))
            for g in Generator
            for K in (2, 3)
            for r in range(3)
        }
        self.assertEqual(len(set(draws.values())), len(draws))

    def test_reproducible(self):
        first = SeedPlan(7).substream(Generator.STUPIDNN, 4, 2).random(5)
        second = SeedPlan(7).substream(Generator.STUPIDNN, 4, 2).random(5)
        self.assertTrue(np.array_equal(first, second))

    def test_uniform_centers(self):
        # every object should enter Q with frequency K/n
        n, K, draws = 10, 3, 3000
        plan = SeedPlan(2024)
        counts = np.zeros(n)
        for r in range(draws):
            counts[plan.substream(Generator.STUPIDCENT, K, r).choice(n, size=K, replace=False)] += 1
        expected = draws * K / n
        chi2 = float(((counts - expected) ** 2 / expected).sum())
        self.assertLess(chi2, 27.88)  # 0.999 quantile, 9 degrees of freedom


class TestCollection(unittest.TestCase):
    CONFIG = ValidationConfig(K_max=3, B=2, k_cv=2)

    def test_count(self):
        D, _ = random_instance(12, 2, 5)
        collection = generate_collection(D, self.CONFIG, 99)
        self.assertEqual(len(collection.members), 8)
        self.assertEqual(collection.k_values, (2, 3))
        for K in (2, 3):
            members = list(collection.for_k(K))
            self.assertEqual(len(members), 4)
            self.assertEqual(sum(1 for m in members if m.generator == Generator.STUPIDCENT), 2)
            for m in members:
                self.assertEqual(m.clustering.K, K)

    def test_deterministic(self):
        D, _ = random_instance(12, 2, 5)
        first = generate_collection(D, self.CONFIG, 99)
        second = generate_collection(D, self.CONFIG, 99)
        self.assertEqual(first.to_dict(), second.to_dict())

    def test_concurrent_same_collection(self):
        D, _ = random_instance(15, 2, 6)
        config = ValidationConfig(K_max=4, B=3, k_cv=2)
        serial = generate_collection(D, config, 1234)
        threaded = asyncio.run(agenerate_collection(D, config, 1234, concurrent=3))
        self.assertEqual(serial.to_dict(), threaded.to_dict())

    def test_exclusions(self):
        D, _ = random_instance(8, 2, 5)
        collection = generate_collection(D, ValidationConfig(K_max=3, B=2, k_cv=4), 3)
        # cvdens needs a cluster larger than 4, not always available with 8 objects
        total = len(collection.members)
        usable = collection.values(IndexId.CVDENS).size
        self.assertEqual(usable + collection.exclusions(IndexId.CVDENS), total)
        self.assertEqual(collection.exclusion_counts()[str(IndexId.WITHINDIS)], 0)

    def test_kmax_too_large(self):
        D, _ = d6()
        with self.assertRaises(KOutOfRangeError):
            generate_collection(D, ValidationConfig(K_max=7, B=2), 1)
