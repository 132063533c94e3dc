#!/usr/bin/python3
"""
Unit tests for the probability core: pmfs, channels, information measures
and structure checks.
"""

import unittest
from math import log2

import numpy as np

from jscc_forge.exception_handler import (
    ConfigurationError,
    ModelError,
    OverlapError,
    UnknownVariableError,
)
from jscc_forge.prob_core import (
    ChannelKind,
    ChannelModel,
    InfoExpr,
    JointPmf,
    ProductInput,
    batched_cond_entropy,
    conditional_mutual_info,
    entropy_cond,
    factorized_no_mai,
    gacs_korner_common,
    identical,
    independent,
    markov,
    mutual_info,
    random_pmf,
    rate_triples,
    structure_check,
)


def cover_salehi() -> JointPmf:
    return JointPmf.from_flat(["S1", "S2"], [2, 2], [1 / 3, 1 / 3, 0.0, 1 / 3])


def cover_salehi_w1() -> JointPmf:
    return JointPmf.from_cells(
        ["S1", "S2", "W1"],
        [2, 2, 2],
        {(0, 0, 0): 1 / 3, (1, 1, 1): 1 / 3, (0, 1, 0): 1 / 6, (0, 1, 1): 1 / 6},
    )


def adder_mac() -> ChannelModel:
    return ChannelModel.deterministic("mac", (2, 2), ["Y"], [3], lambda a, b: a + b)


class TestJointPmf(unittest.TestCase):
    """Test cases for JointPmf construction and marginals."""

    def test_rejects_bad_tables(self):
        with self.assertRaises(ModelError):
            JointPmf.from_flat(["S1"], [2], [0.5, 0.4])
        with self.assertRaises(ModelError):
            JointPmf.from_flat(["S1"], [2], [1.5, -0.5])
        with self.assertRaises(ModelError):
            JointPmf.from_flat(["S1", "S1"], [2, 2], [0.25] * 4)
        with self.assertRaises(ModelError):
            JointPmf.from_flat(["S1", "S2"], [2, 2], [0.5, 0.5])

    def test_table_is_read_only(self):
        joint = cover_salehi()
        with self.assertRaises(ValueError):
            joint.table[0, 0] = 0.0

    def test_marginal_respects_order(self):
        joint = cover_salehi_w1()
        pair = joint.marginal(("S2", "S1"))
        self.assertEqual(pair.variables, ("S2", "S1"))
        np.testing.assert_allclose(pair.table, [[1 / 3, 0.0], [1 / 3, 1 / 3]])

    def test_unknown_variable(self):
        with self.assertRaises(UnknownVariableError):
            cover_salehi().marginal("S3")

    def test_add_derived(self):
        joint = cover_salehi().add_derived("Z", ("S1", "S2"), lambda a, b: a ^ b, 2)
        z = joint.marginal("Z").table
        np.testing.assert_allclose(z, [2 / 3, 1 / 3])
        with self.assertRaises(ModelError):
            joint.add_derived("Z", "S1", lambda a: a, 2)
        with self.assertRaises(ModelError):
            cover_salehi().add_derived("T", "S1", lambda a: a + 5, 2)


class TestEntropies(unittest.TestCase):
    """Test cases for entropy and mutual information."""

    def test_joint_entropy(self):
        self.assertAlmostEqual(entropy_cond(cover_salehi(), ("S1", "S2")), log2(3), places=9)

    def test_conditional_entropy_with_side_information(self):
        joint = cover_salehi_w1()
        self.assertAlmostEqual(entropy_cond(joint, "S1", "W1"), 0.459148, places=5)
        self.assertAlmostEqual(entropy_cond(joint, "S1,S2", "W1"), 0.918296, places=5)

    def test_overlapping_target_and_given(self):
        with self.assertRaises(OverlapError):
            entropy_cond(cover_salehi(), "S1", "S1")
        with self.assertRaises(OverlapError):
            entropy_cond(cover_salehi(), ("S1", "S2"), "S2")

    def test_function_of_given_has_zero_entropy(self):
        joint = cover_salehi().add_derived("F", ("S1", "S2"), lambda a, b: a ^ b, 2)
        self.assertAlmostEqual(entropy_cond(joint, "F", ("S1", "S2")), 0.0, places=12)

    def test_conditional_mutual_info(self):
        joint = cover_salehi()
        expected = entropy_cond(joint, "S1") - entropy_cond(joint, "S1", "S2")
        self.assertAlmostEqual(conditional_mutual_info(joint, "S1", "S2"), expected)
        self.assertGreater(expected, 0.0)

    def test_batched_matches_scalar(self):
        rng = np.random.default_rng(7)
        tables = np.stack([random_pmf(rng, (2, 3, 2)) for _ in range(5)])
        names = ["A", "B", "C"]
        batch = batched_cond_entropy(tables, names, ["A", "C"], ["B"])
        for i in range(5):
            joint = JointPmf(tuple(names), (2, 3, 2), tables[i])
            self.assertAlmostEqual(batch[i], entropy_cond(joint, "A,C", "B"), places=9)

    def test_chain_rule_on_random_pmfs(self):
        """H(A,B) = H(A) + H(B|A), also conditioned on a third variable."""
        rng = np.random.default_rng(23)
        for _ in range(25):
            shape = tuple(int(c) for c in rng.integers(2, 5, size=3))
            joint = JointPmf(("A", "B", "C"), shape, random_pmf(rng, shape, sparsity=0.3))
            self.assertAlmostEqual(
                entropy_cond(joint, "A,B"),
                entropy_cond(joint, "A") + entropy_cond(joint, "B", "A"),
                places=9,
            )
            self.assertAlmostEqual(
                entropy_cond(joint, "A,B", "C"),
                entropy_cond(joint, "A", "C") + entropy_cond(joint, "B", "A,C"),
                places=9,
            )


class TestChannelModel(unittest.TestCase):
    """Test cases for ChannelModel and channel-side information."""

    def test_adder_rate_triple(self):
        p = np.full((1, 2, 2), 0.25)
        triples = rate_triples(p, adder_mac().receiver_table(1))
        np.testing.assert_allclose(triples[0], [1.0, 1.0, 1.5], atol=1e-12)

    def test_mutual_info_expressions(self):
        channel = adder_mac()
        uniform = ProductInput.uniform(2, 2)
        self.assertAlmostEqual(mutual_info(channel, uniform, "I(X1;Y|X2)"), 1.0)
        self.assertAlmostEqual(mutual_info(channel, uniform, InfoExpr.ISUM), 1.5)
        skewed = ProductInput.single([1.0, 0.0], [0.5, 0.5])
        self.assertAlmostEqual(mutual_info(channel, skewed, "I(X1;Y|X2)"), 0.0)

    def test_expression_parsing(self):
        self.assertEqual(InfoExpr.parse("I(X1;Y1|X2,Q)"), InfoExpr.I1)
        self.assertEqual(InfoExpr.parse("I(X2; Y | X1)"), InfoExpr.I2)
        self.assertEqual(InfoExpr.parse("I(X1,X2;Y2|Q)"), InfoExpr.ISUM)
        with self.assertRaises(ModelError):
            InfoExpr.parse("H(Y)")

    def test_rows_must_be_stochastic(self):
        table = np.zeros((2, 2, 3))
        with self.assertRaises(ModelError):
            ChannelModel(ChannelKind.MAC, (2, 2), ("Y",), (3,), table)

    def test_output_count_per_kind(self):
        with self.assertRaises(ModelError):
            ChannelModel.deterministic("compound", (2, 2), ["Y"], [3], lambda a, b: a + b)

    def test_receivers(self):
        channel = ChannelModel.deterministic(
            "compound", (2, 2), ["Y1", "Y2"], [3, 2], lambda a, b: (a + b, a)
        )
        self.assertEqual(channel.receiver_count, 2)
        self.assertEqual(channel.receiver_table(2).shape, (2, 2, 2))
        with self.assertRaises(ConfigurationError):
            channel.receiver_outputs(3)

    def test_no_mai_pipes(self):
        channel = ChannelModel.deterministic(
            "no-mai", (2, 2), ["Y11", "Y21", "Y12", "Y22"], [2, 2, 2, 2],
            lambda a, b: (a, b, a, b),
        )
        np.testing.assert_allclose(channel.pipe_table(1, 2), np.eye(2))
        self.assertTrue(structure_check(None, factorized_no_mai(channel)).holds)
        self.assertEqual(channel.receiver_table(1).shape, (2, 2, 4))

    def test_no_mai_must_factorize(self):
        with self.assertRaises(ModelError):
            ChannelModel.deterministic(
                "no-mai", (2, 2), ["Y11", "Y21", "Y12", "Y22"], [2, 2, 2, 2],
                lambda a, b: (a ^ b, b, a, b),
            )


class TestProductInput(unittest.TestCase):
    """Test cases for time-sharing input distributions."""

    def test_time_sharing_bound(self):
        rows = np.full((5, 2), 0.5)
        with self.assertRaises(ModelError):
            ProductInput(np.full(5, 0.2), rows, rows)

    def test_uncoded_input_reproduces_source(self):
        joint = cover_salehi()
        uncoded = ProductInput.uncoded([0, 1], [0, 1], 2, 2)
        self.assertTrue(uncoded.source_conditioned)
        np.testing.assert_allclose(uncoded.joint_inputs(joint)[0], joint.table)
        with self.assertRaises(ModelError):
            uncoded.joint_inputs()


class TestStructureChecks(unittest.TestCase):
    """Test cases for Markov, independence and identity checks."""

    def test_side_information_markov_chain(self):
        joint = cover_salehi_w1()
        report = structure_check(joint, markov("W1", "S1", "S2"))
        self.assertFalse(report.holds)
        self.assertGreater(report.max_deviation, 0.1)

    def test_independence(self):
        table = np.outer([0.3, 0.7], [0.5, 0.5])
        joint = JointPmf(("S1", "S2"), (2, 2), table)
        self.assertTrue(structure_check(joint, independent("S1", "S2")).holds)
        self.assertFalse(structure_check(cover_salehi(), independent("S1", "S2")).holds)

    def test_identical(self):
        joint = JointPmf.from_flat(["A", "B"], [2, 2], [0.4, 0.0, 0.0, 0.6])
        self.assertTrue(structure_check(joint, identical("A", "B")).holds)
        report = structure_check(cover_salehi(), identical("S1", "S2"))
        self.assertAlmostEqual(report.max_deviation, 1 / 3)

    def test_overlap_rejected(self):
        with self.assertRaises(OverlapError):
            structure_check(cover_salehi(), markov("S1", "S1", "S2"))

    def test_markov_needs_pmf(self):
        with self.assertRaises(ModelError):
            structure_check(None, markov("S1", (), "S2"))


class TestCommonPart(unittest.TestCase):
    """Test cases for the Gacs-Korner common part."""

    def test_connected_support_has_trivial_common_part(self):
        common = gacs_korner_common(cover_salehi())
        self.assertEqual(common.u_cardinality, 1)
        self.assertAlmostEqual(common.u_entropy, 0.0)

    def test_block_diagonal_support(self):
        pair = JointPmf.from_flat(["S1", "S2"], [2, 3], [0.25, 0.25, 0.0, 0.0, 0.0, 0.5])
        common = gacs_korner_common(pair)
        self.assertEqual(common.u_cardinality, 2)
        self.assertEqual(common.map1, (0, 1))
        self.assertEqual(common.map2, (0, 0, 1))
        self.assertAlmostEqual(common.u_entropy, 1.0)

    def test_requires_two_variables(self):
        with self.assertRaises(ModelError):
            gacs_korner_common(cover_salehi_w1())


if __name__ == "__main__":
    unittest.main()
