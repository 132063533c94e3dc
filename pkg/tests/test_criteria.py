#!/usr/bin/python3
"""
Unit tests for the theorem checkers and verdicts.
"""

import unittest
from math import log2

import numpy as np
import pytest

from jscc_forge.criteria import (
    Achievability,
    VerdictMode,
    check_sufficient_b1,
    classify,
    compound_side,
    minrate_cmac,
    minrate_fullcoop,
    minrate_ic,
    minrate_infosep,
    minrate_mac,
    side_for,
    strong_interference_check,
    twoway_achievable,
    twoway_outer,
)
from jscc_forge.exception_handler import (
    ConfigurationError,
    ModelError,
    PreconditionError,
)
from jscc_forge.model_io import load_model
from jscc_forge.prob_core import (
    ChannelModel,
    JointPmf,
    ProductInput,
    entropy_cond,
    random_pmf,
)
from jscc_forge.regions import achievable_hull, oracle_min_b

FAST = {"grid_resolution": 0.05, "refine": False}


def adder_mac() -> ChannelModel:
    return ChannelModel.deterministic("mac", (2, 2), ["Y1"], [3], lambda a, b: a + b)


def adder_compound() -> ChannelModel:
    return ChannelModel.deterministic(
        "compound", (2, 2), ["Y1", "Y2"], [3, 3], lambda a, b: (a + b, a + b)
    )


def cover_salehi() -> JointPmf:
    return JointPmf.from_flat(["S1", "S2"], [2, 2], [1 / 3, 1 / 3, 0.0, 1 / 3])


def independent_bits() -> JointPmf:
    return JointPmf.from_flat(["S1", "S2"], [2, 2], [0.25] * 4)


def xor_side_information() -> JointPmf:
    return independent_bits().add_derived("W1", ("S1", "S2"), lambda a, b: a ^ b, 2)


def random_mac(rng: np.random.Generator) -> ChannelModel:
    return ChannelModel("mac", (2, 2), ("Y1",), (3,), rng.dirichlet(np.ones(3), size=(2, 2)))


def identical_outputs(rng: np.random.Generator) -> ChannelModel:
    """Compound MAC whose two receivers always see the same binary output."""
    single = rng.dirichlet(np.ones(2), size=(2, 2))
    return ChannelModel(
        "compound", (2, 2), ("Y1", "Y2"), (2, 2), single[..., :, None] * np.eye(2)
    )


def crossed_pipes() -> ChannelModel:
    return ChannelModel.deterministic(
        "two-way", (2, 2), ["Y1", "Y2"], [2, 2], lambda a, b: (b, a)
    )


class TestHelpers(unittest.TestCase):
    """Test cases for verdict helpers."""

    def test_classify(self):
        self.assertEqual(classify(0.2, searched=True), Achievability.YES)
        self.assertEqual(classify(1e-9, searched=True), Achievability.BOUNDARY)
        self.assertEqual(classify(-0.2, searched=False), Achievability.NO)
        self.assertEqual(classify(-0.2, searched=True), Achievability.NO_WITNESS)

    def test_side_for(self):
        joint = xor_side_information()
        self.assertEqual(side_for(joint, 1, None), ("W1",))
        self.assertEqual(side_for(joint, 2, None), ())
        self.assertEqual(side_for(joint, 1, ()), ())
        self.assertEqual(side_for(joint, 1, ["S2"]), ("S2",))

    def test_compound_side(self):
        joint = xor_side_information()
        self.assertEqual(compound_side(joint, None), {1: ("W1",), 2: ()})
        self.assertEqual(compound_side(joint, ["W1"]), {1: ("W1",), 2: ()})
        self.assertEqual(compound_side(joint, []), {1: (), 2: ()})
        with self.assertRaises(ConfigurationError):
            compound_side(joint, ["S1"])
        with self.assertRaises(ConfigurationError):
            compound_side(joint, ["W2"])


class TestMacTheorems(unittest.TestCase):
    """Test cases for the MAC minimum-rate theorems."""

    def test_markov_side_information(self):
        joint = load_model("cover-salehi-w1").source
        verdict = minrate_mac(joint, adder_mac(), "thm2", **FAST)
        self.assertEqual(verdict.mode, VerdictMode.EXACT)
        self.assertAlmostEqual(verdict.b_min, 0.918296 / 1.5, delta=2e-4)
        self.assertEqual(verdict.achievable, Achievability.BOUNDARY)
        self.assertTrue(all(r.holds for r in verdict.precondition_report))
        self.assertEqual(verdict.extras["side_information"], ["W1"])

    def test_markov_precondition_enforced(self):
        with self.assertRaises(PreconditionError) as ctx:
            minrate_mac(cover_salehi(), adder_mac(), "thm2", **FAST)
        self.assertEqual(ctx.exception.theorem, "thm2")
        self.assertFalse(ctx.exception.reports[0]["holds"])

    def test_forced_run_is_sufficient(self):
        verdict = minrate_mac(cover_salehi(), adder_mac(), "thm2", force=True, **FAST)
        self.assertEqual(verdict.mode, VerdictMode.SUFFICIENT)
        self.assertFalse(verdict.precondition_report[0].holds)

    def test_independent_sources_with_and_without_side(self):
        joint = xor_side_information()
        with_side = minrate_mac(joint, adder_mac(), "thm3", **FAST)
        self.assertAlmostEqual(with_side.b_min, 2 / 3, delta=2e-4)
        self.assertEqual(with_side.mode, VerdictMode.EXACT)
        without = minrate_mac(joint, adder_mac(), "thm3", side=(), **FAST)
        self.assertAlmostEqual(without.b_min, 4 / 3, delta=2e-4)

    def test_query_rate(self):
        joint = xor_side_information()
        above = minrate_mac(joint, adder_mac(), "thm3", b=1.0, **FAST)
        self.assertEqual(above.achievable, Achievability.YES)
        self.assertGreater(above.margin, 0.0)
        below = minrate_mac(joint, adder_mac(), "thm3", b=0.5, **FAST)
        self.assertEqual(below.achievable, Achievability.NO)
        self.assertLess(below.margin, 0.0)

    def test_refined_minimum_is_boundary(self):
        verdict = minrate_mac(
            xor_side_information(), adder_mac(), "thm3", grid_resolution=0.05, refine=True
        )
        self.assertEqual(verdict.achievable, Achievability.BOUNDARY)
        self.assertLessEqual(abs(verdict.margin), 1e-6)

    def test_margin_grows_with_b(self):
        hull = achievable_hull(adder_mac(), grid_resolution=0.05, refine=False)
        margins = [
            minrate_mac(
                xor_side_information(), adder_mac(), "thm3", b=b, hull=hull, refine=False
            ).margin
            for b in np.linspace(0.2, 2.5, 12)
        ]
        self.assertTrue(np.all(np.diff(margins) >= -1e-9))

    def test_channel_kind_and_name(self):
        with self.assertRaises(ConfigurationError):
            minrate_mac(independent_bits(), adder_compound(), "thm3", **FAST)
        with self.assertRaises(ConfigurationError):
            minrate_mac(independent_bits(), adder_mac(), "thm5", **FAST)

    def test_informational_separation(self):
        verdict = minrate_infosep(cover_salehi(), adder_mac(), **FAST)
        self.assertEqual(verdict.mode, VerdictMode.SUFFICIENT)
        self.assertAlmostEqual(verdict.b_min, log2(3) / 1.5, delta=2e-4)
        short = minrate_infosep(cover_salehi(), adder_mac(), b=1.0, **FAST)
        self.assertEqual(short.achievable, Achievability.NO_WITNESS)

    def test_full_cooperation(self):
        verdict = minrate_fullcoop(xor_side_information(), adder_mac())
        self.assertEqual(verdict.mode, VerdictMode.NECESSARY)
        self.assertAlmostEqual(verdict.b_min, 1 / log2(3), places=5)
        self.assertAlmostEqual(verdict.extras["cooperative_capacity"], log2(3), places=5)
        below = minrate_fullcoop(xor_side_information(), adder_mac(), b=0.5)
        self.assertEqual(below.achievable, Achievability.NO)


class TestCompoundMacTheorems(unittest.TestCase):
    """Test cases for the compound-MAC theorems."""

    @classmethod
    def setUpClass(cls):
        cls.pipes = load_model("no-mai-pipes")

    def test_no_interference_channel(self):
        verdict = minrate_cmac(self.pipes.source, self.pipes.channel, "thm7", **FAST)
        self.assertEqual(verdict.mode, VerdictMode.EXACT)
        self.assertAlmostEqual(verdict.b_min, log2(3) / 2, delta=2e-4)
        self.assertEqual(len(verdict.entropy_vector.values), 6)

    def test_sufficient_only_theorem(self):
        verdict = minrate_cmac(self.pipes.source, self.pipes.channel, "thm5", **FAST)
        self.assertEqual(verdict.mode, VerdictMode.SUFFICIENT)
        self.assertAlmostEqual(verdict.b_min, log2(3) / 2, delta=2e-4)

    def test_no_interference_precondition(self):
        with self.assertRaises(PreconditionError):
            minrate_cmac(cover_salehi(), adder_compound(), "thm7", **FAST)

    def test_common_side_information_precondition(self):
        with self.assertRaises(PreconditionError):
            minrate_cmac(cover_salehi(), adder_compound(), "thm8", **FAST)

    def test_independent_pairs(self):
        verdict = minrate_cmac(independent_bits(), adder_compound(), "thm6", **FAST)
        self.assertEqual(verdict.mode, VerdictMode.EXACT)
        self.assertAlmostEqual(verdict.b_min, 4 / 3, delta=2e-4)

    def test_requires_two_receivers(self):
        with self.assertRaises(ConfigurationError):
            minrate_cmac(cover_salehi(), adder_mac(), "thm5", **FAST)


class TestInterference(unittest.TestCase):
    """Test cases for strong interference and interference channels."""

    def test_identical_receivers_satisfy_strong_interference(self):
        report = strong_interference_check(
            cover_salehi(), adder_compound(), 1.0, grid_resolution=0.25, classical=True
        )
        self.assertTrue(report.holds)
        self.assertLessEqual(report.worst_violation, 1e-6)
        self.assertGreater(report.evaluations, 0)

    def test_weak_second_receiver_violates(self):
        channel = ChannelModel.deterministic(
            "compound", (2, 2), ["Y1", "Y2"], [3, 2], lambda a, b: (a + b, b)
        )
        report = strong_interference_check(
            cover_salehi(), channel, 1.0, grid_resolution=0.25, classical=True
        )
        self.assertFalse(report.holds)
        self.assertGreater(report.worst_violation, 0.9)
        self.assertIsInstance(report.worst_witness, ProductInput)
        self.assertTrue(report.to_dict()["classical"])

    def test_identical_outputs_never_violate(self):
        rng = np.random.default_rng(17)
        for _ in range(4):
            channel = identical_outputs(rng)
            joint = JointPmf(("S1", "S2"), (2, 2), random_pmf(rng, (2, 2)))
            classical = strong_interference_check(
                joint, channel, 1.0, grid_resolution=0.25, classical=True
            )
            self.assertTrue(classical.holds)
            self.assertLessEqual(classical.worst_violation, 1e-9)
            with_side = joint.add_derived("W1", "S2", lambda s: s, 2).add_derived(
                "W2", "S1", lambda s: s, 2
            )
            report = strong_interference_check(with_side, channel, 1.0, grid_resolution=0.25)
            self.assertTrue(report.holds)
            self.assertLessEqual(report.worst_violation, 1e-9)

    def test_side_information_required(self):
        with self.assertRaises(ModelError):
            strong_interference_check(cover_salehi(), adder_compound(), 1.0)
        with self.assertRaises(ConfigurationError):
            strong_interference_check(cover_salehi(), adder_mac(), 1.0, classical=True)

    def test_interference_channel_certified(self):
        verdict = minrate_ic(
            independent_bits(), adder_compound(), "thm9", grid_resolution=0.1, refine=False
        )
        self.assertAlmostEqual(verdict.b_min, 4 / 3, delta=2e-4)
        self.assertEqual(verdict.mode, VerdictMode.EXACT)
        self.assertTrue(verdict.extras["strong_interference"]["holds"])


class TestSourceConditioned(unittest.TestCase):
    """Test cases for the b = 1 criteria and two-way channels."""

    def test_uncoded_cover_salehi_meets_conditions(self):
        uncoded = ProductInput.uncoded([0, 1], [0, 1], 2, 2)
        verdict = check_sufficient_b1(cover_salehi(), adder_mac(), "mac-thm1", uncoded)
        self.assertEqual(verdict.theorem, "thm1")
        self.assertEqual(verdict.achievable, Achievability.BOUNDARY)
        self.assertAlmostEqual(verdict.margin, 0.0, places=6)
        self.assertEqual(len(verdict.extras["conditions"]), 4)
        self.assertAlmostEqual(verdict.extras["common_part_entropy"], 0.0)

    def test_independent_bits_find_no_witness(self):
        verdict = check_sufficient_b1(independent_bits(), adder_mac(), "mac-thm1")
        self.assertEqual(verdict.achievable, Achievability.NO_WITNESS)
        self.assertLess(verdict.margin, 0.0)
        self.assertIsNotNone(verdict.witness)

    def test_scenario_checks(self):
        with self.assertRaises(ConfigurationError):
            check_sufficient_b1(cover_salehi(), adder_mac(), "mac-thm9")
        with self.assertRaises(ConfigurationError):
            check_sufficient_b1(cover_salehi(), adder_mac(), "cmac-thm4")

    def test_two_way_outer_bound(self):
        model = load_model("shannon-multiplier")
        bound = twoway_outer(model.source, model.channel)
        self.assertAlmostEqual(bound, 1.0, delta=0.01)

    def test_two_way_outer_trivial_sources(self):
        model = load_model("shannon-multiplier")
        same = JointPmf.from_flat(["S1", "S2"], [2, 2], [0.5, 0.0, 0.0, 0.5])
        self.assertEqual(twoway_outer(same, model.channel), 0.0)
        with self.assertRaises(ConfigurationError):
            twoway_outer(cover_salehi(), adder_mac())

    def test_two_way_uncoded_is_boundary(self):
        model = load_model("shannon-multiplier")
        uncoded = ProductInput.uncoded([0, 1], [0, 1], 2, 2)
        verdict = twoway_achievable(model.source, model.channel, uncoded)
        self.assertEqual(verdict.theorem, "twoway-ach")
        self.assertEqual(verdict.achievable, Achievability.BOUNDARY)
        self.assertEqual(len(verdict.extras["conditions"]), 2)

    def test_crossed_pipes_bounds(self):
        """Over two noiseless pipes the outer bound is the larger conditional entropy."""
        rng = np.random.default_rng(29)
        uncoded = ProductInput.uncoded([0, 1], [0, 1], 2, 2)
        for _ in range(5):
            joint = JointPmf(("S1", "S2"), (2, 2), random_pmf(rng, (2, 2)))
            bound = twoway_outer(joint, crossed_pipes(), grid_resolution=0.05, refine=False)
            expected = max(
                entropy_cond(joint, "S1", "S2"), entropy_cond(joint, "S2", "S1")
            )
            self.assertLessEqual(bound, 1.0 + 1e-9)
            self.assertAlmostEqual(bound, expected, delta=1e-6)
            verdict = twoway_achievable(joint, crossed_pipes(), uncoded)
            self.assertEqual(verdict.achievable, Achievability.BOUNDARY)


def markov_source(rng: np.random.Generator) -> JointPmf:
    """p(w) p(s1|w) p(s2|w) over binary S1, S2 and W1."""
    p_w = rng.dirichlet(np.ones(2))
    s1 = rng.dirichlet(np.ones(2), size=2)
    s2 = rng.dirichlet(np.ones(2), size=2)
    table = np.einsum("w,wa,wb->abw", p_w, s1, s2)
    return JointPmf(("S1", "S2", "W1"), (2, 2, 2), table)


class TestOracleAgreement(unittest.TestCase):
    """Minimum rates against an exhaustive-grid oracle on random MACs."""

    @pytest.mark.slow
    def test_random_macs_match_oracle(self):
        rng = np.random.default_rng(2007)
        for trial in range(20):
            channel = random_mac(rng)
            if trial % 2 == 0:
                theorem, joint = "thm2", markov_source(rng)
            else:
                pair = np.outer(rng.dirichlet(np.ones(2)), rng.dirichlet(np.ones(2)))
                theorem, joint = "thm3", JointPmf(("S1", "S2"), (2, 2), pair)
            verdict = minrate_mac(joint, channel, theorem, grid_resolution=0.05, refine=True)
            oracle = oracle_min_b(channel, verdict.entropy_vector, resolution=0.005)
            self.assertAlmostEqual(
                verdict.b_min, oracle, delta=5e-3 * max(1.0, oracle), msg=f"trial {trial}"
            )


if __name__ == "__main__":
    unittest.main()
