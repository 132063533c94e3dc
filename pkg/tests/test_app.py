"""
Unit tests for the command-line front end.
"""

import io
import json
import os
import shutil
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from math import log2
from unittest import mock

import pytest

from jscc_forge.app import UsageError, build_parser, execute, parse_mapping, parse_side
from jscc_forge.regions import achievable_hull

FAST = ["--grid", "0.05", "--no-refine", "--color", "never"]


def run(*argv: str):
    """Run one command line, returning (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = execute(list(argv))
    return code, out.getvalue(), err.getvalue()


class TestArgumentHelpers(unittest.TestCase):
    """Test cases for flag parsing helpers."""

    def test_parse_side(self):
        self.assertIsNone(parse_side("auto"))
        self.assertIsNone(parse_side(None))
        self.assertEqual(parse_side("none"), ())
        self.assertEqual(parse_side("W1, S2"), ("W1", "S2"))

    def test_parse_mapping(self):
        self.assertEqual(parse_mapping("0,1:1,0"), ([0, 1], [1, 0]))
        with self.assertRaises(UsageError):
            parse_mapping("0,1")

    def test_parser_requires_command(self):
        code, _, _ = run()
        self.assertEqual(code, 2)

    def test_version(self):
        code, out, _ = run("--version")
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("jscc-forge "))

    def test_theorem_choices(self):
        parser = build_parser()
        args = parser.parse_args(
            ["minrate", "--model", "cover-salehi", "--theorem", "thm7"]
        )
        self.assertEqual(args.theorem, "thm7")
        code, _, _ = run("minrate", "--model", "cover-salehi", "--theorem", "thm99")
        self.assertEqual(code, 2)


class TestInfoCommands(unittest.TestCase):
    """Test cases for the info subcommands."""

    def test_entropy_json(self):
        code, out, _ = run(
            "info", "entropy", "--model", "cover-salehi", "--of", "S1,S2", "--json"
        )
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual(data["quantity"], "H(S1,S2)")
        self.assertAlmostEqual(data["value"], log2(3), places=5)

    def test_entropy_text(self):
        code, out, _ = run(
            "info", "entropy", "--model", "cover-salehi-w1",
            "--of", "S1,S2", "--given", "W1",
            "--color", "never",
        )
        self.assertEqual(code, 0)
        self.assertEqual(out, "H(S1,S2|W1) = 0.918296\n")

    def test_channel_information(self):
        code, out, _ = run(
            "info", "mi", "--model", "cover-salehi", "--expr", "I(X1,X2;Y)", "--json"
        )
        self.assertEqual(code, 0)
        self.assertAlmostEqual(json.loads(out)["value"], 1.5, places=6)

    def test_source_information_needs_both_sides(self):
        code, _, err = run("info", "mi", "--model", "cover-salehi", "--of", "S1")
        self.assertEqual(code, 2)
        self.assertIn("--with", err)

    def test_structure(self):
        code, out, _ = run(
            "info", "structure", "--model", "independent-xor",
            "--independent", "S1:S2", "--identical", "S1:S2", "--json",
        )
        self.assertEqual(code, 0)
        checks = json.loads(out)["checks"]
        self.assertTrue(checks[0]["holds"])
        self.assertFalse(checks[1]["holds"])

    def test_common_part(self):
        code, out, _ = run("info", "common-part", "--model", "cover-salehi", "--json")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["u_cardinality"], 1)

    def test_models(self):
        code, out, _ = run("info", "models")
        self.assertEqual(code, 0)
        self.assertIn("shannon-multiplier", out.splitlines())

    def test_model_required(self):
        code, _, err = run("info", "entropy", "--of", "S1")
        self.assertEqual(code, 2)
        self.assertIn("--model is required", err)

    def test_unknown_model(self):
        code, _, err = run("info", "entropy", "--model", "no-such-model", "--of", "S1")
        self.assertEqual(code, 2)
        self.assertIn("no-such-model", err)

    def test_unknown_variable(self):
        code, _, _ = run("info", "entropy", "--model", "cover-salehi", "--of", "S9")
        self.assertEqual(code, 2)


class TestMinrateCommands(unittest.TestCase):
    """Test cases for minrate and its exit codes."""

    def test_markov_side_information(self):
        code, out, _ = run(
            "minrate", "--model", "cover-salehi-w1", "--theorem", "thm2", "--json", *FAST
        )
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual(data["mode"], "exact")
        self.assertAlmostEqual(data["b_min"], 0.918296 / 1.5, delta=3e-4)

    def test_precondition_exit_code(self):
        code, out, _ = run(
            "minrate", "--model", "cover-salehi", "--theorem", "thm2", *FAST
        )
        self.assertEqual(code, 1)
        self.assertIn("Precondition of thm2 violated", out)
        self.assertIn("--force", out)

    def test_precondition_json(self):
        code, out, _ = run(
            "minrate", "--model", "cover-salehi", "--theorem", "thm2", "--json", *FAST
        )
        self.assertEqual(code, 1)
        data = json.loads(out)
        self.assertEqual(data["error"], "precondition")
        self.assertFalse(data["precondition_report"][0]["holds"])

    def test_forced_run(self):
        code, out, _ = run(
            "minrate", "--model", "cover-salehi", "--theorem", "thm2", "--force",
            "--json", *FAST,
        )
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["mode"], "sufficient")

    def test_side_none_uses_matching_reference(self):
        code, out, _ = run(
            "minrate", "--model", "independent-xor",
            "--theorem", "thm3", "--side", "none",
            "--json", *FAST,
        )
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertAlmostEqual(data["b_min"], 4 / 3, delta=3e-4)
        self.assertAlmostEqual(data["reference"], 1.33)

    def test_oracle(self):
        code, out, _ = run(
            "minrate", "--model", "cover-salehi", "--theorem", "infosep",
            "--oracle", "--oracle-grid", "0.01", "--json", *FAST,
        )
        self.assertEqual(code, 0)
        extras = json.loads(out)["extras"]
        self.assertAlmostEqual(extras["oracle_b_min"], log2(3) / 1.5, delta=1e-4)
        self.assertEqual(extras["oracle_grid"], 0.01)

    def test_text_verdict(self):
        code, out, _ = run(
            "minrate", "--model", "cover-salehi", "--theorem", "infosep", *FAST
        )
        self.assertEqual(code, 0)
        self.assertIn("INFOSEP VERDICT", out)
        self.assertIn("reference", out)

    def test_threads_reach_region_construction(self):
        with mock.patch(
            "jscc_forge.criteria.achievable_hull", wraps=achievable_hull
        ) as spy:
            code, _, _ = run(
                "minrate", "--model", "independent-xor", "--theorem", "thm3",
                "--threads", "2", "--json", *FAST,
            )
        self.assertEqual(code, 0)
        self.assertTrue(spy.called)
        self.assertEqual(spy.call_args.kwargs["threads"], 2)

    def test_compound_side_names_checked(self):
        code, _, err = run(
            "minrate", "--model", "no-mai-pipes", "--theorem", "thm7", "--side", "S1",
            *FAST,
        )
        self.assertEqual(code, 2)
        self.assertIn("W1/W2", err)

    def test_compound_side_recorded(self):
        code, out, _ = run(
            "minrate", "--model", "no-mai-pipes", "--theorem", "thm7", "--side", "none",
            "--json", *FAST,
        )
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["extras"]["side_information"], [[], []])

    def test_internal_error_exit_code(self):
        with mock.patch(
            "jscc_forge.app.CommandRunner.run", side_effect=RuntimeError("boom")
        ):
            code, _, _ = run("info", "models")
        self.assertEqual(code, 3)


class TestCheckAndTwoWayCommands(unittest.TestCase):
    """Test cases for check and twoway."""

    def test_uncoded_two_way(self):
        code, out, _ = run(
            "check", "--model", "shannon-multiplier", "--theorem", "twoway-ach",
            "--uncoded", "--json",
        )
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["achievable"], "boundary")

    def test_uncoded_mac(self):
        code, out, _ = run(
            "check", "--model", "cover-salehi", "--theorem", "thm1",
            "--map", "0,1:0,1", "--json",
        )
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["theorem"], "thm1")

    def test_strong_interference_needs_rate(self):
        code, _, err = run(
            "check", "--model", "no-mai-pipes", "--theorem", "stronginterference"
        )
        self.assertEqual(code, 2)
        self.assertIn("--b", err)

    @pytest.mark.slow
    def test_two_way_outer(self):
        code, out, _ = run("twoway", "outer", "--model", "shannon-multiplier", "--json")
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertAlmostEqual(data["b_lower"], 1.0, delta=0.02)
        self.assertEqual(data["reference"], 1.0)


class TestSimulateAndOutput(unittest.TestCase):
    """Test cases for simulate, region dumps and --out."""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.test_dir, ignore_errors=True)

    def test_uncoded_simulation(self):
        code, out, _ = run(
            "simulate", "--model", "cover-salehi", "--scheme", "uncoded",
            "--m", "8", "--b", "1", "--trials", "5", "--json",
        )
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual(data["receivers"][0]["errors"], 0)
        self.assertNotIn("wall_clock", data)

    def test_csv(self):
        code, out, _ = run(
            "simulate", "--model", "cover-salehi", "--scheme", "uncoded",
            "--m", "4", "--b", "1", "--trials", "2", "--csv",
        )
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("scheme,m,n,b,trials,seed"))
        self.assertEqual(len(out.splitlines()), 2)

    def test_simulation_output_is_reproducible(self):
        for scheme, extra in (("matched", ["--b", "1.5"]), ("uncoded", ["--b", "1"])):
            argv = [
                "simulate", "--model", "independent-xor", "--scheme", scheme,
                "--m", "4", *extra, "--trials", "5", "--seed", "9", "--json",
            ]
            first, second = run(*argv), run(*argv)
            self.assertEqual(first[0], 0)
            self.assertEqual(first[1], second[1])

    def test_input_errors(self):
        code, _, _ = run(
            "simulate", "--model", "cover-salehi", "--scheme", "uncoded", "--m", "4"
        )
        self.assertEqual(code, 2)
        code, _, _ = run(
            "simulate", "--model", "cover-salehi", "--scheme", "separation",
            "--m", "4", "--b", "1", "--rates", "1",
        )
        self.assertEqual(code, 2)
        code, _, _ = run(
            "simulate", "--model", "independent-xor", "--scheme", "matched",
            "--m", "40", "--b", "1",
        )
        self.assertEqual(code, 2)

    def test_block_length_validated(self):
        code, _, err = run(
            "simulate", "--model", "independent-xor", "--scheme", "matched",
            "--m", "0", "--b", "1",
        )
        self.assertEqual(code, 2)
        self.assertIn("m must be ≥ 1", err)

    def test_region_dump_to_file(self):
        path = os.path.join(self.test_dir, "region.csv")
        code, out, _ = run(
            "region", "dump", "--model", "cover-salehi", "--grid", "0.5", "--no-refine",
            "--out", path,
        )
        self.assertEqual(code, 0)
        self.assertEqual(out, "")
        with open(path, encoding="utf-8") as f:
            self.assertEqual(f.readline().strip(), "i1_rx1,i2_rx1,isum_rx1,p_x1,p_x2")


if __name__ == "__main__":
    unittest.main()
