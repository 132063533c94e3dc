"""
Unit tests for text, JSON and CSV rendering.
"""

import io
import json
import unittest

import numpy as np

from jscc_forge.criteria import Achievability, Verdict, VerdictMode
from jscc_forge.prob_core import CommonPart, StructureReport
from jscc_forge.regions import EntropyVector
from jscc_forge.report import ReportFormatter, to_json
from jscc_forge.simulate import EVENTS, SimResult


class TestToJson(unittest.TestCase):
    """Test cases for stable JSON output."""

    def test_sorted_and_rounded(self):
        text = to_json({"b": 1 / 3, "a": np.float64(2.0), "mode": VerdictMode.EXACT})
        self.assertLess(text.index('"a"'), text.index('"b"'))
        data = json.loads(text)
        self.assertEqual(data["b"], 0.333333)
        self.assertEqual(data["mode"], "exact")

    def test_numpy_and_non_finite(self):
        data = json.loads(
            to_json({"v": np.array([1, 2]), "flag": np.bool_(True), "inf": float("inf")})
        )
        self.assertEqual(data["v"], [1, 2])
        self.assertIs(data["flag"], True)
        self.assertIsNone(data["inf"])


class TestReportFormatter(unittest.TestCase):
    """Test cases for ReportFormatter."""

    def setUp(self):
        """Plain-text formatter."""
        self.formatter = ReportFormatter(color="never", stream=io.StringIO())

    def test_color_modes(self):
        with self.assertRaises(ValueError):
            ReportFormatter(color="sometimes")
        self.assertEqual(self.formatter.status("yes"), "yes")
        self.assertEqual(self.formatter.status("unknown"), "unknown")

    def test_number(self):
        self.assertEqual(ReportFormatter.number(None), "-")
        self.assertEqual(ReportFormatter.number(1 / 3), "0.333333")

    def test_table_lines_align(self):
        lines = self.formatter.table(["A", "Longer"], [["1", "2"], ["333", "4"]]).splitlines()
        self.assertEqual(len(lines), 6)
        self.assertEqual(len({len(line) for line in lines}), 1)
        self.assertIn("333", lines[4])

    def test_structure_and_common_part(self):
        text = self.formatter.format_structure(
            [StructureReport("S1 - W1 - S2", False, 0.125)]
        )
        self.assertIn("fails", text)
        self.assertIn("0.125", text)
        common = CommonPart((0, 1), (0, 0, 1), 2, 1.0, (0.5, 0.5))
        self.assertIn("0 0 1", self.formatter.format_common_part(common))

    def test_verdict(self):
        verdict = Verdict(
            theorem="thm2",
            mode=VerdictMode.EXACT,
            achievable=Achievability.BOUNDARY,
            margin=0.0,
            b_min=0.612197,
            entropy_vector=EntropyVector((0.4, 0.4, 0.9)),
            extras={"oracle_b_min": 0.6121},
            notes=["side information W1"],
        )
        text = self.formatter.format_verdict(verdict, {"thm2": 0.61})
        self.assertIn("THM2 VERDICT", text)
        self.assertIn("boundary", text)
        self.assertIn("0.612197", text)
        self.assertIn("oracle b min", text)
        self.assertIn("0.610000", text)
        self.assertIn("note: side information W1", text)

    def test_minrate_value(self):
        line = self.formatter.format_minrate_value("thm2", 0.612197, 0.6121, {"thm2": 0.61})
        self.assertEqual(line, "thm2: b_min = 0.612197, oracle = 0.612100, reference = 0.610000")

    def test_simulation(self):
        result = SimResult(
            scheme="uncoded",
            m=4,
            n=4,
            b=1.0,
            trials=2,
            seed=1,
            receivers=[1],
            error_counts=[1],
            event_counts=[dict.fromkeys(EVENTS, 0)],
            component_counts=[{"channel_decoding": 0, "source_decoding": 0}],
            symbol_errors=[2],
            symbols=8,
        )
        text = self.formatter.format_simulation(result)
        self.assertIn("SIMULATION SUMMARY", text)
        self.assertIn("rx1", text)
        self.assertIn("symbol error rates: 0.250000", text)


if __name__ == "__main__":
    unittest.main()
