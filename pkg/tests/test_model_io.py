"""
Unit tests for model file loading and saving.
"""

import json
import os
import shutil
import tempfile
import unittest

import numpy as np

from jscc_forge.exception_handler import ModelError, ModelFileError
from jscc_forge.model_io import (
    Model,
    bundled_models,
    load_model,
    model_from_dict,
    model_to_dict,
    save_model,
)
from jscc_forge.prob_core import ChannelKind, JointPmf


def minimal_model() -> dict:
    return {
        "format_version": 1,
        "name": "tiny",
        "source": {
            "variables": ["S1", "S2"],
            "cardinalities": [2, 2],
            "probabilities": [0.25, 0.25, 0.25, 0.25],
        },
        "channel": {
            "kind": "mac",
            "inputs": {"X1": 2, "X2": 2},
            "outputs": {"Y1": 2},
            "table": [1, 0, 0, 1, 0, 1, 1, 0],
        },
    }


class TestBundledModels(unittest.TestCase):
    """Test cases for the models shipped with the package."""

    def test_all_bundled_models_load(self):
        """Every bundled model parses and carries a channel."""
        names = bundled_models()
        for expected in (
            "cooperation",
            "cover-salehi",
            "cover-salehi-w1",
            "independent-xor",
            "no-mai-pipes",
            "shannon-multiplier",
        ):
            self.assertIn(expected, names)
        for name in names:
            model = load_model(name)
            self.assertEqual(model.name, name)
            self.assertIsNotNone(model.channel)

    def test_suffix_is_optional(self):
        """Bundled names resolve with or without the .json suffix."""
        self.assertEqual(load_model("cover-salehi.json").name, "cover-salehi")

    def test_reference_values(self):
        """Reference values come from the labels block."""
        refs = load_model("independent-xor").reference_values
        self.assertAlmostEqual(refs["thm3"], 0.67)
        self.assertIn("thm3-no-side", refs)

    def test_reserialized_models_match(self):
        """Every bundled model survives a dict round trip unchanged."""
        for name in bundled_models():
            model = load_model(name)
            again = model_from_dict(model_to_dict(model))
            np.testing.assert_allclose(again.source.table, model.source.table, atol=1e-12)
            np.testing.assert_allclose(again.channel.table, model.channel.table, atol=1e-12)
            self.assertEqual(again.channel.output_names, model.channel.output_names)

    def test_channel_kinds(self):
        self.assertEqual(load_model("shannon-multiplier").channel.kind, ChannelKind.TWO_WAY)
        self.assertEqual(load_model("no-mai-pipes").channel.kind, ChannelKind.NO_MAI)


class TestModelFiles(unittest.TestCase):
    """Test cases for reading and writing model files."""

    def setUp(self):
        """Set up a scratch directory."""
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        """Remove the scratch directory."""
        shutil.rmtree(self.test_dir, ignore_errors=True)

    def write(self, name: str, text: str) -> str:
        path = os.path.join(self.test_dir, name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path

    def test_missing_file(self):
        """An unknown path lists the bundled models."""
        with self.assertRaises(ModelFileError) as ctx:
            load_model(os.path.join(self.test_dir, "absent.json"))
        self.assertIn("cover-salehi", str(ctx.exception))

    def test_invalid_json(self):
        path = self.write("broken.json", "{not json")
        with self.assertRaises(ModelFileError) as ctx:
            load_model(path)
        self.assertIn("invalid JSON", str(ctx.exception))

    def test_format_version(self):
        data = minimal_model()
        data["format_version"] = 2
        with self.assertRaises(ModelFileError):
            model_from_dict(data)

    def test_missing_field(self):
        data = minimal_model()
        del data["source"]["cardinalities"]
        with self.assertRaises(ModelFileError) as ctx:
            model_from_dict(data)
        self.assertIn("cardinalities", str(ctx.exception))

    def test_probabilities_checked(self):
        """Probability invariants surface as file errors naming the origin."""
        data = minimal_model()
        data["source"]["probabilities"] = [0.5, 0.5, 0.5, 0.5]
        with self.assertRaises(ModelFileError):
            model_from_dict(data, "bad.json")

    def test_channel_input_names(self):
        data = minimal_model()
        data["channel"]["inputs"] = {"A": 2, "B": 2}
        with self.assertRaises(ModelFileError):
            model_from_dict(data)

    def test_top_level_must_be_object(self):
        path = self.write("list.json", json.dumps([1, 2, 3]))
        with self.assertRaises(ModelFileError):
            load_model(path)

    def test_save_and_reload(self):
        """A saved model reloads with the same tables and labels."""
        model = model_from_dict(minimal_model())
        model.labels = {"reference_values": {"infosep": 1.0}}
        path = os.path.join(self.test_dir, "saved.json")
        save_model(model, path)
        reloaded = load_model(path)
        self.assertEqual(reloaded.source.variables, ("S1", "S2"))
        self.assertEqual(reloaded.channel.flat(), model.channel.flat())
        self.assertEqual(reloaded.reference_values, {"infosep": 1.0})
        self.assertEqual(reloaded.path, path)

    def test_source_only_model(self):
        """Models without a channel serialize without a channel block."""
        source = JointPmf.from_flat(["S1"], [2], [0.5, 0.5])
        model = Model(name="coin", source=source)
        self.assertNotIn("channel", model_to_dict(model))
        with self.assertRaises(ModelError):
            model.require_channel()


if __name__ == "__main__":
    unittest.main()
