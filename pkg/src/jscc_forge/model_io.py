#!/usr/bin/python3
"""
Model I/O Module

Load and save self-describing JSON model files: a joint source pmf, an
optional channel and free-form labels. Bundled models ship as package data
and can be addressed by name.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .config import Config
from .exception_handler import ModelError, ModelFileError
from .prob_core import ChannelModel, JointPmf


@dataclass
class Model:
    """A parsed model file."""

    name: str
    source: JointPmf
    channel: Optional[ChannelModel] = None
    description: str = ""
    labels: Dict[str, Any] = field(default_factory=dict)
    path: Optional[str] = None

    @property
    def reference_values(self) -> Dict[str, float]:
        """Published values to print next to computed ones, keyed by theorem."""
        values = self.labels.get("reference_values", {})
        return {str(k): float(v) for k, v in values.items()}

    def require_channel(self) -> ChannelModel:
        if self.channel is None:
            raise ModelError(f"Model '{self.name}' has no channel block")
        return self.channel


def get_models_dir() -> str:
    """Directory of the bundled model files inside the package."""
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), Config.MODEL_PACKAGE_DIR)


def bundled_models() -> List[str]:
    """Names of the models shipped with the package."""
    directory = get_models_dir()
    if not os.path.isdir(directory):
        return []
    return sorted(f[: -len(".json")] for f in os.listdir(directory) if f.endswith(".json"))


def _read_text(location: str) -> Tuple[str, str]:
    if os.path.exists(location):
        with open(location, "r", encoding="utf-8") as f:
            return f.read(), location
    name = location[: -len(".json")] if location.endswith(".json") else location
    bundled = os.path.join(get_models_dir(), f"{name}.json")
    if os.path.isfile(bundled):
        with open(bundled, "r", encoding="utf-8") as f:
            return f.read(), bundled
    raise ModelFileError(
        location, f"no such file or bundled model (bundled: {', '.join(bundled_models())})"
    )


def model_from_dict(data: Dict[str, Any], origin: str = "<dict>") -> Model:
    """Build a Model from parsed JSON, enforcing the probability invariants."""
    if not isinstance(data, dict):
        raise ModelFileError(origin, "top level must be a JSON object")
    version = data.get("format_version")
    if version != Config.MODEL_FORMAT_VERSION:
        raise ModelFileError(
            origin,
            f"unsupported format_version {version!r} "
            f"(expected {Config.MODEL_FORMAT_VERSION})",
        )
    try:
        src = data["source"]
        source = JointPmf.from_flat(
            src["variables"], src["cardinalities"], src["probabilities"]
        )
        channel = None
        if data.get("channel") is not None:
            ch = data["channel"]
            inputs = ch["inputs"]
            if list(inputs) != ["X1", "X2"]:
                raise ModelFileError(origin, "channel inputs must be X1 and X2")
            outputs = ch["outputs"]
            channel = ChannelModel(
                ch["kind"],
                (int(inputs["X1"]), int(inputs["X2"])),
                tuple(outputs),
                tuple(int(c) for c in outputs.values()),
                ch["table"],
            )
    except KeyError as e:
        raise ModelFileError(origin, f"missing field {e}") from e
    except (TypeError, ValueError) as e:
        raise ModelFileError(origin, str(e)) from e
    except ModelFileError:
        raise
    except ModelError as e:
        raise ModelFileError(origin, str(e)) from e

    return Model(
        name=str(data.get("name", "")),
        source=source,
        channel=channel,
        description=str(data.get("description", "")),
        labels=dict(data.get("labels") or {}),
        path=origin,
    )


def model_to_dict(model: Model) -> Dict[str, Any]:
    """Serialize a Model to the version-1 JSON structure."""
    data: Dict[str, Any] = {
        "format_version": Config.MODEL_FORMAT_VERSION,
        "name": model.name,
        "description": model.description,
        "source": {
            "variables": list(model.source.variables),
            "cardinalities": list(model.source.cardinalities),
            "probabilities": model.source.flat(),
        },
    }
    if model.channel is not None:
        ch = model.channel
        data["channel"] = {
            "kind": ch.kind.value,
            "inputs": {"X1": ch.input_cardinalities[0], "X2": ch.input_cardinalities[1]},
            "outputs": dict(zip(ch.output_names, ch.output_cardinalities)),
            "table": ch.flat(),
        }
    if model.labels:
        data["labels"] = model.labels
    return data


def load_model(location: str) -> Model:
    """
    Load a model from a file path or a bundled model name.

    Raises:
        ModelFileError: If the file is missing, not JSON or not a valid model
    """
    text, origin = _read_text(location)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFileError(origin, f"invalid JSON: {e}") from e
    model = model_from_dict(data, origin)
    logging.debug(
        f"Loaded model '{model.name}' from {origin}: source {model.source.variables}, "
        f"channel {model.channel.kind.value if model.channel else None}"
    )
    return model


def save_model(model: Model, path: str) -> None:
    """Write a model file."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(model_to_dict(model), f, indent=2)
        f.write("\n")
    logging.debug(f"Model '{model.name}' saved to {path}")
