"""Versioned JSON model files with base64 little-endian float64 parameter blobs."""
from __future__ import annotations

import base64
import json
from pathlib import Path

import numpy as np

from .classifier import DfClassifier, parameter_hash
from .nn_core import DenseLayer
from .sdae import SdaeModel

FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    pass


def _pack(arr: np.ndarray) -> dict:
    arr = np.ascontiguousarray(arr, dtype="<f8")
    return {"shape": list(arr.shape), "data": base64.b64encode(arr.tobytes()).decode("ascii")}


def _unpack(blob: dict) -> np.ndarray:
    try:
        raw = base64.b64decode(blob["data"], validate=True)
        arr = np.frombuffer(raw, dtype="<f8").astype(np.float64)
        return arr.reshape(blob["shape"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"bad parameter blob: {exc}") from None


def classifier_to_dict(model: DfClassifier, metadata: dict | None = None) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": model.kind,
        "dims": list(model.dims),
        "layers": [{"activation": l.activation, "frozen": l.frozen,
                    "weights": _pack(l.weights), "bias": _pack(l.bias)} for l in model.layers],
        "param_hash": parameter_hash(model.layers),
        "metadata": metadata or {},
    }


def sdae_to_dict(model: SdaeModel, metadata: dict | None = None) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "sdae",
        "dims": [model.n_inputs, model.n_hidden],
        "encoder_weights": _pack(model.encoder_weights),
        "encoder_bias": _pack(model.encoder_bias),
        "decoder_bias": _pack(model.decoder_bias),
        "metadata": metadata or {},
    }


def from_dict(doc: dict):
    """Rebuild a ``DfClassifier`` or ``SdaeModel``; returns ``(model, metadata)``."""
    if doc.get("format_version") != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported format_version {doc.get('format_version')!r}")
    kind = doc.get("kind")
    dims = doc.get("dims")
    if kind == "sdae":
        model = SdaeModel(_unpack(doc["encoder_weights"]), _unpack(doc["encoder_bias"]),
                          _unpack(doc["decoder_bias"]))
        found = [model.n_inputs, model.n_hidden]
    elif kind in ("sdae_dnn", "baseline_dnn"):
        try:
            layers = [DenseLayer(_unpack(l["weights"]), _unpack(l["bias"]), l["activation"], bool(l["frozen"]))
                      for l in doc["layers"]]
            model = DfClassifier(layers, kind)
        except (KeyError, TypeError) as exc:
            raise ModelFormatError(f"bad layer record: {exc}") from None
        except ValueError as exc:
            raise ModelFormatError(str(exc)) from None
        found = list(model.dims)
        if "param_hash" in doc and doc["param_hash"] != parameter_hash(model.layers):
            raise ModelFormatError("parameter hash mismatch")
    else:
        raise ModelFormatError(f"unknown model kind {kind!r}")
    if dims != found:
        raise ModelFormatError(f"declared dims {dims} do not match parameters {found}")
    return model, doc.get("metadata", {})


def save_model(model, path, metadata: dict | None = None) -> None:
    doc = sdae_to_dict(model, metadata) if isinstance(model, SdaeModel) else classifier_to_dict(model, metadata)
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def load_model(path):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ModelFormatError(f"{path}: expected a JSON object")
    return from_dict(doc)
