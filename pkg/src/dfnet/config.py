"""Experiment configuration loaded from TOML with strict key checking."""
from __future__ import annotations

import dataclasses
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .classifier import TrainConfig
from .dataset import GenConfig
from .sdae import Corrupter, SdaeTrainConfig, SparsityConfig
from .signal_model import ArrayConfig, GainPattern


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class InterferenceConfig:
    """Evaluation-environment shift applied by ``simulate --interference``."""

    noise_offset_db: float = 6.0
    inr_db: float = 0.0


@dataclass(frozen=True)
class DnnConfig:
    hidden: tuple = (12, 12)
    epochs: int = 300
    batch_size: int = 32
    optimizer: str = "adam"
    learning_rate: float = 1e-3
    baseline_wide_layer: int = 0
    # False trains the baseline on uncorrupted inputs
    baseline_corrupt: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    test_per_class: int = 100
    array: ArrayConfig = field(default_factory=ArrayConfig)
    dataset: GenConfig = field(default_factory=GenConfig)
    interference: InterferenceConfig = field(default_factory=InterferenceConfig)
    sparsity: SparsityConfig = field(default_factory=SparsityConfig)
    corrupter: Corrupter = field(default_factory=Corrupter)
    sdae: SdaeTrainConfig = field(default_factory=SdaeTrainConfig)
    dnn: DnnConfig = field(default_factory=DnnConfig)

    def gen_config(self, *, test: bool = False, interference: bool = False) -> GenConfig:
        kw = {"array": self.array, "seed": self.seed + (1 if test else 0)}
        if test:
            kw["per_class"] = self.test_per_class
        if interference:
            kw["noise_offset_db"] = self.interference.noise_offset_db
            kw["interference_inr_db"] = self.interference.inr_db
        return dataclasses.replace(self.dataset, **kw)

    def sdae_train(self) -> SdaeTrainConfig:
        return dataclasses.replace(self.sdae, seed=self.seed)

    def dnn_train(self, baseline: bool = False) -> TrainConfig:
        d = self.dnn
        corr = self.corrupter
        if baseline and not d.baseline_corrupt:
            corr = Corrupter(corr.kind, 0.0, 0.0)
        return TrainConfig(d.hidden, d.epochs, d.batch_size, d.optimizer, d.learning_rate,
                           corr, self.seed, d.baseline_wide_layer if baseline else 0)

    def digest(self) -> str:
        blob = json.dumps(to_dict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def to_dict(obj):
    if dataclasses.is_dataclass(obj):
        return {f.name: to_dict(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, tuple):
        return list(obj)
    return obj


# nested sections: field name -> dataclass; "gain" lives under [array]
_NESTED = {
    ArrayConfig: {"gain_pattern": GainPattern},
    ExperimentConfig: {"array": ArrayConfig, "dataset": GenConfig, "interference": InterferenceConfig,
                       "sparsity": SparsityConfig, "corrupter": Corrupter, "sdae": SdaeTrainConfig,
                       "dnn": DnnConfig},
}
_ALIASES = {ArrayConfig: {"gain": "gain_pattern"}}
# set from elsewhere in the experiment config, never from their own section
_DERIVED = {GenConfig: {"array", "seed"}, SdaeTrainConfig: {"seed"}}


def _build(cls, raw: dict, where: str):
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected a table")
    names = {f.name: f for f in dataclasses.fields(cls)} 
    allowed = set(names) - _DERIVED.get(cls, set())
    aliases = _ALIASES.get(cls, {})
    kwargs = {}
    for key, value in raw.items():
        name = aliases.get(key, key)
        if name not in allowed or name in aliases:
            raise ConfigError(f"{where}: unknown key {key!r}")
        sub = _NESTED.get(cls, {}).get(name)
        path = f"{where}.{key}" if where else key
        if sub is not None:
            value = _build(sub, value, path)
        elif isinstance(value, list):
            value = tuple(value)
        kwargs[name] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where or 'config'}: {exc}") from None


def from_dict(raw: dict) -> ExperimentConfig:
    return _build(ExperimentConfig, raw, "")


def load_config(path=None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    try:
        raw = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return from_dict(raw)
