"""Flat key=value run configuration shared by the CLI commands.

Resolution order: module-declared defaults, then the config file, then
command-line flags. Unknown keys are rejected. The table below is the
single source of truth; parser flags and help text are generated from it,
and a test reflects over it to keep defaults in sync with the owning
dataclasses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from .errors import ParseError, ValidationError
from .integration import IntegrationConfig
from .similarity import PredictConfig
from .training import TrainConfig

_TRAIN = TrainConfig()
_PREDICT = PredictConfig()
_INTEGRATE = IntegrationConfig()


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class ConfigKey:
    name: str
    type: Callable[[str], Any]
    default: Any
    help: str
    aliases: tuple[str, ...] = ()
    choices: tuple[str, ...] | None = None


CONFIG_TABLE: tuple[ConfigKey, ...] = (
    ConfigKey("learning_rate", float, _TRAIN.learning_rate, "optimizer learning rate", ("lr",)),
    ConfigKey("epochs", int, _TRAIN.epochs, "training epochs"),
    ConfigKey("batch_size", int, _TRAIN.batch_size, "sentence pairs per optimizer step"),
    ConfigKey("weight_decay", float, _TRAIN.weight_decay, "decoupled weight decay"),
    ConfigKey("dropout_rate", float, _TRAIN.dropout_rate, "inverted dropout on hidden rows"),
    ConfigKey("temperature", float, _TRAIN.temperature, "softmax temperature"),
    ConfigKey("beta1", float, _TRAIN.beta1, "AdamW first-moment decay"),
    ConfigKey("beta2", float, _TRAIN.beta2, "AdamW second-moment decay"),
    ConfigKey("eps", float, _TRAIN.eps, "AdamW denominator epsilon"),
    ConfigKey("dim", int, _TRAIN.dim, "embedding dimension"),
    ConfigKey("kind", str, _TRAIN.kind, "encoder kind", (), ("static", "attn1")),
    ConfigKey("seed", int, _TRAIN.seed, "random seed"),
    ConfigKey("c", float, _PREDICT.c, "prediction threshold on both directional probabilities"),
    ConfigKey("f", float, _INTEGRATE.f, "integration filter threshold on total credit"),
    ConfigKey("lambda", float, _INTEGRATE.steepness, "integration sigmoid steepness"),
    ConfigKey("index_base", int, 0, "Pharaoh file index base (0 or 1)"),
    ConfigKey(
        "subword_mode", str, "identity", "corpus subword segmentation",
        (), ("identity", "char_bigram"),
    ),
)

_BY_NAME = {key.name: key for key in CONFIG_TABLE}


def parse_config_file(path) -> dict[str, Any]:
    """Parse flat ``key = value`` lines; '#' starts a comment."""
    values: dict[str, Any] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(f"expected 'key = value', got {line!r}", line=line_no)
            name, _, text = line.partition("=")
            name = name.strip()
            text = text.strip()
            key = _BY_NAME.get(name)
            if key is None:
                raise ParseError(f"unknown config key {name!r}", line=line_no)
            try:
                value = key.type(text)
            except ValueError:
                raise ParseError(
                    f"bad value {text!r} for config key {name!r}", line=line_no
                ) from None
            if key.choices and value not in key.choices:
                raise ParseError(
                    f"config key {name!r} must be one of {key.choices}, got {value!r}",
                    line=line_no,
                )
            values[name] = value
    return values


def resolve(file_values: dict[str, Any] | None, flag_values: dict[str, Any]) -> dict[str, Any]:
    """defaults < config file < flags; returns a full table-keyed dict."""
    resolved = {key.name: key.default for key in CONFIG_TABLE}
    if file_values:
        resolved.update(file_values)
    for name, value in flag_values.items():
        if value is not None:
            if name not in _BY_NAME:
                raise ValidationError(f"unknown config key {name!r}")
            resolved[name] = value
    if resolved["index_base"] not in (0, 1):
        raise ValidationError(f"index_base must be 0 or 1, got {resolved['index_base']}")
    return resolved


def train_config(cfg: dict[str, Any]) -> TrainConfig:
    return TrainConfig(
        learning_rate=cfg["learning_rate"],
        epochs=cfg["epochs"],
        batch_size=cfg["batch_size"],
        weight_decay=cfg["weight_decay"],
        dropout_rate=cfg["dropout_rate"],
        seed=cfg["seed"],
        temperature=cfg["temperature"],
        beta1=cfg["beta1"],
        beta2=cfg["beta2"],
        eps=cfg["eps"],
        dim=cfg["dim"],
        kind=cfg["kind"],
    )


def predict_config(cfg: dict[str, Any]) -> PredictConfig:
    return PredictConfig(c=cfg["c"], temperature=cfg["temperature"])


def integration_config(cfg: dict[str, Any]) -> IntegrationConfig:
    return IntegrationConfig(f=cfg["f"], steepness=cfg["lambda"])
