"""
Run configuration: one YAML file per run, checked against the schema of its subcommand.
"""
import dataclasses
import logging
import typing
from dataclasses import dataclass, field
from typing import List, Optional

import yaml

l = logging.getLogger("hdl.config")


def _all_cases():
    return [ "case1_random", "case2_far_gaussian", "case3_corner_plane", "case4_near_gaussian" ]


@dataclass
class RunConfig:
    out: str = "out"
    seed: int = 0
    threads: Optional[int] = None


@dataclass
class ToySimConfig(RunConfig):
    rows: int = 64
    cols: int = 48
    gamma: float = 0.5
    beta: float = 10.0
    iterations: int = 500
    j_gt: List[float] = field(default_factory=lambda: [48.0, 36.0])
    cases: List[str] = field(default_factory=_all_cases)
    losses: List[str] = field(default_factory=lambda: [ "regression", "debiased_regression", "detection" ])
    reg_weight: float = 0.0
    tau: float = 0.0
    t_o: int = 120
    epoch_length: int = 1
    snapshots: List[int] = field(default_factory=lambda: [0, 5, 10, 15, 20])
    snapshot_format: str = "csv"
    ground_truth_sigma: float = 2.0
    eps: float = 1.0


@dataclass
class BiasSweepConfig(RunConfig):
    rows: int = 64
    cols: int = 48
    betas: List[float] = field(default_factory=lambda: [1.0, 5.0, 10.0, 20.0])
    sigmas: List[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    truncate: float = 3.0
    step: int = 6


@dataclass
class EpeVerifyConfig(RunConfig):
    trials: int = 10000
    s_values: List[int] = field(default_factory=lambda: [1, 2, 3])


@dataclass
class SigmaLabConfig(RunConfig):
    sigma_trues: List[float] = field(default_factory=lambda: [1.0, 2.0, 4.0])
    delta_mus: List[float] = field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0])
    sigma_min: float = 0.01
    sigma_max: float = 20.0
    points: int = 2000


@dataclass
class Chi2Config(RunConfig):
    heatmaps: List[str] = field(default_factory=list)
    beta: float = 10.0
    s: int = 4
    sigma_grid: List[float] = field(default_factory=lambda: [1.0, 2.0, 3.0, 4.0])
    rows: int = 64
    cols: int = 48
    synth_sigmas: List[float] = field(default_factory=lambda: [1.0, 2.0, 3.0])


@dataclass
class GradCheckConfig(RunConfig):
    trials: int = 50
    sizes: List[List[int]] = field(default_factory=lambda: [[8, 6], [16, 12], [32, 24], [64, 48]])
    betas: List[float] = field(default_factory=lambda: [1.0, 10.0, 20.0])
    step: float = 1e-6
    tol: float = 1e-5
    regularizer: bool = False


@dataclass
class SplitConfig(RunConfig):
    annotations: Optional[str] = None
    predictions: Optional[str] = None


def _coerce(name, value, tp):
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)
    if origin is typing.Union:
        if value is None and type(None) in args:
            return None
        inner = [ a for a in args if a is not type(None) ]
        return _coerce(name, value, inner[0])
    if origin in (list, List):
        if not isinstance(value, (list, tuple)):
            raise ConfigError("%s: expected a list, got %r" % (name, value))
        return [ _coerce("%s[%d]" % (name, k), v, args[0]) for k, v in enumerate(value) ]
    if tp is bool:
        if not isinstance(value, bool):
            raise ConfigError("%s: expected true/false, got %r" % (name, value))
        return value
    if tp is int:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ConfigError("%s: expected an integer, got %r" % (name, value))
        return int(value)
    if tp is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError("%s: expected a number, got %r" % (name, value))
        return float(value)
    if tp is str:
        if not isinstance(value, str):
            raise ConfigError("%s: expected a string, got %r" % (name, value))
        return value
    raise ConfigError("%s: unsupported field type %r" % (name, tp))


def build(schema, data):
    """
    Instantiates `schema` from a mapping, rejecting unknown keys and coercing values to the field types.
    """
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping, got %s" % type(data).__name__)
    hints = typing.get_type_hints(schema)
    names = { f.name for f in dataclasses.fields(schema) }
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError("unknown configuration key(s): %s" % ", ".join(map(str, unknown)))
    return schema(**{ k: _coerce(k, v, hints[k]) for k, v in data.items() })


def parse_override(text):
    """
    Parses one --set key=value. The value is read as YAML, so numbers, booleans and lists work.
    """
    key, sep, raw = text.partition("=")
    if not sep or not key.strip():
        raise ConfigError("override %r is not of the form key=value" % text)
    try:
        return key.strip(), yaml.safe_load(raw)
    except yaml.YAMLError as e:
        raise ConfigError("override %r: %s" % (text, e)) from e


def load(schema, path=None, overrides=None):
    """
    Reads the YAML file at `path` (if any), applies the overrides on top and validates the result.

    :param dict overrides: key -> value, applied after the file
    """
    data = { }
    if path is not None:
        with open(path) as f:
            try:
                data = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigError("%s: %s" % (path, e)) from e
        if data is None:
            data = { }
        if not isinstance(data, dict):
            raise ConfigError("%s: top level must be a mapping" % path)
        l.debug("loaded %s: %r", path, data)
    data = dict(data)
    data.update(overrides or { })
    return build(schema, data)


from .errors import ConfigError
