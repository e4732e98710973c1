"""
sinrgraph/schemas.py
====================
marshmallow schemas for every JSON document the library reads.

Documents:
  • instance      {"alpha", "m", "links": [{"id", "sx", "sy", "rx", "ry", "beta", "weight"}]}
  • power         {"kind": "uniform" | "tau", "tau"}
  • utilities     {"<link id>" | "*": {"levels": [{"beta", "u"}]} | {"monotone": {...}}}
  • caps          {"<x>,<y>": {"antennas", "channels"}}
  • experiment    mirror of ExperimentConfig
  • graph request {"instance", "gamma", "delta", "c", "tau", "ids", "power", "caps"}

Loading failures surface as SchemaError carrying marshmallow's message dict.
"""

from __future__ import annotations

import json
import logging
from typing import Any

from marshmallow import (
    EXCLUDE, Schema, ValidationError, fields, post_load, validate, validates_schema,
)

from sinrgraph.bench import ALGORITHM_LABELS, ExperimentConfig
from sinrgraph.config import Config
from sinrgraph.errors import SchemaError
from sinrgraph.mcma import NodeCaps
from sinrgraph.models.links import Instance, Link, Point, PowerAssignment, PowerKind
from sinrgraph.rate_control import MonotoneUtility, UtilityKind, UtilityLevel, UtilitySpec

logger = logging.getLogger(__name__)

_POSITIVE = validate.Range(min=0.0, min_inclusive=False)


# ─────────────────────────────────────────────────────────────────────────────
# INSTANCE
# ─────────────────────────────────────────────────────────────────────────────
class LinkSchema(Schema):
    id        = fields.Int(required=True)
    sx        = fields.Float(required=True)
    sy        = fields.Float(required=True)
    rx        = fields.Float(required=True)
    ry        = fields.Float(required=True)
    beta      = fields.Float(load_default=1.0, validate=validate.Range(min=1.0))
    weight    = fields.Float(load_default=1.0, validate=validate.Range(min=0.0))
    origin_id = fields.Int(load_default=None, allow_none=True)

    @post_load
    def make_link(self, data: dict, **kwargs) -> Link:
        return Link(data["id"], Point(data["sx"], data["sy"]), Point(data["rx"], data["ry"]),
                    beta=data["beta"], weight=data["weight"], origin_id=data["origin_id"])


class InstanceSchema(Schema):
    alpha = fields.Float(load_default=Config.DEFAULT_ALPHA)
    m     = fields.Int(load_default=Config.DEFAULT_M)
    links = fields.List(fields.Nested(LinkSchema), required=True)

    @post_load
    def make_instance(self, data: dict, **kwargs) -> Instance:
        return Instance(data["alpha"], tuple(data["links"]), data["m"])


class PowerSchema(Schema):
    kind = fields.Str(load_default=PowerKind.UNIFORM.value,
                      validate=validate.OneOf([k.value for k in PowerKind]))
    tau  = fields.Float(load_default=None, allow_none=True)

    @post_load
    def make_power(self, data: dict, **kwargs) -> PowerAssignment:
        return PowerAssignment(PowerKind(data["kind"]), data["tau"])


# ─────────────────────────────────────────────────────────────────────────────
# UTILITIES
# ─────────────────────────────────────────────────────────────────────────────
class UtilityLevelSchema(Schema):
    beta = fields.Float(required=True, validate=_POSITIVE)
    u    = fields.Float(required=True, validate=_POSITIVE)

    @post_load
    def make_level(self, data: dict, **kwargs) -> UtilityLevel:
        return UtilityLevel(data["beta"], data["u"])


class MonotoneUtilitySchema(Schema):
    kind  = fields.Str(required=True, validate=validate.OneOf([k.value for k in UtilityKind]))
    u_min = fields.Float(required=True, validate=_POSITIVE)
    u_max = fields.Float(required=True, validate=_POSITIVE)
    scale = fields.Float(load_default=1.0, validate=_POSITIVE)
    table = fields.List(fields.List(fields.Float(), validate=validate.Length(equal=2)), load_default=list)

    @validates_schema
    def check_range(self, data: dict, **kwargs):
        if data["u_min"] > data["u_max"]:
            raise ValidationError("u_min must not exceed u_max.", "u_min")

    @post_load
    def make_utility(self, data: dict, **kwargs) -> MonotoneUtility:
        return MonotoneUtility(UtilityKind(data["kind"]), data["u_min"], data["u_max"],
                               scale=data["scale"], table=tuple(tuple(p) for p in data["table"]))


class UtilityEntrySchema(Schema):
    levels   = fields.List(fields.Nested(UtilityLevelSchema), load_default=None,
                           validate=validate.Length(min=1))
    monotone = fields.Nested(MonotoneUtilitySchema, load_default=None)

    @validates_schema
    def one_form(self, data: dict, **kwargs):
        if (data.get("levels") is None) == (data.get("monotone") is None):
            raise ValidationError("Give exactly one of 'levels' or 'monotone'.")


# ─────────────────────────────────────────────────────────────────────────────
# NODE CAPABILITIES
# ─────────────────────────────────────────────────────────────────────────────
class NodeCapsSchema(Schema):
    antennas = fields.Int(load_default=1, validate=validate.Range(min=1))
    channels = fields.List(fields.Int(), required=True, validate=validate.Length(min=1))

    @post_load
    def make_caps(self, data: dict, **kwargs) -> NodeCaps:
        return NodeCaps(data["antennas"], frozenset(data["channels"]))


# ─────────────────────────────────────────────────────────────────────────────
# EXPERIMENT CONFIG
# ─────────────────────────────────────────────────────────────────────────────
class ExperimentConfigSchema(Schema):
    class Meta:
        unknown = EXCLUDE

    n          = fields.Int(load_default=Config.DEFAULT_N, validate=validate.Range(min=1))
    l_max      = fields.List(fields.Float(validate=validate.Range(min=1.0, min_inclusive=False)),
                             load_default=lambda: list(Config.DEFAULT_LMAX_GRID))
    side       = fields.Float(load_default=Config.SQUARE_SIDE, validate=_POSITIVE)
    alpha      = fields.Float(load_default=Config.DEFAULT_ALPHA)
    beta       = fields.Float(load_default=Config.DEFAULT_BETA, validate=validate.Range(min=1.0))
    beta_max   = fields.Float(load_default=None, allow_none=True)
    trials     = fields.Int(load_default=Config.DEFAULT_TRIALS, validate=validate.Range(min=1))
    seed       = fields.Int(load_default=Config.DEFAULT_SEED)
    algorithms = fields.List(fields.Str(validate=validate.OneOf(ALGORITHM_LABELS)),
                             load_default=lambda: list(ALGORITHM_LABELS))
    epsilons   = fields.List(fields.Float(validate=validate.Range(min=0.0, max=1.0,
                                                                  min_inclusive=False, max_inclusive=False)),
                             load_default=lambda: list(Config.DEFAULT_EPSILONS))
    workers    = fields.Int(load_default=Config.BENCH_WORKERS, validate=validate.Range(min=1))

    @post_load
    def make_config(self, data: dict, **kwargs) -> ExperimentConfig:
        return ExperimentConfig(**data)


# ─────────────────────────────────────────────────────────────────────────────
# WEB REQUESTS
# ─────────────────────────────────────────────────────────────────────────────
class GraphRequestSchema(Schema):
    class Meta:
        unknown = EXCLUDE

    instance = fields.Nested(InstanceSchema, required=True)
    gamma    = fields.Float(load_default=1.0, validate=validate.Range(min=1.0))
    delta    = fields.Float(load_default=0.0, validate=validate.Range(min=0.0, max=1.0, max_inclusive=False))
    c        = fields.Int(load_default=1, validate=validate.Range(min=1))
    tau      = fields.Float(load_default=None, allow_none=True)
    diag     = fields.Bool(load_default=False)
    ids      = fields.List(fields.Int(), load_default=None, allow_none=True)
    power    = fields.Nested(PowerSchema, load_default=None, allow_none=True)
    caps     = fields.Dict(keys=fields.Str(), values=fields.Nested(NodeCapsSchema),
                           load_default=None, allow_none=True)


class ParamsRequestSchema(Schema):
    alpha   = fields.Float(load_default=Config.DEFAULT_ALPHA)
    m       = fields.Int(load_default=Config.DEFAULT_M)
    delta   = fields.Float(load_default=None, allow_none=True)
    epsilon = fields.Float(load_default=None, allow_none=True)


# ─────────────────────────────────────────────────────────────────────────────
# LOADERS
# ─────────────────────────────────────────────────────────────────────────────
def _load(schema: Schema, data: Any, what: str):
    try:
        return schema.load(data)
    except ValidationError as e:
        raise SchemaError(f"Invalid {what}: {e.messages}", e.messages) from e


def load_instance(data: dict) -> Instance:
    return _load(InstanceSchema(), data, "instance")


def load_power(data: dict | None) -> PowerAssignment:
    return PowerAssignment.uniform() if data is None else _load(PowerSchema(), data, "power assignment")


def load_experiment_config(data: dict) -> ExperimentConfig:
    return _load(ExperimentConfigSchema(), data, "experiment config")


def load_graph_request(data: dict) -> dict:
    return _load(GraphRequestSchema(), data, "request")


def load_params_request(data: dict) -> dict:
    return _load(ParamsRequestSchema(), data, "request")


def load_caps(data: dict) -> dict[Point, NodeCaps]:
    """Caps document keyed by "x,y" node keys."""
    raw = _load(NodeCapsSchema(many=True), list(data.values()), "caps")
    return {Point.from_key(key): caps for key, caps in zip(data.keys(), raw)}


def caps_from_request(loaded: dict[str, NodeCaps]) -> dict[Point, NodeCaps]:
    return {Point.from_key(key): caps for key, caps in loaded.items()}


def load_utility_specs(data: dict, inst: Instance) -> list[UtilitySpec]:
    """
    Utility document keyed by link id. A "*" entry applies to every link
    without its own entry.
    """
    if not isinstance(data, dict):
        raise SchemaError("Utility document must be a JSON object keyed by link id.")
    entries = {key: _load(UtilityEntrySchema(), value, f"utility for link {key}")
               for key, value in data.items()}
    default = entries.pop("*", None)
    try:
        by_id = {int(key): entry for key, entry in entries.items()}
    except ValueError as e:
        raise SchemaError(f"Utility keys must be link ids or '*': {e}") from e

    specs: list[UtilitySpec] = []
    for link_id in inst.ids:
        entry = by_id.pop(link_id, default)
        if entry is None:
            continue
        specs.append(UtilitySpec(link_id, levels=None if entry["levels"] is None else tuple(entry["levels"]),
                                 monotone=entry["monotone"]))
    if by_id:
        raise SchemaError(f"Utilities given for unknown links {sorted(by_id)}.")
    return specs


def read_json(path: str) -> Any:
    """Read a JSON file, turning decode errors into SchemaError."""
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: not valid JSON ({e.msg} at line {e.lineno}).") from e
