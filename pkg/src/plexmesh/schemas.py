"""JSON Schemas for every CLI output (the documented machine interface).

Keyed by subcommand; "star_forest" and "migration_report" cover the sidecar
files the distribute subcommand writes.  The spy subcommand emits CSV with
header "row,col" and has no JSON output.
"""

_NONNEG = {"type": "integer", "minimum": 0}
_INT_ARRAY = {"type": "array", "items": {"type": "integer"}}
_TIMING = {
    "type": "object",
    "properties": {
        "read_s": {"type": "number", "minimum": 0},
        "partition_s": {"type": "number", "minimum": 0},
        "migrate_s": {"type": "number", "minimum": 0},
        "reorder_s": {"type": "number", "minimum": 0},
    },
    "required": ["read_s", "partition_s", "migrate_s", "reorder_s"],
    "additionalProperties": False,
}
_MIGRATION = {
    "type": "object",
    "properties": {
        "bytes_topology": _NONNEG,
        "bytes_coordinates": _NONNEG,
        "bytes_fields": _NONNEG,
        "bytes_total": _NONNEG,
        "points_per_rank": _INT_ARRAY,
    },
    "required": ["bytes_topology", "bytes_coordinates", "bytes_fields",
                 "bytes_total", "points_per_rank"],
    "additionalProperties": False,
}

SCHEMAS = {
    "info": {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "properties": {
            "dim": {"type": "integer", "minimum": 1, "maximum": 3},
            "chart_size": _NONNEG,
            "cells": _NONNEG,
            "vertices": _NONNEG,
            "points_per_depth": _INT_ARRAY,
            "points_per_height": _INT_ARRAY,
        },
        "required": ["dim", "chart_size", "cells", "vertices",
                     "points_per_depth", "points_per_height"],
        "additionalProperties": False,
    },
    "partition": {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "properties": {
            "method": {"enum": ["greedy-bfs", "coordinate-bisection"]},
            "nparts": {"type": "integer", "minimum": 1},
            "ncells": _NONNEG,
            "edge_cut": _NONNEG,
            "imbalance": {"type": "number", "minimum": 1.0},
        },
        "required": ["method", "nparts", "ncells", "edge_cut", "imbalance"],
        "additionalProperties": False,
    },
    "distribute": {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "properties": {
            "nranks": {"type": "integer", "minimum": 1},
            "migration": _MIGRATION,
        },
        "required": ["nranks", "migration"],
        "additionalProperties": False,
    },
    "reorder": {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "properties": {
            "bandwidth_before": _NONNEG,
            "bandwidth_after": _NONNEG,
        },
        "required": ["bandwidth_before", "bandwidth_after"],
        "additionalProperties": False,
    },
    "bench": {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "properties": {
            "workflows": {
                "type": "array",
                "minItems": 2,
                "maxItems": 2,
                "items": {
                    "type": "object",
                    "properties": {
                        "workflow": {"enum": ["preprocessor", "runtime-distribute"]},
                        "nranks": {"type": "integer", "minimum": 1},
                        "fields": _NONNEG,
                        "timing": _TIMING,
                        "data": _MIGRATION,
                    },
                    "required": ["workflow", "nranks", "fields", "timing", "data"],
                    "additionalProperties": False,
                },
            },
        },
        "required": ["workflows"],
        "additionalProperties": False,
    },
    "star_forest": {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "properties": {
            "nranks": {"type": "integer", "minimum": 1},
            "ranks": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "rank": _NONNEG,
                        "leaves": {
                            "type": "array",
                            "items": {
                                "type": "array",
                                "items": {"type": "integer"},
                                "minItems": 3,
                                "maxItems": 3,
                            },
                        },
                    },
                    "required": ["rank", "leaves"],
                    "additionalProperties": False,
                },
            },
        },
        "required": ["nranks", "ranks"],
        "additionalProperties": False,
    },
    "migration_report": _MIGRATION | {
        "$schema": "https://json-schema.org/draft/2020-12/schema"},
}
