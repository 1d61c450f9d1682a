"""
@ai-metadata {
    "domain": "configuration",
    "description": "JSON-schema registry for experiment configs and input documents (vectors, Dirichlet problems, chain complexes, reports)",
    "dependencies": ["errors.py"],
    "invariants": [
        "Unknown configuration keys are rejected",
        "Every registered schema is a valid Draft-7 schema"
    ]
}
"""

import os
import json
from copy import deepcopy
from dataclasses import dataclass, field
from typing import Any, Dict, List

import jsonschema
import yaml

from lplab_py.core.errors import ConfigError

# Registry for storing schemas by name
_schema_registry: Dict[str, "LabSchema"] = {}


@dataclass
class LabSchema:
    """A named JSON schema with a compiled validator."""
    name: str
    schema: Dict[str, Any]
    description: str = ""
    version: str = "1.0.0"
    validators: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        jsonschema.Draft7Validator.check_schema(self.schema)
        self.validators["jsonschema"] = jsonschema.Draft7Validator(self.schema)

    def get_validation_errors(self, document: Dict[str, Any]) -> List[str]:
        """Get detailed validation errors for a document."""
        errors = []
        for error in sorted(self.validators["jsonschema"].iter_errors(document), key=lambda e: list(e.path)):
            location = "/".join(str(p) for p in error.path) or "<root>"
            errors.append(f"{error.message} at {location}")
        return errors

    def require_valid(self, document: Dict[str, Any], source: str = "document") -> Dict[str, Any]:
        """Return the document or raise ConfigError listing every violation."""
        errors = self.get_validation_errors(document)
        if errors:
            raise ConfigError(f"invalid {self.name} {source}: " + "; ".join(errors))
        return document


def read_document(file_path: str) -> Dict[str, Any]:
    """Load a YAML or JSON mapping from disk."""
    if not os.path.exists(file_path):
        raise ConfigError(f"file not found: {file_path}")
    with open(file_path, "r", encoding="utf-8") as f:
        try:
            if file_path.endswith((".yaml", ".yml")):
                data = yaml.safe_load(f)
            else:
                data = json.load(f)
        except (yaml.YAMLError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot parse {file_path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{file_path} must contain a mapping at the top level")
    return data


_NUMBER_OR_TEXT = {"type": ["number", "string"]}
_INT_LIST = {"type": "array", "items": {"type": "integer"}, "minItems": 1}
_P = {"type": "number", "exclusiveMinimum": 1}

_COMMON_PROPERTIES: Dict[str, Any] = {
    "group": {"type": "string", "description": "Group spec such as Z, Z^2, F2, C6 or Z x C3"},
    "seed": {"type": "integer", "minimum": 0},
    "output": {"type": "string"},
    "format": {"type": "string", "enum": ["json", "csv"]},
    "verbose": {"type": "boolean"},
    "workers": {"type": "integer", "minimum": 1},
}

_EXPERIMENT_PROPERTIES: Dict[str, Dict[str, Any]] = {
    "ball": {
        "radius": {"type": "integer", "minimum": 0},
        "radii": _INT_LIST,
        "generators": {"type": "array", "items": {"type": "string"}},
    },
    "averaging": {
        "g": {"type": "string"},
        "omega": _NUMBER_OR_TEXT,
        "p": _P,
        "n": {"type": "integer", "minimum": 1},
        "ns": _INT_LIST,
    },
    "young": {
        "p": _P,
        "trials": {"type": "integer", "minimum": 1},
        "max_support": {"type": "integer", "minimum": 1},
        "max_length": {"type": "integer", "minimum": 0},
        "tuple_size": {"type": "integer", "minimum": 1},
        "mode": {"type": "string", "enum": ["exact", "float"]},
    },
    "witness": {
        "g": {"type": "string"},
        "omega": _NUMBER_OR_TEXT,
        "n": {"type": "integer", "minimum": 1},
        "ns": _INT_LIST,
    },
    "neumann": {
        "g": {"type": "string"},
        "omega": _NUMBER_OR_TEXT,
        "truncation": {"type": "integer", "minimum": 0},
        "truncations": _INT_LIST,
    },
    "density": {
        "g": {"type": "string"},
        "omega": _NUMBER_OR_TEXT,
        "omegas": {"type": "array", "items": _NUMBER_OR_TEXT, "minItems": 1},
        "p": {"type": "number", "exclusiveMinimum": 1},
        "epsilon": {"type": "number", "exclusiveMinimum": 0},
        "n": {"type": "integer", "minimum": 1},
        "target": {"type": "string"},
    },
    "dirichlet": {
        "radius": {"type": "integer", "minimum": 1},
        "p": {"type": "number", "exclusiveMinimum": 1},
        "boundary": {"type": ["array", "object"]},
        "problem": {"type": "string"},
        "residual_tol": {"type": "number", "exclusiveMinimum": 0},
        "max_iters": {"type": "integer", "minimum": 1},
        "method": {"type": "string", "enum": ["newton", "gradient"]},
        "solution": {"type": "string"},
        "residuals": {"type": "string"},
        "generators": {"type": "array", "items": {"type": "string"}},
    },
    "cohomology": {
        "complex": {"type": "string"},
        "check": {"type": "string", "enum": ["compose", "sigma", "distance", "invariant", "homology"]},
        "experiment": {"type": "string",
                       "enum": ["compose", "sigma", "distance", "invariant", "homology"]},
        "window": {"type": "integer", "minimum": 0},
        "windows": _INT_LIST,
        "degree": {"type": "integer", "minimum": 0},
        "policy": {"type": "string", "enum": ["clip", "extend"]},
        "p": _P,
        "target": {"type": "string"},
        "max_iters": {"type": "integer", "minimum": 1},
    },
    "amenability": {
        "p": {"type": "number", "exclusiveMinimum": 1},
        "radii": _INT_LIST,
        "starts": {"type": "integer", "minimum": 1},
        "max_iters": {"type": "integer", "minimum": 1},
        "achievers": {"type": "string"},
        "generators": {"type": "array", "items": {"type": "string"}},
    },
    "tilf-diff": {
        "g": {"type": "string"},
        "target": {"type": "string"},
        "epsilon": {"type": "number", "exclusiveMinimum": 0},
        "p": {"type": "number", "exclusiveMinimum": 1},
    },
    "tent": {
        "p": {"type": "number", "exclusiveMinimum": 1},
        "n": {"type": "integer", "minimum": 1},
        "ns": _INT_LIST,
    },
}


def _experiment_schema(name: str) -> Dict[str, Any]:
    properties = deepcopy(_COMMON_PROPERTIES)
    properties.update(deepcopy(_EXPERIMENT_PROPERTIES[name]))
    return {"type": "object", "properties": properties, "additionalProperties": False}


_VECTOR_SCHEMA = {
    "type": "object",
    "properties": {
        "group": {"type": "string"},
        "mode": {"type": "string", "enum": ["exact", "float"]},
        "vector": {"type": "string"},
        "terms": {"type": "object", "additionalProperties": _NUMBER_OR_TEXT},
        "components": {"type": "array", "items": {"type": "string"}, "minItems": 1},
    },
    "oneOf": [{"required": ["vector"]}, {"required": ["terms"]}, {"required": ["components"]}],
    "additionalProperties": False,
}

_PROBLEM_SCHEMA = {
    "type": "object",
    "properties": {
        "group": {"type": "string"},
        "radius": {"type": "integer", "minimum": 1},
        "p": {"type": "number", "exclusiveMinimum": 1},
        "generators": {"type": "array", "items": {"type": "string"}},
        "boundary": {
            "oneOf": [
                {"type": "object", "additionalProperties": {"type": "number"}},
                {"type": "array", "items": {"type": "number"}},
            ]
        },
        "residual_tol": {"type": "number", "exclusiveMinimum": 0},
        "max_iters": {"type": "integer", "minimum": 1},
        "method": {"type": "string", "enum": ["newton", "gradient"]},
    },
    "required": ["group", "radius", "p", "boundary"],
    "additionalProperties": False,
}

_COMPLEX_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "group": {"type": "string"},
        "ranks": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2},
        "differentials": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
            "minItems": 1,
        },
    },
    "required": ["group", "ranks", "differentials"],
    "additionalProperties": False,
}

_REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "experiment": {"type": "string"},
        "params": {"type": "object"},
        "rows": {"type": "array", "items": {"type": "object"}},
        "wall_time": {"type": "number", "minimum": 0},
        "version": {"type": "string"},
    },
    "required": ["experiment", "params", "rows", "wall_time", "version"],
    "additionalProperties": False,
}

for _name in _EXPERIMENT_PROPERTIES:
    _schema_registry[f"config:{_name}"] = LabSchema(
        name=f"config:{_name}",
        schema=_experiment_schema(_name),
        description=f"Configuration of the {_name} experiment",
    )
for _name, _schema, _description in (
    ("vector", _VECTOR_SCHEMA, "Group-ring vector or tuple document"),
    ("problem", _PROBLEM_SCHEMA, "Dirichlet problem document"),
    ("complex", _COMPLEX_SCHEMA, "Free chain complex over a group ring"),
    ("report", _REPORT_SCHEMA, "Experiment report"),
):
    _schema_registry[_name] = LabSchema(name=_name, schema=_schema, description=_description)


def experiment_names() -> List[str]:
    return sorted(_EXPERIMENT_PROPERTIES)


def get_schema(name: str) -> LabSchema:
    """
    Get a schema from the registry.

    Args:
        name: Registry name, e.g. "problem" or "config:dirichlet".

    Returns:
        The requested schema.
    """
    if name not in _schema_registry:
        raise ConfigError(f"Schema '{name}' not found in registry")
    return _schema_registry[name]


def load_document(file_path: str, schema_name: str) -> Dict[str, Any]:
    """Read a YAML/JSON file and validate it against a registered schema."""
    return get_schema(schema_name).require_valid(read_document(file_path), source=file_path)


def validate_config(experiment: str, values: Dict[str, Any], source: str = "config") -> Dict[str, Any]:
    return get_schema(f"config:{experiment}").require_valid(values, source=source)

