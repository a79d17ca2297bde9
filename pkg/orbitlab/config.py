"""Configuration management for orbitlab."""
import copy
import hashlib
import json
import os
from typing import Any, Dict, List, Optional

import jsonschema
from dotenv import load_dotenv

from orbitlab.errors import ConfigError
from orbitlab.models import GridRegion
from orbitlab.potentials import ToricPotential, potential_from_dict

# Load environment variables from .env file
load_dotenv()

SCHEMA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "schemas")

# Every default used by any command; sections missing from a config file come from here
DEFAULTS: Dict[str, Any] = {
    "sampler": {
        "lines": 100,
        "m": 21,
        "seed": 0,
    },
    "thresholds": {
        "tau": None,
        "richardson": False,
    },
    "optimizer": {
        "tol": 1e-10,
        "max_iter": 100,
        "starts": 8,
        "start_half_width": 1.0,
        "divergence_radius": 50.0,
        "grid_refinements": 3,
    },
    "boundary": {
        "radii": [2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0],
        "samples_per_sphere": 64,
        "relative_floor": 1e-4,
    },
    "segment": None,
    "su2": {
        "lambda": 1.0,
        "t_range": [-1.5, 1.5],
        "points": 25,
        "resolution": [24, 24, 48],
        "direction": [0.0, 0.0, 1.0],
        "translate": None,
        "integrand": "first_row_log",
        "coverage": None,
    },
}

# Sections that do not change any computed number
RUNTIME_KEYS = ("output", "workers", "log_level")


def schema_path(name: str) -> str:
    """Path of a shipped JSON schema, e.g. schema_path("region")."""
    return os.path.join(SCHEMA_DIR, f"{name}.schema.json")


def load_schema(name: str) -> Dict[str, Any]:
    with open(schema_path(name), "r", encoding="utf-8") as f:
        return json.load(f)


def _merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively overlay overrides on a copy of base."""
    merged = copy.deepcopy(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _schema_errors(instance: Any, schema: Dict[str, Any], prefix: str = "") -> List[str]:
    validator = jsonschema.Draft7Validator(schema)
    errors = []
    for error in sorted(validator.iter_errors(instance), key=lambda e: list(e.absolute_path)):
        path = "/".join(str(p) for p in error.absolute_path)
        location = "/".join(p for p in (prefix, path) if p) or "<root>"
        errors.append(f"{location}: {error.message}")
    return errors


class Config:
    """Configuration class for orbitlab."""

    def __init__(self, config_path: Optional[str] = None):
        """Initialize the config from a file or environment variables."""
        self.log_level = os.getenv("ORBITLAB_LOG_LEVEL", "INFO")
        self.out_dir = os.getenv("ORBITLAB_OUT_DIR", "out")
        self.report_endpoint_url = os.getenv("ORBITLAB_REPORT_ENDPOINT_URL")
        self.workers = 1
        self._env_errors: List[str] = []

        workers = os.getenv("ORBITLAB_WORKERS", "1")
        try:
            self.workers = int(workers)
        except ValueError:
            self._env_errors.append(f"ORBITLAB_WORKERS: expected an integer, got {workers!r}")

        # The file exactly as loaded, and the file overlaid on DEFAULTS
        self.raw: Dict[str, Any] = {}
        self.data: Dict[str, Any] = copy.deepcopy(DEFAULTS)

        if config_path:
            self.load_config(config_path)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Config":
        """Create a config from an already parsed dictionary."""
        config = cls()
        config.apply(data)
        return config

    def load_config(self, config_path: str) -> None:
        """Load configuration from a JSON file."""
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                config_data = json.load(f)
        except FileNotFoundError:
            raise ConfigError(f"Config file not found: {config_path}", path=config_path)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config file is not valid JSON: {e}", path=config_path)
        if not isinstance(config_data, dict):
            raise ConfigError("Config file must contain a JSON object", path=config_path)
        self.apply(config_data)

    def apply(self, config_data: Dict[str, Any]) -> None:
        """Overlay a parsed config; file values override environment variables."""
        self.raw = copy.deepcopy(config_data)
        self.data = _merge(DEFAULTS, config_data)

        output = config_data.get("output") or {}
        if output.get("out_dir"):
            self.out_dir = output["out_dir"]
        if output.get("report_endpoint_url"):
            self.report_endpoint_url = output["report_endpoint_url"]
        if config_data.get("workers"):
            self.workers = config_data["workers"]
        if config_data.get("log_level"):
            self.log_level = config_data["log_level"]

    def validate(self) -> List[str]:
        """Return every problem with the configuration; empty when it is usable."""
        errors = list(self._env_errors)
        errors.extend(_schema_errors(self.raw, load_schema("analysis_config")))
        if "potential" in self.raw:
            errors.extend(_schema_errors(self.raw["potential"], load_schema("potential"), "potential"))
        if "region" in self.raw:
            errors.extend(_schema_errors(self.raw["region"], load_schema("region"), "region"))
        if errors:
            return errors

        try:
            potential = self.potential()
        except (ValueError, KeyError) as e:
            return [f"potential: {e}"]
        try:
            region = self.region()
        except ValueError as e:
            return [f"region: {e}"]

        if region.dimension != potential.n:
            errors.append(f"region: dimension {region.dimension} does not match potential dimension {potential.n}")

        segment = self.data.get("segment")
        if segment:
            for key in ("base", "direction"):
                if len(segment[key]) != potential.n:
                    errors.append(f"segment/{key}: expected {potential.n} entries, got {len(segment[key])}")
            if not any(segment["direction"]):
                errors.append("segment/direction: must be nonzero")
            if segment["t_range"][0] >= segment["t_range"][1]:
                errors.append("segment/t_range: needs t_min < t_max")

        su2 = self.data["su2"]
        if su2["t_range"][0] >= su2["t_range"][1]:
            errors.append("su2/t_range: needs t_min < t_max")
        if not any(su2["direction"]):
            errors.append("su2/direction: must be nonzero")
        if su2["translate"] is not None and not any(su2["translate"]):
            errors.append("su2/translate: must be a nonzero quaternion")

        radii = self.data["boundary"]["radii"]
        if any(b <= a for a, b in zip(radii, radii[1:])):
            errors.append("boundary/radii: must be increasing")
        if self.workers < 1:
            errors.append(f"workers: must be at least 1, got {self.workers}")
        return errors

    def ensure_valid(self) -> None:
        """Raise ConfigError listing every validation problem."""
        errors = self.validate()
        if errors:
            raise ConfigError(f"Invalid configuration ({len(errors)} problems)", errors=errors)

    def potential(self) -> ToricPotential:
        return potential_from_dict(self.data["potential"])

    def region(self) -> GridRegion:
        return GridRegion.from_dict(self.data["region"])

    def section(self, name: str) -> Any:
        return self.data.get(name)

    def set_seed(self, seed: int) -> None:
        """Override the sampler seed, which also seeds multistart and orbit sampling."""
        self.data["sampler"]["seed"] = int(seed)
        self.raw.setdefault("sampler", {})["seed"] = int(seed)

    @property
    def seed(self) -> int:
        return int(self.data["sampler"]["seed"])

    def effective(self) -> Dict[str, Any]:
        """The analysis settings actually used, without runtime-only keys."""
        return {k: v for k, v in self.data.items() if k not in RUNTIME_KEYS}

    def digest(self) -> str:
        """SHA-256 of the canonical JSON of the effective configuration."""
        canonical = json.dumps(self.effective(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
