"""
Figure Configuration Loader
Loads figure definitions from figure_config.json and scenario files (YAML or JSON)
"""
import json
import os
from typing import Dict, Optional, Set

import yaml

from . import console
from .classes import ScenarioConfig, validated
from .errors import ConfigurationError

# Cache for figure config
_figure_config_cache: Optional[Dict] = None

DEFAULT_FIGURE_CONFIG = {"version": "1.0.0", "figures": {}}


def get_figure_config_path() -> str:
    """Path to figure_config.json, or CQED_CONFIG when set"""
    override = os.getenv("CQED_CONFIG")
    if override:
        return override
    base_dir = os.path.dirname(os.path.abspath(__file__))
    return os.path.join(base_dir, "figure_config.json")


def load_figure_config() -> Dict:
    """
    Load figure definitions, cached after the first call.
    A missing file means no built-in figures; a broken file is a configuration error.
    """
    global _figure_config_cache

    if _figure_config_cache is not None:
        return _figure_config_cache

    config_path = get_figure_config_path()
    if not os.path.exists(config_path):
        console.warn(f"figure_config.json not found at {config_path}, no built-in figures available")
        _figure_config_cache = dict(DEFAULT_FIGURE_CONFIG)
        return _figure_config_cache

    try:
        with open(config_path, "r") as f:
            _figure_config_cache = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"line {e.lineno}: {e.msg}", field=os.path.basename(config_path)) from e
    return _figure_config_cache


def get_figure_definition(figure_id: str) -> Dict:
    figures = load_figure_config().get("figures", {})
    if figure_id not in figures:
        raise ConfigurationError(f"no definition for '{figure_id}' in figure config", field="id")
    return figures[figure_id]


def is_figure_enabled(figure_id: str) -> bool:
    """Figures missing from the config default to enabled"""
    figures = load_figure_config().get("figures", {})
    if figure_id not in figures:
        return True
    return figures[figure_id].get("enabled", True)


def get_enabled_figures() -> Set[str]:
    figures = load_figure_config().get("figures", {})
    return {name for name, data in figures.items() if data.get("enabled", True)}


def reload_figure_config() -> Dict:
    """Force reload of the figure config (tests and CQED_CONFIG changes)"""
    global _figure_config_cache
    _figure_config_cache = None
    return load_figure_config()


def _read_mapping(path: str) -> Dict:
    if not os.path.exists(path):
        raise ConfigurationError(f"file not found: {path}", field="config")
    with open(path, "r") as f:
        try:
            if path.endswith((".yaml", ".yml")):
                data = yaml.safe_load(f)
            else:
                data = json.load(f)
        except yaml.MarkedYAMLError as e:
            mark = e.problem_mark
            raise ConfigurationError(f"line {mark.line + 1}: {e.problem}", field=os.path.basename(path)) from e
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"line {e.lineno}: {e.msg}", field=os.path.basename(path)) from e
    if not isinstance(data, dict):
        raise ConfigurationError("top level must be a mapping", field=os.path.basename(path))
    return data


def scenario_from_dict(data: Dict) -> ScenarioConfig:
    return validated(ScenarioConfig, data)


def load_scenario(path: str) -> ScenarioConfig:
    """Parse a YAML (.yaml/.yml) or JSON scenario file"""
    return scenario_from_dict(_read_mapping(path))


def dump_scenario(config: ScenarioConfig, path: str) -> str:
    data = config.model_dump(mode="json", exclude_none=True)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as f:
        if path.endswith((".yaml", ".yml")):
            yaml.safe_dump(data, f, sort_keys=False)
        else:
            json.dump(data, f, indent=2)
    return path


def builtin_scenario_path(name: str) -> str:
    base_dir = os.path.dirname(os.path.abspath(__file__))
    return os.path.join(base_dir, "scenarios", f"{name}.yaml")
