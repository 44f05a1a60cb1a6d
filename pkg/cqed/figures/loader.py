# Figure plugin loader
import importlib
import json
import os
from types import ModuleType
from typing import Dict, List, Optional

from .. import console
from ..config_loader import is_figure_enabled
from ..errors import ConfigurationError


def get_figure_order(figures_dir: str) -> Optional[List[str]]:
    """
    Reads figure order from figure_order.json if it exists.
    Returns None if no order file exists.
    """
    order_file = os.path.join(figures_dir, "figure_order.json")
    if os.path.exists(order_file):
        try:
            with open(order_file, "r") as f:
                order = json.load(f).get("figure_order", [])
                if isinstance(order, list):
                    return order
        except json.JSONDecodeError as e:
            console.warn(f"Could not read figure_order.json: {e}")
    return None


def discover_figures() -> List[str]:
    """Figure modules in this package, ordered by figure_order.json then alphabetically."""
    figures_dir = os.path.dirname(os.path.abspath(__file__))
    available = {
        name[:-3] for name in os.listdir(figures_dir)
        if name.endswith(".py") and not name.startswith("_") and name not in ("loader.py", "utils.py")
    }

    order = get_figure_order(figures_dir)
    if not order:
        return sorted(available)

    ordered = []
    for name in order:
        if name in available:
            ordered.append(name)
            available.discard(name)
        else:
            console.warn(f"Figure '{name}' in figure_order.json not found, skipping")
    return ordered + sorted(available)


def load_figures() -> Dict[str, ModuleType]:
    """Import every enabled figure module exposing FIGURE_ID and run()."""
    loaded = {}
    for name in discover_figures():
        if not is_figure_enabled(name):
            console.info(f"Skipping disabled figure: {name}")
            continue
        module = importlib.import_module(f"{__package__}.{name}")
        if not hasattr(module, "run") or getattr(module, "FIGURE_ID", None) != name:
            console.warn(f"{name}: no run() or FIGURE_ID mismatch, skipping")
            continue
        loaded[name] = module
    return loaded


def get_figure(figure_id: str) -> ModuleType:
    figures = load_figures()
    if figure_id not in figures:
        if not is_figure_enabled(figure_id):
            raise ConfigurationError(f"figure '{figure_id}' is disabled in figure config", field="id")
        raise ConfigurationError(f"unknown figure '{figure_id}'", field="id")
    return figures[figure_id]
