"""JSON scenario files.

Schema (all blocks optional except ``geometry``; unknown keys are errors)::

    {
      "geometry": {"diameter_ft": 40, "alpha_deg": 90, "lanes_per_arm": 1,
                   "lane_width_ft": 12, "arm_length_ft": 2000},
      "traffic":  {"mode": "uniform" | "stochastic", "mean_spacing_ft": 50,
                   "min_gap_ft": 1.5, "seed": 0,
                   "vehicles_per_arm": {"N": 40, "S": 40, "E": 40, "W": 40}},
      "radio":    {"beta": 0.15, "gamma": 2, "power": 1, "noise": 0}
    }
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping, Optional

from .errors import ParameterError
from .geometry import ARMS, IntersectionGeometry
from .traffic import DEFAULT_MIN_GAP_FT, PlacementScenario, stochastic_scenario, uniform_scenario
from .transmission import RadioParams

_TOP = {"geometry", "traffic", "radio"}
_GEOMETRY = {"diameter_ft", "alpha_deg", "lanes_per_arm", "lane_width_ft", "arm_length_ft"}
_TRAFFIC = {"mode", "mean_spacing_ft", "min_gap_ft", "seed", "vehicles_per_arm"}
_RADIO = {"beta", "gamma", "power", "noise"}


def _check_keys(block: Mapping, allowed: set, where: str):
    if not isinstance(block, Mapping):
        raise ParameterError(f"{where} must be a JSON object")
    extra = set(block) - allowed
    if extra:
        raise ParameterError(f"unknown key(s) in {where}: {', '.join(sorted(extra))}")


def _number(block, key, default, where):
    v = block.get(key, default)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParameterError(f"{where}.{key} must be a number, got {v!r}")
    return v


def scenario_from_dict(doc: Mapping[str, Any], seed: Optional[int] = None) -> PlacementScenario:
    """Build a scenario; ``seed`` overrides ``traffic.seed`` when given."""
    _check_keys(doc, _TOP, "scenario")
    if "geometry" not in doc:
        raise ParameterError("scenario needs a geometry block")
    g = doc["geometry"]
    _check_keys(g, _GEOMETRY, "geometry")
    if "diameter_ft" not in g:
        raise ParameterError("geometry.diameter_ft is required")
    geom = IntersectionGeometry(
        diameter_ft=_number(g, "diameter_ft", None, "geometry"),
        alpha_deg=_number(g, "alpha_deg", 90.0, "geometry"),
        lanes_per_arm=_number(g, "lanes_per_arm", 1, "geometry"),
        lane_width_ft=_number(g, "lane_width_ft", 12.0, "geometry"),
        arm_length_ft=_number(g, "arm_length_ft", 2000.0, "geometry"),
    )
    r = doc.get("radio", {})
    _check_keys(r, _RADIO, "radio")
    radio = RadioParams(power=_number(r, "power", 1.0, "radio"),
                        pathloss_exp=_number(r, "gamma", 2.0, "radio"),
                        noise=_number(r, "noise", 0.0, "radio"),
                        beta=_number(r, "beta", 0.15, "radio"))
    t = doc.get("traffic", {})
    _check_keys(t, _TRAFFIC, "traffic")
    mode = t.get("mode", "uniform")
    if mode not in ("uniform", "stochastic"):
        raise ParameterError(f"traffic.mode must be 'uniform' or 'stochastic', got {mode!r}")
    h = _number(t, "mean_spacing_ft", 50.0, "traffic")
    counts_doc = t.get("vehicles_per_arm", {a.value: 40 for a in ARMS})
    _check_keys(counts_doc, {a.value for a in ARMS}, "traffic.vehicles_per_arm")
    counts = {}
    for a in ARMS:
        n = counts_doc.get(a.value, 0)
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise ParameterError(f"vehicles_per_arm.{a.value} must be a non-negative integer")
        counts[a] = n
    if mode == "uniform":
        return uniform_scenario(geom, h, counts, radio)
    s = seed if seed is not None else t.get("seed", 0)
    if isinstance(s, bool) or not isinstance(s, int):
        raise ParameterError("traffic.seed must be an integer")
    return stochastic_scenario(geom, h, counts, s, _number(t, "min_gap_ft", DEFAULT_MIN_GAP_FT, "traffic"),
                               radio)


def load_scenario(path, seed: Optional[int] = None) -> PlacementScenario:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParameterError(f"cannot read scenario {path}: {exc}") from exc
    return scenario_from_dict(doc, seed)
