"""Physical scenario description for a breached ship tank.

A Scenario bundles everything the leak models need: the oil, the tank,
the breach, and the sea/atmosphere around the hull.  Values are SI
throughout except wind speed, which is in knots (the wave lookup is
anchored on knot values).

Geometry convention: all heights are measured from the keel (tank
bottom).  ``draft`` is the waterline height above the keel, so
``draft - height_above_keel`` is the external water head on a submerged
breach.  ``height_above_keel`` locates the breach centerline.

Scenario files are YAML with lower_snake_case keys matching the field
names below (see README for the full grammar).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO, Any, Mapping

import yaml

DEFAULT_GRAVITY = 9.81              # m/s^2
DEFAULT_ATMOSPHERIC_PRESSURE = 101325.0  # Pa
DEFAULT_WATER_DENSITY = 1025.0      # kg/m^3
DEFAULT_OIL_VISCOSITY = 0.05        # N s/m^2, only the CFD model uses it

VENTED = "vented"
SEALED = "sealed"
ABOVE_WATERLINE = "above_waterline"
BELOW_WATERLINE = "below_waterline"


class ScenarioError(Exception):
    """Base class for scenario ingestion failures."""


class ScenarioParseError(ScenarioError):
    """Malformed document: bad syntax, missing or unknown fields."""


class ScenarioValidationError(ScenarioError):
    """Well-formed document whose values violate invariants.

    ``violations`` lists every broken rule, not just the first.
    """

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("invalid scenario:\n  " + "\n  ".join(violations))


@dataclass(frozen=True)
class OilProperties:
    density_oil: float              # kg/m^3
    dynamic_viscosity: float = DEFAULT_OIL_VISCOSITY  # N s/m^2
    vapor_pressure: float = 0.0     # Pa, only regime classification uses it


@dataclass(frozen=True)
class TankGeometry:
    free_surface_area: float        # m^2, tank cross-section at the liquid surface
    tank_height: float              # m
    initial_liquid_level: float     # m above tank bottom
    ullage: str = VENTED            # "vented" | "sealed"
    initial_gas_pressure: float | None = None  # Pa, sealed only
    initial_gas_volume: float | None = None    # m^3, sealed only
    initial_ullage_pressure: float = DEFAULT_ATMOSPHERIC_PRESSURE  # Pa

    @property
    def sealed(self) -> bool:
        return self.ullage == SEALED


@dataclass(frozen=True)
class Breach:
    area: float                     # m^2
    height_above_keel: float = 0.0  # m, breach centerline
    position: str = ABOVE_WATERLINE  # "above_waterline" | "below_waterline"
    discharge_coefficient: float | None = None  # absent: derive via regime


@dataclass(frozen=True)
class WaveOverride:
    amplitude: float                # m
    period: float                   # s


@dataclass(frozen=True)
class Environment:
    density_water: float = DEFAULT_WATER_DENSITY  # kg/m^3
    draft: float = 0.0              # m, waterline height above keel
    atmospheric_pressure: float = DEFAULT_ATMOSPHERIC_PRESSURE  # Pa
    gravity: float = DEFAULT_GRAVITY  # m/s^2
    wind_speed: float = 0.0         # knots
    wave_override: WaveOverride | None = None
    nearshore: bool = False


@dataclass(frozen=True)
class Scenario:
    oil: OilProperties
    tank: TankGeometry
    breach: Breach
    environment: Environment
    label: str = ""

    @property
    def oil_volume(self) -> float:
        """Initial oil volume in the tank, m^3."""
        return self.tank.free_surface_area * self.tank.initial_liquid_level


def validate(s: Scenario) -> list[str]:
    """Return every violated invariant, one description per rule.

    An empty list means the scenario is fully consistent.  Violations
    are data, not failures; callers decide whether to raise.
    """
    v: list[str] = []
    oil, tank, breach, env = s.oil, s.tank, s.breach, s.environment

    if not oil.density_oil > 0:
        v.append("oil.density_oil > 0")
    if not oil.dynamic_viscosity >= 0:
        v.append("oil.dynamic_viscosity >= 0")
    if not oil.vapor_pressure >= 0:
        v.append("oil.vapor_pressure >= 0")
    if not env.density_water > 0:
        v.append("environment.density_water > 0")
    if oil.density_oil > 0 and env.density_water > 0 \
            and not oil.density_oil < env.density_water:
        v.append("density_oil < density_water (floating oil)")

    if not tank.free_surface_area > 0:
        v.append("tank.free_surface_area > 0")
    if not tank.tank_height > 0:
        v.append("tank.tank_height > 0")
    if not 0 <= tank.initial_liquid_level <= tank.tank_height:
        v.append("tank.initial_liquid_level in [0, tank_height]")
    if tank.ullage not in (VENTED, SEALED):
        v.append("tank.ullage is 'vented' or 'sealed'")
    if tank.ullage == SEALED:
        if tank.initial_gas_volume is None or not tank.initial_gas_volume > 0:
            v.append("sealed requires initial_gas_volume > 0")
        if tank.initial_gas_pressure is None or not tank.initial_gas_pressure > 0:
            v.append("sealed requires initial_gas_pressure > 0")

    if not breach.area > 0:
        v.append("breach.area > 0")
    if not breach.height_above_keel >= 0:
        v.append("breach.height_above_keel >= 0")
    if breach.discharge_coefficient is not None \
            and not 0 < breach.discharge_coefficient <= 1:
        v.append("breach.discharge_coefficient ∈ (0,1]")
    if breach.position not in (ABOVE_WATERLINE, BELOW_WATERLINE):
        v.append("breach.position is 'above_waterline' or 'below_waterline'")
    elif breach.position == ABOVE_WATERLINE \
            and not breach.height_above_keel >= env.draft:
        v.append("above_waterline breach requires height_above_keel >= draft")
    elif breach.position == BELOW_WATERLINE \
            and not breach.height_above_keel < env.draft:
        v.append("below_waterline breach requires height_above_keel < draft")

    if not env.draft >= 0:
        v.append("environment.draft >= 0")
    if not env.gravity > 0:
        v.append("environment.gravity > 0")
    if not env.atmospheric_pressure > 0:
        v.append("environment.atmospheric_pressure > 0")
    if not env.wind_speed >= 0:
        v.append("environment.wind_speed >= 0")
    if env.wave_override is not None:
        if not env.wave_override.amplitude > 0:
            v.append("wave_override.amplitude > 0")
        if not env.wave_override.period > 0:
            v.append("wave_override.period > 0")

    return v


# ---------------------------------------------------------------------------
# Document ingestion

_OIL_KEYS = {"density_oil", "dynamic_viscosity", "vapor_pressure"}
_TANK_KEYS = {"free_surface_area", "tank_height", "initial_liquid_level",
              "ullage", "initial_gas_pressure", "initial_gas_volume",
              "initial_ullage_pressure"}
_BREACH_KEYS = {"area", "height_above_keel", "position",
                "discharge_coefficient"}
_ENV_KEYS = {"density_water", "draft", "atmospheric_pressure", "gravity",
             "wind_speed", "wave_override", "nearshore"}
_TOP_KEYS = {"label", "oil", "tank", "breach", "environment"}


def _section(doc: Mapping[str, Any], name: str, allowed: set[str],
             required: set[str], errors: list[str]) -> dict[str, Any]:
    raw = doc.get(name)
    if raw is None:
        if required:
            errors.append(f"{name}: required section missing")
        return {}
    if not isinstance(raw, Mapping):
        errors.append(f"{name}: expected a mapping of fields")
        return {}
    out = {}
    for key, value in raw.items():
        if key not in allowed:
            errors.append(f"{name}.{key}: unknown field")
        else:
            out[key] = value
    for key in required:
        if key not in out:
            errors.append(f"{name}.{key}: required field missing")
    return out


def _number(sec: dict[str, Any], section: str, key: str,
            errors: list[str]) -> None:
    if key not in sec:
        return
    value = sec[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        errors.append(f"{section}.{key}: expected a number")
        del sec[key]


def scenario_from_mapping(doc: Mapping[str, Any]) -> Scenario:
    """Build and validate a Scenario from a parsed document mapping."""
    if not isinstance(doc, Mapping):
        raise ScenarioParseError("scenario document must be a mapping")

    errors: list[str] = []
    for key in doc:
        if key not in _TOP_KEYS:
            errors.append(f"{key}: unknown top-level field")

    oil_sec = _section(doc, "oil", _OIL_KEYS, {"density_oil"}, errors)
    tank_sec = _section(doc, "tank", _TANK_KEYS,
                        {"free_surface_area", "tank_height",
                         "initial_liquid_level"}, errors)
    breach_sec = _section(doc, "breach", _BREACH_KEYS, {"area"}, errors)
    env_sec = _section(doc, "environment", _ENV_KEYS, set(), errors)

    for sec, name, keys in ((oil_sec, "oil", _OIL_KEYS),
                            (tank_sec, "tank", _TANK_KEYS - {"ullage"}),
                            (breach_sec, "breach", _BREACH_KEYS - {"position"}),
                            (env_sec, "environment",
                             _ENV_KEYS - {"wave_override", "nearshore"})):
        for key in keys:
            _number(sec, name, key, errors)

    wave = env_sec.pop("wave_override", None)
    if wave is not None:
        if not isinstance(wave, Mapping) \
                or set(wave) - {"amplitude", "period"} \
                or not all(k in wave for k in ("amplitude", "period")):
            errors.append("environment.wave_override: expected "
                          "{amplitude, period}")
            wave = None
        else:
            wave = WaveOverride(float(wave["amplitude"]),
                                float(wave["period"]))

    if errors:
        raise ScenarioParseError("bad scenario document:\n  "
                                 + "\n  ".join(errors))

    env = Environment(
        density_water=float(env_sec.get("density_water",
                                        DEFAULT_WATER_DENSITY)),
        draft=float(env_sec.get("draft", 0.0)),
        atmospheric_pressure=float(env_sec.get("atmospheric_pressure",
                                               DEFAULT_ATMOSPHERIC_PRESSURE)),
        gravity=float(env_sec.get("gravity", DEFAULT_GRAVITY)),
        wind_speed=float(env_sec.get("wind_speed", 0.0)),
        wave_override=wave,
        nearshore=bool(env_sec.get("nearshore", False)),
    )

    height = float(breach_sec.get("height_above_keel", 0.0))
    position = breach_sec.get("position")
    if position is None:
        # Derive from geometry when the document leaves it out.
        position = ABOVE_WATERLINE if height >= env.draft else BELOW_WATERLINE
    cd = breach_sec.get("discharge_coefficient")

    scenario = Scenario(
        oil=OilProperties(
            density_oil=float(oil_sec["density_oil"]),
            dynamic_viscosity=float(oil_sec.get("dynamic_viscosity",
                                                DEFAULT_OIL_VISCOSITY)),
            vapor_pressure=float(oil_sec.get("vapor_pressure", 0.0)),
        ),
        tank=TankGeometry(
            free_surface_area=float(tank_sec["free_surface_area"]),
            tank_height=float(tank_sec["tank_height"]),
            initial_liquid_level=float(tank_sec["initial_liquid_level"]),
            ullage=str(tank_sec.get("ullage", VENTED)),
            initial_gas_pressure=(None if "initial_gas_pressure" not in tank_sec
                                  else float(tank_sec["initial_gas_pressure"])),
            initial_gas_volume=(None if "initial_gas_volume" not in tank_sec
                                else float(tank_sec["initial_gas_volume"])),
            initial_ullage_pressure=float(
                tank_sec.get("initial_ullage_pressure",
                             env.atmospheric_pressure)),
        ),
        breach=Breach(
            area=float(breach_sec["area"]),
            height_above_keel=height,
            position=str(position),
            discharge_coefficient=None if cd is None else float(cd),
        ),
        environment=env,
        label=str(doc.get("label", "")),
    )

    violations = validate(scenario)
    if violations:
        raise ScenarioValidationError(violations)
    return scenario


def load_scenario(source: str | Path | IO[str]) -> Scenario:
    """Load a Scenario from a YAML file path or an open text stream."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_scenario(fh)
    try:
        doc = yaml.safe_load(source)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" \
            if mark is not None else ""
        raise ScenarioParseError(f"YAML syntax error{where}: {exc}") from exc
    return scenario_from_mapping(doc)


def to_mapping(s: Scenario) -> dict[str, Any]:
    """Plain mapping mirror of a Scenario, suitable for YAML dumping."""
    tank: dict[str, Any] = {
        "free_surface_area": s.tank.free_surface_area,
        "tank_height": s.tank.tank_height,
        "initial_liquid_level": s.tank.initial_liquid_level,
        "ullage": s.tank.ullage,
        "initial_ullage_pressure": s.tank.initial_ullage_pressure,
    }
    if s.tank.initial_gas_pressure is not None:
        tank["initial_gas_pressure"] = s.tank.initial_gas_pressure
    if s.tank.initial_gas_volume is not None:
        tank["initial_gas_volume"] = s.tank.initial_gas_volume

    breach: dict[str, Any] = {
        "area": s.breach.area,
        "height_above_keel": s.breach.height_above_keel,
        "position": s.breach.position,
    }
    if s.breach.discharge_coefficient is not None:
        breach["discharge_coefficient"] = s.breach.discharge_coefficient

    env: dict[str, Any] = {
        "density_water": s.environment.density_water,
        "draft": s.environment.draft,
        "atmospheric_pressure": s.environment.atmospheric_pressure,
        "gravity": s.environment.gravity,
        "wind_speed": s.environment.wind_speed,
        "nearshore": s.environment.nearshore,
    }
    if s.environment.wave_override is not None:
        env["wave_override"] = {
            "amplitude": s.environment.wave_override.amplitude,
            "period": s.environment.wave_override.period,
        }

    return {
        "label": s.label,
        "oil": {
            "density_oil": s.oil.density_oil,
            "dynamic_viscosity": s.oil.dynamic_viscosity,
            "vapor_pressure": s.oil.vapor_pressure,
        },
        "tank": tank,
        "breach": breach,
        "environment": env,
    }


def serialize(s: Scenario) -> str:
    """YAML text that load_scenario reads back to an equal Scenario."""
    return yaml.safe_dump(to_mapping(s), sort_keys=False)


def dump_scenario(s: Scenario, path: str | Path) -> None:
    Path(path).write_text(serialize(s), encoding="utf-8")
